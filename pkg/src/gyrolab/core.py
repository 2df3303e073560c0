"""Gyrogroup contract, derived gyrations and the axiom/identity verifiers.

A gyrogroup is described by its binary operation, identity and inverse.  The
gyration is always available through the left-cancellation formula

    gyr[x, y](z) = -(x + y) + (x + (y + z))

and models that know a closed form (``native_gyr``) have it cross-checked
against the formula by :func:`check_identities`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Iterable, Iterator, Sequence

import numpy as np

from .report import Check, DomainError, PreconditionError, Verdict, VerificationReport


@dataclass(frozen=True)
class Mode:
    """How a checker walks the carrier: every tuple, or ``count`` seeded draws."""

    kind: str = "exhaustive"
    count: int = 0
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown mode {self.kind!r}")
        if self.kind == "sampled":
            if self.seed is None:
                raise ValueError("sampled mode needs an explicit seed")
            if self.count <= 0:
                raise ValueError("sampled mode needs a positive count")

    @property
    def exhaustive(self) -> bool:
        return self.kind == "exhaustive"


EXHAUSTIVE = Mode()


def sampled(count: int, seed: int | None) -> Mode:
    return Mode("sampled", count, seed)


def as_mode(mode) -> Mode:
    if mode is None or mode == "exhaustive":
        return EXHAUSTIVE
    if isinstance(mode, Mode):
        return mode
    raise ValueError(f"cannot interpret {mode!r} as a mode")


class Gyrogroup:
    """Contract every model implements.

    Subclasses provide ``op``, ``inv`` and ``identity``.  Finite models return
    their carrier from :meth:`elements`; continuous ones return ``None`` and
    implement :meth:`sample` instead.
    """

    name: str = "gyrogroup"
    identity: Any = 0
    tolerance: float = 0.0
    # Triples worth trying first when hunting for non-associativity.
    witness_hints: tuple = ()

    def op(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    native_gyr: Callable | None = None

    def elements(self) -> Sequence | None:
        return None

    @property
    def is_finite(self) -> bool:
        return self.elements() is not None

    def validate(self, x) -> None:
        pass

    def close(self, a, b) -> bool:
        return a == b

    def sample(self, rng: np.random.Generator, count: int) -> list:
        elems = self.elements()
        if elems is None:
            raise NotImplementedError(f"{self.name} cannot be sampled")
        idx = rng.integers(0, len(elems), size=count)
        return [elems[i] for i in idx]

    def encode(self, x):
        return x

    def decode(self, obj):
        return obj


def derived_gyr(G: Gyrogroup, x, y, z):
    return G.op(G.inv(G.op(x, y)), G.op(x, G.op(y, z)))


def _gyr(G: Gyrogroup, x, y, z):
    if G.native_gyr is not None:
        return G.native_gyr(x, y, z)
    return derived_gyr(G, x, y, z)


def gyr(G: Gyrogroup, x, y, z):
    """Apply gyr[x, y] to z, preferring a model's closed form when it has one."""
    for e in (x, y, z):
        G.validate(e)
    return _gyr(G, x, y, z)


class FiniteGyrogroup(Gyrogroup):
    """Carrier ``{0, ..., n-1}`` with a Cayley table; 0 is the identity.

    Row ``i`` of the table is the left translation by ``i``.  Construction
    checks that every row and column is a permutation and that row/column 0
    are the identity; the gyrogroup axioms are checked separately.
    """

    tolerance = 0.0

    def __init__(self, table, name: str | None = None):
        t = np.array(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise PreconditionError(f"table must be a non-empty square array, got shape {t.shape}")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            bad = tuple(int(v) for v in np.argwhere((t < 0) | (t >= n))[0])
            raise PreconditionError(f"entry at {bad} outside [0, {n})", witness=bad)
        ident = np.arange(n)
        for i in range(n):
            if len(np.unique(t[i])) != n:
                raise PreconditionError(f"row {i} is not a permutation", witness=("row", i))
        for j in range(n):
            if len(np.unique(t[:, j])) != n:
                raise PreconditionError(f"column {j} is not a permutation", witness=("column", j))
        if not (t[0] == ident).all():
            raise PreconditionError("row 0 is not the identity permutation", witness=("row", 0))
        if not (t[:, 0] == ident).all():
            raise PreconditionError("column 0 is not the identity permutation", witness=("column", 0))
        t.setflags(write=False)
        self.table = t
        self.n = n
        self.name = name or f"table{n}"
        self.identity = 0
        inv = np.argmin(t, axis=1)  # position of the 0 in each row
        inv.setflags(write=False)
        self.inverse = inv

    def __repr__(self):
        return f"FiniteGyrogroup({self.name!r}, n={self.n})"

    def __eq__(self, other):
        return isinstance(other, FiniteGyrogroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def op(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return int(self.inverse[a])

    def elements(self):
        return range(self.n)

    def validate(self, x):
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self.n:
            raise DomainError(f"{x!r} is not an element of {self.name}")

    @cached_property
    def gyrations(self) -> np.ndarray:
        """``g[x, y, z] = gyr[x, y](z)`` for the whole carrier, shape (n, n, n)."""
        t = self.table
        xy = t  # x + y
        y_z = t  # y + z, indexed [y, z]
        x_yz = t[np.arange(self.n)[:, None, None], y_z[None, :, :]]  # x + (y + z)
        g = t[self.inverse[xy][:, :, None], x_yz]
        g.setflags(write=False)
        return g

    def gyration(self, x: int, y: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.gyrations[x, y])

    def is_associative(self) -> bool:
        return is_group(self).ok


def _first(mask: np.ndarray) -> tuple | None:
    """Lexicographically first index where ``mask`` is False."""
    bad = np.argwhere(~mask)
    if len(bad) == 0:
        return None
    return tuple(int(v) for v in bad[0])


def _check(name, ok_mask, note=None, witness_map=None) -> Check:
    w = _first(ok_mask)
    if w is not None and witness_map is not None:
        w = witness_map(w)
    return Check(name, w is None, w, int(ok_mask.size), note)


# ---------------------------------------------------------------------------
# generic tuple walking


def _require_mode(G: Gyrogroup, mode: Mode):
    if mode.exhaustive and not G.is_finite:
        raise PreconditionError(f"{G.name} has a continuous carrier; use sampled mode")


def _tuples(G: Gyrogroup, mode: Mode, arity: int, rng) -> Iterator[tuple]:
    if mode.exhaustive:
        return itertools.product(G.elements(), repeat=arity)
    cols = [G.sample(rng, mode.count) for _ in range(arity)]
    return zip(*cols)


def _scan(name: str, cases: Iterable[tuple], pred: Callable[..., bool], note=None) -> Check:
    count = 0
    witness = None
    for case in cases:
        count += 1
        if witness is None and not pred(*case):
            witness = case
    return Check(name, witness is None, witness, count, note)


def _tol_note(G: Gyrogroup) -> str | None:
    return f"tolerance {G.tolerance:g}" if G.tolerance else None


# ---------------------------------------------------------------------------
# axioms


def check_axioms(G: Gyrogroup, mode=EXHAUSTIVE) -> VerificationReport:
    """Check G1-G4; finite carriers also get exhaustive uniqueness scans."""
    mode = as_mode(mode)
    _require_mode(G, mode)
    if isinstance(G, FiniteGyrogroup) and mode.exhaustive:
        return _finite_axioms(G)

    rng = None if mode.exhaustive else np.random.default_rng(mode.seed)
    e = G.identity
    note = _tol_note(G)
    checks = [
        _scan("G1", _tuples(G, mode, 1, rng),
              lambda a: G.close(G.op(e, a), a) and G.close(G.op(a, e), a), note),
    ]
    if G.is_finite and mode.exhaustive:
        elems = list(G.elements())
        checks.append(_scan(
            "G1-unique", ((c,) for c in elems if c != e),
            lambda c: not all(G.op(c, a) == a and G.op(a, c) == a for a in elems)))
    checks.append(_scan(
        "G2", _tuples(G, mode, 1, rng),
        lambda a: G.close(G.op(G.inv(a), a), e) and G.close(G.op(a, G.inv(a)), e), note))
    if G.is_finite and mode.exhaustive:
        checks.append(_scan(
            "G2-unique", ((a,) for a in elems),
            lambda a: sum(1 for b in elems if G.op(b, a) == e and G.op(a, b) == e) == 1))

    def g3(x, y, z):
        return G.close(G.op(x, G.op(y, z)), G.op(G.op(x, y), _gyr(G, x, y, z)))

    checks.append(_scan("G3", _tuples(G, mode, 3, rng), g3, note))

    if G.is_finite and mode.exhaustive:
        def bij(x, y):
            images = [_gyr(G, x, y, z) for z in elems]
            return len(set(images)) == len(elems)
        checks.append(_scan("G3-bijective", _tuples(G, mode, 2, rng), bij))
    else:
        # A map with a two-sided inverse is a bijection; gyr[y, x] is the
        # candidate inverse and both compositions are tested pointwise.
        def bij(x, y, z):
            return (G.close(_gyr(G, y, x, _gyr(G, x, y, z)), z)
                    and G.close(_gyr(G, x, y, _gyr(G, y, x, z)), z))
        checks.append(_scan("G3-bijective", _tuples(G, mode, 3, rng), bij,
                            "two-sided inverse gyr[y,x] tested on samples"))

    def hom(x, y, a, b):
        return G.close(_gyr(G, x, y, G.op(a, b)), G.op(_gyr(G, x, y, a), _gyr(G, x, y, b)))

    checks.append(_scan("G3-automorphism", _tuples(G, mode, 4, rng), hom, note))
    checks.append(_scan(
        "G4", _tuples(G, mode, 3, rng),
        lambda x, y, z: G.close(_gyr(G, G.op(x, y), y, z), _gyr(G, x, y, z)), note))
    return VerificationReport(tuple(checks))


def _finite_axioms(G: FiniteGyrogroup) -> VerificationReport:
    t, n, inv = G.table, G.n, G.inverse
    ar = np.arange(n)
    checks = [_check("G1", (t[0] == ar) & (t[:, 0] == ar))]
    two_sided = (t == ar[None, :]).all(axis=1) & (t.T == ar[None, :]).all(axis=1)
    two_sided[0] = False
    checks.append(_check("G1-unique", ~two_sided))
    checks.append(_check("G2", (t[inv, ar] == 0) & (t[ar, inv] == 0)))
    both_zero = (t == 0) & (t.T == 0)
    checks.append(_check("G2-unique", both_zero.sum(axis=1) == 1))

    g = G.gyrations
    lhs = t[ar[:, None, None], t[None, :, :]]  # x + (y + z)
    rhs = t[t[:, :, None], g]  # (x + y) + gyr[x,y](z)
    checks.append(_check("G3", lhs == rhs))
    srt = np.sort(g, axis=2)
    checks.append(_check("G3-bijective", (srt == ar).all(axis=2)))

    hom = np.ones((n, n, n, n), dtype=bool)
    for x in range(n):
        gx = g[x]  # [y, z]
        # gyr[x,y](a + b) == gyr[x,y](a) + gyr[x,y](b)
        left = gx[:, t]  # [y, a, b]
        right = t[gx[:, :, None], gx[:, None, :]]
        hom[x] = left == right
    checks.append(_check("G3-automorphism", hom))
    checks.append(_check("G4", g[t, ar[None, :]] == g))
    return VerificationReport(tuple(checks))


# ---------------------------------------------------------------------------
# derived identities


def check_identities(G: Gyrogroup, mode=EXHAUSTIVE) -> VerificationReport:
    """Left/right cancellation, the gyr-corrected cancellation, and native-gyr agreement."""
    mode = as_mode(mode)
    _require_mode(G, mode)
    rng = None if mode.exhaustive else np.random.default_rng(mode.seed)
    note = _tol_note(G)
    op, inv = G.op, G.inv

    if isinstance(G, FiniteGyrogroup) and mode.exhaustive:
        t, n, iv, g = G.table, G.n, G.inverse, G.gyrations
        ar = np.arange(n)
        x, y = ar[:, None], ar[None, :]
        checks = [
            _check("left-cancellation", t[iv[x], t[x, y]] == y),
            _check("right-cancellation", t[t[x, iv[y]], g[x, iv[y], y]] == x),
            _check("gyr-cancellation", t[t[x, g[x, y, iv[y]]], y] == x),
        ]
        return VerificationReport(tuple(checks))

    checks = [
        _scan("left-cancellation", _tuples(G, mode, 2, rng),
              lambda x, y: G.close(op(inv(x), op(x, y)), y), note),
        _scan("right-cancellation", _tuples(G, mode, 2, rng),
              lambda x, y: G.close(op(op(x, inv(y)), _gyr(G, x, inv(y), y)), x), note),
        _scan("gyr-cancellation", _tuples(G, mode, 2, rng),
              lambda x, y: G.close(op(op(x, _gyr(G, x, y, inv(y))), y), x), note),
    ]
    if G.native_gyr is not None:
        checks.append(_scan(
            "native-gyr", _tuples(G, mode, 3, rng),
            lambda x, y, z: G.close(G.native_gyr(x, y, z), derived_gyr(G, x, y, z)), note))
    return VerificationReport(tuple(checks))


def is_group(G: Gyrogroup, mode=EXHAUSTIVE) -> Verdict:
    """Associativity on every tested triple; the first failing triple otherwise."""
    mode = as_mode(mode)
    _require_mode(G, mode)
    if isinstance(G, FiniteGyrogroup) and mode.exhaustive:
        t = G.table
        ar = np.arange(G.n)
        ok = t[ar[:, None, None], t[None, :, :]] == t[t[:, :, None], ar[None, None, :]]
        w = _first(ok)
        return Verdict(w is None, w)
    rng = None if mode.exhaustive else np.random.default_rng(mode.seed)
    c = _scan("associativity", _tuples(G, mode, 3, rng),
              lambda x, y, z: G.close(G.op(x, G.op(y, z)), G.op(G.op(x, y), z)))
    return Verdict(c.passed, c.witness)


def check_homomorphism(f: Callable, G1: Gyrogroup, G2: Gyrogroup, mode=EXHAUSTIVE,
                       bijective: bool = False) -> VerificationReport:
    """``f(x + y) == f(x) + f(y)``; with ``bijective`` also injectivity/surjectivity (finite only)."""
    mode = as_mode(mode)
    _require_mode(G1, mode)
    rng = None if mode.exhaustive else np.random.default_rng(mode.seed)
    for x in (G1.elements() if mode.exhaustive else ()):
        G2.validate(f(x))
    checks = [_scan(
        "homomorphism", _tuples(G1, mode, 2, rng),
        lambda x, y: G2.close(f(G1.op(x, y)), G2.op(f(x), f(y))), _tol_note(G2))]
    if bijective:
        if not (G1.is_finite and G2.is_finite):
            raise PreconditionError("bijectivity is only decidable on finite carriers")
        seen: dict = {}
        collision = None
        for x in G1.elements():
            fx = f(x)
            if fx in seen and collision is None:
                collision = (seen[fx], x)
            seen.setdefault(fx, x)
        checks.append(Check("injective", collision is None, collision, len(G1.elements())))
        missing = next(((b,) for b in G2.elements() if b not in seen), None)
        checks.append(Check("surjective", missing is None, missing, len(G2.elements())))
    return VerificationReport(tuple(checks))
