"""Subgyrogroups: criteria, generation, canonical decompositions, translates and covers.

Subsets of a finite carrier are Python ``int`` bitmasks (bit ``i`` set means
element ``i`` is a member).  Subsets of a continuous carrier are explicit
finite point lists, or a :class:`Region` when membership is a predicate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import EXHAUSTIVE, FiniteGyrogroup, Gyrogroup, _gyr, as_mode
from .report import Check, PreconditionError, Verdict, VerificationReport


class PartialClosureError(PreconditionError):
    """Generation on a continuous carrier ran past its element budget."""


# ---------------------------------------------------------------------------
# bitmask helpers


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << int(e)
    return m


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def parse_subset(text: str, n: int | None = None) -> int:
    """``"0,2,5"``, ``"{0,2,5}"`` or ``"0x25"`` to a bitmask."""
    text = text.strip()
    body = text[1:-1].strip() if text.startswith("{") and text.endswith("}") else text
    try:
        if body.lower().startswith("0x"):
            m = int(body, 16)
        elif body == "":
            m = 0
        else:
            m = mask_of(int(t) for t in body.split(","))
    except ValueError:
        raise PreconditionError(f"cannot parse subset {text!r}") from None
    if n is not None and m >> n:
        raise PreconditionError(f"subset {text!r} has members outside [0, {n})")
    return m


def format_subset(mask: int) -> str:
    return "{" + ",".join(map(str, members(mask))) + "}"


def _image(G: FiniteGyrogroup, perm, mask: int) -> int:
    return mask_of(perm[i] for i in members(mask))


def _oplus(G: FiniteGyrogroup, A: int, B: int) -> int:
    """``A + B`` as a set."""
    t = G.table
    a, b = members(A), members(B)
    if not a or not b:
        return 0
    return mask_of(np.unique(t[np.ix_(a, b)]))


def _neg(G: FiniteGyrogroup, A: int) -> int:
    return mask_of(G.inverse[members(A)])


def translate(G: FiniteGyrogroup, g: int, S: int, side: str = "left") -> int:
    """``g + S`` (left) or ``S + g`` (right)."""
    if side == "left":
        return mask_of(G.table[g, members(S)])
    if side == "right":
        return mask_of(G.table[members(S), g])
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def oplus_sets(G: FiniteGyrogroup, A: int, B: int) -> int:
    return _oplus(G, A, B)


def negate(G: FiniteGyrogroup, A: int) -> int:
    return _neg(G, A)


# ---------------------------------------------------------------------------
# criteria


def is_subgyrogroup(G: Gyrogroup, H) -> Verdict:
    """Closure under the operation and under inverses.

    The witness is the first pair ``(a, b)`` with ``a + b`` outside H, or a
    1-tuple ``(a,)`` whose inverse is missing.
    """
    if isinstance(G, FiniteGyrogroup):
        if not H:
            raise PreconditionError("H must be non-empty")
        hs = members(H)
        for a in hs:
            for b in hs:
                if not H >> int(G.table[a, b]) & 1:
                    return Verdict(False, (a, b))
        for a in hs:
            if not H >> int(G.inverse[a]) & 1:
                return Verdict(False, (a,))
        return Verdict(True)
    hs = list(H)
    if not hs:
        raise PreconditionError("H must be non-empty")

    def inside(x):
        return any(G.close(x, h) for h in hs)

    for a in hs:
        for b in hs:
            if not inside(G.op(a, b)):
                return Verdict(False, (a, b))
    for a in hs:
        if not inside(G.inv(a)):
            return Verdict(False, (a,))
    return Verdict(True)


def is_L_subgyrogroup(G: FiniteGyrogroup, H: int) -> Verdict:
    """``gyr[a, h](H) == H`` for every ``a`` in G and ``h`` in H."""
    sub = is_subgyrogroup(G, H)
    if not sub:
        raise PreconditionError(f"H is not a subgyrogroup (witness {sub.witness})", sub.witness)
    g = G.gyrations
    for a in range(G.n):
        for h in members(H):
            if _image(G, g[a, h], H) != H:
                return Verdict(False, (a, h))
    return Verdict(True)


# ---------------------------------------------------------------------------
# generation


def generate(G: Gyrogroup, X, budget: int = 10_000):
    """The subgyrogroup generated by X.

    Iterates ``Y -> -(Y + Y) | (Y + Y)`` from ``Y0 = X | -X | {0}`` to a
    fixpoint.  Finite carriers always terminate; on continuous carriers the
    point list is capped at ``budget`` and :class:`PartialClosureError` is
    raised past it.
    """
    if isinstance(G, FiniteGyrogroup):
        if not X:
            raise PreconditionError("X must be non-empty")
        Y = X | _neg(G, X) | 1
        while True:
            S = _oplus(G, Y, Y)
            nxt = S | _neg(G, S)
            if nxt == Y:
                return Y
            Y = nxt
    pts = list(X)
    if not pts:
        raise PreconditionError("X must be non-empty")
    Y: list = []

    def add(p):
        if not any(G.close(p, q) for q in Y):
            Y.append(p)
            if len(Y) > budget:
                raise PartialClosureError(f"closure exceeded {budget} points", witness=len(Y))

    for p in pts + [G.inv(p) for p in pts] + [G.identity]:
        add(p)
    while True:
        before = len(Y)
        snapshot = list(Y)
        for a in snapshot:
            for b in snapshot:
                s = G.op(a, b)
                add(s)
                add(G.inv(s))
        if len(Y) == before:
            return Y


# ---------------------------------------------------------------------------
# canonical decomposition


@dataclass(frozen=True)
class CanonicalDecomposition:
    """Increasing chain of generated subgyrogroups and its difference blocks."""

    n: int
    enumeration: tuple[int, ...]
    chain: tuple[int, ...]
    blocks: tuple[int, ...]

    def block_of(self, g: int) -> int:
        for i, b in enumerate(self.blocks):
            if b >> g & 1:
                return i
        raise KeyError(g)

    def union(self, indices: Iterable[int]) -> int:
        m = 0
        for i in indices:
            if not 0 <= i < len(self.blocks):
                raise PreconditionError(f"block index {i} out of range")
            m |= self.blocks[i]
        return m

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "enumeration": list(self.enumeration),
            "chain": [members(m) for m in self.chain],
            "blocks": [members(m) for m in self.blocks],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CanonicalDecomposition":
        return cls(int(d["n"]), tuple(d["enumeration"]),
                   tuple(mask_of(c) for c in d["chain"]), tuple(mask_of(b) for b in d["blocks"]))


def _check_enumeration(n: int, enumeration) -> tuple[int, ...]:
    enum = tuple(int(e) for e in enumeration)
    if sorted(enum) != list(range(n)):
        raise PreconditionError(f"enumeration {enum} is not a permutation of range({n})")
    if enum[0] != 0:
        raise PreconditionError("enumeration must start with the identity 0")
    return enum


def canonical_decomposition(G: FiniteGyrogroup, enumeration: Sequence[int] | None = None
                            ) -> CanonicalDecomposition:
    """Run the chain construction against a fixed enumeration of the carrier.

    ``G_0 = <{g_0}>``.  At each later step, with ``B`` the union of the chain
    so far, stop if ``B`` is everything; otherwise adjoin the first
    enumerated element outside ``B`` and take the generated subgyrogroup.
    """
    n = G.n
    enum = _check_enumeration(n, range(n) if enumeration is None else enumeration)
    full = full_mask(n)
    chain = [generate(G, 1 << enum[0])]
    while True:
        B = 0
        for c in chain:
            B |= c
        if B == full:
            break
        nxt = next(e for e in enum if not B >> e & 1)
        chain.append(generate(G, B | 1 << nxt))
    blocks = []
    seen = 0
    for c in chain:
        blocks.append(c & ~seen)
        seen |= c
    return CanonicalDecomposition(n, enum, tuple(chain), tuple(blocks))


def verify_decomposition(G: FiniteGyrogroup, dec: CanonicalDecomposition) -> VerificationReport:
    """Exhaustively re-check the structural properties of a decomposition."""
    chain, blocks = dec.chain, dec.blocks
    full = full_mask(G.n)
    checks = []

    w = next(((i,) for i, c in enumerate(chain) if not c or not is_subgyrogroup(G, c)), None)
    checks.append(Check("chain-subgyrogroups", w is None, w, len(chain)))

    w = None
    for i in range(len(chain)):
        for j in range(i + 1, len(chain)):
            if w is None and (chain[i] & ~chain[j] or chain[i] == chain[j]):
                w = (i, j)
    checks.append(Check("chain-strict", w is None, w, len(chain) * (len(chain) - 1) // 2))

    w = None
    acc = 0
    for i, c in enumerate(chain):
        acc |= blocks[i] if i < len(blocks) else 0
        if w is None and acc != c:
            w = (i,)
    if len(blocks) != len(chain) and w is None:
        w = (min(len(blocks), len(chain)),)
    checks.append(Check("chain-union-of-blocks", w is None, w, len(chain)))

    w = None
    acc = 0
    for i, b in enumerate(blocks):
        if w is None and (acc & b or not b):
            w = (i,)
        acc |= b
    if w is None and acc != full:
        w = (members(full & ~acc)[0],)
    checks.append(Check("blocks-partition", w is None, w, len(blocks)))

    w = None
    cases = 0
    for a, Ha in enumerate(blocks):
        for b in range(a + 1, len(blocks)):
            Hb = blocks[b]
            for g in members(Ha):
                cases += 1
                if w is None and (translate(G, g, Hb) != Hb or translate(G, g, Hb, "right") != Hb):
                    w = (g, b)
    checks.append(Check("block-translation", w is None, w, cases))

    w = next(((i,) for i, b in enumerate(blocks) if _neg(G, b) != b), None)
    checks.append(Check("block-symmetric", w is None, w, len(blocks)))
    notes = ("chain cardinalities and cofinal-union sizes are infinite-cardinal statements; not checked",)
    return VerificationReport(tuple(checks), notes)


def translate_defect(G: FiniteGyrogroup, dec: CanonicalDecomposition, A: Iterable[int],
                     g: int, h: int) -> tuple[int, bool]:
    """``D = (h + (g + H_A)) \\ H_A`` and whether D lies in the larger of the chain members of g, h."""
    HA = dec.union(A)
    D = translate(G, h, translate(G, g, HA)) & ~HA
    top = max(dec.block_of(g), dec.block_of(h))
    return D, (D & ~dec.chain[top]) == 0


# ---------------------------------------------------------------------------
# covers


@dataclass(frozen=True)
class CoverCertificate:
    U: int
    A: int
    size: int
    exact: bool

    def to_dict(self) -> dict:
        return {"U": members(self.U), "A": members(self.A), "size": self.size, "exact": self.exact}


def _translates(G: FiniteGyrogroup, U: int) -> list[int]:
    return [translate(G, a, U) for a in range(G.n)]


def _greedy_cover(n: int, sets: list[int]) -> list[int]:
    full, covered, chosen = full_mask(n), 0, []
    while covered != full:
        best = max(range(len(sets)), key=lambda i: (popcount(sets[i] & ~covered), -i))
        chosen.append(best)
        covered |= sets[best]
    return chosen


def _exact_cover(n: int, sets: list[int], upper: list[int]) -> list[int]:
    """Minimum set cover by depth-first branch and bound on the lowest uncovered point."""
    full = full_mask(n)
    best = list(upper)
    containing = [[i for i, s in enumerate(sets) if s >> p & 1] for p in range(n)]
    biggest = max(popcount(s) for s in sets)

    def rec(covered: int, chosen: list[int]):
        nonlocal best
        if covered == full:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        missing = popcount(full & ~covered)
        if len(chosen) + -(-missing // biggest) >= len(best):
            return
        p = (~covered & full & -(~covered & full)).bit_length() - 1
        for i in containing[p]:
            chosen.append(i)
            rec(covered | sets[i], chosen)
            chosen.pop()

    rec(0, [])
    return best


def covering_number(G: FiniteGyrogroup, U: int, exact_limit: int = 20) -> CoverCertificate:
    """A smallest A with ``A + U = G``; greedy (flagged inexact) above ``exact_limit``."""
    if not U:
        raise PreconditionError("U must be non-empty")
    if not U & 1:
        raise PreconditionError("U must contain the identity")
    sets = _translates(G, U)
    greedy = _greedy_cover(G.n, sets)
    exact = G.n <= exact_limit
    chosen = _exact_cover(G.n, sets, greedy) if exact else greedy
    A = mask_of(chosen)
    if _oplus(G, A, U) != full_mask(G.n):
        raise AssertionError("cover certificate failed re-verification")
    return CoverCertificate(U, A, popcount(A), exact)


def bounded_cover_for_sub(G: FiniteGyrogroup, H: int, B: int, V: int, W: int) -> int:
    """Shrink a cover ``B + V = G`` of the whole gyrogroup to a cover ``A + W = H`` of H.

    For each ``c`` in B whose translate ``c + V`` meets H, pick the least
    element of ``(c + V) & H``; those picks form A.
    """
    full = full_mask(G.n)
    sub = is_subgyrogroup(G, H)
    if not sub:
        raise PreconditionError("H is not a subgyrogroup", witness=sub.witness)
    if _oplus(G, B, V) != full:
        raise PreconditionError("B + V does not cover G", witness=members(full & ~_oplus(G, B, V)))
    VV = _oplus(G, V, V) & H
    if VV & ~W:
        raise PreconditionError("(V + V) & H is not inside W", witness=members(VV & ~W))
    if W & ~H:
        raise PreconditionError("W is not inside H", witness=members(W & ~H))
    A = 0
    for c in members(B):
        hit = translate(G, c, V) & H
        if hit:
            A |= hit & -hit
    if _oplus(G, A, W) != H:
        raise AssertionError(f"A + W != H for A = {format_subset(A)}")
    return A


def greedy_disjoint_set(G: FiniteGyrogroup, V: int) -> int:
    """A maximal A whose translates ``a + V`` are pairwise disjoint, built in index order."""
    A, used = 0, 0
    for a in range(G.n):
        t = translate(G, a, V)
        if not t & used:
            A |= 1 << a
            used |= t
    return A


# ---------------------------------------------------------------------------
# gyration-invariant sets


@dataclass(frozen=True)
class Region:
    """A subset of a continuous carrier known by a membership test and sample points."""

    contains: Callable
    points: tuple


def disk_region(G, radius: float, k: int = 64) -> Region:
    """``{|x| <= radius}`` in the Moebius disk, sampled on its boundary circle and centre."""
    from .models import MobiusPoint

    pts = [G.identity] + [MobiusPoint.of(radius * np.exp(2j * np.pi * i / k)) for i in range(k)]
    slack = radius * G.tolerance + G.tolerance
    return Region(lambda x: abs(x) <= radius + slack, tuple(pts))


def gyr_invariant_set(G: Gyrogroup, U, mode=EXHAUSTIVE) -> Verdict:
    """Whether every gyration maps U onto itself; the witness is a pair ``(x, y)``."""
    mode = as_mode(mode)
    if isinstance(G, FiniteGyrogroup) and mode.exhaustive:
        g = G.gyrations
        for x in range(G.n):
            for y in range(G.n):
                if _image(G, g[x, y], U) != U:
                    return Verdict(False, (x, y))
        return Verdict(True, note="exhaustive")
    if mode.exhaustive:
        raise PreconditionError(f"{G.name} needs sampled mode")
    rng = np.random.default_rng(mode.seed)
    xs, ys = G.sample(rng, mode.count), G.sample(rng, mode.count)
    if isinstance(U, Region):
        for x, y in zip(xs, ys):
            for u in U.points:
                if not U.contains(_gyr(G, x, y, u)):
                    return Verdict(False, (x, y))
                pre = _gyr(G, y, x, u)
                if not (U.contains(pre) and G.close(_gyr(G, x, y, pre), u)):
                    return Verdict(False, (x, y))
        return Verdict(True, note=f"sampled {mode.count} gyrations on {len(U.points)} points")
    pts = list(U)
    for x, y in zip(xs, ys):
        imgs = [_gyr(G, x, y, u) for u in pts]
        if not all(any(G.close(i, p) for p in pts) for i in imgs):
            return Verdict(False, (x, y))
        if not all(any(G.close(i, p) for i in imgs) for p in pts):
            return Verdict(False, (x, y))
    return Verdict(True, note=f"sampled {mode.count} gyrations")


def symmetrize(G: Gyrogroup, U):
    """``U | -U``."""
    if isinstance(G, FiniteGyrogroup):
        return U | _neg(G, U)
    out = list(U)
    for u in U:
        v = G.inv(u)
        if not any(G.close(v, w) for w in out):
            out.append(v)
    return out


def open_L_subgyrogroup(model, U: int) -> tuple[int, VerificationReport]:
    """Grow a gyration-invariant open neighbourhood U of 0 into an open L-subgyrogroup.

    ``H_0 = U`` and ``H_{k+1} = -(H_k + H_k) | (H_k + H_k)``; the union is
    returned with a report re-checking closure, invariance and openness.
    """
    G, tau = model.gyro, model.topology
    if not U & 1:
        raise PreconditionError("U must contain the identity")
    if not tau.is_open(U):
        raise PreconditionError(f"U = {format_subset(U)} is not open", witness=members(U))
    inv = gyr_invariant_set(G, U)
    if not inv:
        raise PreconditionError("U is not invariant under all gyrations", witness=inv.witness)
    H = U
    while True:
        S = _oplus(G, H, H)
        nxt = S | _neg(G, S) | H
        if nxt == H:
            break
        H = nxt
    sub = is_subgyrogroup(G, H)
    checks = [Check("subgyrogroup", sub.ok, sub.witness, popcount(H) ** 2)]
    gi = gyr_invariant_set(G, H)
    checks.append(Check("gyr-invariant", gi.ok, gi.witness, G.n * G.n))
    if sub:
        L = is_L_subgyrogroup(G, H)
        checks.append(Check("L-subgyrogroup", L.ok, L.witness, G.n * popcount(H)))
    checks.append(Check("open", tau.is_open(H), None if tau.is_open(H) else tuple(members(H)), 1))
    return H, VerificationReport(tuple(checks))

