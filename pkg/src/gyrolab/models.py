"""Concrete gyrogroups: Moebius disk, Einstein ball, table-backed finite models, products."""

from __future__ import annotations

import itertools
import math
import re
import warnings
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

import numpy as np

from .core import FiniteGyrogroup, Gyrogroup, _gyr, is_group
from .report import DomainError, PreconditionError

BOUNDARY_GUARD = 1e-12
DEFAULT_TOLERANCE = 1e-9
SAMPLE_RADIUS = 0.9


def _close(a: float, b: float, dist: float, tol: float) -> bool:
    return dist <= tol + tol * max(a, b)


# ---------------------------------------------------------------------------
# Moebius disk


@dataclass(frozen=True, slots=True)
class MobiusPoint:
    """A point of the open complex unit disk."""

    re: float
    im: float

    def __post_init__(self):
        if math.hypot(self.re, self.im) >= 1.0 - BOUNDARY_GUARD:
            raise DomainError(f"({self.re}, {self.im}) is not inside the unit disk")

    @classmethod
    def of(cls, z: complex) -> "MobiusPoint":
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)


def mobius_add(a: MobiusPoint, b: MobiusPoint) -> MobiusPoint:
    za, zb = a.z, b.z
    den = 1 + za.conjugate() * zb
    if abs(den) < 1e-15:
        raise DomainError(f"degenerate denominator adding {a} and {b}")
    return MobiusPoint.of((za + zb) / den)


def gyration_factor(a: MobiusPoint, b: MobiusPoint) -> complex:
    """The unimodular factor (1 + a conj(b)) / (1 + conj(a) b) by which gyr[a, b] rotates."""
    za, zb = a.z, b.z
    return (1 + za * zb.conjugate()) / (1 + za.conjugate() * zb)


def mobius_gyr(a: MobiusPoint, b: MobiusPoint, c: MobiusPoint) -> MobiusPoint:
    return MobiusPoint.of(gyration_factor(a, b) * c.z)


class MobiusDisk(Gyrogroup):
    name = "mobius"
    identity = MobiusPoint(0.0, 0.0)
    witness_hints = ((MobiusPoint(0.5, 0.0), MobiusPoint(0.0, 0.5), MobiusPoint(-0.5, 0.0)),)

    def __init__(self, tolerance: float = DEFAULT_TOLERANCE, radius: float = SAMPLE_RADIUS):
        self.tolerance = tolerance
        self.radius = radius

    def op(self, a, b):
        return mobius_add(a, b)

    def inv(self, a):
        return MobiusPoint(-a.re, -a.im)

    def native_gyr(self, a, b, c):
        return mobius_gyr(a, b, c)

    def validate(self, x):
        if not isinstance(x, MobiusPoint):
            raise DomainError(f"{x!r} is not a MobiusPoint")

    def close(self, a, b):
        return _close(abs(a), abs(b), math.hypot(a.re - b.re, a.im - b.im), self.tolerance)

    def sample(self, rng, count):
        r = self.radius * np.sqrt(rng.random(count))
        theta = rng.uniform(0.0, 2 * math.pi, count)
        return [MobiusPoint(float(x), float(y)) for x, y in zip(r * np.cos(theta), r * np.sin(theta))]

    def encode(self, x):
        return [x.re, x.im]

    def decode(self, obj):
        if isinstance(obj, (int, float, complex)):
            return MobiusPoint.of(obj)
        return MobiusPoint(float(obj[0]), float(obj[1]))


# ---------------------------------------------------------------------------
# Einstein ball


@dataclass(frozen=True, slots=True)
class EinsteinVector:
    """A relativistically admissible velocity: ``|v| < c``."""

    v: tuple[float, float, float]
    c: float = 1.0

    def __post_init__(self):
        if len(self.v) != 3:
            raise DomainError("Einstein velocities are 3-vectors")
        if not self.c > 0:
            raise DomainError(f"speed bound must be positive, got {self.c}")
        if math.sqrt(sum(x * x for x in self.v)) >= self.c * (1.0 - BOUNDARY_GUARD):
            raise DomainError(f"{self.v} is not inside the ball of radius {self.c}")

    @property
    def norm(self) -> float:
        return math.sqrt(sum(x * x for x in self.v))


def _dot(u, v) -> float:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def gamma(u: EinsteinVector) -> float:
    return 1.0 / math.sqrt(1.0 - _dot(u.v, u.v) / (u.c * u.c))


def einstein_add(u: EinsteinVector, v: EinsteinVector) -> EinsteinVector:
    if u.c != v.c:
        raise ValueError(f"mismatched speed bounds {u.c} and {v.c}")
    c2 = u.c * u.c
    uv = _dot(u.v, v.v)
    g = gamma(u)
    k = g / (1.0 + g) * uv / c2
    scale = 1.0 / (1.0 + uv / c2)
    w = tuple(scale * (a + b / g + k * a) for a, b in zip(u.v, v.v))
    return EinsteinVector(w, u.c)


class EinsteinBall(Gyrogroup):
    name = "einstein"

    def __init__(self, c: float = 1.0, tolerance: float = DEFAULT_TOLERANCE,
                 radius: float = SAMPLE_RADIUS):
        self.c = c
        self.tolerance = tolerance
        self.radius = radius
        self.identity = EinsteinVector((0.0, 0.0, 0.0), c)
        h = 0.5 * c
        self.witness_hints = ((EinsteinVector((h, 0.0, 0.0), c), EinsteinVector((0.0, h, 0.0), c),
                               EinsteinVector((0.0, 0.0, h), c)),)

    def op(self, a, b):
        return einstein_add(a, b)

    def inv(self, a):
        return EinsteinVector(tuple(-x for x in a.v), a.c)

    def validate(self, x):
        if not isinstance(x, EinsteinVector):
            raise DomainError(f"{x!r} is not an EinsteinVector")
        if x.c != self.c:
            raise ValueError(f"element speed bound {x.c} differs from model's {self.c}")

    def close(self, a, b):
        d = math.sqrt(sum((x - y) ** 2 for x, y in zip(a.v, b.v)))
        return _close(a.norm, b.norm, d, self.tolerance)

    def sample(self, rng, count):
        d = rng.normal(size=(count, 3))
        d /= np.linalg.norm(d, axis=1)[:, None]
        r = self.radius * self.c * np.cbrt(rng.random(count))
        pts = d * r[:, None]
        return [EinsteinVector(tuple(float(x) for x in p), self.c) for p in pts]

    def encode(self, x):
        return list(x.v)

    def decode(self, obj):
        return EinsteinVector(tuple(float(t) for t in obj), self.c)


# ---------------------------------------------------------------------------
# finite tables


_INT = re.compile(r"^\d+$")


def _parse_lines(data) -> list[tuple[int, str]]:
    if isinstance(data, bytes):
        data = data.decode("ascii")
    out = []
    for lineno, line in enumerate(data.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        out.append((lineno, s))
    return out


def load_table(data, name: str | None = None) -> FiniteGyrogroup:
    """Parse the ``.gyro`` text format.

    Line 1 holds ``n``; the next ``n`` lines hold the rows of the table.
    Blank lines and lines starting with ``#`` are ignored.  Only the table
    invariants are checked here, not the gyrogroup axioms.
    """
    lines = _parse_lines(data)
    if not lines:
        raise PreconditionError("empty .gyro input")
    lineno, head = lines[0]
    if not _INT.match(head):
        raise PreconditionError(f"line {lineno}: expected the carrier size, got {head!r}")
    n = int(head)
    if n < 1:
        raise PreconditionError(f"line {lineno}: carrier size must be positive")
    rows = lines[1:]
    if len(rows) != n:
        raise PreconditionError(f"expected {n} table rows, found {len(rows)}")
    table = []
    for lineno, s in rows:
        toks = s.split()
        if len(toks) != n or not all(_INT.match(t) for t in toks):
            raise PreconditionError(f"line {lineno}: expected {n} non-negative integers")
        table.append([int(t) for t in toks])
    return FiniteGyrogroup(table, name=name)


def dump_table(G: FiniteGyrogroup) -> bytes:
    rows = "\n".join(" ".join(str(int(v)) for v in row) for row in G.table)
    return f"{G.n}\n{rows}\n".encode("ascii")


def group_as_gyrogroup(table, name: str | None = None) -> FiniteGyrogroup:
    """Wrap an associative group table; its derived gyrations are all trivial."""
    G = FiniteGyrogroup(table, name=name)
    v = is_group(G)
    if not v.ok:
        raise PreconditionError(f"table is not associative at {v.witness}", witness=v.witness)
    return G


def cyclic(n: int) -> FiniteGyrogroup:
    ar = np.arange(n)
    return group_as_gyrogroup((ar[:, None] + ar[None, :]) % n, name=f"z{n}")


def klein() -> FiniteGyrogroup:
    ar = np.arange(4)
    return group_as_gyrogroup(ar[:, None] ^ ar[None, :], name="klein")


# Order-8 gyrogroup with one non-trivial gyration (the transposition pairs
# (2 3)(6 7)); obtained as a conjugation-invariant transversal of an order-2
# subgroup in Z2 x D4 and checked with check_axioms.
G8_TABLE = (
    (0, 1, 2, 3, 4, 5, 6, 7),
    (1, 0, 3, 2, 5, 4, 7, 6),
    (2, 3, 0, 1, 6, 7, 4, 5),
    (3, 2, 5, 4, 7, 6, 1, 0),
    (4, 5, 6, 7, 0, 1, 2, 3),
    (5, 4, 7, 6, 1, 0, 3, 2),
    (6, 7, 4, 5, 2, 3, 0, 1),
    (7, 6, 1, 0, 3, 2, 5, 4),
)


def g8() -> FiniteGyrogroup:
    return FiniteGyrogroup(G8_TABLE, name="g8")


K16_RESOURCE = "k16.gyro"


def k16(warn: bool = True) -> FiniteGyrogroup | None:
    """The shipped 16-element gyrogroup, or ``None`` if the data file is absent."""
    try:
        data = resources.files("gyrolab.data").joinpath(K16_RESOURCE).read_bytes()
    except (FileNotFoundError, ModuleNotFoundError):
        if warn:
            warnings.warn("k16.gyro data file not found; K16 suites are skipped", stacklevel=2)
        return None
    return load_table(data, name="k16")


# ---------------------------------------------------------------------------
# products


class ProductGyrogroup(Gyrogroup):
    """Finite direct product; elements are tuples with one coordinate per factor."""

    def __init__(self, factors: Sequence[Gyrogroup]):
        if len(factors) == 0:
            raise PreconditionError("a product needs at least one factor")
        self.factors = tuple(factors)
        self.name = "x".join(f.name for f in self.factors)
        self.identity = tuple(f.identity for f in self.factors)
        self.tolerance = max(f.tolerance for f in self.factors)
        self.witness_hints = tuple(
            tuple(tuple(h[i] if k == j else f.identity for k, f in enumerate(self.factors))
                  for i in range(3))
            for j, f0 in enumerate(self.factors) for h in f0.witness_hints)

    def op(self, a, b):
        return tuple(f.op(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def native_gyr(self, a, b, c):
        return tuple(_gyr(f, x, y, z) for f, x, y, z in zip(self.factors, a, b, c))

    def elements(self):
        parts = [f.elements() for f in self.factors]
        if any(p is None for p in parts):
            return None
        return list(itertools.product(*parts))

    def validate(self, x):
        if not isinstance(x, tuple) or len(x) != len(self.factors):
            raise DomainError(f"{x!r} does not have arity {len(self.factors)}")
        for f, c in zip(self.factors, x):
            f.validate(c)

    def close(self, a, b):
        return all(f.close(x, y) for f, x, y in zip(self.factors, a, b))

    def sample(self, rng, count):
        cols = [f.sample(rng, count) for f in self.factors]
        return list(zip(*cols))

    def encode(self, x):
        return [f.encode(c) for f, c in zip(self.factors, x)]

    def decode(self, obj):
        return tuple(f.decode(c) for f, c in zip(self.factors, obj))


def product(factors: Sequence[Gyrogroup]) -> ProductGyrogroup:
    return ProductGyrogroup(factors)


def tabulate(G: Gyrogroup, name: str | None = None) -> FiniteGyrogroup:
    """Cayley table of a finite contract; index ``i`` is ``G.elements()[i]``, identity first."""
    elems = G.elements()
    if elems is None:
        raise PreconditionError(f"{G.name} has no finite carrier to tabulate")
    elems = list(elems)
    k = elems.index(G.identity)
    elems.insert(0, elems.pop(k))
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[G.op(a, b)] for b in elems] for a in elems]
    return FiniteGyrogroup(table, name=name or G.name)


def nonassoc_witness(G: Gyrogroup, budget: int = 1_000_000, seed: int | None = None):
    """A triple with ``x+(y+z) != (x+y)+z``, or ``None`` if none turns up within budget.

    Finite carriers are scanned exhaustively.  Continuous ones try the
    model's hint triples first and then, if a seed is given, random triples.
    """
    def bad(x, y, z):
        return not G.close(G.op(x, G.op(y, z)), G.op(G.op(x, y), z))

    if isinstance(G, FiniteGyrogroup):
        return is_group(G).witness
    if G.is_finite:
        for i, t in enumerate(itertools.product(G.elements(), repeat=3)):
            if i >= budget:
                return None
            if bad(*t):
                return t
        return None
    tried = 0
    for t in G.witness_hints:
        tried += 1
        if bad(*t):
            return t
    if seed is None:
        return None
    rng = np.random.default_rng(seed)
    remaining = max(budget - tried, 0)
    xs, ys, zs = (G.sample(rng, remaining) for _ in range(3))
    for t in zip(xs, ys, zs):
        if bad(*t):
            return t
    return None


# ---------------------------------------------------------------------------
# builtin names


def builtin(name: str) -> Gyrogroup:
    """Resolve ``mobius``, ``einstein``, ``z<n>``, ``klein``, ``g8``, ``k16``, ``product:<a>,<b>,...``."""
    name = name.strip().lower()
    if name.startswith("product:"):
        parts = [p for p in name[len("product:"):].split(",") if p]
        factors = [builtin(p) for p in parts]
        P = product(factors)
        if P.is_finite:
            return tabulate(P, name=name)
        return P
    if name == "mobius":
        return MobiusDisk()
    if name == "einstein":
        return EinsteinBall()
    if name == "klein":
        return klein()
    if name == "g8":
        return g8()
    if name == "k16":
        G = k16()
        if G is None:
            raise PreconditionError("k16 data file is not installed")
        return G
    m = re.fullmatch(r"z(\d+)", name)
    if m and int(m.group(1)) >= 1:
        return cyclic(int(m.group(1)))
    raise PreconditionError(f"unknown model {name!r}")
