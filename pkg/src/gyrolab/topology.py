"""Finite topologies as bitmask families, and the property checkers run on them.

Every point ``x`` of a finite space has a smallest open neighbourhood ``M_x``
(the intersection of all opens containing ``x``).  Most checkers reduce to
statements about these minimal opens:

* ``x`` and ``y`` can be separated iff ``M_x & M_y`` is empty;
* a family is discrete iff every ``M_x`` meets at most one member, since
  shrinking a neighbourhood never increases the number of members it meets;
* ``S`` is dense iff it meets every ``M_x``, and open iff ``M_x <= S`` for
  all ``x`` in ``S``.

Subset scans run over all ``2**n`` masks with numpy and are capped at
``SUBSET_BOUND`` points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .core import FiniteGyrogroup
from .report import BoundExceeded, Check, PreconditionError, Verdict, VerificationReport
from .subgyro import (CanonicalDecomposition, format_subset, full_mask, gyr_invariant_set,
                      mask_of, members, negate, oplus_sets, parse_subset, popcount, translate)

SUBSET_BOUND = 20


class TopologyError(PreconditionError):
    """A family of sets that is not a topology."""


class FiniteTopology:
    """Open sets on ``{0, ..., n-1}`` stored as a sorted tuple of bitmasks.

    The family is validated, never completed: it must contain the empty set
    and the carrier and be closed under pairwise unions and intersections.
    Use :func:`generate_from_subbasis` to build one from arbitrary sets.
    """

    def __init__(self, n: int, opens: Iterable[int]):
        if n < 1:
            raise TopologyError("carrier must be non-empty")
        self.n = n
        full = full_mask(n)
        ops = sorted(set(int(u) for u in opens))
        bad = [u for u in ops if u < 0 or u > full]
        if bad:
            raise TopologyError(f"set 0x{bad[0]:x} is not a subset of the carrier", witness=bad[0])
        self.opens = tuple(ops)
        self._set = frozenset(ops)
        self._validate()

    def _validate(self):
        full = full_mask(self.n)
        if 0 not in self._set:
            raise TopologyError("the empty set is not open")
        if full not in self._set:
            raise TopologyError("the carrier is not open")
        mins = []
        for x in range(self.n):
            m = full
            for u in self.opens:
                if u >> x & 1:
                    m &= u
            if m not in self._set:
                raise TopologyError(f"intersection of opens around {x} is not open",
                                    witness=("intersection", x))
            mins.append(m)
        # Every open being a union of minimal opens gives closure under
        # intersections; closure under adding one minimal open gives unions.
        for u in self.opens:
            acc = 0
            for x in members(u):
                acc |= mins[x]
            if acc != u:
                raise TopologyError(f"open set {format_subset(u)} is not a union of minimal opens",
                                    witness=("intersection", u))
            for m in set(mins):
                if u | m not in self._set:
                    raise TopologyError(f"union {format_subset(u | m)} is not open",
                                        witness=("union", u, m))
        self.minimal = tuple(mins)

    def __repr__(self):
        return f"FiniteTopology(n={self.n}, opens={len(self.opens)})"

    def __eq__(self, other):
        return isinstance(other, FiniteTopology) and self.n == other.n and self.opens == other.opens

    def __hash__(self):
        return hash((self.n, self.opens))

    @property
    def full(self) -> int:
        return full_mask(self.n)

    def is_open(self, S: int) -> bool:
        return S in self._set

    def is_closed(self, S: int) -> bool:
        return (self.full & ~S) in self._set

    @cached_property
    def distinct_minimal(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.minimal)))

    def interior(self, S: int) -> int:
        acc = 0
        for m in self.minimal:
            if m & ~S == 0:
                acc |= m
        return acc

    def closure(self, S: int) -> int:
        return self.full & ~self.interior(self.full & ~S)

    def is_dense(self, S: int) -> bool:
        return all(m & S for m in self.distinct_minimal)

    def _require_bound(self, bound: int = SUBSET_BOUND):
        if self.n > bound:
            raise BoundExceeded(f"exhaustive subset scan capped at n = {bound}, got n = {self.n}")

    @cached_property
    def _masks(self) -> np.ndarray:
        self._require_bound()
        return np.arange(1 << self.n, dtype=np.int64)

    @cached_property
    def _dense(self) -> np.ndarray:
        s = self._masks
        ok = np.ones(s.shape, dtype=bool)
        for m in self.distinct_minimal:
            ok &= (s & m) != 0
        return ok

    @cached_property
    def _open(self) -> np.ndarray:
        s = self._masks
        ok = np.ones(s.shape, dtype=bool)
        for x, m in enumerate(self.minimal):
            ok &= ((s >> x) & 1 == 0) | ((s & m) == m)
        return ok


def interior(tau: FiniteTopology, S: int) -> int:
    return tau.interior(S)


def closure(tau: FiniteTopology, S: int) -> int:
    return tau.closure(S)


def is_dense(tau: FiniteTopology, S: int) -> bool:
    return tau.is_dense(S)


# ---------------------------------------------------------------------------
# constructors and .topo files


def discrete(n: int) -> FiniteTopology:
    return from_minimal_opens(n, [1 << x for x in range(n)])


def indiscrete(n: int) -> FiniteTopology:
    return FiniteTopology(n, [0, full_mask(n)])


def sierpinski() -> FiniteTopology:
    """Two points ``a = 0`` and ``b = 1`` with ``{a}`` the only proper open."""
    return FiniteTopology(2, [0, 0b01, 0b11])


def from_minimal_opens(n: int, minimal: Sequence[int]) -> FiniteTopology:
    """Every union of the given sets; ``minimal[x]`` must contain ``x``."""
    opens = {0}
    for m in set(minimal):
        opens |= {u | m for u in opens}
    return FiniteTopology(n, opens)


def generate_from_subbasis(n: int, family: Iterable[int]) -> FiniteTopology:
    """The coarsest topology in which every set of ``family`` is open."""
    full = full_mask(n)
    fam = list(family)
    mins = []
    for x in range(n):
        m = full
        for s in fam:
            if s >> x & 1:
                m &= s
        mins.append(m)
    return from_minimal_opens(n, mins)


def coset_topology(G: FiniteGyrogroup, N: int) -> FiniteTopology:
    """Topology generated by the left translates ``g + N``."""
    return generate_from_subbasis(G.n, {translate(G, g, N) for g in range(G.n)})


def random_topology(n: int, rng: np.random.Generator, p: float = 0.05) -> FiniteTopology:
    """Topology of a random preorder: ``M_x`` is the up-set of ``x``."""
    rel = rng.random((n, n)) < p
    np.fill_diagonal(rel, True)
    reach = rel.copy()
    for k in range(n):
        reach |= reach[:, [k]] & reach[[k], :]
    return from_minimal_opens(n, [mask_of(np.flatnonzero(reach[x])) for x in range(n)])


def load_topology(data) -> FiniteTopology:
    """Parse the ``.topo`` format: ``n`` on the first line, then one open set per line."""
    if isinstance(data, bytes):
        data = data.decode("ascii")
    lines = []
    for lineno, line in enumerate(data.splitlines(), 1):
        s = line.strip()
        if s and not s.startswith("#"):
            lines.append((lineno, s))
    if not lines:
        raise TopologyError("empty .topo input")
    lineno, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise TopologyError(f"line {lineno}: expected the carrier size, got {head!r}") from None
    opens = []
    for lineno, s in lines[1:]:
        s = s.strip("{}").strip()
        try:
            opens.append(parse_subset(s, n))
        except ValueError as e:
            raise TopologyError(f"line {lineno}: {e}") from None
    return FiniteTopology(n, opens)


def dump_topology(tau: FiniteTopology) -> bytes:
    return (f"{tau.n}\n" + "".join(f"0x{u:x}\n" for u in tau.opens)).encode("ascii")


# ---------------------------------------------------------------------------
# properties


def isolated_points(tau: FiniteTopology) -> int:
    return mask_of(x for x, m in enumerate(tau.minimal) if m == 1 << x)


def is_hausdorff(tau: FiniteTopology) -> Verdict:
    for x in range(tau.n):
        for y in range(x + 1, tau.n):
            if tau.minimal[x] & tau.minimal[y]:
                return Verdict(False, (x, y))
    return Verdict(True)


def _lowest(flags: np.ndarray) -> int | None:
    idx = np.flatnonzero(flags)
    return int(idx[0]) if len(idx) else None


def is_submaximal(tau: FiniteTopology) -> Verdict:
    """Every dense subset is open; the witness is the smallest dense non-open mask."""
    tau._require_bound()
    w = _lowest(tau._dense & ~tau._open)
    return Verdict(w is None, w, "exhaustive")


def is_maximal(tau: FiniteTopology) -> Verdict:
    """No isolated points, and every single-set refinement creates one.

    Adding a non-open ``A`` generates opens ``U | (V & A)``; a new singleton
    ``{x}`` appears exactly when ``x`` is isolated in the subspace ``A``,
    i.e. ``M_x & A == {x}``.  Any strictly finer topology contains one such
    refinement, and isolated points survive further refinement.
    """
    tau._require_bound()
    iso = isolated_points(tau)
    if iso:
        return Verdict(False, members(iso), "not applicable: isolated points exist")
    s = tau._masks
    gains = np.zeros(s.shape, dtype=bool)
    for x, m in enumerate(tau.minimal):
        gains |= ((s >> x) & 1 == 1) & ((s & m) == (1 << x))
    w = _lowest(~tau._open & ~gains)
    return Verdict(w is None, w, "exhaustive")


def is_irresolvable(tau: FiniteTopology) -> Verdict:
    """No dense set has a dense complement; the witness is ``(D, X - D)``."""
    tau._require_bound()
    s = tau._masks
    both = tau._dense & tau._dense[tau.full ^ s]
    w = _lowest(both)
    if w is None:
        return Verdict(True, None, "exhaustive")
    return Verdict(False, (w, tau.full ^ w), "exhaustive")


class DenseFamilyVerdict(NamedTuple):
    is_filter: bool
    is_ultrafilter: bool
    witness: object = None


def dense_family_check(tau: FiniteTopology, family: Iterable[int]) -> DenseFamilyVerdict:
    """Is the family a filter of dense sets, and is it maximal among such filters?"""
    tau._require_bound()
    fam = sorted(set(family))
    fs = set(fam)
    if not fam:
        return DenseFamilyVerdict(False, False, ("empty",))
    for D in fam:
        if not tau.is_dense(D):
            return DenseFamilyVerdict(False, False, ("not-dense", D))
    for i, D in enumerate(fam):
        for E in fam[i:]:
            if D & E not in fs:
                return DenseFamilyVerdict(False, False, ("intersection", D, E))
    s = tau._masks
    for D in fam:
        sup = s[(s & D) == D]
        missing = [int(m) for m in sup if int(m) not in fs]
        if missing:
            return DenseFamilyVerdict(False, False, ("superset", D, missing[0]))
    cand = tau._dense.copy()
    cand[fam] = False
    for E in fam:
        cand &= tau._dense[s & E]
    w = _lowest(cand)
    return DenseFamilyVerdict(True, w is None, None if w is None else ("extends", w))


def is_nowhere_dense(tau: FiniteTopology, S: int) -> bool:
    return tau.interior(tau.closure(S)) == 0


def dispersion_character(tau: FiniteTopology) -> tuple[tuple[int, ...], int]:
    per_point = tuple(popcount(m) for m in tau.minimal)
    return per_point, min(per_point)


def cellularity(tau: FiniteTopology) -> int:
    """Largest pairwise-disjoint family of non-empty opens.

    Any such family can be shrunk member-wise to distinct minimal opens, so
    a maximum independent set over the minimal opens is exact.
    """
    mins = list(tau.distinct_minimal)
    best = 0

    def rec(i: int, used: int, size: int):
        nonlocal best
        if size + (len(mins) - i) <= best:
            return
        if i == len(mins):
            best = max(best, size)
            return
        if not mins[i] & used:
            rec(i + 1, used | mins[i], size + 1)
        rec(i + 1, used, size)

    rec(0, 0, 0)
    return best


def is_discrete_family(tau: FiniteTopology, family: Sequence[int]) -> Verdict:
    """Every point has a neighbourhood meeting at most one member; witness is a point."""
    for x, m in enumerate(tau.minimal):
        if sum(1 for f in family if f & m) > 1:
            return Verdict(False, x)
    return Verdict(True)


def is_closed_discrete(tau: FiniteTopology, S: int) -> bool:
    """Closed and discrete: ``M_x`` meets S in at most ``{x}`` for every point x."""
    return all(m & S & ~(1 << x) == 0 for x, m in enumerate(tau.minimal))


def is_discrete_subspace(tau: FiniteTopology, S: int) -> bool:
    return all(tau.minimal[x] & S == 1 << x for x in members(S))


def is_collectionwise_hausdorff(tau: FiniteTopology) -> Verdict:
    """Closed discrete sets separated by a discrete family of neighbourhoods.

    Each point ``p`` of the set is given its minimal open ``M_p``; smaller
    neighbourhoods cannot exist, so if this assignment is not discrete no
    assignment is.  The witness is the offending set.
    """
    tau._require_bound()
    s = tau._masks
    mins = tau.minimal
    closed_discrete = np.ones(s.shape, dtype=bool)
    separated = np.ones(s.shape, dtype=bool)
    for x, m in enumerate(mins):
        closed_discrete &= (s & m & ~(1 << x)) == 0
        touching = mask_of(p for p, mp in enumerate(mins) if mp & m)
        v = s & touching
        separated &= (v & (v - 1)) == 0
    w = _lowest(closed_discrete & ~separated)
    return Verdict(w is None, w, "exhaustive")


@dataclass(frozen=True)
class PropertyReport:
    n: int
    submaximal: Verdict
    maximal: Verdict
    irresolvable: Verdict
    hausdorff: Verdict
    collectionwise_hausdorff: Verdict
    isolated_points: int
    dispersion: tuple[int, ...]
    dispersion_global: int
    cellularity: int
    hypotheses: str = field(default="")

    def entries(self) -> list[dict]:
        def entry(name, v: Verdict, exhaustive=True):
            e = {"property": name, "verdict": v.ok, "exhaustive": exhaustive, "bound": SUBSET_BOUND}
            if v.witness is not None:
                e["witness"] = _jsonable(v.witness)
            if v.note and v.note != "exhaustive":
                e["note"] = v.note
            return e

        out = [
            entry("submaximal", self.submaximal),
            entry("maximal", self.maximal),
            entry("irresolvable", self.irresolvable),
            entry("hausdorff", self.hausdorff),
            entry("collectionwise-hausdorff", self.collectionwise_hausdorff),
        ]
        out.append({"property": "isolated-points", "verdict": members(self.isolated_points),
                    "exhaustive": True, "bound": SUBSET_BOUND})
        out.append({"property": "dispersion-character", "verdict": self.dispersion_global,
                    "per_point": list(self.dispersion), "exhaustive": True, "bound": SUBSET_BOUND})
        out.append({"property": "cellularity", "verdict": self.cellularity,
                    "exhaustive": True, "bound": SUBSET_BOUND})
        return out


def _jsonable(w):
    if isinstance(w, (tuple, list)):
        return [_jsonable(v) for v in w]
    if isinstance(w, np.integer):
        return int(w)
    return w


def property_report(tau: FiniteTopology) -> PropertyReport:
    per, glob = dispersion_character(tau)
    haus = is_hausdorff(tau)
    dense_in_itself = isolated_points(tau) == 0
    hyp = (f"hausdorff={haus.ok}, dense-in-itself={dense_in_itself} "
           "(standing hypotheses are reported, not enforced)")
    return PropertyReport(
        tau.n, is_submaximal(tau), is_maximal(tau), is_irresolvable(tau), haus,
        is_collectionwise_hausdorff(tau), isolated_points(tau), per, glob, cellularity(tau), hyp)


# ---------------------------------------------------------------------------
# topological gyrogroup models


class TopoGyroModel:
    """A finite gyrogroup with a topology and an optional neighbourhood base at 0."""

    def __init__(self, gyro: FiniteGyrogroup, topology: FiniteTopology,
                 base: Sequence[int] | None = None):
        if gyro.n != topology.n:
            raise PreconditionError(f"gyrogroup has {gyro.n} points, topology {topology.n}")
        self.gyro = gyro
        self.topology = topology
        if base is not None:
            base = tuple(base)
            for b in base:
                if not topology.is_open(b) or not b & 1:
                    raise PreconditionError(f"base member {format_subset(b)} is not an open set around 0",
                                            witness=b)
            # Every open around 0 contains M_0, so some member must equal it.
            if topology.minimal[0] not in base:
                raise PreconditionError("base does not generate the neighbourhood filter at 0")
        self.base = base

    @property
    def effective_base(self) -> tuple[int, ...]:
        return self.base if self.base is not None else (self.topology.minimal[0],)


@dataclass(frozen=True)
class ContinuityReport:
    left: Verdict
    right: Verdict
    inverse: Verdict
    joint: Verdict
    strongly: Verdict
    base: tuple[int, ...]

    def flags(self) -> dict:
        return {k: getattr(self, k).ok for k in ("left", "right", "inverse", "joint", "strongly")}

    def entries(self) -> list[dict]:
        out = []
        for k in ("left", "right", "inverse", "joint", "strongly"):
            v = getattr(self, k)
            e = {"property": f"continuity-{k}", "verdict": v.ok, "exhaustive": True,
                 "bound": SUBSET_BOUND}
            if v.witness is not None:
                e["witness"] = _jsonable(v.witness)
            out.append(e)
        out.append({"property": "base", "verdict": [members(b) for b in self.base],
                    "exhaustive": True, "bound": SUBSET_BOUND})
        return out


def classify_continuity(model: TopoGyroModel) -> ContinuityReport:
    """Left/right translations, inversion, joint continuity and the strong property.

    On a finite space an open bijection is a homeomorphism (it permutes the
    finitely many opens), so openness of ``g + U``, ``U + g`` and ``-U``
    decides continuity.  Translations and inversion are bijections and so
    commute with unions: checking minimal opens is enough.  Joint
    continuity at ``(a, b)`` holds iff ``M_a + M_b <= M_{a+b}``.
    """
    G, tau = model.gyro, model.topology
    mins = tau.minimal

    def translations(side):
        for g in range(G.n):
            for m in tau.distinct_minimal:
                img = translate(G, g, m, side)
                if not tau.is_open(img):
                    return Verdict(False, (g, members(m)))
        return Verdict(True)

    left, right = translations("left"), translations("right")
    inverse = Verdict(True)
    for m in tau.distinct_minimal:
        if not tau.is_open(negate(G, m)):
            inverse = Verdict(False, (members(m),))
            break
    joint = Verdict(True)
    for a in range(G.n):
        for b in range(G.n):
            if oplus_sets(G, mins[a], mins[b]) & ~mins[G.op(a, b)]:
                joint = Verdict(False, (a, b))
                break
        if not joint:
            break
    base = model.effective_base
    strongly = Verdict(True)
    if not (joint and inverse):
        strongly = Verdict(False, None, "not a topological gyrogroup")
    else:
        for b in base:
            gi = gyr_invariant_set(G, b)
            if not gi:
                strongly = Verdict(False, (members(b), gi.witness))
                break
    return ContinuityReport(left, right, inverse, joint, strongly, base)


class XiFamily(NamedTuple):
    members: tuple[tuple[int, ...], ...]
    upward_closed: bool
    intersection_closed: bool


def xi_family(model: TopoGyroModel, dec: CanonicalDecomposition, bound: int = SUBSET_BOUND) -> XiFamily:
    """Index sets A whose block union ``H_A`` has non-empty interior."""
    k = len(dec.blocks)
    if k > bound:
        raise BoundExceeded(f"{k} blocks exceeds the cap of {bound}")
    tau = model.topology
    inside = set()
    for A in range(1, 1 << k):
        if tau.interior(dec.union(members(A))):
            inside.add(A)
    upward = all((A | (1 << i)) in inside for A in inside for i in range(k))
    meet = all((A & B) in inside for A in inside for B in inside)
    ordered = sorted(inside, key=lambda A: (popcount(A), members(A)))
    return XiFamily(tuple(tuple(members(A)) for A in ordered), upward, meet)


def cover_by_nowhere_dense(model: TopoGyroModel, dec: CanonicalDecomposition,
                           index_sets: Sequence[Iterable[int]]) -> VerificationReport:
    """Check whether block unions ``H_{A_i}`` are closed, nowhere dense, and cover G."""
    k = len(dec.blocks)
    sets = [tuple(A) for A in index_sets]
    covered = set()
    for A in sets:
        for i in A:
            if not 0 <= i < k:
                raise PreconditionError(f"block index {i} out of range [0, {k})")
            covered.add(i)
    if covered != set(range(k)):
        raise PreconditionError("index sets do not cover every block",
                                witness=sorted(set(range(k)) - covered))
    tau = model.topology
    H = [dec.union(A) for A in sets]
    w = next(((i,) for i, h in enumerate(H) if not tau.is_closed(h)), None)
    checks = [Check("closed", w is None, w, len(H))]
    w = next(((i,) for i, h in enumerate(H) if not is_nowhere_dense(tau, h)), None)
    checks.append(Check("nowhere-dense", w is None, w, len(H)))
    acc = 0
    for h in H:
        acc |= h
    checks.append(Check("covers", acc == tau.full, None if acc == tau.full else tuple(members(tau.full & ~acc)), 1))
    notes = ()
    if tau.n > 0:
        notes = ("a non-empty finite space has non-empty interior, so a finite cover by "
                 "nowhere dense sets cannot exist; clause verdicts are reported individually",)
    return VerificationReport(tuple(checks), notes)


def sigma_discrete_conditions(tau: FiniteTopology, parts: Sequence[int],
                              V: Mapping[int, int]) -> VerificationReport:
    """Conditions for a closed-discrete decomposition with discrete neighbourhood families.

    Checks that each part is closed and discrete, that parts are pairwise
    disjoint, and that for each part the assigned neighbourhoods
    ``{V[x] : x in part}`` form a discrete family.
    """
    for h in parts:
        for x in members(h):
            if x not in V:
                raise PreconditionError(f"no neighbourhood assigned to point {x}", witness=x)
            if not tau.is_open(V[x]) or not V[x] >> x & 1:
                raise PreconditionError(f"V[{x}] is not an open set containing {x}", witness=x)
    w = next(((i,) for i, h in enumerate(parts)
              if not (tau.is_closed(h) and is_discrete_subspace(tau, h))), None)
    checks = [Check("closed-discrete", w is None, w, len(parts))]
    w = None
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if w is None and parts[i] & parts[j]:
                w = (i, j)
    checks.append(Check("pairwise-disjoint", w is None, w, len(parts) * (len(parts) - 1) // 2))
    w = None
    for i, h in enumerate(parts):
        v = is_discrete_family(tau, [V[x] for x in members(h)])
        if not v and w is None:
            w = (i, v.witness)
    checks.append(Check("discrete-neighbourhoods", w is None, w, len(parts)))
    return VerificationReport(tuple(checks))
