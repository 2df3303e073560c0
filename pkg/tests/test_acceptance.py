"""Acceptance criteria 1-10, each at its stated tolerance and time budget.

Every criterion records a one-line PASS/FAIL verdict; the lines are printed
in the pytest terminal summary and when this file is run as a script.
"""

import io
import json
import time
import warnings
from contextlib import redirect_stdout

import numpy as np
import pytest

from conftest import K16, finite_fixtures, group_fixtures, small_fixtures
from oracles import generated_by_intersection, min_cover_size, subgyrogroups, table_of
from gyrolab import cli, models, subgyro as sg, topology as tp
from gyrolab.core import check_axioms, check_identities, is_group, sampled
from gyrolab.models import EinsteinBall, EinsteinVector, MobiusDisk, MobiusPoint
from gyrolab.subgyro import mask_of, members

RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


# ---------------------------------------------------------------------------


def test_criterion_01_mobius_gyrogroup():
    M = MobiusDisk(tolerance=1e-9, radius=0.9)
    mode = sampled(10_000, 20260101)
    t0 = time.perf_counter()
    rep = check_axioms(M, mode).merge(check_identities(M, mode))
    rng = np.random.default_rng(1)
    a, b = M.sample(rng, 10_000), M.sample(rng, 10_000)
    worst = max(abs(abs(models.gyration_factor(x, y)) - 1) for x, y in zip(a, b))
    elapsed = time.perf_counter() - t0
    ok = rep.overall and worst <= 1e-12 and elapsed < 5.0
    record(1, ok, f"{len(rep.checks)} checks on 10000 samples, max ||factor|-1| = {worst:.1e}, "
                  f"{elapsed:.2f}s (< 5s)" + ("" if rep.overall else f"; failures {rep.failures}"))


def test_criterion_02_nonassociativity_witness():
    x, y, z = 0.5, 0.5j, -0.5

    def add(p, q):
        return (p + q) / (1 + p.conjugate() * q)

    oracle = abs(add(x, add(y, z)) - add(add(x, y), z))
    M = MobiusDisk()
    X, Y, Z = (MobiusPoint.of(v) for v in (x, y, z))
    lib = abs(M.op(X, M.op(Y, Z)).z - M.op(M.op(X, Y), Z).z)
    D2 = models.product([MobiusDisk(), MobiusDisk()])
    e = M.identity
    Xs, Ys, Zs = (X, e), (Y, e), (Z, e)
    emb = D2.op(Xs, D2.op(Ys, Zs))[0].z - D2.op(D2.op(Xs, Ys), Zs)[0].z
    w = models.nonassoc_witness(D2)
    ok = (lib > 1e-3 and abs(lib - oracle) < 1e-12 and abs(abs(emb) - lib) < 1e-15
          and w is not None and w[0][0] == X and w[1][0] == Y and w[2][0] == Z)
    record(2, ok, f"|x+(y+z) - (x+y)+z| = {lib:.6f} (oracle {oracle:.6f}, > 1e-3); "
                  f"D^2 embedding reproduces it")


def test_criterion_03_einstein_gyrogroup():
    E = EinsteinBall(c=1.0, tolerance=1e-9)
    rng = np.random.default_rng(3)
    us, vs = E.sample(rng, 10_000), E.sample(rng, 10_000)
    bad = 0
    for u, v in zip(us, vs):
        if not (E.close(E.op(E.identity, u), u) and E.close(E.op(u, E.identity), u)
                and E.close(E.op(E.inv(u), u), E.identity) and E.close(E.op(u, E.inv(u)), E.identity)
                and E.close(E.op(E.inv(u), E.op(u, v)), v)):
            bad += 1
    w = models.einstein_add(EinsteinVector((0.5, 0, 0)), EinsteinVector((0.5, 0, 0)))
    one_d = (0.5 + 0.5) / (1 + 0.5 * 0.5)
    err = max(abs(w.v[0] - one_d), abs(w.v[1]), abs(w.v[2]), abs(w.v[0] - 0.8))
    ok = bad == 0 and err <= 1e-12
    record(3, ok, f"identity/inverse/left-cancellation on 10000 pairs ({bad} failures); "
                  f"collinear sum error {err:.1e}")


def test_criterion_04_derived_gyration_soundness():
    fx = group_fixtures()
    fx["z2xz4"] = models.builtin("product:z2,z4")
    fx["g8xz2"] = models.builtin("product:g8,z2")
    problems = []
    for name, G in fx.items():
        rep = check_axioms(G)
        if not (rep["G3"].passed and rep["G4"].passed):
            problems.append(name)
    for name, G in group_fixtures().items():
        if not (G.gyrations == np.arange(G.n)).all():
            problems.append(f"{name}: non-identity gyration")
    detail = f"G3/G4 exhaustive on {sorted(fx)}"
    if K16 is None:
        warnings.warn("k16.gyro missing: K16 part of criterion 4 skipped")
        detail += "; K16 skipped (data file missing)"
    else:
        rep = check_axioms(K16).merge(check_axioms(models.builtin("product:k16,z2")))
        v = is_group(K16)
        L = [sg.is_L_subgyrogroup(K16, mask_of(range(k))).ok for k in (4, 8)]
        if not (rep.overall and not v.ok and v.witness and all(L)):
            problems.append("k16")
        detail += f"; K16 passes, is_group fails at {v.witness}, {{0..3}} and {{0..7}} are L-subgyrogroups"
    record(4, not problems, detail + (f"; problems {problems}" if problems else ""))


def test_criterion_05_generation_oracle():
    t0 = time.perf_counter()
    fx = small_fixtures()
    mismatches, total = 0, 0
    for name, G in sorted(fx.items()):
        subs = subgyrogroups(table_of(G))
        rng = np.random.default_rng(5)
        for _ in range(100):
            X = int(rng.integers(1, 1 << G.n))
            total += 1
            if set(members(sg.generate(G, X))) != generated_by_intersection(subs, set(members(X))):
                mismatches += 1
    elapsed = time.perf_counter() - t0
    record(5, mismatches == 0 and elapsed < 10.0,
           f"{total} random X over {len(fx)} fixtures with |G| <= 12, {mismatches} mismatches, "
           f"{elapsed:.2f}s (< 10s)")


def test_criterion_06_canonical_decomposition():
    fx = finite_fixtures()
    rng = np.random.default_rng(6)
    failures = []
    for name, G in fx.items():
        for _ in range(20):
            enum = [0] + list(rng.permutation(np.arange(1, G.n)).tolist())
            dec = sg.canonical_decomposition(G, enum)
            if not sg.verify_decomposition(G, dec).overall:
                failures.append((name, enum))
    z4 = models.cyclic(4)
    a = sg.canonical_decomposition(z4, [0, 1, 2, 3])
    b = sg.canonical_decomposition(z4, [0, 2, 1, 3])
    hand = ([members(m) for m in a.chain] == [[0], [0, 1, 2, 3]]
            and [members(m) for m in a.blocks] == [[0], [1, 2, 3]]
            and [members(m) for m in b.chain] == [[0], [0, 2], [0, 1, 2, 3]]
            and [members(m) for m in b.blocks] == [[0], [2], [1, 3]])
    record(6, not failures and hand,
           f"{20 * len(fx)} random enumerations over {len(fx)} fixtures verified; "
           f"Z4 hand decompositions {'match' if hand else 'differ'}")


def test_criterion_07_topology_ground_truth():
    s = tp.sierpinski()
    sier = (tp.is_submaximal(s).ok and tp.is_irresolvable(s).ok
            and tp.dispersion_character(s)[0] == (1, 2) and tp.cellularity(s) == 1
            and not tp.is_hausdorff(s).ok and tp.isolated_points(s) == 0b01)
    i2 = tp.indiscrete(2)
    sub, irr = tp.is_submaximal(i2), tp.is_irresolvable(i2)
    ind = not sub.ok and sub.witness == 0b01 and not irr.ok and irr.witness == (0b01, 0b10)
    disc = all(tp.is_submaximal(tp.discrete(n)).ok for n in range(1, 17))
    rng = np.random.default_rng(7)
    times = []
    for tau in (tp.random_topology(16, rng), tp.random_topology(16, rng, p=0.02), tp.discrete(16)):
        fresh = tp.FiniteTopology(16, tau.opens)
        t0 = time.perf_counter()
        tp.is_submaximal(fresh)
        times.append(time.perf_counter() - t0)
    ok = sier and ind and disc and max(times) < 5.0
    record(7, ok, f"Sierpinski {'ok' if sier else 'WRONG'}, indiscrete(2) {'ok' if ind else 'WRONG'}, "
                  f"discrete(1..16) submaximal {'ok' if disc else 'WRONG'}; "
                  f"16-point submaximality {max(times) * 1000:.1f}ms (< 5s)")


def test_criterion_08_continuity_classification():
    fx = finite_fixtures(include_large=False)
    bad = []
    for name, G in fx.items():
        r = tp.classify_continuity(tp.TopoGyroModel(G, tp.discrete(G.n)))
        if not (all(r.flags().values()) and r.base == (0b1,)):
            bad.append(f"{name}/discrete")
        f = tp.classify_continuity(tp.TopoGyroModel(G, tp.indiscrete(G.n))).flags()
        if not (f["left"] and f["right"] and f["inverse"] and f["joint"]):
            bad.append(f"{name}/indiscrete")
    z4 = models.cyclic(4)
    r = tp.classify_continuity(tp.TopoGyroModel(z4, tp.FiniteTopology(4, [0, 0b0011, 0b1111])))
    z4_ok = not r.left.ok and r.left.witness[0] == 1
    record(8, not bad and z4_ok, f"{len(fx)} fixtures x (discrete, indiscrete); "
                                 f"Z4 {{0,1}}-topology left witness g = {r.left.witness[0]}"
           + (f"; failures {bad}" if bad else ""))


def _strong_models():
    for name, G in finite_fixtures(include_large=False).items():
        yield name, G, tp.discrete(G.n)
        yield name, G, tp.indiscrete(G.n)
        cands = {sg.generate(G, 1 << a | 1 << b) for a in range(G.n) for b in range(a, G.n)}
        for H in sorted(cands):
            if sg.is_L_subgyrogroup(G, H).ok:
                yield name, G, tp.coset_topology(G, H)


def test_criterion_09_covering_construction():
    n_models = n_base = 0
    failures = []
    cover_checks = 0
    for name, G, tau in _strong_models():
        model = tp.TopoGyroModel(G, tau)
        if not tp.classify_continuity(model).strongly.ok:
            continue
        n_models += 1
        full = sg.full_mask(G.n)
        # A valid base at 0: M_0 plus the other symmetric, gyration-invariant open neighbourhoods.
        base = [u for u in tau.opens
                if u & 1 and sg.negate(G, u) == u and sg.gyr_invariant_set(G, u).ok]
        assert set(model.effective_base) <= set(base)
        for V in base:
            n_base += 1
            A = sg.greedy_disjoint_set(G, V)
            if sg.oplus_sets(G, A, sg.oplus_sets(G, V, V)) != full:
                failures.append((name, members(V)))
            cert = sg.covering_number(G, V)
            if sg.oplus_sets(G, cert.A, V) != full:
                failures.append((name, "certificate", members(V)))
            if G.n <= 12:
                cover_checks += 1
                if cert.size != min_cover_size(table_of(G), set(members(V))):
                    failures.append((name, "minimality", members(V)))
    record(9, not failures and n_models > 0,
           f"{n_models} strongly-classified models, {n_base} base members: A+(V+V) = G; "
           f"{cover_checks} certificates matched exhaustive minima"
           + (f"; failures {failures[:3]}" if failures else ""))


CLI_RUNS = [
    ("verify", "mobius", "--samples", "500", "--seed", "10"),
    ("verify", "einstein", "--samples", "500", "--seed", "10"),
    ("verify", "product:g8,z2"),
    ("decompose", "z8", "--enumeration", "0,3,1,2,4,5,6,7"),
    ("topo", "sierpinski"),
    ("topo", "discrete8", "--gyro", "g8"),
    ("witness", "mobius", "--seed", "10", "--budget", "50"),
    ("cover", "z8", "--subset", "0,1"),
]


def _capture(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(list(argv) + ["--json"])
    return code, buf.getvalue().encode()


def test_criterion_10_determinism():
    diffs = []
    for argv in CLI_RUNS:
        a, b = _capture(argv), _capture(argv)
        if a != b or (a[0] == 0) != json.loads(a[1])["overall"]:
            diffs.append(argv[0:2])
    record(10, not diffs, f"{len(CLI_RUNS)} CLI invocations byte-identical across two runs"
           + (f"; differing {diffs}" if diffs else ""))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
