import cmath
import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import K16, finite_fixtures, needs_k16
from oracles import table_of
from gyrolab import models
from gyrolab.core import check_axioms, check_identities, gyr, is_group, sampled
from gyrolab.models import (EinsteinBall, EinsteinVector, MobiusDisk, MobiusPoint, dump_table,
                            einstein_add, gamma, gyration_factor, load_table, mobius_add)
from gyrolab.report import DomainError, PreconditionError


def mp(z):
    return MobiusPoint.of(z)


def ev(*v, c=1.0):
    return EinsteinVector(tuple(float(x) for x in v), c)


# ---------------------------------------------------------------------------
# Moebius


def test_mobius_addition_reference_value():
    s = mobius_add(mp(0.5), mp(0.5j))
    oracle = (0.5 + 0.5j) / (1 + 0.5 * 0.5j)
    assert abs(s.z - oracle) < 1e-15
    assert abs(s.z - (0.5882352941176471 + 0.35294117647058826j)) < 1e-12


def test_mobius_identity_and_inverse():
    M = MobiusDisk()
    a = mp(0.3 - 0.4j)
    assert M.op(a, M.identity) == a
    assert M.close(M.op(a, M.inv(a)), M.identity)
    assert M.inv(a) == mp(-0.3 + 0.4j)


def test_mobius_boundary_rejected():
    with pytest.raises(DomainError):
        MobiusPoint(1.0, 0.0)
    with pytest.raises(DomainError):
        MobiusPoint.of(cmath.exp(0.3j) * (1 - 1e-13))
    MobiusPoint.of(0.999)


def test_gyration_with_zero_is_identity():
    M = MobiusDisk()
    c = mp(0.2 + 0.1j)
    assert gyr(M, mp(0.7j), M.identity, c) == c


def test_mobius_non_associativity_magnitude():
    x, y, z = 0.5, 0.5j, -0.5

    def add(a, b):
        return (a + b) / (1 + a.conjugate() * b)

    left = add(x, add(y, z))
    right = add(add(x, y), z)
    assert abs(left - (5 / 13 + 15j / 26)) < 1e-12
    assert abs(right - (4 / 17 + 15j / 34)) < 1e-12
    M = MobiusDisk()
    lib = M.op(mp(x), M.op(mp(y), mp(z))).z - M.op(M.op(mp(x), mp(y)), mp(z)).z
    assert abs(abs(lib) - abs(left - right)) < 1e-12
    assert abs(lib) > 1e-3


def test_mobius_witness_found_from_hints():
    w = models.nonassoc_witness(MobiusDisk())
    assert [p.z for p in w] == [0.5, 0.5j, -0.5]


def test_witness_embeds_in_products():
    D2 = models.product([MobiusDisk(), MobiusDisk()])
    w = models.nonassoc_witness(D2)
    assert w is not None
    x, y, z = w
    lhs = D2.op(x, D2.op(y, z))
    rhs = D2.op(D2.op(x, y), z)
    assert not D2.close(lhs, rhs)
    assert [c[0].z for c in w] == [0.5, 0.5j, -0.5]


def test_product_of_disks_sampled_axioms():
    D2 = models.product([MobiusDisk(), MobiusDisk()])
    assert check_axioms(D2, sampled(200, 1)).overall


disk = st.tuples(st.floats(-0.63, 0.63), st.floats(-0.63, 0.63)).map(lambda p: MobiusPoint(*p))


@settings(max_examples=300, deadline=None)
@given(disk, disk, disk)
def test_mobius_gyration_is_a_rotation(a, b, c):
    f = gyration_factor(a, b)
    assert abs(abs(f) - 1) < 1e-12
    M = MobiusDisk()
    assert abs(abs(gyr(M, a, b, c)) - abs(c)) < 1e-12


@settings(max_examples=300, deadline=None)
@given(disk, disk)
def test_mobius_left_cancellation_property(a, b):
    M = MobiusDisk()
    assert M.close(M.op(M.inv(a), M.op(a, b)), b)


# ---------------------------------------------------------------------------
# Einstein


def test_gamma_reference_values():
    assert gamma(ev(0, 0, 0)) == 1.0
    assert abs(gamma(ev(0.5, 0, 0)) - 1 / math.sqrt(0.75)) < 1e-15
    assert abs(gamma(ev(0.5, 0, 0)) - 1.1547005384) < 1e-10


def test_einstein_collinear_against_one_dimensional_formula():
    u = v = 0.5
    w = einstein_add(ev(u, 0, 0), ev(v, 0, 0))
    oracle = (u + v) / (1 + u * v)
    assert abs(w.v[0] - oracle) < 1e-12
    assert abs(w.v[0] - 0.8) < 1e-12
    assert w.v[1:] == (0.0, 0.0)


def test_einstein_collinear_matches_rapidity_sum():
    for u, v in [(0.1, 0.7), (-0.4, 0.9), (0.3, -0.3)]:
        w = einstein_add(ev(u, 0, 0), ev(v, 0, 0))
        assert abs(w.v[0] - math.tanh(math.atanh(u) + math.atanh(v))) < 1e-12


def test_einstein_orthogonal_closed_form():
    # For u perpendicular to v the sum is u + v / gamma(u).
    u, v = ev(0.6, 0, 0), ev(0, 0.5, 0)
    w = einstein_add(u, v)
    assert np.allclose(w.v, (0.6, 0.5 * math.sqrt(1 - 0.36), 0.0), atol=1e-15)


def test_einstein_speed_bound_c():
    u = ev(1.5, 0, 0, c=3.0)
    w = einstein_add(u, u)
    assert abs(w.v[0] - 3.0 / (1 + 0.25)) < 1e-12
    with pytest.raises(ValueError):
        einstein_add(u, ev(0.1, 0, 0))
    with pytest.raises(DomainError):
        ev(3.0, 0, 0, c=3.0)


def test_einstein_sampled_axioms():
    E = EinsteinBall()
    rep = check_axioms(E, sampled(300, 2)).merge(check_identities(E, sampled(300, 2)))
    assert rep.overall, rep.render()


ball = st.tuples(*(st.floats(-0.5, 0.5) for _ in range(3))).map(lambda p: EinsteinVector(p))


@settings(max_examples=300, deadline=None)
@given(ball, ball)
def test_einstein_closure_identity_inverse(u, v):
    E = EinsteinBall()
    w = einstein_add(u, v)
    assert w.norm < 1.0
    assert E.close(einstein_add(u, E.identity), u)
    assert E.close(einstein_add(E.inv(u), u), E.identity)
    assert E.close(einstein_add(E.inv(u), einstein_add(u, v)), v)


# ---------------------------------------------------------------------------
# table files


def test_load_two_element_table():
    G = load_table("2\n0 1\n1 0\n")
    assert G.n == 2 and G.op(1, 1) == 0
    assert check_axioms(G).overall


def test_load_ignores_comments_and_blank_lines():
    G = load_table(b"# comment\n\n2\n# row\n0 1\n\n1 0\n")
    assert G == models.cyclic(2)


def test_load_rejects_duplicate_in_row():
    with pytest.raises(PreconditionError) as e:
        load_table("3\n0 1 2\n1 1 0\n2 0 1\n")
    assert e.value.witness == ("row", 1)


@pytest.mark.parametrize("text", ["", "x\n", "2\n0 1\n", "2\n0 1\n1 0 1\n", "2\n0 1\n1 -1\n"])
def test_load_rejects_malformed(text):
    with pytest.raises(PreconditionError):
        load_table(text)


@pytest.mark.parametrize("name", sorted(finite_fixtures()))
def test_table_round_trip(name):
    G = finite_fixtures()[name]
    again = load_table(dump_table(G))
    assert again == G
    assert dump_table(again) == dump_table(G)


@needs_k16
def test_shipped_k16():
    assert K16.n == 16
    assert check_axioms(K16).overall
    assert not is_group(K16).ok
    gyrations = {K16.gyration(x, y) for x in range(16) for y in range(16)}
    identity = tuple(range(16))
    swap = list(range(16))
    for a in (8, 10, 12, 14):
        swap[a], swap[a + 1] = a + 1, a
    assert gyrations == {identity, tuple(swap)}


def test_missing_k16_file_warns(monkeypatch):
    monkeypatch.setattr(models, "K16_RESOURCE", "absent.gyro")
    with pytest.warns(UserWarning):
        assert models.k16() is None
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert models.k16(warn=False) is None


# ---------------------------------------------------------------------------
# finite models and products


def test_group_wrapper_rejects_non_associative_table():
    with pytest.raises(PreconditionError) as e:
        models.group_as_gyrogroup(models.G8_TABLE)
    x, y, z = e.value.witness
    t = models.G8_TABLE
    assert t[x][t[y][z]] != t[t[x][y]][z]


def test_cyclic_and_klein_tables():
    assert table_of(models.cyclic(4)) == [[(a + b) % 4 for b in range(4)] for a in range(4)]
    assert table_of(models.klein()) == [[a ^ b for b in range(4)] for a in range(4)]
    assert (models.cyclic(4).gyrations == np.arange(4)).all()


def test_empty_product_rejected():
    with pytest.raises(PreconditionError):
        models.product([])


@pytest.mark.parametrize("factors", [("g8", "z2"), ("z2", "g8"), ("g8", "klein")])
def test_product_gyration_is_coordinatewise(factors):
    A, B = (models.builtin(f) for f in factors)
    P = models.product([A, B])
    elems = P.elements()
    for x, y, z in itertools.product(elems, repeat=3):
        expect = (A.gyrations[x[0], y[0], z[0]], B.gyrations[x[1], y[1], z[1]])
        assert gyr(P, x, y, z) == expect
        assert P.native_gyr(x, y, z) == expect


def test_tabulate_puts_identity_first():
    P = models.product([models.cyclic(3), models.cyclic(2)])
    T = models.tabulate(P)
    assert T.n == 6
    assert check_axioms(T).overall


def test_nonassoc_witness_none_for_groups():
    assert models.nonassoc_witness(models.cyclic(8)) is None
    assert models.nonassoc_witness(models.product([models.cyclic(2), models.klein()])) is None


@needs_k16
def test_nonassoc_witness_k16():
    x, y, z = models.nonassoc_witness(K16)
    assert K16.op(x, K16.op(y, z)) != K16.op(K16.op(x, y), z)


BUILTINS = ["z1", "z2", "z5", "klein", "g8", "k16", "product:z2,z3", "product:g8,z2"]


@pytest.mark.parametrize("name", BUILTINS)
def test_builtin_finite_models_pass_axioms(name):
    if name == "k16" and K16 is None:
        pytest.skip("k16 data file not installed")
    assert check_axioms(models.builtin(name)).overall


@pytest.mark.parametrize("name", ["mobius", "einstein", "product:mobius,z2"])
def test_builtin_continuous_models_pass_sampled_axioms(name):
    assert check_axioms(models.builtin(name), sampled(100, 0)).overall


def test_unknown_builtin_rejected():
    with pytest.raises(PreconditionError):
        models.builtin("nope")
