import warnings

import pytest

from gyrolab import models


def _k16():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return models.k16(warn=False)


K16 = _k16()
needs_k16 = pytest.mark.skipif(K16 is None, reason="k16.gyro data file not installed")


def group_fixtures():
    return {
        "z1": models.cyclic(1),
        "z2": models.cyclic(2),
        "z4": models.cyclic(4),
        "z8": models.cyclic(8),
        "klein": models.klein(),
        "z2xz4": models.builtin("product:z2,z4"),
        "klein2": models.builtin("product:klein,z2"),
    }


def finite_fixtures(include_large: bool = True):
    fx = group_fixtures()
    fx["g8"] = models.g8()
    fx["g8xz2"] = models.builtin("product:g8,z2")
    if K16 is not None:
        fx["k16"] = K16
        if include_large:
            fx["k16xz2"] = models.builtin("product:k16,z2")
    else:
        warnings.warn("k16.gyro missing: K16 fixtures skipped")
    return fx


def small_fixtures():
    """Fixtures with at most 12 elements, for brute-force oracles."""
    fx = {k: v for k, v in finite_fixtures(False).items() if v.n <= 12}
    fx["z3"] = models.cyclic(3)
    fx["z12"] = models.cyclic(12)
    fx["z3xz3"] = models.builtin("product:z3,z3")
    fx["z2xz6"] = models.builtin("product:z2,z6")
    return fx


@pytest.fixture
def z4():
    return models.cyclic(4)


@pytest.fixture
def z8():
    return models.cyclic(8)


@pytest.fixture
def k16():
    if K16 is None:
        pytest.skip("k16.gyro data file not installed")
    return K16


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
