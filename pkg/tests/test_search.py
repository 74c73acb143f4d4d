import numpy as np
import pytest

from signsum.brute import g_brute
from signsum.core import SizeError, WeightTable, weight_table_random
from signsum.dp import g_top
from signsum.search import exhaustive_max, local_search_max, round_to_vertex

# frozen from exhaustive runs (argmax re-checked by brute force inside)
EXHAUSTIVE = {1: 1, 2: 2, 3: 4, 4: 16}


def _table(report):
    n = report["n"]
    return WeightTable(n, [0] + report["table"])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exhaustive_small(backend, n):
    r = exhaustive_max(n)
    assert r["max_abs_g"] == EXHAUSTIVE[n]
    assert r["tables_evaluated"] == 2 ** (2**n - 1)
    assert abs(g_brute(_table(r))) == r["max_abs_g"]


def test_exhaustive_ratios():
    assert exhaustive_max(1)["ratio"] == 1.0
    assert exhaustive_max(2)["ratio"] == 1.0
    assert exhaustive_max(3)["ratio"] == pytest.approx(4 / 27**0.5)


def test_exhaustive_limit():
    with pytest.raises(SizeError):
        exhaustive_max(5)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_local_search_finds_exhaustive_value(n):
    r = local_search_max(n, seed=9, restarts=16)
    assert r["max_abs_g"] == EXHAUSTIVE[n]
    assert abs(g_top(_table(r))) == r["max_abs_g"]


def test_local_search_is_deterministic():
    a = local_search_max(6, seed=3, restarts=5, max_sweeps=50)
    b = local_search_max(6, seed=3, restarts=5, max_sweeps=50)
    assert a == b
    assert set(a) >= {"n", "max_abs_g", "bound", "ratio", "table", "restarts_used", "sweeps_total"}


def test_local_search_sweep_cap():
    r = local_search_max(8, seed=1, restarts=2, max_sweeps=1)
    assert r["sweeps_total"] == 2


def test_local_search_floor():
    rng = np.random.default_rng(1)
    for n in (3, 5, 7):
        start = weight_table_random(n, int(rng.integers(2**32)), "pm_one")
        start_vals = start.table()
        start_vals[0] = 0
        r = local_search_max(n, seed=0, restarts=0, initial=[start_vals])
        assert r["max_abs_g"] >= abs(g_top(start))


def test_local_search_reports_within_bound():
    for n in range(5, 10):
        r = local_search_max(n, seed=n, restarts=2, max_sweeps=100)
        assert r["ratio"] <= 1.0
        assert abs(g_top(_table(r))) == r["max_abs_g"]


def test_rounding_to_vertex_never_decreases():
    rng = np.random.default_rng(2)
    for n in range(1, 6):
        for _ in range(10):
            vals = rng.uniform(-0.99, 0.99, 1 << n)
            f = WeightTable(n, vals)
            v = round_to_vertex(f)
            assert set(np.abs(v.table()[1:])) == {1.0}
            assert abs(g_top(v)) >= abs(g_top(f)) - 1e-12
