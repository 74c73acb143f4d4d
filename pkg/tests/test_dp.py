import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signsum.brute import g_brute
from signsum.core import SizeError, WeightTable, mask_of, weight_table_random
from signsum.dp import bound_check, g_partials, g_table, g_top
from signsum.fermion import PrefixProblem, fermion_weight

TIGHT2 = WeightTable.from_dict(2, {(1,): 1, (2,): -1, (1, 2): 1})
MODES = ["uniform", "pm_one", "zero_one"]


def test_g_table_examples(backend):
    assert g_table(WeightTable.constant(3)).top == 0
    assert g_table(TIGHT2)[mask_of([1, 2])] == 2
    f = weight_table_random(1, 3, "uniform")
    assert g_table(f)[1] == f(1)
    assert g_table(f)[0] == 1


def test_g_top_examples(backend):
    assert g_top(WeightTable.constant(5)) == 0
    # value pinned by agreement of g_table, g_brute and the itertools oracle
    assert g_top(weight_table_random(8, 42, "pm_one")) == 128
    assert g_top(fermion_weight(PrefixProblem(["1", "-1"], ["0", "-1"]))) == 1


def test_exact_backend_types(backend):
    f = weight_table_random(6, 1, "pm_one")
    assert g_table(f).g.dtype == np.int64
    assert isinstance(g_top(f), int)
    assert isinstance(g_top(weight_table_random(6, 1, "uniform")), float)


@pytest.mark.parametrize("n", range(1, 8))
@pytest.mark.parametrize("mode", MODES)
def test_table_matches_brute_on_every_subset(backend, n, mode):
    for seed in range(4):
        f = weight_table_random(n, seed, mode)
        table = g_table(f)
        for T in range(1 << n):
            if f.exact:
                assert table[T] == g_brute(f, T)
            else:
                assert table[T] == pytest.approx(g_brute(f, T), abs=1e-9)


@pytest.mark.parametrize("mode", MODES)
def test_layers_agree_with_table(backend, mode):
    for n in range(1, 13):
        f = weight_table_random(n, 100 + n, mode)
        if f.exact:
            assert g_top(f) == g_table(f).top
        else:
            assert g_top(f) == pytest.approx(g_table(f).top, abs=1e-9)


def test_table_satisfies_recursion(backend):
    f = weight_table_random(7, 5, "uniform")
    table = g_table(f)
    for T in range(1, 1 << 7):
        assert table.recursion_residual(f, T) < 1e-12


def test_thread_count_does_not_change_result():
    f = weight_table_random(14, 3, "uniform")
    g1 = g_top(f, threads=1)
    assert g_top(f, threads=2) == g1
    assert g_top(f, threads=4) == g1
    fe = weight_table_random(14, 3, "pm_one")
    assert g_top(fe, threads=1) == g_top(fe, threads=3)


def test_size_and_degenerate_guards():
    with pytest.raises(SizeError):
        g_table(WeightTable.constant(1), 0)
    with pytest.raises(ValueError):
        g_top(WeightTable.constant(3), 4)


def test_multilinearity(backend):
    rng = np.random.default_rng(0)
    for n in range(1, 6):
        f = weight_table_random(n, int(rng.integers(2**32)), "uniform")
        for S in range(1, 1 << n):
            zero = g_top(f.with_value(S, 0.0))
            plus = g_top(f.with_value(S, 1.0))
            minus = g_top(f.with_value(S, -1.0))
            assert zero == pytest.approx((plus + minus) / 2, abs=1e-10)


@pytest.mark.parametrize("mode", MODES)
def test_partials_predict_single_entry_changes(backend, mode):
    f = weight_table_random(6, 9, mode)
    g, part = g_partials(f)
    assert g == pytest.approx(g_top(f), abs=1e-12)
    for S in range(1, 1 << 6):
        for v in (-1.0, 0.0, 1.0):
            expected = g_top(f.with_value(S, v))
            assert g + (v - f(S)) * part[S] == pytest.approx(expected, abs=1e-9)


def test_bound_check_examples(backend):
    r = bound_check(TIGHT2)
    assert r == {"g_value": 2, "bound": 2.0, "ratio": 1.0, "ok": True}
    r = bound_check(WeightTable.constant(4))
    assert r["g_value"] == 0 and r["ratio"] == 0 and r["ok"]
    r = bound_check(weight_table_random(10, 4, "uniform"), method="table")
    assert r["ok"] and r["bound"] == pytest.approx(10**5)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 9), seed=st.integers(0, 2**63 - 1), mode=st.sampled_from(MODES))
def test_bound_holds(n, seed, mode):
    f = weight_table_random(n, seed, mode)
    assert abs(g_top(f)) <= math.sqrt(n) ** n * (1 + 1e-12)


def test_exact_top_beyond_int64_range():
    # n = 22 still uses the 128-bit path; compare against the float engine
    f = weight_table_random(22, 8, "pm_one")
    exact = g_top(f)
    approx = g_top(WeightTable(22, f.table(), value_class="real"))
    assert isinstance(exact, int)
    assert abs(exact - approx) <= 1e-9 * max(1.0, abs(exact))
