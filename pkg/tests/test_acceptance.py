"""Exit criteria.  Each test logs one PASS/FAIL line (shown in the summary)."""

import math
import os
import time

import numpy as np
import pytest

from signsum import _backend
from signsum.brute import epsilon_sum_brute, g_brute
from signsum.core import WEIGHT_MODES, weight_table_random
from signsum.dp import g_table, g_top
from signsum.fermion import epsilon_sum, proposition_check, random_problem
from signsum.search import exhaustive_max, local_search_max
from signsum.wedge import (
    GradedVector,
    apply_P,
    apply_R,
    apply_R_adjoint,
    g_operator,
    gram_inner,
    inner_product,
    wedge_basis,
)

pytestmark = pytest.mark.acceptance

# exhaustive maxima of |g(N)| over sign tables, frozen from the first run
FROZEN_MAX = {3: 4, 4: 16}


@pytest.fixture(autouse=True)
def _fastest_backend():
    name = "compiled" if "compiled" in _backend.BACKENDS else "python"
    with _backend.use_backend(name):
        yield


def _seeds(tag, count):
    return np.random.SeedSequence([tag]).generate_state(count, np.uint64).tolist()


def test_1_oracle_equivalence(acceptance_log):
    t0 = time.perf_counter()
    worst_real, exact_mismatch, checked = 0.0, 0, 0
    for n in range(1, 9):
        for i, seed in enumerate(_seeds(100 + n, 100)):
            f = weight_table_random(n, seed, WEIGHT_MODES[i % 3])
            table = g_table(f)
            for T in range(1 << n):
                b = g_brute(f, T)
                checked += 1
                if f.exact:
                    exact_mismatch += table[T] != b
                else:
                    worst_real = max(worst_real, abs(table[T] - b))
    elapsed = time.perf_counter() - t0
    ok = exact_mismatch == 0 and worst_real <= 1e-9 and elapsed < 120
    acceptance_log(
        "1 oracle equivalence (table vs brute, n<=8)",
        ok,
        f"{checked} subsets, exact mismatches={exact_mismatch}, max real diff={worst_real:.2e}, {elapsed:.1f}s",
    )
    assert ok


def test_2_operator_pipeline(acceptance_log):
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(1, 13):
        for i, seed in enumerate(_seeds(200 + n, 50)):
            f = weight_table_random(n, seed, WEIGHT_MODES[i % 3])
            worst = max(worst, abs(g_operator(f) - g_top(f)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 60
    acceptance_log("2 operator pipeline vs layered (n<=12)", ok, f"max diff={worst:.2e}, {elapsed:.1f}s")
    assert ok


def test_3_gram_determinant(acceptance_log):
    t0 = time.perf_counter()
    rng = np.random.default_rng(300)
    worst, draws = 0.0, 0
    for n in range(1, 9):
        for k in range(1, min(5, n) + 1):
            for _ in range(100):
                V, W = rng.standard_normal((2, k, n))
                a = gram_inner(V, W)
                b = inner_product(wedge_basis(V), wedge_basis(W))
                scale = max(abs(a), abs(b))
                worst = max(worst, abs(a - b) / scale if scale else 0.0)
                draws += 1
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < 30
    acceptance_log("3 Gram determinant identity (k<=5, n<=8)", ok, f"{draws} draws, max rel diff={worst:.2e}, {elapsed:.1f}s")
    assert ok


def test_4_operator_norms(acceptance_log):
    t0 = time.perf_counter()
    rng = np.random.default_rng(400)
    worst_r = worst_p = worst_adj = worst_idem = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 11))
        k = int(rng.integers(0, n))
        v = GradedVector.random(n, k, rng)
        nv = v.norm()
        worst_r = max(worst_r, apply_R(v).norm() / nv)
        w = GradedVector.random(n, k + 1, rng)
        f = weight_table_random(n, int(rng.integers(2**63)), WEIGHT_MODES[int(rng.integers(3))])
        worst_p = max(worst_p, apply_P(f, w).norm() / w.norm())
        worst_adj = max(worst_adj, abs(inner_product(apply_R(v), w) - inner_product(v, apply_R_adjoint(w))))
        once = apply_R_adjoint(apply_R(v))
        twice = apply_R_adjoint(apply_R(once))
        worst_idem = max(worst_idem, float(np.max(np.abs(twice.coeffs - once.coeffs))))
    elapsed = time.perf_counter() - t0
    ok = worst_r <= 1 + 1e-12 and worst_p <= 1 + 1e-12 and worst_adj <= 1e-10 and worst_idem <= 1e-10 and elapsed < 30
    acceptance_log(
        "4 operator norms, adjointness, projection",
        ok,
        f"max |Rv|/|v|={worst_r:.15f}, max |Pv|/|v|={worst_p:.15f}, adj={worst_adj:.1e}, idem={worst_idem:.1e}, {elapsed:.1f}s",
    )
    assert ok


def test_5_bound_sweep(acceptance_log):
    t0 = time.perf_counter()
    violations, worst_ratio = 0, 0.0
    for n in range(1, 15):
        bound = math.sqrt(n) ** n
        for i, seed in enumerate(_seeds(500 + n, 1000)):
            g = g_top(weight_table_random(n, seed, WEIGHT_MODES[i % 3]))
            violations += abs(g) > bound * (1 + 1e-12)
            worst_ratio = max(worst_ratio, abs(g) / bound)
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 120
    acceptance_log("5 bound sweep (n<=14, 1000 tables each)", ok, f"violations={violations}, max ratio={worst_ratio:.4f}, {elapsed:.1f}s")
    assert ok


def test_6_proposition_reduction(acceptance_log):
    t0 = time.perf_counter()
    rng = np.random.default_rng(600)
    mismatches = failures = 0
    for i in range(500):
        n = int(rng.integers(1, 9))
        p = random_problem(n, rng, "rational" if i % 2 else "integer")
        mismatches += epsilon_sum(p) != epsilon_sum_brute(p)
        failures += not proposition_check(p)["ok"]
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and failures == 0 and elapsed < 120
    acceptance_log("6 prefix-sign sum: layered vs brute (500 instances)", ok, f"mismatches={mismatches}, bound failures={failures}, {elapsed:.1f}s")
    assert ok


def test_7_tightness_small_n(acceptance_log):
    t0 = time.perf_counter()
    ex = {n: exhaustive_max(n) for n in range(1, 5)}
    local = {n: local_search_max(n, seed=7, restarts=16)["max_abs_g"] for n in (3, 4)}
    elapsed = time.perf_counter() - t0
    ok = (
        ex[1]["max_abs_g"] == 1
        and ex[2]["max_abs_g"] == 2
        and ex[2]["ratio"] == 1.0
        and all(ex[n]["max_abs_g"] == FROZEN_MAX[n] for n in (3, 4))
        and all(local[n] == FROZEN_MAX[n] for n in (3, 4))
        and elapsed < 60
    )
    detail = ", ".join(f"n={n}: max={r['max_abs_g']} ratio={r['ratio']:.4f}" for n, r in ex.items())
    acceptance_log("7 tightness at small n", ok, f"{detail}; local search n=3,4: {local[3]}, {local[4]}; {elapsed:.1f}s")
    assert ok


def test_8_multilinearity(acceptance_log):
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(1, 6):
        for seed in _seeds(800 + n, 50):
            f = weight_table_random(n, seed, "uniform")
            for S in range(1, 1 << n):
                zero = g_top(f.with_value(S, 0.0))
                mean = (g_top(f.with_value(S, 1.0)) + g_top(f.with_value(S, -1.0))) / 2
                worst = max(worst, abs(zero - mean))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 60
    acceptance_log("8 multilinearity (n<=5)", ok, f"max diff={worst:.2e}, {elapsed:.1f}s")
    assert ok


def test_9_performance_n24(acceptance_log):
    f = weight_table_random(24, 24, "uniform")
    t0 = time.perf_counter()
    g1 = g_top(f, threads=1)
    single = time.perf_counter() - t0
    threads = max(2, os.cpu_count() or 1)
    t0 = time.perf_counter()
    gp = g_top(f, threads=threads)
    parallel = time.perf_counter() - t0
    ok = single < 60 and gp == g1 and abs(g1) <= 24.0**12
    acceptance_log(
        "9 performance: layered g(N) at n=24",
        ok,
        f"backend={_backend.backend_name()}, 1 thread {single:.2f}s, {threads} threads {parallel:.2f}s "
        f"(speedup {single / parallel:.2f}x on {os.cpu_count()} cpu), results identical={gp == g1}",
    )
    assert ok
