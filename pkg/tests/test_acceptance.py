"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report. Tolerances are pinned here and nowhere else.
"""

import itertools
import math
import time

import numpy as np
import pytest

from permest.binary_bias import (
    build_binary_space,
    exhaustive_binary_space,
    measure_bias,
)
from permest.complex_bias import (
    build_complex_space,
    exhaustive_complex_space,
    measure_complex_bias,
    strong_fraction,
    theory_seed_bits,
)
from permest.estimators import (
    estimate_derandomized,
    estimate_derandomized_multi,
    estimate_random,
    gengly_batch,
    gly_batch,
    permanent_upper_bound,
)
from permest.exact import (
    permanent_gengly_exact,
    permanent_glynn_exact,
    permanent_naive,
    permanent_ryser,
)
from permest.matrices import MultiplicitySpec, expand, spectral_norm
from permest.optics import amplitude_exact, bunching_bound, saturating_outcome, saturating_unitary

from oracles import (
    compositions,
    positive_compositions,
    random_complex,
    random_mults,
    random_nonneg,
)


def report(num: int, text: str) -> None:
    print(f"\nACCEPTANCE {num:02d} PASS: {text}")


def pairwise_close(x, y, rel=1e-9, floor=1e-12):
    return abs(x - y) <= rel * max(abs(x), abs(y)) + floor


def all_sign_rows(n: int) -> np.ndarray:
    t = np.arange(1 << n, dtype=np.int64)
    return 1.0 - 2.0 * ((t[:, None] >> np.arange(n)) & 1).astype(np.float64)


def test_c01_exact_method_agreement():
    rng = np.random.default_rng(1001)
    start = time.perf_counter()
    for _ in range(200):
        n = int(rng.integers(2, 8))
        a = random_complex(rng, n)
        p_naive = permanent_naive(a)
        p_ryser = permanent_ryser(a)
        p_glynn = permanent_glynn_exact(a)
        assert pairwise_close(p_naive, p_ryser)
        assert pairwise_close(p_naive, p_glynn)
        assert pairwise_close(p_ryser, p_glynn)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    report(1, f"200 matrices, naive/Ryser/Glynn pairwise within 1e-9 ({elapsed:.2f}s)")


def test_c02_gly_unbiased_exhaustive():
    rng = np.random.default_rng(1002)
    for _ in range(50):
        n = int(rng.integers(2, 8))
        a = random_complex(rng, n)
        mean = complex(np.mean(gly_batch(a, all_sign_rows(n))))
        ref = permanent_naive(a)
        assert abs(mean - ref) <= 1e-10 * max(1.0, abs(ref))
    report(2, "exhaustive sign-vector mean equals the permanent within 1e-10, 50 matrices")


def test_c03_gengly_unbiased_exhaustive():
    rng = np.random.default_rng(1003)
    for trial in range(50):
        n = int(rng.integers(2, 8))
        mults = random_mults(rng, n)
        grid = math.prod(s + 1 for s in mults)
        assert grid <= 4096
        b = random_complex(rng, n, len(mults)) if trial % 2 else random_nonneg(rng, n, len(mults))
        spec = MultiplicitySpec(b, mults)
        got = permanent_gengly_exact(spec)
        ref = permanent_naive(expand(spec))
        assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref))
    report(3, "exhaustive roots-of-unity mean equals Per(expand) within 1e-9, 50 specs")


def test_c04_estimator_bounds_never_exceeded():
    rng = np.random.default_rng(1004)
    checked = 0
    for _ in range(50):  # 50 instances x 100 samples, binary case
        n = int(rng.integers(2, 8))
        a = random_complex(rng, n)
        bound = spectral_norm(a).value ** n
        signs = 1.0 - 2.0 * rng.integers(0, 2, size=(100, n)).astype(np.float64)
        vals = np.abs(gly_batch(a, signs))
        assert np.all(vals <= bound * (1 + 1e-9) + 1e-12)
        checked += 100
    for _ in range(50):  # 50 specs x 100 samples, multiplicity case
        n = int(rng.integers(2, 8))
        mults = random_mults(rng, n)
        spec = MultiplicitySpec(random_complex(rng, n, len(mults)), mults)
        bound = permanent_upper_bound(spec)
        phases = np.column_stack(
            [rng.integers(0, s + 1, size=100) for s in mults]
        )
        vals = np.abs(gengly_batch(spec, phases))
        assert np.all(vals <= bound * (1 + 1e-9) + 1e-12)
        checked += 100
    assert checked == 10_000
    report(4, "10^4 random (instance, sample) pairs stay inside the magnitude bounds")


def test_c05_permanent_upper_bound_and_tightness():
    rng = np.random.default_rng(1005)
    for _ in range(500):
        n = int(rng.integers(2, 8))
        mults = random_mults(rng, n)
        spec = MultiplicitySpec(random_complex(rng, n, len(mults)), mults)
        per = permanent_naive(expand(spec))
        assert abs(per) <= permanent_upper_bound(spec) * (1 + 1e-9) + 1e-12
    count = 0
    for n in range(1, 7):
        for pattern in positive_compositions(n):
            u = saturating_unitary(pattern)
            res = amplitude_exact(u, saturating_outcome(pattern), (1,) * n)
            assert abs(res.probability - bunching_bound(pattern)) <= 1e-9
            count += 1
    report(5, f"bound dominates 500 random specs; tight on all {count} block-Fourier patterns n<=6")


def test_c06_binary_derandomization():
    rng = np.random.default_rng(1006)
    start = time.perf_counter()
    spaces = {}
    for _ in range(100):
        n = int(rng.integers(2, 13))
        a = random_nonneg(rng, n)
        exact = permanent_ryser(a)
        norm_pow = spectral_norm(a).value ** n
        for eps in (0.5, 0.25, 0.1):
            if (n, eps) not in spaces:
                spaces[(n, eps)] = build_binary_space(n, eps)
            est = estimate_derandomized(a, spaces[(n, eps)])
            assert abs(est.value - exact) <= eps * norm_pow
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    report(6, f"deterministic error <= eps*|A|^n on 100 matrices x 3 eps ({elapsed:.1f}s)")


def test_c07_complex_derandomization():
    rng = np.random.default_rng(1007)
    for _ in range(100):
        k = int(rng.integers(1, 5))
        mults = tuple(int(rng.integers(1, 4)) for _ in range(k))
        n = sum(mults)
        b = random_nonneg(rng, n, k)
        spec = MultiplicitySpec(b, mults)
        exact = permanent_naive(expand(spec)) if n <= 10 else permanent_ryser(expand(spec))
        bound = permanent_upper_bound(spec)
        for eps in (0.5, 0.25, 0.1):
            space = build_complex_space(tuple(s + 1 for s in mults), eps)
            est = estimate_derandomized_multi(spec, space)
            assert abs(est.value - exact) <= eps * bound + 1e-9 * max(1.0, bound)
    # pipeline-constructed space: certainty at its measured bias
    assembled = build_complex_space((2, 2), 0.55, force_construction=True, ell=3)
    eps_hat = measure_complex_bias(assembled)
    for _ in range(20):
        b = random_nonneg(rng, 2, 2)
        spec = MultiplicitySpec(b, (1, 1))
        exact = permanent_naive(expand(spec))
        est = estimate_derandomized_multi(spec, assembled)
        assert abs(est.value - exact) <= eps_hat * permanent_upper_bound(spec) + 1e-12
    report(7, "complex derandomization inside eps*bound on 100 specs x 3 eps, plus assembled space")


def test_c08_bias_audits():
    for n in (2, 4, 8, 12):
        for eps in (0.5, 0.25, 0.1):
            space = build_binary_space(n, eps)
            assert measure_bias(space) <= eps
    for n in (6, 10, 12):
        assert measure_bias(exhaustive_binary_space(n)) <= 1e-12
    for moduli in ((2, 2), (3, 4), (2, 3, 2)):
        assert measure_complex_bias(exhaustive_complex_space(moduli)) <= 1e-12
    for moduli, eps, ell in (((3,), 0.55, 3), ((2, 2), 0.55, 3)):
        space = build_complex_space(moduli, eps, force_construction=True, ell=ell)
        assert measure_complex_bias(space) <= space.declared_epsilon
    report(8, "every constructed space audits at or below its declared bias; uniform spaces at 0")


def test_c09_strongness_floor():
    cases = [
        (2,), (3,), (4,),
        (2, 3), (4, 4),
        (2, 3, 2), (4, 3, 2), (4, 4, 4),
        (2, 2, 2, 2),
    ]
    total = 0
    for moduli in cases:
        for e in itertools.product(*[range(m) for m in moduli]):
            if not any(e):
                continue
            frac = strong_fraction(moduli, e)
            assert frac >= 1.0 / 16.0, (moduli, e, frac)
            total += 1
    report(9, f"pi/8-strong fraction >= 1/16 for all {total} nontrivial characters, k <= 4")


def test_c10_optics_reference_values():
    r = 1.0 / math.sqrt(2.0)
    hom = np.array([[r, r], [r, -r]])
    probs = [
        amplitude_exact(hom, out, (1, 1)).probability for out in ((2, 0), (1, 1), (0, 2))
    ]
    assert abs(probs[0] - 0.5) <= 1e-12
    assert abs(probs[1] - 0.0) <= 1e-12
    assert abs(probs[2] - 0.5) <= 1e-12
    for n in range(1, 11):
        assert abs(bunching_bound((n,)) - math.factorial(n) / n**n) <= 1e-12
    rng = np.random.default_rng(1010)
    for k, n, in_pattern in [(2, 2, (1, 1)), (3, 3, (1, 1, 1)), (3, 4, (2, 1, 1)), (2, 4, (2, 2))]:
        z = random_complex(rng, k)
        u, _ = np.linalg.qr(z)
        total = sum(
            amplitude_exact(u, out, in_pattern).probability for out in compositions(n, k)
        )
        assert abs(total - 1.0) <= 1e-6
    report(10, "Hong-Ou-Mandel (1/2, 0, 1/2); n!/n^n closed form n<=10; output normalization")


def test_c11_randomized_mode_statistics():
    rng = np.random.default_rng(1011)
    a = random_complex(rng, 12)
    exact = permanent_ryser(a)
    norm_pow = spectral_norm(a).value ** 12
    failures = 0
    for seed in range(100):
        est = estimate_random(a, 0.05, 0.01, rng_seed=seed)
        if abs(est.value - exact) > 0.05 * norm_pow:
            failures += 1
    assert failures <= 3
    report(11, f"100 seeded runs at eps=0.05, delta=0.01: {failures} exceeded the guarantee (<= 3)")


def test_c12_glynn_performance_n20():
    rng = np.random.default_rng(1012)
    a = random_complex(rng, 20)
    start = time.perf_counter()
    value = permanent_glynn_exact(a)
    elapsed = time.perf_counter() - start
    assert elapsed <= 5.0
    assert np.isfinite(value.real) and np.isfinite(value.imag)
    report(12, f"Glynn-exact at n=20 in {elapsed:.2f}s (budget 5s)")


def test_seed_length_grows_logarithmically():
    # binary: 2*ceil(log2(n/eps)) bits, verified against an explicit envelope
    for n in (4, 8, 16, 24):
        for eps in (0.5, 0.1, 0.02):
            space = build_binary_space(n, eps)
            assert space.seed_bits <= 2 * (math.log2(n) + math.log2(1 / eps)) + 4
    # complex: the full-strength plan grows linearly in log(1/eps) and log n
    for moduli in ((2,), (2, 3, 2)):
        bits = [theory_seed_bits(moduli, eps) for eps in (0.5, 0.05, 0.005)]
        assert bits[0] < bits[1] < bits[2]
        growth1 = bits[1] - bits[0]
        growth2 = bits[2] - bits[1]
        assert growth2 <= 1.5 * growth1 + 64  # near-linear in log(1/eps)
    report(0, "seed lengths grow logarithmically across the (n, eps) grid")
