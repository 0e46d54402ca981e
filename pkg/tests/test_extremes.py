import math

import numpy as np
import pytest
from scipy.integrate import quad

from mobiuswalk import extremes, seqgen


def test_segment_extremes_monotone_walks():
    ones = seqgen.BitSequence.from_bits(1, np.ones(64, dtype=np.uint8))
    ext = extremes.segment_extremes(ones, 1, 64)
    assert ext.t_max == 64 and ext.t_min == 0 and ext.tau == 64
    zeros = seqgen.BitSequence.from_bits(1, np.zeros(64, dtype=np.uint8))
    ext = extremes.segment_extremes(zeros, 1, 64)
    assert ext.t_max == 0 and ext.t_min == 64 and ext.tau == -64


def test_segment_extremes_toy_walk():
    # walk 1,0,-1,-2,-1,0,1,2,1,2: min -2 first reached at step 4,
    # max 2 first reached at step 8
    bits = np.array([1, 0, 0, 0, 1, 1, 1, 1, 0, 1], dtype=np.uint8)
    seq = seqgen.BitSequence.from_bits(1, bits)
    ext = extremes.segment_extremes(seq, 1, 10)
    assert (ext.t_min, ext.t_max, ext.tau) == (4, 8, 4)


def test_first_attainment_ties():
    # walk 1,0,1,0: max 1 first at t=1; min 0 first at t=0
    bits = np.array([1, 0, 1, 0], dtype=np.uint8)
    seq = seqgen.BitSequence.from_bits(1, bits)
    ext = extremes.segment_extremes(seq, 1, 4)
    assert ext.t_max == 1 and ext.t_min == 0


def test_batch_matches_single():
    seq = seqgen.restricted_sequence(1, 6000)
    t_min, t_max = extremes.segment_extremes_batch(seq, 1, 12, 500)
    for i in range(12):
        ext = extremes.segment_extremes(seq, 1 + 500 * i, 500)
        assert t_min[i] == ext.t_min and t_max[i] == ext.t_max


def test_mori_f_properties():
    # even, positive on its domain
    for x in (0.05, 0.2, 0.5, 0.9, 0.999):
        assert extremes.mori_f(x) > 0
        assert extremes.mori_f(-x) == extremes.mori_f(x)
    with pytest.raises(ValueError):
        extremes.mori_f(0.0)
    with pytest.raises(ValueError):
        extremes.mori_f(1.5)
    # vanishes super fast toward 0, approaches 1/2 toward 1
    assert extremes.mori_f(1e-5) < 1e-30
    assert abs(extremes.mori_f(1 - 1e-7) - 0.5) < 1e-3


def test_mori_normalization():
    val, _ = quad(lambda x: extremes._mori_f_safe(x), 0, 1, limit=400)
    assert abs(val - 0.5) < 1e-6


def test_mori_moments_closed_forms():
    closed = extremes.tau_closed_moments()
    assert closed[1] == pytest.approx((4 * math.log(2) - 1) / 3)
    assert closed[1] == pytest.approx(0.5908, abs=1e-4)
    assert closed[2] == pytest.approx(0.4009, abs=1e-4)
    table = dict(extremes.tau_moment_table(4))
    for order, want in closed.items():
        assert abs(table[order] - want) < 1e-8


def test_mori_moment_table():
    reference = [0.5908, 0.4009, 0.2972, 0.2339, 0.1918,
                 0.1621, 0.1401, 0.1233, 0.1100, 0.0992]
    for (order, val), want in zip(extremes.tau_moment_table(10), reference):
        assert abs(val - want) < 1e-4, order


def test_discrete_argmin_pmf_brute_force():
    # enumerate all walks for small T
    for T in (6, 7):
        pmf = np.zeros(T + 1)
        for mask in range(2 ** T):
            steps = [1 if (mask >> i) & 1 else -1 for i in range(T)]
            walk = np.concatenate([[0], np.cumsum(steps)])
            pmf[int(np.argmin(walk))] += 1
        pmf /= 2 ** T
        assert np.allclose(extremes.discrete_argmin_pmf(T), pmf, atol=1e-12)


def test_arcsine_compare_synthetic():
    # inverse-CDF sampler of the exact arcsine law
    rng = np.random.default_rng(123)
    passes = 0
    for trial in range(40):
        u = rng.uniform(0, 1, 5000)
        x = np.sin(math.pi * u / 2.0) ** 2
        rep = extremes.arcsine_compare(x)
        passes += rep.p_value.value >= 0.01
    assert passes >= 39
    rep = extremes.arcsine_compare(np.sin(math.pi * rng.uniform(0, 1, 20000) / 2) ** 2)
    assert rep.reference_moments == extremes.ARCSINE_MOMENTS
    for got, want in zip(rep.sample_moments, rep.reference_moments):
        assert abs(got - want) / want < 0.03


def test_arcsine_compare_exact_null():
    # random-walk segments against the finite-T law: P should not collapse
    rng = np.random.default_rng(5)
    T = 2000
    steps = (rng.integers(0, 2, size=(4000, T), dtype=np.int8) * 2 - 1)
    t_min, _ = extremes.walk_extremes(steps)
    rep = extremes.arcsine_compare(t_min / T, T=T)
    assert rep.p_value.value > 0.001
    with pytest.raises(ValueError):
        extremes.arcsine_compare([0.5] * 10)


def test_tau_compare_synthetic_walks():
    rng = np.random.default_rng(31)
    T = 2000
    steps = (rng.integers(0, 2, size=(12000, T), dtype=np.int8) * 2 - 1)
    t_min, t_max = extremes.walk_extremes(steps)
    rep = extremes.tau_compare((t_max - t_min) / T)
    assert rep.p_value.value > 0.001
    for got, want in zip(rep.sample_moments[:4], rep.reference_moments[:4]):
        assert abs(got - want) / want < 0.01 + 0.05 * (want < 0.3)
    with pytest.raises(ValueError):
        extremes.tau_compare([0.5] * 10)


def test_histogram_rows():
    rows = extremes.histogram_rows(np.linspace(0.01, 0.99, 1000), 10, (0.0, 1.0),
                                   lambda v: 1.0)
    assert len(rows) == 10
    assert sum(r[1] for r in rows) == 1000
    total = sum(r[2] for r in rows) * 0.1
    assert total == pytest.approx(1.0)
