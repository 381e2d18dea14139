import math

import numpy as np
import pytest
from scipy import stats as sps

from levywalk import (PathTooShort, SpectralMeasure, TailLaw,
                      build_subordinator_path, draw_pareto,
                      extend_subordinator_path, inverse_subordinator,
                      positive_stable, sample_direction, sample_pareto,
                      sample_stable_subordinator, stream_rng)


def test_stream_rng_reproducible_and_disjoint():
    a = stream_rng(7, 3, 11).random(8)
    b = stream_rng(7, 3, 11).random(8)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, stream_rng(7, 3, 12).random(8))
    assert not np.array_equal(a, stream_rng(7, 4, 11).random(8))
    assert not np.array_equal(a, stream_rng(8, 3, 11).random(8))


class TestTailLaw:
    def test_validation(self):
        for bad in (0.0, 1.0, -0.2, 1.7):
            with pytest.raises(ValueError):
                TailLaw(bad)
        with pytest.raises(ValueError):
            TailLaw(0.5, scale=0.0)
        with pytest.raises(ValueError):
            TailLaw(0.5, cutoff=-1.0)

    def test_survival(self):
        law = TailLaw(0.5)
        assert law.survival(4.0) == pytest.approx(0.5)
        assert law.survival(0.5) == 1.0  # below cutoff
        law2 = TailLaw(0.8, cutoff=2.0)
        assert law2.survival(2.0) == pytest.approx(1.0)
        assert law2.survival(20.0) == pytest.approx(10.0**-0.8)

    def test_tail_constant(self):
        assert TailLaw(0.5, cutoff=4.0).tail_constant == pytest.approx(2.0)
        assert TailLaw(0.3).tail_constant == pytest.approx(1.0)

    def test_stable_normalized(self):
        # cutoff chosen so the tail constant is 1/Gamma(1-index)
        law = TailLaw.stable_normalized(0.5)
        assert law.cutoff == pytest.approx(1.0 / math.pi)
        assert law.tail_constant == pytest.approx(1.0 / math.sqrt(math.pi))
        law = TailLaw.stable_normalized(0.8)
        assert law.tail_constant == pytest.approx(1.0 / math.gamma(0.2))


class TestParetoSampling:
    def test_inversion_formula(self):
        assert sample_pareto(TailLaw(0.5), 0.25) == pytest.approx(16.0)
        assert sample_pareto(TailLaw(0.8, cutoff=2.0), 0.5) == pytest.approx(2.0 * 2.0**1.25)
        # u -> 1 collapses to the support boundary
        assert sample_pareto(TailLaw(0.5), 1.0 - 1e-12) == pytest.approx(1.0, abs=1e-9)

    def test_domain_errors(self):
        for u in (0.0, 1.0, -0.1, 1.1):
            with pytest.raises(ValueError):
                sample_pareto(TailLaw(0.5), u)
        with pytest.raises(ValueError):
            sample_pareto(TailLaw(0.5, scale=2.0), 0.5)

    def test_survival_spot_checks(self):
        # empirical survival at {2,10,100} * cutoff within 3 MC sigma
        n = 10**6
        for i, law in enumerate((TailLaw(0.3), TailLaw(0.5), TailLaw(0.8, cutoff=2.5))):
            x = draw_pareto(law, stream_rng(0, 900, i), n)
            assert x.min() >= law.cutoff
            for mult in (2.0, 10.0, 100.0):
                z = mult * law.cutoff
                p = float(law.survival(z))
                se = math.sqrt(p * (1.0 - p) / n)
                assert abs(np.mean(x > z) - p) < 3.0 * se


class TestSpectralMeasure:
    def test_atom_validation(self):
        with pytest.raises(ValueError):
            SpectralMeasure.atoms([[1.0, 1.0]], [1.0])  # not unit norm
        with pytest.raises(ValueError):
            SpectralMeasure.atoms([[1.0, 0.0]], [0.7])  # probs sum != 1
        with pytest.raises(ValueError):
            SpectralMeasure.atoms([[1.0, 0.0], [0.0, 1.0]], [1.2, -0.2])
        with pytest.raises(ValueError):
            SpectralMeasure(0)

    def test_degenerate_atom(self):
        m = SpectralMeasure.atoms([[1.0, 0.0]], [1.0])
        u = sample_direction(m, stream_rng(0, 901, 0), 100)
        np.testing.assert_array_equal(u, np.tile([1.0, 0.0], (100, 1)))

    def test_two_sided_d1_mean(self):
        m = SpectralMeasure.atoms([[1.0], [-1.0]], [0.5, 0.5])
        u = sample_direction(m, stream_rng(0, 901, 1), 10**6)
        assert abs(u.mean()) < 3.0 / math.sqrt(10**6)

    def test_uniform_sphere_norms(self):
        for d in (1, 2, 5):
            u = sample_direction(SpectralMeasure.uniform(d), stream_rng(0, 901, d), 5000)
            assert u.shape == (5000, d)
            np.testing.assert_allclose(np.linalg.norm(u, axis=1), 1.0, rtol=0, atol=1e-12)

    def test_uniform_isotropy(self):
        u = sample_direction(SpectralMeasure.uniform(3), stream_rng(0, 902, 0), 10**5)
        # each coordinate has mean 0, variance 1/3
        assert np.all(np.abs(u.mean(axis=0)) < 4.0 / math.sqrt(3 * 10**5))

    def test_single_draw_shape(self):
        u = sample_direction(SpectralMeasure.uniform(2), stream_rng(0, 902, 1))
        assert u.shape == (2,)


class TestPositiveStable:
    def test_laplace_transform_grid(self):
        for i, alpha in enumerate((0.3, 0.5, 0.8)):
            x = positive_stable(alpha, stream_rng(0, 903, i), 10**5)
            for s in (0.5, 1.0, 2.0):
                vals = np.exp(-s * x)
                se = vals.std(ddof=1) / math.sqrt(vals.size)
                assert abs(vals.mean() - math.exp(-(s**alpha))) < 3.0 * se

    def test_alpha_half_closed_form(self):
        # alpha = 1/2 positive stable with E exp(-sX) = exp(-sqrt(s)) is
        # the Levy distribution with scale 1/2
        x = positive_stable(0.5, stream_rng(0, 903, 10), 2 * 10**4)
        ks = sps.kstest(x, sps.levy(scale=0.5).cdf).statistic
        assert ks < 0.015

    def test_domain(self):
        with pytest.raises(ValueError):
            positive_stable(1.0, stream_rng(0, 903, 20))
        with pytest.raises(ValueError):
            positive_stable(0.0, stream_rng(0, 903, 20))


class TestSubordinator:
    def test_zero_time(self):
        assert sample_stable_subordinator(0.5, 0.0, stream_rng(0, 904, 0)) == 0.0

    def test_time_scaling_shares_draws(self):
        s = sample_stable_subordinator(0.5, 4.0, stream_rng(0, 904, 1))
        x = float(positive_stable(0.5, stream_rng(0, 904, 1)))
        assert s == pytest.approx(16.0 * x, rel=1e-15)

    def test_self_similarity(self):
        from levywalk import ks_distance
        rng = stream_rng(0, 904, 2)
        s2 = 2.0 ** 2 * positive_stable(0.5, rng, 10**4)
        s1 = np.array([sample_stable_subordinator(0.5, 2.0, stream_rng(0, 905, j))
                       for j in range(10**4)])
        assert ks_distance(s1, s2) < 0.03


class TestSubordinatorPath:
    def test_shape_and_monotonicity(self):
        path = build_subordinator_path(0.5, 1.0, 0.01, stream_rng(0, 906, 0))
        assert len(path.increments) == 100
        assert path.cumulative[0] == 0.0
        assert np.all(np.diff(path.cumulative) > 0.0)
        assert path.tau_max == pytest.approx(1.0)

    def test_infinite_divisibility(self):
        from levywalk import ks_distance
        # sum of 10 grid increments over [0,1] is one S(1) draw
        sums = np.array([build_subordinator_path(0.5, 1.0, 0.1, stream_rng(0, 907, j))
                         .cumulative[-1] for j in range(10**4)])
        direct = positive_stable(0.5, stream_rng(0, 907, 10**5), 10**4)
        assert ks_distance(sums, direct) < 0.03

    def test_degenerate_marks_reproduce_increments(self):
        m = SpectralMeasure.atoms([[1.0, 0.0]], [1.0])
        path = build_subordinator_path(0.5, 1.0, 0.05, stream_rng(0, 906, 1),
                                       mark_jumps=True, velocity_law=1.0, measure=m)
        jumps = path.spatial_jumps()
        np.testing.assert_allclose(jumps[:, 0], path.increments, rtol=1e-15)
        np.testing.assert_array_equal(jumps[:, 1], 0.0)

    def test_mark_requirements(self):
        with pytest.raises(ValueError):
            build_subordinator_path(0.5, 1.0, 0.1, stream_rng(0, 906, 2), mark_jumps=True)
        with pytest.raises(ValueError):
            build_subordinator_path(0.5, 1.0, 2.0, stream_rng(0, 906, 3))  # delta > tau_max

    def test_extend_preserves_prefix(self):
        rng = stream_rng(0, 906, 4)
        path = build_subordinator_path(0.5, 1.0, 0.1, rng)
        longer = extend_subordinator_path(path, rng, 1.0)
        assert longer.tau_max == pytest.approx(2.0)
        np.testing.assert_array_equal(longer.increments[:10], path.increments)
        np.testing.assert_array_equal(longer.cumulative[:11], path.cumulative[:11])


class TestInverseSubordinator:
    def path(self):
        return build_subordinator_path(0.5, 1.5, 0.5, stream_rng(0, 908, 0)).__class__(
            alpha=0.5, delta_tau=0.5, increments=np.array([1.0, 2.0, 3.0]))

    def test_hand_path(self):
        p = self.path()  # cumulative [0, 1, 3, 6]
        assert inverse_subordinator(p, 0.0) == pytest.approx(0.5)
        assert inverse_subordinator(p, 0.5) == pytest.approx(0.5)
        assert inverse_subordinator(p, 1.0) == pytest.approx(1.0)  # strict exceedance
        assert inverse_subordinator(p, 2.99) == pytest.approx(1.0)
        assert inverse_subordinator(p, 3.0) == pytest.approx(1.5)
        assert inverse_subordinator(p, 5.999) == pytest.approx(1.5)
        with pytest.raises(PathTooShort):
            inverse_subordinator(p, 6.0)
        with pytest.raises(ValueError):
            inverse_subordinator(p, -0.1)

    def test_monotone_and_right_continuous(self):
        p = build_subordinator_path(0.5, 1.0, 0.01, stream_rng(0, 908, 1))
        ts = np.sort(stream_rng(0, 908, 2).random(500) * p.cumulative[-1] * 0.99)
        taus = inverse_subordinator(p, ts)
        assert np.all(np.diff(taus) >= 0.0)
        # right continuity at the jump values: value at C_k holds just after
        for k in (1, 7, 42):
            ck = p.cumulative[k]
            eps = (p.cumulative[k + 1] - ck) * 1e-6
            assert inverse_subordinator(p, ck) == inverse_subordinator(p, ck + eps)
            assert inverse_subordinator(p, ck - eps) < inverse_subordinator(p, ck)

    def test_mean_matches_mittag_leffler_moment(self):
        # E[S^{-1}(1)] = 1/Gamma(1+alpha) = 2/sqrt(pi) at alpha = 1/2
        taus = []
        for j in range(10**4):
            rng = stream_rng(0, 909, j)
            p = build_subordinator_path(0.5, 2.0, 1e-3, rng)
            while True:
                try:
                    taus.append(inverse_subordinator(p, 1.0))
                    break
                except PathTooShort:
                    p = extend_subordinator_path(p, rng, p.tau_max)
        mean = np.mean(taus)
        target = 2.0 / math.sqrt(math.pi)
        assert abs(mean - target) < 0.05 * target
