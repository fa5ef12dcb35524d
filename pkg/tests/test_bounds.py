import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrdd import (
    Bandwidths,
    BoundaryEstimates,
    BoundsStatus,
    FuzzyInputs,
    SideCounts,
    TypeAssumption,
    binary_sharp_gfuncs,
    covariate_bounds,
    fuzzy_bounds,
    mixed_bounds,
    oracle_appendix_d,
    sharp_type2_bounds,
    type2_bounds,
    type3_bounds,
    type4_bounds,
    weighted_trimmed_means,
)
from mrdd.errors import EmptyInput, EmptyWindow, InvalidConfig, InvalidGrid, InvalidOutcomeRange, MixedTargets


def make_be(mu_plus, mu_minus, r, f_plus=1.0):
    """BoundaryEstimates carrier for scalar bound inputs."""
    return BoundaryEstimates(
        mu_plus=mu_plus,
        mu_minus=mu_minus,
        f_plus=f_plus,
        f_minus=r * f_plus,
        r=r,
        bandwidths=Bandwidths(1.0, 1.0, 1.0, 1.0),
        n_effective=SideCounts(0, 0, 0, 0),
    )


def binary_window(mu_plus, y_low=0.0, y_high=1.0):
    """Two-atom window over {y_low, y_high} whose weighted mean is mu_plus."""
    w_high = (mu_plus - y_low) / (y_high - y_low)
    return np.array([[1.0 - w_high, y_low], [w_high, y_high]])


# strategy for valid scalar bound inputs: y_low < y_high, means inside range
def bound_tuples(min_r=0.05, max_r=1.0):
    return st.tuples(
        st.floats(0.0, 1.0),          # mu_plus position within range
        st.floats(0.0, 1.0),          # mu_minus position within range
        st.floats(min_r, max_r),      # r
        st.floats(-5.0, 5.0),         # y_low
        st.floats(0.01, 10.0),        # range width
    ).map(
        lambda t: (
            t[3] + t[0] * t[4],       # mu_plus
            t[3] + t[1] * t[4],       # mu_minus
            t[2],
            t[3],
            t[3] + t[4],
        )
    )


class TestCrudeBounds:
    def test_type2_oracle_row1(self):
        row = oracle_appendix_d(0.1, 0.05)
        be = make_be(row.mu_plus, row.mu_minus, row.r)
        res = type2_bounds(be, 0.0, 1.0)
        assert res.lower == pytest.approx(0.060, abs=0.002)
        assert res.upper == pytest.approx(0.185, abs=0.002)
        assert res.status is BoundsStatus.INFORMATIVE

    def test_type2_point_identified_at_r_one(self):
        res = type2_bounds(make_be(0.5, 0.3, 1.0), 0.0, 1.0)
        assert res.lower == pytest.approx(0.2, abs=1e-12)
        assert res.upper == pytest.approx(0.2, abs=1e-12)

    def test_type2_hand_computed(self):
        # both branches evaluated by hand at r=0.8, mu+=0.6, mu-=0.5:
        # lower branches (0, 0), upper branches (0.2, 0.25)
        res = type2_bounds(make_be(0.6, 0.5, 0.8), 0.0, 1.0)
        assert res.lower == pytest.approx(0.0, abs=1e-12)
        assert res.upper == pytest.approx(0.25, abs=1e-12)

    def test_type3_hand_computed_and_width(self):
        res = type3_bounds(make_be(0.6, 0.5, 0.8), 0.0, 1.0)
        assert res.lower == pytest.approx(0.0, abs=1e-12)
        assert res.upper == pytest.approx(0.2, abs=1e-12)
        assert res.upper - res.lower == pytest.approx((1 - 0.8) * 1.0, abs=1e-12)

    def test_type3_point_at_r_one(self):
        res = type3_bounds(make_be(0.45, 0.4, 1.0), -1.0, 1.0)
        assert res.lower == pytest.approx(0.05, abs=1e-12)
        assert res.upper == pytest.approx(0.05, abs=1e-12)

    def test_type3_lower_is_first_type2_branch(self):
        be = make_be(0.7, 0.2, 0.6)
        l1 = (0.7 - 1.0) - 0.6 * (0.2 - 1.0)
        assert type3_bounds(be, 0.0, 1.0).lower == pytest.approx(l1, abs=1e-12)

    def test_type4_hand_computed_and_width(self):
        res = type4_bounds(make_be(0.6, 0.5, 0.8), 0.0, 1.0)
        assert res.lower == pytest.approx(0.0, abs=1e-12)
        assert res.upper == pytest.approx(0.25, abs=1e-12)
        assert res.upper - res.lower == pytest.approx((1 / 0.8 - 1) * 1.0, abs=1e-12)

    def test_type4_width_matches_published_set(self):
        # r = 0.792 on a unit range gives width 0.2626, matching the
        # published interval [0.363, 0.627] of width 0.264 within rounding
        res = type4_bounds(make_be(0.5, 0.4, 0.792), 0.0, 1.0)
        width = res.upper - res.lower
        assert width == pytest.approx(1 / 0.792 - 1, abs=1e-12)
        assert width == pytest.approx(0.627 - 0.363, abs=0.005)

    def test_mixed_equals_type2(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            mu_p, mu_m = rng.uniform(0, 1, 2)
            r = rng.uniform(0.1, 1.0)
            be = make_be(mu_p, mu_m, r)
            a = type2_bounds(be, 0.0, 1.0)
            b = mixed_bounds(be, 0.0, 1.0)
            assert a.lower == b.lower and a.upper == b.upper
            assert b.assumption is TypeAssumption.MIXED

    def test_mixed_oracle_row2(self):
        row = oracle_appendix_d(0.1, 0.3)
        res = mixed_bounds(make_be(row.mu_plus, row.mu_minus, row.r), 0.0, 1.0)
        assert res.lower == pytest.approx(0.032, abs=0.002)
        assert res.upper == pytest.approx(0.190, abs=0.002)

    def test_refuted_beyond_tolerance(self):
        res = type2_bounds(make_be(0.5, 0.5, 1.05), 0.0, 1.0)
        assert res.status is BoundsStatus.REFUTED
        assert res.note is not None

    def test_r_within_tolerance_clamped_to_point(self):
        res = type3_bounds(make_be(0.5, 0.4, 1.01), 0.0, 1.0)
        assert res.status is BoundsStatus.INFORMATIVE
        assert res.lower <= res.upper

    def test_invalid_range(self):
        with pytest.raises(InvalidOutcomeRange):
            type2_bounds(make_be(0.5, 0.5, 0.9), 1.0, 0.0)

    def test_clamp_flag(self):
        # r = 0.1 blows the type-4 interval beyond the logical range
        res = type4_bounds(make_be(0.9, 0.1, 0.1), 0.0, 1.0, clamp=True)
        assert res.clamped
        assert -1.0 <= res.lower <= res.upper <= 1.0


class TestStructuralIdentities:
    @settings(max_examples=300, deadline=None)
    @given(bound_tuples())
    def test_type2_is_branchwise_envelope(self, tup):
        mu_p, mu_m, r, y_lo, y_hi = tup
        be = make_be(mu_p, mu_m, r)
        t2 = type2_bounds(be, y_lo, y_hi)
        t3 = type3_bounds(be, y_lo, y_hi)
        t4 = type4_bounds(be, y_lo, y_hi)
        assert t2.lower == pytest.approx(min(t3.lower, t4.lower), abs=1e-10)
        assert t2.upper == pytest.approx(max(t3.upper, t4.upper), abs=1e-10)

    @settings(max_examples=300, deadline=None)
    @given(bound_tuples())
    def test_width_identities(self, tup):
        mu_p, mu_m, r, y_lo, y_hi = tup
        be = make_be(mu_p, mu_m, r)
        t3 = type3_bounds(be, y_lo, y_hi)
        t4 = type4_bounds(be, y_lo, y_hi)
        assert t3.upper - t3.lower == pytest.approx((1 - r) * (y_hi - y_lo), abs=1e-9)
        assert t4.upper - t4.lower == pytest.approx((1 / r - 1) * (y_hi - y_lo), abs=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(bound_tuples(min_r=0.2, max_r=0.98))
    def test_monotone_in_r(self, tup):
        mu_p, mu_m, r, y_lo, y_hi = tup
        smaller = 0.5 * r
        for op in (type2_bounds, type3_bounds, type4_bounds):
            wide = op(make_be(mu_p, mu_m, smaller), y_lo, y_hi)
            narrow = op(make_be(mu_p, mu_m, r), y_lo, y_hi)
            assert wide.upper - wide.lower >= narrow.upper - narrow.lower - 1e-10

    @settings(max_examples=200, deadline=None)
    @given(bound_tuples(min_r=1.0, max_r=1.0))
    def test_point_estimate_contained_at_r_one(self, tup):
        mu_p, mu_m, _, y_lo, y_hi = tup
        be = make_be(mu_p, mu_m, 1.0)
        point = mu_p - mu_m
        for op in (type2_bounds, type3_bounds, type4_bounds, mixed_bounds):
            res = op(be, y_lo, y_hi)
            assert res.lower - 1e-9 <= point <= res.upper + 1e-9


class TestBinarySharpGfuncs:
    def test_wide_trim(self):
        # (0.5 - 0.8)/0.2 < 0 and 0.5/0.2 > 1, so the pair saturates
        assert binary_sharp_gfuncs(0.5, 0.2) == (0.0, 1.0)

    def test_full_mass_returns_mean(self):
        assert binary_sharp_gfuncs(0.5, 1.0) == (0.5, 0.5)

    def test_zero_tau_convention(self):
        assert binary_sharp_gfuncs(0.5, 0.0) == (0.0, 1.0)

    def test_hand_computed_interior(self):
        g_lo, g_hi = binary_sharp_gfuncs(0.5, 0.6)
        assert g_lo == pytest.approx(1 / 6, abs=1e-12)
        assert g_hi == pytest.approx(5 / 6, abs=1e-12)

    def test_domain_validation(self):
        with pytest.raises(InvalidConfig):
            binary_sharp_gfuncs(1.5, 0.5)
        with pytest.raises(InvalidConfig):
            binary_sharp_gfuncs(0.5, -0.1)


class TestWeightedTrimmedMeans:
    def test_matches_binary_closed_form(self):
        for mu in np.linspace(0.1, 0.9, 9):
            win = binary_window(mu)
            for tau in np.linspace(0.1, 1.0, 10):
                g_lo, g_hi = weighted_trimmed_means(win[:, 1], win[:, 0], float(tau), 0.0, 1.0)
                b_lo, b_hi = binary_sharp_gfuncs(float(mu), float(tau))
                assert g_lo == pytest.approx(b_lo, abs=1e-12)
                assert g_hi == pytest.approx(b_hi, abs=1e-12)

    def test_trimming_mean_identity(self, rng):
        # top-tau mass mean and bottom-(1-tau) mass mean recombine to the mean
        ys = rng.normal(size=300)
        ws = rng.uniform(0.1, 2.0, size=300)
        mean = np.average(ys, weights=ws)
        for tau in (0.1, 0.37, 0.5, 0.93):
            _, g_hi = weighted_trimmed_means(ys, ws, tau, -10, 10)
            g_lo_c, _ = weighted_trimmed_means(ys, ws, 1 - tau, -10, 10)
            assert tau * g_hi + (1 - tau) * g_lo_c == pytest.approx(mean, abs=1e-9)

    def test_monotone_in_tau_and_ordered(self, rng):
        # widening the trimmed slice pulls both extreme means toward the
        # overall mean: the lower one rises, the upper one falls (see the
        # binary closed forms: max{0, (mu - (1 - tau))/tau} rises in tau)
        ys = rng.uniform(-3, 5, size=120)
        ws = rng.uniform(0.5, 1.5, size=120)
        taus = np.linspace(0.05, 1.0, 40)
        g_lo, g_hi = weighted_trimmed_means(ys, ws, taus, -3.5, 5.5)
        assert np.all(np.diff(g_lo) >= -1e-12)  # nondecreasing in tau
        assert np.all(np.diff(g_hi) <= 1e-12)   # nonincreasing in tau
        assert np.all(g_lo <= g_hi + 1e-12)
        assert np.all(g_lo >= -3.5) and np.all(g_hi <= 5.5)

    def test_zero_weight_window_rejected(self):
        with pytest.raises(EmptyWindow):
            weighted_trimmed_means([1.0], [0.0], 0.5, 0, 1)


class TestSharpBounds:
    def test_oracle_row4(self):
        row = oracle_appendix_d(0.3, 0.3)
        be = make_be(row.mu_plus, row.mu_minus, row.r, f_plus=0.5)
        res, curve = sharp_type2_bounds(binary_window(row.mu_plus), be, 0.0, 1.0)
        assert res.lower == pytest.approx(-0.254, abs=0.003)
        assert res.upper == pytest.approx(0.303, abs=0.003)
        crude = type2_bounds(be, 0.0, 1.0)
        assert res.lower >= crude.lower - 1e-9
        assert res.upper <= crude.upper + 1e-9

    def test_corollary_equality_region(self):
        # binary outcome with mu_plus in [1-r, r]: sharp equals crude exactly
        for r in (0.5, 0.7, 0.9):
            for mu in np.linspace(1 - r, r, 9):
                be = make_be(float(mu), 0.4, r)
                sharp, _ = sharp_type2_bounds(binary_window(float(mu)), be, 0.0, 1.0)
                crude = type2_bounds(be, 0.0, 1.0)
                assert sharp.lower == pytest.approx(crude.lower, abs=1e-9)
                assert sharp.upper == pytest.approx(crude.upper, abs=1e-9)

    def test_trimming_curve_invariants(self):
        be = make_be(0.55, 0.4, 0.7, f_plus=2.0)
        _, curve = sharp_type2_bounds(binary_window(0.55), be, 0.0, 1.0, grid_size=101)
        assert np.all(np.diff(curve.z_grid) > 0)
        assert curve.z_grid[0] == pytest.approx(be.f_minus)
        assert curve.z_grid[-1] == pytest.approx(be.f_plus)
        assert curve.tau[-1] == 0.0
        assert np.all(curve.tau >= 0) and np.all(curve.tau <= 1 - be.r + 1e-12)
        assert np.all(curve.g_low >= 0) and np.all(curve.g_high <= 1)
        assert np.all(curve.g_low <= curve.g_high)
        assert np.all(curve.theta_low <= curve.theta_high + 1e-12)

    def test_sharp_within_crude_random(self, rng):
        for _ in range(300):
            mu_p = rng.uniform(0.05, 0.95)
            mu_m = rng.uniform(0.0, 1.0)
            r = rng.uniform(0.2, 1.0)
            be = make_be(mu_p, mu_m, r)
            sharp, _ = sharp_type2_bounds(binary_window(mu_p), be, 0.0, 1.0)
            crude = type2_bounds(be, 0.0, 1.0)
            assert sharp.lower >= crude.lower - 1e-9
            assert sharp.upper <= crude.upper + 1e-9
            assert sharp.lower <= sharp.upper + 1e-9

    def test_continuous_window_sharp_within_crude(self, rng):
        ys = rng.uniform(0, 1, 500)
        ws = rng.uniform(0.2, 1.0, 500)
        mu_p = float(np.average(ys, weights=ws))
        be = make_be(mu_p, 0.35, 0.6)
        sharp, _ = sharp_type2_bounds(np.column_stack([ws, ys]), be, 0.0, 1.0)
        crude = type2_bounds(be, 0.0, 1.0)
        assert crude.lower - 1e-9 <= sharp.lower <= sharp.upper <= crude.upper + 1e-9

    def test_errors(self):
        be = make_be(0.5, 0.5, 0.9)
        with pytest.raises(InvalidGrid):
            sharp_type2_bounds(binary_window(0.5), be, 0.0, 1.0, grid_size=1)
        with pytest.raises(EmptyWindow):
            sharp_type2_bounds(np.empty((0, 2)), be, 0.0, 1.0)

    def test_refuted_when_r_large(self):
        be = make_be(0.5, 0.5, 1.2, f_plus=1.0)
        res, _ = sharp_type2_bounds(binary_window(0.5), be, 0.0, 1.0)
        assert res.status is BoundsStatus.REFUTED


class TestFuzzyBounds:
    def test_sharp_design_reduces_to_type2(self, rng):
        for _ in range(100):
            mu_p, mu_m = rng.uniform(0, 1, 2)
            r = rng.uniform(0.1, 1.0)
            f_plus = rng.uniform(0.2, 3.0)
            be = make_be(mu_p, mu_m, r, f_plus=f_plus)
            fz = fuzzy_bounds(FuzzyInputs(be=be, d_plus=1.0, d_minus=0.0), 0.0, 1.0)
            t2 = type2_bounds(be, 0.0, 1.0)
            assert fz.lower == pytest.approx(t2.lower, abs=1e-12)
            assert fz.upper == pytest.approx(t2.upper, abs=1e-12)

    def test_point_identified_ratio(self):
        be = make_be(0.55, 0.5, 1.0, f_plus=1.0)
        fz = fuzzy_bounds(FuzzyInputs(be=be, d_plus=0.6, d_minus=0.4), 0.0, 1.0)
        assert fz.lower == pytest.approx(0.25, abs=1e-12)
        assert fz.upper == pytest.approx(0.25, abs=1e-12)

    def test_degenerate_without_first_stage(self):
        be = make_be(0.55, 0.5, 1.0, f_plus=1.0)
        fz = fuzzy_bounds(FuzzyInputs(be=be, d_plus=0.5, d_minus=0.5), 0.0, 1.0)
        assert fz.status is BoundsStatus.DEGENERATE

    def test_d_domain_validated(self):
        be = make_be(0.55, 0.5, 1.0)
        with pytest.raises(InvalidConfig):
            FuzzyInputs(be=be, d_plus=1.2, d_minus=0.0)


class TestCovariateBounds:
    def _res(self, lo, hi):
        return type2_bounds(make_be(0.5, 0.5, 1.0), 0.0, 1.0).__class__(
            lower=lo,
            upper=hi,
            target="E[Y(1)-Y(0) | X*=c]",
            assumption=TypeAssumption.TYPE2,
            status=BoundsStatus.INFORMATIVE,
        )

    def test_intersection(self):
        out = covariate_bounds([("a", self._res(0.0, 0.5)), ("b", self._res(0.2, 0.8))])
        assert (out.lower, out.upper) == (0.2, 0.5)
        assert out.status is BoundsStatus.INFORMATIVE

    def test_single_stratum_identity(self):
        out = covariate_bounds([("only", self._res(0.1, 0.4))])
        assert (out.lower, out.upper) == (0.1, 0.4)

    def test_empty_intersection_refuted(self):
        out = covariate_bounds([("a", self._res(0.0, 0.1)), ("b", self._res(0.3, 0.5))])
        assert out.status is BoundsStatus.REFUTED

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            covariate_bounds([])

    def test_mixed_targets_rejected(self):
        good = self._res(0.0, 0.5)
        bad = type3_bounds(make_be(0.5, 0.5, 1.0), 0.0, 1.0)
        with pytest.raises(MixedTargets):
            covariate_bounds([("a", good), ("b", bad)])
