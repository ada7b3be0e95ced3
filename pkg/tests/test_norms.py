import math

import numpy as np
import pytest

from cesaro_bergman.norms import (
    DiskQuadrature,
    NonConvergedQuadrature,
    SpaceKind,
    SpaceSpec,
    inclusion_ratio_scan,
    log_beta,
    monomial_norm,
    monomial_norm_asymptote,
    monomial_norm_quadratic_weight,
    norm_parseval,
    norm_quadrature,
    seminorm_family,
)
from cesaro_bergman.series import BinomialSign, TaylorTruncation, binomial_series_coeffs


def trunc(seq):
    return TaylorTruncation(np.asarray(seq, dtype=complex))


class TestMonomialNorm:
    def test_unit_constant_classical(self):
        # normalized area measure of the disk is 1
        assert abs(monomial_norm(0, 2.0, 0.0) - 1.0) < 1e-14

    def test_constant_alpha_one(self):
        # 2 int_0^1 r (1-r) dr = 1/3
        direct = 2.0 * (1.0 / 2.0 - 1.0 / 3.0)
        assert abs(monomial_norm(0, 2.0, 1.0) - math.sqrt(direct)) < 1e-14

    def test_against_high_precision_beta(self):
        mpmath = pytest.importorskip("mpmath")
        mpmath.mp.dps = 40
        for j, p, alpha in [(10, 2.0, 1.0), (10_000, 2.0, 1.0), (313, 1.5, 3.5)]:
            ref = float((2 * mpmath.beta(j * p + 2, alpha + 1)) ** (1.0 / p))
            assert abs(monomial_norm(j, p, alpha) - ref) / ref < 1e-13

    def test_asymptotic_law(self):
        j = 10_000
        scaled = monomial_norm(j, 2.0, 1.0) ** 2 * j ** 2
        assert abs(scaled - 0.5) / 0.5 < 0.02
        assert abs(monomial_norm_asymptote(2.0, 1.0) - 0.5) < 1e-15

    def test_quadratic_weight_comparability(self):
        for j in (0, 1, 7, 40):
            for p, alpha in [(2.0, 1.0), (1.5, 2.0), (3.0, 0.5)]:
                ratio = (monomial_norm_quadratic_weight(j, p, alpha)
                         / monomial_norm(j, p, alpha))
                assert 1.0 - 1e-12 <= ratio <= 2.0 ** (alpha / p) + 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            monomial_norm(0, 0.5, 1.0)
        with pytest.raises(ValueError):
            monomial_norm(-1, 2.0, 1.0)


class TestParseval:
    def test_constant(self):
        assert abs(norm_parseval(trunc([1]), 0.0) - 1.0) < 1e-14

    def test_monomial_alpha_two(self):
        # 2 B(4,3) = 2 * 3! 2! / 6! = 1/30
        assert abs(norm_parseval(trunc([0, 1]), 2.0) - math.sqrt(1 / 30)) < 1e-14

    def test_agrees_with_quadrature(self):
        rng = np.random.default_rng(11)
        c = rng.uniform(-1, 1, 101) + 1j * rng.uniform(-1, 1, 101)
        f = TaylorTruncation(c)
        for alpha in (0.5, 1.0, 2.0):
            a = norm_parseval(f, alpha)
            b = norm_quadrature(f, 2.0, alpha, rel_tol=1e-10)
            assert abs(a - b) / a < 1e-8


class TestQuadrature:
    def test_zero_function(self):
        assert norm_quadrature(trunc([0, 0, 0]), 2.0, 1.0) == 0.0

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    @pytest.mark.parametrize("alpha", [0.5, 2.0])
    def test_monomials_match_closed_form(self, p, alpha):
        for j in (0, 3, 17, 50):
            c = np.zeros(j + 1, dtype=complex)
            c[j] = 1.0
            v = norm_quadrature(TaylorTruncation(c), p, alpha, rel_tol=1e-10)
            ref = monomial_norm(j, p, alpha)
            assert abs(v - ref) / ref < 1e-8

    def test_boundary_singular_source_is_stable(self):
        # (1+z)^-s with s = (alpha+1-eps)/p stays in the space; truncation
        # norms must agree within 1% when the degree doubles
        s = (2.0 + 1.0 - 0.5) / 2.0
        f1 = binomial_series_coeffs(s, BinomialSign.PLUS_Z, 2000)
        f2 = binomial_series_coeffs(s, BinomialSign.PLUS_Z, 4000)
        v1 = norm_quadrature(f1, 2.0, 2.0, rel_tol=1e-8)
        v2 = norm_quadrature(f2, 2.0, 2.0, rel_tol=1e-8)
        assert math.isfinite(v1) and math.isfinite(v2)
        assert abs(v2 - v1) / v2 < 0.01

    def test_total_measure_invariant(self):
        for alpha in (0.0, 0.5, 1.0, 2.0, 3.5):
            quad = DiskQuadrature.build(alpha, radial_count=64)
            expect = 2.0 * math.exp(log_beta(2.0, alpha + 1.0))
            assert abs(quad.total_measure() - expect) / expect < 1e-12

    def test_nonconvergence_raises(self):
        s = (2.0 + 1.0 - 0.5) / 2.0
        f = binomial_series_coeffs(s, BinomialSign.PLUS_Z, 4000)
        with pytest.raises(NonConvergedQuadrature):
            norm_quadrature(f, 2.0, 2.0, rel_tol=1e-15, max_radial=128)

    def test_alpha_mismatch_rejected(self):
        quad = DiskQuadrature.build(1.0, 64)
        with pytest.raises(ValueError):
            norm_quadrature(trunc([1, 1]), 2.0, 2.0, quad=quad)


class TestSpaceSpec:
    def test_frechet_steps(self):
        spec = SpaceSpec(2.0, 1.0, SpaceKind.FRECHET_INTERSECTION)
        assert spec.step_alpha(4) == 1.25
        assert spec.admissible_steps(3) == [1, 2, 3]

    def test_lb_admissibility(self):
        spec = SpaceSpec(2.0, 0.3, SpaceKind.LB_UNION)
        assert spec.min_step() == 4
        assert spec.step_alpha(4) == pytest.approx(0.05)
        with pytest.raises(ValueError):
            spec.step_alpha(3)

    def test_limit_space_needs_positive_alpha(self):
        with pytest.raises(ValueError):
            SpaceSpec(2.0, 0.0, SpaceKind.LB_UNION)


class TestSeminormFamily:
    def test_constant_frechet_closed_form(self):
        spec = SpaceSpec(2.0, 1.0, SpaceKind.FRECHET_INTERSECTION)
        fam = seminorm_family(trunc([1.0]), spec, 3)
        values = [e.value for e in fam]
        for e in fam:
            expect = math.sqrt(2.0 * math.exp(log_beta(2.0, 2.0 + 1.0 / e.n)))
            assert abs(e.value - expect) < 1e-14
        assert values == sorted(values) and values[0] < values[-1]

    def test_zero_function(self):
        spec = SpaceSpec(2.0, 2.0, SpaceKind.LB_UNION)
        fam = seminorm_family(trunc([0, 0]), spec, 4)
        assert all(e.value == 0.0 and e.ok for e in fam)

    def test_banach_rejected(self):
        with pytest.raises(ValueError):
            seminorm_family(trunc([1.0]), SpaceSpec(2.0, 1.0), 3)


class TestInclusionScan:
    def test_first_ratio_beta_oracle(self):
        scan = inclusion_ratio_scan(2.0, 1.0, 2.0, 64)
        # B(4,3)/B(4,2) = (1/60)/(1/20) = 1/3
        assert abs(scan.ratios[0] - math.sqrt(1 / 3)) < 1e-14

    def test_decay_exponent(self):
        scan = inclusion_ratio_scan(2.0, 1.0, 2.0, 10_000)
        assert abs(scan.exponent - (-0.5)) / 0.5 < 0.02
        assert scan.r_squared > 0.999
        assert np.all(np.diff(scan.ratios) < 0)

    def test_identity_inclusion_rejected(self):
        with pytest.raises(ValueError):
            inclusion_ratio_scan(2.0, 1.0, 1.0, 100)


def test_weight_monotonicity():
    # mu < gamma gives pointwise smaller weight, hence smaller norm
    rng = np.random.default_rng(12)
    f = TaylorTruncation(rng.uniform(-1, 1, 30) + 1j * rng.uniform(-1, 1, 30))
    pairs = [(0.5, 1.0), (1.0, 2.5), (2.0, 3.5)]
    for mu, gamma in pairs:
        assert norm_parseval(f, gamma) <= norm_parseval(f, mu)
