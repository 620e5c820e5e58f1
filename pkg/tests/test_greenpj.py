import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diskrig import greenpj as gp
from diskrig import holomap as hm
from diskrig import metric as mt
from diskrig.numerics import PolarGrid

P = mt.poincare()

inner = st.complex_numbers(max_magnitude=0.7, allow_infinity=False,
                           allow_nan=False)


class TestGreen:
    def test_central_value(self):
        assert gp.green(1.0, 0j, 0.5 + 0j) == pytest.approx(math.log(2.0))

    @given(inner, inner)
    @settings(max_examples=50, deadline=None)
    def test_symmetry_and_positivity(self, z, w):
        if abs(z - w) < 1e-6:
            return
        a = gp.green(1.0, z, w)
        b = gp.green(1.0, w, z)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-12)
        assert a > 0.0

    def test_rotation_invariance_exact(self):
        rot = np.exp(0.7j)
        for z, w in [(0.3 + 0j, 0.1 - 0.4j), (0.5j, -0.2 + 0.2j)]:
            assert gp.green(0.9, rot * z, rot * w) == \
                pytest.approx(gp.green(0.9, z, w), rel=1e-14)

    def test_boundary_vanishing(self):
        vals = [gp.green(1.0, 0.3 + 0j, r * np.exp(0.4j))
                for r in (0.9, 0.99, 0.999)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 2e-3

    def test_pole_rejected(self):
        with pytest.raises(gp.GreenPJError, match="pole"):
            gp.green(1.0, 0.2 + 0j, 0.2 + 0j)


class TestGreenMean:
    @pytest.mark.parametrize("R,z", [(1.0, 0j), (1.0, 0.6 + 0j), (0.5, 0j),
                                     (0.8, 0.3 + 0.2j)])
    def test_matches_closed_form(self, R, z):
        val = gp.green_mean(R, z)
        assert val == pytest.approx((R**2 - abs(z) ** 2) / 4.0, abs=1e-5)


class TestMajorant:
    def test_hyperbolic_at_center(self):
        # rotational symmetry makes the integral the boundary value
        val = gp.harmonic_majorant(P, 0.5, 0j)
        assert val == pytest.approx(math.log(4.0 / 3.0), abs=1e-12)

    def test_scaling_shifts_additively(self):
        base = gp.harmonic_majorant(P, 0.6, 0.2 + 0.1j)
        scaled = gp.harmonic_majorant(mt.scale(0.9, P), 0.6, 0.2 + 0.1j)
        assert scaled - base == pytest.approx(math.log(0.9), abs=1e-12)

    def test_ceiling_over_catalog(self):
        R = 0.7
        ceiling = math.log(1.0 / (1.0 - R**2))
        for lam in (P, mt.pullback(hm.Monomial(2), P), mt.mu_max(0.5),
                    mt.scale(0.8, P)):
            val = gp.harmonic_majorant(lam, R, 0.25 - 0.1j)
            assert val <= ceiling + 1e-9

    def test_zero_on_circle_rejected(self):
        lam = mt.mu_max(1.0)
        shifted = mt.pullback(hm.Automorphism(0.6 + 0j), lam)
        with pytest.raises(gp.GreenPJError, match="perturb"):
            gp.harmonic_majorant(shifted, 0.6, 0j)


class TestDecomposition:
    def test_hyperbolic_no_zero_terms(self):
        dec = gp.pj_decompose(P, 0.9, 0.3 + 0j)
        assert dec.zero_terms == ()
        assert dec.residual <= 1e-3

    def test_square_pullback(self):
        lam = mt.pullback(hm.Monomial(2), P)
        dec = gp.pj_decompose(lam, 0.9, 0.4 + 0j)
        assert len(dec.zero_terms) == 1
        rec, val = dec.zero_terms[0]
        assert rec.order == pytest.approx(1.0)
        assert val == pytest.approx(-gp.green(0.9, 0.4 + 0j, 0j), rel=1e-12)
        assert dec.log_density == pytest.approx(math.log(0.8 / (1 - 0.4**4)))
        assert dec.residual <= 1e-3

    def test_extremal_zero(self):
        dec = gp.pj_decompose(mt.mu_max(0.5), 0.8, 0.5 + 0j)
        assert dec.zero_terms[0][0].order == pytest.approx(0.5)
        assert dec.residual <= 1e-3

    def test_residual_decreases_under_doubling(self):
        lam = mt.pullback(hm.Monomial(2), P)
        zs = [0.3 + 0j, 0.21 + 0.33j, -0.4 + 0.1j]
        coarse = max(gp.pj_decompose(lam, 0.9, z,
                                     grid=PolarGrid(0j, 0.9, 60, 120)).residual
                     for z in zs)
        fine = max(gp.pj_decompose(lam, 0.9, z,
                                   grid=PolarGrid(0j, 0.9, 120, 240)).residual
                   for z in zs)
        assert coarse / fine >= 3.0

    def test_potential_matches_direct_quadrature(self):
        # constant curvature -4: the potential term must agree with a
        # direct quadrature of -4 g lam^2 (the subtracted-pole route and
        # the raw route converge to the same integral)
        lam = P
        z = 0.3 + 0j
        R = 0.8
        dec = gp.pj_decompose(lam, R, z, grid=PolarGrid(0j, R, 200, 400))
        direct = gp.potential_direct(lam, R, z, PolarGrid(0j, R, 700, 1400))
        assert dec.potential_value == pytest.approx(direct, abs=5e-5)

    def test_requires_pinch(self):
        s = lambda z: np.zeros(np.shape(z)) if np.ndim(z) else 0.0
        with pytest.raises(gp.GreenPJError, match="pinch"):
            gp.pj_decompose(mt.exp_weight(s), 0.9, 0.3 + 0j)


class TestQuotientBound:
    def test_square_pullback_at_shared_zero(self):
        lam = mt.pullback(hm.Monomial(2), P)
        rep = gp.zero_quotient_bound(lam, P, 0.8, 0j, 0.4 + 0j, c_r=4.0)
        assert rep.passed
        assert rep.details["alpha"] == pytest.approx(1.0)
        assert rep.details["beta"] == 0.0

    def test_equal_metrics_trivial(self):
        rep = gp.zero_quotient_bound(P, P, 0.8, 0.1 + 0j, 0.3 + 0j, c_r=4.0)
        assert rep.lhs == pytest.approx(0.0, abs=1e-12)
        assert rep.rhs > 0.0
        assert rep.passed

    def test_nested_extremal_orders(self):
        rep = gp.zero_quotient_bound(mt.mu_max(2.0), mt.mu_max(1.0),
                                     0.8, 0j, 0.35 + 0j)
        assert rep.passed
        assert rep.details["alpha"] - rep.details["beta"] == pytest.approx(1.0)

    def test_domination_required(self):
        with pytest.raises(mt.DominationError):
            gp.zero_quotient_bound(P, mt.mu_max(1.0), 0.8, 0j, 0.3 + 0j,
                                   c_r=4.0)
