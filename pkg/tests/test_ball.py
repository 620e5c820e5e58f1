import math

import numpy as np
import pytest

from diskrig import ball as bl
from diskrig import holomap as hm
from diskrig.numerics import Verdict

e1_2 = np.array([1.0, 0.0], dtype=complex)
e1_3 = np.array([1.0, 0.0, 0.0], dtype=complex)


def random_interior(rng, n, r_max=0.9):
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return z * rng.uniform(0.0, r_max) / bl.norm(z)


class TestMetric:
    def test_center(self):
        assert bl.kobayashi_metric([0, 0], [0.3, 0.4]) == pytest.approx(0.5)

    def test_one_dimensional_reduction(self):
        assert bl.kobayashi_metric([0.5], [1.0]) == pytest.approx(4.0 / 3.0)

    def test_tangential_direction_through_slice_center(self):
        # oracle: the affine disc {(0.5, w)} has radius sqrt(0.75) and is a
        # geodesic centered at the base point, so the metric there is
        # 1/sqrt(0.75)
        assert bl.kobayashi_metric([0.5, 0.0], [0.0, 1.0]) == \
            pytest.approx(1.0 / math.sqrt(0.75))

    def test_interior_only(self):
        with pytest.raises(bl.BallError):
            bl.kobayashi_metric([1.0, 0.0], [1.0, 0.0])


class TestDistance:
    def test_radial_normalization(self):
        assert bl.kobayashi_distance([0, 0], [0.6, 0]) == \
            pytest.approx(math.atanh(0.6))

    def test_symmetry_and_triangle(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            z, w, u = (random_interior(rng, 3) for _ in range(3))
            dzw = bl.kobayashi_distance(z, w)
            assert dzw == pytest.approx(bl.kobayashi_distance(w, z), abs=1e-12)
            assert dzw <= bl.kobayashi_distance(z, u) + \
                bl.kobayashi_distance(u, w) + 1e-12

    def test_band_is_bounded_to_tiny_delta(self):
        # K(0, z) + (1/2) log delta(z) = (1/2) log(1 + |z|), inside [0, 0.7]
        for d in (1e-1, 1e-2, 1e-3, 1e-4):
            val = bl.distance_band((1.0 - d) * e1_3)
            assert 0.0 <= val <= 0.7

    def test_automorphism_invariance(self):
        rng = np.random.default_rng(3)
        for n in (2, 3):
            A = bl.random_automorphism(n, rng)
            for _ in range(10):
                z, w = random_interior(rng, n), random_interior(rng, n)
                v = rng.normal(size=n) + 1j * rng.normal(size=n)
                assert bl.kobayashi_distance(A.eval(z), A.eval(w)) == \
                    pytest.approx(bl.kobayashi_distance(z, w), abs=1e-10)
                assert bl.kobayashi_metric(A.eval(z), A.differential(z, v)) == \
                    pytest.approx(bl.kobayashi_metric(z, v), abs=1e-10,
                                  rel=1e-10)


class TestSplitting:
    def test_projection_kills_normal_direction(self):
        out = bl.tangential_projection(e1_2, np.array([0.3 + 0.1j, 0.7j]))
        assert out[0] == pytest.approx(0.0)
        assert out[1] == pytest.approx(0.7j)

    def test_projection_of_base_point_vanishes(self):
        assert bl.norm(bl.tangential_projection(e1_3, e1_3)) == 0.0

    def test_pythagoras(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            z = random_interior(rng, 3, 0.8)
            if bl.norm(z) < 1e-3:
                continue
            v = rng.normal(size=3) + 1j * rng.normal(size=3)
            normal, tang = bl.normal_decomposition(z, v)
            assert abs(bl.herm(normal, tang)) <= 1e-12
            assert bl.norm(normal) ** 2 + bl.norm(tang) ** 2 == \
                pytest.approx(bl.norm(v) ** 2, rel=1e-12)

    def test_center_rejected(self):
        with pytest.raises(bl.BallError):
            bl.normal_decomposition(np.zeros(2), np.array([1.0, 0.0]))


class TestSlices:
    def test_diameter(self):
        sl = bl.geodesic_slice(e1_2, e1_2)
        assert np.allclose(sl(0.3 + 0j), [0.3, 0.0])

    def test_normalization_at_one(self):
        rng = np.random.default_rng(5)
        for n in (2, 3):
            p = random_interior(rng, n, 1.0)
            p /= bl.norm(p)
            v = rng.normal(size=n) + 1j * rng.normal(size=n)
            if abs(bl.herm(v, p)) < 0.1:
                v = v + p
            sl = bl.geodesic_slice(p, v)
            assert bl.norm(sl(1.0 + 0j) - p) <= 1e-12

    def test_isometry_identity(self):
        rng = np.random.default_rng(6)
        worst = 0.0
        for n in (2, 3):
            for _ in range(10):
                p = random_interior(rng, n, 1.0)
                p /= bl.norm(p)
                v = rng.normal(size=n) + 1j * rng.normal(size=n)
                if abs(bl.herm(v, p)) < 0.1:
                    v = v + p
                sl = bl.geodesic_slice(p, v)
                for _ in range(10):
                    zeta = complex(rng.uniform(-0.7, 0.7),
                                   rng.uniform(-0.7, 0.7))
                    val = bl.kobayashi_metric(sl(zeta), sl.deriv(zeta))
                    worst = max(worst, abs(val * (1 - abs(zeta) ** 2) - 1.0))
        assert worst <= 1e-10

    def test_nontangential_approach(self):
        sl = bl.geodesic_slice(e1_2, np.array([1.0, 1.0]) / math.sqrt(2))
        ratios = [bl.boundary_distance(sl(t)) / (1.0 - t)
                  for t in (0.9, 0.99, 0.999)]
        assert all(0.25 <= r <= 4.0 for r in ratios)

    def test_tangential_direction_rejected(self):
        with pytest.raises(bl.BallError, match="tangential"):
            bl.geodesic_slice(e1_2, np.array([0.0, 1.0]))


class TestComparisonRatio:
    @pytest.mark.parametrize("delta", [0.1, 0.01, 0.001])
    def test_normal_and_tangential(self, delta):
        z = (1.0 - delta) * e1_2
        assert bl.metric_comparison_ratio(z, e1_2) == pytest.approx(1.0, abs=0.1)
        assert 0.5 <= bl.metric_comparison_ratio(z, np.array([0.0, 1.0])) <= 2.0
        mixed = np.array([1.0, 1.0]) / math.sqrt(2)
        assert 0.25 <= bl.metric_comparison_ratio(z, mixed) <= 4.0

    def test_normal_ratio_tends_to_one(self):
        vals = [bl.metric_comparison_ratio((1 - d) * e1_2, e1_2)
                for d in (0.1, 0.01, 0.001, 0.0001)]
        gaps = [abs(v - 1.0) for v in vals]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))

    def test_far_from_boundary_rejected(self):
        with pytest.raises(bl.BallError):
            bl.metric_comparison_ratio(0.5 * e1_2, e1_2)


class TestGeodesicCheck:
    def test_linear_disc(self):
        rep = bl.geodesic_boundary_check(bl.DiscMap(((0j, 1.0 + 0j), (0j,))))
        assert rep.verdict == "GEODESIC"

    def test_affine_slice(self):
        sl = bl.geodesic_slice(e1_2, np.array([1.0, 1.0]) / math.sqrt(2))
        rep = bl.geodesic_boundary_check(sl)
        assert rep.verdict == "GEODESIC"
        assert rep.rate.verdict is Verdict.VANISHES

    def test_squared_disc_rejected_with_linear_deficit(self):
        rep = bl.geodesic_boundary_check(bl.DiscMap(((0j, 0j, 1.0 + 0j), (0j,))))
        assert rep.verdict == "NOT_GEODESIC"
        assert rep.rate.verdict is Verdict.BOUNDED_NONZERO
        assert rep.rate.fitted_limit == pytest.approx(-0.25, rel=0.01)

    def test_escaping_disc_rejected(self):
        with pytest.raises(bl.BallError, match="escapes"):
            bl.geodesic_boundary_check(bl.DiscMap(((0j, 1.5 + 0j), (0j,))))


class TestRigiditySignature:
    def test_identity_all_pass(self):
        rep = bl.ball_rigidity_check(bl.identity_map(2), e1_2)
        assert rep.all_pass

    def test_automorphisms_all_pass_with_zero_deficit(self):
        rng = np.random.default_rng(7)
        for _ in range(3):
            A = bl.random_automorphism(2, rng)
            rep = bl.ball_rigidity_check(A, e1_2)
            assert rep.all_pass
            assert rep.metric_rate.verdict is Verdict.VANISHES

    def test_embedded_square_map(self):
        rep = bl.ball_rigidity_check(bl.embedded_power_map(2), e1_2)
        assert rep.tangential_cluster_ok
        assert rep.projection_bounded
        assert rep.metric_rate.verdict is Verdict.BOUNDED_NONZERO
        assert rep.metric_rate.fitted_limit == pytest.approx(-0.25, rel=0.1)
        assert not rep.all_pass

    def test_tangential_slice_direction_rejected(self):
        with pytest.raises(bl.BallError):
            bl.ball_rigidity_check(bl.identity_map(2), np.array([0.0, 1.0]))


class TestSchwarzPick:
    def test_decreasing_property_random_maps(self):
        rng = np.random.default_rng(8)
        maps = [bl.embedded_power_map(2),
                bl.PolyBallMap([bl.MultiPoly(2, {(0, 1): 1.0}),
                                bl.MultiPoly(2, {(1, 1): 1.0})]),
                bl.random_automorphism(2, rng)]
        for F in maps:
            ok, _ = bl.certify_ball_map(F, n_samples=400)
            assert ok
            for _ in range(30):
                z = random_interior(rng, 2, 0.85)
                v = rng.normal(size=2) + 1j * rng.normal(size=2)
                lhs = bl.kobayashi_metric(F.eval(z), F.differential(z, v))
                rhs = bl.kobayashi_metric(z, v)
                assert lhs <= rhs + 1e-10

    def test_non_selfmap_detected(self):
        F = bl.PolyBallMap([bl.MultiPoly(2, {(1, 0): 2.0}),
                            bl.MultiPoly(2, {(0, 1): 0.0})])
        ok, mx = bl.certify_ball_map(F, n_samples=200)
        assert not ok and mx > 1.5


class TestMapSerialization:
    def test_round_trip(self):
        F = bl.PolyBallMap([bl.MultiPoly(2, {(2, 0): 1.0, (0, 1): 0.5j}),
                            bl.MultiPoly(2, {(1, 1): -0.25})])
        text = bl.serialize_ball_map(F)
        G = bl.parse_ball_map(text)
        rng = np.random.default_rng(12)
        for _ in range(10):
            z = random_interior(rng, 2, 0.8)
            assert np.allclose(G.eval(z), F.eval(z), atol=1e-15)
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            assert np.allclose(G.differential(z, v), F.differential(z, v),
                               atol=1e-14)

    def test_embedded_power_text(self):
        F = bl.parse_ball_map("2,0:1 |")
        z = np.array([0.4 + 0.1j, 0.2j])
        assert np.allclose(F.eval(z), [(0.4 + 0.1j) ** 2, 0.0])

    def test_arity_mismatch_rejected(self):
        with pytest.raises(bl.BallError, match="components"):
            bl.parse_ball_map("2,0:1")
        with pytest.raises(bl.BallError, match="arities"):
            bl.parse_ball_map("2,0:1 | 0,0,1:1 | 1,0,0:1")


class TestOneDimensionalAgreement:
    def test_metric_matches_disk_density(self):
        from diskrig import metric as mt
        P = mt.poincare()
        rng = np.random.default_rng(9)
        for _ in range(50):
            z = complex(rng.uniform(-0.9, 0.9), rng.uniform(-0.45, 0.45))
            if abs(z) >= 0.95:
                continue
            assert bl.kobayashi_metric([z], [1.0]) == \
                pytest.approx(float(P.density(z)), rel=1e-10)

    def test_distance_matches_automorphism_modulus(self):
        rng = np.random.default_rng(10)
        for _ in range(30):
            z = complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.4, 0.4))
            w = complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.4, 0.4))
            t = hm.Automorphism(z) if abs(z) < 1 else None
            moved = abs(complex(t.eval(w)))
            assert bl.kobayashi_distance([z], [w]) == \
                pytest.approx(math.atanh(min(moved, 1 - 1e-16)), abs=1e-10)

    def test_invariant_derivative_matches(self):
        f = hm.Monomial(2)
        for t in (0.3, 0.5, 0.7):
            z = np.array([t + 0j])
            v = np.array([1.0 + 0j])
            fz = np.array([complex(f.eval(t + 0j))])
            dfv = np.array([complex(f.deriv(t + 0j))])
            ratio = bl.kobayashi_metric(fz, dfv) / bl.kobayashi_metric(z, v)
            assert ratio == pytest.approx(hm.hyperbolic_derivative(f, t + 0j),
                                          rel=1e-12)
