"""Mahler-series values: enumeration, periods, the value formula, Raabe."""
from fractions import Fraction as F
from math import comb

import pytest
from mpmath import mp, mpf

from zetapoly import (
    CompositionFamily,
    MPoly,
    NotElliptic,
    NotHomogeneous,
    QuadratureSettings,
    Y_expansion,
    Y_value,
    Z_value,
    enumerate_V,
    g_vector,
    index_I,
    period_K,
    raabe_substitute,
    riemann_zeta_exact_nonpositive,
)
from zetapoly.mahler import convergence_abscissa, delta_multiindices

QS = QuadratureSettings(rel_tol=1e-12, precision=30)
QS_FAST = QuadratureSettings(rel_tol=1e-8, precision=20)


def P(text, n=None):
    return MPoly.parse(text, n)


class TestIndexSets:
    def test_examples(self):
        assert index_I(0, (0, 0), 1, 2, 2) == [(4,)]
        assert sorted(index_I(0, (0, 0, 0, 0), 3, 0, 4)) == [
            (0, 2, 0), (1, 0, 1), (2, 1, 0), (4, 0, 0)
        ]
        assert index_I(0, (5, 0), 1, 2, 2) == []

    def test_delta_sizes(self):
        for n in range(1, 5):
            for k in range(1, 4):
                assert len(delta_multiindices(k, n)) == comb(n + k - 1, n - 1)

    def test_enumerate_V_counts(self):
        assert len(enumerate_V((1,), 1)) == 1
        assert len(enumerate_V((1, 1), 3)) == 18
        assert len(enumerate_V((), 2)) == 1
        # general stars-and-bars count on small weighted vectors
        for n in range(1, 5):
            for alpha in [(2,), (0, 1), (1, 1), (3, 0), (1, 0, 1), (0, 2)]:
                if sum((k + 1) * a for k, a in enumerate(alpha)) > 6:
                    continue
                expect = 1
                for k, ak in enumerate(alpha, start=1):
                    m = comb(n + k - 1, n - 1)
                    expect *= comb(ak + m - 1, m - 1)
                assert len(enumerate_V(alpha, n)) == expect

    def test_g_vector(self):
        u0 = enumerate_V((), 3)[0]
        assert g_vector(u0) == (0, 0, 0)
        # one-variable: g = (|alpha| weighted)
        fam = enumerate_V((3,), 1)[0]
        assert g_vector(fam) == (3,)
        # the golden family
        d1 = delta_multiindices(1, 3)
        d2 = delta_multiindices(2, 3)
        u = CompositionFamily(
            n=3,
            u=(
                tuple(1 if g == (1, 0, 0) else 0 for g in d1),
                tuple(1 if g == (2, 0, 0) else 0 for g in d2),
            ),
        )
        assert g_vector(u) == (3, 0, 0)

    def test_weight_identity(self):
        for alpha in [(2, 1), (0, 2), (1, 0, 1)]:
            for u in enumerate_V(alpha, 2):
                g = g_vector(u)
                assert sum(g) == sum((k + 1) * a for k, a in enumerate(alpha))


class TestPeriod:
    def test_one_dimensional_exact(self):
        # single-variable case: the period is the falling factorial (N)_beta
        Ppoly = P("x1", 1)
        for N in range(5):
            for beta in range(N + 1):
                Q = MPoly(1, {(N,): F(1)})
                alpha = (N + 1 - beta,)
                u = CompositionFamily(n=1, u=((N + 1 - beta,),))
                v = period_K(Ppoly, Q, 0, alpha, u, (beta,), 1, QS)
                assert v.kind == "exact"
                ff = F(1)
                for t in range(beta):
                    ff *= N - t
                assert v.exact == ff

    def test_golden_arctan(self):
        P3 = P("x1^2 + 2 x1 x2 + x2^2 + x3^2", 3)
        Q = P("x1^2 + x1 x2", 3)
        d1 = delta_multiindices(1, 3)
        d2 = delta_multiindices(2, 3)
        u = CompositionFamily(
            n=3,
            u=(
                tuple(1 if g == (1, 0, 0) else 0 for g in d1),
                tuple(1 if g == (2, 0, 0) else 0 for g in d2),
            ),
        )
        v = period_K(P3, Q, 0, (1, 1), u, (2, 0, 0), 3, QS)
        with mp.workdps(40):
            target = 2 * mp.atan(mpf(1) / 2)
            assert abs(v.num.value - target) <= max(v.num.err, mpf(10) ** -12)

    def test_zero_numerator(self):
        v = period_K(P("x1 + x2", 2), MPoly.zero(2), 0, (2,),
                     CompositionFamily(n=2, u=((2, 0),)), (0, 0), 1, QS)
        assert v.kind == "exact" and v.exact == 0

    def test_error_bound_honored_under_refinement(self):
        P3 = P("x1^2 + 2 x1 x2 + x2^2 + x3^2", 3)
        Q = P("x1^2 + x1 x2", 3)
        d1 = delta_multiindices(1, 3)
        d2 = delta_multiindices(2, 3)
        u = CompositionFamily(
            n=3,
            u=(
                tuple(1 if g == (1, 0, 0) else 0 for g in d1),
                tuple(1 if g == (2, 0, 0) else 0 for g in d2),
            ),
        )
        loose = period_K(P3, Q, 0, (1, 1), u, (2, 0, 0), 3,
                         QuadratureSettings(rel_tol=1e-6, precision=25))
        tight = period_K(P3, Q, 0, (1, 1), u, (2, 0, 0), 3,
                         QuadratureSettings(rel_tol=5e-7, precision=25))
        assert abs(loose.num.value - tight.num.value) <= loose.num.err


class TestZValue:
    def test_zeta_zero(self):
        assert Z_value(P("x1", 1), MPoly.one(1), 0) == \
            _exact(F(-1, 2))

    def test_one_var_oracle_grid(self):
        Ppoly = P("x1", 1)
        for total in range(11):
            for N in range(total + 1):
                q = total - N
                Q = MPoly(1, {(q,): F(1)})
                v = Z_value(Ppoly, Q, N)
                assert v.kind == "exact"
                assert v.exact == riemann_zeta_exact_nonpositive(N + q)

    def test_euler_reverse_value(self):
        v = Z_value(P("x1 + x2", 2), MPoly.one(2), 0, QS)
        with mp.workdps(40):
            assert abs(v.num.value - mpf(5) / 12) <= max(v.num.err, mpf(10) ** -11)

    def test_epstein_quadrant_quarter(self):
        # sum over the open quadrant of (m1^2+m2^2)^{-s} at 0 is 1/4
        v = Z_value(P("x1^2 + x2^2", 2), MPoly.one(2), 0, QS)
        with mp.workdps(40):
            assert abs(v.num.value - mpf(1) / 4) <= max(v.num.err, mpf(10) ** -11)

    def test_epstein_octant_values(self):
        # lattice-sum value -1 of any positive quadratic form at 0,
        # decomposed over sign patterns, pins the open-octant sums:
        # 3 variables -> -1/8, 4 variables -> 1/16
        qs = QuadratureSettings(rel_tol=1e-8, precision=22)
        v3 = Z_value(P("x1^2 + x2^2 + x3^2", 3), MPoly.one(3), 0, qs)
        v4 = Z_value(P("x1^2 + x2^2 + x3^2 + x4^2", 4), MPoly.one(4), 0, qs)
        with mp.workdps(30):
            assert abs(v3.num.value + mpf(1) / 8) <= max(v3.num.err, mpf(10) ** -8)
            assert abs(v4.num.value - mpf(1) / 16) <= max(v4.num.err, mpf(10) ** -8)

    def test_zero_Q(self):
        v = Z_value(P("x1 + x2", 2), MPoly.zero(2), 0, QS)
        assert v.kind == "exact" and v.exact == 0

    def test_linearity_in_Q(self):
        Ppoly = P("x1 + x2", 2)
        Q1 = P("x1", 2)
        Q2 = P("x2^2", 2)
        v1 = Z_value(Ppoly, Q1, 0, QS_FAST).to_numeric(20)
        v2 = Z_value(Ppoly, Q2, 0, QS_FAST).to_numeric(20)
        v12 = Z_value(Ppoly, Q1 + Q2, 0, QS_FAST).to_numeric(20)
        assert abs(v12.value - (v1.value + v2.value)) <= v1.err + v2.err + v12.err

    def test_inhomogeneous_Q_components(self):
        Ppoly = P("x1 + x2", 2)
        Q = P("x1 + 1", 2)
        v = Z_value(Ppoly, Q, 0, QS_FAST).to_numeric(20)
        va = Z_value(Ppoly, P("x1", 2), 0, QS_FAST).to_numeric(20)
        vb = Z_value(Ppoly, MPoly.one(2), 0, QS_FAST).to_numeric(20)
        assert abs(v.value - (va.value + vb.value)) <= v.err + va.err + vb.err

    def test_not_homogeneous(self):
        with pytest.raises(NotHomogeneous):
            Z_value(P("x1 + 1", 1), MPoly.one(1), 0)

    def test_not_elliptic(self):
        with pytest.raises(NotElliptic):
            Z_value(P("x1^2 - 3 x1 x2 + x2^2", 2), MPoly.one(2), 0)

    def test_convergence_abscissa(self):
        assert convergence_abscissa(P("x1^3 + x2^3", 2), MPoly.one(2)) == F(2, 3)
        assert convergence_abscissa(P("x1 + x2", 2), P("x1^2", 2)) == 4


def _exact(x):
    from zetapoly import SpecialValue

    return SpecialValue.make_exact(x)


class TestRaabePipeline:
    def test_one_var_expansion(self):
        Ppoly = P("x1", 1)
        for N in range(6):
            exp = Y_expansion(Ppoly, MPoly.one(1), N)
            assert set(exp.coeffs) == {(N + 1,)}
            coeff = exp.coeffs[(N + 1,)]
            assert coeff.kind == "exact" and coeff.exact == F(-1, N + 1)

    def test_raabe_reproduces_zeta(self):
        Ppoly = P("x1", 1)
        for total in range(8):
            for N in range(total + 1):
                q = total - N
                Q = MPoly(1, {(q,): F(1)})
                v = raabe_substitute(Y_expansion(Ppoly, Q, N))
                assert v.kind == "exact"
                assert v.exact == riemann_zeta_exact_nonpositive(N + q)

    def test_empty_expansion(self):
        from zetapoly.mahler import YExpansion

        v = raabe_substitute(YExpansion(n=1, coeffs={}))
        assert v.kind == "exact" and v.exact == 0

    def test_y_value_at_zero_is_coefficient_sum(self):
        Ppoly = P("x1", 1)
        exp = Y_expansion(Ppoly, MPoly.one(1), 3)
        total = sum(c.exact for c in exp.coeffs.values())
        v = Y_value(Ppoly, MPoly.one(1), 3, [F(0)], QS)
        assert v.kind == "exact" and v.exact == total

    def test_degree_bound(self):
        exp = Y_expansion(P("x1^2 + x2^2", 2), MPoly.one(2), 0, QS_FAST)
        assert exp.total_degree_bound() <= 4
        assert all(sum(m) <= 4 for m in exp.coeffs)

    def test_raabe_matches_Z_small_cases(self):
        cases = [
            (P("x1", 1), MPoly.one(1), 0),
            (P("x1", 1), P("x1^2", 1), 1),
            (P("x1 + x2", 2), MPoly.one(2), 0),
            (P("x1^2 + x2^2", 2), MPoly.one(2), 0),
            (P("x1 + x2", 2), P("x1", 2), 1),
        ]
        for Ppoly, Q, N in cases:
            z = Z_value(Ppoly, Q, N, QS_FAST)
            r = raabe_substitute(Y_expansion(Ppoly, Q, N, QS_FAST))
            if z.kind == "exact":
                assert r.kind == "exact" and r.exact == z.exact
            else:
                zn, rn = z.to_numeric(20), r.to_numeric(20)
                assert abs(zn.value - rn.value) <= zn.err + rn.err


class TestThetaSeriesCrossChecks:
    """Golden values derived independently from theta-function asymptotics:
    the value at 0 is the constant term of the small-t expansion of the
    product of one-variable theta sums."""

    def test_three_fold_linear(self):
        # g(t) = 1/t - 1/2 + t/12 - ...; const term of g^3 is -3/8
        v = Z_value(P("x1 + x2 + x3", 3), MPoly.one(3), 0, QS)
        with mp.workdps(40):
            assert abs(v.num.value - mpf(-3) / 8) <= max(v.num.err, mpf(10) ** -10)

    def test_weighted_double(self):
        # theta weight sum m1 e^{-t(m1+m2)}: const term of (-g') g is 1/24
        v = Z_value(P("x1 + x2", 2), P("x1", 2), 0, QS)
        with mp.workdps(40):
            assert abs(v.num.value - mpf(1) / 24) <= max(v.num.err, mpf(10) ** -10)


class TestUnverifiedPositivity:
    def _hard_poly(self):
        # face 2 is (y - 1/3)^2 + 1e-8: positive, but the minimum sits off
        # the dyadic grid so the default subdivision depth cannot certify it
        eps = F(1, 10**8)
        return MPoly(2, {(2, 0): F(1), (1, 1): F(-2, 3), (0, 2): F(1, 9) + eps})

    def test_flag_carried_on_result(self):
        v = Z_value(self._hard_poly(), MPoly.one(2), 0, QS_FAST)
        assert "positivity_unverified" in v.flags
        assert v.kind == "numeric"

    def test_deeper_subdivision_certifies(self):
        from zetapoly.multipoly import bernstein_positive

        face = self._hard_poly().face(2)
        assert bernstein_positive(face, max_depth=6)[0] == "sampled_only"
        assert bernstein_positive(face, max_depth=16)[0] == "certified"

    def test_require_certified_raises(self):
        from zetapoly import PositivityUnverified

        u = CompositionFamily(n=2, u=((2, 0),))
        with pytest.raises(PositivityUnverified):
            period_K(self._hard_poly(), MPoly.one(2), 0, (2,), u, (0, 0), 2,
                     QS_FAST, require_certified=True)


class TestDiagonalCubicFourfold:
    def test_value_matches_theta_series_closed_form(self):
        # The 4-variable diagonal cubic at 0.  Independently derivable from
        # the theta-series expansion: value = 1/16 - Gamma(1/3)^3 / 810.
        from zetapoly import gamma_rational_numeric

        v = Z_value(P("x1^3 + x2^3 + x3^3 + x4^3", 4), MPoly.one(4), 0,
                    QuadratureSettings(rel_tol=1e-7, precision=20))
        g3 = gamma_rational_numeric(F(1, 3), 30)
        want = g3.pow_int(3).scale(F(-1, 810)) + _num_from(F(1, 16))
        assert abs(v.num.value - want.value) <= v.num.err + want.err


def _num_from(fr):
    from zetapoly import Numeric

    return Numeric.from_rational(fr)
