"""Sparse polynomials: calculus, faces, Taylor data, positivity checks."""
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from zetapoly import (
    CompositionMismatch,
    DimensionMismatch,
    IndexOutOfRange,
    MPoly,
    NotHomogeneous,
    build_P_alpha_u,
    h0s_heuristic,
    positivity_check,
    taylor_H,
)
from zetapoly.multipoly import bernstein_positive, multiindices_of_weight


def P(text, n=None):
    return MPoly.parse(text, n)


rationals = st.fractions(
    min_value=F(-4), max_value=F(4), max_denominator=6
)


def small_polys(nvars: int, max_terms: int = 4, max_deg: int = 3):
    exps = st.tuples(*([st.integers(0, max_deg)] * nvars))
    term = st.tuples(exps, rationals)
    return st.lists(term, min_size=0, max_size=max_terms).map(
        lambda ts: MPoly(nvars, {e: c for e, c in ts if c != 0})
    )


class TestBasics:
    def test_parse_emit_roundtrip(self):
        p = P("3/2 x1^2 x3 + x2 - 1/6", 3)
        assert MPoly.parse(p.to_text(), 3) == p
        assert MPoly.from_json(p.to_json()) == p

    def test_eval(self):
        p = P("x1^2 + 2 x1 x2", 2)
        assert p.eval([F(1), F(1, 2)]) == 2

    def test_degree(self):
        assert P("x1^2 + x1 x2", 2).degree() == 2
        assert MPoly.zero(2).degree() == -1
        assert MPoly.constant(2, 5).degree() == 0


class TestDerivative:
    def test_examples(self):
        assert P("x1 + x2", 2).derivative((1, 0)) == MPoly.one(2)
        p = P("x1^2 + 2 x1 x2 + x2^2 + x3^2", 3)
        assert p.derivative((1, 0, 0)) == P("2 x1 + 2 x2", 3)
        assert P("x1^2", 2).derivative((0, 1)).is_zero()

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            P("x1", 1).derivative((1, 0))

    @settings(max_examples=25, deadline=None)
    @given(small_polys(2), st.tuples(st.integers(0, 2), st.integers(0, 2)),
           st.tuples(st.integers(0, 2), st.integers(0, 2)))
    def test_commutes(self, p, g1, g2):
        total = tuple(a + b for a, b in zip(g1, g2))
        assert p.derivative(g1).derivative(g2) == p.derivative(total)


class TestShift:
    def test_examples(self):
        assert P("x1", 1).shift([F(1)]) == P("x1 + 1", 1)
        assert P("x1^2", 1).shift([F(1)]) == P("x1^2 + 2 x1 + 1", 1)
        assert P("x1 + x2", 2).shift([F(1), F(2)]) == P("x1 + x2 + 3", 2)

    def test_zero_shift(self):
        p = P("x1^2 x2 - x2", 2)
        assert p.shift([F(0), F(0)]) == p

    @settings(max_examples=20, deadline=None)
    @given(small_polys(2), st.tuples(rationals, rationals),
           st.tuples(rationals, rationals))
    def test_composition(self, p, a, b):
        ab = tuple(x + y for x, y in zip(a, b))
        assert p.shift(a).shift(b) == p.shift(ab)


class TestFace:
    def test_examples(self):
        assert P("x1^2 + x2^2", 2).face(2) == P("x1^2 + 1", 1)
        f = P("x1", 1).face(1)
        assert f.nvars == 0 and f.constant_value() == 1
        p = P("x1^2 + 2 x1 x2 + x2^2 + x3^2", 3)
        assert p.face(3) == P("x1^2 + 2 x1 x2 + x2^2 + 1", 2)

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            P("x1", 1).face(2)


class TestHomogeneity:
    def test_examples(self):
        assert P("x1^2 + x1 x2", 2).is_homogeneous() == (True, 2)
        ok, _ = P("x1^2 + x1", 1).is_homogeneous()
        assert not ok
        assert MPoly.constant(1, 5).is_homogeneous() == (True, 0)

    def test_components_sum_back(self):
        q = P("x1^2 + x1 - 1/6", 1)
        comps = q.homogeneous_components()
        assert [d for d, _ in comps] == [0, 1, 2]
        total = MPoly.zero(1)
        for _, c in comps:
            total = total + c
        assert total == q

    @settings(max_examples=20, deadline=None)
    @given(small_polys(2))
    def test_components_random(self, q):
        total = MPoly.zero(2)
        for _, c in q.homogeneous_components():
            total = total + c
        assert total == q

    @settings(max_examples=20, deadline=None)
    @given(st.fractions(min_value=F(1, 3), max_value=F(3), max_denominator=5),
           st.tuples(rationals, rationals))
    def test_scaling(self, t, x):
        p = P("x1^2 + 2 x1 x2 + 3 x2^2", 2)
        scaled = [t * xi for xi in x]
        assert p.eval(scaled) == t**2 * p.eval(x)


class TestTaylorH:
    def test_one_var(self):
        hs = taylor_H(P("x1", 1), 1, [F(1)])
        assert len(hs) == 1 and hs[0].constant_value() == 1

    def test_two_var(self):
        hs = taylor_H(P("x1^2 + x2^2", 2), 2, [F(1), F(1)])
        assert hs[0] == P("2 x1 + 2", 1)
        assert hs[1].constant_value() == 2

    def test_zero_shift(self):
        hs = taylor_H(P("x1^2 + x2^2", 2), 1, [F(0), F(0)])
        assert all(h.is_zero() for h in hs)

    def test_not_homogeneous(self):
        with pytest.raises(NotHomogeneous):
            taylor_H(P("x1 + 1", 1), 1, [F(1)])

    def test_reconstruction_identity(self):
        # P(b + phi_i(y)) = y_n^d P(face) + sum_k y_n^{d-k} H_k at sample points
        rng = random.Random(7)
        p = P("x1^2 + 2 x1 x2 + x2^2 + x3^2", 3)
        d = 2
        for i in (1, 2, 3):
            b = [F(rng.randint(0, 3), 2) for _ in range(3)]
            hs = taylor_H(p, i, b)
            for _ in range(5):
                hat = [F(rng.randint(1, 7), 8) for _ in range(2)]
                t = F(rng.randint(1, 15), 8)
                full = hat[: i - 1] + [F(1)] + hat[i - 1 :]
                point = [t * c for c in full]
                shifted = [pc + bc for pc, bc in zip(point, b)]
                lhs = p.eval(shifted)
                rhs = t**d * p.face(i).eval(hat)
                for k, h in enumerate(hs, start=1):
                    rhs += t ** (d - k) * h.eval(hat)
                assert lhs == rhs


class TestPAlphaU:
    def test_one_var(self):
        # d = 1: the unique family gives the constant 1 for any power
        for Npow in range(4):
            alpha = (Npow + 1,)
            u = ((Npow + 1,),)
            out = build_P_alpha_u(P("x1", 1), 1, alpha, u)
            assert out.constant_value() == 1

    def test_golden_example(self):
        p = P("x1^2 + 2 x1 x2 + x2^2 + x3^2", 3)
        d1 = multiindices_of_weight(1, 3)
        d2 = multiindices_of_weight(2, 3)
        u1 = tuple(1 if g == (1, 0, 0) else 0 for g in d1)
        u2 = tuple(1 if g == (2, 0, 0) else 0 for g in d2)
        out = build_P_alpha_u(p, 3, (1, 1), (u1, u2))
        assert out == P("2 x1 + 2 x2", 2)

    def test_mismatch(self):
        p = P("x1^2 + x2^2", 2)
        d1 = multiindices_of_weight(1, 2)
        u1 = tuple(1 if g == (1, 0) else 0 for g in d1)
        with pytest.raises(CompositionMismatch):
            build_P_alpha_u(p, 1, (2,), (u1,))


class TestPositivity:
    def test_certified(self):
        res = positivity_check(P("x1^2 + x2^2", 2), domain="faces")
        assert res.status == "certified"

    def test_violated(self):
        res = positivity_check(P("x1^2 - 3 x1 x2 + x2^2", 2), domain="faces")
        assert res.status == "violated"
        assert res.witness is not None

    def test_box_sampled(self):
        res = positivity_check(P("x1 + x2", 2), domain="box")
        assert res.status == "sampled_only"

    def test_box_violated(self):
        res = positivity_check(P("x1 - 3", 1), domain="box")
        assert res.status == "violated"

    def test_bernstein_zero_dim(self):
        st_, _ = bernstein_positive(MPoly.constant(0, F(3)))
        assert st_ == "certified"

    def test_sampled_mode(self):
        res = positivity_check(P("x1^2 + x2^2", 2), domain="faces", mode="sampled")
        assert res.status in ("certified", "sampled_only")
        bad = positivity_check(
            P("x1^2 - 3 x1 x2 + x2^2", 2), domain="faces", mode="sampled"
        )
        assert bad.status == "violated"


class TestH0s:
    def test_linear_passes(self):
        rep = h0s_heuristic(P("x1 + x2", 2))
        assert rep.passed and not rep.warning

    def test_degenerate_direction(self):
        rep = h0s_heuristic(MPoly(2, {(1, 0): F(1)}))
        assert rep.passed

    def test_near_zero_outside_box_warns(self):
        rep = h0s_heuristic(P("x1 - x2 + 10", 2))
        assert rep.passed and rep.warning

    def test_vanishing_inside_fails(self):
        rep = h0s_heuristic(P("x1 - 3", 1))
        assert not rep.passed
