"""Values of Mahler-type series Z(P,Q;s) = sum Q(m)/P(m)^s at s = -N.

Implements the multi-index bookkeeping (weighted index sets, composition
families and their g-vectors), the period integrals over unit-cube faces by
certified quadrature, the polynomial-in-(1+a) expansion of the shifted
integral continuation, and the Raabe-type substitution that turns that
expansion into the series value.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from mpmath import mp

from ._quadrature import integrate_unit_cube
from .errors import NotElliptic, NotHomogeneous, PositivityUnverified
from .exactnum import Numeric, SpecialValue, bernoulli_tilde
from .multipoly import (
    MPoly,
    MultiIndex,
    bernstein_positive,
    build_P_alpha_u,
    mi_factorial,
    multiindices_of_weight,
    multiindices_up_to_weight,
)


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-30
    max_subdivisions: int = 4000
    rule: int = 15
    precision: int = 50

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")


DEFAULT_QS = QuadratureSettings()


# -----------------------------------------------------------------------------
# Multi-index enumeration
# -----------------------------------------------------------------------------

@lru_cache(maxsize=256)
def delta_multiindices(k: int, n: int) -> tuple[MultiIndex, ...]:
    """All multi-indices of weight k in n variables, lexicographic."""
    return tuple(multiindices_of_weight(k, n))


def index_I(N: int, beta: Sequence[int], d: int, q: int, n: int) -> list[MultiIndex]:
    """All alpha in N_0^d with sum_k k*alpha_k = d*N + q + n - |beta|."""
    target = d * N + q + n - sum(beta)
    if target < 0:
        return []
    out: list[MultiIndex] = []

    def rec(prefix: tuple[int, ...], rest: int, k: int):
        if k == d:
            if rest % d == 0:
                out.append(prefix + (rest // d,))
            return
        for a in range(rest // k + 1):
            rec(prefix + (a,), rest - k * a, k + 1)

    if d == 0:
        return []
    rec((), target, 1)
    return sorted(out)


def compositions_of(total: int, slots: int) -> list[tuple[int, ...]]:
    """All tuples of non-negative integers of given length summing to total."""
    if slots == 0:
        return [()] if total == 0 else []
    out: list[tuple[int, ...]] = []

    def rec(prefix, rest, left):
        if left == 1:
            out.append(prefix + (rest,))
            return
        for v in range(rest + 1):
            rec(prefix + (v,), rest - v, left - 1)

    rec((), total, slots)
    return out


@dataclass(frozen=True)
class CompositionFamily:
    """A family u = (u_1, ..., u_d): u_k assigns a multiplicity to each
    multi-index of weight k, listed in the lexicographic order of
    ``delta_multiindices(k, n)``."""

    n: int
    u: tuple[tuple[int, ...], ...]

    def alpha(self) -> MultiIndex:
        return tuple(sum(uk) for uk in self.u)

    def g_vector(self) -> MultiIndex:
        g = [0] * self.n
        for k, uk in enumerate(self.u, start=1):
            for gamma, mult in zip(delta_multiindices(k, self.n), uk):
                if mult:
                    for i in range(self.n):
                        g[i] += mult * gamma[i]
        return tuple(g)

    def factorial_product(self) -> int:
        acc = 1
        for uk in self.u:
            acc *= mi_factorial(uk)
        return acc

    def to_json(self) -> list[dict]:
        out = []
        for k, uk in enumerate(self.u, start=1):
            for gamma, mult in zip(delta_multiindices(k, self.n), uk):
                if mult:
                    out.append({"k": k, "gamma": list(gamma), "count": mult})
        return out


def enumerate_V(alpha: Sequence[int], n: int) -> list[CompositionFamily]:
    """All composition families with |u_k| = alpha_k for each k."""
    alpha = tuple(int(a) for a in alpha)
    choices: list[list[tuple[int, ...]]] = []
    for k, ak in enumerate(alpha, start=1):
        slots = len(delta_multiindices(k, n))
        choices.append(compositions_of(ak, slots))
    out: list[CompositionFamily] = []

    def rec(prefix: tuple, level: int):
        if level == len(choices):
            out.append(CompositionFamily(n=n, u=prefix))
            return
        for c in choices[level]:
            rec(prefix + (c,), level + 1)

    rec((), 0)
    return out


def _enumerate_V_support(
    alpha: Sequence[int], n: int, support: list[list[int]]
) -> list[CompositionFamily]:
    """Families restricted to positions where the derivative is nonzero."""
    alpha = tuple(int(a) for a in alpha)
    per_k: list[list[tuple[int, ...]]] = []
    for k, ak in enumerate(alpha, start=1):
        slots = len(delta_multiindices(k, n))
        sup = support[k - 1]
        if ak and not sup:
            return []
        packed = compositions_of(ak, len(sup)) if ak else [(0,) * len(sup)]
        expanded = []
        for comp in packed:
            full = [0] * slots
            for pos, v in zip(sup, comp):
                full[pos] = v
            expanded.append(tuple(full))
        per_k.append(expanded)
    out: list[CompositionFamily] = []

    def rec(prefix: tuple, level: int):
        if level == len(per_k):
            out.append(CompositionFamily(n=n, u=prefix))
            return
        for c in per_k[level]:
            rec(prefix + (c,), level + 1)

    rec((), 0)
    return out


def g_vector(u: CompositionFamily) -> MultiIndex:
    return u.g_vector()


# -----------------------------------------------------------------------------
# Ellipticity certification (positivity of every face on the unit cube)
# -----------------------------------------------------------------------------

@lru_cache(maxsize=128)
def _face_positivity(P: MPoly, i: int) -> tuple[str, tuple | None]:
    return bernstein_positive(P.face(i))


def certify_elliptic(P: MPoly) -> tuple[str, tuple | None, int | None]:
    """Certify positivity of every face of P on the closed unit cube."""
    status = "certified"
    for i in range(1, P.nvars + 1):
        st, wit = _face_positivity(P, i)
        if st == "violated":
            return "violated", wit, i
        if st == "sampled_only":
            status = "sampled_only"
    return status, None, None


# -----------------------------------------------------------------------------
# Period integrals
# -----------------------------------------------------------------------------

def _canon(P: MPoly) -> tuple:
    return (P.nvars, tuple(P.canonical_items()))


def _integrate_face(
    Pf: MPoly,
    numer: MPoly,
    expo: int,
    qs: QuadratureSettings,
    cache: dict | None = None,
    abs_tol: float | None = None,
) -> Numeric:
    """Integral over [0,1]^dim of Pf^expo * numer, expo possibly negative."""
    dim = Pf.nvars
    key = (expo, _canon(Pf), _canon(numer))
    if cache is not None and key in cache:
        return cache[key]
    with mp.workdps(qs.precision + 10):
        if expo >= 0:
            poly = (Pf**expo) * numer

            def f(pt):
                return poly.eval_mp(pt)

        else:
            k = -expo

            def f(pt):
                return numer.eval_mp(pt) / Pf.eval_mp(pt) ** k

        val, err = integrate_unit_cube(
            f,
            dim,
            rel_tol=qs.rel_tol,
            abs_tol=abs_tol if abs_tol is not None else qs.abs_tol,
            max_subdivisions=qs.max_subdivisions,
            order=qs.rule,
        )
    out = Numeric(val, err)
    if cache is not None:
        cache[key] = out
    return out


def period_K(
    P: MPoly,
    Q: MPoly,
    N: int,
    alpha: Sequence[int],
    u: CompositionFamily | Sequence[Sequence[int]],
    beta: Sequence[int],
    i: int,
    qs: QuadratureSettings = DEFAULT_QS,
    require_certified: bool = False,
) -> SpecialValue:
    """Period integral over the face i of the unit cube:

        int_{[0,1]^{n-1}} P(face_i)^{N-|alpha|} * P^i_{alpha,u} * d^beta Q(face_i)

    For one variable the integral degenerates to evaluation of the (constant)
    integrand.  Returns an exact rational in that case, a bounded Numeric
    otherwise.  When the face positivity certificate does not close, the
    result carries a "positivity_unverified" flag, or the call raises if
    require_certified is set.
    """
    if not isinstance(u, CompositionFamily):
        u = CompositionFamily(n=P.nvars, u=tuple(tuple(x) for x in u))
    n = P.nvars
    alpha = tuple(int(a) for a in alpha)
    beta = tuple(int(b) for b in beta)
    st, wit = _face_positivity(P, i)
    flags: tuple[str, ...] = ()
    if st == "violated":
        raise NotElliptic(f"face {i} is not positive on the unit cube: P <= 0 at {wit}")
    if st == "sampled_only":
        if require_certified:
            raise PositivityUnverified(
                f"face {i} positivity not certified within the subdivision depth"
            )
        flags = ("positivity_unverified",)
    Pi_u = build_P_alpha_u(P, i, alpha, u.u)
    Pf = P.face(i)
    dQf = Q.derivative(beta).face(i)
    expo = N - sum(alpha)
    if n == 1:
        base = Pf.constant_value()
        val = base**expo * Pi_u.constant_value() * dQf.constant_value()
        return SpecialValue.make_exact(val, flags=flags)
    numer = Pi_u * dQf
    if numer.is_zero():
        return SpecialValue.make_exact(Fraction(0), flags=flags)
    num = _integrate_face(Pf, numer, expo, qs)
    return SpecialValue.make_numeric(num, flags=flags)


def convergence_abscissa(P: MPoly, Q: MPoly) -> Fraction:
    """Abscissa (n + deg Q)/deg P of absolute convergence of the series."""
    ok, d = P.is_homogeneous()
    if not ok or d < 1:
        raise NotHomogeneous("need homogeneous P of degree >= 1")
    q = max(Q.degree(), 0)
    return Fraction(P.nvars + q, d)


# -----------------------------------------------------------------------------
# The value Z(P, Q; -N)
# -----------------------------------------------------------------------------

def _derivative_support(P: MPoly, d: int) -> list[list[int]]:
    """Per weight k, positions of multi-indices gamma with d^gamma P != 0."""
    out = []
    for k in range(1, d + 1):
        gammas = delta_multiindices(k, P.nvars)
        out.append([j for j, g in enumerate(gammas) if not P.derivative(g).is_zero()])
    return out


def _check_P(P: MPoly) -> tuple[int, tuple[str, ...]]:
    ok, d = P.is_homogeneous()
    if not ok or d < 1 or P.is_zero():
        raise NotHomogeneous("P must be homogeneous of degree >= 1")
    st, wit, i = certify_elliptic(P)
    if st == "violated":
        raise NotElliptic(f"face {i} non-positive at {wit}")
    flags = ("positivity_unverified",) if st == "sampled_only" else ()
    return d, flags


def Z_value(
    P: MPoly,
    Q: MPoly,
    N: int,
    qs: QuadratureSettings = DEFAULT_QS,
    collect_terms: bool = False,
):
    """Value of the Dirichlet series sum_m Q(m) P(m)^{-s} at s = -N.

    Q is decomposed into homogeneous components (the value is linear in Q);
    each component contributes a triple sum over derivative orders beta,
    weighted index vectors alpha and composition families u, with face-period
    integrals and a product of modified Bernoulli numbers per term.
    """
    if N < 0:
        raise ValueError("N must be a non-negative integer")
    d, flags = _check_P(P)
    n = P.nvars
    exact_acc = Fraction(0)
    buckets: dict[tuple, dict] = {}
    support = _derivative_support(P, d)
    for ci, (q, Qc) in enumerate(Q.homogeneous_components()):
        for beta in multiindices_up_to_weight(q, n):
            dQc = Qc.derivative(beta)
            if dQc.is_zero():
                continue
            for alpha in index_I(N, beta, d, q, n):
                c_ab = Fraction(
                    (-1) ** (sum(alpha) - N)
                    * factorial(sum(alpha) - 1 - N)
                    * factorial(N),
                    d * mi_factorial(alpha) * mi_factorial(beta),
                )
                for u in _enumerate_V_support(alpha, n, support):
                    g = u.g_vector()
                    if sum(g) + sum(beta) != d * N + q + n:
                        raise AssertionError("degree bookkeeping violated")
                    bt = Fraction(1)
                    for gi, bi in zip(g, beta):
                        bt *= bernoulli_tilde(gi + bi)
                        if bt == 0:
                            break
                    if bt == 0:
                        continue
                    w = c_ab * bt
                    for i in range(1, n + 1):
                        Pi_u = build_P_alpha_u(P, i, alpha, u.u)
                        if Pi_u.is_zero():
                            continue
                        key = (ci, i, beta, alpha)
                        slot = buckets.setdefault(
                            key, {"numer": MPoly.zero(n - 1), "dQ": dQc}
                        )
                        slot["numer"] = slot["numer"] + Pi_u.scale(w)
    # Evaluate buckets in a fixed order.
    num_parts: list[Numeric] = []
    terms_out = []
    cache: dict = {}
    keys = sorted(buckets.keys())
    live = [k for k in keys if not buckets[k]["numer"].is_zero()]
    per_bucket_abs = qs.abs_tol / max(1, len(live))
    for key in live:
        ci, i, beta, alpha = key
        slot = buckets[key]
        dQf = slot["dQ"].face(i)
        if dQf.is_zero():
            continue
        Pf = P.face(i)
        expo = N - sum(alpha)
        if n == 1:
            val = (
                Pf.constant_value() ** expo
                * slot["numer"].constant_value()
                * dQf.constant_value()
            )
            exact_acc += val
            if collect_terms:
                terms_out.append(
                    {"component": ci, "i": i, "beta": list(beta),
                     "alpha": list(alpha), "exact": str(val)}
                )
        else:
            numer = slot["numer"] * dQf
            if numer.is_zero():
                continue
            num = _integrate_face(Pf, numer, expo, qs, cache=cache,
                                  abs_tol=per_bucket_abs)
            num_parts.append(num)
            if collect_terms:
                with mp.workdps(qs.precision):
                    terms_out.append(
                        {"component": ci, "i": i, "beta": list(beta),
                         "alpha": list(alpha), "value": mp.nstr(num.value, 20),
                         "err": mp.nstr(num.err, 5)}
                    )
    if not num_parts:
        result = SpecialValue.make_exact(exact_acc, flags=flags)
    else:
        with mp.workdps(qs.precision + 10):
            acc = Numeric.from_rational(exact_acc)
            for p in num_parts:
                acc = acc + p
        result = SpecialValue.make_numeric(acc, flags=flags)
    if collect_terms:
        return result, terms_out
    return result


# -----------------------------------------------------------------------------
# Shifted-integral expansion and the Raabe-type substitution
# -----------------------------------------------------------------------------

@dataclass
class YExpansion:
    """Coefficients of the expansion of the shifted integral continuation in
    the basis prod_i (1+a_i)^{m_i}, keyed by the exponent vector m."""

    n: int
    coeffs: dict[MultiIndex, SpecialValue]

    def total_degree_bound(self) -> int:
        return max((sum(m) for m in self.coeffs), default=0)

    def items_sorted(self):
        return sorted(self.coeffs.items(), key=lambda kv: kv[0])


def Y_expansion(
    P: MPoly, Q: MPoly, N: int, qs: QuadratureSettings = DEFAULT_QS
) -> YExpansion:
    """Expansion of the integral over [1,oo)^n of Q_a P_a^{-s} at s = -N in
    powers of (1 + a_i), computed from the same face-period data as Z."""
    if N < 0:
        raise ValueError("N must be a non-negative integer")
    d, flags = _check_P(P)
    n = P.nvars
    expansion: dict[MultiIndex, SpecialValue] = {}
    cache: dict = {}
    support = _derivative_support(P, d)
    for ci, (q, Qc) in enumerate(Q.homogeneous_components()):
        for beta in multiindices_up_to_weight(q, n):
            dQc = Qc.derivative(beta)
            if dQc.is_zero():
                continue
            for alpha in index_I(N, beta, d, q, n):
                c_ab = Fraction(
                    (-1) ** (sum(alpha) - N)
                    * factorial(sum(alpha) - 1 - N)
                    * factorial(N),
                    d * mi_factorial(alpha) * mi_factorial(beta),
                )
                groups: dict[MultiIndex, dict[int, MPoly]] = {}
                for u in _enumerate_V_support(alpha, n, support):
                    g = u.g_vector()
                    m = tuple(gi + bi for gi, bi in zip(g, beta))
                    for i in range(1, n + 1):
                        Pi_u = build_P_alpha_u(P, i, alpha, u.u)
                        if Pi_u.is_zero():
                            continue
                        slot = groups.setdefault(m, {})
                        slot[i] = slot.get(i, MPoly.zero(n - 1)) + Pi_u
                for m in sorted(groups.keys()):
                    total = SpecialValue.make_exact(Fraction(0))
                    for i in sorted(groups[m].keys()):
                        numer = groups[m][i] * dQc.face(i)
                        if numer.is_zero():
                            continue
                        Pf = P.face(i)
                        expo = N - sum(alpha)
                        if n == 1:
                            v = (
                                Pf.constant_value() ** expo
                                * numer.constant_value()
                            )
                            total = total + SpecialValue.make_exact(v)
                        else:
                            num = _integrate_face(Pf, numer, expo, qs, cache=cache)
                            total = total + SpecialValue.make_numeric(num)
                    total = total.scale(c_ab)
                    if m in expansion:
                        expansion[m] = expansion[m] + total
                    else:
                        expansion[m] = total
    expansion = {
        m: v.with_flags(flags)
        for m, v in expansion.items()
        if not (v.kind == "exact" and v.exact == 0)
    }
    return YExpansion(n=n, coeffs=expansion)


def Y_value(
    P: MPoly,
    Q: MPoly,
    N: int,
    a: Sequence[Fraction],
    qs: QuadratureSettings = DEFAULT_QS,
) -> SpecialValue:
    """Evaluate the shifted integral continuation at a concrete shift a >= 0."""
    exp = Y_expansion(P, Q, N, qs)
    if len(a) != P.nvars:
        raise ValueError("shift vector has wrong length")
    av = [Fraction(x) for x in a]
    total = SpecialValue.make_exact(Fraction(0))
    for m, coeff in exp.items_sorted():
        w = Fraction(1)
        for ai, mi in zip(av, m):
            w *= (1 + ai) ** mi
        total = total + coeff.scale(w)
    return total


def raabe_substitute(exp: YExpansion) -> SpecialValue:
    """Replace each basis monomial exponent m by the product of modified
    Bernoulli numbers; by construction this reproduces Z(P,Q;-N)."""
    total = SpecialValue.make_exact(Fraction(0))
    for m, coeff in exp.items_sorted():
        w = Fraction(1)
        for mi in m:
            w *= bernoulli_tilde(mi)
            if w == 0:
                break
        if w == 0:
            continue
        total = total + coeff.scale(w)
    return total
