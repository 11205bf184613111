"""Regularized values of multiple zeta-functions with polynomial denominators.

For a family P_1, ..., P_n (P_j in j variables) the value at a non-positive
integer tuple -N, taken as a limit in the last coordinate, reduces to the
value of a one-variable Mahler-type series: Z(P_n, prod_j P_j^{N_j}; 0).
The diagonal-denominator case additionally admits a closed expansion in
generalized beta-like cube integrals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from mpmath import mp, mpf

from ._quadrature import integrate_unit_cube
from .errors import HypothesisViolated, NotDiagonal, NotElliptic
from .exactnum import Numeric, SpecialValue, bernoulli_tilde
from .mahler import (
    DEFAULT_QS,
    QuadratureSettings,
    Z_value,
    certify_elliptic,
    compositions_of,
)
from .multipoly import (
    H0sReport,
    MPoly,
    MultiIndex,
    h0s_heuristic,
    mi_factorial,
    positivity_check,
)


@dataclass(frozen=True)
class GammaFactorSpec:
    m: int
    mu: tuple[Fraction, ...]

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("m must be non-negative")
        mu = tuple(Fraction(x) for x in self.mu)
        if any(x <= 0 for x in mu):
            raise ValueError("all mu_i must be positive")
        object.__setattr__(self, "mu", mu)


@dataclass(frozen=True)
class PolyFamily:
    """Family P_1, ..., P_n with P_j in j variables, plus hypothesis
    check results gathered at construction time."""

    polys: tuple[MPoly, ...]
    positivity: tuple[str, ...] = ()
    h0s: tuple[H0sReport | None, ...] = ()
    ellipticity: str = "unchecked"
    flags: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return len(self.polys)


def build_family(polys: Sequence[MPoly], seed: int = 0) -> PolyFamily:
    """Validate a family: per-polynomial positivity on [1,oo)^j sampled,
    boundedness heuristic for all but the last, ellipticity certificate for
    the last.  Violations raise; heuristic gaps only set flags."""
    polys = tuple(polys)
    n = len(polys)
    if n < 1:
        raise ValueError("family must contain at least one polynomial")
    for j, P in enumerate(polys, start=1):
        if P.nvars != j:
            raise ValueError(f"P_{j} must have exactly {j} variables")
    flags: list[str] = []
    positivity: list[str] = []
    h0s_reports: list[H0sReport | None] = []
    for j, P in enumerate(polys, start=1):
        res = positivity_check(P, domain="box", seed=seed)
        if res.status == "violated":
            raise HypothesisViolated(
                f"P_{j} is not positive on [1,oo)^{j}: value <= 0 at {res.witness}"
            )
        positivity.append(res.status)
        if j < n:
            rep = h0s_heuristic(P, seed=seed)
            h0s_reports.append(rep)
            if not rep.passed:
                flags.append(f"h0s_failed:P{j}")
            elif rep.warning:
                flags.append(f"h0s_warning:P{j}")
        else:
            h0s_reports.append(None)
    last = polys[-1]
    ok, deg = last.is_homogeneous()
    if not ok or deg < 1:
        raise HypothesisViolated("P_n must be homogeneous of degree >= 1")
    st, wit, i = certify_elliptic(last)
    if st == "violated":
        raise NotElliptic(f"face {i} of P_n non-positive at {wit}")
    if st == "sampled_only":
        flags.append("ellipticity_unverified")
    return PolyFamily(
        polys=polys,
        positivity=tuple(positivity),
        h0s=tuple(h0s_reports),
        ellipticity=st,
        flags=tuple(sorted(set(flags))),
    )


def build_QN(family: PolyFamily, N: Sequence[int]) -> tuple[MPoly, int]:
    """Q_N = prod_j P_j^{N_j} lifted to n variables; returns (Q_N, deg Q_N)."""
    N = tuple(int(x) for x in N)
    if len(N) != family.n or any(x < 0 for x in N):
        raise ValueError("N must be a non-negative tuple of length n")
    n = family.n
    Q = MPoly.one(n)
    qdeg = 0
    for j, (P, Nj) in enumerate(zip(family.polys, N), start=1):
        if Nj == 0:
            continue
        lifted = MPoly(
            n, {e + (0,) * (n - j): c for e, c in P.terms.items()}
        )
        Q = Q * lifted**Nj
        qdeg += Nj * P.degree()
    return Q, qdeg


def zeta_P_at(
    family: PolyFamily, N: Sequence[int], qs: QuadratureSettings = DEFAULT_QS
) -> SpecialValue:
    """Regularized value at -N (limit in the last coordinate):
    Z(P_n, Q_N; 0)."""
    QN, _ = build_QN(family, N)
    val = Z_value(family.polys[-1], QN, 0, qs)
    return val.with_flags(family.flags)


# -----------------------------------------------------------------------------
# Generalized gamma factors and the diagonal-denominator expansion
# -----------------------------------------------------------------------------

def G_factor(
    spec: GammaFactorSpec, qs: QuadratureSettings = DEFAULT_QS
) -> Numeric:
    """The cube integral of prod t_i^{mu_i - 1} / (1 + sum t_i)^m over
    (0,1)^{len(mu)}.

    Each t_i is substituted by u_i^{b_i} with b_i the denominator of mu_i,
    which turns t_i^{mu_i-1} dt_i into b_i u_i^{a_i-1} du_i with integer
    a_i, so the transformed integrand is a smooth polynomial ratio.
    """
    mu = spec.mu
    m = spec.m
    dim = len(mu)
    with mp.workdps(qs.precision + 10):
        if dim == 0:
            return Numeric(mpf(1), mpf(0))
        powers = [x.denominator for x in mu]
        numer_exp = [x.numerator for x in mu]  # a_i = numerator(mu_i) >= 1
        jac = mpf(1)
        for b in powers:
            jac *= b

        def f(pt):
            acc = jac
            s = mpf(0)
            for x, a, b in zip(pt, numer_exp, powers):
                if a > 1:
                    acc *= x ** (a - 1)
                s += x**b
            if m:
                acc /= (1 + s) ** m
            return acc

        val, err = integrate_unit_cube(
            f,
            dim,
            rel_tol=qs.rel_tol,
            abs_tol=qs.abs_tol,
            max_subdivisions=qs.max_subdivisions,
            order=qs.rule,
        )
    return Numeric(val, err)


def _is_diagonal(P: MPoly) -> int | None:
    """Degree d if P = X_1^d + ... + X_n^d, else None."""
    ok, d = P.is_homogeneous()
    if not ok or d < 1:
        return None
    want = {}
    for j in range(P.nvars):
        e = [0] * P.nvars
        e[j] = d
        want[tuple(e)] = Fraction(1)
    return d if P.terms == want else None


def diagonal_value(
    family: PolyFamily, N: Sequence[int], qs: QuadratureSettings = DEFAULT_QS
) -> SpecialValue:
    """Value at -N for a diagonal last polynomial X_1^d + ... + X_n^d,
    expanded over derivative data of Q_N at the origin and generalized
    gamma-factor integrals."""
    last = family.polys[-1]
    d = _is_diagonal(last)
    if d is None:
        raise NotDiagonal("last polynomial must be X_1^d + ... + X_n^d")
    n = family.n
    QN, qN = build_QN(family, N)
    gcache: dict = {}

    def G(m: int, mu: tuple[Fraction, ...]) -> Numeric:
        key = (m, tuple(sorted(mu)))
        if key not in gcache:
            gcache[key] = G_factor(GammaFactorSpec(m=m, mu=key[1]), qs)
        return gcache[key]

    exact_acc = Fraction(0)
    numeric_parts: list[tuple[Fraction, int, tuple[Fraction, ...]]] = []
    # Only exponents actually present in Q_N have a nonzero derivative at 0.
    for beta in sorted(QN.terms.keys()):
        if sum(beta) > qN:
            continue
        dQ0 = QN.terms[beta] * mi_factorial(beta)
        for nu in _sub_indices(beta):
            target = sum(nu) + n
            for alpha in _alphas_with_weight(target, d):
                a_abs = sum(alpha)
                base = Fraction(
                    (-1) ** a_abs * factorial(a_abs - 1), d**n * mi_factorial(beta)
                )
                base *= dQ0
                # binomial powers from the derivatives of the pure powers X^d
                for k, ak in enumerate(alpha, start=1):
                    if ak:
                        base *= _comb(d, k) ** ak
                for k in range(len(beta)):
                    base *= _comb(beta[k], nu[k])
                for gammas in _gamma_tuples(alpha, n):
                    coeff = base
                    for gk in gammas:
                        coeff /= mi_factorial(gk)
                    bt = Fraction(1)
                    for i in range(n):
                        idx = beta[i] - nu[i] + sum(
                            (k + 1) * gammas[k][i] for k in range(d)
                        )
                        bt *= bernoulli_tilde(idx)
                        if bt == 0:
                            break
                    if bt == 0:
                        continue
                    coeff *= bt
                    for i in range(1, n + 1):
                        mu = tuple(
                            Fraction(
                                1
                                + nu[j]
                                + sum((d - (k + 1)) * gammas[k][j] for k in range(d)),
                                d,
                            )
                            for j in range(n)
                            if j != i - 1
                        )
                        if n == 1:
                            exact_acc += coeff
                        else:
                            numeric_parts.append((coeff, a_abs, mu))
    if not numeric_parts:
        return SpecialValue.make_exact(exact_acc, flags=family.flags)
    with mp.workdps(qs.precision + 10):
        acc = Numeric.from_rational(exact_acc)
        for coeff, m, mu in numeric_parts:
            acc = acc + G(m, mu).scale(coeff)
    return SpecialValue.make_numeric(acc, flags=family.flags)


def _comb(a: int, b: int) -> int:
    from math import comb

    return comb(a, b)


def _sub_indices(beta: MultiIndex) -> list[MultiIndex]:
    """All nu <= beta componentwise, sorted."""
    out = [()]
    for b in beta:
        out = [p + (v,) for p in out for v in range(b + 1)]
    return sorted(out)


def _alphas_with_weight(target: int, d: int) -> list[MultiIndex]:
    """alpha in N_0^d with sum_k k alpha_k = target."""
    out: list[MultiIndex] = []

    def rec(prefix, rest, k):
        if k == d:
            if rest % d == 0:
                out.append(prefix + (rest // d,))
            return
        for a in range(rest // k + 1):
            rec(prefix + (a,), rest - k * a, k + 1)

    rec((), target, 1)
    return sorted(out)


def _gamma_tuples(alpha: MultiIndex, n: int):
    """Tuples (gamma^1, ..., gamma^d) with gamma^k in N_0^n, |gamma^k| = alpha_k."""
    per_k = [compositions_of(ak, n) for ak in alpha]
    out = [()]
    for options in per_k:
        out = [p + (g,) for p in out for g in options]
    return out
