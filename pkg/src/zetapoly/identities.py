"""Bernoulli-number identities from two independent value formulas.

Two expressions for zeta(-N) and two for the Euler double zeta value at
non-positive integer pairs, all exact rationals.  Agreement of the pairs is
a non-trivial family of relations among Bernoulli numbers; the grid
verifier checks it exhaustively.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .exactnum import bernoulli, bernoulli_tilde, falling_factorial_ext


@dataclass(frozen=True)
class IdentityReport:
    parameters: tuple
    lhs: Fraction
    rhs: Fraction
    equal: bool
    elapsed: float
    label: str


def zeta_neg_via_B1(N: int) -> Fraction:
    """zeta(-N) = -B_{N+1}/(N+1) - sum_a C(N,a) B_a / (N+1-a)."""
    if N < 0:
        raise ValueError("N must be non-negative")
    out = -Fraction(bernoulli(N + 1), N + 1)
    for a in range(N + 1):
        out -= Fraction(comb(N, a)) * bernoulli(a) / (N + 1 - a)
    return out


def zeta_neg_closed(N: int) -> Fraction:
    """zeta(-N) = (-1)^N B_{N+1}/(N+1)."""
    if N < 0:
        raise ValueError("N must be non-negative")
    return Fraction((-1) ** N) * bernoulli(N + 1) / (N + 1)


def double_B3(N1: int, N2: int) -> Fraction:
    """Euler double value at (-N1, -N2) from the linear-denominator formula
    (three triple sums over l and Bernoulli pairs)."""
    if N1 < 0 or N2 < 0:
        raise ValueError("indices must be non-negative")
    total = Fraction(0)
    T = N1 + N2 + 2
    # first block
    for l in range(N1 + 1):
        pref = (
            Fraction(comb(N1, l))
            / comb(N1 + N2 + 1 - l, N2)
            * Fraction((-1) ** (N1 + 3 - l))
            / ((T - l) * (l - N1 - 1))
        )
        for k1 in range(l, T + 1):
            for k2 in range(0, T - k1 + 1):
                b = bernoulli(k1) * bernoulli(k2)
                if b == 0:
                    continue
                w = Fraction(
                    factorial(T - l),
                    factorial(k1 - l) * factorial(k2) * factorial(T - k1 - k2),
                )
                total += pref * w * b
    # second block
    for l in range(N1 + 1):
        pref = Fraction(comb(N1, l), (N2 + 1) * (N1 + 1 - l))
        cap = N2 + 1 + l
        for k1 in range(l, cap + 1):
            for k2 in range(0, cap - k1 + 1):
                b = bernoulli(k1) * bernoulli(k2)
                if b == 0:
                    continue
                w = Fraction(
                    factorial(N2 + 1),
                    factorial(k1 - l) * factorial(k2) * factorial(cap - k1 - k2),
                )
                total += pref * w * b
    # third block
    for l1 in range(N1 + 1):
        for l2 in range(N2 + 1):
            pref = Fraction(comb(N1, l1) * comb(N2, l2), 1) / (
                (T - l1 - l2) * (N2 + 1 - l2)
            )
            cap = l1 + l2
            for k1 in range(l1, cap + 1):
                for k2 in range(0, cap - k1 + 1):
                    b = bernoulli(k1) * bernoulli(k2)
                    if b == 0:
                        continue
                    w = Fraction(
                        factorial(l2),
                        factorial(k1 - l1) * factorial(k2) * factorial(cap - k1 - k2),
                    )
                    total += pref * w * b
    return total


def double_B6(N1: int, N2: int) -> Fraction:
    """Euler double value at (-N1, -N2) from the Mahler-series formula,
    with the period integrals already summed in closed form.

    Uses the extended falling factorial with (n)_{-1} = 1/(n+1)."""
    if N1 < 0 or N2 < 0:
        raise ValueError("indices must be non-negative")
    total = Fraction(0)
    for b1 in range(N1 + N2 + 1):
        for b2 in range(N1 + N2 - b1 + 1):
            A = N1 + N2 + 2 - b1 - b2
            if b2 > N2:
                continue  # derivative of Q vanishes
            jlo = max(0, b1 - N1)
            jhi = min(b1, N2 - b2)
            inner = Fraction(0)
            for j in range(jlo, jhi + 1):
                inner += (
                    comb(b1, j)
                    * falling_factorial_ext(N1, b1 - j - 1)
                    * falling_factorial_ext(N2 - b2, j)
                )
            if inner == 0:
                continue
            pref = (
                Fraction((-1) ** A)
                * factorial(A - 1)
                / (factorial(A) * factorial(b1) * factorial(b2))
                * falling_factorial_ext(N2, b2)
                * inner
            )
            for l in range(A + 1):
                bt = bernoulli_tilde(N1 + N2 + 2 - b2 - l) * bernoulli_tilde(b2 + l)
                if bt == 0:
                    continue
                total += pref * comb(A, l) * bt
    return total


def verify_identity_grid(maxN1: int, maxN2: int) -> list[IdentityReport]:
    """Exact equality reports for the double-value pair on the full grid,
    plus the single-variable pair up to maxN1 + maxN2."""
    if maxN1 < 0 or maxN2 < 0:
        raise ValueError("bounds must be non-negative")
    reports: list[IdentityReport] = []
    for N in range(maxN1 + maxN2 + 1):
        t0 = time.perf_counter()
        lhs = zeta_neg_via_B1(N)
        rhs = zeta_neg_closed(N)
        reports.append(
            IdentityReport(
                parameters=(N,),
                lhs=lhs,
                rhs=rhs,
                equal=lhs == rhs,
                elapsed=time.perf_counter() - t0,
                label="zeta_neg",
            )
        )
    for N1 in range(maxN1 + 1):
        for N2 in range(maxN2 + 1):
            t0 = time.perf_counter()
            lhs = double_B3(N1, N2)
            rhs = double_B6(N1, N2)
            reports.append(
                IdentityReport(
                    parameters=(N1, N2),
                    lhs=lhs,
                    rhs=rhs,
                    equal=lhs == rhs,
                    elapsed=time.perf_counter() - t0,
                    label="euler_double",
                )
            )
    return reports
