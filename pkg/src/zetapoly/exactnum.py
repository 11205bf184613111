"""Exact arithmetic kernel.

Big rationals, Bernoulli numbers and polynomials, generalized binomial
coefficients, shifted Pochhammer products, and error-bounded high-precision
evaluation of Gamma at rational arguments and of the Riemann zeta function.

Exact values are ``fractions.Fraction``; high-precision numerics are
``Numeric`` pairs (mpmath float, absolute error bound) so every floating
result carries a certified bound.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

from mpmath import mp, mpf

from .errors import DegenerateFactor, Pole, PrecisionUnreachable

Rational = Fraction

# Hard cap on requested decimal digits for the Gamma/zeta engines.
MAX_PRECISION_DPS = 4000

DEFAULT_DPS = 50


def rat_to_str(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_from_str(s: str) -> Fraction:
    return Fraction(s.strip())


def mpf_from_rational(x: Fraction) -> mpf:
    """Round an exact rational into the current working precision."""
    x = Fraction(x)
    if x.denominator == 1:
        return mpf(x.numerator)
    return mpf(x.numerator) / x.denominator


# -----------------------------------------------------------------------------
# Bernoulli numbers and polynomials
# -----------------------------------------------------------------------------

_BERN_LOCK = threading.Lock()
_BERN: list[Fraction] = []
BERNOULLI_EAGER_MAX = 128


def _extend_bernoulli(upto: int) -> None:
    with _BERN_LOCK:
        if not _BERN:
            _BERN.append(Fraction(1))
        while len(_BERN) <= upto:
            m = len(_BERN)
            # sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1
            s = Fraction(0)
            for j in range(m):
                if j > 1 and j % 2 == 1:
                    continue
                s += comb(m + 1, j) * _BERN[j]
            _BERN.append(-s / (m + 1))


def bernoulli(k: int) -> Fraction:
    """Bernoulli number B_k, with B_1 = -1/2 (generating function X/(e^X-1))."""
    if k < 0:
        raise ValueError("Bernoulli index must be non-negative")
    if k >= len(_BERN):
        _extend_bernoulli(max(k, BERNOULLI_EAGER_MAX))
    return _BERN[k]


def bernoulli_tilde(k: int) -> Fraction:
    """Modified Bernoulli number: (-1)^k B_k, i.e. B_1 flipped to +1/2."""
    b = bernoulli(k)
    return -b if k % 2 == 1 else b


def bernoulli_poly(k: int) -> list[Fraction]:
    """Coefficients [c_0, ..., c_k] of B_k(x) = sum_j c_j x^j."""
    if k < 0:
        raise ValueError("Bernoulli index must be non-negative")
    return [comb(k, j) * bernoulli(k - j) for j in range(k + 1)]


def eval_bernoulli_poly(k: int, x: Fraction) -> Fraction:
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(bernoulli_poly(k)):
        acc = acc * x + c
    return acc


# Build the table eagerly so concurrent readers never trigger a resize.
_extend_bernoulli(BERNOULLI_EAGER_MAX)


# -----------------------------------------------------------------------------
# Binomials, factorials, Pochhammer products
# -----------------------------------------------------------------------------

def binom_signed(n: int, k: int) -> int:
    """Generalized binomial n(n-1)...(n-k+1)/k! for any integer n, k >= 0."""
    if k < 0:
        raise ValueError("lower index must be non-negative")
    if n >= 0:
        return comb(n, k) if k <= n else 0
    # C(-m, k) = (-1)^k C(m+k-1, k)
    return (-1) ** k * comb(-n + k - 1, k)


def binom_rational(x: Fraction, k: int) -> Fraction:
    """Generalized binomial with rational upper argument."""
    if k < 0:
        raise ValueError("lower index must be non-negative")
    x = Fraction(x)
    num = Fraction(1)
    for t in range(k):
        num *= x - t
    return num / factorial(k)


def rising_factorial(x: Fraction, k: int) -> Fraction:
    x = Fraction(x)
    acc = Fraction(1)
    for t in range(k):
        acc *= x + t
    return acc


def falling_factorial_ext(n: int, m: int) -> Fraction:
    """(n)_m = n(n-1)...(n-m+1) for m >= 0, extended by (n)_{-1} = 1/(n+1).

    The m = -1 extension is the unique value consistent with
    (n)_m = (n)_{m-1} * (n - m + 1).
    """
    if m < -1:
        raise ValueError("index below -1 is not defined")
    if m == -1:
        return Fraction(1, n + 1)
    acc = Fraction(1)
    for t in range(m):
        acc *= n - t
    return acc


def multi_factorial(idx: Sequence[int]) -> int:
    acc = 1
    for e in idx:
        acc *= factorial(e)
    return acc


def pochhammer_shift(x: Fraction, M: int, b: int) -> Fraction:
    """Shifted Pochhammer product (x)_{M,b} = prod_{k=-M}^{b-1} (k - x).

    Exactly M + b factors.  Raises DegenerateFactor when some factor
    vanishes, which signals that x is an integer inside the index range.
    """
    if M < 0 or b < 1:
        raise ValueError("need M >= 0 and b >= 1")
    x = Fraction(x)
    acc = Fraction(1)
    for k in range(-M, b):
        f = k - x
        if f == 0:
            raise DegenerateFactor(f"factor k - x vanishes at k = {k}, x = {x}")
        acc *= f
    return acc


# -----------------------------------------------------------------------------
# Error-carrying high-precision numbers
# -----------------------------------------------------------------------------

def _round_err(v: mpf) -> mpf:
    # Generous slack over one ulp of the current working precision.
    return abs(v) * mpf(2) ** (4 - mp.prec)


@dataclass(frozen=True)
class Numeric:
    """A high-precision float together with an absolute error bound."""

    value: mpf
    err: mpf

    @staticmethod
    def from_rational(x: Fraction) -> "Numeric":
        v = mpf_from_rational(x)
        return Numeric(v, _round_err(v))

    @staticmethod
    def exact_zero() -> "Numeric":
        return Numeric(mpf(0), mpf(0))

    def __add__(self, other: "Numeric") -> "Numeric":
        with mp.extradps(5):
            v = self.value + other.value
            e = self.err + other.err + _round_err(v)
        return Numeric(v, e)

    def __sub__(self, other: "Numeric") -> "Numeric":
        return self + (-other)

    def __neg__(self) -> "Numeric":
        return Numeric(-self.value, self.err)

    def __mul__(self, other: "Numeric") -> "Numeric":
        with mp.extradps(5):
            v = self.value * other.value
            e = (
                abs(self.value) * other.err
                + abs(other.value) * self.err
                + self.err * other.err
                + _round_err(v)
            )
        return Numeric(v, e)

    def scale(self, c: Fraction) -> "Numeric":
        with mp.extradps(5):
            cf = mpf_from_rational(Fraction(c))
            v = self.value * cf
            e = abs(cf) * self.err + _round_err(v)
        return Numeric(v, e)

    def divide(self, other: "Numeric") -> "Numeric":
        if abs(other.value) <= other.err:
            raise ZeroDivisionError("divisor interval contains zero")
        with mp.extradps(5):
            v = self.value / other.value
            e = (self.err + abs(v) * other.err) / (abs(other.value) - other.err)
            e = e + _round_err(v)
        return Numeric(v, e)

    def pow_int(self, n: int) -> "Numeric":
        if n < 0:
            return Numeric(mpf(1), mpf(0)).divide(self.pow_int(-n))
        acc = Numeric(mpf(1), mpf(0))
        base = self
        e = n
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def abs_distance(self, x: Fraction | float | mpf) -> mpf:
        with mp.extradps(5):
            if isinstance(x, Fraction):
                x = mpf_from_rational(x)
            return abs(self.value - mpf(x))

    def to_json(self, ndigits: int = 30) -> dict:
        return {
            "value": mp.nstr(self.value, ndigits),
            "err": mp.nstr(self.err, 5, min_fixed=1, max_fixed=0),
        }


def numeric_sum(items: Iterable[Numeric]) -> Numeric:
    acc = Numeric.exact_zero()
    for it in items:
        acc = acc + it
    return acc


# -----------------------------------------------------------------------------
# Gamma at rational arguments (shift + Stirling with rigorous remainder)
# -----------------------------------------------------------------------------

def _stirling_lngamma(z: Fraction) -> tuple[mpf, mpf]:
    """ln Gamma(z) for rational z large enough, with absolute error bound.

    Remainder after the B_{2K} term of the Stirling series is bounded by the
    first omitted term for real z > 0.
    """
    zf = mpf_from_rational(z)
    target = mpf(10) ** (-(mp.dps - 4))
    s = (zf - mpf(1) / 2) * mp.log(zf) - zf + mp.log(2 * mp.pi) / 2
    k = 1
    nops = 8
    while True:
        term = Fraction(bernoulli(2 * k), (2 * k) * (2 * k - 1)) / z ** (2 * k - 1)
        s += mpf_from_rational(term)
        nops += 4
        nxt = abs(
            Fraction(bernoulli(2 * k + 2), (2 * k + 2) * (2 * k + 1))
            / z ** (2 * k + 1)
        )
        bound = mpf_from_rational(nxt)
        if bound < target:
            break
        if 2 * k > 8 * mp.dps:
            # Divergent tail reached before the target: shift was too small.
            raise PrecisionUnreachable("Stirling shift too small for target")
        k += 1
    err = bound + nops * _round_err(abs(s) + 1)
    return s, err


def gamma_rational_numeric(r: Fraction, precision: int = DEFAULT_DPS) -> Numeric:
    """Gamma(r) for rational r in (0,1) to `precision` decimal digits."""
    r = Fraction(r)
    if not (0 < r < 1):
        raise ValueError("argument must lie strictly between 0 and 1")
    return gamma_rational(r, precision)


def gamma_rational(x: Fraction, precision: int = DEFAULT_DPS) -> Numeric:
    """Gamma(x) for any rational x that is not a non-positive integer."""
    if precision > MAX_PRECISION_DPS:
        raise PrecisionUnreachable(f"requested {precision} digits > cap {MAX_PRECISION_DPS}")
    x = Fraction(x)
    if x.denominator == 1 and x <= 0:
        raise Pole(f"Gamma has a pole at {x}")
    with mp.workdps(precision + 15):
        if x.denominator == 1:
            v = mpf(factorial(x.numerator - 1))
            return Numeric(v, _round_err(v))
        # Reduce to the fractional part in (0,1), then shift upward far
        # enough that the Stirling tail reaches the target precision.
        frac = x - (x.numerator // x.denominator)
        shift_min = int((precision + 12) / 2.6) + 2
        z = frac + shift_min
        lng, lerr = _stirling_lngamma(z)
        g = mp.exp(lng)
        gerr = g * (lerr + _round_err(lng)) * (1 + lerr)
        # Gamma(x) = Gamma(z) / prod over the recurrence steps, exactly rational.
        ratio = Fraction(1)
        t = x
        while t < z:
            ratio *= t
            t += 1
        assert t == z
        rf = mpf_from_rational(ratio)
        v = g / rf
        e = gerr / abs(rf) + _round_err(v)
        return Numeric(v, e)


# -----------------------------------------------------------------------------
# Riemann zeta: exact at non-positive integers, numeric for s > 1
# -----------------------------------------------------------------------------

def riemann_zeta_exact_nonpositive(M: int) -> Fraction:
    """zeta(-M) = (-1)^M B_{M+1} / (M+1) for M >= 0."""
    if M < 0:
        raise ValueError("M must be non-negative")
    return Fraction((-1) ** M) * bernoulli(M + 1) / (M + 1)


def riemann_zeta_numeric(s: Fraction, precision: int = DEFAULT_DPS) -> Numeric:
    """zeta(s) for rational s > 1: Euler-Maclaurin tail with a closed bound."""
    if precision > MAX_PRECISION_DPS:
        raise PrecisionUnreachable(f"requested {precision} digits > cap {MAX_PRECISION_DPS}")
    s = Fraction(s)
    if s <= 1:
        raise ValueError("numeric path requires s > 1")
    with mp.workdps(precision + 10):
        target = mpf(10) ** (-(precision + 4))
        M = max(10, precision)
        while True:
            best = None
            for K in range(1, 4 * precision):
                b = (
                    abs(bernoulli(2 * K))
                    * rising_factorial(s, 2 * K)
                    / factorial(2 * K)
                    / (s + 2 * K - 1)
                )
                bound = mpf_from_rational(b) * mpf(M) ** mpf_from_rational(1 - s - 2 * K)
                if best is None or bound < best[0]:
                    best = (bound, K)
                elif bound > best[0]:
                    break
            if best[0] < target:
                K = best[1]
                bound = best[0]
                break
            M *= 2
        sf = mpf_from_rational(s)
        total = mpf(0)
        for m in range(1, M + 1):
            total += mp.power(m, -sf)
        total += mp.power(M, 1 - sf) / (sf - 1)
        total -= mp.power(M, -sf) / 2
        for k in range(1, K + 1):
            c = bernoulli(2 * k) * rising_factorial(s, 2 * k - 1) / factorial(2 * k)
            total += mpf_from_rational(c) * mp.power(M, -sf - (2 * k - 1))
        err = bound + (M + K + 10) * _round_err(total)
        return Numeric(total, err)


# -----------------------------------------------------------------------------
# Symbolic constant products and tagged special values
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantProduct:
    """A product of Gamma values at rationals in (0,1), with an optional
    extra transcendental tag ("pi" or "arctan(p/q)") used by golden tests.

    The gamma multiset is kept sorted so equality is structural.
    """

    gammas: tuple[Fraction, ...] = ()
    extra: str | None = None

    def __post_init__(self):
        gs = tuple(sorted(Fraction(g) for g in self.gammas))
        for g in gs:
            if not (0 < g < 1):
                raise ValueError("gamma arguments must lie in (0,1)")
        object.__setattr__(self, "gammas", gs)
        if self.extra is not None:
            if self.extra != "pi" and not self.extra.startswith("arctan("):
                raise ValueError(f"unsupported constant tag {self.extra!r}")

    def labels(self) -> list[str]:
        out = [f"Gamma({rat_to_str(g)})" for g in self.gammas]
        if self.extra is not None:
            out.append(self.extra)
        return out

    def sort_key(self):
        return (self.gammas, self.extra or "")

    def to_numeric(self, precision: int = DEFAULT_DPS) -> Numeric:
        with mp.workdps(precision + 10):
            acc = Numeric(mpf(1), mpf(0))
            for g in self.gammas:
                acc = acc * gamma_rational_numeric(g, precision)
            if self.extra == "pi":
                v = +mp.pi
                acc = acc * Numeric(v, _round_err(v))
            elif self.extra is not None:
                arg = Fraction(self.extra[len("arctan("):-1])
                v = mp.atan(mpf_from_rational(arg))
                acc = acc * Numeric(v, _round_err(v))
        return acc


class SpecialValue:
    """Tagged value: Exact rational | Mixed rational/Gamma-product | Numeric."""

    __slots__ = ("kind", "exact", "base", "terms", "num", "flags")

    def __init__(self, kind, exact=None, base=None, terms=(), num=None, flags=()):
        self.kind = kind
        self.exact = exact
        self.base = base
        self.terms = terms
        self.num = num
        self.flags = tuple(sorted(set(flags)))

    # Constructors -----------------------------------------------------------

    @staticmethod
    def make_exact(x: Fraction, flags=()) -> "SpecialValue":
        return SpecialValue("exact", exact=Fraction(x), flags=flags)

    @staticmethod
    def make_numeric(num: Numeric, flags=()) -> "SpecialValue":
        return SpecialValue("numeric", num=num, flags=flags)

    @staticmethod
    def make_mixed(base: Fraction, terms, flags=()) -> "SpecialValue":
        merged: dict[ConstantProduct, Fraction] = {}
        for coeff, cp in terms:
            merged[cp] = merged.get(cp, Fraction(0)) + Fraction(coeff)
        tlist = tuple(
            (c, cp)
            for cp, c in sorted(merged.items(), key=lambda kv: kv[0].sort_key())
            if c != 0
        )
        if not tlist:
            return SpecialValue.make_exact(base, flags=flags)
        return SpecialValue("mixed", base=Fraction(base), terms=tlist, flags=flags)

    # Arithmetic -------------------------------------------------------------

    def with_flags(self, flags) -> "SpecialValue":
        return SpecialValue(
            self.kind,
            exact=self.exact,
            base=self.base,
            terms=self.terms,
            num=self.num,
            flags=tuple(self.flags) + tuple(flags),
        )

    def __add__(self, other: "SpecialValue") -> "SpecialValue":
        flags = tuple(self.flags) + tuple(other.flags)
        if self.kind == "numeric" or other.kind == "numeric":
            a = self.num if self.kind == "numeric" else self.to_numeric(mp.dps)
            b = other.num if other.kind == "numeric" else other.to_numeric(mp.dps)
            return SpecialValue.make_numeric(a + b, flags=flags)
        sb = self.exact if self.kind == "exact" else self.base
        ob = other.exact if other.kind == "exact" else other.base
        terms = list(self.terms) + list(other.terms)
        return SpecialValue.make_mixed(sb + ob, terms, flags=flags)

    def scale(self, c: Fraction) -> "SpecialValue":
        c = Fraction(c)
        if self.kind == "exact":
            return SpecialValue.make_exact(self.exact * c, flags=self.flags)
        if self.kind == "numeric":
            return SpecialValue.make_numeric(self.num.scale(c), flags=self.flags)
        return SpecialValue.make_mixed(
            self.base * c, [(t[0] * c, t[1]) for t in self.terms], flags=self.flags
        )

    def __eq__(self, other):
        if not isinstance(other, SpecialValue):
            return NotImplemented
        if self.kind != other.kind:
            return False
        if self.kind == "exact":
            return self.exact == other.exact
        if self.kind == "mixed":
            return self.base == other.base and self.terms == other.terms
        return self.num == other.num

    def __repr__(self):
        if self.kind == "exact":
            return f"SpecialValue(exact={self.exact})"
        if self.kind == "mixed":
            return f"SpecialValue(base={self.base}, terms={self.terms})"
        return f"SpecialValue(numeric={self.num.value}, err={self.num.err})"

    # Conversions ------------------------------------------------------------

    def to_numeric(self, precision: int = DEFAULT_DPS) -> Numeric:
        with mp.workdps(precision + 10):
            if self.kind == "exact":
                return Numeric.from_rational(self.exact)
            if self.kind == "numeric":
                return self.num
            acc = Numeric.from_rational(self.base)
            for coeff, cp in self.terms:
                acc = acc + cp.to_numeric(precision).scale(coeff)
            return acc

    def to_json(self, ndigits: int = 30) -> dict:
        if self.kind == "exact":
            out = {"kind": "exact", "value": rat_to_str(self.exact)}
        elif self.kind == "numeric":
            out = {"kind": "numeric", **self.num.to_json(ndigits)}
        else:
            out = {
                "kind": "mixed",
                "base": rat_to_str(self.base),
                "terms": [
                    {"coeff": rat_to_str(c), "consts": cp.labels()}
                    for c, cp in self.terms
                ],
            }
        if self.flags:
            out["flags"] = list(self.flags)
        return out
