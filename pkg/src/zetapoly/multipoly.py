"""Sparse multivariate polynomials over exact rationals.

Provides the derived objects the value formulas need: partial derivatives,
Taylor shifts, face restrictions (substituting 1 for one variable), the
Taylor face coefficients H_k, the auxiliary face products built from a
composition family, and hypothesis checks (homogeneity, face positivity
via Bernstein certificates, a non-certifying boundedness heuristic).
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Mapping, Sequence

from mpmath import mp, mpf

from .errors import (
    CompositionMismatch,
    DimensionMismatch,
    IndexOutOfRange,
    NotHomogeneous,
)
from .exactnum import Rational, mpf_from_rational, multi_factorial, rat_to_str

MultiIndex = tuple[int, ...]


def mi_sum(g: Sequence[int]) -> int:
    return sum(g)


def mi_factorial(g: Sequence[int]) -> int:
    return multi_factorial(g)


def mi_add(a: Sequence[int], b: Sequence[int]) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


class MPoly:
    """Immutable sparse polynomial: exponent tuple -> nonzero Fraction."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[MultiIndex, Rational] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be >= 0")
        clean: dict[MultiIndex, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise DimensionMismatch(f"exponent {e} has wrong length for {nvars} vars")
            if any(x < 0 for x in e):
                raise ValueError("negative exponent")
            c = Fraction(c)
            if c != 0:
                clean[e] = clean.get(e, Fraction(0)) + c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c != 0})

    def __setattr__(self, *a):
        raise AttributeError("MPoly is immutable")

    # Constructors -----------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "MPoly":
        return MPoly(nvars, {})

    @staticmethod
    def constant(nvars: int, c: Rational) -> "MPoly":
        return MPoly(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def one(nvars: int) -> "MPoly":
        return MPoly.constant(nvars, 1)

    @staticmethod
    def variable(nvars: int, i: int) -> "MPoly":
        """x_i with 1-based index i."""
        if not (1 <= i <= nvars):
            raise IndexOutOfRange(f"variable index {i} out of 1..{nvars}")
        e = [0] * nvars
        e[i - 1] = 1
        return MPoly(nvars, {tuple(e): Fraction(1)})

    # Basic queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def canonical_items(self) -> list[tuple[MultiIndex, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(self.canonical_items())))

    # Arithmetic -------------------------------------------------------------

    def __add__(self, other: "MPoly") -> "MPoly":
        if self.nvars != other.nvars:
            raise DimensionMismatch("variable counts differ")
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MPoly(self.nvars, out)

    def __neg__(self) -> "MPoly":
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __mul__(self, other: "MPoly") -> "MPoly":
        if self.nvars != other.nvars:
            raise DimensionMismatch("variable counts differ")
        out: dict[MultiIndex, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = mi_add(e1, e2)
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MPoly(self.nvars, out)

    def scale(self, c: Rational) -> "MPoly":
        c = Fraction(c)
        return MPoly(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        acc = MPoly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    # Evaluation -------------------------------------------------------------

    def eval(self, point: Sequence[Rational]) -> Fraction:
        if len(point) != self.nvars:
            raise DimensionMismatch("point has wrong length")
        pt = [Fraction(x) for x in point]
        acc = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(pt, e):
                if k:
                    t *= x**k
            acc += t
        return acc

    def eval_mp(self, point: Sequence[mpf]) -> mpf:
        acc = mpf(0)
        for e, c in self.terms.items():
            t = mpf_from_rational(c)
            for x, k in zip(point, e):
                if k == 1:
                    t *= x
                elif k:
                    t *= x**k
            acc += t
        return acc

    # Calculus and substitutions ----------------------------------------------

    def derivative(self, g: Sequence[int]) -> "MPoly":
        """Iterated partial derivative with multi-index order g."""
        g = tuple(int(x) for x in g)
        if len(g) != self.nvars:
            raise DimensionMismatch("derivative order has wrong length")
        out: dict[MultiIndex, Fraction] = {}
        for e, c in self.terms.items():
            if any(ei < gi for ei, gi in zip(e, g)):
                continue
            coeff = c
            for ei, gi in zip(e, g):
                for t in range(gi):
                    coeff *= ei - t
            ne = tuple(ei - gi for ei, gi in zip(e, g))
            out[ne] = out.get(ne, Fraction(0)) + coeff
        return MPoly(self.nvars, out)

    def shift(self, a: Sequence[Rational]) -> "MPoly":
        """Taylor shift P(X + a), exactly."""
        if len(a) != self.nvars:
            raise DimensionMismatch("shift vector has wrong length")
        av = [Fraction(x) for x in a]
        out: dict[MultiIndex, Fraction] = {}
        for e, c in self.terms.items():
            # expand prod_j (X_j + a_j)^{e_j}
            partial = {(): c}
            for j, ej in enumerate(e):
                nxt: dict[tuple, Fraction] = {}
                for pref, pc in partial.items():
                    for k in range(ej + 1):
                        w = pc * comb(ej, k) * av[j] ** (ej - k)
                        if w != 0:
                            key = pref + (k,)
                            nxt[key] = nxt.get(key, Fraction(0)) + w
                partial = nxt
            for ne, nc in partial.items():
                out[ne] = out.get(ne, Fraction(0)) + nc
        return MPoly(self.nvars, out)

    def face(self, i: int) -> "MPoly":
        """Substitute 1 for variable i (1-based) and drop it."""
        if not (1 <= i <= self.nvars):
            raise IndexOutOfRange(f"face index {i} out of 1..{self.nvars}")
        out: dict[MultiIndex, Fraction] = {}
        for e, c in self.terms.items():
            ne = e[: i - 1] + e[i:]
            out[ne] = out.get(ne, Fraction(0)) + c
        return MPoly(self.nvars - 1, out)

    def substitute_axis(self, axis: int, scale: Rational, offset: Rational) -> "MPoly":
        """Replace X_axis (0-based) by scale*X_axis + offset, exactly."""
        sc, off = Fraction(scale), Fraction(offset)
        out: dict[MultiIndex, Fraction] = {}
        for e, c in self.terms.items():
            k = e[axis]
            for j in range(k + 1):
                w = c * comb(k, j) * sc**j * off ** (k - j)
                if w == 0:
                    continue
                ne = e[:axis] + (j,) + e[axis + 1 :]
                out[ne] = out.get(ne, Fraction(0)) + w
        return MPoly(self.nvars, out)

    # Structure --------------------------------------------------------------

    def is_homogeneous(self) -> tuple[bool, int]:
        """(True, degree) if all exponent sums agree; constants have degree 0."""
        if not self.terms:
            return True, 0
        degs = {sum(e) for e in self.terms}
        if len(degs) == 1:
            return True, degs.pop()
        return False, -1

    def homogeneous_components(self) -> list[tuple[int, "MPoly"]]:
        buckets: dict[int, dict[MultiIndex, Fraction]] = {}
        for e, c in self.terms.items():
            buckets.setdefault(sum(e), {})[e] = c
        return [(d, MPoly(self.nvars, t)) for d, t in sorted(buckets.items())]

    # Serialization ------------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: (-sum(t[0]), t[0])):
            mono = " ".join(
                f"x{j + 1}" if k == 1 else f"x{j + 1}^{k}"
                for j, k in enumerate(e)
                if k
            )
            if not mono:
                body = rat_to_str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{rat_to_str(abs(c))} {mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [
                {"c": rat_to_str(c), "e": list(e)} for e, c in self.canonical_items()
            ],
        }

    @staticmethod
    def from_json(obj: dict) -> "MPoly":
        terms = {tuple(t["e"]): Fraction(t["c"]) for t in obj["terms"]}
        return MPoly(int(obj["nvars"]), terms)

    @staticmethod
    def parse(text: str, nvars: int | None = None) -> "MPoly":
        """Parse terms like "3/2 x1^2 x3 + x2 - 1/6" (variables x1..xn)."""
        text = text.strip()
        if not text:
            raise ValueError("empty polynomial text")
        chunks = re.findall(r"[+-]?[^+-]+", text.replace("**", "^"))
        parsed: list[tuple[Fraction, dict[int, int]]] = []
        maxvar = 0
        for chunk in chunks:
            chunk = chunk.strip()
            sign = Fraction(1)
            if chunk.startswith("+"):
                chunk = chunk[1:].strip()
            elif chunk.startswith("-"):
                sign = Fraction(-1)
                chunk = chunk[1:].strip()
            coeff = sign
            expo: dict[int, int] = {}
            for tok in chunk.replace("*", " ").split():
                m = re.fullmatch(r"x(\d+)(?:\^(\d+))?", tok)
                if m:
                    v = int(m.group(1))
                    k = int(m.group(2) or 1)
                    expo[v] = expo.get(v, 0) + k
                    maxvar = max(maxvar, v)
                else:
                    coeff *= Fraction(tok)
            parsed.append((coeff, expo))
        n = nvars if nvars is not None else maxvar
        terms: dict[MultiIndex, Fraction] = {}
        for coeff, expo in parsed:
            if expo and max(expo) > n:
                raise DimensionMismatch(f"variable x{max(expo)} exceeds nvars={n}")
            e = tuple(expo.get(j + 1, 0) for j in range(n))
            terms[e] = terms.get(e, Fraction(0)) + coeff
        return MPoly(n, terms)

    def __repr__(self):
        return f"MPoly({self.nvars}, {self.to_text()!r})"


# -----------------------------------------------------------------------------
# Face Taylor data and composition products
# -----------------------------------------------------------------------------

def taylor_H(P: MPoly, i: int, b: Sequence[Rational]) -> list[MPoly]:
    """Face Taylor coefficients [H_1, ..., H_d] of a homogeneous P.

    H_k = sum over |g| = k of (b^g / g!) * (d^g P) restricted to the face i.
    """
    ok, d = P.is_homogeneous()
    if not ok or d < 1:
        raise NotHomogeneous("taylor coefficients need a homogeneous P of degree >= 1")
    if len(b) != P.nvars:
        raise DimensionMismatch("shift vector has wrong length")
    bv = [Fraction(x) for x in b]
    out = []
    for k in range(1, d + 1):
        acc = MPoly.zero(P.nvars - 1)
        for g in multiindices_of_weight(k, P.nvars):
            w = Fraction(1)
            for x, gi in zip(bv, g):
                if gi:
                    w *= x**gi
            if w == 0:
                continue
            w /= mi_factorial(g)
            acc = acc + P.derivative(g).face(i).scale(w)
        out.append(acc)
    return out


def multiindices_of_weight(k: int, n: int) -> list[MultiIndex]:
    """All g in N_0^n with |g| = k, in lexicographic order."""
    if n == 0:
        return [()] if k == 0 else []
    out = []

    def rec(prefix, rest, slots):
        if slots == 1:
            out.append(prefix + (rest,))
            return
        for v in range(rest, -1, -1):
            rec(prefix + (v,), rest - v, slots - 1)

    rec((), k, n)
    return sorted(out)


def multiindices_up_to_weight(k: int, n: int) -> list[MultiIndex]:
    out = []
    for w in range(k + 1):
        out.extend(multiindices_of_weight(w, n))
    return out


def build_P_alpha_u(P: MPoly, i: int, alpha: Sequence[int], u) -> MPoly:
    """Auxiliary face product for a composition family u over alpha.

    (alpha!/prod_k u_k!) * prod_k prod_{|g|=k} ((d^g P at face i)/g!)^{u_{k,g}}
    """
    alpha = tuple(int(a) for a in alpha)
    n = P.nvars
    d = len(alpha)
    coeff = Fraction(mi_factorial(alpha))
    acc = MPoly.one(n - 1)
    for k in range(1, d + 1):
        gammas = multiindices_of_weight(k, n)
        uk = u[k - 1]
        if len(uk) != len(gammas):
            raise CompositionMismatch(f"u_{k} has wrong arity")
        if sum(uk) != alpha[k - 1]:
            raise CompositionMismatch(f"|u_{k}| = {sum(uk)} != alpha_{k} = {alpha[k - 1]}")
        for g, mult in zip(gammas, uk):
            if mult == 0:
                continue
            coeff /= factorial(mult)
            base = P.derivative(g).face(i).scale(Fraction(1, mi_factorial(g)))
            acc = acc * base**mult
    return acc.scale(coeff)


# -----------------------------------------------------------------------------
# Positivity: Bernstein certificates and sampling
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class PositivityResult:
    status: str  # "certified" | "sampled_only" | "violated"
    witness: tuple | None = None
    face: int | None = None
    detail: str = ""


def _bernstein_coeffs(P: MPoly) -> tuple[dict[MultiIndex, Fraction], MultiIndex]:
    """Tensor Bernstein coefficients of P on [0,1]^n, with the degree vector."""
    n = P.nvars
    degs = tuple(
        max((e[j] for e in P.terms), default=0) for j in range(n)
    )
    coeffs = dict(P.terms)
    for axis in range(n):
        nd = degs[axis]
        if nd == 0:
            continue
        out: dict[MultiIndex, Fraction] = {}
        # group by the other exponents
        groups: dict[tuple, dict[int, Fraction]] = {}
        for e, c in coeffs.items():
            key = e[:axis] + e[axis + 1 :]
            groups.setdefault(key, {})[e[axis]] = c
        for key, uni in groups.items():
            for j in range(nd + 1):
                b = Fraction(0)
                for ii, a in uni.items():
                    if ii <= j:
                        b += Fraction(comb(j, ii), comb(nd, ii)) * a
                if b != 0:
                    e = key[:axis] + (j,) + key[axis:]
                    out[e] = b
        coeffs = out
    return coeffs, degs


def _bernstein_positive_rec(P: MPoly, depth: int) -> tuple[str, tuple | None]:
    coeffs, degs = _bernstein_coeffs(P)
    n = P.nvars
    if not coeffs:
        return "violated", (Fraction(0),) * n  # identically zero
    vals = list(coeffs.values())
    if all(v > 0 for v in vals):
        return "certified", None
    # Corner Bernstein coefficients are exact corner values.
    for corner in _corners(degs):
        v = coeffs.get(corner, Fraction(0))
        if v <= 0:
            pt = tuple(Fraction(1) if c else Fraction(0) for c in corner)
            return "violated", pt
    if depth == 0:
        return "sampled_only", None
    axis = max(range(n), key=lambda j: degs[j])
    left = P.substitute_axis(axis, Fraction(1, 2), Fraction(0))
    right = P.substitute_axis(axis, Fraction(1, 2), Fraction(1, 2))
    worst = "certified"
    for half in (left, right):
        st, wit = _bernstein_positive_rec(half, depth - 1)
        if st == "violated":
            return st, wit  # witness in subdivided coordinates; mapped by caller
        if st == "sampled_only":
            worst = "sampled_only"
    return worst, None


def _corners(degs: MultiIndex):
    n = len(degs)
    for mask in range(1 << n):
        yield tuple(degs[j] if (mask >> j) & 1 else 0 for j in range(n))


def bernstein_positive(P: MPoly, max_depth: int = 6) -> tuple[str, tuple | None]:
    """Certify P > 0 on [0,1]^n by Bernstein-coefficient subdivision.

    Returns ("certified", None), ("violated", witness point) or
    ("sampled_only", None) when the subdivision depth is exhausted.
    Witnesses from subdivided boxes are re-verified by direct sampling.
    """
    if P.nvars == 0:
        c = P.constant_value()
        return ("certified", None) if c > 0 else ("violated", ())
    st, wit = _bernstein_positive_rec(P, max_depth)
    if st == "violated" and wit is not None and len(wit) == P.nvars:
        if P.eval(wit) <= 0:
            return st, wit
        # subdivision-local witness: fall back to grid search
        wit2 = _grid_negative_point(P)
        return ("violated", wit2) if wit2 is not None else ("sampled_only", None)
    return st, wit


def _grid_negative_point(P: MPoly, steps: int = 8) -> tuple | None:
    n = P.nvars
    pts = [Fraction(k, steps) for k in range(steps + 1)]

    def rec(prefix):
        if len(prefix) == n:
            if P.eval(prefix) <= 0:
                return tuple(prefix)
            return None
        for x in pts:
            r = rec(prefix + [x])
            if r is not None:
                return r
        return None

    return rec([])


def positivity_check(
    P: MPoly,
    domain: str = "faces",
    samples: int | None = None,
    mode: str = "bernstein",
    seed: int = 0,
) -> PositivityResult:
    """Positivity of P on the unit-cube faces, or sampled on a [1,oo) box.

    domain "faces": checks P with each variable in turn fixed to 1, on the
    closed unit cube in the remaining variables (the ellipticity test).
    domain "box": samples P on expanding boxes [1, L]^n; never certifying.
    """
    if domain == "faces":
        overall = "certified"
        for i in range(1, P.nvars + 1):
            Pf = P.face(i)
            if mode == "bernstein":
                st, wit = bernstein_positive(Pf)
            else:
                st, wit = _sampled_positive_cube(Pf, samples or 32, seed)
            if st == "violated":
                return PositivityResult("violated", wit, face=i)
            if st == "sampled_only":
                overall = "sampled_only"
        return PositivityResult(overall)
    if domain == "box":
        rng = random.Random(seed)
        nsamp = samples or 64
        for L in (2, 4, 8):
            for pt in _box_points(P.nvars, L, nsamp, rng):
                if P.eval(pt) <= 0:
                    return PositivityResult("violated", tuple(pt))
        return PositivityResult("sampled_only")
    raise ValueError(f"unknown domain {domain!r}")


def _sampled_positive_cube(P: MPoly, steps: int, seed: int):
    n = P.nvars
    if n == 0:
        return ("certified", None) if P.constant_value() > 0 else ("violated", ())
    steps = min(steps, max(2, int(32768 ** (1 / n))))
    grid = [Fraction(k, steps) for k in range(steps + 1)]

    def rec(prefix):
        if len(prefix) == n:
            return None if P.eval(prefix) > 0 else tuple(prefix)
        for x in grid:
            r = rec(prefix + [x])
            if r is not None:
                return r
        return None

    wit = rec([])
    if wit is not None:
        return ("violated", wit)
    rng = random.Random(seed)
    for _ in range(128):
        pt = [Fraction(rng.randint(0, 1024), 1024) for _ in range(n)]
        if P.eval(pt) <= 0:
            return ("violated", tuple(pt))
    return ("sampled_only", None)


def _box_points(n: int, L: int, nsamp: int, rng: random.Random):
    """Grid corners plus random rational points of [1, L]^n."""
    grid = [Fraction(1), Fraction(1 + L, 2), Fraction(L)]

    def rec(prefix):
        if len(prefix) == n:
            yield list(prefix)
            return
        for x in grid:
            yield from rec(prefix + [x])

    yield from rec([])
    for _ in range(nsamp):
        yield [1 + Fraction(rng.randint(0, 1024) * (L - 1), 1024) for _ in range(n)]


# -----------------------------------------------------------------------------
# Boundedness heuristic for derivative ratios on [1,oo)^n
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class H0sReport:
    passed: bool
    warning: bool
    witness: tuple | None
    max_ratio: float
    note: str = "heuristic check only; not a certificate"


def h0s_heuristic(
    P: MPoly, max_order: int | None = None, box_samples: int = 48, seed: int = 0
) -> H0sReport:
    """Sampled boundedness of |d^a P / P| over expanding boxes [1, L]^n.

    Passes when P stays positive and the ratios stay bounded at all sampled
    points; flags a warning when the observed maximum grows with the box,
    since growth suggests the supremum may be unbounded beyond the samples.
    """
    n = P.nvars
    order = max_order if max_order is not None else max(P.degree(), 1)
    derivs = [
        P.derivative(g)
        for g in multiindices_up_to_weight(order, n)
        if sum(g) >= 1
    ]
    derivs = [D for D in derivs if not D.is_zero()]
    rng = random.Random(seed)
    per_box: list[float] = []
    witness = None
    for L in (2, 4, 8):
        worst = 0.0
        for pt in _box_points(n, L, box_samples, rng):
            pv = P.eval(pt)
            if pv <= 0:
                return H0sReport(False, False, tuple(pt), float("inf"))
            for D in derivs:
                r = abs(D.eval(pt) / pv)
                if r > worst:
                    worst = float(r)
                    witness = tuple(pt)
        per_box.append(worst)
    max_ratio = max(per_box)
    if max_ratio > 1e6:
        return H0sReport(False, False, witness, max_ratio)
    warning = per_box[-1] > 1.25 * per_box[0] + 1e-12
    return H0sReport(True, warning, None, max_ratio)
