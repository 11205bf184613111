"""Adaptive tensor-product Gauss-Legendre quadrature in working precision.

Cells are dyadic sub-boxes of the unit cube with exact rational corners;
each cell carries an embedded error estimate (high-order rule minus a
lower-order rule on the same cell).  Accumulation order is fixed so results
are bit-reproducible at a given precision.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from mpmath import mp, mpf

from .errors import QuadratureDidNotConverge
from .exactnum import mpf_from_rational

_GL_CACHE: dict[tuple[int, int], tuple[list[mpf], list[mpf]]] = {}


def gauss_legendre_01(order: int) -> tuple[list[mpf], list[mpf]]:
    """Nodes and weights of the `order`-point Gauss-Legendre rule on [0,1]."""
    key = (order, mp.prec)
    hit = _GL_CACHE.get(key)
    if hit is not None:
        return hit
    with mp.extradps(10):
        nodes: list[mpf] = []
        weights: list[mpf] = []
        for i in range(1, order + 1):
            # Newton iteration from the Chebyshev estimate.
            x = mp.cos(mp.pi * (i - mpf(1) / 4) / (order + mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mpf(1), x
                for k in range(2, order + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = order * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < mpf(10) ** (-(mp.dps - 5)):
                    break
            p0, p1 = mpf(1), x
            for k in range(2, order + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = order * (x * p1 - p0) / (x * x - 1)
            w = 2 / ((1 - x * x) * dp * dp)
            nodes.append((x + 1) / 2)
            weights.append(w / 2)
    order_idx = sorted(range(order), key=lambda i: nodes[i])
    pair = ([+nodes[i] for i in order_idx], [+weights[i] for i in order_idx])
    _GL_CACHE[key] = pair
    return pair


Integrand = Callable[[Sequence[mpf]], mpf]


@dataclass
class _Cell:
    lo: tuple[Fraction, ...]
    hi: tuple[Fraction, ...]
    value: mpf = None
    est: mpf = None
    absmass: mpf = None


def _eval_cell(f: Integrand, cell: _Cell, order_hi: int, order_lo: int) -> None:
    dim = len(cell.lo)
    lo = [mpf_from_rational(x) for x in cell.lo]
    width = [mpf_from_rational(b - a) for a, b in zip(cell.lo, cell.hi)]
    vol = mpf(1)
    for w in width:
        vol *= w

    def tensor(order: int) -> tuple[mpf, mpf]:
        nodes, weights = gauss_legendre_01(order)
        total = mpf(0)
        absmass = mpf(0)
        idx = [0] * dim
        while True:
            pt = [lo[j] + width[j] * nodes[idx[j]] for j in range(dim)]
            w = vol
            for j in range(dim):
                w *= weights[idx[j]]
            fv = f(pt)
            total += w * fv
            absmass += abs(w * fv)
            j = dim - 1
            while j >= 0:
                idx[j] += 1
                if idx[j] < order:
                    break
                idx[j] = 0
                j -= 1
            if j < 0:
                break
        return total, absmass

    hi_val, absmass = tensor(order_hi)
    lo_val, _ = tensor(order_lo)
    round_floor = absmass * mpf(2) ** (6 - mp.prec)
    cell.value = hi_val
    cell.est = abs(hi_val - lo_val) + round_floor
    cell.absmass = absmass


def integrate_unit_cube(
    f: Integrand,
    dim: int,
    rel_tol: float = 1e-12,
    abs_tol: float = 1e-30,
    max_subdivisions: int = 4000,
    order: int = 15,
) -> tuple[mpf, mpf]:
    """Integrate f over [0,1]^dim; returns (value, absolute error bound)."""
    if dim == 0:
        v = f(())
        return v, abs(v) * mpf(2) ** (4 - mp.prec)
    order_lo = max(3, (order + 1) // 2)
    root = _Cell(lo=(Fraction(0),) * dim, hi=(Fraction(1),) * dim)
    _eval_cell(f, root, order, order_lo)
    done: list[_Cell] = []
    seq = 0
    heap: list[tuple[mpf, int, _Cell]] = [(-root.est, seq, root)]
    ncells = 1
    while True:
        total = sum(c.value for c in done) + sum(c.value for _, _, c in heap)
        errtot = sum(c.est for c in done) + sum(c.est for _, _, c in heap)
        target = mpf(abs_tol) + mpf(rel_tol) * abs(total)
        if errtot <= target:
            break
        if ncells >= max_subdivisions or not heap:
            raise QuadratureDidNotConverge(
                f"error {mp.nstr(errtot, 5)} above target {mp.nstr(target, 5)} "
                f"after {ncells} cells"
            )
        _, _, cell = heapq.heappop(heap)
        if cell.est <= target / (4 * ncells):
            done.append(cell)
            continue
        widths = [b - a for a, b in zip(cell.lo, cell.hi)]
        axis = max(range(dim), key=lambda j: (widths[j], -j))
        mid = (cell.lo[axis] + cell.hi[axis]) / 2
        left = _Cell(
            lo=cell.lo, hi=cell.hi[:axis] + (mid,) + cell.hi[axis + 1 :]
        )
        right = _Cell(
            lo=cell.lo[:axis] + (mid,) + cell.lo[axis + 1 :], hi=cell.hi
        )
        for child in (left, right):
            _eval_cell(f, child, order, order_lo)
            seq += 1
            heapq.heappush(heap, (-child.est, seq, child))
        ncells += 1
    cells = done + [c for _, _, c in heap]
    cells.sort(key=lambda c: c.lo)
    value = mpf(0)
    err = mpf(0)
    for c in cells:
        value += c.value
        err += c.est
    err += abs(value) * mpf(2) ** (6 - mp.prec) * len(cells)
    return value, err


def integrate_interval_fixed(
    f: Callable[[mpf], mpf], a: Fraction, b: Fraction, order: int = 15
) -> tuple[mpf, mpf]:
    """Single-panel Gauss-Legendre on [a, b] with an embedded estimate."""
    cell = _Cell(lo=(Fraction(a),), hi=(Fraction(b),))
    _eval_cell(lambda pt: f(pt[0]), cell, order, max(3, (order + 1) // 2))
    return cell.value, cell.est
