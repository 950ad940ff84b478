"""Mixed-partial finite differences for sampled symbol bounds.

Composed central differences: the order-a derivative along one axis uses
the binomial stencil sum_i (-1)^i C(a,i) f(x + (a-2i) h) / (2h)^a, and
mixed partials tensor these across axes.  Steps are chosen per axis as
eps^(1/(order+2)) times a caller-supplied length scale, balancing
truncation against roundoff for each derivative order.
"""

from __future__ import annotations

from itertools import product
from math import comb
from typing import Callable, Iterator, Sequence

import numpy as np

_EPS = np.finfo(float).eps


def multi_indices(dim: int, max_total: int) -> Iterator[tuple[int, ...]]:
    """All multi-indices of the given dimension with |alpha| <= max_total."""
    for total in range(max_total + 1):
        for cuts in product(range(total + 1), repeat=dim - 1):
            parts = []
            rest = total
            ok = True
            for c in cuts:
                if c > rest:
                    ok = False
                    break
                parts.append(c)
                rest -= c
            if ok:
                yield tuple(parts) + (rest,)


def fd_step(order: int, scale: float) -> float:
    """Near-optimal central-difference step for one axis at the given order."""
    if order == 0:
        return scale
    return float(scale * _EPS ** (1.0 / (order + 2)))


def mixed_partial(
    f: Callable[[np.ndarray], np.ndarray],
    points: np.ndarray,
    alpha: Sequence[int],
    scales: Sequence[float],
) -> np.ndarray:
    """Evaluate d^alpha f at each point (points: (n, d) -> values (n,)).

    f must accept an (m, d) array and return (m,) values; the stencil for
    the full multi-index is assembled as one batch call.
    """
    points = np.asarray(points, dtype=float)
    n, dim = points.shape
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != dim:
        raise ValueError(f"multi-index length {len(alpha)} != dimension {dim}")
    if all(a == 0 for a in alpha):
        return f(points)

    offsets_per_axis = []
    coeffs_per_axis = []
    denom = 1.0
    for ax, a in enumerate(alpha):
        h = fd_step(a, scales[ax])
        if a == 0:
            offsets_per_axis.append(np.array([0.0]))
            coeffs_per_axis.append(np.array([1.0]))
            continue
        i = np.arange(a + 1)
        offsets_per_axis.append((a - 2.0 * i) * h)
        coeffs_per_axis.append(np.array([(-1.0) ** ii * comb(a, ii) for ii in i]))
        denom *= (2.0 * h) ** a

    # tensor the per-axis stencils into one flat list of displacement rows
    disp = None
    coef = None
    for ax in range(dim):
        col = np.zeros((len(offsets_per_axis[ax]), dim))
        col[:, ax] = offsets_per_axis[ax]
        if disp is None:
            disp = col
            coef = coeffs_per_axis[ax]
        else:
            disp = (disp[:, None, :] + col[None, :, :]).reshape(-1, dim)
            coef = (coef[:, None] * coeffs_per_axis[ax][None, :]).reshape(-1)

    batch = (points[:, None, :] + disp[None, :, :]).reshape(-1, dim)
    vals = np.asarray(f(batch)).reshape(n, len(coef))
    return vals @ coef / denom
