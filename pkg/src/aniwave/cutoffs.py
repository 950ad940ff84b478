"""Smooth dyadic cutoff functions.

Everything here derives from one fixed even bump psi_tilde: R -> [0,1]
with plateau [-5/4, 5/4] and support [-3/2, 3/2], built from the classic
smooth step s(t) = exp(-1/t) (t > 0).  The dyadic ring functions

    psi_k(x)   = psi_tilde(|x|/2^k) - psi_tilde(|x|/2^{k-1})

telescope exactly, so partitions of unity hold to machine precision with
no tuning.  psi_k is supported in |x| in (5*2^{k-3}, 3*2^{k-1}) and equals
1 at |x| = 2^k.

The physical-space localizers varphi_jk(x) reuse the same rings: the base
scale j = max(-k, 0) carries the full ball cutoff psi_leq, every finer
ring is a plain psi_j.  Summed over j they reproduce 1 identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "CutoffSpec",
    "DEFAULT_CUTOFF",
    "psi_tilde",
    "psi_k",
    "psi_leq",
    "psi_geq",
    "psi_band",
    "atom_scale_min",
    "varphi_jk",
]


@dataclass(frozen=True)
class CutoffSpec:
    """Plateau/support radii of the mother bump (1 on [-a,a], 0 outside [-b,b])."""

    a: float = 1.25
    b: float = 1.5

    def __post_init__(self) -> None:
        if not (0.0 < self.a < self.b):
            raise DomainError(f"cutoff radii must satisfy 0 < a < b, got a={self.a}, b={self.b}")


DEFAULT_CUTOFF = CutoffSpec()


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """exp(-1/t) for t > 0, identically 0 for t <= 0 (C-infinity glue)."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0.0
    # exp never overflows here; 1/t is only evaluated on the positive part
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def psi_tilde(x, spec: CutoffSpec = DEFAULT_CUTOFF):
    """Even mother bump: 1 on |x| <= a, 0 on |x| >= b, smooth in between."""
    r = np.abs(np.asarray(x, dtype=float))
    up = _smooth_step(spec.b - r)
    down = _smooth_step(r - spec.a)
    return up / (up + down)


def psi_k(x, k: int, spec: CutoffSpec = DEFAULT_CUTOFF):
    """Dyadic ring at scale 2^k: psi_tilde(|x|/2^k) - psi_tilde(|x|/2^{k-1})."""
    r = np.abs(np.asarray(x, dtype=float))
    return psi_tilde(r / 2.0**k, spec) - psi_tilde(r / 2.0 ** (k - 1), spec)


def psi_leq(x, k: int, spec: CutoffSpec = DEFAULT_CUTOFF):
    """Ball cutoff: 1 for |x| <= (5/4)*2^k, 0 for |x| >= (3/2)*2^k."""
    r = np.abs(np.asarray(x, dtype=float))
    return psi_tilde(r / 2.0**k, spec)


def psi_geq(x, k: int, spec: CutoffSpec = DEFAULT_CUTOFF):
    """Complement cutoff 1 - psi_leq(x, k-1)."""
    return 1.0 - psi_leq(x, k - 1, spec)


def psi_band(x, k_lo: int, k_hi: int, spec: CutoffSpec = DEFAULT_CUTOFF):
    """Sum of rings over k in [k_lo, k_hi]; equals psi_leq(k_hi) - psi_leq(k_lo - 1)."""
    if k_lo > k_hi:
        raise DomainError(f"empty band [{k_lo}, {k_hi}]")
    return psi_leq(x, k_hi, spec) - psi_leq(x, k_lo - 1, spec)


def atom_scale_min(k: int) -> int:
    """Smallest physical scale index j for frequency shell k (= max(-k, 0))."""
    return max(-k, 0)


def varphi_jk(x, j: int, k: int, spec: CutoffSpec = DEFAULT_CUTOFF):
    """Physical-space localizer of the (j, k) atom.

    The base scale j = atom_scale_min(k) carries the whole ball |x| <~ 2^j;
    larger j are the plain rings.  Summing j from the base up to any J gives
    psi_leq(x, J) exactly, hence 1 on |x| <= (5/4)*2^J.
    """
    j0 = atom_scale_min(k)
    if j < j0:
        raise DomainError(f"atom scale j={j} below minimum {j0} for shell k={k}")
    if j == j0:
        return psi_leq(x, j0, spec)
    return psi_k(x, j, spec)
