"""Half-wave reduction U = (d_t - i Lambda) u and its inverse.

For real u the pair (u, d_t u) and the complex field U carry the same
information: d_t u = Re U and u = -Lambda^{-1} Im U.  On the coefficient
side the real/imaginary parts become Hermitian symmetrizations, and the
zero mode of u is fixed to zero (Lambda vanishes there, so the mean of
u is not representable; the evolution never feeds it).

Free flow is diagonal in this frame, U(t) = e^{-i t Lambda} U(0), so the
profile h(t) = e^{i t Lambda} U(t) is conserved by the linear part and
moves only under the quadratic coupling.
"""

from __future__ import annotations

import numpy as np

from .dispersion import WaveSpeeds, lam
from .errors import DomainError
from .grid import PeriodicGrid, conj_reflect

Array = np.ndarray

__all__ = [
    "lam_grid",
    "to_halfwave",
    "from_halfwave",
    "to_profile",
    "from_profile",
]


def lam_grid(a: int, grid: PeriodicGrid, speeds: WaveSpeeds) -> Array:
    """Dispersion relation Lambda_a sampled on the grid frequencies."""
    return lam(a, grid.xi3, speeds)


def to_halfwave(
    u_coeffs: Array, ut_coeffs: Array, a: int, grid: PeriodicGrid, speeds: WaveSpeeds
) -> Array:
    """Coefficients of U = d_t u - i Lambda u from those of (u, d_t u)."""
    return ut_coeffs - 1j * lam_grid(a, grid, speeds) * u_coeffs


def from_halfwave(
    U_coeffs: Array, a: int, grid: PeriodicGrid, speeds: WaveSpeeds
) -> tuple[Array, Array]:
    """Recover (u, d_t u) coefficients from a half-wave field.

    The reflection c -> conj(c(-k)) implements complex conjugation, so
    Re and Im act as Hermitian projections; the u zero mode is set to 0.
    """
    refl = conj_reflect(U_coeffs)
    ut_coeffs = 0.5 * (U_coeffs + refl)
    lam_val = lam_grid(a, grid, speeds)
    zero = lam_val == 0.0
    if np.count_nonzero(zero) != 1:
        raise DomainError("dispersion relation must vanish only at the zero mode")
    safe = np.where(zero, 1.0, lam_val)
    u_coeffs = 1j * (U_coeffs - refl) / (2.0 * safe)
    u_coeffs[zero] = 0.0
    return u_coeffs, ut_coeffs


def to_profile(
    U_coeffs: Array, t: float, a: int, grid: PeriodicGrid, speeds: WaveSpeeds
) -> Array:
    """h(t) = e^{i t Lambda} U(t) on the coefficient side."""
    return np.exp(1j * t * lam_grid(a, grid, speeds)) * U_coeffs


def from_profile(
    h_coeffs: Array, t: float, a: int, grid: PeriodicGrid, speeds: WaveSpeeds
) -> Array:
    """U(t) = e^{-i t Lambda} h(t) on the coefficient side."""
    return np.exp(-1j * t * lam_grid(a, grid, speeds)) * h_coeffs
