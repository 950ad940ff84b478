"""Periodic grids and continuum-normalized spectral transforms.

Coefficients follow the box-scaled convention: fft multiplies the raw
DFT by the cell volume dV so that coefficients approximate integrals
int u(x) e^{-i xi x} dx over the centered box, and Parseval reads
||u||_2^2 = (1/V) sum |c|^2 with V the box volume.  Convolutions of
coefficient arrays then carry a 1/V weight.  Frequencies are the
standard fftfreq bins scaled by 2 pi.  Sampling is on centered axes
x = -L/2 + n dx, so fields built directly in frequency space transform
back with their origin at the box center, consistent with the x_mesh
labels (the corner-origin DFT differs by an exact (-1)^{sum j} twist
that fft/ifft absorb).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError

Array = np.ndarray

__all__ = ["PeriodicGrid", "conj_reflect", "hermitian_defect"]


def conj_reflect(coeffs: Array) -> Array:
    """Coefficient array of the conjugate field: c(k) -> conj(c(-k)).

    Index -k folds back into the DFT layout by flipping each axis and
    rolling by one (bin 0 stays in place, bin j pairs with N - j).
    """
    out = np.conj(coeffs)
    for ax in range(out.ndim):
        out = np.roll(np.flip(out, axis=ax), 1, axis=ax)
    return out


def hermitian_defect(coeffs: Array) -> float:
    """Max deviation from the reality condition c(-k) = conj(c(k))."""
    return float(np.max(np.abs(coeffs - conj_reflect(coeffs))))


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid on a centered periodic box prod_i [-L_i/2, L_i/2)."""

    dims: tuple[int, ...]
    box: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))
        object.__setattr__(self, "box", tuple(float(L) for L in self.box))
        if len(self.dims) != len(self.box):
            raise DomainError("dims and box must have matching length")
        if len(self.dims) not in (1, 3):
            raise DomainError(f"only 1- and 3-dimensional grids are supported, got {len(self.dims)}")
        if any(n < 2 or n % 2 for n in self.dims):
            raise DomainError(f"grid dims must be even and >= 2, got {self.dims}")
        if any(not np.isfinite(L) or L <= 0 for L in self.box):
            raise DomainError(f"box lengths must be positive, got {self.box}")

    # -- geometry ----------------------------------------------------------

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @cached_property
    def dx(self) -> Array:
        return np.array([L / n for L, n in zip(self.box, self.dims)])

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.dx))

    @property
    def volume(self) -> float:
        return float(np.prod(self.box))

    @property
    def nyquist(self) -> float:
        """Smallest per-axis frequency ceiling pi/dx_i."""
        return float(np.min(np.pi / self.dx))

    @property
    def fundamental(self) -> float:
        """Largest per-axis frequency floor 2 pi / L_i (smallest nonzero |xi_i|)."""
        return float(np.max(2.0 * np.pi / np.asarray(self.box)))

    def x_axes(self) -> list[Array]:
        return [
            -L / 2.0 + np.arange(n) * (L / n) for n, L in zip(self.dims, self.box)
        ]

    @cached_property
    def x_mesh(self) -> Array:
        """Coordinates stacked on the last axis, shape dims + (ndim,)."""
        grids = np.meshgrid(*self.x_axes(), indexing="ij")
        return np.stack(grids, axis=-1)

    def xi_axes(self) -> list[Array]:
        return [
            2.0 * np.pi * np.fft.fftfreq(n, d=L / n)
            for n, L in zip(self.dims, self.box)
        ]

    @cached_property
    def xi_mesh(self) -> Array:
        """Frequencies stacked on the last axis, shape dims + (ndim,)."""
        grids = np.meshgrid(*self.xi_axes(), indexing="ij")
        return np.stack(grids, axis=-1)

    @cached_property
    def xi3(self) -> Array:
        """Frequencies padded to 3 components (zeros on missing axes)."""
        if self.ndim == 3:
            return self.xi_mesh
        pad = np.zeros(self.xi_mesh.shape[:-1] + (3,))
        pad[..., 0] = self.xi_mesh[..., 0]
        return pad

    # -- transforms ----------------------------------------------------------

    @cached_property
    def _sign_twist(self) -> Array:
        # fields are sampled on centered axes x = -L/2 + n dx while the
        # DFT assumes x = n dx; since xi_j L / 2 = pi j exactly, the
        # corner-to-center shift is the real alternating-sign factor
        # (-1)^{j_1 + ... + j_d}
        out = np.ones((), dtype=float)
        for n in self.dims:
            sign = (-1.0) ** np.arange(n)
            out = np.multiply.outer(out, sign)
        return out

    def fft(self, u: Array) -> Array:
        if u.shape != self.dims:
            raise DomainError(f"field shape {u.shape} does not match grid {self.dims}")
        return np.fft.fftn(u) * (self.cell_volume * self._sign_twist)

    def ifft(self, coeffs: Array) -> Array:
        if coeffs.shape != self.dims:
            raise DomainError(
                f"coefficient shape {coeffs.shape} does not match grid {self.dims}"
            )
        return np.fft.ifftn(coeffs * self._sign_twist) / self.cell_volume

    def l2_norm_coeffs(self, coeffs: Array) -> float:
        """||u||_2 evaluated on the coefficient side (Parseval)."""
        return float(np.sqrt(np.sum(np.abs(coeffs) ** 2) / self.volume))

    # -- masks ----------------------------------------------------------------

    def dealias_mask(self, fraction: float = 2.0 / 3.0) -> Array:
        """Spherical low-pass keep-mask |xi| <= fraction * min_i(pi/dx_i)."""
        if not 0.0 < fraction <= 1.0:
            raise DomainError(f"dealias fraction must be in (0, 1], got {fraction}")
        radius = fraction * self.nyquist
        mod = np.sqrt(np.sum(self.xi_mesh**2, axis=-1))
        return mod <= radius

    def faithful_shell(self, k: int) -> bool:
        """Whether the dyadic shell at 2^k is fully resolved by this grid:
        its support must clear the fundamental frequency and stay under
        the Nyquist ceiling."""
        return 5.0 * 2.0 ** (k - 3) >= self.fundamental and 3.0 * 2.0 ** (
            k - 1
        ) <= self.nyquist

    def faithful_shells(self) -> list[int]:
        ks = []
        k_lo = int(np.floor(np.log2(self.fundamental))) - 1
        k_hi = int(np.ceil(np.log2(self.nyquist))) + 1
        for k in range(k_lo, k_hi + 1):
            if self.faithful_shell(k):
                ks.append(k)
        return ks
