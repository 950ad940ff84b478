from __future__ import annotations

import numpy as np
import pytest

from aniwave.errors import DomainError
from aniwave.grid import PeriodicGrid, conj_reflect, hermitian_defect

RNG = np.random.default_rng(7)


def small_grid() -> PeriodicGrid:
    return PeriodicGrid(dims=(16, 12, 10), box=(20.0, 15.0, 12.0))


def test_fft_ifft_round_trip() -> None:
    grid = small_grid()
    u = RNG.standard_normal(grid.dims)
    assert np.abs(grid.ifft(grid.fft(u)) - u).max() < 1e-13


def test_plane_wave_coefficient_is_volume() -> None:
    # fft approximates the continuum integral, so a unit plane wave at a
    # grid frequency carries coefficient V on its own bin and 0 elsewhere.
    grid = small_grid()
    xi = np.array([grid.xi_axes()[0][3], grid.xi_axes()[1][2], grid.xi_axes()[2][1]])
    u = np.exp(1j * (grid.x_mesh @ xi))
    coeffs = grid.fft(u)
    assert abs(coeffs[3, 2, 1] - grid.volume) < 1e-9 * grid.volume
    coeffs[3, 2, 1] = 0.0
    assert np.abs(coeffs).max() < 1e-9 * grid.volume


def test_parseval() -> None:
    grid = small_grid()
    u = RNG.standard_normal(grid.dims)
    phys = float(np.sqrt(np.sum(u**2) * grid.cell_volume))
    assert abs(grid.l2_norm_coeffs(grid.fft(u)) - phys) < 1e-12 * phys


def test_conj_reflect_matches_real_fields() -> None:
    grid = small_grid()
    u = RNG.standard_normal(grid.dims)
    coeffs = grid.fft(u)
    assert np.abs(conj_reflect(coeffs) - coeffs).max() < 1e-12 * np.abs(coeffs).max()
    assert hermitian_defect(coeffs) < 1e-13

    v = u + 1j * RNG.standard_normal(grid.dims)
    assert hermitian_defect(grid.fft(v)) > 1e-3


def test_conj_reflect_is_an_involution() -> None:
    grid = small_grid()
    coeffs = RNG.standard_normal(grid.dims) + 1j * RNG.standard_normal(grid.dims)
    assert np.array_equal(conj_reflect(conj_reflect(coeffs)), coeffs)


def test_derivative_via_frequency_multiplier() -> None:
    grid = PeriodicGrid(dims=(32,), box=(17.0,))
    x = grid.x_axes()[0]
    k = 2.0 * np.pi * 3 / 17.0
    u = np.sin(k * x)
    du = grid.ifft(1j * grid.xi_mesh[..., 0] * grid.fft(u)).real
    assert np.abs(du - k * np.cos(k * x)).max() < 1e-10


def test_convolution_theorem() -> None:
    # product in physical space == convolution of coefficients / volume
    grid = PeriodicGrid(dims=(6, 6, 4), box=(11.0, 9.0, 7.0))
    u = RNG.standard_normal(grid.dims)
    v = RNG.standard_normal(grid.dims)
    uh = grid.fft(u)
    vh = grid.fft(v)
    conv = np.zeros(grid.dims, dtype=complex)
    for p in np.ndindex(*grid.dims):
        for q in np.ndindex(*grid.dims):
            r = tuple((pi - qi) % n for pi, qi, n in zip(p, q, grid.dims))
            conv[p] += uh[r] * vh[q]
    want = grid.fft(u * v)
    assert np.abs(conv / grid.volume - want).max() < 1e-9 * np.abs(want).max()


def test_x_and_xi_axes_are_centered() -> None:
    grid = small_grid()
    for ax, (n, length) in enumerate(zip(grid.dims, grid.box)):
        x = grid.x_axes()[ax]
        assert x[0] == -length / 2.0
        assert abs(x[1] - x[0] - length / n) < 1e-15
        xi = grid.xi_axes()[ax]
        assert xi[0] == 0.0
        assert np.abs(xi).max() <= np.pi * n / length + 1e-12


def test_dealias_mask_radius_and_validation() -> None:
    grid = small_grid()
    mask = grid.dealias_mask(2.0 / 3.0)
    radii = np.sqrt(np.sum(grid.xi_mesh**2, axis=-1))
    cutoff = (2.0 / 3.0) * grid.nyquist
    assert np.array_equal(mask, radii <= cutoff + 1e-12 * cutoff)
    with pytest.raises(DomainError):
        grid.dealias_mask(0.0)
    with pytest.raises(DomainError):
        grid.dealias_mask(-0.5)


def test_faithful_shells_fit_between_fundamental_and_nyquist() -> None:
    grid = PeriodicGrid(dims=(64, 64, 64), box=(224.0, 224.0, 224.0))
    shells = grid.faithful_shells()
    assert shells
    for k in shells:
        assert 0.625 * 2.0**k >= grid.fundamental - 1e-12
        assert 1.5 * 2.0**k <= grid.nyquist + 1e-12
    assert not grid.faithful_shell(min(shells) - 1)
    assert not grid.faithful_shell(max(shells) + 1)


def test_grid_validation() -> None:
    with pytest.raises(DomainError):
        PeriodicGrid(dims=(0, 4, 4), box=(1.0, 1.0, 1.0))
    with pytest.raises(DomainError):
        PeriodicGrid(dims=(4, 4, 4), box=(1.0,))
    with pytest.raises(DomainError):
        PeriodicGrid(dims=(4,), box=(-2.0,))
    with pytest.raises(DomainError):
        PeriodicGrid(dims=(4, 4), box=(1.0, 1.0))
