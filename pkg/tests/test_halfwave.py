from __future__ import annotations

import numpy as np

from aniwave.dispersion import WaveSpeeds, lam
from aniwave.grid import PeriodicGrid, hermitian_defect
from aniwave.halfwave import from_halfwave, from_profile, lam_grid, to_halfwave, to_profile

RNG = np.random.default_rng(23)
SPEEDS = WaveSpeeds()


def real_field_coeffs(grid: PeriodicGrid, zero_mean: bool = True) -> np.ndarray:
    u = RNG.standard_normal(grid.dims)
    c = grid.fft(u)
    if zero_mean:
        c[(0,) * grid.ndim] = 0.0
    return c


def test_lam_grid_matches_pointwise_dispersion() -> None:
    grid = PeriodicGrid(dims=(8, 8, 8), box=(9.0, 7.0, 5.0))
    for a in (1, 2):
        want = lam(a, grid.xi3, SPEEDS)
        assert np.array_equal(lam_grid(a, grid, SPEEDS), want)


def test_halfwave_round_trip_recovers_the_pair() -> None:
    grid = PeriodicGrid(dims=(12, 10, 8), box=(11.0, 9.0, 7.0))
    for a in (1, 2):
        u = real_field_coeffs(grid)
        ut = real_field_coeffs(grid, zero_mean=False)
        U = to_halfwave(u, ut, a, grid, SPEEDS)
        u2, ut2 = from_halfwave(U, a, grid, SPEEDS)
        scale = max(np.abs(u).max(), np.abs(ut).max())
        assert np.abs(u2 - u).max() < 1e-13 * scale
        assert np.abs(ut2 - ut).max() < 1e-13 * scale


def test_recovered_pair_is_real_for_any_halfwave_field() -> None:
    # from_halfwave projects onto Hermitian coefficient fields, so even a
    # free complex U yields real (u, d_t u).
    grid = PeriodicGrid(dims=(10, 8, 6), box=(8.0, 6.0, 5.0))
    U = RNG.standard_normal(grid.dims) + 1j * RNG.standard_normal(grid.dims)
    for a in (1, 2):
        u, ut = from_halfwave(U, a, grid, SPEEDS)
        assert hermitian_defect(u) < 1e-13
        assert hermitian_defect(ut) < 1e-13
        assert u[0, 0, 0] == 0.0


def test_profile_maps_invert_each_other() -> None:
    grid = PeriodicGrid(dims=(8, 8, 8), box=(7.0, 7.0, 7.0))
    U = RNG.standard_normal(grid.dims) + 1j * RNG.standard_normal(grid.dims)
    t = 1.73
    for a in (1, 2):
        h = to_profile(U, t, a, grid, SPEEDS)
        back = from_profile(h, t, a, grid, SPEEDS)
        assert np.abs(back - U).max() < 1e-13 * np.abs(U).max()
        assert np.abs(np.abs(h) - np.abs(U)).max() < 1e-13 * np.abs(U).max()


def test_profile_of_a_free_solution_is_constant() -> None:
    # u(t) = cos(Lambda t) u0 solves the linear equation; its half-wave
    # profile e^{i t Lambda} U(t) must equal the t = 0 profile exactly.
    grid = PeriodicGrid(dims=(16,), box=(13.0,))
    u0 = real_field_coeffs(grid)
    lam_val = lam_grid(1, grid, SPEEDS)
    for t in (0.0, 0.9, 4.2):
        u_t = np.cos(lam_val * t) * u0
        ut_t = -lam_val * np.sin(lam_val * t) * u0
        U_t = to_halfwave(u_t, ut_t, 1, grid, SPEEDS)
        h = to_profile(U_t, t, 1, grid, SPEEDS)
        h0 = to_halfwave(u0, np.zeros_like(u0), 1, grid, SPEEDS)
        assert np.abs(h - h0).max() < 1e-12 * np.abs(u0).max()
