"""Pseudo-spectral simulator and harmonic-analysis toolkit for a pair of
coupled anisotropic waves sharing their propagation speed along x1.

The package is organized around the half-wave/profile formulation of the
system

    (d_t^2 - D1) u1 = N(u1, u2),      D1 = d11 + d22 + d33,
    (d_t^2 - D2) u2 = N(u1, u2),      D2 = d11 + c1^2 d22 + c2^2 d33,

with a quadratic nonlinearity that is null along the common-speed axis.
Modules:

    cutoffs     smooth dyadic bump functions and physical-space localizers
    dispersion  dispersion relations, phases, interaction symbols
    grid        periodic FFT grids and spectral fields
    halfwave    first-order factorization (u, u_t) <-> U_a
    dyadic      Littlewood-Paley projectors, atoms, norms, kernel bounds
    resonance   resonance functional, partitions, expansions, set measures
    propagator  free evolution, decay measurements, commutation residuals
    sim         nonlinear profile evolution and comparison probes
    runio       checkpoints, CSV/JSON artifacts, run manifests
    cli         command-line harness
"""

__version__ = "0.1.0"
