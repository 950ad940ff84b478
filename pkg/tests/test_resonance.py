from __future__ import annotations

import numpy as np
import pytest

from aniwave.dispersion import SIGN_PAIRS, SignPair, WaveSpeeds, phase
from aniwave.errors import DomainError
from aniwave.resonance import (
    grad_eta_phase,
    l_functional,
    lower_bound_check,
    partition_eval,
    phase_expansion_check,
    phase_leading,
    resonance_sample,
    volume_support_estimate,
)

RNG = np.random.default_rng(41)
SPEEDS = WaveSpeeds()
PP = SignPair(+1, +1)


def generic_pairs(count: int) -> tuple[np.ndarray, np.ndarray]:
    xi = RNG.standard_normal((count, 3)) * 2.0
    eta = RNG.standard_normal((count, 3))
    bad = (
        (np.abs(eta[:, 0]) < 1e-3)
        | (np.abs(xi[:, 0] - eta[:, 0]) < 1e-3)
        | (np.linalg.norm(xi - eta, axis=1) < 1e-3)
    )
    return xi[~bad], eta[~bad]


def test_l_functional_vanishes_on_matched_axis_pairs() -> None:
    # aligned axis frequencies with matching orientations are the zero
    # set; any transverse component moves l strictly off zero.
    t = np.linspace(0.4, 3.0, 10)
    for s in (1.0, -1.0):
        eta = np.zeros((10, 3))
        eta[:, 0] = s * t
        xi = np.zeros((10, 3))
        xi[:, 0] = s * 3.2 * t
        assert np.abs(l_functional(PP, xi, eta, SPEEDS)).max() == 0.0
        # opposite orientation hits the sign term
        assert l_functional(SignPair(+1, -1), xi, eta, SPEEDS).min() >= 2.0


def test_l_functional_grows_with_transverse_size() -> None:
    base_xi = np.array([3.0, 0.0, 0.0])
    base_eta = np.array([1.0, 0.0, 0.0])
    prev = 0.0
    for r in (1e-3, 1e-2, 1e-1):
        xi = base_xi + np.array([0.0, r, 0.0])
        val = float(l_functional(PP, xi, base_eta, SPEEDS))
        assert val > prev
        prev = val


def test_l_functional_rejects_degenerate_inputs() -> None:
    with pytest.raises(DomainError):
        l_functional(PP, np.array([1.0, 0.0, 0.0]), np.array([1.0, 0.0, 0.0]), SPEEDS)
    with pytest.raises(DomainError):
        l_functional(PP, np.array([1.0, 1.0, 0.0]), np.array([0.0, 1.0, 0.0]), SPEEDS)


def test_grad_eta_phase_matches_finite_differences() -> None:
    xi, eta = generic_pairs(60)
    h = 1e-6
    for signs in SIGN_PAIRS:
        grad = grad_eta_phase(1, signs, xi, eta, SPEEDS)
        for ax in range(3):
            step = np.zeros(3)
            step[ax] = h
            fd = (
                phase(1, signs, xi, eta + step, SPEEDS)
                - phase(1, signs, xi, eta - step, SPEEDS)
            ) / (2.0 * h)
            assert np.abs(grad[:, ax] - fd).max() < 1e-6
        # the eta-gradient does not see the output branch
        assert np.array_equal(grad, grad_eta_phase(2, signs, xi, eta, SPEEDS))


def test_lower_bound_constant_is_uniform() -> None:
    rep = lower_bound_check(PP, SPEEDS, n_samples=20_000, seed=3)
    assert rep.samples_kept > 100
    assert rep.min_ratio >= 0.05
    # the flipped-orientation pair is never resonant and the gradient
    # stays of order one, so the ratio is even safer there
    rep2 = lower_bound_check(SignPair(-1, 1), SPEEDS, n_samples=20_000, seed=3)
    assert rep2.min_ratio >= 0.05


def test_resonance_points_live_near_the_axis() -> None:
    pts = resonance_sample(2, PP, SPEEDS, n_samples=2_000, seed=0)
    assert pts
    for pt in pts:
        assert abs(pt.phase_value) < 1e-6
        assert pt.grad_eta_phase_norm < 1e-6
        assert pt.transverse_ratio < 1e-2


def test_resonance_finds_nothing_for_doubly_flipped_signs() -> None:
    # Phi with (-,-) is a sum of three positive branches bounded below
    # on the shells, so no seed can pass the tolerance.
    assert resonance_sample(1, SignPair(-1, -1), SPEEDS, n_samples=500, seed=0) == []


def test_resonance_tolerance_validation() -> None:
    with pytest.raises(DomainError):
        resonance_sample(1, PP, SPEEDS, tol_phi=0.0)


def test_phase_leading_tracks_the_exact_phase() -> None:
    # the expansion lives on the tangent space of the resonant set, so
    # the probe must stay slope-matched: xi_i = eta_i (1 + c_i^2 p1/e1).
    # there the remainder is quartic and the relative error quadratic.
    p1, e1 = 1.8, 0.9
    rel = []
    for r in (1e-1, 1e-2, 1e-3):
        eta = np.array([e1, r, 0.4 * r])
        factor = 1.0 + SPEEDS.c1**2 * p1 / e1
        xi = np.array([p1 + e1, factor * eta[1], factor * eta[2]])
        exact = float(phase(1, PP, xi, eta, SPEEDS))
        lead = float(phase_leading(1, PP, xi, eta, SPEEDS))
        assert exact != 0.0
        rel.append(abs(exact - lead) / abs(exact))
    assert rel[2] < 1e-4
    assert rel[2] < 1e-3 * rel[0]


def test_phase_expansion_residuals_shrink_dyadically() -> None:
    rep = phase_expansion_check(
        1, PP, SPEEDS, m_list=tuple(range(8, 15)), samples_per_m=1_500, seed=1
    )
    assert rep.m_values
    assert not np.isnan(rep.fitted_slope)
    assert rep.fitted_slope <= -0.5


def test_partition_sign_is_an_exact_indicator_split() -> None:
    xi, eta = generic_pairs(500)
    for signs in SIGN_PAIRS:
        pieces = partition_eval("sign", signs, xi, eta, SPEEDS)
        total = sum(pieces)
        assert np.abs(total - 1.0).max() == 0.0
        for piece in pieces:
            assert np.all((piece == 0.0) | (piece == 1.0))


def test_partition_hh_and_lh_sum_to_one() -> None:
    xi, eta = generic_pairs(500)
    keep = (np.linalg.norm(eta[:, 1:], axis=1) > 1e-6) & (
        np.linalg.norm(xi - eta, axis=1) > 1e-6
    )
    xi, eta = xi[keep], eta[keep]
    for which in ("hh", "lh"):
        for signs in (PP, SignPair(-1, -1)):
            pieces = partition_eval(which, signs, xi, eta, SPEEDS)
            total = sum(pieces)
            assert np.abs(total - 1.0).max() < 1e-12
            for piece in pieces:
                assert piece.min() >= -1e-15
                assert piece.max() <= 1.0 + 1e-15


def test_partition_rejects_degenerate_and_unknown() -> None:
    xi = np.array([1.0, 0.5, 0.0])
    eta = np.array([0.5, 0.2, 0.1])
    with pytest.raises(DomainError):
        partition_eval("hh", PP, xi, np.array([1.0, 0.0, 0.0]), SPEEDS)
    with pytest.raises(DomainError):
        partition_eval("spectral", PP, xi, eta, SPEEDS)


def test_volume_estimate_scales_with_the_threshold() -> None:
    # |xi| = 2.7 splits into a shell-0 piece and a shell-1 piece, so the
    # near-resonant set is nonempty and grows with the threshold.
    xi = np.array([2.7, 0.0, 0.0])
    est_lo = volume_support_estimate(2, 0, 1, -8, PP, xi, SPEEDS, n_samples=300_000, seed=7)
    est_hi = volume_support_estimate(2, 0, 1, -4, PP, xi, SPEEDS, n_samples=300_000, seed=7)
    assert est_lo.hits >= 5
    assert est_hi.hits >= 5
    assert est_hi.measure > 10.0 * est_lo.measure
    assert est_lo.predicted < est_hi.predicted
    # both sit within the uniform comparability window
    for est in (est_lo, est_hi):
        assert est.measure <= 20.0 * est.predicted
        assert est.ci_halfwidth < est.measure


def test_volume_estimate_empty_configuration() -> None:
    # |xi| = 6 cannot be assembled from two unit-shell pieces, so the
    # constraint set is empty for every orientation pair.
    xi = np.array([6.0, 0.0, 0.0])
    for signs in SIGN_PAIRS:
        est = volume_support_estimate(0, 0, 0, -4, signs, xi, SPEEDS, n_samples=20_000, seed=2)
        assert est.hits == 0
        assert est.measure == 0.0
