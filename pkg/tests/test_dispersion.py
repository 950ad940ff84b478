from __future__ import annotations

import numpy as np
import pytest

from aniwave.dispersion import (
    SIGN_PAIRS,
    NullFormSpec,
    SignPair,
    WaveSpeeds,
    group_velocity,
    interaction_symbol,
    lam,
    phase,
    validate_nullform,
)
from aniwave.errors import DomainError

RNG = np.random.default_rng(11)
SPEEDS = WaveSpeeds()


def random_vectors(count: int) -> np.ndarray:
    v = RNG.standard_normal((count, 3))
    return v / np.linalg.norm(v, axis=-1, keepdims=True) * RNG.uniform(0.2, 5.0, (count, 1))


def test_wave_speed_validation() -> None:
    WaveSpeeds(0.5, 0.25)
    with pytest.raises(DomainError):
        WaveSpeeds(2.0, 0.5)
    with pytest.raises(DomainError):
        WaveSpeeds(1.0, 2.0)
    with pytest.raises(DomainError):
        WaveSpeeds(-1.0, -2.0)
    with pytest.raises(DomainError):
        WaveSpeeds(float("nan"), 2.0)


def test_wave_speed_gap_exponents() -> None:
    assert WaveSpeeds(2.0, 2.0).c_low == 0
    assert WaveSpeeds(2.0, 2.0).c_high == 1
    assert WaveSpeeds(1.2, 1.1).c_low == -3
    assert WaveSpeeds(0.3, 0.6).c_low == -1
    assert WaveSpeeds(0.3, 0.6).c_high == 0


def test_lam_branches_agree_on_the_first_axis_only() -> None:
    xi1 = np.zeros((64, 3))
    xi1[:, 0] = np.linspace(-8.0, 8.0, 64)
    assert np.array_equal(lam(1, xi1, SPEEDS), lam(2, xi1, SPEEDS))

    xi = random_vectors(1000)
    off = np.hypot(xi[:, 1], xi[:, 2]) > 1e-3 * np.linalg.norm(xi, axis=-1)
    gap = lam(2, xi, SPEEDS) - lam(1, xi, SPEEDS)
    assert np.all(gap[off] > 0.0)


def test_lam_homogeneity_and_positivity() -> None:
    xi = random_vectors(500)
    for a in (1, 2):
        l1 = lam(a, xi, SPEEDS)
        l3 = lam(a, 3.0 * xi, SPEEDS)
        assert np.all(l1 > 0.0)
        assert np.abs(l3 - 3.0 * l1).max() < 1e-12 * np.abs(l3).max()


def test_group_velocity_matches_finite_differences() -> None:
    xi = random_vectors(50)
    h = 1e-6
    for a in (1, 2):
        grad = group_velocity(a, xi, SPEEDS)
        for ax in range(3):
            step = np.zeros(3)
            step[ax] = h
            fd = (lam(a, xi + step, SPEEDS) - lam(a, xi - step, SPEEDS)) / (2.0 * h)
            assert np.abs(grad[:, ax] - fd).max() < 1e-7
    with pytest.raises(DomainError):
        group_velocity(1, np.zeros(3), SPEEDS)


def test_phase_is_assembled_from_the_branches() -> None:
    xi = random_vectors(100)
    eta = random_vectors(100)
    for signs in SIGN_PAIRS:
        for a in (1, 2):
            got = phase(a, signs, xi, eta, SPEEDS)
            want = (
                lam(a, xi, SPEEDS)
                - signs.mu * lam(1, xi - eta, SPEEDS)
                - signs.nu * lam(2, eta, SPEEDS)
            )
            assert np.array_equal(got, want)


def test_sign_pair_validation_and_product() -> None:
    assert SignPair(1, -1).product == -1
    assert str(SignPair(-1, 1)) == "-+"
    assert len(SIGN_PAIRS) == 4
    with pytest.raises(DomainError):
        SignPair(0, 1)


def test_null_symbol_cancels_for_aligned_axis_frequencies() -> None:
    # same-orientation parallel interactions along the shared axis carry
    # zero coupling; this is the structural smallness of the system.
    nf = NullFormSpec.paper_null()
    t = np.linspace(0.3, 9.0, 40)
    for s in (1.0, -1.0):
        p = np.zeros((40, 3))
        eta = np.zeros((40, 3))
        p[:, 0] = s * t
        eta[:, 0] = s * 2.0 * t
        for a in (1, 2):
            q = interaction_symbol(a, SignPair(+1, +1), p, eta, SPEEDS, nf)
            assert np.abs(q).max() < 1e-14
            q = interaction_symbol(a, SignPair(-1, -1), p, eta, SPEEDS, nf)
            assert np.abs(q).max() < 1e-14


def test_flipped_symbol_does_not_cancel_on_the_axis() -> None:
    nf = NullFormSpec.sign_flipped()
    p = np.array([2.0, 0.0, 0.0])
    eta = np.array([3.0, 0.0, 0.0])
    q = interaction_symbol(1, SignPair(+1, +1), p, eta, SPEEDS, nf)
    assert abs(q - 0.5) < 1e-14


def test_symbol_opposite_orientations_on_the_axis() -> None:
    # mu nu = -1 flips the correlation term, so aligned axis input gives
    # the full q00/2 while anti-aligned input cancels.
    nf = NullFormSpec.paper_null()
    p = np.array([2.0, 0.0, 0.0])
    eta = np.array([5.0, 0.0, 0.0])
    q = interaction_symbol(1, SignPair(+1, -1), p, eta, SPEEDS, nf)
    assert abs(q - 0.5) < 1e-14
    q = interaction_symbol(1, SignPair(+1, -1), p, -eta, SPEEDS, nf)
    assert abs(q) < 1e-14


def test_symbol_is_linear_in_the_coefficients() -> None:
    p = random_vectors(30)
    eta = random_vectors(30)
    qij = RNG.standard_normal(8)
    nf1 = NullFormSpec.custom(qij, q00=0.7)
    nf2 = NullFormSpec.custom(2.0 * qij, q00=1.4)
    for a in (1, 2):
        for signs in SIGN_PAIRS:
            q1 = interaction_symbol(a, signs, p, eta, SPEEDS, nf1)
            q2 = interaction_symbol(a, signs, p, eta, SPEEDS, nf2)
            assert np.abs(q2 - 2.0 * q1).max() < 1e-13


def test_symbol_transverse_block_uses_per_branch_coefficients() -> None:
    qij = np.zeros((2, 2, 2))
    qij[0, 0, 1] = 1.0  # branch 1 couples d_2 u1 d_3 u2 only
    nf = NullFormSpec.custom(qij.reshape(-1), q00=0.0)
    p = np.array([0.0, 1.5, 0.0])
    eta = np.array([0.0, 0.0, 2.0])
    signs = SignPair(+1, +1)
    q1 = interaction_symbol(1, signs, p, eta, SPEEDS, nf)
    q2 = interaction_symbol(2, signs, p, eta, SPEEDS, nf)
    denom = lam(1, p, SPEEDS) * lam(2, eta, SPEEDS)
    assert abs(q1 - 0.25 * 1.5 * 2.0 / denom) < 1e-14
    assert abs(q2) == 0.0


def test_symbol_rejects_degenerate_frequencies() -> None:
    nf = NullFormSpec.paper_null()
    with pytest.raises(DomainError):
        interaction_symbol(1, SignPair(1, 1), np.zeros(3), np.ones(3), SPEEDS, nf)
    with pytest.raises(DomainError):
        interaction_symbol(1, SignPair(1, 1), np.ones(3), np.zeros(3), SPEEDS, nf)
    with pytest.raises(DomainError):
        interaction_symbol(3, SignPair(1, 1), np.ones(3), np.ones(3), SPEEDS, nf)


def test_nullform_spec_round_trip_and_validation() -> None:
    nf = NullFormSpec.custom(np.arange(8.0), q00=0.3)
    again = NullFormSpec.from_dict(nf.to_dict())
    assert again == nf
    assert NullFormSpec.paper_null().x1_sign == -1.0
    assert NullFormSpec.sign_flipped().x1_sign == 1.0
    with pytest.raises(DomainError):
        NullFormSpec(mode="other")
    with pytest.raises(DomainError):
        NullFormSpec(qij=(1.0,) * 7)
    with pytest.raises(DomainError):
        NullFormSpec(q00=float("inf"))


def test_validated_symbol_bounds_stay_moderate() -> None:
    # unit-shell samples of the null coupling are uniformly bounded with
    # all scaled derivatives of low order; nothing should be flagged.
    report = validate_nullform(
        NullFormSpec.paper_null(),
        SPEEDS,
        sample_count=400,
        max_order=2,
        derivative_samples=48,
        seed=3,
    )
    assert not report.flagged
    assert not report.empty
    assert report.order0_max <= 0.5 + 1e-12
    assert report.max_bound < 10.0
