"""Resonance geometry: the l-functional, stationary sets, phase
expansions near the shared-speed axis, and volume-of-support estimates.

Space-time resonances are joint zeros of the phase Phi^a_{mu nu} and
its eta-gradient.  Both vanish together only when xi, eta, and xi - eta
all point along the first axis with orientations matched to (mu, nu);
everything here quantifies that statement.  The l-functional

    l(xi, eta) = |eta_perp|^2/|eta|^2 + |mu sgn(xi1-eta1) - nu sgn(eta1)|
               + |xi_perp-eta_perp|^2/|xi-eta|^2
               + |(xi_perp-eta_perp)/|xi1-eta1| - mu nu (c1^2 eta2, c2^2 eta3)/|eta1||

measures the distance to that axis set; |grad_eta Phi| is bounded below
by a multiple of it in the near-resonant regime (small l), which the
sampled lower-bound check estimates empirically.

Near the axis set, with transverse components of size 2^{-m/4} and
l-functional below 2^{-m/2 + alpha m}, the phases collapse to explicit
quadratic forms in the transverse variables:

    Phi^1 = sum_i (1-c_i^2) eta_{i+1}^2 A_i / (2 |xi1|)
    Phi^2 = -mu nu |xi1-eta1| / (2 |eta1| |xi1|)
            * sum_i c_i^2 (1-c_i^2) eta_{i+1}^2 A_i

with A_i = 1 + mu nu c_i^2 |xi1-eta1| / |eta1|, up to errors of order
2^{-3m/4} (modulo small alpha corrections).  Note the extra c_i^2
weights in the branch-2 form: expanding Lambda_2(eta) around the axis
produces c_i^2 eta_{i+1}^2 terms, and the branch-1/branch-2 difference
inherits them; dropping them misstates the branch-2 leading term by a
factor c_i^2 (numerically verified against the exact phase).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cutoffs import psi_band, psi_geq, psi_leq
from .dispersion import SignPair, WaveSpeeds, group_velocity, lam, phase
from .errors import DomainError

Array = np.ndarray

__all__ = [
    "ResonancePoint",
    "PhaseExpansionReport",
    "VolumeEstimate",
    "LowerBoundReport",
    "l_functional",
    "grad_eta_phase",
    "lower_bound_check",
    "resonance_sample",
    "phase_leading",
    "phase_expansion_check",
    "volume_support_estimate",
    "partition_eval",
]


# ---------------------------------------------------------------------------
# the resonance functional and phase gradient
# ---------------------------------------------------------------------------


def _perp(v: Array) -> Array:
    return v[..., 1:]


def l_functional(signs: SignPair, xi: Array, eta: Array, speeds: WaveSpeeds) -> Array:
    """Four-term distance to the matched-orientation axis configurations."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    p = xi - eta
    abs_eta = np.linalg.norm(eta, axis=-1)
    abs_p = np.linalg.norm(p, axis=-1)
    if np.any(abs_eta == 0.0):
        raise DomainError("l-functional undefined at eta = 0")
    if np.any(abs_p == 0.0):
        raise DomainError("l-functional undefined at xi = eta")
    if np.any(eta[..., 0] == 0.0):
        raise DomainError("l-functional undefined at eta_1 = 0")
    if np.any(p[..., 0] == 0.0):
        raise DomainError("l-functional undefined at xi_1 = eta_1")

    term1 = np.sum(_perp(eta) ** 2, axis=-1) / abs_eta**2
    term2 = np.abs(signs.mu * np.sign(p[..., 0]) - signs.nu * np.sign(eta[..., 0]))
    term3 = np.sum(_perp(p) ** 2, axis=-1) / abs_p**2
    cc = np.array([speeds.c1**2, speeds.c2**2])
    slope = _perp(p) / np.abs(p[..., 0])[..., None] - (
        signs.product * cc * _perp(eta) / np.abs(eta[..., 0])[..., None]
    )
    term4 = np.linalg.norm(slope, axis=-1)
    return term1 + term2 + term3 + term4


def grad_eta_phase(
    a: int, signs: SignPair, xi: Array, eta: Array, speeds: WaveSpeeds
) -> Array:
    """grad_eta Phi^a = -mu (eta-xi)/|xi-eta| - nu grad Lambda_2(eta).

    The value does not depend on a (the output frequency enters the
    phase only through Lambda_a(xi)); the branch argument is kept so
    call sites read like the phase they differentiate.
    """
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    p = xi - eta
    abs_p = np.linalg.norm(p, axis=-1)
    if np.any(abs_p == 0.0):
        raise DomainError("phase gradient undefined at xi = eta")
    ge2 = group_velocity(2, eta, speeds)
    return signs.mu * p / abs_p[..., None] - signs.nu * ge2


@dataclass
class LowerBoundReport:
    """Empirical constant in |grad_eta Phi| >= const * l over samples."""

    min_ratio: float
    samples_kept: int
    samples_drawn: int
    l_cap: float


def _annulus_samples(k: int, count: int, rng: np.random.Generator) -> Array:
    lo, hi = 5.0 * 2.0 ** (k - 3), 3.0 * 2.0 ** (k - 1)
    u = rng.normal(size=(count, 3))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    r = (lo**3 + (hi**3 - lo**3) * rng.random(count)) ** (1.0 / 3.0)
    return r[:, None] * u


def lower_bound_check(
    signs: SignPair,
    speeds: WaveSpeeds,
    k: int = 0,
    k1: int = 0,
    k2: int = 0,
    n_samples: int = 100_000,
    l_cap: float = 4.0,
    seed: int = 0,
) -> LowerBoundReport:
    """Sampled min of |grad_eta Phi| / l over shell-localized pairs.

    The lower bound is a near-resonance statement: the slope term of l
    is unbounded as eta_1 -> 0 while the gradient stays O(1), so the
    ratio is only meaningful on {l <= l_cap}; samples beyond the cap
    are discarded and counted.
    """
    rng = np.random.default_rng(seed)
    eta = _annulus_samples(k2, n_samples, rng)
    p = _annulus_samples(k1, n_samples, rng)
    xi = p + eta
    lo, hi = 5.0 * 2.0 ** (k - 3), 3.0 * 2.0 ** (k - 1)
    radius = np.linalg.norm(xi, axis=1)
    good = (
        (radius >= lo)
        & (radius <= hi)
        & (eta[:, 0] != 0.0)
        & (p[:, 0] != 0.0)
    )
    xi, eta = xi[good], eta[good]
    lvals = l_functional(signs, xi, eta, speeds)
    keep = lvals <= l_cap
    if not keep.any():
        return LowerBoundReport(np.inf, 0, n_samples, l_cap)
    gnorm = np.linalg.norm(grad_eta_phase(1, signs, xi[keep], eta[keep], speeds), axis=-1)
    ratios = gnorm / lvals[keep]
    return LowerBoundReport(
        min_ratio=float(ratios.min()),
        samples_kept=int(keep.sum()),
        samples_drawn=n_samples,
        l_cap=l_cap,
    )


# ---------------------------------------------------------------------------
# stationary-point search
# ---------------------------------------------------------------------------


@dataclass
class ResonancePoint:
    xi: Array
    eta: Array
    a: int
    signs: SignPair
    phase_value: float
    grad_eta_phase_norm: float
    transverse_ratio: float


def _residual(a: int, signs: SignPair, z: Array, speeds: WaveSpeeds) -> Array:
    """Stacked residual (Phi, grad_eta Phi) as an (n, 4) array; z is (n, 6)."""
    xi, eta = z[:, :3], z[:, 3:]
    r0 = phase(a, signs, xi, eta, speeds)
    g = grad_eta_phase(a, signs, xi, eta, speeds)
    return np.concatenate([r0[:, None], g], axis=1)


def resonance_sample(
    a: int,
    signs: SignPair,
    speeds: WaveSpeeds,
    shells: tuple[int, int, int] = (0, 0, 0),
    tol_phi: float = 1e-6,
    tol_grad: float = 1e-6,
    n_samples: int = 2_000,
    descent_steps: int = 50,
    polish_steps: int = 8,
    seed: int = 0,
) -> list[ResonancePoint]:
    """Hunt joint zeros of (Phi, grad_eta Phi) from shell-localized seeds.

    Seeds are drawn in the shell product, driven downhill on
    Phi^2 + |grad_eta Phi|^2 by fixed-step finite-difference descent,
    then polished by damped Gauss-Newton on the stacked residual.
    Points passing both tolerances are returned with their transverse
    ratio max(|xi_2|, |xi_3|, |eta_2|, |eta_3|) / |xi|.
    """
    if tol_phi <= 0 or tol_grad <= 0:
        raise DomainError("tolerances must be positive")
    k, k1, k2 = shells
    rng = np.random.default_rng(seed)
    eta = _annulus_samples(k2, n_samples, rng)
    p = _annulus_samples(k1, n_samples, rng)
    xi = p + eta
    lo, hi = 5.0 * 2.0 ** (k - 3), 3.0 * 2.0 ** (k - 1)
    radius = np.linalg.norm(xi, axis=1)
    good = (radius >= lo) & (radius <= hi)
    z = np.concatenate([xi[good], eta[good]], axis=1)
    if z.shape[0] == 0:
        return []

    def objective(zz: Array) -> Array:
        r = _residual(a, signs, zz, speeds)
        return np.sum(r**2, axis=1)

    # fixed-step descent with a finite-difference gradient of the objective
    step = 2.0**-7 * 2.0**k
    h = 1e-6 * 2.0**k
    for _ in range(descent_steps):
        grad = np.empty_like(z)
        for d in range(6):
            zp = z.copy()
            zp[:, d] += h
            zm = z.copy()
            zm[:, d] -= h
            grad[:, d] = (objective(zp) - objective(zm)) / (2.0 * h)
        gn = np.linalg.norm(grad, axis=1, keepdims=True)
        gn[gn == 0.0] = 1.0
        z = z - step * grad / gn

    # Gauss-Newton polish on the stacked residual (FD Jacobian)
    for _ in range(polish_steps):
        r = _residual(a, signs, z, speeds)
        jac = np.empty((z.shape[0], 4, 6))
        for d in range(6):
            zp = z.copy()
            zp[:, d] += h
            zm = z.copy()
            zm[:, d] -= h
            jac[:, :, d] = (_residual(a, signs, zp, speeds) - _residual(a, signs, zm, speeds)) / (2.0 * h)
        jtj = np.einsum("nid,nie->nde", jac, jac)
        jtr = np.einsum("nid,ni->nd", jac, r)
        jtj += 1e-12 * np.eye(6)
        try:
            delta = np.linalg.solve(jtj, jtr[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            delta = np.stack([np.linalg.lstsq(J, rr, rcond=None)[0] for J, rr in zip(jac, r)])
        z = z - delta

    xi, eta = z[:, :3], z[:, 3:]
    finite = np.all(np.isfinite(z), axis=1)
    nz = (np.linalg.norm(xi - eta, axis=1) > 1e-12) & (np.linalg.norm(eta, axis=1) > 1e-12)
    keep = finite & nz
    xi, eta = xi[keep], eta[keep]
    if xi.shape[0] == 0:
        return []
    phi = phase(a, signs, xi, eta, speeds)
    gnorm = np.linalg.norm(grad_eta_phase(a, signs, xi, eta, speeds), axis=-1)
    accepted = (np.abs(phi) <= tol_phi) & (gnorm <= tol_grad)
    out: list[ResonancePoint] = []
    for i in np.nonzero(accepted)[0]:
        trans = max(abs(xi[i, 1]), abs(xi[i, 2]), abs(eta[i, 1]), abs(eta[i, 2]))
        denom = np.linalg.norm(xi[i])
        out.append(
            ResonancePoint(
                xi=xi[i].copy(),
                eta=eta[i].copy(),
                a=a,
                signs=signs,
                phase_value=float(phi[i]),
                grad_eta_phase_norm=float(gnorm[i]),
                transverse_ratio=float(trans / denom) if denom > 0 else np.inf,
            )
        )
    return out


# ---------------------------------------------------------------------------
# phase expansion near the axis
# ---------------------------------------------------------------------------


def phase_leading(
    a: int, signs: SignPair, xi: Array, eta: Array, speeds: WaveSpeeds
) -> Array:
    """Quadratic-in-transverse leading term of Phi^a near the axis set."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    mn = signs.product
    p1 = np.abs(xi[..., 0] - eta[..., 0])
    e1 = np.abs(eta[..., 0])
    x1 = np.abs(xi[..., 0])
    total = np.zeros(np.broadcast_shapes(xi.shape[:-1], eta.shape[:-1]))
    for i, c in enumerate((speeds.c1, speeds.c2)):
        A = 1.0 + mn * c**2 * p1 / e1
        quad = (1.0 - c**2) * eta[..., 1 + i] ** 2 * A
        if a == 1:
            total = total + quad / (2.0 * x1)
        else:
            total = total + (-mn * p1 / (2.0 * e1 * x1)) * c**2 * quad
    return total


@dataclass
class PhaseExpansionReport:
    m_values: list[int]
    max_residuals: list[float]
    fitted_slope: float
    alpha: float
    samples_per_m: int
    low_coverage: bool = False
    kept_counts: list[int] = field(default_factory=list)


def _expansion_samples(
    signs: SignPair,
    speeds: WaveSpeeds,
    m: int,
    alpha: float,
    count: int,
    rng: np.random.Generator,
) -> tuple[Array, Array]:
    """Near-resonant pairs in the unit shell: exact 1D backbone in the
    first component, transverse size 2^{-m/4}, and transverse slopes
    correlated to within the l-functional window 2^{-m/2 + alpha m}."""
    mu, nu = signs.mu, signs.nu
    if mu == -1 and nu == -1:
        raise DomainError("the (-,-) pair has no resonant configurations")
    b = 0.65 + 0.25 * rng.random(count)  # |eta_1|
    r = 0.65 + 0.25 * rng.random(count)  # |xi_1 - eta_1|
    if (mu, nu) == (1, 1):
        eta1 = b
        xi1 = r + b
    elif (mu, nu) == (1, -1):
        r = b + (0.3 + 0.6 * rng.random(count))  # keep |xi_1| away from 0
        eta1 = -b
        xi1 = r - b
    else:  # (-1, +1)
        eta1 = r + b
        xi1 = b
    # transverse scale 2^{-m/4}, shrunk so that all four l-functional
    # terms stay inside the window 2^{-m/2 + alpha m}: the slope terms
    # amplify eta_perp by up to c^2 |xi1-eta1| / |eta1|
    u = 2.0 ** (alpha * m / 2.0) / 20.0 * (0.25 + 0.75 * rng.random((count, 2)))
    eta_t = 2.0 ** (-m / 4.0) * u * np.sign(
        rng.standard_normal((count, 2))
    ) * np.abs(eta1)[:, None]
    p1 = np.abs(xi1 - eta1)
    cc = np.array([speeds.c1**2, speeds.c2**2])
    A = 1.0 + signs.product * cc[None, :] * (p1 / np.abs(eta1))[:, None]
    wiggle = 2.0 ** (-m / 2.0 + alpha * m - 3.0)
    xi_t = A * eta_t + wiggle * (2.0 * rng.random((count, 2)) - 1.0) * np.abs(eta1)[:, None]
    xi = np.column_stack([xi1, xi_t])
    eta = np.column_stack([eta1, eta_t])
    return xi, eta


def phase_expansion_check(
    a: int,
    signs: SignPair,
    speeds: WaveSpeeds,
    m_list: tuple[int, ...] = tuple(range(10, 21)),
    alpha: float = 0.05,
    samples_per_m: int = 10_000,
    seed: int = 0,
) -> PhaseExpansionReport:
    """Max residual |Phi - leading| on near-resonant samples, per m,
    with the fitted log2-residual slope (expected around -3/4)."""
    rng = np.random.default_rng(seed)
    ms, res, kept = [], [], []
    low = False
    for m in m_list:
        xi, eta = _expansion_samples(signs, speeds, m, alpha, samples_per_m, rng)
        lv = l_functional(signs, xi, eta, speeds)
        mask = lv < 2.0 ** (-m / 2.0 + alpha * m)
        if mask.sum() < samples_per_m // 10:
            low = True
        if mask.sum() == 0:
            continue
        exact = phase(a, signs, xi[mask], eta[mask], speeds)
        lead = phase_leading(a, signs, xi[mask], eta[mask], speeds)
        ms.append(m)
        res.append(float(np.max(np.abs(exact - lead))))
        kept.append(int(mask.sum()))
    if len(ms) >= 2 and all(r > 0 for r in res):
        slope = float(np.polyfit(ms, np.log2(res), 1)[0])
    else:
        slope = np.nan
        low = True
    return PhaseExpansionReport(
        m_values=ms,
        max_residuals=res,
        fitted_slope=slope,
        alpha=alpha,
        samples_per_m=samples_per_m,
        low_coverage=low,
        kept_counts=kept,
    )


# ---------------------------------------------------------------------------
# volume of support
# ---------------------------------------------------------------------------


@dataclass
class VolumeEstimate:
    k: int
    k1: int
    k2: int
    l: int
    signs: SignPair
    measure: float
    predicted: float
    ratio: float
    samples: int
    ci_halfwidth: float
    hits: int = 0


def volume_support_estimate(
    k: int,
    k1: int,
    k2: int,
    l: int,
    signs: SignPair,
    xi: Array,
    speeds: WaveSpeeds,
    n_samples: int = 1_000_000,
    seed: int = 0,
) -> VolumeEstimate:
    """Monte-Carlo measure of {eta : l(xi, eta) <= 2^l, |eta| in shell
    k2, |xi - eta| in shell k1} against 2^(min(k1,k2) + 2 max(k1,k2) + 3l/2).

    Proposals are uniform in two coaxial cylinders stratified by the
    transverse radius |eta_perp|: the target set concentrates below
    |eta_perp| ~ 2^(l/2) |eta|, so an inner stratum at that radius
    captures it with far fewer wasted draws than the plain annulus.
    """
    xi = np.asarray(xi, dtype=float)
    rng = np.random.default_rng(seed)
    lo2, hi2 = 5.0 * 2.0 ** (k2 - 3), 3.0 * 2.0 ** (k2 - 1)
    lo1, hi1 = 5.0 * 2.0 ** (k1 - 3), 3.0 * 2.0 ** (k1 - 1)

    # Propose in whichever of eta, xi - eta lives on the smaller shell;
    # the measure is the same either way (unit-Jacobian change of
    # variables) and proposals in the big shell would never land inside
    # the small one.
    in_p_var = k1 < k2 - 2
    hi_s = hi1 if in_p_var else hi2
    cuts = sorted(
        {
            0.0,
            min(hi_s, 2.0 ** (l + 2.0) * hi_s),
            min(hi_s, 2.0 ** (l / 2.0 + 1.0) * hi_s),
            hi_s,
        }
    )
    strata = [(a, b) for a, b in zip(cuts[:-1], cuts[1:]) if b > a]
    n_each = max(1, n_samples // len(strata))

    measure = 0.0
    var = 0.0
    hits_total = 0
    for r_lo, r_hi in strata:
        v1 = hi_s * (2.0 * rng.random(n_each) - 1.0)
        rho = np.sqrt(r_lo**2 + (r_hi**2 - r_lo**2) * rng.random(n_each))
        ang = 2.0 * np.pi * rng.random(n_each)
        v = np.column_stack([v1, rho * np.cos(ang), rho * np.sin(ang)])
        vol = 2.0 * hi_s * np.pi * (r_hi**2 - r_lo**2)
        eta = xi[None, :] - v if in_p_var else v

        abs_eta = np.linalg.norm(eta, axis=1)
        p = xi[None, :] - eta
        abs_p = np.linalg.norm(p, axis=1)
        ok = (
            (abs_eta >= lo2)
            & (abs_eta <= hi2)
            & (abs_p >= lo1)
            & (abs_p <= hi1)
            & (eta[:, 0] != 0.0)
            & (p[:, 0] != 0.0)
        )
        inside = np.zeros(n_each, dtype=bool)
        if ok.any():
            xi_b = np.broadcast_to(xi, eta[ok].shape)
            lv = l_functional(signs, xi_b, eta[ok], speeds)
            inside[ok] = lv <= 2.0**l
        p_hat = inside.mean()
        measure += vol * p_hat
        var += vol**2 * p_hat * (1.0 - p_hat) / n_each
        hits_total += int(inside.sum())

    predicted = 2.0 ** (min(k1, k2) + 2 * max(k1, k2) + 1.5 * l)
    return VolumeEstimate(
        k=k,
        k1=k1,
        k2=k2,
        l=l,
        signs=signs,
        measure=measure,
        predicted=predicted,
        ratio=measure / predicted,
        samples=n_samples,
        ci_halfwidth=1.96 * float(np.sqrt(var)),
        hits=hits_total,
    )


# ---------------------------------------------------------------------------
# partitions of unity
# ---------------------------------------------------------------------------


def partition_eval(
    which: str, signs: SignPair, xi: Array, eta: Array, speeds: WaveSpeeds
) -> tuple[Array, ...]:
    """Evaluate one of the three interaction partitions at (xi, eta).

    "sign": the resonant/non-resonant indicator split driven by the
    orientations of xi_1, eta_1, xi_1 - eta_1 (exact indicators).
    "hh": comparable-frequency split by the angle factor
    1 + mu xi_1 eta_1 / (|xi| |eta|) and the transverse size ratio
    |xi_perp| / |eta_perp| against the band [c_low - 3, c_high + 3].
    "lh": low-high split by 1 - nu xi_1 eta_1 / (|xi| |eta|) and the
    transverse-slope ratio |xi_perp - eta_perp| Lambda_2(eta) /
    (|xi - eta| sqrt(c1^4 eta2^2 + c2^4 eta3^2)) against [-10, 10].
    """
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)

    if which == "sign":
        p1 = xi[..., 0] - eta[..., 0]
        if (signs.mu, signs.nu) == (1, 1):
            x = p1 * eta[..., 0]
            one = (x >= 0.0).astype(float)
        elif (signs.mu, signs.nu) == (1, -1):
            x = xi[..., 0] * eta[..., 0]
            one = (x < 0.0).astype(float)
        elif (signs.mu, signs.nu) == (-1, 1):
            x = p1 * xi[..., 0]
            one = (x < 0.0).astype(float)
        else:
            one = np.zeros(np.broadcast_shapes(xi.shape[:-1], eta.shape[:-1]))
        return one, 1.0 - one

    abs_xi = np.linalg.norm(xi, axis=-1)
    abs_eta = np.linalg.norm(eta, axis=-1)
    if np.any(abs_xi == 0.0) or np.any(abs_eta == 0.0):
        raise DomainError("partition undefined at xi = 0 or eta = 0")

    if which == "hh":
        perp_eta = np.linalg.norm(_perp(eta), axis=-1)
        if np.any(perp_eta == 0.0):
            raise DomainError("hh partition undefined at eta_perp = 0")
        t = 1.0 + signs.mu * xi[..., 0] * eta[..., 0] / (abs_xi * abs_eta)
        s = np.linalg.norm(_perp(xi), axis=-1) / perp_eta
        band = psi_band(s, -3 + speeds.c_low, 3 + speeds.c_high)
        return psi_geq(t, -2) * band, psi_leq(t, -3) * band, 1.0 - band

    if which == "lh":
        p = xi - eta
        abs_p = np.linalg.norm(p, axis=-1)
        if np.any(abs_p == 0.0):
            raise DomainError("lh partition undefined at xi = eta")
        grad_perp = np.sqrt(
            speeds.c1**4 * eta[..., 1] ** 2 + speeds.c2**4 * eta[..., 2] ** 2
        )
        if np.any(grad_perp == 0.0):
            raise DomainError("lh partition undefined at eta_perp = 0")
        t = 1.0 - signs.nu * xi[..., 0] * eta[..., 0] / (abs_xi * abs_eta)
        s = (
            np.linalg.norm(_perp(p), axis=-1)
            * lam(2, eta, speeds)
            / (abs_p * grad_perp)
        )
        band = psi_band(s, -10, 10)
        return psi_geq(t, -10) * band, psi_leq(t, -11) * band, 1.0 - band

    raise DomainError(f"unknown partition {which!r}")
