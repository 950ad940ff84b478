"""Dispersion relations, phases, and the bilinear interaction symbol.

Two wave speeds act here.  Branch 1 carries the isotropic relation
Lambda_1(xi) = |xi|; branch 2 carries Lambda_2(xi) = sqrt(xi_1^2 +
c_1^2 xi_2^2 + c_2^2 xi_3^2).  The speeds agree along the first axis and
differ transversally, with (c_1 - 1)(c_2 - 1) > 0 so both transverse
speeds sit on the same side of 1.

The quadratic coupling N = q00 (d_t u1 d_t u2 - d_1 u1 d_1 u2)
+ sum_{i,j in {2,3}} q_ij^a (grad_i u1) (grad_j u2) drives both
components.  Written against half-wave profiles, each sign pair
(mu, nu) contributes a bilinear term with multiplier

    q^a_{mu nu}(p, eta) = q00 (1/4 - mu nu p_1 eta_1 / (4 L1(p) L2(eta)))
                          + (mu nu / 4) sum_ij q_ij^a p_i eta_j / (L1(p) L2(eta))

(x1_sign flips the sign of the p_1 eta_1 term for the sign_flipped
variant) and oscillates with phase

    Phi^a_{mu nu}(xi, eta) = Lambda_a(xi) - mu Lambda_1(xi - eta) - nu Lambda_2(eta).

The (+,+) multiplier of the default coupling vanishes identically when
p and eta are parallel to the first axis with matching orientation:
p_1 eta_1 = |p| Lambda_2(eta) there, so the two q00 terms cancel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, log2
from typing import Callable, Sequence

import numpy as np

from ._fdiff import mixed_partial, multi_indices
from .errors import DomainError

Array = np.ndarray

__all__ = [
    "WaveSpeeds",
    "SignPair",
    "SIGN_PAIRS",
    "NullFormSpec",
    "lam",
    "group_velocity",
    "phase",
    "interaction_symbol",
    "SymbolBoundReport",
    "validate_nullform",
]


# ---------------------------------------------------------------------------
# parameter containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WaveSpeeds:
    """Transverse speeds (c_1, c_2) of the second branch.

    Exposes the dyadic gap exponents used by localized estimates:
    c_low is the exponent of the largest power of two at or below the
    distance from either speed to 1, clamped to be <= 0; c_high covers
    max(c_1, c_2) from above, clamped to be >= 0.
    """

    c1: float = 2.0
    c2: float = 2.0

    def __post_init__(self) -> None:
        if not (np.isfinite(self.c1) and np.isfinite(self.c2)):
            raise DomainError("wave speeds must be finite")
        if self.c1 <= 0 or self.c2 <= 0:
            raise DomainError("wave speeds must be positive")
        if (self.c1 - 1.0) * (self.c2 - 1.0) <= 0:
            raise DomainError(
                "transverse speeds must lie strictly on the same side of 1; "
                f"got c1={self.c1}, c2={self.c2}"
            )

    @property
    def c_low(self) -> int:
        gap = min(abs(1.0 - self.c1), abs(1.0 - self.c2))
        return min(ceil(log2(gap)), 0)

    @property
    def c_high(self) -> int:
        return max(ceil(log2(max(self.c1, self.c2))), 0)

    def diag(self) -> Array:
        """Per-axis speed factors (1, c1, c2) of the second branch."""
        return np.array([1.0, self.c1, self.c2])


@dataclass(frozen=True)
class SignPair:
    """Half-wave orientation pair (mu, nu), each +1 or -1."""

    mu: int
    nu: int

    def __post_init__(self) -> None:
        if self.mu not in (-1, 1) or self.nu not in (-1, 1):
            raise DomainError(f"signs must be +-1, got ({self.mu}, {self.nu})")

    @property
    def product(self) -> int:
        return self.mu * self.nu

    def __str__(self) -> str:
        return f"{'+' if self.mu > 0 else '-'}{'+' if self.nu > 0 else '-'}"


SIGN_PAIRS = (
    SignPair(+1, +1),
    SignPair(+1, -1),
    SignPair(-1, +1),
    SignPair(-1, -1),
)


@dataclass(frozen=True)
class NullFormSpec:
    """Coefficients of the quadratic coupling.

    mode is one of "paper_null", "sign_flipped", "custom".  q00 scales
    the d_t d_t - d_1 d_1 block; qij holds the constant transverse
    coefficients q_ij^a indexed (branch a-1, i-2, j-2) for i, j in
    {2, 3}.  sign_flipped only flips the relative sign of the p_1 eta_1
    term inside the symbol (x1_sign = +1 instead of -1), breaking the
    on-axis cancellation.
    """

    mode: str = "paper_null"
    q00: float = 1.0
    qij: tuple[float, ...] = (0.0,) * 8  # flattened (2, 2, 2)

    def __post_init__(self) -> None:
        if self.mode not in ("paper_null", "sign_flipped", "custom"):
            raise DomainError(f"unknown coupling mode {self.mode!r}")
        if len(self.qij) != 8:
            raise DomainError("qij must hold 8 coefficients (2 branches x 2 x 2)")
        vals = np.asarray(self.qij, dtype=float)
        if not np.all(np.isfinite(vals)) or not np.isfinite(self.q00):
            raise DomainError("coupling coefficients must be finite")

    @property
    def x1_sign(self) -> float:
        return 1.0 if self.mode == "sign_flipped" else -1.0

    @property
    def qij_array(self) -> Array:
        return np.asarray(self.qij, dtype=float).reshape(2, 2, 2)

    @classmethod
    def paper_null(cls, q00: float = 1.0) -> "NullFormSpec":
        return cls(mode="paper_null", q00=q00)

    @classmethod
    def sign_flipped(cls, q00: float = 1.0) -> "NullFormSpec":
        return cls(mode="sign_flipped", q00=q00)

    @classmethod
    def custom(cls, qij: Sequence[float], q00: float = 1.0) -> "NullFormSpec":
        flat = tuple(float(v) for v in np.asarray(qij, dtype=float).reshape(-1))
        return cls(mode="custom", q00=q00, qij=flat)

    def to_dict(self) -> dict:
        return {"mode": self.mode, "q00": self.q00, "qij": list(self.qij)}

    @classmethod
    def from_dict(cls, data: dict) -> "NullFormSpec":
        return cls(
            mode=data["mode"],
            q00=float(data["q00"]),
            qij=tuple(float(v) for v in data["qij"]),
        )


# ---------------------------------------------------------------------------
# dispersion relations
# ---------------------------------------------------------------------------


def _check_branch(a: int) -> None:
    if a not in (1, 2):
        raise DomainError(f"branch index must be 1 or 2, got {a}")


def lam(a: int, xi: Array, speeds: WaveSpeeds) -> Array:
    """Dispersion relation Lambda_a(xi) for xi of shape (..., 3)."""
    _check_branch(a)
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1] != 3:
        raise DomainError(f"frequency vectors must have 3 components, got shape {xi.shape}")
    if a == 1:
        return np.sqrt(xi[..., 0] ** 2 + xi[..., 1] ** 2 + xi[..., 2] ** 2)
    return np.sqrt(
        xi[..., 0] ** 2
        + speeds.c1**2 * xi[..., 1] ** 2
        + speeds.c2**2 * xi[..., 2] ** 2
    )


def group_velocity(a: int, xi: Array, speeds: WaveSpeeds) -> Array:
    """grad Lambda_a(xi); rejects xi = 0 where the gradient is undefined."""
    _check_branch(a)
    xi = np.asarray(xi, dtype=float)
    lam_val = lam(a, xi, speeds)
    if np.any(lam_val == 0.0):
        raise DomainError("group velocity is undefined at xi = 0")
    w = np.ones(3) if a == 1 else speeds.diag() ** 2
    return w * xi / lam_val[..., None]


def phase(a: int, signs: SignPair, xi: Array, eta: Array, speeds: WaveSpeeds) -> Array:
    """Oscillation phase Lambda_a(xi) - mu Lambda_1(xi-eta) - nu Lambda_2(eta)."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    return (
        lam(a, xi, speeds)
        - signs.mu * lam(1, xi - eta, speeds)
        - signs.nu * lam(2, eta, speeds)
    )


# ---------------------------------------------------------------------------
# interaction symbol
# ---------------------------------------------------------------------------


def interaction_symbol(
    a: int,
    signs: SignPair,
    p: Array,
    eta: Array,
    speeds: WaveSpeeds,
    nf: NullFormSpec,
) -> Array:
    """Bilinear multiplier q^a_{mu nu}(p, eta) on input frequencies (p, eta).

    p is the frequency entering through the first factor (branch 1),
    eta through the second (branch 2).  Undefined when either vanishes.
    """
    _check_branch(a)
    p = np.asarray(p, dtype=float)
    eta = np.asarray(eta, dtype=float)
    l1p = lam(1, p, speeds)
    l2e = lam(2, eta, speeds)
    if np.any(l1p == 0.0):
        raise DomainError("interaction symbol is undefined at p = 0")
    if np.any(l2e == 0.0):
        raise DomainError("interaction symbol is undefined at eta = 0")

    mn = float(signs.product)
    denom = l1p * l2e
    q = nf.q00 * (0.25 + nf.x1_sign * mn * p[..., 0] * eta[..., 0] / (4.0 * denom))
    qij = nf.qij_array[a - 1]
    for i in range(2):
        for j in range(2):
            cij = qij[i, j]
            if cij != 0.0:
                q = q + (mn / 4.0) * cij * p[..., 1 + i] * eta[..., 1 + j] / denom
    return q.astype(np.complex128)


# ---------------------------------------------------------------------------
# sampled symbol validation
# ---------------------------------------------------------------------------


@dataclass
class SymbolBoundReport:
    """Scaled derivative bound of a coupling symbol over sampled shells.

    max_bound is the sup over sampled points, branches, sign pairs, and
    derivative multi-indices with |alpha| + |beta| <= max_order of
    2^(|alpha| k1 + |beta| k2) |d^alpha_xi d^beta_eta m(xi - eta, eta)|
    weighted by the three shell cutoffs in (xi, xi - eta, eta).  empty
    marks a shell triple with no admissible frequency pairs.
    """

    max_bound: float
    order0_max: float
    per_order: dict = field(default_factory=dict)
    flagged: bool = False
    empty: bool = False
    samples: int = 0
    derivative_samples: int = 0

    def summary(self) -> str:
        if self.empty:
            return "symbol bound: empty shell intersection"
        tag = " FLAGGED" if self.flagged else ""
        return (
            f"symbol bound {self.max_bound:.6g} "
            f"(order 0: {self.order0_max:.6g}, {self.samples} samples){tag}"
        )


def _sample_shell_pair(
    k: int, k1: int, k2: int, count: int, rng: np.random.Generator
) -> tuple[Array, Array]:
    """Draw (xi, eta) with |xi-eta|, |eta| in dyadic shells k1, k2 and
    |xi| in shell k, by rejection from the two input annuli.  Returns
    empty arrays when the triple admits no pairs."""
    lo1, hi1 = 5.0 * 2.0 ** (k1 - 3), 3.0 * 2.0 ** (k1 - 1)
    lo2, hi2 = 5.0 * 2.0 ** (k2 - 3), 3.0 * 2.0 ** (k2 - 1)
    lo, hi = 5.0 * 2.0 ** (k - 3), 3.0 * 2.0 ** (k - 1)
    if lo > hi1 + hi2 or hi < max(lo1 - hi2, lo2 - hi1):
        return np.empty((0, 3)), np.empty((0, 3))
    xs, es = [], []
    have = 0
    for _ in range(200):
        n = max(4 * count, 1024)
        u = rng.normal(size=(n, 3))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        r = (lo1 + (hi1 - lo1) * rng.random(n))[:, None]
        pvec = r * u
        v = rng.normal(size=(n, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        s = (lo2 + (hi2 - lo2) * rng.random(n))[:, None]
        evec = s * v
        xi = pvec + evec
        keep = (np.linalg.norm(xi, axis=1) >= lo) & (np.linalg.norm(xi, axis=1) <= hi)
        if keep.any():
            xs.append(xi[keep])
            es.append(evec[keep])
            have += int(keep.sum())
        if have >= count:
            break
    if have == 0:
        return np.empty((0, 3)), np.empty((0, 3))
    xi = np.concatenate(xs)[:count]
    eta = np.concatenate(es)[:count]
    return xi, eta


def _shell_weight(k: int, k1: int, k2: int) -> Callable[[Array], Array]:
    from .cutoffs import psi_k as _psi_k

    def weight(pts: Array) -> Array:
        x, e = pts[:, :3], pts[:, 3:]
        return (
            _psi_k(np.linalg.norm(x, axis=1), k)
            * _psi_k(np.linalg.norm(x - e, axis=1), k1)
            * _psi_k(np.linalg.norm(e, axis=1), k2)
        )

    return weight


def validate_nullform(
    nf: NullFormSpec | Callable[[Array, Array], Array],
    speeds: WaveSpeeds,
    k: int = 0,
    k1: int = 0,
    k2: int = 0,
    sample_count: int = 10_000,
    max_order: int = 4,
    flag_threshold: float = 10.0,
    derivative_samples: int = 256,
    seed: int = 0,
) -> SymbolBoundReport:
    """Estimate the scaled derivative sup of a coupling symbol on shells.

    When given a NullFormSpec, the probed symbol is the full bilinear
    multiplier q^a_{mu nu}, maximized over branches and sign pairs; a
    bare callable m(p, eta) is probed as-is.  Order-0 values use the
    full sample cloud; derivatives (composed central differences, step
    chosen per order) use a subsample since the stencil cost grows fast
    with order.  The sampled value is weighted by the shell cutoffs, so
    support edges where the symbol degenerates count with their cutoff
    damping, as in the estimates this is meant to probe.
    """
    if sample_count < 1:
        raise DomainError("sample_count must be >= 1")
    rng = np.random.default_rng(seed)
    xi, eta = _sample_shell_pair(k, k1, k2, sample_count, rng)
    n_samples = xi.shape[0]
    if n_samples == 0:
        return SymbolBoundReport(
            max_bound=0.0, order0_max=0.0, empty=True, samples=0
        )

    if isinstance(nf, NullFormSpec):
        spec_nf = nf
        branches = [
            (lambda p, e, a=a, s=s: interaction_symbol(a, s, p, e, speeds, spec_nf))
            for a in (1, 2)
            for s in SIGN_PAIRS
        ]
    else:
        raw = nf
        branches = [lambda p, e: np.asarray(raw(p, e), dtype=np.complex128)]

    weight = _shell_weight(k, k1, k2)
    pts_all = np.concatenate([xi, eta], axis=1)
    w_all = weight(pts_all)

    def on_pairs_for(func):
        def on_pairs(pts: Array) -> Array:
            x, e = pts[:, :3], pts[:, 3:]
            return np.asarray(func(x - e, e), dtype=np.complex128)

        return on_pairs

    order0 = max(
        float(np.max(np.abs(on_pairs_for(f)(pts_all)) * w_all)) for f in branches
    )

    n_sub = min(derivative_samples, n_samples)
    pts = pts_all[:n_sub]
    w_sub = w_all[:n_sub]
    scales = [2.0**k1] * 3 + [2.0**k2] * 3
    per_order: dict = {(0, 0): order0}
    best = order0
    for idx in multi_indices(6, max_order):
        na, nb = sum(idx[:3]), sum(idx[3:])
        if na == 0 and nb == 0:
            continue
        scaled = 0.0
        for f in branches:
            dvals = mixed_partial(on_pairs_for(f), pts, idx, scales)
            scaled = max(
                scaled,
                float(np.max(np.abs(dvals) * w_sub)) * 2.0 ** (na * k1 + nb * k2),
            )
        key = (na, nb)
        per_order[key] = max(per_order.get(key, 0.0), scaled)
        best = max(best, scaled)

    return SymbolBoundReport(
        max_bound=best,
        order0_max=order0,
        per_order=per_order,
        flagged=best > flag_threshold,
        samples=n_samples,
        derivative_samples=n_sub,
    )
