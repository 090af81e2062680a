"""Fading, interference covariance and the exact MMSE output SIR.

For a representative channel vector g_T and interference covariance
R = sum_i w_i g_i g_i^H (w_i the received power weight of active node i),
the linear combiner maximizing output SIR is w = R^{-1} g_T and the achieved
SIR is (signal power) * g_T^H R^{-1} g_T.  The module also supplies the
eigenvalue and empirical-distribution utilities the limit theory is checked
against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .pointproc import as_generator

__all__ = [
    "SingularCovariance",
    "FadingSet",
    "SirSample",
    "EmpiricalDistribution",
    "draw_fading",
    "interference_covariance",
    "mmse_sir",
    "min_eigenvalue",
    "edf",
    "ks_distance",
    "scaled_received_powers",
]

# beyond this spectral condition number a realization is redrawn rather than
# trusted to a Cholesky solve
CONDITION_CAP = 1e12

_HERMITIAN_TOL = 1e-10


class SingularCovariance(Exception):
    """Interference covariance is singular or too ill-conditioned to invert."""


@dataclass
class FadingSet:
    """Representative channel g_t (N,) and interferer fading matrix (N, count).

    Entries are i.i.d. circularly symmetric complex Gaussian with unit
    variance (real and imaginary parts each carry variance 1/2).
    """

    g_t: np.ndarray
    interferers: np.ndarray

    @property
    def n_branches(self) -> int:
        return self.g_t.shape[0]


@dataclass
class SirSample:
    """Output of one realization: linear SIR, its normalization, and the rate.

    beta_n = N^{-alpha/2} r_T^alpha * sir; rate = log2(1 + sir) bits/symbol.
    """

    sir: float
    beta_n: float
    rate: float
    active_count: int = 0
    redraw_count: int = 0


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) / math.sqrt(2.0)


def draw_fading(n_branches: int, count: int, seed) -> FadingSet:
    """Draw the representative channel, then `count` interferer columns.

    Deterministic given the seed; the representative block always comes first
    so the stream layout is independent of the interferer count.
    """
    if n_branches < 1:
        raise ValueError(f"n_branches must be >= 1, got {n_branches}")
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    rng = as_generator(seed)
    g_t = _complex_normal(rng, n_branches)
    interferers = _complex_normal(rng, (n_branches, count))
    return FadingSet(g_t=g_t, interferers=interferers)


def interference_covariance(interferers: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """R = sum_i weights[i] g_i g_i^H, Hermitian positive semidefinite.

    weights[i] is the received power of active node i at the reference
    branch: r_i^-alpha for unit transmit power, r_b^alpha r_i^-alpha under
    cellular power control.
    """
    interferers = np.asarray(interferers)
    weights = np.asarray(weights, dtype=float)
    if interferers.ndim != 2:
        raise ValueError("interferer matrix must be (n_branches, count)")
    if weights.shape != (interferers.shape[1],):
        raise ValueError("one weight per interferer column required")
    cov = np.einsum("ik,k,jk->ij", interferers, weights, interferers.conj())
    return 0.5 * (cov + cov.conj().T)  # clear rounding asymmetry


def mmse_sir(
    g_t: np.ndarray,
    cov: np.ndarray,
    r_t: float,
    alpha: float,
    n_branches: int | None = None,
    signal_weight: float = 1.0,
    active_count: int = 0,
) -> SirSample:
    """Exact MMSE output SIR for one realization.

    sir = signal_weight * r_t^-alpha * g_t^H cov^{-1} g_t, solved through a
    Hermitian Cholesky factorization (never an explicit inverse).  The
    default signal_weight of 1 is the unit-transmit-power case; a
    power-controlled representative passes r_t^alpha, making the received
    signal power 1.

    Raises SingularCovariance when the covariance is not positive definite
    or its condition number exceeds CONDITION_CAP; the caller is expected to
    redraw the realization.
    """
    g_t = np.asarray(g_t)
    cov = np.asarray(cov)
    n = g_t.shape[0]
    if n_branches is None:
        n_branches = n
    if cov.shape != (n, n):
        raise ValueError(f"covariance shape {cov.shape} does not match g_t ({n},)")

    evals = np.linalg.eigvalsh(cov)
    if evals[0] <= 0.0 or evals[-1] / evals[0] > CONDITION_CAP:
        raise SingularCovariance(
            f"covariance spectrum [{evals[0]:.3g}, {evals[-1]:.3g}] unusable"
        )
    try:
        cho = linalg.cho_factor(cov, lower=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - caught above
        raise SingularCovariance(str(exc)) from exc
    quad = np.vdot(g_t, linalg.cho_solve(cho, g_t))
    sir = float(signal_weight * r_t ** -alpha * quad.real)
    beta_n = float(n_branches) ** (-alpha / 2.0) * r_t ** alpha * sir
    return SirSample(
        sir=sir,
        beta_n=beta_n,
        rate=math.log2(1.0 + sir),
        active_count=active_count,
    )


def min_eigenvalue(mat: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix.

    Rejects inputs whose asymmetry exceeds 1e-10 (relative to the largest
    entry) instead of silently symmetrizing them.
    """
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"square matrix required, got shape {mat.shape}")
    scale = max(1.0, float(np.abs(mat).max()))
    asym = float(np.abs(mat - mat.conj().T).max())
    if asym > _HERMITIAN_TOL * scale:
        raise ValueError(f"matrix is not Hermitian (asymmetry {asym:.3g})")
    return float(np.linalg.eigvalsh(mat)[0])


class EmpiricalDistribution:
    """Right-continuous step function F(x) = #{v_i <= x} / n."""

    def __init__(self, values: np.ndarray):
        values = np.asarray(values, dtype=float).ravel()
        if values.size == 0:
            raise ValueError("empirical distribution needs at least one value")
        self._sorted = np.sort(values)
        self.n = values.size

    def __call__(self, x):
        idx = np.searchsorted(self._sorted, x, side="right")
        out = idx / self.n
        if np.isscalar(x):
            return float(out)
        return out

    @property
    def values(self) -> np.ndarray:
        return self._sorted

    def atom_at_zero(self) -> float:
        """Probability mass sitting exactly at zero."""
        return float(np.count_nonzero(self._sorted == 0.0)) / self.n


def edf(values) -> EmpiricalDistribution:
    """Empirical distribution function of a sample (zeros of muted nodes included)."""
    return EmpiricalDistribution(values)


def ks_distance(empirical: EmpiricalDistribution, reference, grid) -> float:
    """max_x |F_n(x) - H(x)| over the supplied evaluation grid."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid must be non-empty")
    return float(np.max(np.abs(empirical(grid) - reference(grid))))


def scaled_received_powers(
    positions: np.ndarray, power_weight: np.ndarray, n_branches: int, alpha: float
) -> np.ndarray:
    """p_i = N^{alpha/2} w_i r_i^-alpha over all potential nodes.

    Muted nodes (weight 0) contribute exact zeros; for unit-power models the
    weights are the 0/1 activity indicators, so this is the quantity whose
    empirical distribution converges to the limit law.
    """
    r = np.hypot(positions[:, 0], positions[:, 1])
    return float(n_branches) ** (alpha / 2.0) * power_weight * r ** -alpha
