"""Seeded, parallel replication of network realizations and their statistics.

An experiment is a sweep over diversity orders (and optionally model
variants) of a base network configuration.  Every realization's random
stream is derived from (master_seed, point_index, replication_index,
attempt) through numpy SeedSequence spawn keys on a counter-based bit
generator, so results are bitwise identical for any worker count and any
execution order.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import asymptotics, mmse, pointproc
from .mmse import SingularCovariance, SirSample
from .pointproc import ModelSpec, NetworkConfig

__all__ = [
    "RealizationFailed",
    "ExperimentSpec",
    "PointResult",
    "ExperimentReport",
    "StatSummary",
    "derive_seed",
    "run_realization",
    "run_experiment",
    "summarize",
    "density_estimate",
    "aip_statistic",
    "realize_scaled_powers",
]

MAX_REDRAWS = 100


class RealizationFailed(Exception):
    """Every redraw produced a singular covariance (c * nu too close to 1)."""


def derive_seed(
    master_seed: int, point_index: int, replication_index: int
) -> np.random.SeedSequence:
    """Collision-free per-realization seed within an experiment."""
    return np.random.SeedSequence(
        entropy=master_seed, spawn_key=(point_index, replication_index)
    )


def _attempt_rng(base: np.random.SeedSequence, attempt: int) -> np.random.Generator:
    ss = np.random.SeedSequence(
        entropy=base.entropy, spawn_key=tuple(base.spawn_key) + (attempt,)
    )
    return np.random.Generator(np.random.Philox(ss))


def run_realization(config: NetworkConfig, seed) -> SirSample:
    """One full pipeline pass: positions -> activation -> fading -> SIR.

    On a singular interference covariance the entire realization (positions
    and fading) is redrawn from a fresh substream, up to MAX_REDRAWS times,
    and the number of redraws is recorded on the sample.  No diagonal
    loading is applied anywhere: that would quietly turn the SIR into an
    SINR and bias comparisons against the noise-free theory.
    """
    if isinstance(seed, np.random.SeedSequence):
        base = seed
    else:
        base = np.random.SeedSequence(entropy=int(seed))
    alpha = config.alpha
    for attempt in range(MAX_REDRAWS + 1):
        rng = _attempt_rng(base, attempt)
        real = pointproc.realize(config, rng)
        act = real.active
        radii = real.radii()[act]
        weights = real.power_weight[act] * radii ** -alpha
        fading = mmse.draw_fading(config.n_branches, int(act.sum()), rng)
        cov = mmse.interference_covariance(fading.interferers, weights)
        signal_weight = (
            config.r_t ** alpha
            if (config.model.name == "cellular" and config.model.power_control)
            else 1.0
        )
        try:
            sample = mmse.mmse_sir(
                fading.g_t,
                cov,
                config.r_t,
                alpha,
                n_branches=config.n_branches,
                signal_weight=signal_weight,
                active_count=int(act.sum()),
            )
        except SingularCovariance:
            continue
        return replace(sample, redraw_count=attempt)
    raise RealizationFailed(
        f"{MAX_REDRAWS} consecutive singular redraws for N={config.n_branches}, "
        f"model={config.model.name!r}; c * nu is likely too close to 1"
    )


# ---------------------------------------------------------------------------
# experiment sweep
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentSpec:
    """A sweep: one point per (model variant, N) pair, in that order.

    variants defaults to just the base model.  Per-realization seeds are
    derived from (master_seed, point index, replication index).
    """

    base: NetworkConfig
    n_values: tuple[int, ...]
    replications: int
    master_seed: int
    variants: tuple[ModelSpec, ...] | None = None

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if len(self.n_values) == 0:
            raise ValueError("sweep needs at least one N value")

    def point_configs(self) -> list[NetworkConfig]:
        variants = self.variants if self.variants else (self.base.model,)
        return [
            replace(self.base, model=variant, n_branches=int(n))
            for variant in variants
            for n in self.n_values
        ]


@dataclass
class StatSummary:
    mean: float
    std: float | None  # None when count == 1
    count: int
    min: float
    max: float

    @property
    def sem(self) -> float | None:
        if self.std is None:
            return None
        return self.std / math.sqrt(self.count)


def summarize(values) -> StatSummary:
    """Mean, unbiased (n-1) standard deviation, count, min, max."""
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        raise ValueError("cannot summarize an empty sample")
    std = float(np.std(arr, ddof=1)) if arr.size > 1 else None
    return StatSummary(
        mean=float(arr.mean()),
        std=std,
        count=int(arr.size),
        min=float(arr.min()),
        max=float(arr.max()),
    )


@dataclass
class PointResult:
    """Aggregated statistics of one sweep point."""

    config: NetworkConfig
    rate: StatSummary | None
    sir: StatSummary | None
    empirical_density: float | None
    predicted_density: float
    asymptote_rate: float | None
    rel_gap: float | None
    redraw_total: int
    failed: bool

    @property
    def n_branches(self) -> int:
        return self.config.n_branches


@dataclass
class ExperimentReport:
    """All sweep points plus the metadata needed to reproduce them."""

    points: list[PointResult]
    master_seed: int
    replications: int
    wall_time_s: float
    code_version: str = field(default="")


def predicted_rate(config: NetworkConfig) -> float | None:
    """Asymptotic mean-rate prediction for one parameter point.

    Models with unit transmit power use the density-parameterized rate
    formula; the power-controlled cellular prediction is the cell-edge
    expression (its derivation places the representative at the cell
    circumradius, the only power-controlled regime with a closed form).
    None for a degenerate model whose limiting active density is zero.
    """
    spec = config.model
    if spec.name == "cellular" and spec.power_control:
        return asymptotics.cell_edge_rate(
            config.n_branches,
            spec.kappa,
            config.alpha,
            config.rho_p,
            spec.rho_c,
            power_control=True,
        )
    rho = config.predicted_density()
    if rho <= 0.0:
        return None
    return asymptotics.rate_approx(config.n_branches, rho, config.alpha, config.r_t)


def _run_point_rep(args) -> tuple[int, int, SirSample | None]:
    config, master_seed, point_idx, rep_idx = args
    try:
        sample = run_realization(config, derive_seed(master_seed, point_idx, rep_idx))
    except RealizationFailed:
        return point_idx, rep_idx, None
    return point_idx, rep_idx, sample


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> ExperimentReport:
    """Execute all points x replications and aggregate deterministically.

    Replications are independent work items; with workers > 1 they run on a
    process pool.  Aggregation happens in (point, replication) index order,
    so the emitted numbers never depend on the execution schedule.  A point
    whose replication fails is flagged and reported with empty statistics;
    the remaining points still run.
    """
    from . import __version__

    t0 = time.perf_counter()
    configs = spec.point_configs()
    tasks = [
        (cfg, spec.master_seed, pi, ri)
        for pi, cfg in enumerate(configs)
        for ri in range(spec.replications)
    ]
    if workers > 1:
        chunk = max(1, len(tasks) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_run_point_rep, tasks, chunksize=chunk))
    else:
        raw = [_run_point_rep(t) for t in tasks]

    by_point: dict[int, dict[int, SirSample | None]] = {}
    for pi, ri, sample in raw:
        by_point.setdefault(pi, {})[ri] = sample

    points = []
    for pi, cfg in enumerate(configs):
        samples_by_rep = by_point.get(pi, {})
        ordered = [samples_by_rep[ri] for ri in sorted(samples_by_rep)]
        failed = any(s is None for s in ordered)
        good = [s for s in ordered if s is not None]
        predicted = cfg.predicted_density()
        asym = predicted_rate(cfg)
        if failed or not good:
            points.append(
                PointResult(
                    config=cfg,
                    rate=None,
                    sir=None,
                    empirical_density=None,
                    predicted_density=predicted,
                    asymptote_rate=asym,
                    rel_gap=None,
                    redraw_total=sum(s.redraw_count for s in good),
                    failed=True,
                )
            )
            continue
        rate = summarize(s.rate for s in good)
        sir = summarize(s.sir for s in good)
        area = math.pi * cfg.radius ** 2
        emp_density = float(np.mean([s.active_count for s in good])) / area
        rel_gap = abs(rate.mean - asym) / asym if asym else None
        points.append(
            PointResult(
                config=cfg,
                rate=rate,
                sir=sir,
                empirical_density=emp_density,
                predicted_density=predicted,
                asymptote_rate=asym,
                rel_gap=rel_gap,
                redraw_total=sum(s.redraw_count for s in good),
                failed=False,
            )
        )
    return ExperimentReport(
        points=points,
        master_seed=spec.master_seed,
        replications=spec.replications,
        wall_time_s=time.perf_counter() - t0,
        code_version=__version__,
    )


# ---------------------------------------------------------------------------
# position-only estimators (no fading)
# ---------------------------------------------------------------------------

def density_estimate(config: NetworkConfig, replications: int, master_seed: int) -> float:
    """Mean active count over replications divided by the network area."""
    if replications < 1:
        raise ValueError("replications must be >= 1")
    counts = [
        pointproc.realize(config, derive_seed(master_seed, 0, ri)).active_count
        for ri in range(replications)
    ]
    return float(np.mean(counts)) / (math.pi * config.radius ** 2)


def realize_scaled_powers(config: NetworkConfig, seed) -> np.ndarray:
    """Scaled received powers N^{alpha/2} P_i r_i^-alpha of one realization."""
    real = pointproc.realize(config, seed)
    return mmse.scaled_received_powers(
        real.positions, real.power_weight, config.n_branches, config.alpha
    )


def aip_statistic(
    config: NetworkConfig, x: float, n_seeds: int, master_seed: int
) -> float:
    """Average pairwise dependence of scaled received powers at level x.

    The double sum (1/n^2) sum_ij [P(p_i <= x, p_j <= x) - P(p_i <= x) P(p_j <= x)]
    equals the variance of the empirical distribution evaluated at x, so it
    is estimated as the across-seed sample variance of H_n(x).  It must
    shrink as the network grows for the SIR limit to apply.
    """
    vals = np.empty(n_seeds)
    for s in range(n_seeds):
        p = realize_scaled_powers(config, derive_seed(master_seed, 0, s))
        vals[s] = np.count_nonzero(p <= x) / p.size
    return float(np.var(vals, ddof=1))
