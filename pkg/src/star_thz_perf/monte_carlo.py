"""Empirical link metrics by direct end-to-end channel sampling.

Per trial the module draws one fading envelope per surface element,
forms the weighted coherent sums for both sides, and averages outage
indicators or instantaneous capacities over the scenario's power grid.

Determinism contract: every (seed, grid point, trial block) triple maps
to its own counter-based Philox stream, and block partials are merged
in index order, so estimates are bit-identical for any worker count.
The scenario object only needs the attributes used here: ``weights``,
``indoor_fading``, ``outdoor_mixture``, ``outdoor_truth``,
``outdoor_rician_k``, and ``power_grid``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

import numpy as np

from .dist_alpha_mu import alpha_mu_sample
from .dist_mixture import mog_sample, rician_sample
from .errors import ConfigurationError, DomainError
from .performance import OutageThresholds, sidnr

if TYPE_CHECKING:
    from .cli_runner import StarRisScenario

__all__ = [
    "SimulationPlan",
    "EmpiricalResult",
    "sample_e2e",
    "estimate_op",
    "estimate_ec",
    "ks_distance",
]

BLOCK_TRIALS = 1 << 16
UNRELIABLE_HITS = 50

_ACCESS_MODES = ("noma", "oma")


@dataclass(frozen=True)
class SimulationPlan:
    """Trial budget and stream keying for one empirical run."""

    scenario: "StarRisScenario"
    trials: int
    seed: int
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ConfigurationError(f"trials must be positive, got {self.trials!r}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be positive, got {self.workers!r}")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError(f"seed must fit in 64 bits, got {self.seed!r}")


@dataclass(frozen=True)
class EmpiricalResult:
    """Per-grid-point estimates with their sampling uncertainty.

    ``unreliable`` marks outage points backed by fewer than
    ``UNRELIABLE_HITS`` observed events; capacity rows never set it.
    """

    metric: str
    power_w: np.ndarray
    indoor: np.ndarray
    outdoor: np.ndarray
    indoor_se: np.ndarray
    outdoor_se: np.ndarray
    trials: int
    indoor_unreliable: np.ndarray
    outdoor_unreliable: np.ndarray

    def __post_init__(self) -> None:
        if self.metric not in ("op", "ec"):
            raise ConfigurationError(f"metric must be op or ec, got {self.metric!r}")
        shape = None
        for name in (
            "power_w",
            "indoor",
            "outdoor",
            "indoor_se",
            "outdoor_se",
            "indoor_unreliable",
            "outdoor_unreliable",
        ):
            dtype = bool if name.endswith("unreliable") else float
            arr = np.asarray(getattr(self, name), dtype=dtype)
            if shape is None:
                shape = arr.shape
            elif arr.shape != shape:
                raise ConfigurationError(f"{name} shape {arr.shape} != {shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.any(self.indoor_se < 0.0) or np.any(self.outdoor_se < 0.0):
            raise ConfigurationError("standard errors must be nonnegative")
        if self.metric == "op":
            for arr in (self.indoor, self.outdoor):
                if np.any((arr < 0.0) | (arr > 1.0)):
                    raise ConfigurationError("op estimates must lie in [0, 1]")


def _resolve_workers(requested: int) -> int:
    cap = os.environ.get("STAR_THZ_THREADS")
    if cap is None:
        return requested
    try:
        cap_value = int(cap)
    except ValueError:
        raise ConfigurationError(f"STAR_THZ_THREADS must be an integer, got {cap!r}")
    if cap_value < 1:
        raise ConfigurationError(f"STAR_THZ_THREADS must be positive, got {cap!r}")
    return min(requested, cap_value)


def _outdoor_envelopes(scenario, rng: np.random.Generator, size):
    truth = scenario.outdoor_truth
    if truth == "mixture":
        return mog_sample(scenario.outdoor_mixture, rng, size=size)
    if truth == "rician":
        return rician_sample(scenario.outdoor_rician_k, rng, size=size)
    raise ConfigurationError(
        f"outdoor_truth must be 'mixture' or 'rician', got {truth!r}"
    )


def _e2e_block(scenario, user: str, rng: np.random.Generator, n: int) -> np.ndarray:
    weights = scenario.weights.indoor if user == "indoor" else scenario.weights.outdoor
    active = np.flatnonzero(weights > 0.0)
    if active.size == 0:
        return np.zeros(n)
    if user == "indoor":
        env = alpha_mu_sample(scenario.indoor_fading, rng, size=(n, active.size))
    else:
        env = _outdoor_envelopes(scenario, rng, (n, active.size))
    return env @ weights[active]


def sample_e2e(scenario, user: str, rng: np.random.Generator, size=None):
    """Coherent end-to-end channel magnitude draws for one side."""
    if user not in ("indoor", "outdoor"):
        raise ConfigurationError(f"user must be indoor or outdoor, got {user!r}")
    out = _e2e_block(scenario, user, rng, 1 if size is None else int(size))
    return float(out[0]) if size is None else out


def _block_sizes(trials: int) -> list:
    full, rem = divmod(trials, BLOCK_TRIALS)
    return [BLOCK_TRIALS] * full + ([rem] if rem else [])


def _run_blocks(plan: SimulationPlan, task: Callable) -> list:
    """Evaluate ``task(rng, n, pc)`` per (grid point, block).

    Returns, per grid point, the block partials in block order; any
    reduction over them is then worker-count independent.
    """
    grid = tuple(plan.scenario.power_grid)
    if not grid:
        raise ConfigurationError("scenario power grid is empty")
    sizes = _block_sizes(plan.trials)
    root = np.random.SeedSequence(plan.seed)
    jobs = []
    for g, grid_seq in enumerate(root.spawn(len(grid))):
        for k, block_seq in enumerate(grid_seq.spawn(len(sizes))):
            jobs.append((g, k, block_seq, sizes[k]))

    def run(job):
        g, k, seq, n = job
        rng = np.random.Generator(np.random.Philox(seq))
        return g, k, task(rng, n, grid[g])

    workers = _resolve_workers(plan.workers)
    if workers == 1:
        done = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(run, jobs))
    partials = [[None] * len(sizes) for _ in grid]
    for g, k, value in done:
        partials[g][k] = value
    return partials


def _check_access(access: str) -> None:
    if access not in _ACCESS_MODES:
        raise ConfigurationError(f"access must be one of {_ACCESS_MODES}, got {access!r}")


def estimate_op(
    plan: SimulationPlan,
    thresholds: OutageThresholds,
    access: str = "noma",
) -> EmpiricalResult:
    """Outage frequencies over the power grid.

    Under NOMA the indoor side is in outage unless it clears both the
    cancellation stage and its own decoding stage; the outdoor side and
    both orthogonal slots are single-threshold events.
    """
    _check_access(access)
    scenario = plan.scenario

    def task(rng, n, pc):
        h_in = _e2e_block(scenario, "indoor", rng, n)
        h_out = _e2e_block(scenario, "outdoor", rng, n)
        sq_in, sq_out = h_in * h_in, h_out * h_out
        if access == "noma":
            ok_in = (sidnr("indoor_sic", sq_in, pc) > thresholds.outdoor) & (
                sidnr("indoor_own", sq_in, pc) > thresholds.indoor
            )
            ok_out = sidnr("outdoor", sq_out, pc) > thresholds.outdoor
        else:
            ok_in = sidnr("oma_indoor", sq_in, pc) > thresholds.indoor
            ok_out = sidnr("oma_outdoor", sq_out, pc) > thresholds.outdoor
        return np.array([n - ok_in.sum(), n - ok_out.sum()], dtype=np.int64)

    hits = np.array([np.sum(blocks, axis=0) for blocks in _run_blocks(plan, task)])
    n = plan.trials
    rate = hits / n
    spread = np.sqrt(rate * (1.0 - rate) * n / max(n - 1, 1))
    return EmpiricalResult(
        metric="op",
        power_w=np.array([pc.power_w for pc in plan.scenario.power_grid]),
        indoor=rate[:, 0],
        outdoor=rate[:, 1],
        indoor_se=spread[:, 0] / np.sqrt(n),
        outdoor_se=spread[:, 1] / np.sqrt(n),
        trials=n,
        indoor_unreliable=hits[:, 0] < UNRELIABLE_HITS,
        outdoor_unreliable=hits[:, 1] < UNRELIABLE_HITS,
    )


def estimate_ec(plan: SimulationPlan, access: str = "noma") -> EmpiricalResult:
    """Mean instantaneous capacity per side over the power grid."""
    _check_access(access)
    scenario = plan.scenario

    def task(rng, n, pc):
        h_in = _e2e_block(scenario, "indoor", rng, n)
        h_out = _e2e_block(scenario, "outdoor", rng, n)
        sq_in, sq_out = h_in * h_in, h_out * h_out
        if access == "noma":
            c_in = np.log2(1.0 + sidnr("indoor_own", sq_in, pc))
            c_out = np.log2(1.0 + sidnr("outdoor", sq_out, pc))
        else:
            c_in = 0.5 * np.log2(1.0 + sidnr("oma_indoor", sq_in, pc))
            c_out = 0.5 * np.log2(1.0 + sidnr("oma_outdoor", sq_out, pc))
        return np.array(
            [
                [c_in.sum(), np.dot(c_in, c_in)],
                [c_out.sum(), np.dot(c_out, c_out)],
            ]
        )

    n = plan.trials
    means = np.empty((len(plan.scenario.power_grid), 2))
    errors = np.empty_like(means)
    for g, blocks in enumerate(_run_blocks(plan, task)):
        total = blocks[0].copy()
        for block in blocks[1:]:
            total += block
        mean = total[:, 0] / n
        var = np.maximum(total[:, 1] - n * mean**2, 0.0) / max(n - 1, 1)
        means[g] = mean
        errors[g] = np.sqrt(var / n)
    flags = np.zeros(len(means), dtype=bool)
    return EmpiricalResult(
        metric="ec",
        power_w=np.array([pc.power_w for pc in plan.scenario.power_grid]),
        indoor=means[:, 0],
        outdoor=means[:, 1],
        indoor_se=errors[:, 0],
        outdoor_se=errors[:, 1],
        trials=n,
        indoor_unreliable=flags,
        outdoor_unreliable=flags.copy(),
    )


def _cdf_at(analytic_cdf: Callable, x: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(analytic_cdf(x), dtype=float)
        if values.shape != x.shape:
            raise ValueError
    except (TypeError, ValueError):
        values = np.array([float(analytic_cdf(v)) for v in x])
    if np.any((values < -1e-12) | (values > 1.0 + 1e-12)):
        raise DomainError("analytic_cdf must return values in [0, 1]")
    return values


def ks_distance(samples, analytic_cdf: Callable, points: int | None = None) -> float:
    """Sup-norm gap between the empirical CDF and a callable CDF.

    With ``points`` set, the CDF is evaluated only on that many sample
    quantiles and the returned value is an upper bound on the true gap
    (both CDFs are monotone, so each inter-grid cell is bracketed by its
    endpoints). The bound exceeds the exact distance by at most roughly
    2/points; use it when one CDF evaluation is expensive.
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise DomainError("ks_distance needs at least one sample")
    n = x.size
    if points is None or points >= n:
        values = _cdf_at(analytic_cdf, x)
        steps = np.arange(n, dtype=float)
        gap = max(
            float(np.max(values - steps / n)),
            float(np.max((steps + 1.0) / n - values)),
        )
        return min(max(gap, 0.0), 1.0)
    if points < 2:
        raise ConfigurationError(f"points must be at least 2, got {points!r}")
    idx = np.unique(np.linspace(0, n - 1, points).round().astype(int))
    values = _cdf_at(analytic_cdf, x[idx])
    exact = np.max(
        np.maximum(values - idx / n, (idx + 1.0) / n - values)
    )
    gap = max(
        float(np.max(values[1:] - idx[:-1] / n)),
        float(np.max((idx[1:] + 1.0) / n - values[:-1])),
        float(exact),
    )
    return min(max(gap, 0.0), 1.0)
