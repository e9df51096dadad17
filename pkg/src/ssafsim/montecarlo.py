"""Outage-probability estimation over independent channel draws.

Trials are addressed by ``(master_seed, trial_index)`` through the
counter-based stream in :mod:`ssafsim.channel`, so estimates are
bit-identical for any worker count or chunking and common random numbers
across grid points are a matter of reusing the master seed.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from . import cbc_ssaf, cma_ssaf
from .channel import SnrPoint, draw_cbc_batch, draw_cma_batch, draw_direct_batch
from .errors import ConfigurationError

STRATEGIES = ("direct", "cma-ssaf", "cbc-ssaf-isolated", "cbc-ssaf-exact")

_CHUNK = 1 << 16
_CHUNK_EXACT = 1 << 12  # dense per-trial models; keep the working set small
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class OutageEstimate:
    """Monte Carlo outage probability with a Wilson score interval."""

    p_hat: float
    trials: int
    failures: int
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class SweepSpec:
    """A grid of outage estimation points for one strategy.

    ``snr_grid`` entries are :class:`SnrPoint`; ``rate_grid`` entries are
    per-slot spectral efficiencies in BPCU.  ``receiver_l`` applies to
    the CBC strategies only and defaults to the worst-case position
    ceil(N/2).  With ``crn`` every grid point reuses the same per-trial
    seeds, which couples the draws across the grid.
    """

    strategy: str
    size: int
    snr_grid: tuple[SnrPoint, ...]
    rate_grid: tuple[float, ...]
    trials: int
    master_seed: int
    receiver_l: int | None = None
    confidence: float = 0.95
    reciprocal: bool | None = None
    crn: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ConfigurationError(
                f"unknown strategy {self.strategy!r}; choose from {STRATEGIES}"
            )
        if not self.snr_grid or not self.rate_grid:
            raise ConfigurationError("SNR and rate grids must be nonempty")
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if any(r <= 0.0 for r in self.rate_grid):
            raise ConfigurationError("rates must be positive")
        if not 0.0 < self.confidence < 1.0:
            raise ConfigurationError("confidence must be in (0, 1)")
        if self.strategy.startswith("cbc") and self.size < 2:
            raise ConfigurationError("CBC needs size >= 2")
        if self.strategy == "cma-ssaf" and self.size < 2:
            raise ConfigurationError("CMA needs size >= 2")
        if self.receiver_l is not None:
            if not self.strategy.startswith("cbc"):
                raise ConfigurationError("receiver_l only applies to CBC strategies")
            if not 1 <= self.receiver_l <= self.size:
                raise ConfigurationError(
                    f"receiver_l must be in 1..{self.size}, got {self.receiver_l}"
                )


def default_receiver(strategy: str, size: int) -> int | None:
    if strategy.startswith("cbc"):
        return math.ceil(size / 2)
    return None


def _default_reciprocal(strategy: str) -> bool:
    # CBC scheduling presumes reciprocity; CMA draws are independent per
    # direction unless asked otherwise.  Mirrors the channel-module defaults.
    return strategy.startswith("cbc")


def frame_slots(strategy: str, size: int) -> int:
    """Number of slots in one cooperation frame (rate multiplier)."""
    if strategy == "direct":
        return 1
    if strategy == "cma-ssaf":
        return 2 * size
    if strategy in ("cbc-ssaf-isolated", "cbc-ssaf-exact"):
        return size + 1
    raise ConfigurationError(f"unknown strategy {strategy!r}")


def frame_bits(
    strategy: str,
    size: int,
    rho: SnrPoint,
    master_seed: int,
    start: int,
    count: int,
    *,
    receiver_l: int | None = None,
    reciprocal: bool | None = None,
) -> np.ndarray:
    """Frame mutual information for trials [start, start+count).

    Per-trial pipeline: channel draw, relay pre-ordering for CBC,
    effective-channel construction, log-det mutual information.  Values
    depend only on (master_seed, trial index) and the configuration.
    """
    r = rho.rho
    if reciprocal is None:
        reciprocal = _default_reciprocal(strategy)
    if strategy == "direct":
        h = draw_direct_batch(master_seed, start, count)
        return np.log1p(r * np.abs(h) ** 2) / _LN2
    if strategy == "cma-ssaf":
        src, s2s = draw_cma_batch(size, master_seed, start, count, reciprocal)
        return cma_ssaf.cma_frame_bits_batch(src, s2s, r)
    if strategy in ("cbc-ssaf-isolated", "cbc-ssaf-exact"):
        ell = receiver_l if receiver_l is not None else default_receiver(strategy, size)
        src, d2d = draw_cbc_batch(size, master_seed, start, count, reciprocal)
        orders = cbc_ssaf.preorder_batch(np.abs(src), np.abs(d2d))
        mode = "isolated" if strategy.endswith("isolated") else "exact"
        return cbc_ssaf.cbc_frame_bits_batch(src, d2d, orders, ell, r, mode)
    raise ConfigurationError(f"unknown strategy {strategy!r}")


def outage_flags(
    strategy: str,
    size: int,
    rho: SnrPoint,
    rate_bpcu: float,
    master_seed: int,
    start: int,
    count: int,
    *,
    receiver_l: int | None = None,
    reciprocal: bool | None = None,
) -> np.ndarray:
    """Boolean outage indicators for a contiguous block of trials."""
    bits = frame_bits(
        strategy, size, rho, master_seed, start, count,
        receiver_l=receiver_l, reciprocal=reciprocal,
    )
    return bits < frame_slots(strategy, size) * rate_bpcu


def wilson_interval(failures: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Preferred over the normal approximation because outage probabilities
    sit near 0 at high SNR.
    """
    if trials < 1:
        raise ConfigurationError("trials must be >= 1")
    if not 0 <= failures <= trials:
        raise ConfigurationError("failures must be in [0, trials]")
    z = norm.ppf(0.5 * (1.0 + confidence))
    p = failures / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    # the score interval always contains the MLE; the min/max against p
    # only removes roundoff dust at the p = 0 and p = 1 boundaries
    lo = max(0.0, min(center - half, p))
    hi = min(1.0, max(center + half, p))
    return float(lo), float(hi)


def _chunk_ranges(trials: int, chunk: int):
    return [(s, min(chunk, trials - s)) for s in range(0, trials, chunk)]


def estimate_outage(
    strategy: str,
    size: int,
    rho: SnrPoint,
    rate_bpcu: float,
    trials: int,
    master_seed: int,
    *,
    receiver_l: int | None = None,
    confidence: float = 0.95,
    reciprocal: bool | None = None,
    workers: int = 1,
) -> OutageEstimate:
    """Estimate the outage probability at one (strategy, SNR, rate) point.

    The failure count is a sum over fixed trial chunks, each generated
    from its own counter window, so the result is identical for any
    ``workers`` value.
    """
    if strategy not in STRATEGIES:
        raise ConfigurationError(
            f"unknown strategy {strategy!r}; choose from {STRATEGIES}"
        )
    if trials < 1:
        raise ConfigurationError("trials must be >= 1")
    if not rate_bpcu > 0.0:
        raise ConfigurationError("rate must be positive")
    chunk = _CHUNK_EXACT if strategy == "cbc-ssaf-exact" else _CHUNK

    def count_failures(rng: tuple[int, int]) -> int:
        start, count = rng
        flags = outage_flags(
            strategy, size, rho, rate_bpcu, master_seed, start, count,
            receiver_l=receiver_l, reciprocal=reciprocal,
        )
        return int(np.count_nonzero(flags))

    ranges = _chunk_ranges(trials, chunk)
    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            failures = sum(pool.map(count_failures, ranges))
    else:
        failures = sum(map(count_failures, ranges))
    lo, hi = wilson_interval(failures, trials, confidence)
    return OutageEstimate(
        p_hat=failures / trials, trials=trials, failures=failures, ci_low=lo, ci_high=hi
    )


def point_seed(master_seed: int, snr_index: int, rate_index: int, crn: bool) -> int:
    """Master seed for one grid point.

    With common random numbers every point shares ``master_seed`` (same
    per-trial draws everywhere); otherwise each point gets an
    independent 64-bit seed spawned from (master_seed, snr_index,
    rate_index) via numpy's SeedSequence.
    """
    if crn:
        return master_seed
    ss = np.random.SeedSequence(master_seed, spawn_key=(snr_index, rate_index))
    return int(ss.generate_state(1, np.uint64)[0])


def run_sweep(spec: SweepSpec) -> dict[tuple[float, float], OutageEstimate]:
    """Evaluate the Cartesian product of the SNR and rate grids.

    Returns estimates keyed by (snr_db, rate_bpcu).
    """
    results: dict[tuple[float, float], OutageEstimate] = {}
    for i, snr in enumerate(spec.snr_grid):
        for j, rate in enumerate(spec.rate_grid):
            seed = point_seed(spec.master_seed, i, j, spec.crn)
            results[(snr.rho_db, rate)] = estimate_outage(
                spec.strategy,
                spec.size,
                snr,
                rate,
                spec.trials,
                seed,
                receiver_l=spec.receiver_l,
                confidence=spec.confidence,
                reciprocal=spec.reciprocal,
                workers=spec.workers,
            )
    return results
