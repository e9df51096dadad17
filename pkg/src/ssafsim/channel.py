"""Quasi-static flat Rayleigh-fading channel draws with counter-based seeding.

Every physical link gain is an independent circularly-symmetric complex
Gaussian with unit variance, so squared magnitudes are Exp(1).  Noise is
normalized to unit variance everywhere; all transmit power is carried by
the linear SNR ``rho``.

Reproducibility model
---------------------
Draws are keyed by ``(master_seed, trial_index)``.  The generator is
Philox-4x64-10, a counter-based PRNG: the master seed is the Philox key
and trial ``i`` owns the fixed counter window
``[i * words_per_trial / 4, (i + 1) * words_per_trial / 4)`` (the counter
advances once per 4 output words, and ``words_per_trial`` is always a
multiple of 4).  Gains are produced from raw 64-bit words by the polar
Box-Muller map, which consumes exactly two words per complex gain.  As a
result a trial's gains depend only on the key and the window, never on
how many trials are generated together or on which worker generates
them: ``draw_cbc(n, RngSpec(s, i))`` is bit-identical to row ``i - a`` of
``draw_cbc_batch(n, s, a, b)`` for any batch ``[a, b)`` containing ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import Philox

from .errors import ConfigurationError

_MAX_SEED = 1 << 64


@dataclass(frozen=True)
class SnrPoint:
    """One operating SNR, in dB and as the linear ratio rho = E/sigma^2.

    ``rho`` always equals ``10 ** (rho_db / 10)`` exactly; construct via
    :meth:`from_db` or :meth:`from_linear`.
    """

    rho_db: float
    rho: float

    def __post_init__(self):
        if not self.rho > 0.0:
            raise ConfigurationError(f"SNR must be positive, got rho={self.rho}")
        if self.rho != 10.0 ** (self.rho_db / 10.0):
            raise ConfigurationError(
                "inconsistent SnrPoint; use SnrPoint.from_db or SnrPoint.from_linear"
            )

    @classmethod
    def from_db(cls, rho_db: float) -> "SnrPoint":
        rho_db = float(rho_db)
        return cls(rho_db=rho_db, rho=10.0 ** (rho_db / 10.0))

    @classmethod
    def from_linear(cls, rho: float) -> "SnrPoint":
        """Build from a linear SNR.  The value is round-tripped through dB
        so the exact identity rho = 10^(rho_db/10) holds (at most 1 ulp
        away from the input)."""
        if not rho > 0.0:
            raise ConfigurationError(f"SNR must be positive, got rho={rho}")
        return cls.from_db(10.0 * np.log10(float(rho)))


@dataclass(frozen=True)
class RngSpec:
    """Addresses one Monte Carlo trial in the counter-based stream."""

    master_seed: int
    trial_index: int

    def __post_init__(self):
        if not 0 <= self.master_seed < _MAX_SEED:
            raise ConfigurationError("master_seed must be a 64-bit unsigned integer")
        if self.trial_index < 0:
            raise ConfigurationError("trial_index must be nonnegative")


@dataclass(frozen=True)
class CbcChannelDraw:
    """All link gains for one broadcast-channel cooperation frame.

    ``source_to_dest[n]`` is the gain from the source to destination
    ``t_{n+1}``; ``dest_to_dest[i, j]`` is the gain from ``t_{i+1}`` to
    ``t_{j+1}`` (zero on the diagonal: a half-duplex node never hears
    itself).
    """

    source_to_dest: np.ndarray
    dest_to_dest: np.ndarray
    reciprocal: bool

    @property
    def n_dest(self) -> int:
        return self.source_to_dest.shape[0]


@dataclass(frozen=True)
class CmaChannelDraw:
    """All link gains for one multiple-access cooperation frame.

    ``source_to_dest[m]`` is the gain from source ``s_{m+1}`` to the
    destination; ``source_to_source[k, l]`` is the gain from ``s_{k+1}``
    to ``s_{l+1}`` (zero diagonal).
    """

    source_to_dest: np.ndarray
    source_to_source: np.ndarray
    reciprocal: bool

    @property
    def n_src(self) -> int:
        return self.source_to_dest.shape[0]


def words_per_trial(n_gains: int) -> int:
    """Raw 64-bit words reserved per trial: two per complex gain, rounded
    up to a whole Philox counter block of 4 words."""
    return -(-(2 * n_gains) // 4) * 4


def raw_window(master_seed: int, start_trial: int, n_trials: int, words: int) -> np.ndarray:
    """Raw uint64 words for trials [start_trial, start_trial + n_trials).

    ``words`` must be a multiple of 4 (one Philox counter block).  The
    returned array has shape (n_trials, words) and depends only on
    (master_seed, trial index), not on the batch split.
    """
    if words % 4 != 0:
        raise ConfigurationError("words per trial must be a multiple of 4")
    if not 0 <= master_seed < _MAX_SEED:
        raise ConfigurationError("master_seed must be a 64-bit unsigned integer")
    bg = Philox(key=master_seed)
    bg.advance(start_trial * (words // 4))
    raw = bg.random_raw(n_trials * words)
    return raw.reshape(n_trials, words)


def gains_from_raw(raw: np.ndarray, n_gains: int) -> np.ndarray:
    """Map raw words to CN(0,1) gains via the polar Box-Muller transform.

    Word pair (2j, 2j+1) becomes gain j: |h|^2 = -log1p(-u1) is exactly
    Exp(1) for u1 uniform on [0,1), and the phase 2*pi*u2 is uniform.
    """
    pairs = raw[..., : 2 * n_gains]
    u1 = (pairs[..., 0::2] >> np.uint64(11)) * 2.0**-53
    u2 = (pairs[..., 1::2] >> np.uint64(11)) * 2.0**-53
    mag = np.sqrt(-np.log1p(-u1))
    return mag * np.exp(2j * np.pi * u2)


def _cbc_gain_count(n_dest: int, reciprocal: bool) -> int:
    cross = n_dest * (n_dest - 1)
    return n_dest + (cross // 2 if reciprocal else cross)


def draw_cbc_batch(
    n_dest: int,
    master_seed: int,
    start_trial: int,
    n_trials: int,
    reciprocal: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized CBC draws for a contiguous block of trials.

    Returns ``(source_to_dest, dest_to_dest)`` with shapes
    (n_trials, N) and (n_trials, N, N).  Gain order within a trial:
    the N source gains first, then the destination-to-destination gains
    row-major over ordered pairs (upper triangle only when reciprocal,
    mirrored afterwards).
    """
    if n_dest < 2:
        raise ConfigurationError(f"CBC needs at least 2 destinations, got {n_dest}")
    n_gains = _cbc_gain_count(n_dest, reciprocal)
    raw = raw_window(master_seed, start_trial, n_trials, words_per_trial(n_gains))
    g = gains_from_raw(raw, n_gains)
    src = g[:, :n_dest]
    d2d = np.zeros((n_trials, n_dest, n_dest), dtype=np.complex128)
    if reciprocal:
        iu, ju = np.triu_indices(n_dest, k=1)
        d2d[:, iu, ju] = g[:, n_dest:]
        d2d[:, ju, iu] = g[:, n_dest:]
    else:
        off = ~np.eye(n_dest, dtype=bool)
        d2d[:, off] = g[:, n_dest:]
    return src, d2d


def draw_cbc(n_dest: int, rng: RngSpec, reciprocal: bool = True) -> CbcChannelDraw:
    """One quasi-static CBC frame realization.

    Reciprocity defaults to on: the broadcast-channel scheduling relies
    on destinations learning their outgoing inter-destination gains from
    overheard probes, which presumes a reciprocal channel.
    """
    src, d2d = draw_cbc_batch(n_dest, rng.master_seed, rng.trial_index, 1, reciprocal)
    return CbcChannelDraw(source_to_dest=src[0], dest_to_dest=d2d[0], reciprocal=reciprocal)


def draw_cma_batch(
    n_src: int,
    master_seed: int,
    start_trial: int,
    n_trials: int,
    reciprocal: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized CMA draws; same layout conventions as CBC draws."""
    if n_src < 2:
        raise ConfigurationError(f"CMA needs at least 2 sources, got {n_src}")
    n_gains = _cbc_gain_count(n_src, reciprocal)
    raw = raw_window(master_seed, start_trial, n_trials, words_per_trial(n_gains))
    g = gains_from_raw(raw, n_gains)
    src = g[:, :n_src]
    s2s = np.zeros((n_trials, n_src, n_src), dtype=np.complex128)
    if reciprocal:
        iu, ju = np.triu_indices(n_src, k=1)
        s2s[:, iu, ju] = g[:, n_src:]
        s2s[:, ju, iu] = g[:, n_src:]
    else:
        off = ~np.eye(n_src, dtype=bool)
        s2s[:, off] = g[:, n_src:]
    return src, s2s


def draw_cma(n_src: int, rng: RngSpec, reciprocal: bool = False) -> CmaChannelDraw:
    """One quasi-static CMA frame realization.

    Inter-source gains default to independent in each direction; nothing
    in the multiple-access analysis requires reciprocity, so it is
    opt-in.
    """
    src, s2s = draw_cma_batch(n_src, rng.master_seed, rng.trial_index, 1, reciprocal)
    return CmaChannelDraw(source_to_dest=src[0], source_to_source=s2s[0], reciprocal=reciprocal)


def draw_direct_batch(master_seed: int, start_trial: int, n_trials: int) -> np.ndarray:
    """Single Rayleigh link gains for the non-cooperative baseline."""
    raw = raw_window(master_seed, start_trial, n_trials, words_per_trial(1))
    return gains_from_raw(raw, 1)[:, 0]
