"""Multiple-access SSAF: the 2M-slot frame and its effective channel.

Source ``s_l`` sends a fresh message in slot l.  In slot M+l it sends,
under equal power allocation, the scaled sum of a second fresh message
and the amplify-and-forward copies of what it heard from every other
source in the first half of the frame.  Amplification is normalized per
incoming link so each forwarded component (noise included) carries the
full power budget before the 1/sqrt(M) split; the relayed listening
noises therefore reappear in the destination's slot-(M+l) noise
variance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .capacity import _rho_value, gaussian_mi
from .channel import CmaChannelDraw
from .errors import ConfigurationError

_LN2 = np.log(2.0)


@dataclass(frozen=True)
class CmaEffectiveChannel:
    """Joint linear model of one 2M-slot frame at the destination.

    Columns follow ``message_order``: the M first-half messages
    (x_{s_1,1}, ..., x_{s_M,M}) then the M second-half messages
    (x_{s_1,M+1}, ..., x_{s_M,2M}).  ``noise_cov`` is diagonal; entries
    for slots 1..M are 1 and the slot-(M+l) entry carries the forwarded
    listening noise.
    """

    signal_matrix: np.ndarray
    noise_cov: np.ndarray
    message_order: tuple[tuple[int, int], ...]
    rho: float


def cma_normalization(draw: CmaChannelDraw, rho) -> np.ndarray:
    """beta^2 for every ordered relay pair: entry (l, k) normalizes the
    signal source s_{k+1} delivered to s_{l+1}, so that
    beta^2 (rho |h_{s_k,s_l}|^2 + 1) = rho exactly.  Diagonal is zero."""
    r = _rho_value(rho)
    m = draw.n_src
    incoming_sq = np.abs(draw.source_to_source.T) ** 2  # [l, k] = |h_{s_k,s_l}|^2
    beta_sq = r / (r * incoming_sq + 1.0)
    beta_sq[np.eye(m, dtype=bool)] = 0.0
    return beta_sq


def build_cma_effective(draw: CmaChannelDraw, rho) -> CmaEffectiveChannel:
    """Assemble the 2M x 2M effective model for one draw.

    With A = diag(h_{s_l,t}), the signal matrix is
    [[A, 0], [B, A/sqrt(M)]] where B[l, k] = (1/sqrt(M)) h_{s_l,t}
    beta_{l,k} h_{s_k,s_l} off the diagonal.
    """
    m = draw.n_src
    if m < 2:
        raise ConfigurationError(f"CMA needs at least 2 sources, got {m}")
    r = _rho_value(rho)
    a = draw.source_to_dest
    beta_sq = cma_normalization(draw, r)
    beta = np.sqrt(beta_sq)
    incoming = draw.source_to_source.T  # [l, k] = h_{s_k,s_l}
    scale = 1.0 / np.sqrt(m)

    signal = np.zeros((2 * m, 2 * m), dtype=np.complex128)
    signal[:m, :m] = np.diag(a)
    signal[m:, m:] = scale * np.diag(a)
    signal[m:, :m] = scale * a[:, None] * beta * incoming

    noise_diag = np.ones(2 * m)
    noise_diag[m:] = 1.0 + (np.abs(a) ** 2 / m) * beta_sq.sum(axis=1)
    order = tuple((l, l) for l in range(1, m + 1)) + tuple(
        (l, m + l) for l in range(1, m + 1)
    )
    return CmaEffectiveChannel(
        signal_matrix=signal,
        noise_cov=np.diag(noise_diag).astype(np.complex128),
        message_order=order,
        rho=r,
    )


def cma_outage_indicator(eff: CmaEffectiveChannel, rho, rate_bpcu: float) -> bool:
    """Joint-decoder outage: frame mutual information below
    2M * rate_bpcu bits."""
    if not rate_bpcu > 0.0:
        raise ConfigurationError(f"rate must be positive, got {rate_bpcu}")
    bits = gaussian_mi(eff.signal_matrix, eff.noise_cov, rho).bits
    return bits < len(eff.message_order) * rate_bpcu


def cma_frame_bits_batch(src: np.ndarray, s2s: np.ndarray, rho: float) -> np.ndarray:
    """Frame mutual information (bits) for a batch of CMA draws.

    Uses the Schur complement of the upper-left block: with diagonal
    A the determinant factors into prod_j (1 + rho |a_j|^2) times the
    determinant of the M x M matrix
    I + (rho / sigma) (B E B^dagger + A A^dagger / M),
    E = diag(1 / (1 + rho |a_j|^2)).  Agrees with the per-trial
    :func:`build_cma_effective` + ``gaussian_mi`` route.
    """
    n_trials, m = src.shape
    a = src
    abs_a_sq = np.abs(a) ** 2
    incoming = np.swapaxes(s2s, 1, 2)  # [b, l, k] = h_{s_k, s_l}
    incoming_sq = np.abs(incoming) ** 2
    beta_sq = rho / (rho * incoming_sq + 1.0)
    eye = np.eye(m, dtype=bool)
    beta_sq[:, eye] = 0.0

    bmat = (1.0 / np.sqrt(m)) * a[:, :, None] * np.sqrt(beta_sq) * incoming
    bmat[:, eye] = 0.0
    sigma = 1.0 + (abs_a_sq / m) * beta_sq.sum(axis=2)  # slot M+l noise
    e_diag = 1.0 / (1.0 + rho * abs_a_sq)

    first = np.sum(np.log1p(rho * abs_a_sq), axis=1)
    core = bmat * e_diag[:, None, :]
    schur = core @ np.swapaxes(bmat.conj(), 1, 2)
    schur[:, eye] += abs_a_sq / m
    schur *= (rho / sigma)[:, :, None]
    schur[:, eye] += 1.0

    if m == 2:
        det = schur[:, 0, 0] * schur[:, 1, 1] - schur[:, 0, 1] * schur[:, 1, 0]
        second = np.log(np.real(det))
    else:
        _, second = np.linalg.slogdet(schur)
    return (first + second) / _LN2
