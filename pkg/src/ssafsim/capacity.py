"""Mutual information of linear Gaussian models with colored noise."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .channel import SnrPoint
from .errors import ConfigurationError, NumericDomainError


@dataclass(frozen=True)
class MiResult:
    """Frame mutual information in bits (log base 2)."""

    bits: float


def _rho_value(rho) -> float:
    r = rho.rho if isinstance(rho, SnrPoint) else float(rho)
    if not r > 0.0:
        raise ConfigurationError(f"SNR must be positive, got {r}")
    return r


def gaussian_mi(signal_matrix: np.ndarray, noise_cov: np.ndarray, rho) -> MiResult:
    """log2 det(I + rho * Sigma^-1 H H^dagger) for y = sqrt(rho) H x + n.

    Messages x are unit average energy and independent; n ~ CN(0, Sigma)
    with Sigma Hermitian positive definite.  For numerical stability the
    determinant is evaluated in the symmetrized form
    I + rho * (L^-1 H)(L^-1 H)^dagger with Sigma = L L^dagger, which is
    Hermitian by construction.

    Raises :class:`NumericDomainError` if Sigma is not positive definite.
    """
    r = _rho_value(rho)
    h = np.asarray(signal_matrix, dtype=np.complex128)
    sigma = np.asarray(noise_cov, dtype=np.complex128)
    if h.ndim != 2 or sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise ConfigurationError("signal_matrix and noise_cov must be 2-D, noise_cov square")
    if sigma.shape[0] != h.shape[0]:
        raise ConfigurationError("noise_cov dimension must match the observation count")
    try:
        chol = scipy.linalg.cholesky(sigma, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise NumericDomainError("noise covariance is not positive definite") from exc
    w = scipy.linalg.solve_triangular(chol, h, lower=True)
    gram = np.eye(h.shape[0], dtype=np.complex128) + r * (w @ w.conj().T)
    try:
        chol_g = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - gram is PD in exact arithmetic
        raise NumericDomainError("effective Gram matrix lost positive definiteness") from exc
    bits = 2.0 * np.sum(np.log2(np.real(np.diagonal(chol_g))))
    return MiResult(bits=max(float(bits), 0.0))


def direct_outage_closed_form(rho, rate_bpcu: float) -> float:
    """Exact outage of a unit-variance Rayleigh link: P[log2(1+rho|h|^2) < rate].

    |h|^2 is Exp(1), so the outage probability is 1 - exp(-(2^rate - 1)/rho).
    """
    if not rate_bpcu > 0.0:
        raise ConfigurationError(f"rate must be positive, got {rate_bpcu}")
    r = _rho_value(rho)
    return float(-np.expm1(-(2.0**rate_bpcu - 1.0) / r))
