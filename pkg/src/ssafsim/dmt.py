"""Diversity-multiplexing tradeoff curves and outage-set exponents.

Closed-form curves: the MISO upper bound n(1-r)^+, the broadcast-SSAF
achievable lower bound, the multiple-access-SSAF tradeoff M(1-r) and the
single-link baseline.  The numerical side minimizes the exponential-order
objective over the outage constraint sets directly, which lets the
closed-form curves be checked against an independent optimization.

Constraint sets are closed (<=) rather than strict (<): the infima
coincide for r > 0 and the closed set yields the correct r -> 0 limit
(N - 2) instead of an empty set.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .channel import SnrPoint
from .errors import ConfigurationError, EstimationError


@dataclass(frozen=True)
class DmtCurve:
    """A sampled (multiplexing gain r, diversity gain d) curve."""

    label: str
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        rs = [p[0] for p in self.points]
        if any(b < a for a, b in zip(rs, rs[1:])):
            raise ConfigurationError("r values must be nondecreasing")
        if any(p[1] < 0.0 for p in self.points):
            raise ConfigurationError("diversity gains must be nonnegative")

    @property
    def r(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def d(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])


@dataclass(frozen=True)
class ExponentResult:
    """Minimized outage-set exponent with the minimizing assignment.

    ``minimizer`` has entries ``"v"`` and ``"u"``: dicts from variable
    index to value (indices are node labels; missing keys are zero).
    """

    d_o: float
    minimizer: dict


def _check_r(r: float) -> float:
    r = float(r)
    if r < 0.0 or r > 1.0:
        raise ConfigurationError(f"multiplexing gain must be in [0, 1], got {r}")
    return r


def miso_bound(n: int, r: float) -> float:
    """Genie-aided MISO upper bound n (1 - r)^+."""
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    return n * max(1.0 - _check_r(r), 0.0)


def cbc_ssaf_lower_bound(n: int, r: float) -> float:
    """Achievable broadcast-SSAF lower bound
    [(n-3) - (n+1) r]^+ + (1 - (n+1) r / n)^+."""
    if n < 2:
        raise ConfigurationError(f"n must be >= 2, got {n}")
    r = _check_r(r)
    return max((n - 3.0) - (n + 1.0) * r, 0.0) + max(1.0 - (n + 1.0) * r / n, 0.0)


def cma_ssaf_dmt(m: int, r: float) -> float:
    """Multiple-access-SSAF tradeoff m (1 - r); meets the MISO bound."""
    if m < 1:
        raise ConfigurationError(f"m must be >= 1, got {m}")
    return m * (1.0 - _check_r(r))


def direct_dmt(r: float) -> float:
    """Single Rayleigh link baseline (1 - r)^+."""
    return max(1.0 - _check_r(r), 0.0)


def _cbc_relayed_slots(n: int, receiver_l: int) -> list[int]:
    excluded = (receiver_l, receiver_l + 1, receiver_l + 2)
    return [k for k in range(2, n + 2) if k not in excluded]


def cbc_outage_constraint(n: int, receiver_l: int, v: dict, u: dict) -> float:
    """Left-hand side of the broadcast outage-set constraint:
    3 (1 - v_l)^+ + sum_{k in K} (max{1 - v_{k-1} - u_{k-1}, 1 - v_l})^+.
    The assignment is in the outage set iff this is <= (n+1) r."""
    vl = v.get(receiver_l, 0.0)
    lhs = 3.0 * max(1.0 - vl, 0.0)
    for k in _cbc_relayed_slots(n, receiver_l):
        w = v.get(k - 1, 0.0) + u.get(k - 1, 0.0)
        lhs += max(1.0 - w, 1.0 - vl, 0.0)
    return lhs


def _cbc_objective_on_grid(n: int, r: float, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Objective t + sum(w) after the inner closed form, at candidate v_l = t.

    u contributes only through v_{k-1} + u_{k-1}, so u = 0 without loss
    and w_k = v_{k-1}.  At fixed v_l = t the relayed terms each cost
    max(1 - w_k, 1 - t) toward the budget, so the cheapest feasible total
    is sum(w) = (m_rel - slack)^+, feasible iff slack >= m_rel (1 - t).
    """
    m_rel = n - 3  # relayed slots; independent of l for 2 <= l <= n-1
    budget = (n + 1.0) * r
    slack = budget - 3.0 * np.maximum(1.0 - t, 0.0)
    need = m_rel * np.maximum(1.0 - t, 0.0)
    w_total = np.maximum(m_rel - slack, 0.0)
    f = t + w_total
    f = np.where(slack >= need - 1e-12, f, np.inf)
    return f, w_total


def cbc_outage_exponent(n: int, receiver_l: int, r: float) -> ExponentResult:
    """Numerically minimize the broadcast outage-set exponent
    sum_{k in K} (v_{k-1} + u_{k-1}) + v_l over the closed constraint set.

    One-dimensional refinement over v_l with the inner sum in closed
    form; accurate to well below 1e-6.
    """
    if n < 3:
        raise ConfigurationError(f"n must be >= 3, got {n}")
    if not 2 <= receiver_l <= n - 1:
        raise ConfigurationError(
            f"receiver_l must be in 2..{n - 1}, got {receiver_l}"
        )
    r = _check_r(r)
    lo, hi = 0.0, 1.0
    for _ in range(3):
        t = np.linspace(lo, hi, 2001)
        f, _ = _cbc_objective_on_grid(n, r, t)
        i = int(np.argmin(f))
        lo, hi = t[max(i - 1, 0)], t[min(i + 1, len(t) - 1)]
    t_star = float(t[i])
    _, w_total = _cbc_objective_on_grid(n, r, np.array([t_star]))
    relayed = _cbc_relayed_slots(n, receiver_l)
    w_each = float(w_total[0]) / len(relayed) if relayed else 0.0
    v = {k - 1: w_each for k in relayed}
    v[receiver_l] = t_star
    u = {k - 1: 0.0 for k in relayed}
    d_o = t_star + float(w_total[0])
    return ExponentResult(d_o=d_o, minimizer={"v": v, "u": u})


def cma_outage_constraint(v: dict, m: int, constraint: str = "summed") -> float:
    """Left-hand side of the multiple-access outage-set constraint.

    ``summed``: sum_l (1 - v_l)^+, to be compared against m r.
    ``single``: min_l (1 - v_l)^+, to be compared against r (the literal
    one-source reading).
    """
    terms = [max(1.0 - v.get(l, 0.0), 0.0) for l in range(1, m + 1)]
    if constraint == "summed":
        return sum(terms)
    if constraint == "single":
        return min(terms)
    raise ConfigurationError(f"unknown constraint reading {constraint!r}")


def cma_outage_exponent(m: int, r: float, constraint: str = "summed") -> ExponentResult:
    """Numerically minimize sum_l [v_l + sum_{k != l} u_{k,l}] over the
    multiple-access outage set.

    The u variables never appear in the constraint, so u = 0.  Under the
    ``summed`` reading (the default; the only reading consistent with
    the M(1-r) tradeoff) a symmetric minimizer exists and a refinement
    over the common value v_l = t gives the infimum.  The ``single``
    reading needs one v_l at (1 - r) and yields 1 - r.
    """
    if m < 1:
        raise ConfigurationError(f"m must be >= 1, got {m}")
    r = _check_r(r)
    if constraint == "single":
        v = {l: 0.0 for l in range(1, m + 1)}
        v[1] = 1.0 - r
        u = {}
        return ExponentResult(d_o=1.0 - r, minimizer={"v": v, "u": u})
    if constraint != "summed":
        raise ConfigurationError(f"unknown constraint reading {constraint!r}")
    lo, hi = 0.0, 1.0
    for _ in range(3):
        t = np.linspace(lo, hi, 2001)
        f = np.where(m * np.maximum(1.0 - t, 0.0) <= m * r + 1e-12, m * t, np.inf)
        i = int(np.argmin(f))
        lo, hi = t[max(i - 1, 0)], t[min(i + 1, len(t) - 1)]
    t_star = float(t[i])
    v = {l: t_star for l in range(1, m + 1)}
    u = {}
    return ExponentResult(d_o=m * t_star, minimizer={"v": v, "u": u})


def estimate_exponent(points) -> float:
    """Least-squares diversity slope of -log p_out against log rho.

    ``points`` is an iterable of (rho, p_out) with rho either linear SNR
    or an :class:`SnrPoint`.  Points with zero estimated outage carry no
    slope information and are dropped with a warning.
    """
    xs, ys = [], []
    for rho, p in points:
        rho = rho.rho if isinstance(rho, SnrPoint) else float(rho)
        if rho <= 0.0:
            raise ConfigurationError("rho values must be positive")
        if p < 0.0 or p > 1.0:
            raise ConfigurationError(f"p_out must be in [0, 1], got {p}")
        if p == 0.0:
            warnings.warn(
                f"dropping rho={rho}: zero outage count gives no slope information",
                stacklevel=2,
            )
            continue
        xs.append(np.log(rho))
        ys.append(-np.log(p))
    if len(xs) < 2:
        raise EstimationError("need at least 2 points with nonzero outage")
    slope = np.polyfit(np.array(xs), np.array(ys), 1)[0]
    return float(slope)


def dmt_curve(label: str, r_grid, fn) -> DmtCurve:
    """Sample a diversity formula over a multiplexing-gain grid."""
    pts = tuple((float(r), float(fn(r))) for r in sorted(r_grid))
    return DmtCurve(label=label, points=pts)
