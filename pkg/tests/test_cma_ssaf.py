"""CMA-SSAF effective-channel structure, power accounting and outage."""

import numpy as np
import pytest

from ssafsim import (
    CmaChannelDraw,
    ConfigurationError,
    RngSpec,
    SnrPoint,
    build_cma_effective,
    cma_normalization,
    cma_outage_indicator,
    draw_cma,
    gaussian_mi,
)
from ssafsim.channel import draw_cma_batch
from ssafsim.cma_ssaf import cma_frame_bits_batch

RHO = SnrPoint.from_db(10.0)


def _check_structure(draw, rho):
    m = draw.n_src
    eff = build_cma_effective(draw, rho)
    h = eff.signal_matrix
    a = draw.source_to_dest
    r = rho.rho
    # upper-right block exactly zero
    assert np.all(h[:m, m:] == 0.0)
    # upper-left block diagonal with the direct gains
    assert np.array_equal(h[:m, :m], np.diag(a))
    # lower-right block is exactly (1/sqrt(M)) A
    assert np.array_equal(h[m:, m:], (1.0 / np.sqrt(m)) * np.diag(a))
    # lower-left block entries and zero diagonal
    b = h[m:, :m]
    assert np.all(np.diag(b) == 0.0)
    beta_sq = np.empty((m, m))
    for l in range(m):
        for k in range(m):
            if k == l:
                continue
            bsq = r / (r * abs(draw.source_to_source[k, l]) ** 2 + 1.0)
            beta_sq[l, k] = bsq
            want = (1.0 / np.sqrt(m)) * a[l] * np.sqrt(bsq) * draw.source_to_source[k, l]
            assert b[l, k] == pytest.approx(want, rel=1e-14)
    # diagonal noise with the forwarded listening-noise terms
    nd = np.real(np.diag(eff.noise_cov))
    assert np.all(eff.noise_cov - np.diag(np.diag(eff.noise_cov)) == 0.0)
    assert np.allclose(nd[:m], 1.0)
    for l in range(m):
        extra = sum(beta_sq[l, k] for k in range(m) if k != l)
        want = 1.0 + abs(a[l]) ** 2 / m * extra
        assert nd[m + l] == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize("m", [2, 3, 5])
def test_structural_invariants_random_draws(m):
    # 10^4 draws across sizes; full five-invariant check on a subsample,
    # vectorized spot checks on the rest
    for seed in range(20):
        _check_structure(draw_cma(m, RngSpec(seed, 0)), RHO)
    src, s2s = draw_cma_batch(m, 555, 0, 10_000 // m)
    for b in range(0, src.shape[0], src.shape[0] // 25):
        _check_structure(CmaChannelDraw(src[b], s2s[b], False), RHO)


def test_reference_point_m2_unit_gains():
    # all |h| = 1 at rho = 1: beta^2 = 1/2 and |B| off-diagonal = 1/2
    rho = SnrPoint.from_linear(1.0)
    draw = CmaChannelDraw(
        source_to_dest=np.array([1.0 + 0j, 1.0 + 0j]),
        source_to_source=np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
        reciprocal=True,
    )
    beta_sq = cma_normalization(draw, rho)
    assert beta_sq[0, 1] == pytest.approx(0.5, rel=1e-15)
    assert beta_sq[1, 0] == pytest.approx(0.5, rel=1e-15)
    eff = build_cma_effective(draw, rho)
    assert abs(eff.signal_matrix[2, 1]) == pytest.approx(0.5, rel=1e-14)
    assert abs(eff.signal_matrix[3, 0]) == pytest.approx(0.5, rel=1e-14)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_relayed_slot_power_budget_met_exactly(m):
    # transmitted power in slot M+l: (rho/M) (1 + sum beta^2 (rho|h|^2+1)/rho) = rho
    draw = draw_cma(m, RngSpec(321, 5))
    r = RHO.rho
    beta_sq = cma_normalization(draw, RHO)
    for l in range(m):
        acc = 1.0
        for k in range(m):
            if k == l:
                continue
            acc += beta_sq[l, k] * (r * abs(draw.source_to_source[k, l]) ** 2 + 1.0) / r
        assert r / m * acc == pytest.approx(r, rel=1e-12)


def test_zero_intersource_links_reduce_to_two_observation_scheme():
    # with dead inter-source links the matrix is block diagonal; each
    # relay still forwards its amplified listening noise at full power,
    # so the second observation of message l has power rho/M and noise
    # 1 + rho (M-1) |h_l|^2 / M.  The joint MI is the closed-form log-det
    # of that diagonal two-observation model.
    m = 3
    rng = np.random.default_rng(11)
    a = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2.0)
    draw = CmaChannelDraw(a, np.zeros((m, m), dtype=complex), False)
    eff = build_cma_effective(draw, RHO)
    h = eff.signal_matrix
    assert np.all(h[m:, :m] == 0.0)
    r = RHO.rho
    a2 = np.abs(a) ** 2
    want = np.sum(
        np.log2(1.0 + r * a2)
        + np.log2(1.0 + (r / m) * a2 / (1.0 + r * (m - 1) / m * a2))
    )
    got = gaussian_mi(eff.signal_matrix, eff.noise_cov, RHO).bits
    assert got == pytest.approx(float(want), rel=1e-12)
    # outage indicator equality against the explicit two-observation model
    h2 = np.zeros((2 * m, m), dtype=complex)
    nd = np.ones(2 * m)
    for l in range(m):
        h2[l, l] = a[l]
        h2[m + l, l] = a[l] / np.sqrt(m)
        nd[m + l] = 1.0 + r * (m - 1) / m * a2[l]
    for rate in (0.1, 0.5, 1.0, 2.0):
        two_obs_bits = gaussian_mi(h2, np.diag(nd), RHO).bits
        assert cma_outage_indicator(eff, RHO, rate) is bool(two_obs_bits < 2 * m * rate)


def test_indicator_trivials():
    m = 2
    dead = CmaChannelDraw(np.zeros(m, dtype=complex), np.zeros((m, m), dtype=complex), False)
    assert cma_outage_indicator(build_cma_effective(dead, RHO), RHO, 1e-6) is True
    loud = CmaChannelDraw(
        np.full(m, 1e9, dtype=complex),
        np.full((m, m), 1e9, dtype=complex) - np.diag(np.full(m, 1e9 + 0j)),
        False,
    )
    assert cma_outage_indicator(build_cma_effective(loud, RHO), RHO, 1.0) is False


def test_indicator_agrees_with_eigenvalue_route():
    draw = draw_cma(2, RngSpec(997, 3))
    eff = build_cma_effective(draw, RHO)
    sigma = np.asarray(eff.noise_cov)
    lam = np.real(np.linalg.eigvals(np.linalg.inv(sigma) @ eff.signal_matrix @ eff.signal_matrix.conj().T))
    bits_oracle = float(np.sum(np.log2(1.0 + RHO.rho * lam)))
    for rate in (0.25, 0.5, 1.0, 2.0):
        assert cma_outage_indicator(eff, RHO, rate) is bool(bits_oracle < 4 * rate)


def test_frame_mi_nondecreasing_in_rho():
    rhos = [SnrPoint.from_db(db) for db in (0.0, 5.0, 10.0, 20.0, 30.0)]
    for seed in range(15):
        draw = draw_cma(3, RngSpec(6000 + seed, 0))
        bits = []
        for rho in rhos:
            eff = build_cma_effective(draw, rho)
            bits.append(gaussian_mi(eff.signal_matrix, eff.noise_cov, rho).bits)
        assert all(b2 >= b1 - 1e-12 for b1, b2 in zip(bits, bits[1:]))


@pytest.mark.parametrize("m", [2, 3, 5])
def test_batch_kernel_matches_object_route(m):
    src, s2s = draw_cma_batch(m, 404, 0, 40)
    bits = cma_frame_bits_batch(src, s2s, RHO.rho)
    for b in range(src.shape[0]):
        eff = build_cma_effective(CmaChannelDraw(src[b], s2s[b], False), RHO)
        want = gaussian_mi(eff.signal_matrix, eff.noise_cov, RHO).bits
        assert bits[b] == pytest.approx(want, rel=1e-11, abs=1e-11)


def test_rejects_single_source():
    with pytest.raises(ConfigurationError):
        build_cma_effective(
            CmaChannelDraw(np.ones(1, dtype=complex), np.zeros((1, 1), dtype=complex), False),
            RHO,
        )
