"""Link-level outage and DMT analysis for sequential slotted
amplify-and-forward cooperation over Rayleigh fading."""

from .capacity import MiResult, direct_outage_closed_form, gaussian_mi
from .cbc_ssaf import (
    EffectiveChannel,
    NormalizationFactor,
    RelayOrder,
    build_cbc_effective,
    cbc_normalization,
    cbc_outage_indicator,
    overhead_fraction,
    preorder_relays,
)
from .channel import (
    CbcChannelDraw,
    CmaChannelDraw,
    RngSpec,
    SnrPoint,
    draw_cbc,
    draw_cma,
)
from .cma_ssaf import (
    CmaEffectiveChannel,
    build_cma_effective,
    cma_normalization,
    cma_outage_indicator,
)
from .dmt import (
    DmtCurve,
    ExponentResult,
    cbc_outage_exponent,
    cbc_ssaf_lower_bound,
    cma_outage_exponent,
    cma_ssaf_dmt,
    direct_dmt,
    dmt_curve,
    estimate_exponent,
    miso_bound,
)
from .errors import ConfigurationError, EstimationError, NumericDomainError
from .montecarlo import (
    STRATEGIES,
    OutageEstimate,
    SweepSpec,
    estimate_outage,
    frame_bits,
    outage_flags,
    run_sweep,
    wilson_interval,
)

__all__ = [
    "CbcChannelDraw",
    "CmaChannelDraw",
    "CmaEffectiveChannel",
    "ConfigurationError",
    "DmtCurve",
    "EffectiveChannel",
    "EstimationError",
    "ExponentResult",
    "MiResult",
    "NormalizationFactor",
    "NumericDomainError",
    "OutageEstimate",
    "RelayOrder",
    "RngSpec",
    "STRATEGIES",
    "SnrPoint",
    "SweepSpec",
    "build_cbc_effective",
    "build_cma_effective",
    "cbc_normalization",
    "cbc_outage_exponent",
    "cbc_outage_indicator",
    "cbc_ssaf_lower_bound",
    "cma_normalization",
    "cma_outage_exponent",
    "cma_outage_indicator",
    "cma_ssaf_dmt",
    "direct_dmt",
    "direct_outage_closed_form",
    "dmt_curve",
    "draw_cbc",
    "draw_cma",
    "estimate_exponent",
    "estimate_outage",
    "frame_bits",
    "gaussian_mi",
    "miso_bound",
    "outage_flags",
    "overhead_fraction",
    "preorder_relays",
    "run_sweep",
    "wilson_interval",
]

__version__ = "0.1.0"
