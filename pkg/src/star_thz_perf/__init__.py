"""Performance analysis for THz links served by a transmissive/reflective surface.

The package models a two-sided link: an access point illuminates an
element grid whose surface splits energy (or elements) between an indoor
user behind the panel and an outdoor user in front of it, with both users
sharing one transmit waveform through power-domain multiple access.
Small-scale fading enters as an alpha-mu law indoors and a gamma-mixture
law outdoors, and transceiver distortion is carried as a residual noise
floor proportional to signal power.

Three layers:

* distribution machinery (`dist_alpha_mu`, `dist_mixture`) for element
  sums, with truncation certificates instead of silent error,
* closed-form metrics (`performance`) and their simulation counterparts
  (`monte_carlo`),
* scenario files, recipes, and sweeps (`cli_runner`, also installed as
  the ``star-thz-perf`` command).
"""

from .channel_geometry import (
    E2EWeights,
    ProtocolConfig,
    RisPanel,
    ThzLinkParams,
    build_e2e_weights,
    thz_path_gain,
)
from .cli_runner import (
    SCHEMA_LINE,
    StarRisScenario,
    default_scenario,
    load_scenario,
    run_recipe,
    run_sweep,
    scenario_from_dict,
    validate_scenario,
)
from .dist_alpha_mu import (
    AlphaMuApprox,
    AlphaMuParams,
    DeltaSeries,
    alpha_mu_cdf,
    alpha_mu_pdf,
    alpha_mu_sample,
    build_delta_series,
    exact_sum_cdf,
    exact_sum_cdf_batch,
    exact_sum_pdf,
    fit_alpha_mu_approx,
    truncation_error,
)
from .dist_mixture import (
    CollapsedGammaMixture,
    CollapsedGaussianMixture,
    GammaMixture,
    GaussianMixture,
    collapse_gm_sum,
    collapse_mog_sum,
    fit_mog_from_samples,
    load_mixture,
    mixture_from_dict,
    mixture_to_dict,
)
from .errors import ConfigurationError, DomainError, NumericalError, StarThzError
from .monte_carlo import EmpiricalResult, SimulationPlan, estimate_ec, estimate_op
from .performance import (
    OutageThresholds,
    PowerConfig,
    ec_high_snr,
    ec_indoor,
    ec_low_snr,
    ec_oma,
    ec_outdoor,
    op_asymptotic,
    op_indoor,
    op_oma,
    op_outdoor,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaMuApprox",
    "AlphaMuParams",
    "CollapsedGammaMixture",
    "CollapsedGaussianMixture",
    "ConfigurationError",
    "DeltaSeries",
    "DomainError",
    "E2EWeights",
    "EmpiricalResult",
    "GammaMixture",
    "GaussianMixture",
    "NumericalError",
    "OutageThresholds",
    "PowerConfig",
    "ProtocolConfig",
    "RisPanel",
    "SCHEMA_LINE",
    "SimulationPlan",
    "StarRisScenario",
    "StarThzError",
    "ThzLinkParams",
    "alpha_mu_cdf",
    "alpha_mu_pdf",
    "alpha_mu_sample",
    "build_delta_series",
    "build_e2e_weights",
    "collapse_gm_sum",
    "collapse_mog_sum",
    "default_scenario",
    "ec_high_snr",
    "ec_indoor",
    "ec_low_snr",
    "ec_oma",
    "ec_outdoor",
    "estimate_ec",
    "estimate_op",
    "exact_sum_cdf",
    "exact_sum_cdf_batch",
    "exact_sum_pdf",
    "fit_alpha_mu_approx",
    "fit_mog_from_samples",
    "load_mixture",
    "load_scenario",
    "mixture_from_dict",
    "mixture_to_dict",
    "op_asymptotic",
    "op_indoor",
    "op_oma",
    "op_outdoor",
    "run_recipe",
    "run_sweep",
    "scenario_from_dict",
    "thz_path_gain",
    "truncation_error",
    "validate_scenario",
]
