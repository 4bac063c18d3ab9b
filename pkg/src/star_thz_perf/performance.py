"""Outage probability and ergodic capacity of the two-sided link.

The indoor user performs successive interference cancellation: it first
decodes the outdoor user's message, removes it, then decodes its own.
The outdoor user decodes directly, treating the indoor signal as
interference.  Residual transceiver distortion enters every ratio as an
extra |H|^2-proportional noise term, which produces hard performance
ceilings: above a threshold-dependent power split no amount of transmit
power can close the link, and capacities saturate.

Closed forms evaluate the envelope distribution of the combined channel
at a deterministic point sqrt(psi), where psi maps an SNR threshold
through the signal/interference budget.  Capacities are expectations of
log2(1 + ratio) against the fitted envelope models, computed with
Gauss-Laguerre quadrature in log space so that collapsed mixtures with
extreme amplitude scales stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special

from .dist_alpha_mu import (
    AlphaMuApprox,
    DeltaSeries,
    alpha_mu_moment,
    exact_sum_cdf,
)
from .dist_mixture import (
    CollapsedGaussianMixture,
    GammaMixture,
    GaussianMixture,
    _gm_params,
    gm_cdf,
    gm_moment,
    gm_sum_moment,
    mog_cdf,
    mog_moment,
)
from .errors import ConfigurationError, DomainError
from .special_math import QuadratureRule, digamma

LOG2_E = math.log2(math.e)

SIDNR_KINDS = ("indoor_sic", "indoor_own", "outdoor", "oma_indoor", "oma_outdoor")

_MIN_QUAD_ORDER = 16
_RHO_SUM_TOL = 1e-12
_OP_TAIL_TOL = 1e-9


@dataclass(frozen=True)
class PowerConfig:
    """Transmit power budget, allocation split, distortion level, noise."""

    power_w: float
    rho_indoor: float
    rho_outdoor: float
    kappa_sq: float
    noise_w: float

    def __post_init__(self) -> None:
        for name in ("power_w", "noise_w"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
        if not math.isfinite(self.kappa_sq) or self.kappa_sq < 0.0:
            raise DomainError(f"kappa_sq must be nonnegative, got {self.kappa_sq!r}")
        for name in ("rho_indoor", "rho_outdoor"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise DomainError(
                    f"{name} must lie strictly in (0, 1), got {value!r}"
                )
        if abs(self.rho_indoor + self.rho_outdoor - 1.0) > _RHO_SUM_TOL:
            raise DomainError(
                "allocation coefficients must sum to one, got "
                f"{self.rho_indoor} + {self.rho_outdoor}"
            )
        if self.rho_outdoor <= self.rho_indoor:
            raise DomainError(
                "the outdoor user must receive the larger power share, got "
                f"rho_indoor={self.rho_indoor}, rho_outdoor={self.rho_outdoor}"
            )

    @property
    def p_indoor(self) -> float:
        return self.rho_indoor * self.power_w

    @property
    def p_outdoor(self) -> float:
        return self.rho_outdoor * self.power_w


@dataclass(frozen=True)
class OutageThresholds:
    """Linear SNR thresholds the two decoders must each clear."""

    indoor: float
    outdoor: float

    def __post_init__(self) -> None:
        for name in ("indoor", "outdoor"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise DomainError(
                    f"{name} threshold must be positive and finite, got {value!r}"
                )


def _budget(kind: str, pc: PowerConfig):
    """Signal power and |H|^2-proportional interference power for a kind."""
    distortion = pc.kappa_sq * pc.power_w
    if kind == "indoor_sic" or kind == "outdoor":
        return pc.p_outdoor, distortion + pc.p_indoor
    if kind == "indoor_own" or kind == "oma_indoor":
        return pc.p_indoor, distortion
    if kind == "oma_outdoor":
        return pc.p_outdoor, distortion
    raise ConfigurationError(f"kind must be one of {SIDNR_KINDS}, got {kind!r}")


def sidnr(kind: str, h_sq, pc: PowerConfig):
    """Signal-to-interference-plus-distortion-and-noise ratio.

    Vectorized over the channel power ``h_sq``.  ``indoor_sic`` is the
    ratio the indoor user sees while decoding the outdoor message;
    ``indoor_own`` applies after cancellation; ``outdoor`` is the outdoor
    user's ratio; the ``oma_*`` kinds describe orthogonal single-user
    slots where only distortion remains as self-interference.
    """
    signal, interference = _budget(kind, pc)
    h_sq = np.asarray(h_sq, dtype=float)
    if np.any(h_sq < 0.0) or not np.all(np.isfinite(h_sq)):
        raise DomainError("h_sq must be nonnegative and finite")
    out = signal * h_sq / (interference * h_sq + pc.noise_w)
    return out if out.ndim else float(out)


def _own_ceiling_hit(gamma_th: float, pc: PowerConfig, rho: float) -> bool:
    # gamma_th >= rho / kappa^2, written multiplicatively so kappa^2 = 0
    # never trips it.
    return gamma_th * pc.kappa_sq >= rho


def _outdoor_ceiling_hit(gamma_th: float, pc: PowerConfig) -> bool:
    return gamma_th * (pc.kappa_sq + pc.rho_indoor) >= pc.rho_outdoor


def _psi(gamma_th: float, pc: PowerConfig, signal: float, interference: float) -> float:
    # Callers check the ceiling first, which guarantees a positive denominator.
    return pc.noise_w * gamma_th / (signal - gamma_th * interference)


def _psi_indoor(th: OutageThresholds, pc: PowerConfig) -> float:
    distortion = pc.kappa_sq * pc.power_w
    psi_own = _psi(th.indoor, pc, pc.p_indoor, distortion)
    psi_sic = _psi(th.outdoor, pc, pc.p_outdoor, distortion + pc.p_indoor)
    return max(psi_own, psi_sic)


def op_indoor(th: OutageThresholds, pc: PowerConfig, series: DeltaSeries) -> float:
    """Outage probability of the indoor user.

    The SIC chain fails if either decoding step misses its threshold;
    both conditions reduce to the combined envelope falling below a
    deterministic level, so the result is the exact series CDF at
    sqrt(psi).  Returns exactly 1 in the ceiling regions where a
    threshold exceeds what the distortion level permits, and resolves
    saturated operating points to 1 once the residual success
    probability is provably below 1e-9.
    """
    if _own_ceiling_hit(th.indoor, pc, pc.rho_indoor) or _outdoor_ceiling_hit(
        th.outdoor, pc
    ):
        return 1.0
    return exact_sum_cdf(series, math.sqrt(_psi_indoor(th, pc)), tail_tol=_OP_TAIL_TOL)


def _envelope_cdf(model, x: float) -> float:
    if isinstance(model, GammaMixture):
        return float(mog_cdf(model, x))
    if isinstance(model, (GaussianMixture, CollapsedGaussianMixture)):
        return float(gm_cdf(model, x))
    raise ConfigurationError(
        f"unsupported channel model {type(model).__name__!r}; expected a gamma "
        "or Gaussian mixture"
    )


def op_outdoor(th: OutageThresholds, pc: PowerConfig, model) -> float:
    """Outage probability of the outdoor user under either mixture model."""
    if _outdoor_ceiling_hit(th.outdoor, pc):
        return 1.0
    distortion = pc.kappa_sq * pc.power_w
    psi = _psi(th.outdoor, pc, pc.p_outdoor, distortion + pc.p_indoor)
    return min(1.0, max(0.0, _envelope_cdf(model, math.sqrt(psi))))


def op_asymptotic(user: str, th: OutageThresholds, pc: PowerConfig, model) -> float:
    """Leading-order outage at high transmit power.

    The indoor form keeps only the first series term and therefore decays
    as power^(-M*alpha*mu/2); the outdoor form replaces each incomplete
    gamma by its small-argument limit.  Both are evaluated in log space
    because the leading coefficients overflow double precision for
    realistic weight magnitudes.
    """
    if user == "indoor":
        if not isinstance(model, DeltaSeries):
            raise ConfigurationError("indoor asymptote requires a DeltaSeries")
        if _own_ceiling_hit(th.indoor, pc, pc.rho_indoor) or _outdoor_ceiling_hit(
            th.outdoor, pc
        ):
            return 1.0
        base = model.base
        alpha, mu = base.alpha, base.mu
        m = model.m_count
        log_delta0 = sum(
            special.gammaln(alpha * mu) - alpha * mu * math.log(w * base.x_hat)
            for w in model.weights
        )
        log_pref = m * (
            math.log(alpha) + mu * math.log(mu) - special.gammaln(mu)
        )
        exponent = 0.5 * m * alpha * mu
        log_val = (
            log_pref
            + log_delta0
            + exponent * math.log(_psi_indoor(th, pc))
            - special.gammaln(m * alpha * mu + 1.0)
        )
        return math.exp(log_val)
    if user == "outdoor_mog":
        if not isinstance(model, GammaMixture):
            raise ConfigurationError("outdoor asymptote requires a gamma mixture")
        if _outdoor_ceiling_hit(th.outdoor, pc):
            return 1.0
        distortion = pc.kappa_sq * pc.power_w
        psi = _psi(th.outdoor, pc, pc.p_outdoor, distortion + pc.p_indoor)
        log_terms = model.log_a - np.log(model.b) + 0.5 * model.b * math.log(psi)
        return float(np.exp(special.logsumexp(log_terms)))
    raise ConfigurationError(
        f"user must be 'indoor' or 'outdoor_mog', got {user!r}"
    )


def _check_rule(rule: QuadratureRule) -> None:
    if not isinstance(rule, QuadratureRule):
        raise ConfigurationError("rule must be a QuadratureRule")
    if rule.order < _MIN_QUAD_ORDER:
        raise ConfigurationError(
            f"capacity quadrature needs order >= {_MIN_QUAD_ORDER}, got {rule.order}"
        )


def _log_expectation(log_terms: np.ndarray, kernel: np.ndarray) -> float:
    # sum(exp(log_terms) * kernel) for nonnegative kernels, without leaving
    # log space until the very end.
    value = special.logsumexp(log_terms.ravel(), b=kernel.ravel())
    return float(np.exp(value))


def ec_indoor(pc: PowerConfig, fit: AlphaMuApprox, rule: QuadratureRule) -> float:
    """Ergodic capacity of the indoor user from the moment-matched fit."""
    _check_rule(rule)
    params = fit.as_params()
    t = rule.nodes
    h_sq = t ** (2.0 / params.alpha) * (params.omega / params.beta) ** 2
    kernel = np.log1p(
        pc.p_indoor * h_sq / (pc.noise_w + pc.kappa_sq * pc.power_w * h_sq)
    ) / math.log(2.0)
    log_terms = (
        rule.log_weights
        + (params.mu - 1.0) * np.log(t)
        - special.gammaln(params.mu)
    )
    return _log_expectation(log_terms, kernel)


def _ec_outdoor_mog(
    pc: PowerConfig, model: GammaMixture, rule: QuadratureRule, interference: float
) -> float:
    t = rule.nodes
    log_t = np.log(t)
    log_amp = model.log_a - model.b * np.log(model.c)
    log_terms = (
        log_amp[:, None]
        + (model.b[:, None] - 1.0) * log_t[None, :]
        + rule.log_weights[None, :]
    )
    ratio = (
        pc.p_outdoor
        * t[None, :] ** 2
        / (pc.noise_w * model.c[:, None] ** 2 + t[None, :] ** 2 * interference)
    )
    return _log_expectation(log_terms, np.log1p(ratio) / math.log(2.0))


def _ec_outdoor_gm(
    pc: PowerConfig, model, rule: QuadratureRule, interference: float
) -> float:
    weight, mean, std = _gm_params(model)
    t = rule.nodes
    var2 = 2.0 * std[:, None] ** 2
    log_terms = (
        np.log(weight[:, None])
        - mean[:, None] ** 2 / (2.0 * std[:, None] ** 2)
        - 0.5 * math.log(math.pi)
        + rule.log_weights[None, :]
        - t[None, :] ** 2
        + t[None, :]
        + math.sqrt(2.0) * mean[:, None] * t[None, :] / std[:, None]
    )
    ratio = (
        pc.p_outdoor
        * var2
        * t[None, :] ** 2
        / (pc.noise_w + var2 * t[None, :] ** 2 * interference)
    )
    return _log_expectation(log_terms, np.log1p(ratio) / math.log(2.0))


def ec_outdoor(pc: PowerConfig, model, rule: QuadratureRule) -> float:
    """Ergodic capacity of the outdoor user under either mixture model."""
    _check_rule(rule)
    interference = pc.kappa_sq * pc.power_w + pc.p_indoor
    if isinstance(model, GammaMixture):
        return _ec_outdoor_mog(pc, model, rule, interference)
    if isinstance(model, (GaussianMixture, CollapsedGaussianMixture)):
        return _ec_outdoor_gm(pc, model, rule, interference)
    raise ConfigurationError(
        f"unsupported channel model {type(model).__name__!r}; expected a gamma "
        "or Gaussian mixture"
    )


def ec_high_snr(user: str, pc: PowerConfig, fit: AlphaMuApprox | None = None) -> float:
    """Capacity limit as transmit power grows.

    With nonzero distortion both users saturate at constants fixed by the
    power split; with ideal hardware the indoor capacity keeps growing
    logarithmically (slope one in dB) and needs the fitted envelope
    parameters, while the outdoor capacity still saturates because the
    indoor signal remains as interference.
    """
    if user == "outdoor":
        return math.log2((1.0 + pc.kappa_sq) / (pc.rho_indoor + pc.kappa_sq))
    if user != "indoor":
        raise ConfigurationError(f"user must be 'indoor' or 'outdoor', got {user!r}")
    if pc.kappa_sq > 0.0:
        return math.log2(1.0 + pc.rho_indoor / pc.kappa_sq)
    if fit is None:
        raise ConfigurationError(
            "the ideal-hardware indoor limit needs the fitted envelope parameters"
        )
    params = fit.as_params()
    return 2.0 * digamma(params.mu) / (params.alpha * math.log(2.0)) + math.log2(
        params.omega**2 * pc.p_indoor / (params.beta**2 * pc.noise_w)
    )


def normalized_channel_moments(model, g_chi: float):
    """Second and fourth moments of the envelope scaled by sqrt(g_chi).

    Scaling is deterministic, so the moments of |H|/sqrt(g) are the raw
    moments divided by g and g**2 respectively, whichever mixture or fit
    describes |H|.
    """
    if not (math.isfinite(g_chi) and g_chi > 0.0):
        raise DomainError(f"g_chi must be positive and finite, got {g_chi!r}")
    if isinstance(model, AlphaMuApprox):
        params = model.as_params()
        m2, m4 = alpha_mu_moment(params, 2.0), alpha_mu_moment(params, 4.0)
    elif isinstance(model, GammaMixture):
        m2, m4 = mog_moment(model, 2.0), mog_moment(model, 4.0)
    elif isinstance(model, CollapsedGaussianMixture):
        m2, m4 = gm_sum_moment(model, 2), gm_sum_moment(model, 4)
    elif isinstance(model, GaussianMixture):
        m2, m4 = gm_moment(model, 2), gm_moment(model, 4)
    else:
        raise ConfigurationError(
            f"unsupported channel model {type(model).__name__!r}"
        )
    return m2 / g_chi, m4 / g_chi**2


class LowSnrCapacity(NamedTuple):
    capacity: float
    curvature_ratio: float


def ec_low_snr(
    user: str, pc: PowerConfig, m2: float, m4: float, g_chi: float
) -> LowSnrCapacity:
    """Second-order capacity expansion around zero received SNR.

    ``m2`` and ``m4`` are the moments of the normalized envelope
    |H|/sqrt(g_chi) and ``g_chi`` is the smallest squared element weight,
    so the expansion variable P*g_chi/N0 stays decoupled from the fading
    statistics.  The outdoor curvature carries one extra unit of
    interference because the indoor signal is never cancelled there.

    ``curvature_ratio`` is the magnitude of the second-order term
    relative to the first; treat values above 0.25 as outside the
    expansion's trust region.
    """
    if user == "indoor":
        rho, extra = pc.rho_indoor, 0.0
    elif user == "outdoor":
        rho, extra = pc.rho_outdoor, 1.0
    else:
        raise ConfigurationError(f"user must be 'indoor' or 'outdoor', got {user!r}")
    for name, value in (("m2", m2), ("m4", m4), ("g_chi", g_chi)):
        if not (math.isfinite(value) and value > 0.0):
            raise DomainError(f"{name} must be positive and finite, got {value!r}")
    snr = pc.power_w * g_chi / pc.noise_w
    first = snr * rho * m2
    second = 0.5 * snr**2 * rho * (2.0 * pc.kappa_sq + pc.rho_indoor + extra) * m4
    return LowSnrCapacity(LOG2_E * (first - second), second / first)


def oma_rate_threshold(rate: float) -> float:
    """Linear SNR threshold for a target rate on a half-resource slot."""
    if not (math.isfinite(rate) and rate > 0.0):
        raise DomainError(f"rate must be positive and finite, got {rate!r}")
    return 2.0 ** (2.0 * rate) - 1.0


def noma_rate_threshold(rate: float) -> float:
    """Linear SNR threshold for a target rate on the full resource."""
    if not (math.isfinite(rate) and rate > 0.0):
        raise DomainError(f"rate must be positive and finite, got {rate!r}")
    return 2.0**rate - 1.0


def op_oma(user: str, gamma_th: float, pc: PowerConfig, model) -> float:
    """Outage probability of an orthogonal single-user slot."""
    if not (math.isfinite(gamma_th) and gamma_th > 0.0):
        raise DomainError(f"gamma_th must be positive and finite, got {gamma_th!r}")
    if user == "indoor":
        if not isinstance(model, DeltaSeries):
            raise ConfigurationError("indoor outage requires a DeltaSeries")
        rho, signal = pc.rho_indoor, pc.p_indoor
    elif user == "outdoor":
        rho, signal = pc.rho_outdoor, pc.p_outdoor
    else:
        raise ConfigurationError(f"user must be 'indoor' or 'outdoor', got {user!r}")
    if _own_ceiling_hit(gamma_th, pc, rho):
        return 1.0
    psi = _psi(gamma_th, pc, signal, pc.kappa_sq * pc.power_w)
    x = math.sqrt(psi)
    if user == "indoor":
        return exact_sum_cdf(model, x, tail_tol=_OP_TAIL_TOL)
    return min(1.0, max(0.0, _envelope_cdf(model, x)))


def ec_oma(user: str, pc: PowerConfig, model, rule: QuadratureRule) -> float:
    """Ergodic capacity of an orthogonal single-user slot (half resource)."""
    _check_rule(rule)
    if user == "indoor":
        if not isinstance(model, AlphaMuApprox):
            raise ConfigurationError("indoor capacity requires an AlphaMuApprox")
        return 0.5 * ec_indoor(pc, model, rule)
    if user != "outdoor":
        raise ConfigurationError(f"user must be 'indoor' or 'outdoor', got {user!r}")
    interference = pc.kappa_sq * pc.power_w
    if isinstance(model, GammaMixture):
        return 0.5 * _ec_outdoor_mog(pc, model, rule, interference)
    if isinstance(model, (GaussianMixture, CollapsedGaussianMixture)):
        return 0.5 * _ec_outdoor_gm(pc, model, rule, interference)
    raise ConfigurationError(
        f"unsupported channel model {type(model).__name__!r}; expected a gamma "
        "or Gaussian mixture"
    )
