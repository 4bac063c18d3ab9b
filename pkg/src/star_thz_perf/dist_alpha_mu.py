"""The alpha-mu fading distribution and distributions of weighted sums of
independent alpha-mu envelopes.

Two routes are provided for the sum Y = sum_m A_m X_m with X_m i.i.d.:

* an exact single-series form whose coefficients delta_i come from an M-fold
  Cauchy-product recursion, and
* a moment-matched alpha-mu surrogate fitted on the first, second and fourth
  moments of Y.

The exact series alternates in sign and its partial terms can exceed the sum
by many orders of magnitude, so series evaluation runs in arbitrary precision
with the working precision escalated until the measured cancellation leaves
enough significant digits. Coefficient recursions themselves are
cancellation-free (every product contributing to delta_i carries the same
sign), which keeps the escalation cheap and predictable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np
from scipy import optimize, special

from .errors import ConfigurationError, DomainError, NumericalError

_MAX_SERIES_TERMS = 512
_BASE_DPS = 30
_GUARD_DIGITS = 20
_TRUNC_RATIO = 1e-10
_TAIL_K_MAX = 64


@dataclass(frozen=True)
class AlphaMuParams:
    """Envelope distribution with nonlinearity alpha, cluster count mu, mean omega."""

    alpha: float
    mu: float
    omega: float

    def __post_init__(self):
        for name in ("alpha", "mu", "omega"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ConfigurationError(f"AlphaMuParams.{name} must be positive, got {v}")

    @property
    def beta(self) -> float:
        return math.exp(math.lgamma(self.mu + 1.0 / self.alpha) - math.lgamma(self.mu))

    @property
    def x_hat(self) -> float:
        """alpha-root mean value: the scale at which X = x_hat (G/mu)^(1/alpha)."""
        return self.omega / self.beta * self.mu ** (1.0 / self.alpha)


def alpha_mu_pdf(p: AlphaMuParams, x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("alpha_mu_pdf requires x > 0")
    am = p.alpha * p.mu
    log_pref = math.log(p.alpha) + am * (math.log(p.beta) - math.log(p.omega)) - math.lgamma(p.mu)
    out = np.exp(log_pref + (am - 1.0) * np.log(x) - (p.beta * x / p.omega) ** p.alpha)
    return out if out.ndim else float(out)


def alpha_mu_cdf(p: AlphaMuParams, x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("alpha_mu_cdf requires x >= 0")
    out = special.gammainc(p.mu, (p.beta * x / p.omega) ** p.alpha)
    return out if out.ndim else float(out)


def alpha_mu_moment(p: AlphaMuParams, nu: float) -> float:
    """E[X^nu]; closed form in gamma functions, valid for nu >= 1."""
    if nu < 1:
        raise DomainError(f"alpha_mu_moment requires nu >= 1, got {nu}")
    lg = (nu - 1.0) * math.lgamma(p.mu) + math.lgamma(p.mu + nu / p.alpha) \
        - nu * math.lgamma(p.mu + 1.0 / p.alpha)
    return math.exp(lg) * p.omega ** nu


def alpha_mu_sample(p: AlphaMuParams, rng: np.random.Generator, size=None):
    """Draw envelopes as x_hat (G/mu)^(1/alpha) with G standard gamma(mu)."""
    g = rng.standard_gamma(p.mu, size=size)
    return p.x_hat * (g / p.mu) ** (1.0 / p.alpha)


def _moment_ratio_log(log_alpha: float, log_mu: float, nu2: int) -> float:
    # log of E^2[X^(nu2/2)] / E[X^nu2] for omega = 1; scale-free fit target
    a, m = math.exp(log_alpha), math.exp(log_mu)
    nu1 = nu2 // 2

    def log_m(nu):
        return (nu - 1.0) * math.lgamma(m) + math.lgamma(m + nu / a) - nu * math.lgamma(m + 1.0 / a)

    return 2.0 * log_m(nu1) - log_m(nu2)


@dataclass(frozen=True)
class AlphaMuApprox:
    """Moment-matched alpha-mu surrogate for a weighted sum of envelopes."""

    alpha_star: float
    mu_star: float
    omega_star: float

    @property
    def beta_star(self) -> float:
        return self.as_params().beta

    def as_params(self) -> AlphaMuParams:
        return AlphaMuParams(self.alpha_star, self.mu_star, self.omega_star)


@dataclass(frozen=True)
class DeltaSeries:
    """Coefficients of the exact series for Y = sum_m weights[m] * X_m.

    delta holds the float view of the coefficients (sign pattern (-1)^i);
    evaluation never uses it directly, working instead from the cached
    arbitrary-precision coefficients so evaluation precision can grow with
    the measured term cancellation at the requested point.
    """

    weights: tuple
    base: AlphaMuParams
    n_terms: int
    delta: tuple
    prefactor: float
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def m_count(self) -> int:
        return len(self.weights)


def _mp_deltas(weights, base: AlphaMuParams, n_terms: int, dps: int):
    """delta_0..delta_{n_terms} at the given working precision."""
    with mp.workdps(dps + _GUARD_DIGITS):
        alpha = mp.mpf(base.alpha)
        mu = mp.mpf(base.mu)
        x_hat = mp.mpf(base.omega) / (mp.gamma(mu + 1 / alpha) / mp.gamma(mu)) * mu ** (1 / alpha)

        def b_column(a_m):
            xm = mp.mpf(a_m) * x_hat
            return [
                (-1) ** k * mp.gamma(alpha * (k + mu)) * mu ** k
                / (mp.factorial(k) * xm ** (alpha * (k + mu)))
                for k in range(n_terms + 1)
            ]

        delta = b_column(weights[0])
        for a_m in weights[1:]:
            col = b_column(a_m)
            delta = [
                mp.fsum(delta[i - j] * col[j] for j in range(i + 1))
                for i in range(n_terms + 1)
            ]
        return delta


def _cached_deltas(s: DeltaSeries, n_terms: int, dps: int):
    key_dps, key_n, cached = s._cache.get("deltas", (0, -1, None))
    if key_dps >= dps and key_n >= n_terms:
        return cached[: n_terms + 1]
    deltas = _mp_deltas(s.weights, s.base, n_terms, dps)
    s._cache["deltas"] = (dps, n_terms, deltas)
    return deltas


def build_delta_series(weights, base: AlphaMuParams, n_terms: int = 30) -> DeltaSeries:
    weights = tuple(float(w) for w in weights)
    if len(weights) == 0:
        raise ConfigurationError("at least one summand weight is required")
    if any(not (np.isfinite(w) and w > 0) for w in weights):
        raise ConfigurationError("summand weights must be positive and finite")
    if not 1 <= int(n_terms) <= _MAX_SERIES_TERMS:
        raise ConfigurationError(f"n_terms must be in [1, {_MAX_SERIES_TERMS}], got {n_terms}")
    n_terms = int(n_terms)
    deltas = _mp_deltas(weights, base, n_terms, _BASE_DPS)
    m_count = len(weights)
    prefactor = (base.alpha * base.mu**base.mu / math.gamma(base.mu)) ** m_count
    series = DeltaSeries(weights, base, n_terms, tuple(float(d) for d in deltas), prefactor)
    series._cache["deltas"] = (_BASE_DPS, n_terms, deltas)
    return series


def _mp_series_sum(s: DeltaSeries, x: float, kind: str, i_lo: int, i_hi: int,
                   check_tail: bool = True):
    """Signed sum of series terms i_lo..i_hi at x, precision escalated until
    the result retains at least ~12 significant digits after cancellation.

    Returns ``(value, settled)``; ``settled`` is False when the final term
    is still significant against the sum, i.e. the table has too few terms
    for this x and the value is truncation-dominated garbage.  Tail checks
    are skipped for callers that sum deliberately unconverged blocks.
    """
    m, alpha, mu = s.m_count, mp.mpf(s.base.alpha), mp.mpf(s.base.mu)
    shift = 0 if kind == "pdf" else 1
    # Start at base precision even when the coefficient cache has grown;
    # cached high-precision deltas are reused, only the sum re-runs.
    dps = _BASE_DPS
    for _ in range(6):
        deltas = _cached_deltas(s, i_hi, dps)
        with mp.workdps(dps + _GUARD_DIGITS):
            xm = mp.mpf(x)
            pref = (alpha * mu**mu / mp.gamma(mu)) ** m
            terms = []
            for i in range(i_lo, i_hi + 1):
                e = i * alpha + m * alpha * mu
                terms.append(deltas[i] * xm ** (e - 1 + shift) / mp.gamma(e + shift))
            total = mp.fsum(terms)
            peak = max(abs(t) for t in terms)
            if peak == 0:
                return 0.0, True
            if check_tail:
                floor = max(abs(total), peak * mp.mpf(10) ** -dps)
                if abs(terms[-1]) > _TRUNC_RATIO * floor:
                    return float(pref * total), False
            if total == 0:
                lost = dps
            else:
                lost = max(0, int(mp.log10(peak / abs(total))) + 1)
            if dps - lost >= 12:
                return float(pref * total), True
        dps = lost + _BASE_DPS
    raise NumericalError(
        "series evaluation failed to stabilise",
        diagnostics={"x": x, "kind": kind, "digits_lost": lost, "dps": dps},
    )


def _log_tail_bound(s: DeltaSeries, x: float) -> float:
    """log of a rigorous Markov bound on P(Y > x), optimized over even
    moment orders; scale-invariant, so the moment table is built once on
    unit-normalized weights."""
    table = s._cache.get("tail_log_moments")
    if table is None:
        scale = float(np.sum(s.weights))
        norm = tuple(float(w) / scale for w in s.weights)
        moments = _sum_moments(norm, s.base, _TAIL_K_MAX)
        table = (scale, {k: math.log(moments[k]) for k in range(2, _TAIL_K_MAX + 1, 2)})
        s._cache["tail_log_moments"] = table
    scale, log_m = table
    log_x = math.log(x / scale)
    return min(lm - k * log_x for k, lm in log_m.items())


def _truncation_failure(s: DeltaSeries, x: float, kind: str, bound: float) -> NumericalError:
    return NumericalError(
        "series table has too few terms to converge at this point",
        diagnostics={
            "x": x,
            "kind": kind,
            "n_terms": s.n_terms,
            "tail_probability_bound": bound,
        },
    )


def exact_sum_pdf(s: DeltaSeries, x: float) -> float:
    if x <= 0:
        raise DomainError("exact_sum_pdf requires x > 0")
    value, settled = _mp_series_sum(s, x, "pdf", 0, s.n_terms)
    if not settled:
        raise _truncation_failure(s, x, "pdf", math.exp(min(_log_tail_bound(s, x), 0.0)))
    return max(0.0, value)


def exact_sum_cdf(s: DeltaSeries, x: float, tail_tol: float = 1e-12) -> float:
    """CDF of the weighted sum.  Points beyond the series' convergent range
    resolve to exactly 1.0 when the remaining upper-tail mass is provably
    below ``tail_tol``; otherwise the truncation is reported as an error."""
    if not 0.0 < tail_tol < 1.0:
        raise ConfigurationError(f"tail_tol must be in (0, 1), got {tail_tol!r}")
    if x < 0:
        raise DomainError("exact_sum_cdf requires x >= 0")
    if x == 0:
        return 0.0
    value, settled = _mp_series_sum(s, x, "cdf", 0, s.n_terms)
    if settled:
        return min(1.0, max(0.0, value))
    bound = math.exp(min(_log_tail_bound(s, x), 0.0))
    if bound <= tail_tol:
        return 1.0
    raise _truncation_failure(s, x, "cdf", bound)


def _f64_series_logs(s: DeltaSeries):
    """Float64 log-magnitude view of the CDF series terms, cached."""
    cached = s._cache.get("f64_cdf")
    if cached is not None:
        return cached
    deltas = _cached_deltas(s, s.n_terms, _BASE_DPS)
    e = s.base.alpha * (np.arange(s.n_terms + 1) + s.m_count * s.base.mu)
    with mp.workdps(_BASE_DPS):
        sign = np.array([float(mp.sign(d)) for d in deltas])
        log_abs = np.array(
            [float(mp.log(abs(d))) if d != 0 else -math.inf for d in deltas]
        )
    cached = (sign, log_abs - special.gammaln(e + 1.0), e)
    s._cache["f64_cdf"] = cached
    return cached


def exact_sum_cdf_batch(
    s: DeltaSeries,
    x,
    tail_tol: float = 1e-12,
    abs_tol: float = 1e-9,
) -> np.ndarray:
    """CDF of the weighted sum over a whole grid of points.

    Terms are summed in ordinary floating point wherever that provably
    keeps the absolute error below ``abs_tol`` (the cancellation noise
    floor is ``n_terms * eps`` in units of the largest term); any point
    failing the certificate, or failing the truncation check, falls back
    to the arbitrary-precision scalar path, so saturation and error
    semantics match ``exact_sum_cdf`` pointwise.
    """
    if not 0.0 < abs_tol < 1.0:
        raise ConfigurationError(f"abs_tol must be in (0, 1), got {abs_tol!r}")
    arr = np.asarray(x, dtype=float)
    if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr < 0)):
        raise DomainError("exact_sum_cdf_batch requires finite x >= 0")
    flat = arr.ravel()
    out = np.zeros(flat.shape)
    sign, log_amp, e = _f64_series_logs(s)
    log_pref = s.m_count * (
        math.log(s.base.alpha)
        + s.base.mu * math.log(s.base.mu)
        - math.lgamma(s.base.mu)
    )
    log_noise = math.log(e.size * np.finfo(float).eps)
    positive = np.flatnonzero(flat > 0.0)
    chunk = max(1, (1 << 22) // e.size)
    for start in range(0, positive.size, chunk):
        ii = positive[start : start + chunk]
        log_terms = log_amp[None, :] + np.log(flat[ii])[:, None] * e[None, :]
        peak = log_terms.max(axis=1)
        rel = np.exp(log_terms - peak[:, None])
        total = rel @ sign
        settled = rel[:, -1] <= _TRUNC_RATIO * np.maximum(np.abs(total), 1e-15)
        certified = peak + log_pref + log_noise <= math.log(abs_tol)
        with np.errstate(over="ignore"):
            values = total * np.exp(peak + log_pref)
        good = (
            settled
            & certified
            & np.isfinite(values)
            & (values > -abs_tol)
            & (values < 1.0 + abs_tol)
        )
        out[ii[good]] = np.clip(values[good], 0.0, 1.0)
        for j in ii[~good]:
            out[j] = exact_sum_cdf(s, float(flat[j]), tail_tol=tail_tol)
    return out.reshape(arr.shape)


def truncation_error(s: DeltaSeries, x: float, kind: str) -> float:
    """|S_2N - S_N| at x, where S_k is the k-term partial sum: the magnitude
    of the block of terms i = N..2N-1 accumulated in extended precision."""
    if kind not in ("pdf", "cdf"):
        raise ConfigurationError(f"kind must be 'pdf' or 'cdf', got {kind!r}")
    if x <= 0:
        raise DomainError("truncation_error requires x > 0")
    n = s.n_terms
    value, _ = _mp_series_sum(s, x, kind, n, 2 * n - 1, check_tail=False)
    return abs(value)


def _sum_moments(weights, base: AlphaMuParams, nu_max: int):
    """E[Y^nu] for nu = 0..nu_max by binomial build-up over the summands."""
    single = [1.0] + [alpha_mu_moment(base, k) for k in range(1, nu_max + 1)]
    acc = [1.0] + [0.0] * nu_max
    for a_m in weights:
        nxt = [
            math.fsum(
                math.comb(nu, j) * acc[nu - j] * a_m**j * single[j]
                for j in range(nu + 1)
            )
            for nu in range(nu_max + 1)
        ]
        acc = nxt
    return acc


def fit_alpha_mu_approx(weights, base: AlphaMuParams) -> AlphaMuApprox:
    """Match an alpha-mu law to Y = sum_m weights[m] X_m on moments 1, 2, 4.

    The scale-free part solves a 2D root-find on the moment ratios
    E^2[Y]/E[Y^2] and E^2[Y^2]/E[Y^4]; the first moment then sets the scale.
    """
    weights = tuple(float(w) for w in weights)
    if len(weights) == 0:
        raise ConfigurationError("at least one summand weight is required")
    m0, m1, m2, m3, m4 = _sum_moments(weights, base, 4)
    target = np.array([2 * math.log(m1) - math.log(m2), 2 * math.log(m2) - math.log(m4)])

    def residual(v):
        return np.array([
            _moment_ratio_log(v[0], v[1], 2),
            _moment_ratio_log(v[0], v[1], 4),
        ]) - target

    x0 = np.array([math.log(base.alpha), math.log(len(weights) * base.mu)])
    sol = optimize.root(residual, x0, method="hybr", tol=1e-13)
    res = residual(sol.x)
    if not sol.success or np.max(np.abs(res)) > 1e-9:
        raise NumericalError(
            "moment-ratio fit did not converge",
            diagnostics={"residuals": res.tolist(), "x": sol.x.tolist()},
        )
    approx = AlphaMuApprox(math.exp(sol.x[0]), math.exp(sol.x[1]), m1)
    fitted = approx.as_params()
    for nu, tgt in ((1, m1), (2, m2), (4, m4)):
        got = alpha_mu_moment(fitted, nu)
        if abs(got - tgt) > 1e-8 * tgt:
            raise NumericalError(
                "fitted moments drifted from targets",
                diagnostics={"nu": nu, "target": tgt, "fitted": got},
            )
    return approx
