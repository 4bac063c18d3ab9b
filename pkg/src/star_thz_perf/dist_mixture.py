"""Mixture-of-gamma and Gaussian-mixture envelope models and the collapsed
mixtures describing weighted sums of such envelopes.

A weighted sum of mixture envelopes is again (approximately) a mixture: each
multi-index over per-summand components contributes one collapsed term. For
Gaussian components the collapse is exact (sums of independent Gaussians);
for gamma components each multi-index term is moment-matched on its first two
moments. Enumeration streams over index blocks with small-weight pruning so
panel-sized sums (e.g. 3^9 indices) stay tractable.

Gamma amplitudes are held in log form: for centimeter-scale e2e weights the
linear amplitude a = phi3 c^b / Gamma(b) overflows float64 (c ~ 1/weight,
b ~ M*b_n) even though every density, mass, and moment stays well scaled.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ConfigurationError, DomainError, NumericalError
from .special_math import kummer_1f1

_INDEX_GUARD = 10**7
_INDEX_BLOCK = 1 << 16
_PRUNE_DEFAULT = 1e-12


def _as_component_array(components, n_fields, what):
    arr = np.asarray(components, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != n_fields or arr.shape[0] == 0:
        raise ConfigurationError(f"{what} needs a nonempty list of {n_fields}-tuples")
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"{what} has non-finite parameters")
    return arr


@dataclass(frozen=True)
class GammaMixture:
    """Envelope density sum_n a_n x^(b_n - 1) e^(-c_n x), a_n = exp(log_a_n)."""

    log_a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        if not (len(self.log_a) == len(self.b) == len(self.c)) or len(self.log_a) == 0:
            raise ConfigurationError("GammaMixture parameter arrays must be nonempty and aligned")
        if np.any(self.b <= 0) or np.any(self.c <= 0):
            raise ConfigurationError("GammaMixture requires positive shapes b and rates c")
        total = self.component_masses().sum()
        if abs(total - 1.0) > 1e-8:
            raise ConfigurationError(
                f"GammaMixture must be normalized: component masses sum to {total!r}"
            )

    @classmethod
    def from_components(cls, components):
        arr = _as_component_array(components, 3, "GammaMixture")
        if np.any(arr[:, 0] <= 0):
            raise ConfigurationError("GammaMixture amplitudes a must be positive")
        return cls(np.log(arr[:, 0]), arr[:, 1].copy(), arr[:, 2].copy())

    @property
    def a(self) -> np.ndarray:
        return np.exp(self.log_a)

    @property
    def count(self) -> int:
        return len(self.b)

    def component_masses(self) -> np.ndarray:
        """exp(log a_n) c_n^(-b_n) Gamma(b_n): probability mass per component."""
        return np.exp(self.log_a + special.gammaln(self.b) - self.b * np.log(self.c))


@dataclass(frozen=True)
class GaussianMixture:
    """Envelope model sum_n w_n Normal(mean_n, std_n^2)."""

    weight: np.ndarray
    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        if not (len(self.weight) == len(self.mean) == len(self.std)) or len(self.weight) == 0:
            raise ConfigurationError("GaussianMixture parameter arrays must be nonempty and aligned")
        if np.any(self.weight <= 0) or np.any(self.weight > 1) or np.any(self.std <= 0):
            raise ConfigurationError("GaussianMixture needs weights in (0,1] and positive stds")
        if abs(self.weight.sum() - 1.0) > 1e-10:
            raise ConfigurationError("GaussianMixture weights must sum to 1 within 1e-10")

    @classmethod
    def from_components(cls, components):
        arr = _as_component_array(components, 3, "GaussianMixture")
        return cls(arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy())

    @property
    def count(self) -> int:
        return len(self.weight)


class CollapsedGammaMixture(GammaMixture):
    """Weighted-sum surrogate: one moment-matched gamma term per multi-index."""

    @property
    def terms(self):
        return list(zip(self.a, self.b, self.c))


@dataclass(frozen=True)
class CollapsedGaussianMixture:
    """Weighted-sum law: exact Gaussian per multi-index (weight, mean, var)."""

    weight: np.ndarray
    mean: np.ndarray
    var: np.ndarray

    def as_mixture(self) -> GaussianMixture:
        return GaussianMixture(self.weight, self.mean, np.sqrt(self.var))

    @property
    def terms(self):
        return list(zip(self.weight, self.mean, self.var))


# ---------------------------------------------------------------- densities

def mog_pdf(g: GammaMixture, x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("mog_pdf requires x > 0")
    xs = x[..., None]
    out = np.sum(np.exp(g.log_a + (g.b - 1) * np.log(xs) - g.c * xs), axis=-1)
    return out if out.ndim else float(out)


def mog_cdf(g: GammaMixture, x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("mog_cdf requires x >= 0")
    out = np.sum(g.component_masses() * special.gammainc(g.b, g.c * x[..., None]), axis=-1)
    return out if out.ndim else float(out)


def mog_moment(g: GammaMixture, nu: float) -> float:
    if nu < 1:
        raise DomainError(f"mog_moment requires nu >= 1, got {nu}")
    return float(np.sum(np.exp(g.log_a + special.gammaln(g.b + nu) - (g.b + nu) * np.log(g.c))))


def mog_sample(g: GammaMixture, rng: np.random.Generator, size=None):
    """Draw envelopes: pick a component by mass, then gamma(b_n, 1/c_n)."""
    masses = g.component_masses()
    idx = rng.choice(len(masses), size=size, p=masses / masses.sum())
    draw = rng.standard_gamma(g.b[idx]) / g.c[idx]
    return draw if np.ndim(draw) else float(draw)


def _gm_params(g):
    if isinstance(g, CollapsedGaussianMixture):
        return g.weight, g.mean, np.sqrt(g.var)
    return g.weight, g.mean, g.std


def gm_pdf(g: GaussianMixture | CollapsedGaussianMixture, x):
    w, mu, sd = _gm_params(g)
    x = np.asarray(x, dtype=float)
    z = (x[..., None] - mu) / sd
    out = np.sum(w / (math.sqrt(2 * math.pi) * sd) * np.exp(-0.5 * z**2), axis=-1)
    return out if out.ndim else float(out)


def gm_cdf(g: GaussianMixture | CollapsedGaussianMixture, x):
    w, mu, sd = _gm_params(g)
    x = np.asarray(x, dtype=float)
    out = np.sum(w * special.ndtr((x[..., None] - mu) / sd), axis=-1)
    return out if out.ndim else float(out)


def gm_sample(g: GaussianMixture | CollapsedGaussianMixture, rng: np.random.Generator, size=None):
    """Draw from the mixture as-is, left tails included."""
    w, mu, sd = _gm_params(g)
    idx = rng.choice(len(w), size=size, p=w / np.sum(w))
    draw = rng.normal(mu[idx], sd[idx])
    return draw if np.ndim(draw) else float(draw)


def _gaussian_abs_moment(nu: int, mean, sd) -> np.ndarray:
    half = -(np.asarray(mean) ** 2) / (2 * np.asarray(sd) ** 2)
    f1 = np.vectorize(kummer_1f1)
    if nu % 2 == 0:
        pref = sd**nu * 2 ** (nu / 2) * math.gamma((nu + 1) / 2) / math.sqrt(math.pi)
        return pref * f1(-nu / 2.0, 0.5, half)
    pref = mean * sd ** (nu - 1) * 2 ** ((nu + 1) / 2) * math.gamma(nu / 2 + 1) / math.sqrt(math.pi)
    return pref * f1((1 - nu) / 2.0, 1.5, half)


def gm_moment(g: GaussianMixture | CollapsedGaussianMixture, nu: int) -> float:
    if nu < 1 or nu != int(nu):
        raise DomainError(f"gm_moment requires integer nu >= 1, got {nu}")
    w, mu, sd = _gm_params(g)
    return float(np.sum(w * _gaussian_abs_moment(int(nu), mu, sd)))


# ----------------------------------------------------------------- collapse

def _check_sum_inputs(weights, count):
    weights = np.asarray(weights, dtype=float)
    if weights.ndim != 1 or len(weights) == 0:
        raise ConfigurationError("at least one summand weight is required")
    if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
        raise ConfigurationError("summand weights must be positive and finite")
    if count ** len(weights) > _INDEX_GUARD:
        raise ConfigurationError(
            f"{count}^{len(weights)} collapsed terms exceed the {_INDEX_GUARD:.0e} guard; "
            "prune mixture components or reduce the summand count"
        )
    return weights


def _index_blocks(count, m):
    """Stream multi-indices as (block, M) integer arrays."""
    shape = (count,) * m
    total = count**m
    for start in range(0, total, _INDEX_BLOCK):
        flat = np.arange(start, min(start + _INDEX_BLOCK, total))
        yield np.stack(np.unravel_index(flat, shape), axis=1)


def collapse_mog_sum(weights, g: GammaMixture, prune: float = _PRUNE_DEFAULT) -> CollapsedGammaMixture:
    """Moment-matched gamma term per component multi-index.

    Per index n = (n_1..n_M): the selected scaled gamma envelopes sum to mean
    phi1 and variance phi2; (b, c) = (phi1^2/phi2, phi1/phi2) reproduce both,
    and the index probability phi3 = prod of component masses sets the term
    amplitude. Terms with phi3 below `prune` are dropped, the rest renormalized.
    """
    weights = _check_sum_inputs(weights, g.count)
    log_mass = g.log_a + special.gammaln(g.b) - g.b * np.log(g.c)
    log_prune = math.log(prune) if prune > 0 else -math.inf
    parts = []
    for sel in _index_blocks(g.count, len(weights)):
        scaled = weights * g.b[sel] / g.c[sel]
        phi1 = scaled.sum(axis=1)
        phi2 = (weights * scaled / g.c[sel]).sum(axis=1)
        log_phi3 = log_mass[sel].sum(axis=1)
        keep = log_phi3 >= log_prune
        if not np.any(keep):
            continue
        b = phi1[keep] ** 2 / phi2[keep]
        c = phi1[keep] / phi2[keep]
        log_a = log_phi3[keep] + b * np.log(c) - special.gammaln(b)
        parts.append((log_a, b, c, log_phi3[keep]))
    if not parts:
        raise NumericalError("all collapsed terms fell below the pruning threshold")
    log_a, b, c, log_phi3 = (np.concatenate(cols) for cols in zip(*parts))
    log_total = special.logsumexp(log_phi3)
    return CollapsedGammaMixture(log_a - log_total, b, c)


def collapse_gm_sum(weights, g: GaussianMixture, prune: float = _PRUNE_DEFAULT) -> CollapsedGaussianMixture:
    """Exact mixture of the sum: per index, weights multiply while means and
    variances add with the summand scalings applied."""
    weights = _check_sum_inputs(weights, g.count)
    log_w = np.log(g.weight)
    log_prune = math.log(prune) if prune > 0 else -math.inf
    parts = []
    for sel in _index_blocks(g.count, len(weights)):
        lw = log_w[sel].sum(axis=1)
        keep = lw >= log_prune
        if not np.any(keep):
            continue
        sel = sel[keep]
        parts.append((
            np.exp(lw[keep]),
            (weights * g.mean[sel]).sum(axis=1),
            (weights**2 * g.std[sel] ** 2).sum(axis=1),
        ))
    if not parts:
        raise NumericalError("all collapsed terms fell below the pruning threshold")
    w, mean, var = (np.concatenate(cols) for cols in zip(*parts))
    return CollapsedGaussianMixture(w / w.sum(), mean, var)


def gm_sum_moment(c: CollapsedGaussianMixture, nu: int) -> float:
    """E[Y^nu] of the collapsed Gaussian mixture; polynomial closed forms for
    nu = 2 and 4, the general confluent-hypergeometric branch otherwise."""
    if nu == 2:
        return float(np.sum(c.weight * (c.mean**2 + c.var)))
    if nu == 4:
        return float(np.sum(c.weight * (c.mean**4 + 6 * c.mean**2 * c.var + 3 * c.var**2)))
    return gm_moment(c, nu)


# ------------------------------------------------------------------ fitting

def _gamma_em_once(x, n_components, rng):
    n = len(x)
    log_x = np.log(x)
    # quantile-sliced moment init, jittered per restart
    order = np.argsort(x)
    slices = np.array_split(order, n_components)
    mean = np.array([x[s].mean() for s in slices]) * rng.uniform(0.9, 1.1, n_components)
    var = np.array([max(x[s].var(), 1e-6) for s in slices]) * rng.uniform(0.8, 1.2, n_components)
    shape = np.clip(mean**2 / var, 0.05, 1e4)
    rate = shape / mean
    w = np.full(n_components, 1.0 / n_components)

    prev_ll = -np.inf
    lls = []
    for _ in range(500):
        log_comp = (
            np.log(w) + shape * np.log(rate) - special.gammaln(shape)
            + (shape - 1) * log_x[:, None] - rate * x[:, None]
        )
        norm = special.logsumexp(log_comp, axis=1)
        ll = norm.mean()
        if not np.isfinite(ll):
            return None, lls
        resp = np.exp(log_comp - norm[:, None])
        r_sum = resp.sum(axis=0)
        if np.any(r_sum < 1e-8 * n):
            return None, lls
        w = r_sum / n
        mean_x = resp.T @ x / r_sum
        mean_lx = resp.T @ log_x / r_sum
        s = np.maximum(np.log(mean_x) - mean_lx, 1e-12)
        # Newton in shape for log(k) - psi(k) = s, from the Minka starting point
        k = np.clip((3 - s + np.sqrt((s - 3) ** 2 + 24 * s)) / (12 * s), 1e-3, 1e6)
        for _ in range(25):
            f = np.log(k) - special.digamma(k) - s
            fp = 1.0 / k - special.polygamma(1, k)
            step = np.clip(f / fp, -0.5 * k, 0.5 * k)
            k = k - step
            if np.max(np.abs(step) / k) < 1e-12:
                break
        shape = k
        rate = shape / mean_x
        lls.append(ll)
        if ll - prev_ll < 1e-10 * max(1.0, abs(ll)) and len(lls) > 5:
            break
        prev_ll = ll
    log_a = np.log(w) + shape * np.log(rate) - special.gammaln(shape)
    return GammaMixture(log_a, shape, rate), lls


def fit_mog_from_samples(samples, n_components: int, seed: int = 0, return_diagnostics: bool = False):
    """EM fit of a gamma mixture to positive envelope samples.

    Degenerate runs (emptied components, non-finite likelihood) restart with
    jittered initialization, up to 10 times.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or len(x) < 10**4:
        raise ConfigurationError("fitting needs a flat array of at least 1e4 samples")
    if np.any(x <= 0):
        raise ConfigurationError("samples must be positive envelopes")
    if not 1 <= n_components <= 8:
        raise ConfigurationError("n_components must be in [1, 8]")
    rng = np.random.default_rng(seed)
    last_lls = []
    for _ in range(10):
        fit, lls = _gamma_em_once(x, n_components, rng)
        last_lls = lls
        if fit is not None:
            return (fit, {"loglik": lls}) if return_diagnostics else fit
    raise NumericalError(
        "EM failed to produce a stable mixture after 10 restarts",
        diagnostics={"loglik_trace": last_lls},
    )


def rician_sample(k_factor: float, rng: np.random.Generator, size=None):
    """Unit-power Rician envelope: line-of-sight power K/(K+1), scatter 1/(K+1)."""
    if k_factor < 0:
        raise DomainError(f"Rician K factor must be nonnegative, got {k_factor}")
    los = math.sqrt(k_factor / (k_factor + 1.0))
    sigma = math.sqrt(0.5 / (k_factor + 1.0))
    re = rng.normal(los, sigma, size=size)
    im = rng.normal(0.0, sigma, size=size)
    return np.hypot(re, im)


# ------------------------------------------------------------------- config

def mixture_from_dict(payload: dict):
    """Parse `{"type": "mog"|"gm", "components": [...]}` parameter payloads."""
    if not isinstance(payload, dict) or "type" not in payload or "components" not in payload:
        raise ConfigurationError("mixture payload needs 'type' and 'components' keys")
    kind = payload["type"]
    comps = payload["components"]
    try:
        if kind == "mog":
            return GammaMixture.from_components([(c["a"], c["b"], c["c"]) for c in comps])
        if kind == "gm":
            return GaussianMixture.from_components(
                [(c["weight"], c["mean"], c["std"]) for c in comps]
            )
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"malformed {kind} component list: {exc}") from exc
    raise ConfigurationError(f"unknown mixture type {kind!r}; expected 'mog' or 'gm'")


def mixture_to_dict(g) -> dict:
    if isinstance(g, GammaMixture):
        return {
            "type": "mog",
            "components": [
                {"a": float(a), "b": float(b), "c": float(c)}
                for a, b, c in zip(g.a, g.b, g.c)
            ],
        }
    if isinstance(g, GaussianMixture):
        return {
            "type": "gm",
            "components": [
                {"weight": float(w), "mean": float(m), "std": float(s)}
                for w, m, s in zip(g.weight, g.mean, g.std)
            ],
        }
    raise ConfigurationError(f"cannot serialize {type(g).__name__}")


def load_mixture(path):
    with open(path, "r", encoding="utf-8") as fh:
        return mixture_from_dict(json.load(fh))
