"""Scalar special functions and Gauss-Laguerre rules used by every analytic result.

Gamma-family functions delegate to scipy.special, which meets the accuracy
contracts for positive arguments. The confluent hypergeometric series and the
large-order Laguerre rules are implemented here: stock routines either lack
the stability transform (1F1 at negative argument) or break down numerically
above Q ~= 200 (NaN / underflowed weights).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, special

from .errors import ConfigurationError, DomainError

_MAX_LAGUERRE_ORDER = 512


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Laguerre rule: integrates e^{-t} f(t) on (0, inf) as sum w_q f(t_q).

    log_weights stays finite for the far-tail nodes whose weights underflow
    float64 (order > ~180), so degree-exactness checks remain possible there.
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray
    log_weights: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.order < 1 or len(self.nodes) != self.order or len(self.weights) != self.order:
            raise ConfigurationError("quadrature rule arrays must match the stated order")
        if not (np.all(np.diff(self.nodes) > 0) and self.nodes[0] > 0):
            raise ConfigurationError("Gauss-Laguerre nodes must be positive and increasing")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ConfigurationError("Gauss-Laguerre weights must sum to 1 within 1e-12")


def gamma_fn(x: float) -> float:
    if x <= 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return float(special.gamma(x))


def lower_incomplete_gamma_reg(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a)."""
    if a <= 0:
        raise DomainError(f"lower_incomplete_gamma_reg requires a > 0, got a={a}")
    if x < 0:
        raise DomainError(f"lower_incomplete_gamma_reg requires x >= 0, got x={x}")
    return float(special.gammainc(a, x))


def gauss_q(x: float) -> float:
    """Gaussian Q-function, the upper tail of the standard normal."""
    return float(special.ndtr(-x))


def digamma(x: float) -> float:
    if x <= 0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    return float(special.digamma(x))


def kummer_1f1(a: float, b: float, x: float, rtol: float = 1e-16, max_terms: int = 5000) -> float:
    """Confluent hypergeometric 1F1(a; b; x) by power series.

    Negative arguments go through the Kummer transform
    1F1(a,b,x) = e^x 1F1(b-a, b, -x) so the summed series has no
    catastrophic cancellation; without it the direct series loses about
    |x|*log10(e) digits. Non-positive-integer a terminates exactly.
    """
    if b <= 0 and b == int(b):
        raise DomainError(f"kummer_1f1 undefined for non-positive integer b={b}")
    a_terminates = a <= 0 and a == int(a)
    if x < 0 and not a_terminates:
        return math.exp(x) * kummer_1f1(b - a, b, -x, rtol=rtol, max_terms=max_terms)
    terms = [1.0]
    t = 1.0
    for k in range(max_terms):
        t *= (a + k) * x / ((b + k) * (k + 1))
        if t == 0.0:
            break
        terms.append(t)
        if abs(t) <= rtol * abs(math.fsum(terms)) and (x <= 0 or k > x):
            break
    return math.fsum(terms)


def _laguerre_log_weights(order: int, nodes: np.ndarray) -> np.ndarray:
    # w_q = t_q / ((Q+1) L_{Q+1}(t_q))^2, recurrence run with exponent tracking
    lk_1 = np.ones_like(nodes)          # L_0
    lk = 1.0 - nodes                    # L_1
    log_scale = np.zeros_like(nodes)
    for k in range(1, order + 1):
        lk_1, lk = lk, ((2 * k + 1 - nodes) * lk - k * lk_1) / (k + 1)
        mag = np.maximum(np.abs(lk), np.abs(lk_1))
        mag[mag == 0] = 1.0
        log_scale += np.log(mag)
        lk /= mag
        lk_1 /= mag
    return np.log(nodes) - 2 * (log_scale + np.log(np.abs(lk)) + math.log(order + 1))


def gauss_laguerre(order: int) -> QuadratureRule:
    """Golub-Welsch construction of the Q-point Gauss-Laguerre rule, Q <= 512."""
    if not isinstance(order, (int, np.integer)) or not 1 <= order <= _MAX_LAGUERRE_ORDER:
        raise ConfigurationError(
            f"Gauss-Laguerre order must be an integer in [1, {_MAX_LAGUERRE_ORDER}], got {order}"
        )
    q = int(order)
    diag = 2.0 * np.arange(q) + 1.0
    offdiag = np.arange(1.0, q)
    if q == 1:
        nodes = np.array([1.0])
    else:
        nodes = linalg.eigh_tridiagonal(diag, offdiag, eigvals_only=True)
    # exp of the recurrence-tracked logs keeps full relative accuracy out in
    # the tail, where squared first-eigenvector components lose all digits;
    # rescale by the total (1 + O(Q eps)) so the unit-mass contract holds
    log_weights = _laguerre_log_weights(q, nodes)
    weights = np.exp(log_weights)
    total = weights.sum()
    return QuadratureRule(q, nodes, weights / total, log_weights - math.log(total))
