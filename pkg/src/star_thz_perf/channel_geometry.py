"""Surface geometry, terahertz path gains, and end-to-end link weights.

A planar reconfigurable surface is modelled as a grid of rectangular
elements in the z = 0 plane with a feed antenna on the boresight axis at
height ``d0``.  Each element captures a fraction of the radiated energy
(its near-field energy), and every element splits or routes its signal
toward the two served directions according to the operating protocol.
The end-to-end amplitude weight of element ``m`` toward side ``chi`` is

    A[chi, m] = hbar_chi * sqrt(upsilon_m) * a[chi, m]

where ``hbar_chi`` is the deterministic terahertz path gain of that
side's propagation hop and ``a[chi, m]`` the protocol amplitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError, NumericalError

SPEED_OF_LIGHT = 299_792_458.0

_ES_BALANCE_TOL = 1e-9
_QUAD_TOL = 1e-12
_QUAD_MAX_RECTS = 20_000


def _locked(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ThzLinkParams:
    """Deterministic description of one terahertz propagation hop."""

    frequency_hz: float
    distance_m: float
    tx_gain: float
    rx_gain: float
    absorption_per_m: float = 0.0

    def __post_init__(self) -> None:
        for name in ("frequency_hz", "distance_m", "tx_gain", "rx_gain"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
        if not math.isfinite(self.absorption_per_m) or self.absorption_per_m < 0.0:
            raise DomainError(
                f"absorption_per_m must be nonnegative, got {self.absorption_per_m!r}"
            )


def thz_path_gain(link: ThzLinkParams) -> float:
    """Molecular-absorption-weighted free-space amplitude gain of a hop."""
    spreading = SPEED_OF_LIGHT * math.sqrt(link.tx_gain * link.rx_gain)
    spreading /= 4.0 * math.pi * link.frequency_hz * link.distance_m
    return spreading * math.exp(-0.5 * link.absorption_per_m * link.distance_m)


@dataclass(frozen=True)
class RisPanel:
    """Grid of rectangular surface elements facing a boresight feed.

    ``centers`` holds the (x, y) element centers in metres, ``dx`` and
    ``dy`` the common element dimensions, ``d0`` the feed height above
    the panel plane, and ``zeta`` the feed directivity exponent.  The
    feed boresight gain is tied to the exponent as ``2 * (zeta + 1)`` so
    that the radiated energy over the full plane integrates to one.
    """

    centers: np.ndarray
    dx: float
    dy: float
    d0: float
    zeta: float
    _energy_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        centers = np.asarray(self.centers, dtype=float)
        if centers.ndim != 2 or centers.shape[1] != 2 or centers.shape[0] < 1:
            raise ConfigurationError(
                f"centers must have shape (M, 2) with M >= 1, got {centers.shape}"
            )
        if not np.all(np.isfinite(centers)):
            raise ConfigurationError("centers must be finite")
        for name in ("dx", "dy", "d0", "zeta"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
        object.__setattr__(self, "centers", _locked(centers))
        self._check_overlap(centers)

    def _check_overlap(self, centers: np.ndarray) -> None:
        # Two open rectangles are disjoint iff they are separated by at
        # least one element pitch along some axis (touching edges allowed).
        m = centers.shape[0]
        if m < 2:
            return
        sep_x = np.abs(centers[:, 0, None] - centers[None, :, 0]) >= self.dx - 1e-12
        sep_y = np.abs(centers[:, 1, None] - centers[None, :, 1]) >= self.dy - 1e-12
        ok = sep_x | sep_y
        ok[np.diag_indices(m)] = True
        if not ok.all():
            i, j = np.argwhere(~ok)[0]
            raise ConfigurationError(
                f"elements {i} and {j} overlap: centers {centers[i]} and {centers[j]} "
                f"are closer than one element size ({self.dx} x {self.dy})"
            )

    @classmethod
    def grid(
        cls,
        rows: int,
        cols: int,
        dx: float,
        dy: float,
        d0: float,
        zeta: float,
    ) -> "RisPanel":
        """Regular rows-by-cols panel centred on the boresight axis."""
        if rows < 1 or cols < 1:
            raise ConfigurationError(f"grid needs rows, cols >= 1, got {rows}x{cols}")
        xs = (np.arange(cols) - (cols - 1) / 2.0) * dx
        ys = (np.arange(rows) - (rows - 1) / 2.0) * dy
        gx, gy = np.meshgrid(xs, ys)
        centers = np.column_stack([gx.ravel(), gy.ravel()])
        return cls(centers=centers, dx=dx, dy=dy, d0=d0, zeta=zeta)

    @property
    def m_count(self) -> int:
        return self.centers.shape[0]

    @property
    def feed_gain(self) -> float:
        return 2.0 * (self.zeta + 1.0)

    def energies(self) -> np.ndarray:
        """Near-field energies of all elements as a read-only vector."""
        return _locked([near_field_energy(self, m) for m in range(self.m_count)])


def element_distance(panel: RisPanel, m: int) -> float:
    """Feed-to-element-center distance for element ``m``."""
    _check_element_index(panel, m)
    x, y = panel.centers[m]
    return math.sqrt(x * x + y * y + panel.d0 * panel.d0)


def _check_element_index(panel: RisPanel, m: int) -> None:
    if not isinstance(m, (int, np.integer)) or not 0 <= m < panel.m_count:
        raise ConfigurationError(
            f"element index must be an int in [0, {panel.m_count}), got {m!r}"
        )


_GL_COARSE = np.polynomial.legendre.leggauss(6)
_GL_FINE = np.polynomial.legendre.leggauss(12)


def _tensor_panel_quad(panel: RisPanel, rect, rule) -> float:
    x0, x1, y0, y1 = rect
    t, w = rule
    xm, xh = 0.5 * (x0 + x1), 0.5 * (x1 - x0)
    ym, yh = 0.5 * (y0 + y1), 0.5 * (y1 - y0)
    x = (xm + xh * t)[:, None]
    y = (ym + yh * t)[None, :]
    r2 = x * x + y * y + panel.d0 * panel.d0
    scale = panel.feed_gain * panel.d0 ** (panel.zeta + 1.0) / (4.0 * math.pi)
    vals = scale * r2 ** (-0.5 * (panel.zeta + 3.0))
    return xh * yh * float(np.einsum("i,j,ij->", w, w, vals))


def near_field_energy(panel: RisPanel, m: int) -> float:
    """Fraction of the feed's radiated energy captured by element ``m``.

    The integrand is smooth, so an adaptive tensor-product Gauss-Legendre
    rule converges quickly; subdivision only engages for elements that
    are large relative to the feed height.  Results are memoized on the
    panel.
    """
    _check_element_index(panel, m)
    m = int(m)
    cached = panel._energy_cache.get(m)
    if cached is not None:
        return cached

    xc, yc = panel.centers[m]
    hx, hy = 0.5 * panel.dx, 0.5 * panel.dy
    stack = [(xc - hx, xc + hx, yc - hy, yc + hy, _QUAD_TOL)]
    total = 0.0
    rects = 0
    while stack:
        x0, x1, y0, y1, tol = stack.pop()
        rects += 1
        if rects > _QUAD_MAX_RECTS:
            raise NumericalError(
                "near-field energy quadrature did not converge",
                diagnostics={
                    "element": m,
                    "rectangles": rects,
                    "pending": len(stack),
                    "tolerance": _QUAD_TOL,
                },
            )
        coarse = _tensor_panel_quad(panel, (x0, x1, y0, y1), _GL_COARSE)
        fine = _tensor_panel_quad(panel, (x0, x1, y0, y1), _GL_FINE)
        if abs(fine - coarse) <= tol:
            total += fine
            continue
        xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        quarter = 0.25 * tol
        stack.extend(
            (
                (x0, xm, y0, ym, quarter),
                (xm, x1, y0, ym, quarter),
                (x0, xm, ym, y1, quarter),
                (xm, x1, ym, y1, quarter),
            )
        )
    panel._energy_cache[m] = total
    return total


@dataclass(frozen=True)
class ProtocolConfig:
    """Per-element amplitude assignment of the surface protocol.

    Energy splitting ("es") requires every element to conserve energy
    across the two sides, ``a_in**2 + a_out**2 == 1``.  Mode switching
    ("ms") requires a binary partition: each element serves exactly one
    side with unit amplitude.
    """

    mode: str
    indoor_amplitudes: np.ndarray
    outdoor_amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.mode not in ("es", "ms"):
            raise ConfigurationError(f"mode must be 'es' or 'ms', got {self.mode!r}")
        a_in = np.asarray(self.indoor_amplitudes, dtype=float)
        a_out = np.asarray(self.outdoor_amplitudes, dtype=float)
        if a_in.ndim != 1 or a_in.shape != a_out.shape or a_in.size < 1:
            raise ConfigurationError(
                "amplitude vectors must be 1-D with a common nonzero length, got "
                f"{a_in.shape} and {a_out.shape}"
            )
        if not (np.all(np.isfinite(a_in)) and np.all(np.isfinite(a_out))):
            raise ConfigurationError("amplitudes must be finite")
        if np.any(a_in < 0.0) or np.any(a_out < 0.0):
            raise ConfigurationError("amplitudes must be nonnegative")
        if self.mode == "es":
            balance = a_in**2 + a_out**2
            worst = float(np.max(np.abs(balance - 1.0)))
            if worst > _ES_BALANCE_TOL:
                raise ConfigurationError(
                    "energy-splitting amplitudes must satisfy "
                    f"a_in**2 + a_out**2 == 1 per element; worst deviation {worst:.3e}"
                )
        else:
            binary = np.isin(a_in, (0.0, 1.0)) & np.isin(a_out, (0.0, 1.0))
            if not binary.all():
                raise ConfigurationError(
                    "mode-switching amplitudes must be exactly 0 or 1"
                )
            if not np.all(a_in + a_out == 1.0):
                raise ConfigurationError(
                    "mode switching must assign each element to exactly one side"
                )
        object.__setattr__(self, "indoor_amplitudes", _locked(a_in))
        object.__setattr__(self, "outdoor_amplitudes", _locked(a_out))

    @classmethod
    def es_uniform(cls, m_count: int, indoor_power: float = 0.5) -> "ProtocolConfig":
        """Energy splitting with the same power split on every element."""
        if not 0.0 < indoor_power < 1.0:
            raise ConfigurationError(
                f"indoor_power must lie strictly in (0, 1), got {indoor_power!r}"
            )
        a_in = np.full(m_count, math.sqrt(indoor_power))
        a_out = np.full(m_count, math.sqrt(1.0 - indoor_power))
        return cls(mode="es", indoor_amplitudes=a_in, outdoor_amplitudes=a_out)

    @classmethod
    def ms_partition(cls, m_count: int, indoor_elements) -> "ProtocolConfig":
        """Mode switching with the listed elements assigned to the indoor side."""
        indices = np.asarray(indoor_elements, dtype=int)
        if indices.ndim != 1:
            raise ConfigurationError("indoor_elements must be a 1-D index list")
        if np.unique(indices).size != indices.size:
            raise ConfigurationError("indoor_elements contains duplicate indices")
        if indices.size and (indices.min() < 0 or indices.max() >= m_count):
            raise ConfigurationError(
                f"indoor_elements must lie in [0, {m_count}), got {indices.tolist()}"
            )
        a_in = np.zeros(m_count)
        a_in[indices] = 1.0
        return cls(mode="ms", indoor_amplitudes=a_in, outdoor_amplitudes=1.0 - a_in)

    @property
    def m_count(self) -> int:
        return self.indoor_amplitudes.shape[0]


@dataclass(frozen=True)
class E2EWeights:
    """End-to-end amplitude weights of every element toward each side."""

    indoor: np.ndarray
    outdoor: np.ndarray

    def __post_init__(self) -> None:
        indoor = np.asarray(self.indoor, dtype=float)
        outdoor = np.asarray(self.outdoor, dtype=float)
        if indoor.ndim != 1 or indoor.shape != outdoor.shape or indoor.size < 1:
            raise ConfigurationError(
                "weight vectors must be 1-D with a common nonzero length, got "
                f"{indoor.shape} and {outdoor.shape}"
            )
        if not (np.all(np.isfinite(indoor)) and np.all(np.isfinite(outdoor))):
            raise ConfigurationError("weights must be finite")
        if np.any(indoor < 0.0) or np.any(outdoor < 0.0):
            raise ConfigurationError("weights must be nonnegative")
        object.__setattr__(self, "indoor", _locked(indoor))
        object.__setattr__(self, "outdoor", _locked(outdoor))

    @property
    def m_count(self) -> int:
        return self.indoor.shape[0]


def build_e2e_weights(
    panel: RisPanel,
    protocol: ProtocolConfig,
    indoor_link: ThzLinkParams,
    outdoor_link: ThzLinkParams,
) -> E2EWeights:
    """Combine path gains, captured energies, and protocol amplitudes."""
    if protocol.m_count != panel.m_count:
        raise ConfigurationError(
            f"protocol covers {protocol.m_count} elements but the panel has "
            f"{panel.m_count}"
        )
    root_energy = np.sqrt(panel.energies())
    indoor = thz_path_gain(indoor_link) * root_energy * protocol.indoor_amplitudes
    outdoor = thz_path_gain(outdoor_link) * root_energy * protocol.outdoor_amplitudes
    return E2EWeights(indoor=indoor, outdoor=outdoor)


def phase_align_check(h, g, amplitudes) -> float:
    """Worst-case residual of coherent combining under ideal phase shifts.

    With the surface phases set to cancel the hop phases, the combined
    complex sum must equal the sum of amplitude products.  Returns the
    largest absolute difference over the batch; values at machine
    precision confirm the phase configuration used by the statistical
    model.
    """
    h = np.asarray(h, dtype=complex)
    g = np.asarray(g, dtype=complex)
    a = np.asarray(amplitudes, dtype=float)
    if a.ndim != 1:
        raise ConfigurationError("amplitudes must be a 1-D vector")
    if h.shape != g.shape or h.shape[-1] != a.shape[0]:
        raise ConfigurationError(
            f"h and g must share a common shape ending in {a.shape[0]}, got "
            f"{h.shape} and {g.shape}"
        )
    theta = -np.angle(h) - np.angle(g)
    coherent = np.abs(np.sum(h * a * np.exp(1j * theta) * g, axis=-1))
    incoherent = np.sum(np.abs(h) * a * np.abs(g), axis=-1)
    return float(np.max(np.abs(coherent - incoherent)))
