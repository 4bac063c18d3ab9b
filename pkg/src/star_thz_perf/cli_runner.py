"""Scenario files, named experiment recipes, and the command line front end.

A scenario file (TOML or JSON) pins everything an experiment needs: the
surface geometry, both link budgets, the fading laws, the protocol, the
transmit-power grid, outage thresholds, and numeric knobs.  Human units
(dBm, dBi, dB) are converted to linear scale once, at parse time; every
quantity on `StarRisScenario` is already linear.

`run_recipe` renders a named dataset to CSV and `run_sweep` evaluates
selected metrics over a grid of one variable.  CSV output starts with
the literal line `# schema=star-thz-perf/v1` followed by a regular
header row; floats are written in shortest round-trip form, so a rerun
with the same seed produces byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .channel_geometry import (
    E2EWeights,
    ProtocolConfig,
    RisPanel,
    ThzLinkParams,
    build_e2e_weights,
)
from .dist_alpha_mu import (
    AlphaMuApprox,
    AlphaMuParams,
    DeltaSeries,
    alpha_mu_sample,
    build_delta_series,
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
    gm_cdf,
    gm_sample,
    mixture_from_dict,
)
from .errors import ConfigurationError, DomainError, NumericalError
from .monte_carlo import SimulationPlan, estimate_ec, estimate_op
from .performance import (
    OutageThresholds,
    PowerConfig,
    ec_high_snr,
    ec_indoor,
    ec_low_snr,
    ec_oma,
    ec_outdoor,
    noma_rate_threshold,
    normalized_channel_moments,
    oma_rate_threshold,
    op_asymptotic,
    op_indoor,
    op_oma,
    op_outdoor,
)
from .special_math import QuadratureRule, gauss_laguerre

SCHEMA_LINE = "# schema=star-thz-perf/v1"

# target user rate (bit/s/Hz) behind the orthogonal-vs-superposed recipes
_TARGET_RATE = 0.5

_MISSING = object()


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _norm3(v) -> float:
    return math.sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2)


@dataclass(frozen=True)
class StarRisScenario:
    """Fully resolved experiment description.

    Instances are cheap value objects; the derived quantities that are
    expensive to build (end-to-end weights, the indoor series and fit,
    the collapsed outdoor mixtures, the quadrature rule) are cached per
    instance, and `dataclasses.replace` starts a variant with a fresh
    cache.
    """

    panel: RisPanel
    protocol: ProtocolConfig
    ap: tuple[float, float, float]
    indoor_user: tuple[float, float, float]
    outdoor_user: tuple[float, float, float]
    frequency_hz: float
    tx_gain: float
    rx_gain: float
    absorption_per_m: float
    noise_w: float
    indoor_fading: AlphaMuParams
    outdoor_mixture: GammaMixture
    outdoor_gaussian: GaussianMixture | None
    outdoor_truth: str
    outdoor_rician_k: float
    p_dbm: tuple[float, ...]
    power_grid: tuple[PowerConfig, ...]
    thresholds: OutageThresholds
    quad_order: int = 64
    series_terms: int = 360
    mc_trials: int = 200_000
    mc_seed: int = 0
    mc_workers: int = 1
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        m = self.protocol.indoor_amplitudes.size
        if m != self.panel.m_count:
            raise ConfigurationError(
                f"protocol assigns {m} elements but the panel has {self.panel.m_count}"
            )
        for name in ("ap", "indoor_user", "outdoor_user"):
            pos = getattr(self, name)
            if len(pos) != 3 or not all(math.isfinite(float(c)) for c in pos):
                raise ConfigurationError(f"{name} must be a finite 3-vector, got {pos!r}")
        if self.ap[0] != 0.0 or self.ap[1] != 0.0 or self.ap[2] >= 0.0:
            raise ConfigurationError(
                f"the feed must sit on the boresight axis behind the panel at (0, 0, -d0), got {self.ap!r}"
            )
        if not math.isclose(-self.ap[2], self.panel.d0, rel_tol=1e-12):
            raise ConfigurationError(
                f"panel feed height {self.panel.d0} disagrees with the AP position {self.ap!r}"
            )
        for name in ("indoor_user", "outdoor_user"):
            if _norm3(getattr(self, name)) <= 0.0:
                raise ConfigurationError(f"{name} cannot sit at the panel origin")
        if self.outdoor_truth not in ("mixture", "rician"):
            raise ConfigurationError(
                f"outdoor_truth must be 'mixture' or 'rician', got {self.outdoor_truth!r}"
            )
        if not (math.isfinite(self.outdoor_rician_k) and self.outdoor_rician_k >= 0.0):
            raise ConfigurationError(
                f"outdoor_rician_k must be nonnegative, got {self.outdoor_rician_k!r}"
            )
        if len(self.power_grid) == 0:
            raise ConfigurationError("power grid must be nonempty")
        if len(self.p_dbm) != len(self.power_grid):
            raise ConfigurationError("p_dbm and power_grid must have the same length")
        powers = [pc.power_w for pc in self.power_grid]
        if any(b < a for a, b in zip(powers, powers[1:])):
            raise ConfigurationError("power grid must be sorted by transmit power")
        for name, lo in (
            ("quad_order", 16),
            ("series_terms", 1),
            ("mc_trials", 1),
            ("mc_workers", 1),
            ("mc_seed", 0),
        ):
            v = getattr(self, name)
            if not isinstance(v, int) or v < lo:
                raise ConfigurationError(f"{name} must be an integer >= {lo}, got {v!r}")

    def _cached(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    @property
    def indoor_link(self) -> ThzLinkParams:
        return self._cached(
            "indoor_link",
            lambda: ThzLinkParams(
                self.frequency_hz,
                _norm3(self.indoor_user),
                self.tx_gain,
                self.rx_gain,
                self.absorption_per_m,
            ),
        )

    @property
    def outdoor_link(self) -> ThzLinkParams:
        return self._cached(
            "outdoor_link",
            lambda: ThzLinkParams(
                self.frequency_hz,
                _norm3(self.outdoor_user),
                self.tx_gain,
                self.rx_gain,
                self.absorption_per_m,
            ),
        )

    @property
    def weights(self) -> E2EWeights:
        return self._cached(
            "weights",
            lambda: build_e2e_weights(
                self.panel, self.protocol, self.indoor_link, self.outdoor_link
            ),
        )

    def active_weights(self, user: str) -> np.ndarray:
        w = self.weights.indoor if user == "indoor" else self.weights.outdoor
        w = w[w > 0.0]
        if w.size == 0:
            raise ConfigurationError(f"no surface element serves the {user} side")
        return w

    def delta_series(self) -> DeltaSeries:
        return self._cached(
            "delta_series",
            lambda: build_delta_series(
                self.active_weights("indoor"), self.indoor_fading, self.series_terms
            ),
        )

    def indoor_fit(self) -> AlphaMuApprox:
        return self._cached(
            "indoor_fit",
            lambda: fit_alpha_mu_approx(self.active_weights("indoor"), self.indoor_fading),
        )

    def outdoor_collapsed(self) -> CollapsedGammaMixture:
        return self._cached(
            "outdoor_collapsed",
            lambda: collapse_mog_sum(self.active_weights("outdoor"), self.outdoor_mixture),
        )

    def outdoor_collapsed_gm(self) -> CollapsedGaussianMixture:
        if self.outdoor_gaussian is None:
            raise ConfigurationError(
                "scenario carries no Gaussian element law; set fading.outdoor.gaussian_file"
            )
        return self._cached(
            "outdoor_collapsed_gm",
            lambda: collapse_gm_sum(self.active_weights("outdoor"), self.outdoor_gaussian),
        )

    def quad_rule(self) -> QuadratureRule:
        return self._cached("quad_rule", lambda: gauss_laguerre(self.quad_order))

    def plan(self) -> SimulationPlan:
        return SimulationPlan(self, self.mc_trials, self.mc_seed, self.mc_workers)


# ---------------------------------------------------------------------------
# scenario file parsing


def _as_float(v) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise TypeError(f"expected a number, got {v!r}")
    return float(v)


def _as_int(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise TypeError(f"expected an integer, got {v!r}")
    return v


def _as_str(v) -> str:
    if not isinstance(v, str):
        raise TypeError(f"expected a string, got {v!r}")
    return v


def _as_vec3(v) -> tuple[float, float, float]:
    if not isinstance(v, (list, tuple)) or len(v) != 3:
        raise TypeError(f"expected [x, y, z], got {v!r}")
    return tuple(_as_float(c) for c in v)


def _as_int_list(v) -> list[int]:
    if not isinstance(v, (list, tuple)):
        raise TypeError(f"expected a list of integers, got {v!r}")
    return [_as_int(c) for c in v]


def _as_float_list(v) -> list[float]:
    if not isinstance(v, (list, tuple)) or len(v) == 0:
        raise TypeError(f"expected a nonempty list of numbers, got {v!r}")
    return [_as_float(c) for c in v]


_SECTION_KEYS = {
    "geometry": {"rows", "cols", "dx_m", "dy_m", "zeta", "ap", "indoor_user", "outdoor_user"},
    "link": {
        "frequency_hz",
        "bandwidth_hz",
        "tx_gain_dbi",
        "rx_gain_dbi",
        "absorption_per_m",
        "noise_psd_dbm_hz",
    },
    "protocol": {"mode", "indoor_power", "indoor_elements"},
    "fading.indoor": {"alpha", "mu", "omega"},
    "fading.outdoor": {
        "truth",
        "rician_k",
        "mixture_file",
        "components",
        "gaussian_file",
        "gaussian_components",
    },
    "power": {"p_dbm", "rho_indoor", "rho_outdoor", "kappa_sq"},
    "thresholds": {"indoor_db", "outdoor_db"},
    "numerics": {"quad_order", "series_terms"},
    "mc": {"trials", "seed", "workers"},
}


def _section(parent, key: str, path: str, problems: list[str], required: bool = True) -> dict:
    sec = parent.get(key) if isinstance(parent, dict) else None
    if sec is None:
        if required:
            problems.append(f"{path}: section missing")
        return {}
    if not isinstance(sec, dict):
        problems.append(f"{path}: must be a table")
        return {}
    known = _SECTION_KEYS.get(path)
    if known is not None:
        for name in sec:
            if name not in known:
                problems.append(f"{path}.{name}: unknown key")
    return sec


def _take(sec: dict, path: str, key: str, problems: list[str], kind, default=_MISSING):
    if key not in sec:
        if default is _MISSING:
            if sec:
                problems.append(f"{path}.{key}: required key missing")
            return None
        return default
    try:
        return kind(sec[key])
    except (TypeError, ValueError) as exc:
        problems.append(f"{path}.{key}: {exc}")
        return None


def _guard(problems: list[str], path: str, builder):
    try:
        return builder()
    except (ConfigurationError, DomainError) as exc:
        problems.append(f"{path}: {exc}")
        return None


def _read_mixture_ref(fname: str, base_dir, path: str, problems: list[str], want):
    def build():
        ref = Path(fname)
        if ref.is_absolute():
            text = ref.read_text(encoding="utf-8")
        elif base_dir is None:
            raise ConfigurationError("relative path needs a scenario file location")
        else:
            text = (base_dir / fname).read_text(encoding="utf-8")
        mix = mixture_from_dict(json.loads(text))
        if not isinstance(mix, want):
            raise ConfigurationError(f"{fname} holds a {type(mix).__name__}, wrong mixture kind")
        return mix

    try:
        return build()
    except (OSError, json.JSONDecodeError, ConfigurationError) as exc:
        problems.append(f"{path}: {exc}")
        return None


def _parse_dbm_grid(sec: dict, problems: list[str]) -> tuple[float, ...] | None:
    if "p_dbm" not in sec:
        if sec:
            problems.append("power.p_dbm: required key missing")
        return None
    spec = sec["p_dbm"]
    if isinstance(spec, dict):
        start = _take(spec, "power.p_dbm", "start", problems, _as_float)
        stop = _take(spec, "power.p_dbm", "stop", problems, _as_float)
        step = _take(spec, "power.p_dbm", "step", problems, _as_float)
        if None in (start, stop, step):
            return None
        if step <= 0.0 or stop < start:
            problems.append("power.p_dbm: needs step > 0 and stop >= start")
            return None
        n = int(round((stop - start) / step))
        grid = tuple(start + i * step for i in range(n + 1))
        return tuple(v for v in grid if v <= stop + 1e-9 * max(1.0, abs(stop)))
    try:
        grid = tuple(_as_float_list(spec))
    except TypeError as exc:
        problems.append(f"power.p_dbm: {exc}")
        return None
    if any(b <= a for a, b in zip(grid, grid[1:])):
        problems.append("power.p_dbm: grid must be strictly increasing")
        return None
    return grid


def scenario_from_dict(raw: dict, base_dir=None) -> StarRisScenario:
    """Build a scenario from parsed file content.

    Violations are collected across all sections before anything is
    raised, so one bad file reports every problem at once.
    """
    if not isinstance(raw, dict):
        raise ConfigurationError("scenario root must be a table")
    problems: list[str] = []
    for name in raw:
        if name not in ("geometry", "link", "protocol", "fading", "power", "thresholds", "numerics", "mc"):
            problems.append(f"{name}: unknown section")

    geo = _section(raw, "geometry", "geometry", problems)
    rows = _take(geo, "geometry", "rows", problems, _as_int)
    cols = _take(geo, "geometry", "cols", problems, _as_int)
    dx = _take(geo, "geometry", "dx_m", problems, _as_float)
    dy = _take(geo, "geometry", "dy_m", problems, _as_float)
    zeta = _take(geo, "geometry", "zeta", problems, _as_float)
    ap = _take(geo, "geometry", "ap", problems, _as_vec3, default=(0.0, 0.0, -1.0))
    indoor_pos = _take(geo, "geometry", "indoor_user", problems, _as_vec3)
    outdoor_pos = _take(geo, "geometry", "outdoor_user", problems, _as_vec3)

    link = _section(raw, "link", "link", problems)
    frequency = _take(link, "link", "frequency_hz", problems, _as_float)
    bandwidth = _take(link, "link", "bandwidth_hz", problems, _as_float)
    tx_dbi = _take(link, "link", "tx_gain_dbi", problems, _as_float, default=0.0)
    rx_dbi = _take(link, "link", "rx_gain_dbi", problems, _as_float, default=0.0)
    absorption = _take(link, "link", "absorption_per_m", problems, _as_float, default=0.0)
    noise_psd = _take(link, "link", "noise_psd_dbm_hz", problems, _as_float)
    noise_w = None
    if bandwidth is not None and noise_psd is not None:
        if bandwidth <= 0.0 or not math.isfinite(bandwidth):
            problems.append(f"link.bandwidth_hz: must be positive, got {bandwidth!r}")
        else:
            noise_w = bandwidth * dbm_to_watt(noise_psd)

    prot = _section(raw, "protocol", "protocol", problems)
    mode = _take(prot, "protocol", "mode", problems, _as_str, default="es")
    m_count = rows * cols if rows is not None and cols is not None else None
    protocol = None
    if mode is not None and m_count is not None:
        if mode == "es":
            share = _take(prot, "protocol", "indoor_power", problems, _as_float, default=0.5)
            if share is not None:
                protocol = _guard(
                    problems, "protocol", lambda: ProtocolConfig.es_uniform(m_count, share)
                )
        elif mode == "ms":
            elems = _take(prot, "protocol", "indoor_elements", problems, _as_int_list)
            if elems is not None:
                protocol = _guard(
                    problems, "protocol", lambda: ProtocolConfig.ms_partition(m_count, elems)
                )
        else:
            problems.append(f"protocol.mode: must be 'es' or 'ms', got {mode!r}")

    fading = _section(raw, "fading", "fading", problems)
    f_in = _section(fading, "indoor", "fading.indoor", problems)
    alpha = _take(f_in, "fading.indoor", "alpha", problems, _as_float)
    mu = _take(f_in, "fading.indoor", "mu", problems, _as_float)
    omega = _take(f_in, "fading.indoor", "omega", problems, _as_float, default=1.0)
    indoor_fading = None
    if None not in (alpha, mu, omega):
        indoor_fading = _guard(
            problems, "fading.indoor", lambda: AlphaMuParams(alpha, mu, omega)
        )

    f_out = _section(fading, "outdoor", "fading.outdoor", problems)
    truth = _take(f_out, "fading.outdoor", "truth", problems, _as_str, default="mixture")
    rician_k = _take(f_out, "fading.outdoor", "rician_k", problems, _as_float, default=1.0)
    outdoor_mixture = None
    if "mixture_file" in f_out and "components" in f_out:
        problems.append("fading.outdoor: give either mixture_file or components, not both")
    elif "mixture_file" in f_out:
        fname = _take(f_out, "fading.outdoor", "mixture_file", problems, _as_str)
        if fname is not None:
            outdoor_mixture = _read_mixture_ref(
                fname, base_dir, "fading.outdoor.mixture_file", problems, GammaMixture
            )
    elif "components" in f_out:
        outdoor_mixture = _guard(
            problems,
            "fading.outdoor.components",
            lambda: mixture_from_dict({"type": "mog", "components": f_out["components"]}),
        )
    elif f_out:
        problems.append("fading.outdoor: needs mixture_file or components")

    outdoor_gaussian = None
    if "gaussian_file" in f_out and "gaussian_components" in f_out:
        problems.append(
            "fading.outdoor: give either gaussian_file or gaussian_components, not both"
        )
    elif "gaussian_file" in f_out:
        fname = _take(f_out, "fading.outdoor", "gaussian_file", problems, _as_str)
        if fname is not None:
            outdoor_gaussian = _read_mixture_ref(
                fname, base_dir, "fading.outdoor.gaussian_file", problems, GaussianMixture
            )
    elif "gaussian_components" in f_out:
        outdoor_gaussian = _guard(
            problems,
            "fading.outdoor.gaussian_components",
            lambda: mixture_from_dict(
                {"type": "gm", "components": f_out["gaussian_components"]}
            ),
        )

    power = _section(raw, "power", "power", problems)
    dbm_grid = _parse_dbm_grid(power, problems)
    rho_in = _take(power, "power", "rho_indoor", problems, _as_float)
    rho_out = _take(
        power,
        "power",
        "rho_outdoor",
        problems,
        _as_float,
        default=1.0 - rho_in if rho_in is not None else None,
    )
    kappa_sq = _take(power, "power", "kappa_sq", problems, _as_float, default=0.0)
    power_grid = None
    if None not in (dbm_grid, rho_in, rho_out, kappa_sq) and noise_w is not None:
        power_grid = _guard(
            problems,
            "power",
            lambda: tuple(
                PowerConfig(dbm_to_watt(d), rho_in, rho_out, kappa_sq, noise_w)
                for d in dbm_grid
            ),
        )

    thr = _section(raw, "thresholds", "thresholds", problems)
    th_in = _take(thr, "thresholds", "indoor_db", problems, _as_float)
    th_out = _take(thr, "thresholds", "outdoor_db", problems, _as_float)
    thresholds = None
    if None not in (th_in, th_out):
        thresholds = _guard(
            problems,
            "thresholds",
            lambda: OutageThresholds(db_to_linear(th_in), db_to_linear(th_out)),
        )

    num = _section(raw, "numerics", "numerics", problems, required=False)
    quad_order = _take(num, "numerics", "quad_order", problems, _as_int, default=64)
    series_terms = _take(num, "numerics", "series_terms", problems, _as_int, default=360)

    mc = _section(raw, "mc", "mc", problems, required=False)
    trials = _take(mc, "mc", "trials", problems, _as_int, default=200_000)
    seed = _take(mc, "mc", "seed", problems, _as_int, default=0)
    workers = _take(mc, "mc", "workers", problems, _as_int, default=1)

    panel = None
    if None not in (rows, cols, dx, dy, zeta) and ap is not None:
        panel = _guard(
            problems, "geometry", lambda: RisPanel.grid(rows, cols, dx, dy, -ap[2], zeta)
        )

    pieces = {
        "geometry": panel if None not in (indoor_pos, outdoor_pos) and ap is not None else None,
        "link": None if None in (frequency, noise_w, tx_dbi, rx_dbi, absorption) else frequency,
        "protocol": protocol,
        "fading.indoor": indoor_fading,
        "fading.outdoor": outdoor_mixture if None not in (truth, rician_k) else None,
        "power": power_grid,
        "thresholds": thresholds,
        "numerics": None if None in (quad_order, series_terms) else quad_order,
        "mc": None if None in (trials, seed, workers) else trials,
    }
    missing = [path for path, piece in pieces.items() if piece is None]
    if problems or missing:
        for path in missing:
            if not any(p.startswith(path) for p in problems):
                problems.append(f"{path}: incomplete section")
        raise ConfigurationError("invalid scenario:\n  " + "\n  ".join(sorted(set(problems))))

    def assemble():
        return StarRisScenario(
            panel=panel,
            protocol=protocol,
            ap=ap,
            indoor_user=indoor_pos,
            outdoor_user=outdoor_pos,
            frequency_hz=frequency,
            tx_gain=db_to_linear(tx_dbi),
            rx_gain=db_to_linear(rx_dbi),
            absorption_per_m=absorption,
            noise_w=noise_w,
            indoor_fading=indoor_fading,
            outdoor_mixture=outdoor_mixture,
            outdoor_gaussian=outdoor_gaussian,
            outdoor_truth=truth,
            outdoor_rician_k=rician_k,
            p_dbm=tuple(dbm_grid),
            power_grid=power_grid,
            thresholds=thresholds,
            quad_order=quad_order,
            series_terms=series_terms,
            mc_trials=trials,
            mc_seed=seed,
            mc_workers=workers,
        )

    scenario = _guard(problems, "scenario", assemble)
    if scenario is None:
        raise ConfigurationError("invalid scenario:\n  " + "\n  ".join(sorted(set(problems))))
    return scenario


def _read_raw(path: Path) -> dict:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read scenario file: {exc}") from exc
    if path.suffix.lower() == ".json":
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON: {exc}") from exc
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid TOML: {exc}") from exc


def load_scenario(path) -> StarRisScenario:
    """Read and fully validate a scenario file (TOML, or JSON by suffix)."""
    path = Path(path)
    return scenario_from_dict(_read_raw(path), base_dir=path.parent)


def default_scenario() -> StarRisScenario:
    """The packaged reference scenario."""
    data = resources.files("star_thz_perf").joinpath("data")
    raw = tomllib.loads(data.joinpath("table2.toml").read_text(encoding="utf-8"))
    return scenario_from_dict(raw, base_dir=data)


def validate_scenario(path) -> list[str]:
    """Every violation in the file as `section.key: problem` lines.

    An empty list means the scenario is usable as-is.
    """
    try:
        load_scenario(path)
    except ConfigurationError as exc:
        msg = str(exc)
        prefix = "invalid scenario:\n"
        if msg.startswith(prefix):
            return [line.strip() for line in msg[len(prefix):].splitlines()]
        return [msg]
    return []


# ---------------------------------------------------------------------------
# CSV output


def _format_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _write_csv(path: Path, columns: list[tuple[str, object]]) -> Path:
    arrays = [list(values) for _, values in columns]
    length = len(arrays[0])
    if any(len(a) != length for a in arrays):
        raise ConfigurationError("CSV columns must share one length")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(SCHEMA_LINE + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([name for name, _ in columns])
        for i in range(length):
            writer.writerow([_format_cell(a[i]) for a in arrays])
    return path


# ---------------------------------------------------------------------------
# scenario variants


def _pc_like(pc: PowerConfig, *, power_w=None, kappa_sq=None) -> PowerConfig:
    return PowerConfig(
        pc.power_w if power_w is None else power_w,
        pc.rho_indoor,
        pc.rho_outdoor,
        pc.kappa_sq if kappa_sq is None else kappa_sq,
        pc.noise_w,
    )


def _with_kappa(sc: StarRisScenario, kappa_sq: float) -> StarRisScenario:
    grid = tuple(_pc_like(pc, kappa_sq=kappa_sq) for pc in sc.power_grid)
    vsc = replace(sc, power_grid=grid)
    vsc._cache.update(sc._cache)  # nothing cached depends on the power grid
    return vsc


def _with_dbm_grid(sc: StarRisScenario, dbm) -> StarRisScenario:
    ref = sc.power_grid[0]
    dbm = tuple(float(d) for d in dbm)
    grid = tuple(_pc_like(ref, power_w=dbm_to_watt(d)) for d in dbm)
    vsc = replace(sc, p_dbm=dbm, power_grid=grid)
    vsc._cache.update(sc._cache)
    return vsc


def _square_layout(m: int) -> tuple[int, int]:
    r = int(math.isqrt(m))
    while m % r:
        r -= 1
    return r, m // r


def _with_m_count(sc: StarRisScenario, m: int) -> StarRisScenario:
    if m < 1:
        raise ConfigurationError(f"element count must be >= 1, got {m}")
    rows, cols = _square_layout(m)
    panel = RisPanel.grid(rows, cols, sc.panel.dx, sc.panel.dy, sc.panel.d0, sc.panel.zeta)
    if sc.protocol.mode == "es":
        share = float(sc.protocol.indoor_amplitudes[0] ** 2)
        protocol = ProtocolConfig.es_uniform(m, share)
    else:
        frac = float(np.sum(sc.protocol.indoor_amplitudes)) / sc.panel.m_count
        n_in = min(max(int(round(frac * m)), 1), max(m - 1, 1))
        protocol = ProtocolConfig.ms_partition(m, list(range(n_in)))
    return replace(sc, panel=panel, protocol=protocol)


# ---------------------------------------------------------------------------
# metric column blocks


def _col_name(user: str, metric: str, tag: str, suffix: str) -> str:
    parts = [user, metric] + ([tag] if tag else []) + [suffix]
    return "_".join(parts)


def _op_block(sc: StarRisScenario, th: OutageThresholds, access: str, tag: str):
    series = sc.delta_series()
    mog = sc.outdoor_collapsed()
    grid = sc.power_grid
    if access == "noma":
        indoor = [op_indoor(th, pc, series) for pc in grid]
        outdoor = [op_outdoor(th, pc, mog) for pc in grid]
    else:
        indoor = [op_oma("indoor", th.indoor, pc, series) for pc in grid]
        outdoor = [op_oma("outdoor", th.outdoor, pc, mog) for pc in grid]
    mc = estimate_op(sc.plan(), th, access=access)
    cols = [(_col_name("indoor", "op", tag, "analytic"), indoor)]
    if access == "noma":
        cols.append(
            (
                _col_name("indoor", "op", tag, "asymptotic"),
                [op_asymptotic("indoor", th, pc, series) for pc in grid],
            )
        )
    cols += [
        (_col_name("indoor", "op", tag, "mc"), mc.indoor),
        (_col_name("indoor", "op", tag, "mc_se"), mc.indoor_se),
        (_col_name("indoor", "op", tag, "mc_unreliable"), mc.indoor_unreliable),
        (_col_name("outdoor", "op", tag, "analytic"), outdoor),
    ]
    if access == "noma":
        cols.append(
            (
                _col_name("outdoor", "op", tag, "asymptotic"),
                [op_asymptotic("outdoor_mog", th, pc, mog) for pc in grid],
            )
        )
    cols += [
        (_col_name("outdoor", "op", tag, "mc"), mc.outdoor),
        (_col_name("outdoor", "op", tag, "mc_se"), mc.outdoor_se),
        (_col_name("outdoor", "op", tag, "mc_unreliable"), mc.outdoor_unreliable),
    ]
    return cols


def _min_active_gain(sc: StarRisScenario, user: str) -> float:
    return float(np.min(sc.active_weights(user)) ** 2)


def _ec_block(sc: StarRisScenario, access: str, tag: str, asymptote: str | None = None):
    fit = sc.indoor_fit()
    mog = sc.outdoor_collapsed()
    rule = sc.quad_rule()
    grid = sc.power_grid
    if access == "noma":
        indoor = [ec_indoor(pc, fit, rule) for pc in grid]
        outdoor = [ec_outdoor(pc, mog, rule) for pc in grid]
    else:
        indoor = [ec_oma("indoor", pc, fit, rule) for pc in grid]
        outdoor = [ec_oma("outdoor", pc, mog, rule) for pc in grid]
    asym = {}
    if asymptote == "high" and access == "noma":
        asym["indoor"] = [ec_high_snr("indoor", pc, fit) for pc in grid]
        asym["outdoor"] = [ec_high_snr("outdoor", pc) for pc in grid]
    elif asymptote == "low" and access == "noma":
        for user, model in (("indoor", fit), ("outdoor", mog)):
            g = _min_active_gain(sc, user)
            m2, m4 = normalized_channel_moments(model, g)
            asym[user] = [ec_low_snr(user, pc, m2, m4, g).capacity for pc in grid]
    mc = estimate_ec(sc.plan(), access=access)
    cols = []
    for user, analytic, est, se in (
        ("indoor", indoor, mc.indoor, mc.indoor_se),
        ("outdoor", outdoor, mc.outdoor, mc.outdoor_se),
    ):
        cols.append((_col_name(user, "ec", tag, "analytic"), analytic))
        if user in asym:
            cols.append((_col_name(user, "ec", tag, "asymptotic"), asym[user]))
        cols += [
            (_col_name(user, "ec", tag, "mc"), est),
            (_col_name(user, "ec", tag, "mc_se"), se),
        ]
    return cols


def _sum_ec_block(sc: StarRisScenario, access: str, tag: str):
    fit = sc.indoor_fit()
    mog = sc.outdoor_collapsed()
    rule = sc.quad_rule()
    grid = sc.power_grid
    if access == "noma":
        total = [ec_indoor(pc, fit, rule) + ec_outdoor(pc, mog, rule) for pc in grid]
    else:
        total = [
            ec_oma("indoor", pc, fit, rule) + ec_oma("outdoor", pc, mog, rule)
            for pc in grid
        ]
    mc = estimate_ec(sc.plan(), access=access)
    return [
        (_col_name("sum", "ec", tag, "analytic"), total),
        (_col_name("sum", "ec", tag, "mc"), mc.indoor + mc.outdoor),
        (_col_name("sum", "ec", tag, "mc_se"), np.hypot(mc.indoor_se, mc.outdoor_se)),
    ]


# ---------------------------------------------------------------------------
# recipes


def _reference_sum_base() -> AlphaMuParams:
    # alpha = 0.5, mu = 1.5 with unit series scale (x_hat = 1)
    beta = math.gamma(1.5 + 1.0 / 0.5) / math.gamma(1.5)
    return AlphaMuParams(0.5, 1.5, beta / 1.5 ** (1.0 / 0.5))


_REFERENCE_WEIGHTS = {
    2: (1.0, 0.7),
    3: (1.0, 0.7, 2.5),
    4: (1.0, 0.7, 2.5, 1.4),
    5: (1.0, 0.7, 2.5, 1.4, 0.8),
}


def _recipe_table1(sc: StarRisScenario, out: Path) -> list[Path]:
    base = _reference_sum_base()
    ms, pdf_err, cdf_err = [], [], []
    for m, w in sorted(_REFERENCE_WEIGHTS.items()):
        series = build_delta_series(w, base, n_terms=30)
        ms.append(m)
        pdf_err.append(truncation_error(series, 2.0, "pdf"))
        cdf_err.append(truncation_error(series, 2.0, "cdf"))
    columns = [
        ("m", ms),
        ("pdf_truncation_error", pdf_err),
        ("cdf_truncation_error", cdf_err),
    ]
    return [_write_csv(out / "table1.csv", columns)]


def _weighted_sum_draws(base, weights, n, seed_key) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed_key)))
    env = alpha_mu_sample(base, rng, size=(n, len(weights)))
    return env @ np.asarray(weights, dtype=float)


def _sum_law_recipe(sc: StarRisScenario, out: Path, fname: str, kind: str) -> list[Path]:
    base = _reference_sum_base()
    x = np.linspace(0.2, 30.0, 150)
    step = x[1] - x[0]
    n = sc.mc_trials
    columns: list[tuple[str, object]] = [("x", x)]
    for m, w in sorted(_REFERENCE_WEIGHTS.items()):
        series = build_delta_series(w, base, sc.series_terms)
        if kind == "pdf":
            analytic = [exact_sum_pdf(series, xi) for xi in x]
        else:
            analytic = exact_sum_cdf_batch(series, x, tail_tol=1e-9, abs_tol=1e-6)
        draws = _weighted_sum_draws(base, w, n, (sc.mc_seed, m))
        if kind == "pdf":
            edges = np.concatenate([[x[0] - step / 2.0], x + step / 2.0])
            p = np.histogram(draws, bins=edges)[0] / n
            est = p / step
            se = np.sqrt(p * (1.0 - p) / n) / step
        else:
            est = np.searchsorted(np.sort(draws), x, side="right") / n
            se = np.sqrt(est * (1.0 - est) / n)
        columns += [
            (f"sum_{kind}_m{m}_analytic", analytic),
            (f"sum_{kind}_m{m}_mc", est),
            (f"sum_{kind}_m{m}_mc_se", se),
        ]
    return [_write_csv(out / f"{fname}.csv", columns)]


def _recipe_fig2(sc, out):
    return _sum_law_recipe(sc, out, "fig2", "pdf")


def _recipe_fig3(sc, out):
    return _sum_law_recipe(sc, out, "fig3", "cdf")


def _recipe_fig4(sc: StarRisScenario, out: Path) -> list[Path]:
    gmix = sc.outdoor_gaussian
    if gmix is None:
        raise ConfigurationError(
            "this recipe needs a Gaussian element law; set fading.outdoor.gaussian_file"
        )
    x = np.linspace(0.0, 14.0, 141)
    n = sc.mc_trials
    columns: list[tuple[str, object]] = [("x", x)]
    for m in (2, 3, 9):
        collapsed = collapse_gm_sum(np.ones(m), gmix)
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence((sc.mc_seed, m))))
        draws = np.sum(gm_sample(gmix, rng, size=(n, m)), axis=1)
        est = np.searchsorted(np.sort(draws), x, side="right") / n
        columns += [
            (f"sum_cdf_m{m}_analytic", gm_cdf(collapsed, x)),
            (f"sum_cdf_m{m}_mc", est),
            (f"sum_cdf_m{m}_mc_se", np.sqrt(est * (1.0 - est) / n)),
        ]
    return [_write_csv(out / "fig4.csv", columns)]


def _hardware_variants(sc: StarRisScenario):
    return (("ideal", _with_kappa(sc, 0.0)), ("hwi", sc))


def _power_op_recipe(sc: StarRisScenario, out: Path, fname: str) -> list[Path]:
    columns: list[tuple[str, object]] = [("p_dbm", sc.p_dbm)]
    for tag, vsc in _hardware_variants(sc):
        columns += _op_block(vsc, sc.thresholds, "noma", tag)
    return [_write_csv(out / f"{fname}.csv", columns)]


def _recipe_fig5(sc, out):
    return _power_op_recipe(sc, out, "fig5")


def _recipe_fig6(sc: StarRisScenario, out: Path) -> list[Path]:
    # the two-cluster variant needs the full coefficient table: its series
    # only settles out to ~1.2x the sum mean even at 512 terms
    fading = AlphaMuParams(sc.indoor_fading.alpha, 2.0, sc.indoor_fading.omega)
    sc6 = replace(sc, indoor_fading=fading, series_terms=max(sc.series_terms, 512))
    return _power_op_recipe(sc6, out, "fig6")


def _recipe_fig7(sc: StarRisScenario, out: Path) -> list[Path]:
    columns: list[tuple[str, object]] = [("p_dbm", sc.p_dbm)]
    for tag, vsc in _hardware_variants(sc):
        columns += _ec_block(vsc, "noma", tag, asymptote="high")
    return [_write_csv(out / "fig7.csv", columns)]


def _recipe_fig8(sc: StarRisScenario, out: Path) -> list[Path]:
    low = _with_dbm_grid(sc, np.arange(-30.0, 0.5, 2.0))
    columns: list[tuple[str, object]] = [("p_dbm", low.p_dbm)]
    for tag, vsc in _hardware_variants(low):
        columns += _ec_block(vsc, "noma", tag, asymptote="low")
    return [_write_csv(out / "fig8.csv", columns)]


def _recipe_fig9(sc: StarRisScenario, out: Path) -> list[Path]:
    kappa_grid = np.round(np.linspace(0.0, 0.2, 21), 10)
    ref = _pc_like(sc.power_grid[0], power_w=1.0)  # 30 dBm
    grid = tuple(_pc_like(ref, kappa_sq=float(k)) for k in kappa_grid)
    vsc = replace(sc, p_dbm=(30.0,) * len(grid), power_grid=grid)
    vsc._cache.update(sc._cache)
    columns: list[tuple[str, object]] = [("kappa_sq", kappa_grid)]
    columns += _op_block(vsc, sc.thresholds, "noma", "")
    columns += _ec_block(vsc, "noma", "")
    return [_write_csv(out / "fig9.csv", columns)]


def _protocol_variants(sc: StarRisScenario):
    m = sc.panel.m_count
    es = replace(sc, protocol=ProtocolConfig.es_uniform(m, 0.5))
    ms = replace(sc, protocol=ProtocolConfig.ms_partition(m, list(range((m + 1) // 2))))
    return (("es", es), ("ms", ms))


def _recipe_fig10(sc: StarRisScenario, out: Path) -> list[Path]:
    columns: list[tuple[str, object]] = [("p_dbm", sc.p_dbm)]
    for tag, vsc in _protocol_variants(sc):
        columns += _op_block(vsc, sc.thresholds, "noma", tag)
    return [_write_csv(out / "fig10.csv", columns)]


def _recipe_fig11(sc: StarRisScenario, out: Path) -> list[Path]:
    columns: list[tuple[str, object]] = [("p_dbm", sc.p_dbm)]
    for tag, vsc in _protocol_variants(sc):
        columns += _ec_block(vsc, "noma", tag, asymptote="high")
    return [_write_csv(out / "fig11.csv", columns)]


def _access_variants(sc: StarRisScenario):
    gamma_noma = noma_rate_threshold(_TARGET_RATE)
    gamma_oma = oma_rate_threshold(_TARGET_RATE)
    th_noma = OutageThresholds(gamma_noma, gamma_noma)
    th_oma = OutageThresholds(gamma_oma, gamma_oma)
    ideal = _with_kappa(sc, 0.0)
    return (
        ("noma_ideal", ideal, "noma", th_noma),
        ("noma_hwi", sc, "noma", th_noma),
        ("oma_ideal", ideal, "oma", th_oma),
        ("oma_hwi", sc, "oma", th_oma),
    )


def _recipe_fig12(sc: StarRisScenario, out: Path) -> list[Path]:
    columns: list[tuple[str, object]] = [("p_dbm", sc.p_dbm)]
    for tag, vsc, access, th in _access_variants(sc):
        columns += _op_block(vsc, th, access, tag)
    return [_write_csv(out / "fig12.csv", columns)]


def _recipe_fig13(sc: StarRisScenario, out: Path) -> list[Path]:
    columns: list[tuple[str, object]] = [("p_dbm", sc.p_dbm)]
    for tag, vsc, access, _ in _access_variants(sc):
        columns += _sum_ec_block(vsc, access, tag)
    return [_write_csv(out / "fig13.csv", columns)]


_RECIPES = {
    "table1": _recipe_table1,
    "fig2": _recipe_fig2,
    "fig3": _recipe_fig3,
    "fig4": _recipe_fig4,
    "fig5": _recipe_fig5,
    "fig6": _recipe_fig6,
    "fig7": _recipe_fig7,
    "fig8": _recipe_fig8,
    "fig9": _recipe_fig9,
    "fig10": _recipe_fig10,
    "fig11": _recipe_fig11,
    "fig12": _recipe_fig12,
    "fig13": _recipe_fig13,
}


def run_recipe(name: str, scenario: StarRisScenario, out_dir) -> list[Path]:
    """Render one named dataset into `out_dir`; returns the written paths."""
    try:
        recipe = _RECIPES[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown recipe {name!r}; expected one of {', '.join(_RECIPES)}"
        ) from None
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return recipe(scenario, out)


# ---------------------------------------------------------------------------
# generic sweeps

_SWEEP_VARIABLES = ("P", "kappa2", "M", "rho_I")


def _require_single_power(sc: StarRisScenario, variable: str) -> PowerConfig:
    if len(sc.power_grid) != 1:
        raise ConfigurationError(
            f"sweeping {variable} needs a single-point power grid; set power.p_dbm "
            "to one value or pass --power-dbm"
        )
    return sc.power_grid[0]


def _metric_blocks(sc: StarRisScenario, metrics) -> list[tuple[str, object]]:
    cols: list[tuple[str, object]] = []
    if "op" in metrics:
        cols += _op_block(sc, sc.thresholds, "noma", "")
    if "ec" in metrics:
        cols += _ec_block(sc, "noma", "")
    return cols


def _stack_blocks(blocks) -> list[tuple[str, object]]:
    names = [name for name, _ in blocks[0]]
    if any([name for name, _ in blk] != names for blk in blocks):
        raise ConfigurationError("sweep blocks produced mismatched columns")
    return [
        (name, [blk[i][1][j] for blk in blocks for j in range(len(blk[i][1]))])
        for i, name in enumerate(names)
    ]


def run_sweep(
    scenario: StarRisScenario,
    variable: str,
    grid,
    metrics=("op", "ec"),
    out_dir=".",
) -> list[Path]:
    """Evaluate analytic + MC metrics over a grid of one variable."""
    if variable not in _SWEEP_VARIABLES:
        raise ConfigurationError(
            f"variable must be one of {', '.join(_SWEEP_VARIABLES)}, got {variable!r}"
        )
    grid = [float(v) for v in grid]
    if len(grid) == 0:
        raise ConfigurationError("sweep grid must be nonempty")
    if any(not math.isfinite(v) for v in grid):
        raise ConfigurationError("sweep grid must be finite")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigurationError("sweep grid must be strictly increasing")
    metrics = tuple(metrics)
    if len(metrics) == 0 or any(m not in ("op", "ec") for m in metrics):
        raise ConfigurationError(f"metrics must be drawn from 'op', 'ec'; got {metrics!r}")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    if variable == "P":
        vsc = _with_dbm_grid(scenario, grid)
        columns = [("p_dbm", grid)] + _metric_blocks(vsc, metrics)
    elif variable == "kappa2":
        ref = _require_single_power(scenario, variable)
        pcs = tuple(_pc_like(ref, kappa_sq=v) for v in grid)
        vsc = replace(scenario, p_dbm=scenario.p_dbm * len(grid), power_grid=pcs)
        vsc._cache.update(scenario._cache)
        columns = [("kappa_sq", grid)] + _metric_blocks(vsc, metrics)
    elif variable == "rho_I":
        ref = _require_single_power(scenario, variable)
        pcs = tuple(
            PowerConfig(ref.power_w, v, 1.0 - v, ref.kappa_sq, ref.noise_w) for v in grid
        )
        vsc = replace(scenario, p_dbm=scenario.p_dbm * len(grid), power_grid=pcs)
        vsc._cache.update(scenario._cache)
        columns = [("rho_indoor", grid)] + _metric_blocks(vsc, metrics)
    else:
        _require_single_power(scenario, variable)
        counts = []
        for v in grid:
            if not float(v).is_integer():
                raise ConfigurationError(f"element counts must be integers, got {v!r}")
            counts.append(int(v))
        blocks = [_metric_blocks(_with_m_count(scenario, m), metrics) for m in counts]
        columns = [("m", counts)] + _stack_blocks(blocks)

    fname = f"sweep_{variable.lower()}.csv"
    return [_write_csv(out / fname, columns)]


# ---------------------------------------------------------------------------
# command line


def _parse_grid_arg(text: str) -> list[float]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigurationError(f"grid must be start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ConfigurationError(f"grid must be numeric, got {text!r}") from None
        if step <= 0.0 or stop < start:
            raise ConfigurationError("grid needs step > 0 and stop >= start")
        n = int(round((stop - start) / step))
        values = [start + i * step for i in range(n + 1)]
        return [v for v in values if v <= stop + 1e-9 * max(1.0, abs(stop))]
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigurationError(f"grid must be numeric, got {text!r}") from None


def _scenario_for(args) -> StarRisScenario:
    sc = load_scenario(args.scenario) if args.scenario else default_scenario()
    overrides = {}
    if getattr(args, "trials", None) is not None:
        overrides["mc_trials"] = args.trials
    if getattr(args, "seed", None) is not None:
        overrides["mc_seed"] = args.seed
    return replace(sc, **overrides) if overrides else sc


def _cmd_validate(args) -> int:
    problems = validate_scenario(args.file)
    if problems:
        for line in problems:
            print(line, file=sys.stderr)
        return 2
    print(f"{args.file}: ok")
    return 0


def _cmd_recipe(args) -> int:
    paths = run_recipe(args.name, _scenario_for(args), args.out)
    for path in paths:
        print(path)
    return 0


def _cmd_sweep(args) -> int:
    sc = _scenario_for(args)
    if args.power_dbm is not None:
        sc = _with_dbm_grid(sc, [args.power_dbm])
    metrics = tuple(m.strip() for m in args.metrics.split(",") if m.strip())
    paths = run_sweep(sc, args.var, _parse_grid_arg(args.grid), metrics, args.out)
    for path in paths:
        print(path)
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", type=Path, default=None, help="TOML or JSON scenario file")
    parser.add_argument("--seed", type=int, default=None, help="override mc.seed")
    parser.add_argument("--trials", type=int, default=None, help="override mc.trials")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="star-thz-perf",
        description="Outage and capacity datasets for a STAR-RIS assisted NOMA terahertz link.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    val = sub.add_parser("validate", help="check a scenario file, reporting every violation")
    val.add_argument("file", type=Path)
    val.set_defaults(func=_cmd_validate)

    rec = sub.add_parser("recipe", help="render a named dataset to CSV")
    rec.add_argument("name", choices=list(_RECIPES))
    rec.add_argument("--out", type=Path, required=True, help="output directory")
    _add_common(rec)
    rec.set_defaults(func=_cmd_recipe)

    swp = sub.add_parser("sweep", help="evaluate metrics over a grid of one variable")
    swp.add_argument("--var", required=True, choices=_SWEEP_VARIABLES)
    swp.add_argument("--grid", required=True, help="start:stop:step or comma-separated values")
    swp.add_argument("--metrics", default="op,ec", help="comma list drawn from op, ec")
    swp.add_argument("--out", type=Path, default=Path("."), help="output directory")
    swp.add_argument(
        "--power-dbm",
        type=float,
        default=None,
        help="pin the transmit power before a kappa2/M/rho_I sweep",
    )
    _add_common(swp)
    swp.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ConfigurationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
