"""Scenario parsing, recipe rendering, sweeps, and the CLI surface.

Most cases run on a deliberately small scenario (2x2 panel, two-component
outdoor mixture, two power points, 1500 trials) so the whole file stays
fast; the packaged default scenario is exercised for parse checks only.
"""

import copy
import csv
import json
import math

import numpy as np
import pytest

from star_thz_perf.cli_runner import (
    SCHEMA_LINE,
    StarRisScenario,
    _square_layout,
    _with_m_count,
    db_to_linear,
    dbm_to_watt,
    default_scenario,
    load_scenario,
    main,
    run_recipe,
    run_sweep,
    scenario_from_dict,
    validate_scenario,
)
from star_thz_perf.dist_alpha_mu import AlphaMuParams
from star_thz_perf.errors import ConfigurationError, NumericalError
from star_thz_perf.performance import PowerConfig

LIGHT_TOML = """\
[geometry]
rows = 2
cols = 2
dx_m = 0.01
dy_m = 0.01
zeta = 5.0
ap = [0.0, 0.0, -1.0]
indoor_user = [5.0, -2.0, -9.0]
outdoor_user = [7.0, -3.0, 15.0]

[link]
frequency_hz = 140e9
bandwidth_hz = 4e9
tx_gain_dbi = 20.0
rx_gain_dbi = 20.0
absorption_per_m = 3.18e-4
noise_psd_dbm_hz = -174.0

[protocol]
mode = "es"
indoor_power = 0.5

[fading.indoor]
alpha = 2.0
mu = 1.0
omega = 1.0

[fading.outdoor]
truth = "mixture"
rician_k = 1.0
components = [ { a = 4.5, b = 2.0, c = 3.0 }, { a = 0.5, b = 1.0, c = 1.0 } ]
gaussian_components = [ { weight = 1.0, mean = 0.9, std = 0.2 } ]

[power]
p_dbm = [24.0, 30.0]
rho_indoor = 0.4
kappa_sq = 0.08

[thresholds]
indoor_db = 0.0
outdoor_db = 0.0

[numerics]
quad_order = 64
series_terms = 140

[mc]
trials = 1500
seed = 7
workers = 2
"""

BASE_RAW = {
    "geometry": {
        "rows": 2, "cols": 2, "dx_m": 0.01, "dy_m": 0.01, "zeta": 5.0,
        "ap": [0.0, 0.0, -1.0],
        "indoor_user": [5.0, -2.0, -9.0],
        "outdoor_user": [7.0, -3.0, 15.0],
    },
    "link": {
        "frequency_hz": 140e9, "bandwidth_hz": 4e9,
        "tx_gain_dbi": 20.0, "rx_gain_dbi": 20.0,
        "absorption_per_m": 3.18e-4, "noise_psd_dbm_hz": -174.0,
    },
    "protocol": {"mode": "es", "indoor_power": 0.5},
    "fading": {
        "indoor": {"alpha": 2.0, "mu": 1.0, "omega": 1.0},
        "outdoor": {
            "truth": "mixture", "rician_k": 1.0,
            "components": [
                {"a": 4.5, "b": 2.0, "c": 3.0},
                {"a": 0.5, "b": 1.0, "c": 1.0},
            ],
            "gaussian_components": [{"weight": 1.0, "mean": 0.9, "std": 0.2}],
        },
    },
    "power": {"p_dbm": [24.0, 30.0], "rho_indoor": 0.4, "kappa_sq": 0.08},
    "thresholds": {"indoor_db": 0.0, "outdoor_db": 0.0},
    "numerics": {"quad_order": 64, "series_terms": 140},
    "mc": {"trials": 1500, "seed": 7, "workers": 2},
}


def raw_scenario(mutate=None) -> dict:
    raw = copy.deepcopy(BASE_RAW)
    if mutate is not None:
        mutate(raw)
    return raw


def write_json(tmp_path, raw, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(raw), encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def light_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("scenario") / "light.toml"
    path.write_text(LIGHT_TOML, encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def light(light_path):
    return load_scenario(light_path)


def read_csv(path):
    with open(path, encoding="utf-8") as fh:
        assert fh.readline().rstrip("\n") == SCHEMA_LINE
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(cell) for cell in row] for row in reader]
    return header, np.asarray(rows)


class TestUnitConversions:
    def test_dbm(self):
        assert dbm_to_watt(30.0) == pytest.approx(1.0)
        assert dbm_to_watt(0.0) == pytest.approx(1e-3)

    def test_db(self):
        assert db_to_linear(0.0) == 1.0
        assert db_to_linear(20.0) == pytest.approx(100.0)

    def test_scenario_units(self, light):
        assert light.tx_gain == pytest.approx(100.0)
        assert light.noise_w == pytest.approx(4e9 * dbm_to_watt(-174.0))
        assert light.power_grid[1].power_w == pytest.approx(1.0)
        assert light.thresholds.indoor == pytest.approx(1.0)

    def test_threshold_db_conversion(self):
        raw = raw_scenario(lambda r: r["thresholds"].update(indoor_db=3.0103, outdoor_db=-3.0103))
        sc = scenario_from_dict(raw)
        assert sc.thresholds.indoor == pytest.approx(2.0, rel=1e-4)
        assert sc.thresholds.outdoor == pytest.approx(0.5, rel=1e-4)


class TestDefaultScenario:
    def test_loads_and_matches_the_reference_setup(self):
        sc = default_scenario()
        assert sc.panel.m_count == 9
        assert sc.protocol.mode == "es"
        assert sc.p_dbm[0] == 10.0 and sc.p_dbm[-1] == 50.0 and len(sc.p_dbm) == 21
        assert sc.power_grid[0].kappa_sq == 0.08
        assert sc.indoor_link.distance_m == pytest.approx(math.sqrt(110.0))
        assert sc.outdoor_link.distance_m == pytest.approx(math.sqrt(283.0))
        assert sc.indoor_fading == AlphaMuParams(2.0, 1.0, 1.0)
        assert sc.outdoor_gaussian is not None
        assert sc.mc_trials == 10**6

    def test_validates_clean(self):
        from importlib import resources

        data = resources.files("star_thz_perf").joinpath("data/table2.toml")
        assert validate_scenario(str(data)) == []


class TestScenarioParse:
    def test_toml_json_parity(self, light, tmp_path):
        via_json = load_scenario(write_json(tmp_path, raw_scenario()))
        assert via_json.p_dbm == light.p_dbm
        assert via_json.noise_w == light.noise_w
        assert via_json.thresholds == light.thresholds
        assert via_json.indoor_fading == light.indoor_fading
        assert np.array_equal(via_json.weights.indoor, light.weights.indoor)
        assert np.array_equal(via_json.weights.outdoor, light.weights.outdoor)
        assert [pc.power_w for pc in via_json.power_grid] == [
            pc.power_w for pc in light.power_grid
        ]

    def test_defaults_when_optional_sections_missing(self, tmp_path):
        raw = raw_scenario()
        del raw["numerics"], raw["mc"]
        sc = load_scenario(write_json(tmp_path, raw))
        assert (sc.quad_order, sc.series_terms) == (64, 360)
        assert (sc.mc_trials, sc.mc_seed, sc.mc_workers) == (200_000, 0, 1)

    def test_power_range_form(self):
        raw = raw_scenario(
            lambda r: r["power"].update(p_dbm={"start": 10.0, "stop": 20.0, "step": 5.0})
        )
        assert scenario_from_dict(raw).p_dbm == (10.0, 15.0, 20.0)

    def test_mixture_file_resolved_relative_to_scenario(self, tmp_path):
        mix = {
            "type": "mog",
            "components": [{"a": 4.5, "b": 2.0, "c": 3.0}, {"a": 0.5, "b": 1.0, "c": 1.0}],
        }
        (tmp_path / "mix.json").write_text(json.dumps(mix), encoding="utf-8")

        def mutate(r):
            del r["fading"]["outdoor"]["components"]
            r["fading"]["outdoor"]["mixture_file"] = "mix.json"

        sc = load_scenario(write_json(tmp_path, raw_scenario(mutate)))
        assert sc.outdoor_mixture.count == 2

    def test_ms_partition_from_file(self):
        raw = raw_scenario(
            lambda r: r.update(protocol={"mode": "ms", "indoor_elements": [0, 3]})
        )
        sc = scenario_from_dict(raw)
        assert sc.protocol.mode == "ms"
        assert sc.weights.indoor[1] == 0.0 and sc.weights.outdoor[0] == 0.0

    def test_rician_truth_flag(self):
        raw = raw_scenario(lambda r: r["fading"]["outdoor"].update(truth="rician"))
        assert scenario_from_dict(raw).outdoor_truth == "rician"


class TestValidation:
    def check(self, mutate, *needles):
        with pytest.raises(ConfigurationError) as err:
            scenario_from_dict(raw_scenario(mutate))
        text = str(err.value)
        for needle in needles:
            assert needle in text, f"{needle!r} not in:\n{text}"
        return text

    def test_clean_file_reports_nothing(self, light_path):
        assert validate_scenario(light_path) == []

    def test_unbalanced_split_reported(self):
        self.check(lambda r: r["protocol"].update(indoor_power=1.1), "protocol")

    def test_inverted_power_shares_reported(self):
        self.check(
            lambda r: r["power"].update(rho_indoor=0.6, rho_outdoor=0.4), "power"
        )

    def test_all_violations_reported_together(self):
        def mutate(r):
            r["fading"]["indoor"]["alpha"] = -1.0
            r["power"]["rho_indoor"] = 0.6
            r["thresholds"]["indoor_db"] = "loud"

        text = self.check(mutate, "fading.indoor", "power", "thresholds.indoor_db")
        assert len(text.splitlines()) >= 4

    def test_unknown_section_and_key(self):
        def mutate(r):
            r["typo_section"] = {"x": 1}
            r["geometry"]["rowz"] = 3

        self.check(mutate, "typo_section: unknown section", "geometry.rowz: unknown key")

    def test_duplicate_ms_elements(self):
        self.check(
            lambda r: r.update(protocol={"mode": "ms", "indoor_elements": [0, 0]}),
            "protocol",
        )

    def test_missing_mixture_file(self, tmp_path):
        def mutate(r):
            del r["fading"]["outdoor"]["components"]
            r["fading"]["outdoor"]["mixture_file"] = "nope.json"

        path = write_json(tmp_path, raw_scenario(mutate))
        problems = validate_scenario(path)
        assert any("fading.outdoor.mixture_file" in p for p in problems)

    def test_unreadable_and_malformed_files(self, tmp_path):
        assert validate_scenario(tmp_path / "missing.toml")
        bad = tmp_path / "bad.toml"
        bad.write_text("[geometry\nrows=", encoding="utf-8")
        problems = validate_scenario(bad)
        assert any("TOML" in p for p in problems)

    def test_json_syntax_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{", encoding="utf-8")
        assert any("JSON" in p for p in validate_scenario(bad))


class TestScenarioInvariants:
    def test_protocol_panel_mismatch(self, light):
        from dataclasses import replace
        from star_thz_perf.channel_geometry import ProtocolConfig

        with pytest.raises(ConfigurationError, match="panel has"):
            replace(light, protocol=ProtocolConfig.es_uniform(9))

    def test_off_axis_feed(self, light):
        from dataclasses import replace

        with pytest.raises(ConfigurationError, match="boresight"):
            replace(light, ap=(0.5, 0.0, -1.0))

    def test_feed_height_mismatch(self, light):
        from dataclasses import replace

        with pytest.raises(ConfigurationError, match="feed height"):
            replace(light, ap=(0.0, 0.0, -2.0))

    def test_unsorted_power_grid(self, light):
        from dataclasses import replace

        grid = (light.power_grid[1], light.power_grid[0])
        with pytest.raises(ConfigurationError, match="sorted"):
            replace(light, power_grid=grid)

    def test_power_grid_length_mismatch(self, light):
        from dataclasses import replace

        with pytest.raises(ConfigurationError, match="same length"):
            replace(light, p_dbm=(24.0,))

    def test_bad_truth_label(self, light):
        from dataclasses import replace

        with pytest.raises(ConfigurationError, match="outdoor_truth"):
            replace(light, outdoor_truth="samples")

    def test_small_quadrature_rejected(self, light):
        from dataclasses import replace

        with pytest.raises(ConfigurationError, match="quad_order"):
            replace(light, quad_order=8)


EXPECTED_ROWS = {
    "table1": 4,
    "fig2": 150,
    "fig3": 150,
    "fig4": 141,
    "fig5": 2,
    "fig6": 2,
    "fig7": 2,
    "fig8": 16,
    "fig9": 21,
    "fig10": 2,
    "fig11": 2,
    "fig12": 2,
    "fig13": 2,
}

SWEEP_COLUMN = {"table1": "m", "fig2": "x", "fig3": "x", "fig4": "x", "fig9": "kappa_sq"}


class TestRecipes:
    @pytest.mark.parametrize("name", sorted(EXPECTED_ROWS))
    def test_every_recipe_renders(self, name, light, tmp_path):
        paths = run_recipe(name, light, tmp_path / "out")
        assert [p.name for p in paths] == [f"{name}.csv"]
        header, rows = read_csv(paths[0])
        assert header[0] == SWEEP_COLUMN.get(name, "p_dbm")
        assert rows.shape[0] == EXPECTED_ROWS[name]
        assert np.all(np.isfinite(rows))

    def test_unknown_recipe(self, light, tmp_path):
        with pytest.raises(ConfigurationError, match="unknown recipe"):
            run_recipe("fig99", light, tmp_path)

    def test_truncation_table_values(self, light, tmp_path):
        run_recipe("table1", light, tmp_path)
        header, rows = read_csv(tmp_path / "table1.csv")
        assert header == ["m", "pdf_truncation_error", "cdf_truncation_error"]
        expected = np.array(
            [
                [2, 1.5786e-17, 1.9189e-18],
                [3, 6.3065e-17, 7.3328e-18],
                [4, 1.1035e-15, 1.2298e-16],
                [5, 8.2042e-14, 8.7799e-15],
            ]
        )
        assert np.allclose(rows, expected, rtol=5e-5)

    def test_cdf_recipe_statistics(self, light, tmp_path):
        run_recipe("fig3", light, tmp_path)
        header, rows = read_csv(tmp_path / "fig3.csv")
        for m in (2, 3, 4, 5):
            analytic = rows[:, header.index(f"sum_cdf_m{m}_analytic")]
            est = rows[:, header.index(f"sum_cdf_m{m}_mc")]
            assert np.all(np.diff(analytic) >= -1e-12)
            assert np.all((analytic >= 0.0) & (analytic <= 1.0))
            # 1500 draws: the empirical CDF should track within a few percent
            assert np.max(np.abs(analytic - est)) < 0.06

    def test_outage_recipe_consistency(self, light, tmp_path):
        run_recipe("fig5", light, tmp_path)
        header, rows = read_csv(tmp_path / "fig5.csv")
        for tag in ("ideal", "hwi"):
            analytic = rows[:, header.index(f"outdoor_op_{tag}_analytic")]
            est = rows[:, header.index(f"outdoor_op_{tag}_mc")]
            se = rows[:, header.index(f"outdoor_op_{tag}_mc_se")]
            assert np.all((analytic >= 0.0) & (analytic <= 1.0))
            assert np.all(np.abs(analytic - est) <= 4.0 * se + 0.02)
            flags = rows[:, header.index(f"outdoor_op_{tag}_mc_unreliable")]
            assert set(flags) <= {0.0, 1.0}
        # distortion can only hurt
        assert np.all(
            rows[:, header.index("indoor_op_hwi_analytic")]
            >= rows[:, header.index("indoor_op_ideal_analytic")]
        )

    def test_protocol_recipe_ordering(self, light, tmp_path):
        run_recipe("fig10", light, tmp_path)
        header, rows = read_csv(tmp_path / "fig10.csv")
        es = rows[:, header.index("outdoor_op_es_analytic")]
        ms = rows[:, header.index("outdoor_op_ms_analytic")]
        assert np.all(es <= ms + 1e-12)

    def test_sum_rate_recipe_ordering(self, light, tmp_path):
        run_recipe("fig13", light, tmp_path)
        header, rows = read_csv(tmp_path / "fig13.csv")
        for kind in ("ideal", "hwi"):
            noma = rows[:, header.index(f"sum_ec_noma_{kind}_analytic")]
            oma = rows[:, header.index(f"sum_ec_oma_{kind}_analytic")]
            assert np.all(noma >= oma - 1e-9)

    def test_byte_identical_reruns(self, light, tmp_path):
        a = run_recipe("fig5", light, tmp_path / "a")[0]
        b = run_recipe("fig5", light, tmp_path / "b")[0]
        assert a.read_bytes() == b.read_bytes()

    def test_seed_changes_mc_columns(self, light, tmp_path):
        from dataclasses import replace

        reseeded = replace(light, mc_seed=8)
        a = run_recipe("fig5", light, tmp_path / "a")[0]
        b = run_recipe("fig5", reseeded, tmp_path / "b")[0]
        assert a.read_bytes() != b.read_bytes()

    def test_gaussian_recipe_needs_element_law(self, light, tmp_path):
        raw = raw_scenario(lambda r: r["fading"]["outdoor"].pop("gaussian_components"))
        sc = scenario_from_dict(raw)
        with pytest.raises(ConfigurationError, match="Gaussian element law"):
            run_recipe("fig4", sc, tmp_path)


class TestSweeps:
    def test_single_point_power_sweep(self, light, tmp_path):
        paths = run_sweep(light, "P", [30.0], metrics=("op",), out_dir=tmp_path)
        header, rows = read_csv(paths[0])
        assert paths[0].name == "sweep_p.csv"
        assert rows.shape == (1, len(header))
        assert header[0] == "p_dbm" and rows[0, 0] == 30.0

    def test_empty_and_unsorted_grids(self, light, tmp_path):
        with pytest.raises(ConfigurationError, match="nonempty"):
            run_sweep(light, "P", [], out_dir=tmp_path)
        with pytest.raises(ConfigurationError, match="increasing"):
            run_sweep(light, "P", [30.0, 20.0], out_dir=tmp_path)

    def test_unknown_variable_and_metric(self, light, tmp_path):
        with pytest.raises(ConfigurationError, match="variable"):
            run_sweep(light, "zeta", [1.0], out_dir=tmp_path)
        with pytest.raises(ConfigurationError, match="metrics"):
            run_sweep(light, "P", [30.0], metrics=("sinr",), out_dir=tmp_path)

    def test_kappa_sweep_requires_pinned_power(self, light, tmp_path):
        with pytest.raises(ConfigurationError, match="single-point power grid"):
            run_sweep(light, "kappa2", [0.0, 0.1], out_dir=tmp_path)

    def test_kappa_sweep(self, light, tmp_path):
        from star_thz_perf.cli_runner import _with_dbm_grid

        pinned = _with_dbm_grid(light, [30.0])
        paths = run_sweep(pinned, "kappa2", [0.0, 0.1], metrics=("ec",), out_dir=tmp_path)
        header, rows = read_csv(paths[0])
        assert header[0] == "kappa_sq"
        ec = rows[:, header.index("indoor_ec_analytic")]
        assert ec[0] > ec[1]

    def test_m_sweep_layout_and_output(self, light, tmp_path):
        from star_thz_perf.cli_runner import _with_dbm_grid

        assert _square_layout(9) == (3, 3)
        assert _square_layout(6) == (2, 3)
        assert _square_layout(7) == (1, 7)
        pinned = _with_dbm_grid(light, [30.0])
        paths = run_sweep(pinned, "M", [2.0, 4.0], metrics=("op",), out_dir=tmp_path)
        header, rows = read_csv(paths[0])
        assert header[0] == "m"
        assert list(rows[:, 0]) == [2.0, 4.0]
        # more elements focus more power
        assert rows[0, header.index("indoor_op_analytic")] > rows[
            1, header.index("indoor_op_analytic")
        ]

    def test_m_sweep_rejects_fractional_counts(self, light, tmp_path):
        from star_thz_perf.cli_runner import _with_dbm_grid

        pinned = _with_dbm_grid(light, [30.0])
        with pytest.raises(ConfigurationError, match="integer"):
            run_sweep(pinned, "M", [2.5, 4.0], metrics=("op",), out_dir=tmp_path)

    def test_ms_mode_m_rescaling(self, light):
        from dataclasses import replace
        from star_thz_perf.channel_geometry import ProtocolConfig

        ms = replace(light, protocol=ProtocolConfig.ms_partition(4, [0, 1]))
        grown = _with_m_count(ms, 6)
        assert grown.panel.m_count == 6
        assert int(np.sum(grown.protocol.indoor_amplitudes)) == 3

    def test_rho_sweep_domain(self, light, tmp_path):
        from star_thz_perf.cli_runner import _with_dbm_grid

        pinned = _with_dbm_grid(light, [30.0])
        with pytest.raises(ConfigurationError):
            run_sweep(pinned, "rho_I", [0.4, 0.6], metrics=("ec",), out_dir=tmp_path)
        paths = run_sweep(pinned, "rho_I", [0.2, 0.4], metrics=("ec",), out_dir=tmp_path)
        header, rows = read_csv(paths[0])
        assert header[0] == "rho_indoor"
        assert rows.shape[0] == 2


class TestCli:
    def test_validate_ok(self, light_path, capsys):
        assert main(["validate", str(light_path)]) == 0
        assert "ok" in capsys.readouterr().out

    def test_validate_bad_exit_code(self, tmp_path, capsys):
        raw = raw_scenario(lambda r: r["power"].update(rho_indoor=0.6, rho_outdoor=0.4))
        path = write_json(tmp_path, raw)
        assert main(["validate", str(path)]) == 2
        assert "power" in capsys.readouterr().err

    def test_recipe_command(self, light_path, tmp_path, capsys):
        code = main(
            [
                "recipe",
                "table1",
                "--scenario",
                str(light_path),
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        assert (tmp_path / "table1.csv").exists()
        assert "table1.csv" in capsys.readouterr().out

    def test_recipe_trials_and_seed_overrides(self, light_path, tmp_path):
        argv = ["recipe", "fig5", "--scenario", str(light_path), "--trials", "400"]
        assert main(argv + ["--out", str(tmp_path / "a")]) == 0
        assert main(argv + ["--out", str(tmp_path / "b")]) == 0
        assert main(argv + ["--out", str(tmp_path / "c"), "--seed", "99"]) == 0
        a = (tmp_path / "a" / "fig5.csv").read_bytes()
        assert a == (tmp_path / "b" / "fig5.csv").read_bytes()
        assert a != (tmp_path / "c" / "fig5.csv").read_bytes()

    def test_unknown_recipe_is_usage_error(self, light_path, tmp_path):
        with pytest.raises(SystemExit) as err:
            main(["recipe", "fig99", "--scenario", str(light_path), "--out", str(tmp_path)])
        assert err.value.code == 2

    def test_sweep_command_with_range_grid(self, light_path, tmp_path):
        code = main(
            [
                "sweep",
                "--var",
                "P",
                "--grid",
                "24:30:6",
                "--metrics",
                "op",
                "--scenario",
                str(light_path),
                "--trials",
                "500",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        header, rows = read_csv(tmp_path / "sweep_p.csv")
        assert list(rows[:, 0]) == [24.0, 30.0]

    def test_sweep_power_pin_flag(self, light_path, tmp_path):
        code = main(
            [
                "sweep",
                "--var",
                "kappa2",
                "--grid",
                "0:0.1:0.1",
                "--metrics",
                "ec",
                "--scenario",
                str(light_path),
                "--trials",
                "500",
                "--power-dbm",
                "30",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        assert (tmp_path / "sweep_kappa2.csv").exists()

    def test_malformed_grid_exits_config(self, light_path, tmp_path, capsys):
        code = main(
            [
                "sweep",
                "--var",
                "P",
                "--grid",
                "1:2",
                "--scenario",
                str(light_path),
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 2
        assert "grid" in capsys.readouterr().err

    def test_numerical_failure_exits_three(self, tmp_path, capsys):
        def mutate(r):
            r["power"]["p_dbm"] = [14.0]
            r["numerics"]["series_terms"] = 24

        path = write_json(tmp_path, raw_scenario(mutate))
        code = main(
            [
                "sweep",
                "--var",
                "P",
                "--grid",
                "14:14:1",
                "--metrics",
                "op",
                "--scenario",
                str(path),
                "--trials",
                "200",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 3
        assert "numerical" in capsys.readouterr().err.lower()
