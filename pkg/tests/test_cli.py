"""End-to-end tests of the command-line front end.

All commands run in-process through main(argv) so exit codes and stderr
diagnostics can be asserted directly; determinism tests compare output
bytes, which is what the golden-file contract promises.
"""

import json
import math

import numpy as np
import pytest

from scopegarch import ParamVector, simulate
from scopegarch.cli import (
    PriceSeries,
    compound_returns,
    load_price_csv,
    main,
    read_rank_field_csv,
    write_rank_field_csv,
)
from scopegarch.errors import DataError, InvalidPrice

TABLE_THETA = ParamVector(0.23, (0.44,), (0.33,))


def write_config(tmp_path, cfg, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg), encoding="utf-8")
    return path


def scope_region_config(**overrides):
    cfg = {
        "schema_version": 1,
        "seed": 5,
        "m": 20,
        "r": 2,
        "include_qmle": False,
        "data": {
            "source": "simulate",
            "theta": {"omega": 0.23, "alphas": [0.44], "betas": [0.33]},
            "noise": {"family": "gaussian"},
            "n": 80,
        },
        "grid": {"mode": "unit-variance", "steps": 8},
    }
    cfg.update(overrides)
    return cfg


def write_price_csv(path, closes, start="2014-01-01"):
    import datetime

    day = datetime.date.fromisoformat(start)
    lines = ["date,close"]
    for close in closes:
        lines.append(f"{day.isoformat()},{close}")
        day += datetime.timedelta(days=1)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class TestCompoundReturns:
    def test_exponential_prices_unit_returns(self):
        prices = PriceSeries(
            "x", ("2014-01-01", "2014-01-02", "2014-01-03"),
            np.array([1.0, math.e, math.e**2]),
        )
        got = compound_returns(prices)
        np.testing.assert_allclose(got, [1.0, 1.0], atol=1e-12)

    def test_constant_prices_exact_zeros(self):
        prices = PriceSeries(
            "x", tuple(f"2014-01-{d:02d}" for d in range(1, 11)), np.full(10, 37.5)
        )
        got = compound_returns(prices)
        assert np.array_equal(got, np.zeros(9))

    def test_length_is_one_less_than_prices(self):
        rng = np.random.default_rng(0)
        closes = 100 * np.exp(np.cumsum(0.01 * rng.standard_normal(252)))
        prices = PriceSeries("x", tuple(str(i) for i in range(252)), closes)
        assert compound_returns(prices).shape == (251,)

    def test_non_positive_price_names_row(self):
        closes = np.array([1.0, 2.0, 3.0])
        prices = PriceSeries("x", ("a", "b", "c"), closes)
        broken = PriceSeries.__new__(PriceSeries)
        object.__setattr__(broken, "symbol", "x")
        object.__setattr__(broken, "dates", prices.dates)
        object.__setattr__(broken, "closes", np.array([1.0, 0.0, 3.0]))
        with pytest.raises(InvalidPrice, match="row 2"):
            compound_returns(broken)


class TestPriceSeries:
    def test_needs_two_rows(self):
        with pytest.raises(DataError, match="two rows"):
            PriceSeries("x", ("2014-01-01",), np.array([1.0]))

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="equal length"):
            PriceSeries("x", ("2014-01-01",), np.array([1.0, 2.0]))


class TestLoadPriceCsv:
    def test_happy_path_and_symbol_default(self, tmp_path):
        path = write_price_csv(tmp_path / "ndx.csv", [100.0, 101.5, 99.25])
        prices = load_price_csv(path)
        assert prices.symbol == "ndx"
        assert prices.dates == ("2014-01-01", "2014-01-02", "2014-01-03")
        assert np.array_equal(prices.closes, [100.0, 101.5, 99.25])
        assert load_price_csv(path, symbol="NDX100").symbol == "NDX100"

    def test_zero_price_names_data_row(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("date,close\n2014-01-01,100\n2014-01-02,0\n", encoding="utf-8")
        with pytest.raises(InvalidPrice, match="row 2"):
            load_price_csv(path)

    def test_decreasing_dates_rejected(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text(
            "date,close\n2014-01-02,100\n2014-01-01,101\n", encoding="utf-8"
        )
        with pytest.raises(InvalidPrice, match="row 2.*increasing"):
            load_price_csv(path)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("day,price\n2014-01-01,100\n", encoding="utf-8")
        with pytest.raises(DataError, match="header"):
            load_price_csv(path)

    def test_missing_file_is_data_error(self, tmp_path):
        with pytest.raises(DataError, match="cannot read"):
            load_price_csv(tmp_path / "absent.csv")

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(DataError, match="empty"):
            load_price_csv(path)

    def test_malformed_rows_rejected(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("date,close\nnot-a-date,100\n", encoding="utf-8")
        with pytest.raises(InvalidPrice, match="ISO-8601"):
            load_price_csv(path)
        path.write_text("date,close\n2014-01-01,abc\n", encoding="utf-8")
        with pytest.raises(InvalidPrice, match="not a number"):
            load_price_csv(path)
        path.write_text("date,close\n2014-01-01,100,extra\n", encoding="utf-8")
        with pytest.raises(InvalidPrice, match="2 fields"):
            load_price_csv(path)

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text(
            "date,close\n2014-01-01,100\n\n2014-01-02,101\n", encoding="utf-8"
        )
        assert load_price_csv(path).closes.shape == (2,)


class TestRankFieldCsv:
    ROWS = [
        (0.1, 0.2, 0.7, 3, True),
        (0.3, 0.0625, 0.6375, 17, False),
    ]

    def test_round_trip_preserves_rows(self, tmp_path):
        path = tmp_path / "field.csv"
        write_rank_field_csv(path, self.ROWS)
        assert read_rank_field_csv(path) == self.ROWS

    def test_read_then_write_is_byte_identical(self, tmp_path):
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        write_rank_field_csv(first, self.ROWS)
        write_rank_field_csv(second, read_rank_field_csv(first))
        assert first.read_bytes() == second.read_bytes()

    def test_read_rejects_malformed(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n", encoding="utf-8")
        with pytest.raises(DataError, match="header"):
            read_rank_field_csv(path)
        path.write_text(
            "alpha,beta,omega,rank,in_region\n0.1,0.2,0.7,1,maybe\n", encoding="utf-8"
        )
        with pytest.raises(DataError, match="true/false"):
            read_rank_field_csv(path)
        path.write_text(
            "alpha,beta,omega,rank,in_region\n0.1,0.2,0.7,1\n", encoding="utf-8"
        )
        with pytest.raises(DataError, match="5 fields"):
            read_rank_field_csv(path)


class TestScopeRegionCommand:
    def run(self, tmp_path, cfg, out_name="field.csv", seed=None):
        cfg_path = write_config(tmp_path, cfg)
        out = tmp_path / out_name
        argv = ["scope-region", "--config", str(cfg_path), "--out", str(out)]
        if seed is not None:
            argv += ["--seed", str(seed)]
        code = main(argv)
        return code, out

    def test_unit_variance_grid_shape(self, tmp_path):
        code, out = self.run(tmp_path, scope_region_config())
        assert code == 0
        rows = read_rank_field_csv(out)
        # cell centers (i+0.5)/8: kept iff i+j+1 < 8, i.e. 28 of 64 cells
        assert len(rows) == 28
        for alpha, beta, omega, rk, member in rows:
            assert alpha + beta < 1
            assert omega == pytest.approx(1 - alpha - beta, rel=1e-12)
            assert 1 <= rk <= 20
            assert member == (rk <= 18)

    def test_sidecar_contents(self, tmp_path):
        code, out = self.run(tmp_path, scope_region_config())
        assert code == 0
        sidecar = json.loads((out.parent / "field.json").read_text())
        assert sidecar["schema_version"] == 1
        assert sidecar["command"] == "scope-region"
        assert sidecar["seed"] == 5
        assert sidecar["rows"] == 28
        assert sidecar["csv"] == "field.csv"
        assert sidecar["nominal_coverage"] == pytest.approx(0.9)
        assert sidecar["config"]["m"] == 20
        assert {"omega", "alphas", "betas", "converged"} <= set(sidecar["theta_hat"])
        from scopegarch import __version__

        assert sidecar["version"] == __version__

    def test_include_qmle_appends_fit_row_with_rank_one(self, tmp_path):
        code, out = self.run(tmp_path, scope_region_config(include_qmle=True))
        assert code == 0
        rows = read_rank_field_csv(out)
        assert len(rows) == 29
        alpha, beta, omega, rk, member = rows[-1]
        sidecar = json.loads((out.parent / "field.json").read_text())
        assert sidecar["theta_hat"]["converged"] is True
        assert alpha == sidecar["theta_hat"]["alphas"][0]
        assert rk == 1
        assert member is True

    def test_one_point_grid_at_fit_two_phase(self, tmp_path):
        code, out = self.run(tmp_path, scope_region_config(include_qmle=True))
        assert code == 0
        theta_hat = json.loads((out.parent / "field.json").read_text())["theta_hat"]
        point = {
            "omega": theta_hat["omega"],
            "alphas": theta_hat["alphas"],
            "betas": theta_hat["betas"],
        }
        cfg = scope_region_config(grid={"mode": "points", "points": [point]})
        cfg_path = write_config(tmp_path, cfg, name="cfg2.json")
        out2 = tmp_path / "single.csv"
        assert main(["scope-region", "--config", str(cfg_path), "--out", str(out2)]) == 0
        rows = read_rank_field_csv(out2)
        assert len(rows) == 1
        assert rows[0][3] == 1
        assert rows[0][4] is True

    def test_reruns_byte_identical(self, tmp_path):
        dir_a = tmp_path / "a"
        dir_b = tmp_path / "b"
        dir_a.mkdir()
        dir_b.mkdir()
        cfg = scope_region_config()
        code_a, out_a = self.run(dir_a, cfg)
        code_b, out_b = self.run(dir_b, cfg)
        assert code_a == code_b == 0
        assert out_a.read_bytes() == out_b.read_bytes()
        assert (dir_a / "field.json").read_bytes() == (dir_b / "field.json").read_bytes()

    def test_seed_override_changes_output(self, tmp_path):
        dir_a = tmp_path / "a"
        dir_b = tmp_path / "b"
        dir_a.mkdir()
        dir_b.mkdir()
        cfg = scope_region_config()
        _, out_a = self.run(dir_a, cfg)
        code, out_b = self.run(dir_b, cfg, seed=99)
        assert code == 0
        assert out_a.read_bytes() != out_b.read_bytes()
        assert json.loads((dir_b / "field.json").read_text())["seed"] == 99

    def test_sidecar_name_collision_avoided(self, tmp_path):
        code, out = self.run(tmp_path, scope_region_config(), out_name="field.json")
        assert code == 0
        assert (tmp_path / "field.json.sidecar.json").exists()

    def test_fix_alpha_grid(self, tmp_path):
        cfg = scope_region_config(
            grid={
                "mode": "fix-alpha",
                "beta": {"min": 0.0, "max": 0.6, "steps": 4},
                "omega": {"min": 0.1, "max": 0.5, "steps": 3},
            }
        )
        code, out = self.run(tmp_path, cfg)
        assert code == 0
        rows = read_rank_field_csv(out)
        assert len(rows) == 12
        sidecar = json.loads((out.parent / "field.json").read_text())
        fitted_alpha = sidecar["theta_hat"]["alphas"][0]
        assert all(row[0] == fitted_alpha for row in rows)
        assert sorted({row[1] for row in rows}) == pytest.approx([0.0, 0.2, 0.4, 0.6])

    def test_unknown_key_exits_two(self, tmp_path, capsys):
        code, _ = self.run(tmp_path, scope_region_config(bogus=1))
        assert code == 2
        assert "bogus" in capsys.readouterr().err

    def test_wrong_schema_version_exits_two(self, tmp_path, capsys):
        code, _ = self.run(tmp_path, scope_region_config(schema_version=2))
        assert code == 2
        assert "schema_version" in capsys.readouterr().err

    def test_malformed_json_exits_two(self, tmp_path, capsys):
        cfg_path = tmp_path / "broken.json"
        cfg_path.write_text("{not json", encoding="utf-8")
        code = main(
            ["scope-region", "--config", str(cfg_path), "--out", str(tmp_path / "o.csv")]
        )
        assert code == 2
        assert "not valid JSON" in capsys.readouterr().err

    def test_missing_required_key_exits_two(self, tmp_path, capsys):
        cfg = scope_region_config()
        del cfg["m"]
        code, _ = self.run(tmp_path, cfg)
        assert code == 2
        assert "'m'" in capsys.readouterr().err

    def test_m_not_greater_than_r_exits_two(self, tmp_path):
        code, _ = self.run(tmp_path, scope_region_config(m=5, r=5))
        assert code == 2

    def test_non_garch11_orders_exit_two(self, tmp_path, capsys):
        cfg = scope_region_config(orders={"p": 2, "q": 1})
        cfg["data"]["theta"] = {"omega": 0.2, "alphas": [0.2, 0.1], "betas": [0.3]}
        code, _ = self.run(tmp_path, cfg)
        assert code == 2
        assert "GARCH(1,1)" in capsys.readouterr().err

    def test_degenerate_grid_exits_two(self, tmp_path, capsys):
        code, _ = self.run(
            tmp_path, scope_region_config(grid={"mode": "unit-variance", "steps": 1})
        )
        assert code == 2
        assert "admissible" in capsys.readouterr().err

    def test_missing_price_file_exits_three(self, tmp_path, capsys):
        cfg = scope_region_config(
            data={"source": "prices_csv", "path": str(tmp_path / "absent.csv")}
        )
        code, _ = self.run(tmp_path, cfg)
        assert code == 3
        assert "cannot read" in capsys.readouterr().err


def coverage_config(**overrides):
    cfg = {
        "schema_version": 1,
        "seed": 11,
        "method": "scope",
        "theta_star": {"omega": 0.23, "alphas": [0.44], "betas": [0.33]},
        "noise": {"family": "gaussian"},
        "n": 40,
        "trials": 50,
        "m": 10,
        "r": 1,
    }
    cfg.update(overrides)
    return cfg


class TestCoverageCommand:
    def run(self, tmp_path, cfg, out_name="report.json"):
        cfg_path = write_config(tmp_path, cfg)
        out = tmp_path / out_name
        code = main(["coverage", "--config", str(cfg_path), "--out", str(out)])
        return code, out

    def test_small_scope_run_schema(self, tmp_path):
        code, out = self.run(tmp_path, coverage_config())
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["command"] == "coverage"
        assert doc["schema_version"] == 1
        assert doc["method"] == "scope"
        assert doc["nominal_coverage"] == pytest.approx(0.9)
        assert doc["trials"] == 50
        assert doc["empirical_coverage"] == doc["hits"] / doc["trials"]
        assert doc["config"]["noise"] == {"family": "gaussian"}

    def test_single_trial(self, tmp_path):
        code, out = self.run(tmp_path, coverage_config(trials=1))
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["hits"] in (0, 1)
        assert doc["trials"] == 1

    def test_reruns_byte_identical(self, tmp_path):
        code, out_a = self.run(tmp_path, coverage_config(), out_name="a.json")
        code_b, out_b = self.run(tmp_path, coverage_config(), out_name="b.json")
        assert code == code_b == 0
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_ellipsoid_method_through_cli(self, tmp_path):
        cfg = coverage_config(method="asym_ellipsoid", n=300, trials=10)
        del cfg["m"]
        del cfg["r"]
        code, out = self.run(tmp_path, cfg)
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["nominal_coverage"] == pytest.approx(0.9)
        assert 0.0 <= doc["empirical_coverage"] <= 1.0

    def test_unknown_method_exits_two(self, tmp_path, capsys):
        code, _ = self.run(tmp_path, coverage_config(method="wald"))
        assert code == 2
        assert "method" in capsys.readouterr().err

    def test_scope_without_m_exits_two(self, tmp_path, capsys):
        cfg = coverage_config()
        del cfg["m"]
        code, _ = self.run(tmp_path, cfg)
        assert code == 2
        assert "'m'" in capsys.readouterr().err

    def test_zero_trials_exits_two(self, tmp_path):
        code, _ = self.run(tmp_path, coverage_config(trials=0))
        assert code == 2


def market_price_fixture(tmp_path, n_prices=253, seed=7):
    rng = np.random.default_rng(seed)
    sample = simulate(TABLE_THETA, rng.standard_normal(n_prices - 1))
    returns = 0.01 * sample.observations
    closes = 100.0 * np.exp(np.concatenate([[0.0], np.cumsum(returns)]))
    return write_price_csv(tmp_path / "index.csv", [f"{c:.6f}" for c in closes])


def market_config(csv_path, **overrides):
    cfg = {
        "schema_version": 1,
        "seed": 7,
        "csv_path": str(csv_path),
        "m": 40,
        "r": 4,
        "bootstrap_b": 60,
        "area_samples": 150,
    }
    cfg.update(overrides)
    return cfg


class TestMarketCommand:
    def run(self, tmp_path, cfg, out_name="market.json"):
        cfg_path = write_config(tmp_path, cfg, name="market-config.json")
        out = tmp_path / out_name
        code = main(["market", "--config", str(cfg_path), "--out", str(out)])
        return code, out

    def test_market_smoke(self, tmp_path):
        prices = market_price_fixture(tmp_path)
        code, out = self.run(
            tmp_path, market_config(prices, bootstrap_b=19, area_samples=20)
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["command"] == "market"
        assert doc["symbol"] == "index"
        assert doc["n_prices"] == 253
        assert doc["n_returns"] == 252
        assert set(doc["regions"]) == {
            "scope",
            "asym_ellipsoid",
            "res_bootstrap",
            "lr_bootstrap",
        }
        for name, region in doc["regions"].items():
            assert 0.0 <= region["relative_area"] <= 1.0, name
        assert doc["regions"]["scope"]["theta_hat_rank"] == 1
        assert doc["regions"]["scope"]["nominal_coverage"] == pytest.approx(0.9)

    @pytest.mark.slow
    def test_pipeline_areas_comparable(self, tmp_path):
        prices = market_price_fixture(tmp_path)
        code, out = self.run(tmp_path, market_config(prices))
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["regions"]["scope"]["theta_hat_rank"] == 1
        # directional claim: permutation and residual-bootstrap areas are
        # comparable (within a factor of two) on data with GARCH structure
        scope_area = doc["regions"]["scope"]["relative_area"]
        res_area = doc["regions"]["res_bootstrap"]["relative_area"]
        assert scope_area > 0 and res_area > 0
        assert 0.5 <= scope_area / res_area <= 2.0

    def test_two_row_price_file_exits_three(self, tmp_path, capsys):
        prices = write_price_csv(tmp_path / "tiny.csv", [100.0, 101.0])
        code, _ = self.run(tmp_path, market_config(prices))
        assert code == 3

    def test_zero_price_exits_three_naming_row(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text(
            "date,close\n2014-01-01,100\n2014-01-02,0\n2014-01-03,101\n",
            encoding="utf-8",
        )
        code, _ = self.run(tmp_path, market_config(path))
        assert code == 3
        assert "row 2" in capsys.readouterr().err

    def test_bootstrap_b_floor_enforced(self, tmp_path, capsys):
        prices = market_price_fixture(tmp_path)
        code, _ = self.run(tmp_path, market_config(prices, bootstrap_b=10))
        assert code == 2
        assert "bootstrap_b" in capsys.readouterr().err
