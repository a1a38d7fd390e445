"""Command-line front end.

Three subcommands, each driven by a single JSON config file:

``scope-region``
    Evaluate the permutation rank field over a parameter grid and write it
    as CSV (columns ``alpha,beta,omega,rank,in_region``) plus a JSON sidecar
    with the resolved config, seed, and the QMLE.

``coverage``
    Run a Monte Carlo coverage experiment for one method and write the
    report as JSON.

``market``
    Ingest a ``date,close`` price CSV, transform to standardized compound
    returns, fit the QMLE, and estimate the relative area of all four
    region constructions; write a JSON document keyed by method.

Every run is deterministic given its config (the seed lives in the config;
``--seed`` merely overrides it), outputs embed the resolved config and the
package version, and floats are serialized with shortest round-trip decimal
formatting so reruns are byte-identical.

Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.
"""

import argparse
import csv
import datetime
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import (
    asymptotic_region,
    bootstrap_region_membership,
    lr_bootstrap_pvalue,
    residual_bootstrap,
)
from .errors import ConfigError, DataError, InvalidPrice, NumericalError
from .garch import ModelOrders, ParamVector, SeriesSample, standardize
from .harness import (
    METHODS,
    NoiseSpec,
    empirical_coverage,
    make_trial_sample,
    relative_area,
    sample_unit_variance_slice,
)
from .qml import asymptotic_covariance, qmle_fit
from .scope import PermutationSet, RegionEvaluator, ScopeConfig, rank_field

__all__ = [
    "PriceSeries",
    "load_price_csv",
    "compound_returns",
    "read_rank_field_csv",
    "write_rank_field_csv",
    "main",
]

SCHEMA_VERSION = 1

RANK_FIELD_HEADER = ("alpha", "beta", "omega", "rank", "in_region")


# ---------------------------------------------------------------------------
# Price ingestion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PriceSeries:
    """Daily closes for one symbol; dates strictly increasing, prices > 0."""

    symbol: str
    dates: tuple
    closes: np.ndarray

    def __post_init__(self):
        closes = np.ascontiguousarray(self.closes, dtype=np.float64)
        if len(self.dates) != closes.shape[0]:
            raise ValueError("dates and closes must have equal length")
        if closes.shape[0] < 2:
            raise DataError("price series needs at least two rows")
        closes.flags.writeable = False
        object.__setattr__(self, "closes", closes)
        object.__setattr__(self, "dates", tuple(self.dates))


def load_price_csv(path, symbol=None):
    """Parse a ``date,close`` CSV into a PriceSeries.

    Dates must be ISO-8601 and strictly increasing, closes positive reals.
    Row numbers in errors are 1-based over data rows (the header is row 0).
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                raise DataError(f"{path}: empty file") from None
            if [h.strip() for h in header] != ["date", "close"]:
                raise DataError(
                    f"{path}: expected header 'date,close', got {','.join(header)!r}"
                )
            dates = []
            closes = []
            previous = None
            for row_num, row in enumerate(reader, start=1):
                if not row or (len(row) == 1 and not row[0].strip()):
                    continue
                if len(row) != 2:
                    raise InvalidPrice(row_num, f"expected 2 fields, got {len(row)}")
                raw_date, raw_close = row[0].strip(), row[1].strip()
                try:
                    date = datetime.date.fromisoformat(raw_date)
                except ValueError:
                    raise InvalidPrice(
                        row_num, f"not an ISO-8601 date: {raw_date!r}"
                    ) from None
                try:
                    close = float(raw_close)
                except ValueError:
                    raise InvalidPrice(
                        row_num, f"not a number: {raw_close!r}"
                    ) from None
                if not np.isfinite(close) or close <= 0.0:
                    raise InvalidPrice(row_num, f"price must be positive, got {raw_close}")
                if previous is not None and date <= previous:
                    raise InvalidPrice(
                        row_num, f"dates must be strictly increasing, got {raw_date}"
                    )
                previous = date
                dates.append(date.isoformat())
                closes.append(close)
    except OSError as exc:
        raise DataError(f"cannot read price CSV {path}: {exc}") from None
    if len(closes) < 2:
        raise DataError(f"{path}: price series needs at least two rows")
    return PriceSeries(
        symbol=symbol if symbol is not None else path.stem,
        dates=tuple(dates),
        closes=np.array(closes),
    )


def compound_returns(prices):
    """Log price ratios R_t = log(P_t / P_{t-1}); length len(closes) - 1."""
    closes = np.asarray(prices.closes, dtype=np.float64)
    bad = np.flatnonzero(~(closes > 0.0))
    if bad.size:
        raise InvalidPrice(int(bad[0]) + 1, "price must be positive")
    return np.diff(np.log(closes))


# ---------------------------------------------------------------------------
# Config validation helpers
# ---------------------------------------------------------------------------


def _reject_unknown(cfg, allowed, where):
    unknown = sorted(set(cfg) - set(allowed))
    if unknown:
        keys = ", ".join(repr(k) for k in unknown)
        plural = "s" if len(unknown) > 1 else ""
        raise ConfigError(f"unknown config key{plural} {keys} in {where}")


def _require(cfg, key, where):
    if key not in cfg:
        raise ConfigError(f"missing required config key {key!r} in {where}")
    return cfg[key]


def _as_object(value, where):
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be a JSON object")
    return value


def _as_int(value, key, minimum=None, maximum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"config key {key!r} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"config key {key!r} must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ConfigError(f"config key {key!r} must be <= {maximum}, got {value}")
    return value


def _as_number(value, key, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"config key {key!r} must be a number, got {value!r}")
    value = float(value)
    if positive and not value > 0.0:
        raise ConfigError(f"config key {key!r} must be positive, got {value}")
    return value


def _as_bool(value, key):
    if not isinstance(value, bool):
        raise ConfigError(f"config key {key!r} must be true or false, got {value!r}")
    return value


def _as_str(value, key, choices=None):
    if not isinstance(value, str):
        raise ConfigError(f"config key {key!r} must be a string, got {value!r}")
    if choices is not None and value not in choices:
        raise ConfigError(
            f"config key {key!r} must be one of {sorted(choices)}, got {value!r}"
        )
    return value


def _as_level(value, key):
    value = _as_number(value, key)
    if not (0.0 < value < 1.0):
        raise ConfigError(f"config key {key!r} must be in (0, 1), got {value}")
    return value


def _parse_theta(value, where):
    obj = _as_object(value, where)
    _reject_unknown(obj, ("omega", "alphas", "betas"), where)
    omega = _as_number(_require(obj, "omega", where), f"{where}.omega", positive=True)
    alphas = _require(obj, "alphas", where)
    betas = _require(obj, "betas", where)
    for name, coeffs in (("alphas", alphas), ("betas", betas)):
        if not isinstance(coeffs, list) or not all(
            isinstance(c, (int, float)) and not isinstance(c, bool) for c in coeffs
        ):
            raise ConfigError(f"{where}.{name} must be a list of numbers")
    try:
        return ParamVector(omega=omega, alphas=tuple(alphas), betas=tuple(betas))
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _parse_noise(value, where):
    obj = _as_object(value, where)
    _reject_unknown(obj, ("family", "df"), where)
    family = _as_str(
        _require(obj, "family", where),
        f"{where}.family",
        choices=("gaussian", "logistic", "laplace", "student_t"),
    )
    try:
        if "df" in obj:
            return NoiseSpec(family=family, df=_as_number(obj["df"], f"{where}.df"))
        return NoiseSpec(family=family)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _parse_orders(cfg, where):
    if "orders" not in cfg:
        return 1, 1
    obj = _as_object(cfg["orders"], f"{where}.orders")
    _reject_unknown(obj, ("p", "q"), f"{where}.orders")
    p = _as_int(_require(obj, "p", f"{where}.orders"), "orders.p", minimum=0)
    q = _as_int(_require(obj, "q", f"{where}.orders"), "orders.q", minimum=0)
    if p == 0 and q == 0:
        raise ConfigError("orders: p and q cannot both be zero")
    return p, q


def _load_config(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    cfg = _as_object(cfg, "config")
    if "schema_version" in cfg:
        version = _as_int(cfg["schema_version"], "schema_version")
        if version != SCHEMA_VERSION:
            raise ConfigError(
                f"config key 'schema_version' must be {SCHEMA_VERSION}, got {version}"
            )
    return cfg


# ---------------------------------------------------------------------------
# Deterministic serialization
# ---------------------------------------------------------------------------


def _json_ready(value):
    """Recursively convert NumPy scalars/arrays so json emits repr floats."""
    if isinstance(value, dict):
        return {k: _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_json_ready(v) for v in value.tolist()]
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def _write_json(path, document):
    text = json.dumps(_json_ready(document), indent=2, sort_keys=True) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def _theta_dict(theta):
    return {
        "omega": theta.omega,
        "alphas": list(theta.alphas),
        "betas": list(theta.betas),
    }


def _fit_dict(fit):
    return {
        **_theta_dict(fit.theta_hat),
        "neg_loglik": fit.neg_loglik,
        "score_norm": fit.score_norm,
        "converged": fit.converged,
        "iterations": fit.iterations,
    }


def _int_seed(seed, stream):
    """Derive a 64-bit integer sub-seed for one named stream of a run."""
    return int(np.random.SeedSequence((seed, stream)).generate_state(1, np.uint64)[0])


# ---------------------------------------------------------------------------
# Rank-field CSV
# ---------------------------------------------------------------------------


def write_rank_field_csv(path, rows):
    """Write (alpha, beta, omega, rank, in_region) rows with repr floats."""
    lines = [",".join(RANK_FIELD_HEADER)]
    for alpha, beta, omega, rk, member in rows:
        lines.append(
            f"{float(alpha)!r},{float(beta)!r},{float(omega)!r},"
            f"{int(rk)},{'true' if member else 'false'}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_rank_field_csv(path):
    """Parse a rank-field CSV back into (alpha, beta, omega, rank, in_region)."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header is None or tuple(h.strip() for h in header) != RANK_FIELD_HEADER:
                raise DataError(
                    f"{path}: expected header {','.join(RANK_FIELD_HEADER)!r}"
                )
            rows = []
            for row_num, row in enumerate(reader, start=1):
                if not row:
                    continue
                if len(row) != 5:
                    raise DataError(f"{path}: row {row_num}: expected 5 fields")
                try:
                    alpha, beta, omega = (float(v) for v in row[:3])
                    rk = int(row[3])
                except ValueError as exc:
                    raise DataError(f"{path}: row {row_num}: {exc}") from None
                if row[4] not in ("true", "false"):
                    raise DataError(
                        f"{path}: row {row_num}: in_region must be true/false"
                    )
                rows.append((alpha, beta, omega, rk, row[4] == "true"))
    except OSError as exc:
        raise DataError(f"cannot read rank-field CSV {path}: {exc}") from None
    return rows


# ---------------------------------------------------------------------------
# Grid construction
# ---------------------------------------------------------------------------


def _build_grid(cfg, fit, where="grid"):
    obj = _as_object(_require(cfg, "grid", "config"), where)
    mode = _as_str(
        _require(obj, "mode", where),
        f"{where}.mode",
        choices=("unit-variance", "fix-alpha", "points"),
    )
    if mode == "unit-variance":
        _reject_unknown(obj, ("mode", "steps"), where)
        steps = _as_int(obj.get("steps", 50), f"{where}.steps", minimum=1)
        centers = [(i + 0.5) / steps for i in range(steps)]
        grid = []
        for i, alpha in enumerate(centers):
            for j, beta in enumerate(centers):
                # drop cells whose center has alpha + beta >= 1, deciding in
                # integer arithmetic so boundary cells cannot survive by
                # floating-point rounding
                if i + j + 1 >= steps:
                    continue
                grid.append(
                    ParamVector(omega=1.0 - alpha - beta, alphas=(alpha,), betas=(beta,))
                )
        if not grid:
            raise ConfigError(f"{where}: steps={steps} leaves no admissible cells")
        return grid
    if mode == "fix-alpha":
        _reject_unknown(obj, ("mode", "beta", "omega"), where)
        beta_axis = _parse_axis(_require(obj, "beta", where), f"{where}.beta")
        omega_axis = _parse_axis(_require(obj, "omega", where), f"{where}.omega")
        alpha = fit.theta_hat.alphas[0]
        grid = []
        for beta in beta_axis:
            if beta < 0.0:
                continue
            for omega in omega_axis:
                if omega > 0.0:
                    grid.append(ParamVector(omega=omega, alphas=(alpha,), betas=(beta,)))
        if not grid:
            raise ConfigError(f"{where}: no admissible grid points (omega must be > 0)")
        return grid
    _reject_unknown(obj, ("mode", "points"), where)
    points = _require(obj, "points", where)
    if not isinstance(points, list) or not points:
        raise ConfigError(f"{where}.points must be a non-empty list")
    return [_parse_theta(pt, f"{where}.points[{i}]") for i, pt in enumerate(points)]


def _parse_axis(value, where):
    obj = _as_object(value, where)
    _reject_unknown(obj, ("min", "max", "steps"), where)
    low = _as_number(_require(obj, "min", where), f"{where}.min")
    high = _as_number(_require(obj, "max", where), f"{where}.max")
    steps = _as_int(_require(obj, "steps", where), f"{where}.steps", minimum=1)
    if high < low:
        raise ConfigError(f"{where}: max must be >= min")
    if steps == 1:
        return [low]
    return list(np.linspace(low, high, steps))


# ---------------------------------------------------------------------------
# Data sources shared by scope-region
# ---------------------------------------------------------------------------


def _returns_sample(prices, p, q):
    """Standardized compound returns packaged with unit initial values.

    After standardization the sample variance is one, so the natural
    convention for the unobserved presample squares and initial variances is
    1.0 -- the long-run variance of the standardized series.
    """
    returns = compound_returns(prices)
    standardized = standardize(returns)
    return SeriesSample(
        observations=standardized,
        presample_sq=np.ones(p),
        initial_variances=np.ones(q),
    )


def _build_sample(cfg, seed, p, q, where="data"):
    obj = _as_object(_require(cfg, "data", "config"), where)
    source = _as_str(
        _require(obj, "source", where),
        f"{where}.source",
        choices=("simulate", "prices_csv"),
    )
    if source == "simulate":
        _reject_unknown(
            obj, ("source", "theta", "noise", "n", "burn_in", "init"), where
        )
        theta = _parse_theta(_require(obj, "theta", where), f"{where}.theta")
        if theta.orders != ModelOrders(p, q):
            raise ConfigError(
                f"{where}.theta has orders {theta.orders}, config says ({p}, {q})"
            )
        noise = _parse_noise(_require(obj, "noise", where), f"{where}.noise")
        n = _as_int(_require(obj, "n", where), f"{where}.n", minimum=1)
        burn_in = _as_int(obj.get("burn_in", 0), f"{where}.burn_in", minimum=0)
        init = _as_str(
            obj.get("init", "unconditional"),
            f"{where}.init",
            choices=("unconditional", "omega"),
        )
        rng = np.random.default_rng(np.random.SeedSequence((seed, 0)))
        return make_trial_sample(theta, noise, n, rng, burn_in=burn_in, init=init)
    _reject_unknown(obj, ("source", "path", "symbol"), where)
    path = _as_str(_require(obj, "path", where), f"{where}.path")
    symbol = _as_str(obj.get("symbol", ""), f"{where}.symbol") or None
    return _returns_sample(load_price_csv(path, symbol=symbol), p, q)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

_SCOPE_REGION_KEYS = (
    "schema_version",
    "seed",
    "orders",
    "m",
    "r",
    "standardize_residuals",
    "include_qmle",
    "data",
    "grid",
)


def _cmd_scope_region(cfg, out_path):
    _reject_unknown(cfg, _SCOPE_REGION_KEYS, "config")
    seed = _as_int(_require(cfg, "seed", "config"), "seed")
    p, q = _parse_orders(cfg, "config")
    if (p, q) != (1, 1):
        raise ConfigError(
            "scope-region's alpha,beta,omega CSV format supports GARCH(1,1) only"
        )
    m = _as_int(_require(cfg, "m", "config"), "m", minimum=2)
    r = _as_int(_require(cfg, "r", "config"), "r", minimum=1)
    if not m > r:
        raise ConfigError(f"config needs m > r, got m={m}, r={r}")
    standardize_residuals = _as_bool(
        cfg.get("standardize_residuals", False), "standardize_residuals"
    )
    include_qmle = _as_bool(cfg.get("include_qmle", True), "include_qmle")

    sample = _build_sample(cfg, seed, p, q)
    fit = qmle_fit(sample, (p, q))
    grid = _build_grid(cfg, fit)
    for index, theta in enumerate(grid):
        if theta.orders != ModelOrders(1, 1):
            raise ConfigError(
                f"grid.points[{index}] has orders {theta.orders}; "
                "the rank-field CSV supports GARCH(1,1) only"
            )
    if include_qmle:
        grid = grid + [fit.theta_hat]

    config = ScopeConfig(m=m, r=r, standardize_residuals=standardize_residuals)
    perms = PermutationSet.generate(sample.n, m, np.random.SeedSequence((seed, 1)))
    field = rank_field(sample, grid, perms, config)
    rows = [
        (theta.alphas[0], theta.betas[0], theta.omega, rk, member)
        for theta, rk, member in field
    ]
    write_rank_field_csv(out_path, rows)

    sidecar = Path(out_path).with_suffix(".json")
    if sidecar == Path(out_path):
        sidecar = Path(str(out_path) + ".sidecar.json")
    _write_json(
        sidecar,
        {
            "schema_version": SCHEMA_VERSION,
            "version": __version__,
            "command": "scope-region",
            "seed": seed,
            "config": _resolved_scope_region(cfg, seed, p, q, m, r,
                                             standardize_residuals, include_qmle),
            "theta_hat": _fit_dict(fit),
            "nominal_coverage": config.coverage,
            "rows": len(rows),
            "csv": Path(out_path).name,
        },
    )
    return 0


def _resolved_scope_region(cfg, seed, p, q, m, r, standardize_residuals, include_qmle):
    resolved = dict(cfg)
    resolved.update(
        {
            "schema_version": SCHEMA_VERSION,
            "seed": seed,
            "orders": {"p": p, "q": q},
            "m": m,
            "r": r,
            "standardize_residuals": standardize_residuals,
            "include_qmle": include_qmle,
        }
    )
    return resolved


_COVERAGE_KEYS = (
    "schema_version",
    "seed",
    "method",
    "orders",
    "theta_star",
    "noise",
    "n",
    "trials",
    "burn_in",
    "m",
    "r",
    "level",
    "bootstrap_b",
    "area_samples",
    "standardize_residuals",
    "init",
)


def _cmd_coverage(cfg, out_path):
    _reject_unknown(cfg, _COVERAGE_KEYS, "config")
    seed = _as_int(_require(cfg, "seed", "config"), "seed")
    method = _as_str(_require(cfg, "method", "config"), "method", choices=METHODS)
    theta_star = _parse_theta(_require(cfg, "theta_star", "config"), "theta_star")
    p, q = _parse_orders(cfg, "config")
    if theta_star.orders != ModelOrders(p, q):
        raise ConfigError(
            f"theta_star has orders {theta_star.orders}, config says ({p}, {q})"
        )
    noise = _parse_noise(_require(cfg, "noise", "config"), "noise")
    n = _as_int(_require(cfg, "n", "config"), "n", minimum=1)
    trials = _as_int(_require(cfg, "trials", "config"), "trials", minimum=1)
    burn_in = _as_int(cfg.get("burn_in", 0), "burn_in", minimum=0)
    m = _as_int(cfg["m"], "m", minimum=2) if "m" in cfg else None
    r = _as_int(cfg["r"], "r", minimum=1) if "r" in cfg else None
    level = _as_level(cfg.get("level", 0.90), "level")
    bootstrap_b = _as_int(cfg.get("bootstrap_b", 100), "bootstrap_b", minimum=0)
    area_samples = _as_int(cfg.get("area_samples", 0), "area_samples", minimum=0)
    standardize_residuals = _as_bool(
        cfg.get("standardize_residuals", False), "standardize_residuals"
    )
    init = _as_str(
        cfg.get("init", "unconditional"), "init", choices=("unconditional", "omega")
    )
    if method == "scope" and (m is None or r is None):
        raise ConfigError("method 'scope' requires config keys 'm' and 'r'")

    report = empirical_coverage(
        method=method,
        theta_star=theta_star,
        noise=noise,
        n=n,
        trials=trials,
        seed=seed,
        burn_in=burn_in,
        m=m,
        r=r,
        level=level,
        bootstrap_b=bootstrap_b,
        area_samples=area_samples,
        standardize_residuals=standardize_residuals,
        init=init,
    )
    nominal = (1.0 - r / m) if method == "scope" else level
    _write_json(
        out_path,
        {
            "schema_version": SCHEMA_VERSION,
            "version": __version__,
            "command": "coverage",
            "nominal_coverage": nominal,
            **report.to_dict(),
        },
    )
    return 0


_MARKET_KEYS = (
    "schema_version",
    "seed",
    "csv_path",
    "symbol",
    "orders",
    "m",
    "r",
    "level",
    "bootstrap_b",
    "area_samples",
    "standardize_residuals",
)


def _cmd_market(cfg, out_path):
    _reject_unknown(cfg, _MARKET_KEYS, "config")
    seed = _as_int(_require(cfg, "seed", "config"), "seed")
    csv_path = _as_str(_require(cfg, "csv_path", "config"), "csv_path")
    symbol = _as_str(cfg.get("symbol", ""), "symbol") or None
    p, q = _parse_orders(cfg, "config")
    if (p, q) != (1, 1):
        raise ConfigError("market's unit-variance area sampler supports GARCH(1,1) only")
    m = _as_int(_require(cfg, "m", "config"), "m", minimum=2)
    r = _as_int(_require(cfg, "r", "config"), "r", minimum=1)
    if not m > r:
        raise ConfigError(f"config needs m > r, got m={m}, r={r}")
    level = _as_level(cfg.get("level", 0.90), "level")
    bootstrap_b = _as_int(cfg.get("bootstrap_b", 100), "bootstrap_b", minimum=19)
    area_samples = _as_int(cfg.get("area_samples", 200), "area_samples", minimum=1)
    standardize_residuals = _as_bool(
        cfg.get("standardize_residuals", False), "standardize_residuals"
    )

    prices = load_price_csv(csv_path, symbol=symbol)
    sample = _returns_sample(prices, p, q)
    fit = qmle_fit(sample, (p, q))

    scope_config = ScopeConfig(m=m, r=r, standardize_residuals=standardize_residuals)
    perms = PermutationSet.generate(sample.n, m, np.random.SeedSequence((seed, 1)))
    scope_region = RegionEvaluator(sample, perms, scope_config)

    cov = asymptotic_covariance(fit.theta_hat, sample)
    ellipsoid = asymptotic_region(fit, cov, level, sample.n)

    boots = residual_bootstrap(sample, fit, bootstrap_b, _int_seed(seed, 2))
    lr_seed = _int_seed(seed, 3)

    members = {
        "scope": scope_region.contains,
        "asym_ellipsoid": ellipsoid.contains,
        "res_bootstrap": lambda theta: bootstrap_region_membership(theta, boots, level),
        "lr_bootstrap": lambda theta: (
            lr_bootstrap_pvalue(theta, sample, bootstrap_b, lr_seed, fit=fit)
            > 1.0 - level
        ),
    }
    regions = {}
    for stream, (name, member) in enumerate(members.items(), start=4):
        rng = np.random.default_rng(np.random.SeedSequence((seed, stream)))
        regions[name] = {
            "relative_area": relative_area(
                member, sample_unit_variance_slice, area_samples, rng
            ),
            "nominal_coverage": scope_config.coverage if name == "scope" else level,
        }
    regions["scope"]["theta_hat_rank"] = scope_region.rank(fit.theta_hat)
    regions["res_bootstrap"]["failures"] = boots.failures

    resolved = dict(cfg)
    resolved.update(
        {
            "schema_version": SCHEMA_VERSION,
            "seed": seed,
            "symbol": prices.symbol,
            "orders": {"p": p, "q": q},
            "m": m,
            "r": r,
            "level": level,
            "bootstrap_b": bootstrap_b,
            "area_samples": area_samples,
            "standardize_residuals": standardize_residuals,
        }
    )
    _write_json(
        out_path,
        {
            "schema_version": SCHEMA_VERSION,
            "version": __version__,
            "command": "market",
            "seed": seed,
            "config": resolved,
            "symbol": prices.symbol,
            "n_prices": int(prices.closes.shape[0]),
            "n_returns": int(sample.n),
            "theta_hat": _fit_dict(fit),
            "regions": regions,
        },
    )
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

_COMMANDS = {
    "scope-region": _cmd_scope_region,
    "coverage": _cmd_coverage,
    "market": _cmd_market,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="scopegarch",
        description="Finite-sample confidence regions for GARCH parameters.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subparsers = parser.add_subparsers(dest="command", required=True)
    help_lines = {
        "scope-region": "evaluate the permutation rank field over a parameter grid",
        "coverage": "run a Monte Carlo coverage experiment",
        "market": "compare region areas on a price CSV",
    }
    for name, text in help_lines.items():
        sub = subparsers.add_parser(name, help=text)
        sub.add_argument("--config", required=True, help="JSON config file")
        sub.add_argument("--out", required=True, help="output file path")
        sub.add_argument(
            "--seed", type=int, default=None, help="override the config's seed"
        )
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        if args.seed is not None:
            cfg["seed"] = args.seed
        return _COMMANDS[args.command](cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
