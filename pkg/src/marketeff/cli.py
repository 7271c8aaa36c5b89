"""Command line: ``marketeff analyze`` and ``marketeff synth``.

Exit codes: 0 success, 1 one or more tickers failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import datetime as dt
import json
import logging
import sys
import warnings
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from . import kernels
from .config import EstimatorConfig, read_config_file
from .efficiency import EfficiencyReport, analyze, dh_regression, rank
from .errors import GenerationError, MarketEffError, RegressionUndefinedError
from .series import PriceSeries, log_returns, read_price_csv, write_price_csv
from .synth import SynthSpec, generate

log = logging.getLogger("marketeff")

EXIT_OK, EXIT_PARTIAL, EXIT_USAGE = 0, 1, 2
FORMATS = ("json", "csv")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    inputs: tuple[Path, ...] = ()
    out: Path = Path("out")
    workers: int = 1
    formats: tuple[str, ...] = FORMATS
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    # synth
    kind: str = "fgn"
    hurst: float | None = None
    phi: float | None = None
    length: int = 8192
    seed: int = 0
    rng: str = "PCG64"
    sigma: float = 0.01
    ticker: str | None = None
    start_date: dt.date = dt.date(2000, 1, 1)

    def __post_init__(self):
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        bad = set(self.formats) - set(FORMATS)
        if bad or not self.formats:
            raise UsageError(f"--formats must be a non-empty subset of {FORMATS}")
        if not self.sigma > 0:
            raise UsageError("--sigma must be positive")

    def synth_spec(self) -> SynthSpec:
        h = self.hurst if self.kind == "fgn" else None
        if self.kind == "fgn" and h is None:
            h = 0.5
        phi = self.phi if self.kind == "ar1" else None
        if self.kind == "ar1" and phi is None:
            raise UsageError("--phi is required for kind ar1")
        return SynthSpec(self.kind, self.length, self.seed, h=h, phi=phi, rng=self.rng)


_RUN_KEYS = {f.name for f in fields(RunConfig)} - {"estimator"}
_EST_KEYS = {f.name for f in fields(EstimatorConfig)}


def _fmt(x) -> str:
    if x is None:
        return "NA"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def collect_inputs(inputs: Sequence[Path]) -> list[Path]:
    files = []
    for p in inputs:
        p = Path(p)
        if p.is_dir():
            files.extend(sorted(p.glob("*.csv")))
        elif p.is_file():
            files.append(p)
        else:
            raise UsageError(f"input {p} does not exist")
    if not files:
        raise UsageError("no input CSV files found")
    stems = [f.stem for f in files]
    dupes = sorted({s for s in stems if stems.count(s) > 1})
    if dupes:
        raise UsageError(f"duplicate tickers across inputs: {', '.join(dupes)}")
    return files


def _analyze_file(path: Path, config: EstimatorConfig):
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            prices = read_price_csv(path)
            report = analyze(log_returns(prices), config)
        return path.stem, report, [str(w.message) for w in caught]
    except MarketEffError as exc:
        return path.stem, None, [f"{type(exc).__name__}: {exc}"]


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def write_outputs(out: Path, reports: list[EfficiencyReport], failures: dict[str, str],
                  config: RunConfig) -> None:
    out.mkdir(parents=True, exist_ok=True)
    ranked = rank(reports) if reports else []
    dh = None
    dh_note = None
    try:
        dh = dh_regression(ranked)
    except RegressionUndefinedError as exc:
        dh_note = str(exc)
    if "json" in config.formats:
        rdir = out / "reports"
        rdir.mkdir(exist_ok=True)
        for r in ranked:
            (rdir / f"{r.ticker}.json").write_text(_dump_json(r.to_json_dict()), encoding="utf-8")
    if "csv" in config.formats:
        _write_csv(out / "ranking.csv", ["ticker", "ei"], [(r.ticker, r.ei) for r in ranked])
        _write_csv(out / "hurst.csv", ["ticker", "mean_h"], [(r.ticker, r.vector.mean_h) for r in ranked])
        _write_csv(out / "fractal.csv", ["ticker", "mean_d"], [(r.ticker, r.vector.mean_d) for r in ranked])
        _write_csv(out / "dh_scatter.csv", ["ticker", "mean_h", "mean_d"],
                   [(r.ticker, r.vector.mean_h, r.vector.mean_d) for r in ranked])
        _write_csv(out / "dh_fit.csv", ["slope", "intercept", "r2"],
                   [(dh.slope, dh.intercept, dh.r2) if dh else (None, None, None)])
        _write_csv(out / "shares.csv", ["ticker", "local_share", "global_share"],
                   [(r.ticker, r.local_share, r.global_share) for r in ranked])
    summary = {
        "tickers": [r.ticker for r in ranked],
        "failures": dict(sorted(failures.items())),
        "dh_regression": None if dh is None else dh._asdict(),
        "dh_regression_unavailable": dh_note,
        "estimator_config": config.estimator.as_dict(),
        "kernel_backend": kernels.BACKEND,
    }
    (out / "summary.json").write_text(_dump_json(summary), encoding="utf-8")


def run_analyze(config: RunConfig) -> int:
    files = collect_inputs(config.inputs)
    if config.workers > 1 and len(files) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_analyze_file, files, [config.estimator] * len(files)))
    else:
        results = [_analyze_file(f, config.estimator) for f in files]
    reports, failures = [], {}
    for ticker, report, messages in results:
        if report is None:
            failures[ticker] = messages[0]
            log.error("%s: skipped: %s", ticker, messages[0])
            continue
        for m in messages:
            log.warning("%s: %s", ticker, m)
        reports.append(report)
    write_outputs(Path(config.out), reports, failures, config)
    log.info("analyzed %d of %d tickers into %s", len(reports), len(files), config.out)
    return EXIT_PARTIAL if failures else EXIT_OK


def synth_prices(config: RunConfig) -> PriceSeries:
    spec = config.synth_spec()
    returns = generate(spec)
    logp = np.concatenate([[0.0], np.cumsum(config.sigma * returns.values)])
    dates = tuple(config.start_date + dt.timedelta(days=i) for i in range(logp.size))
    return PriceSeries(config.ticker or spec.ticker, dates, np.exp(logp))


def run_synth(config: RunConfig) -> Path:
    prices = synth_prices(config)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{prices.ticker}.csv"
    write_price_csv(prices, path)
    return path


def _add_estimator_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("estimator overrides (defaults: published values)")
    helps = {
        "dfa_s_min": "smallest DFA box (5)",
        "dfa_s_max_divisor": "largest DFA box is T / this (5)",
        "dfa_n_scales": "number of log-spaced DFA boxes before rounding (20)",
        "dma_window_min": "smallest DMA window (3)",
        "dma_window_max": "largest DMA window (21)",
        "dma_window_step": "DMA window step (2)",
        "hhca_tau_max_min": "smallest tau_max of the HHCA jackknife (5)",
        "hhca_tau_max_max": "largest tau_max of the HHCA jackknife (20)",
        "periodogram_exponent": "periodogram uses floor(T**x) frequencies (2/3)",
        "wavelet_level_offset": "wavelet levels 1..floor(log2 T) - this (3)",
        "wavelet_min_coeffs": "skip wavelet levels with fewer coefficients (8)",
        "kpss_bandwidth": "Bartlett lags, or 'auto' for floor(4 (T/100)^0.25)",
    }
    for name, text in helps.items():
        g.add_argument("--" + name.replace("_", "-"), "--" + name, dest=name, default=None, help=text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="marketeff", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    common.add_argument("--config", type=Path, help="flat key = value file; flags override it")
    common.add_argument("--out", default=None, help="output directory")

    a = sub.add_parser("analyze", parents=[common], help="analyze price CSVs and write reports")
    a.add_argument("inputs", nargs="*", type=Path, help="CSV files or directories of CSVs")
    a.add_argument("--workers", default=None, help="parallel worker processes (1)")
    a.add_argument("--formats", default=None, help="comma list of json,csv (both)")
    _add_estimator_flags(a)

    s = sub.add_parser("synth", parents=[common], help="write a synthetic price CSV")
    s.add_argument("--kind", default=None, choices=["fgn", "ar1", "white", "rw"])
    s.add_argument("--hurst", default=None, help="fGn Hurst exponent (0.5)")
    s.add_argument("--phi", default=None, help="AR(1) coefficient")
    s.add_argument("--length", default=None, help="number of returns (8192)")
    s.add_argument("--seed", default=None, help="64-bit seed (0)")
    s.add_argument("--rng", default=None, choices=["PCG64", "Philox"])
    s.add_argument("--sigma", default=None, help="scale applied to the unit-variance returns (0.01)")
    s.add_argument("--ticker", default=None, help="ticker / file stem")
    s.add_argument("--start-date", "--start_date", dest="start_date", default=None)
    return parser


def _typed_run_value(key: str, value):
    if value is None or not isinstance(value, str):
        return value
    if key in ("workers", "length", "seed"):
        return int(value)
    if key in ("hurst", "phi", "sigma"):
        return float(value)
    if key == "start_date":
        return dt.date.fromisoformat(value)
    if key == "out":
        return Path(value)
    if key == "formats":
        return tuple(v.strip() for v in value.split(",") if v.strip())
    if key == "inputs":
        return tuple(Path(v.strip()) for v in value.split(",") if v.strip())
    return value


def config_from_args(args: argparse.Namespace) -> RunConfig:
    merged: dict = {}
    if args.config is not None:
        try:
            merged.update(read_config_file(args.config))
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    for key, value in vars(args).items():
        if key in ("config", "command", "verbose"):
            continue
        if key == "inputs":
            if value:
                merged["inputs"] = tuple(value)
            continue
        if value is not None:
            merged[key] = value
    unknown = set(merged) - _RUN_KEYS - _EST_KEYS
    if unknown:
        raise UsageError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
    try:
        est = EstimatorConfig.from_mapping({k: v for k, v in merged.items() if k in _EST_KEYS})
        run = {k: _typed_run_value(k, v) for k, v in merged.items() if k in _RUN_KEYS}
        return RunConfig(estimator=est, **run)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        config = config_from_args(args)
        if args.command == "analyze":
            return run_analyze(config)
        path = run_synth(config)
        print(path)
        return EXIT_OK
    except (UsageError, GenerationError) as exc:
        print(f"marketeff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
