"""Command-line entry point: ``belltest predict|analyze|simulate|lhv-check``."""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from .errors import BellTestError
from .formats import format_counts, parse_config, parse_counts, render_table
from .lhv import BUNDLED_MODELS, bundled_model, enumerate_vertices, verify_nonnegativity
from .metrics import J_CONVENTION, SIGMA_ESTIMATOR, anomaly_report, significance
from .predictor import CELL_KEYS, predict_table
from .simulator import SimulationConfig, simulate_lhv, simulate_quantum

EXIT_OK = 0
EXIT_USAGE = 1


class UsageError(BellTestError):
    exit_code = EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("belltest") / "data" / name))


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _footer(args) -> str:
    if not args.timestamp:
        return ""
    return f"generated {datetime.now(timezone.utc).isoformat(timespec='seconds')}\n"


def _load_config(args):
    return parse_config(_read(args.config or str(bundled_path("paper.cfg"))))


def _parse_model(selector: str, require_lhv: bool = False) -> tuple[str, str | None]:
    if selector == "quantum" and not require_lhv:
        return "quantum", None
    name = selector.split(":", 1)[1] if selector.startswith("lhv:") else selector
    if name not in BUNDLED_MODELS:
        raise UsageError(f"unknown model {selector!r}; use quantum or lhv:<{'|'.join(BUNDLED_MODELS)}>")
    return "lhv", name


def cmd_predict(args) -> int:
    cfg = _load_config(args)
    pred = predict_table(cfg.state, cfg.params, cfg.settings)
    if args.out:
        _emit(format_counts(pred), args.out)
    sys.stdout.write("Quantum prediction\n" + render_table({"QM": pred}) + _footer(args))
    return EXIT_OK


def analysis_report(cfg, observed, band=(0.9, 1.1)) -> str:
    pred = predict_table(cfg.state, cfg.params, cfg.settings)
    res = significance(observed)
    anomaly = anomaly_report(observed, pred, band)
    lines = [
        "Bell test analysis",
        "",
        render_table({"Exper.": observed, "QM": pred}).rstrip("\n"),
        "",
        f"J convention: {J_CONVENTION}",
        f"J        = {res.j:.6g}",
        f"J (QM)   = {significance(pred).j:.6g}",
        f"sigma    = {res.sigma:.6g}",
        f"n_sigma  = {res.n_sigma:.4g}",
        f"estimator: {SIGMA_ESTIMATOR}",
        "",
        f"observed / predicted (band [{band[0]:g}, {band[1]:g}])",
    ]
    for key in CELL_KEYS:
        mark = "  FLAGGED" if key in anomaly.flagged else ""
        lines.append(f"  {key:<4} {anomaly.ratios[key]:8.4f}{mark}")
    lines.append(f"flagged: {', '.join(anomaly.flagged) or 'none'}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    cfg = _load_config(args)
    if not args.counts:
        raise UsageError("analyze needs --counts")
    observed = parse_counts(_read(args.counts))
    _emit(analysis_report(cfg, observed, tuple(args.band)) + _footer(args), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    kind, name = _parse_model(args.model)
    sim_cfg = SimulationConfig(
        mode=args.mode,
        pair_number_model=args.pairs,
        seed=args.seed,
        chunk_size=args.chunk_size,
        n_workers=args.threads,
    )
    if kind == "quantum":
        result = simulate_quantum(cfg.state, cfg.params, cfg.settings, sim_cfg)
    else:
        result = simulate_lhv(bundled_model(name, cfg.params), cfg.params, cfg.settings, sim_cfg)
    if args.out:
        _emit(format_counts(result.table), args.out)
    else:
        sys.stdout.write(format_counts(result.table))
    res = significance(result.table)
    lines = [
        f"model: {args.model}  mode: {args.mode}  pairs: {args.pairs}  seed: {result.seed}",
        render_table({"Sim.": result.table}).rstrip("\n"),
        "setting   pairs        both       A only     B only     neither",
    ]
    for label, m, t in zip(("a1b1", "a1b2", "a2b1", "a2b2"), result.pairs_drawn, result.tallies):
        lines.append(f"{label:<8}  {m:<11d}  " + ("  ".join(f"{x:<9d}" for x in t)).rstrip())
    lines += [f"J = {res.j:.6g}  sigma = {res.sigma:.6g}  n_sigma = {res.n_sigma:.4g}", f"J convention: {J_CONVENTION}"]
    sys.stdout.write("\n".join(lines) + "\n" + _footer(args))
    return EXIT_OK


def cmd_lhv_check(args) -> int:
    cfg = _load_config(args)
    _, name = _parse_model(args.model, require_lhv=True)
    report = verify_nonnegativity(bundled_model(name, cfg.params), cfg.params, cfg.settings, args.n_lambda, args.seed)
    verts = enumerate_vertices()
    lines = [
        f"LHV non-negativity check: model {report.model}, n_lambda {report.n_lambda}, seed {args.seed}",
        f"E[J] = {report.mean_j:.6g} +/- {report.std_error:.3g}",
        f"result: {'PASS' if report.passed else 'FAIL'} (criterion E[J] >= -5 standard errors)",
        render_table({"LHV": report.counts}).rstrip("\n"),
        "",
        "vertex strategies (a1 a2 b1 b2 -> j)",
    ]
    lines += [f"  {v.a1} {v.a2} {v.b1} {v.b2} -> {j}" for v, j in verts.table]
    lines.append(f"min {verts.minimum}  max {verts.maximum}  zero-valued {verts.n_zero}/16")
    _emit("\n".join(lines) + "\n" + _footer(args), args.out)
    return EXIT_OK if report.passed else 4


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="belltest", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="key=value config file (default: bundled paper config)")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--timestamp", action="store_true", help="append a generation-time footer line")

    p = sub.add_parser("predict", help="quantum prediction of the six Table-1 cells")
    common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("analyze", help="J, significance and anomaly report for a counts file")
    common(p)
    p.add_argument("--counts", required=True)
    p.add_argument("--band", type=float, nargs=2, default=(0.9, 1.1), metavar=("LO", "HI"))
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="Monte Carlo rerun of the experiment")
    common(p)
    p.add_argument("--model", default="quantum", help="quantum or lhv:<name>")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("aggregate", "per_pair"), default="aggregate")
    p.add_argument("--pairs", choices=("fixed", "poisson"), default="fixed")
    p.add_argument("--chunk-size", type=int, default=1 << 20)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("lhv-check", help="verify J >= 0 for a bundled local model")
    common(p)
    p.add_argument("--model", default="lhv:malus")
    p.add_argument("--n-lambda", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_lhv_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BellTestError as e:
        print(f"belltest: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
