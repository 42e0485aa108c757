"""``walklab`` command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 domain restriction (e.g. a fair-only law given p != 1/2),
4 simulation quality (step cap hit in more than 0.1% of trials).

Settings precedence: command-line flag > environment (``WALKLAB_SEED``)
> config file (``--config`` or ``WALKLAB_CONFIG``, key=value lines) >
built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from datetime import timedelta
from fractions import Fraction
from typing import Callable

from . import laws, paths, recurrence, ruin, tables, verify
from .errors import DomainRestriction
from .montecarlo import (
    DEFAULT_SEED,
    ESTIMATE_CSV_HEADER,
    STEP_CAP,
    SimConfig,
    estimate_first_return,
    estimate_lead_time,
    estimate_return_count_table,
    estimate_return_counts,
    estimate_ruin,
)
from .numerics import DEFAULT_PRECISION, as_fraction, as_prob, binomial, render_exact, to_decimal

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_DOMAIN, EXIT_SIM = 0, 1, 2, 3, 4
CAP_TOLERANCE = 0.001


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    precision: int = DEFAULT_PRECISION
    destination: str | None = None  # None means stdout

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.precision < 1:
            raise UsageError("precision must be >= 1")


@dataclass(frozen=True)
class Settings:
    output: OutputSpec = OutputSpec()
    seed: int = DEFAULT_SEED
    trials: int = 100_000
    streams: int = 1


def _int(text: str, key: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"--{key} expects an integer, got {text!r}") from None


def read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.lower()] = value
    return out


def resolve_settings(args: argparse.Namespace, environ=os.environ) -> Settings:
    values: dict[str, str] = {}
    config_path = getattr(args, "config", None) or environ.get("WALKLAB_CONFIG")
    if config_path:
        try:
            values.update(read_config(config_path))
        except OSError as exc:
            raise UsageError(f"cannot read config {config_path}: {exc}") from None
    if "WALKLAB_SEED" in environ:
        values["seed"] = environ["WALKLAB_SEED"]
    for key in ("format", "precision", "seed", "trials", "streams"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = str(v)
    unknown = set(values) - {"format", "precision", "seed", "trials", "streams"}
    if unknown:
        raise UsageError(f"unknown config keys {sorted(unknown)}")
    out = OutputSpec(
        values.get("format", "csv"),
        _int(values.get("precision", str(DEFAULT_PRECISION)), "precision"),
        getattr(args, "out", None),
    )
    seed = _int(values.get("seed", str(DEFAULT_SEED)), "seed")
    if not 0 <= seed < 2**64:
        raise UsageError("seed must be an unsigned 64-bit integer")
    trials = _int(values.get("trials", "100000"), "trials")
    streams = _int(values.get("streams", "1"), "streams")
    if trials < 1 or streams < 1:
        raise UsageError("trials and streams must be positive")
    return Settings(out, seed, trials, streams)


# -- rendering -------------------------------------------------------------------

def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: OutputSpec) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out.destination:
        with open(out.destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_sheet(sheet: tables.Sheet, out: OutputSpec) -> None:
    _emit(sheet.to_csv() if out.format == "csv" else sheet.to_json(), out)


def _cell(value, precision: int) -> tuple[str, str]:
    """(exact, decimal) cells for a Fraction, float, or plain label."""
    if isinstance(value, bool):
        return "", str(value).lower()
    if isinstance(value, (int, Fraction)):
        return render_exact(value), to_decimal(value, precision)
    if isinstance(value, float):
        return "", f"{value:.{precision}f}"
    return "", str(value)


# -- law ------------------------------------------------------------------------

class Params:
    """``--key value`` pairs handed to a law; every key must be consumed."""

    def __init__(self, pairs: dict[str, str]):
        self._pairs = pairs
        self._used: set[str] = set()

    def _raw(self, key: str, default):
        if key in self._pairs:
            self._used.add(key)
            return self._pairs[key]
        if default is _REQUIRED:
            raise UsageError(f"missing required parameter --{key}")
        return default

    def int(self, key: str, default=None):
        raw = self._raw(key, default if default is not None else _REQUIRED)
        return raw if isinstance(raw, int) else _int(raw, key)

    def opt_int(self, key: str):
        raw = self._raw(key, None)
        return None if raw is None else _int(raw, key)

    def ratio(self, key: str, default=None) -> Fraction:
        raw = self._raw(key, default if default is not None else _REQUIRED)
        try:
            return as_fraction(raw)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise UsageError(f"--{key}: {exc}") from None

    def prob(self, key: str = "p", default="1/2") -> Fraction:
        raw = self._raw(key, default)
        try:
            return as_prob(raw)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise UsageError(f"--{key}: {exc}") from None

    def text(self, key: str, default: str) -> str:
        return self._raw(key, default)

    def check_consumed(self) -> None:
        extra = set(self._pairs) - self._used
        if extra:
            raise UsageError(f"unexpected parameters: {', '.join('--' + k for k in sorted(extra))}")

    def rendered(self) -> dict[str, str]:
        return {k: self._pairs[k] for k in sorted(self._used)}


_REQUIRED = object()


def parse_pairs(tokens: list[str]) -> dict[str, str]:
    pairs: dict[str, str] = {}
    it = iter(tokens)
    for tok in it:
        if not tok.startswith("--") or len(tok) < 3:
            raise UsageError(f"expected --key value, got {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
        else:
            value = next(it, None)
            if value is None:
                raise UsageError(f"--{key} needs a value")
        key = key.replace("_", "-").lower()
        if key in pairs:
            raise UsageError(f"--{key} given twice")
        pairs[key] = value
    return pairs


def _ruin_values(res: ruin.RuinResult) -> dict:
    return {"prob_win": res.prob_win, "prob_ruin": res.prob_ruin, "expected_duration": res.expected_duration}


def _ruin_spec(pp: Params) -> ruin.RuinSpec:
    try:
        return ruin.RuinSpec(pp.int("a"), pp.int("b"), pp.prob(), pp.int("start", 0))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _optional_table(pp: Params, table_fn, single_fn, index_key: str):
    n = pp.int("n")
    p = pp.prob()
    idx = pp.opt_int(index_key)
    if idx is None:
        return table_fn(n, p)
    return {"value": single_fn(n, idx, p)}


def _quantile(pp: Params) -> dict:
    prob = pp.ratio("prob")
    horizon = timedelta(days=float(pp.ratio("days", "365")))
    d = laws.lead_fraction_quantile(float(prob), horizon)
    return {"fraction": laws.lead_fraction(float(prob)), "days": d / timedelta(days=1),
            "display": laws.format_duration(d)}


def _escape(pp: Params) -> dict:
    p = pp.prob()
    n = pp.opt_int("n")
    if p == Fraction(1, 2):
        if n is None:
            return {"value": Fraction(0)}
        return {"value": ruin.escape_probability_fair(n)}
    if n is None:
        return {"value": ruin.escape_probability(p, infinite=True)}
    return {"value": ruin.escape_probability(p, n)}


def _ballot(pp: Params) -> dict:
    x, y = pp.int("x"), pp.int("y")
    good = paths.count_always_positive(x, y)
    total = paths.count_paths_to(x, y)
    return {"always_positive": good, "total": total, "fraction": Fraction(good, total)}


def _series(pp: Params) -> dict:
    v = recurrence.series_sum_u(pp.prob())
    return {"value": v if isinstance(v, Fraction) else v.value}


LAWS: dict[str, Callable[[Params], object]] = {
    "u2n": lambda pp: {"value": laws.u2n(pp.int("n"), pp.prob())},
    "first-return": lambda pp: {"value": laws.first_return_prob(pp.int("n"), pp.prob())},
    "no-return": lambda pp: {"value": laws.no_return_prob(pp.int("n"), pp.prob())},
    "nonnegative": lambda pp: {"value": laws.nonnegative_prob(pp.int("n"), pp.prob())},
    "first-passage-minus1": lambda pp: {"value": laws.first_passage_minus1_prob(pp.int("n"), pp.prob())},
    "lead-time-pmf": lambda pp: _optional_table(pp, laws.lead_time_pmf,
                                                lambda n, k, p: laws.lead_time_pmf(n, p)[k], "k"),
    "lead-time-cdf": lambda pp: _optional_table(pp, laws.lead_time_cdf_table, laws.lead_time_cdf, "alpha"),
    "return-count": lambda pp: _optional_table(pp, laws.return_count_table,
                                               lambda n, r, p: laws.return_count_pmf(r, n, p), "r"),
    "arcsine-cdf": lambda pp: {"value": laws.arcsine_cdf(float(pp.ratio("x")))},
    "quantile": _quantile,
    "ruin": lambda pp: _ruin_values(ruin.solve_ruin(_ruin_spec(pp))),
    "ruin-unbiased": lambda pp: _ruin_values(ruin.ruin_unbiased(_ruin_spec(pp))),
    "ruin-biased": lambda pp: _ruin_values(ruin.ruin_biased(_ruin_spec(pp))),
    "ruin-degenerate": lambda pp: _ruin_values(ruin.ruin_degenerate(_ruin_spec(pp))),
    "ruin-symmetric": lambda pp: _ruin_values(ruin.ruin_symmetric(pp.int("a"), pp.ratio("rho"))),
    "escape": _escape,
    "hit-zero": lambda pp: {"value": ruin.hit_zero_probability(pp.prob(), pp.int("start", 1))},
    "series-sum": _series,
    "p-return": lambda pp: {"value": recurrence.prob_return_origin(pp.prob())},
    "u2d": lambda pp: {"value": recurrence.u2d(pp.int("n"))},
    "u3d": lambda pp: {"value": recurrence.u3d(pp.int("n"))},
    "u3d-bound": lambda pp: {"value": recurrence.u3d_bound(pp.int("n"))},
    "binomial": lambda pp: {"value": binomial(pp.int("n"), pp.int("k"))},
    "count-paths": lambda pp: {"value": paths.count_paths_to(pp.int("x"), pp.int("y"))},
    "ballot": _ballot,
    "loops": lambda pp: {"value": paths.count_loops(pp.int("n"), pp.text("mode", "nonnegative"))},
}


def cmd_law(args, settings: Settings) -> int:
    if args.name not in LAWS:
        raise UsageError(f"unknown law {args.name!r}; choose from {', '.join(sorted(LAWS))}")
    pp = Params(parse_pairs(args.params))
    try:
        result = LAWS[args.name](pp)
    except (ValueError, TypeError) as exc:
        if isinstance(exc, DomainRestriction):
            raise
        raise UsageError(str(exc)) from None
    pp.check_consumed()
    out = settings.output
    if isinstance(result, laws.LawTable):
        result.precision = out.precision
        _emit(result.to_csv() if out.format == "csv" else result.to_json(), out)
        return EXIT_OK
    cells = {k: _cell(v, out.precision) for k, v in result.items()}
    if out.format == "csv":
        _emit(_csv(["quantity", "exact", "decimal"], [[k, e, d] for k, (e, d) in cells.items()]), out)
    else:
        payload = {"law": args.name, "params": pp.rendered(),
                   "values": {k: {"exact": e or None, "decimal": d} for k, (e, d) in cells.items()}}
        _emit(json.dumps(payload, indent=2), out)
    return EXIT_OK


# -- table / figure ------------------------------------------------------------------

def cmd_table(args, settings: Settings) -> int:
    _emit_sheet(tables.build_table(args.id, settings.output.precision), settings.output)
    return EXIT_OK


def cmd_figure(args, settings: Settings) -> int:
    try:
        rho = as_fraction(args.rho)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--rho: {exc}") from None
    try:
        sheet = tables.figure(args.id, n=args.n, a=args.a, b=args.b, rho=rho, a_max=args.a_max,
                              precision=settings.output.precision)
    except ValueError as exc:
        if isinstance(exc, DomainRestriction):
            raise
        raise UsageError(str(exc)) from None
    _emit_sheet(sheet, settings.output)
    return EXIT_OK


# -- simulate ---------------------------------------------------------------------------

SIM_HEADER = ["quantity", *ESTIMATE_CSV_HEADER, "exact", "z"]


def _sim_row(label, est, exact) -> list:
    z = est.z_score(exact) if exact is not None else math.nan
    return [label, *est.csv_row(), "" if exact is None else repr(float(exact)), "" if exact is None else f"{z:.3f}"]


def _sim_json(label, est, exact) -> dict:
    d = {"quantity": label, **est.to_dict()}
    if exact is not None:
        d["exact"] = float(exact)
        d["z"] = est.z_score(exact)
    return d


def cmd_simulate(args, settings: Settings) -> int:
    cfg = SimConfig(settings.seed, settings.trials, settings.streams)
    pp = Params(parse_pairs(args.params))
    capped_fraction = 0.0
    extra = {}
    if args.target == "ruin":
        spec = _ruin_spec(pp)
        cap = pp.int("step-cap", STEP_CAP)
        pp.check_consumed()
        est = estimate_ruin(cfg, spec, cap)
        exact = ruin.solve_ruin(spec)
        rows = [("prob_win", est.prob_win, exact.prob_win), ("duration", est.duration, exact.expected_duration)]
        capped_fraction = est.capped_fraction
        extra = {"capped": est.capped}
    elif args.target == "lead":
        n = pp.int("n")
        pp.check_consumed()
        exact = laws.lead_time_pmf(n)
        rows = [(k, e, exact[k]) for k, e in estimate_lead_time(cfg, n).rows]
    elif args.target == "returns":
        n = pp.int("n")
        r = pp.opt_int("r")
        pp.check_consumed()
        if r is None:
            rows = [(i, e, laws.return_count_pmf(i, n)) for i, e in estimate_return_count_table(cfg, n).rows]
        else:
            rows = [(r, estimate_return_counts(cfg, n, r), laws.return_count_pmf(r, n))]
    else:  # first-return
        n = pp.int("n")
        p = pp.prob()
        pp.check_consumed()
        rows = [("first_return", estimate_first_return(cfg, n, p), laws.first_return_prob(n, p))]
    out = settings.output
    if out.format == "csv":
        _emit(_csv(SIM_HEADER, [_sim_row(*r) for r in rows]), out)
    else:
        payload = {"target": args.target, "seed": cfg.seed, "trials": cfg.trials, "params": pp.rendered(),
                   **extra, "rows": [_sim_json(*r) for r in rows]}
        _emit(json.dumps(payload, indent=2), out)
    if capped_fraction > CAP_TOLERANCE:
        print(f"walklab: step cap hit in {capped_fraction:.4%} of trials", file=sys.stderr)
        return EXIT_SIM
    return EXIT_OK


# -- recurrence / verify ----------------------------------------------------------------

def _flatten(d: dict, prefix: str = "") -> list[list]:
    rows = []
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            rows += _flatten(v, key + ".")
        else:
            rows.append([key, "" if v is None else v])
    return rows


def cmd_recurrence(args, settings: Settings) -> int:
    p = None
    if args.p is not None:
        try:
            p = as_prob(args.p)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"--p: {exc}") from None
    report = recurrence.classify(args.dim, p, terms=args.terms)
    out = settings.output
    if out.format == "csv":
        _emit(_csv(["field", "value"], _flatten(report.to_dict())), out)
    else:
        _emit(report.to_json(), out)
    return EXIT_OK


def cmd_verify(args, settings: Settings) -> int:
    try:
        results = verify.run_battery(args.only, args.inject_fault, seed=settings.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ok = all(r.passed for r in results)
    out = settings.output
    if out.format == "csv":
        rows = [[r.group, r.name, "pass" if r.passed else "FAIL", f"{r.seconds:.3f}", r.detail] for r in results]
        _emit(_csv(["group", "check", "status", "seconds", "detail"], rows), out)
    else:
        _emit(json.dumps({"passed": ok, "checks": [r.to_dict() for r in results]}, indent=2), out)
    for r in results:
        if not r.passed:
            print(f"FAILED {r.group}/{r.name}: {r.detail}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


# -- parser -----------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    # SUPPRESS lets the same flag appear before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS, help="decimal places (default 6)")
    common.add_argument("--out", default=argparse.SUPPRESS, metavar="PATH", help="write to PATH instead of stdout")
    common.add_argument("--config", default=argparse.SUPPRESS, metavar="PATH", help="key=value defaults file")
    return common


def _sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--trials", type=int, default=argparse.SUPPRESS)
    p.add_argument("--streams", type=int, default=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="walklab", parents=[common],
                                     description="Exact random-walk laws, tables, simulation and checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common], help="recompute a published table")
    p.add_argument("--id", type=int, required=True, choices=(1, 2, 3, 4))
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("law", parents=[common], help="evaluate one law: law NAME --key value ...")
    p.add_argument("name", metavar="NAME", help=", ".join(sorted(LAWS)))
    p.add_argument("params", nargs=argparse.REMAINDER)
    p.set_defaults(handler=cmd_law)

    p = sub.add_parser("figure", parents=[common], help="emit a figure's data series")
    p.add_argument("--id", type=int, required=True, choices=tables.FIGURE_IDS)
    p.add_argument("--n", type=int, default=10, help="half path length for figures 3-5")
    p.add_argument("--a", type=int, default=3)
    p.add_argument("--b", type=int, default=None)
    p.add_argument("--rho", default="55/45", help="odds ratio q/p for figure 8")
    p.add_argument("--a-max", type=int, default=20)
    p.set_defaults(handler=cmd_figure)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo estimate next to the exact value")
    p.add_argument("target", choices=("ruin", "lead", "returns", "first-return"))
    _sim_flags(p)
    p.add_argument("params", nargs=argparse.REMAINDER)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("recurrence", parents=[common], help="classify the origin as transient or persistent")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--p", default=None)
    p.add_argument("--terms", type=int, default=recurrence.DEFAULT_3D_TERMS)
    p.set_defaults(handler=cmd_recurrence)

    p = sub.add_parser("verify", parents=[common], help="run the oracle-equivalence battery")
    p.add_argument("--only", action="append", choices=verify.GROUPS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)
    p.set_defaults(handler=cmd_verify)
    return parser


def _split_globals(tokens: list[str]) -> tuple[list[str], list[str]]:
    """Pull global flags out of a free-form ``--key value`` tail."""
    globals_, rest = [], []
    flags = {"--format", "--precision", "--out", "--config", "--seed", "--trials", "--streams"}
    it = iter(tokens)
    for tok in it:
        name = tok.split("=", 1)[0]
        if name in flags:
            globals_.append(tok)
            if "=" not in tok:
                globals_.append(next(it, ""))
        else:
            rest.append(tok)
    return globals_, rest


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if hasattr(args, "params"):
        # REMAINDER swallows trailing global flags; route them back through the parser
        glob, args.params = _split_globals(args.params)
        if glob:
            extra = _common()
            _sim_flags(extra)
            try:
                ns, _ = extra.parse_known_args(glob)
            except SystemExit as exc:
                return int(exc.code or 0)
            for k, v in vars(ns).items():
                setattr(args, k, v)
    try:
        settings = resolve_settings(args)
        return args.handler(args, settings)
    except UsageError as exc:
        print(f"walklab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainRestriction as exc:
        print(f"walklab: domain restriction: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, KeyError) as exc:
        print(f"walklab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
