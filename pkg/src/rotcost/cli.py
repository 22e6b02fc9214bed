"""Command-line front end.

Exit status: 0 on success, 2 when some requested cell is infeasible (the
cell is still written), 1 on configuration errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import planner, report
from .error_model import PhysicalParams
from .exceptions import InsufficientData, ResourceLimit, SequenceFileError
from .sequences import (
    CALIBRATED_MODEL,
    TCountModel,
    compare_methods,
    crossover_k0,
    export_sequences,
    import_sequences,
    records_from_candidates,
    table_seq,
)
from .synth import enumerate_best, fit_tcount_model

log = logging.getLogger("rotcost")

EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE = 0, 1, 2


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def parse_k(text):
    """``"2"``, ``"1-7"`` or ``"1,3,5"``."""
    ks = []
    try:
        for part in text.split(","):
            if "-" in part:
                lo, hi = part.split("-")
                ks.extend(range(int(lo), int(hi) + 1))
            else:
                ks.append(int(part))
    except ValueError:
        raise ConfigError(f"bad k list {text!r}") from None
    if not ks or any(k < 1 or k > 16 for k in ks):
        raise ConfigError(f"k values must lie in 1..16, got {text!r}")
    return sorted(set(ks))


def parse_pout(text):
    if text == "standard":
        return list(planner.STANDARD_P_OUT)
    try:
        ps = [float(p) for p in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad p_out list {text!r}") from None
    if any(not 0 < p < 1 for p in ps):
        raise ConfigError("p_out values must lie in (0, 1)")
    return ps


def parse_eps_grid(text):
    """``lo:hi:per_decade``, or an explicit comma-separated list."""
    try:
        if ":" in text:
            lo, hi, per = text.split(":")
            return planner.eps_grid(float(lo), float(hi), int(per))
        grid = tuple(sorted(float(e) for e in text.split(",")))
    except ValueError:
        raise ConfigError(f"bad epsilon grid {text!r}") from None
    if not grid or grid[0] <= 0:
        raise ConfigError("epsilon values must be positive")
    return grid


def parse_model(text):
    if text in ("none", "off"):
        return None
    try:
        a, b = (float(x) for x in text.split(","))
        return TCountModel(a, b, 0)
    except ValueError:
        raise ConfigError(f"model must be 'a,b' or 'none', got {text!r}") from None


@dataclass
class RunConfig:
    params: PhysicalParams
    ks: list
    p_outs: list
    eps: tuple
    db: list = field(default_factory=list)
    model: TCountModel | None = CALIBRATED_MODEL
    fmt: str = "csv"
    out: Path | None = None


def build_config(args, default_k):
    if args.pg is None:
        raise ConfigError("--pg is required")
    try:
        if args.even_d:
            params = PhysicalParams.with_even_distances(args.pg, args.dmax)
        else:
            params = PhysicalParams(args.pg, args.dmax)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    db = []
    for path in args.db or ():
        try:
            db.extend(import_sequences(path))
        except (OSError, SequenceFileError) as exc:
            raise ConfigError(f"{path}: {exc}") from None
    return RunConfig(
        params=params,
        ks=parse_k(args.k or default_k),
        p_outs=parse_pout(args.pout or "standard"),
        eps=parse_eps_grid(args.eps_grid),
        db=db,
        model=parse_model(args.model) if args.model is not None else CALIBRATED_MODEL,
        fmt=args.format,
        out=Path(args.out) if args.out else None,
    )


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def cmd_distill(args):
    cfg = build_config(args, "1-7")
    if args.db or args.model is not None:
        log.warning("sequence options are ignored by 'distill'")
    cells = planner.table_distill(cfg.params, cfg.ks, cfg.p_outs, cfg.eps)
    if cfg.fmt == "json":
        text = report.cells_json(cells)
    elif cfg.fmt == "pretty":
        text = report.pretty_grid(cells, f"distillation, p_g={cfg.params.p_g:g}")
    else:
        text = report.cells_csv(cells, "distillation")
    _emit(text, cfg.out)
    return EXIT_OK if all(c.feasible for c in cells) else EXIT_INFEASIBLE


def _require_sequences(cfg):
    if not cfg.db and cfg.model is None:
        raise ConfigError("no sequence database given and the T-count model is disabled; "
                          "pass --db FILE or --model a,b")


def cmd_sequence(args):
    cfg = build_config(args, "3-7")
    _require_sequences(cfg)
    cells = table_seq(cfg.params, cfg.ks, cfg.p_outs, cfg.db, cfg.model, cfg.eps)
    if cfg.fmt == "json":
        text = report.cells_json(cells)
    elif cfg.fmt == "pretty":
        text = report.pretty_grid(cells, f"sequences, p_g={cfg.params.p_g:g}")
    else:
        text = report.cells_csv(cells, "sequence")
    _emit(text, cfg.out)
    return EXIT_OK if all(c.feasible for c in cells) else EXIT_INFEASIBLE


def cmd_compare(args):
    cfg = build_config(args, "1-7")
    _require_sequences(cfg)
    verdicts = [compare_methods(k, p, cfg.params, cfg.db, cfg.model, cfg.eps)
                for p in cfg.p_outs for k in cfg.ks]
    k0 = crossover_k0(verdicts)
    if cfg.fmt == "json":
        text = report.verdicts_json(verdicts, k0)
    elif cfg.fmt == "pretty":
        text = report.pretty_verdicts(verdicts, k0)
    else:
        text = report.verdicts_csv(verdicts)
    _emit(text, cfg.out)
    if cfg.fmt != "pretty":
        print(f"k0 = {k0 if k0 is not None else 'undetermined'}", file=sys.stderr)
    return EXIT_OK if all(v.winner for v in verdicts) else EXIT_INFEASIBLE


def cmd_synth(args):
    if args.k is None or args.nmax is None:
        raise ConfigError("synth needs --k and --nmax")
    k = parse_k(args.k)
    if len(k) != 1:
        raise ConfigError("synth takes a single k")
    try:
        front = enumerate_best(k[0], args.nmax)
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    out = Path(args.out) if args.out else None
    fmt = "json" if args.format == "json" else "text"
    text = export_sequences(records_from_candidates(front), out, fmt)
    if out is None:
        sys.stdout.write(text)
    try:
        m = fit_tcount_model(front)
        print(f"T-count model: n = {m.a:.4f}*log2(1/delta) + {m.b:.4f} "
              f"(exact up to T-count {m.n_exact_max})", file=sys.stderr)
    except InsufficientData as exc:
        print(f"T-count model not fitted: {exc}", file=sys.stderr)
    return EXIT_OK


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pg", type=float, help="physical gate error rate")
    common.add_argument("--k", help="rotation index: 2, 1-7 or 1,3,5")
    common.add_argument("--pout", help="target error(s), comma separated, or 'standard' "
                        "(every decade from 1e-5 to 1e-18)")
    common.add_argument("--eps-grid", default="1e-4:1e7:4",
                        help="epsilon sweep as lo:hi:per_decade or a list")
    common.add_argument("--dmax", type=int, default=199, help="largest code distance")
    common.add_argument("--even-d", action="store_true", help="allow even code distances")
    common.add_argument("--db", action="append", help="sequence file (repeatable)")
    common.add_argument("--model", help="T-count model 'a,b' or 'none'")
    common.add_argument("--format", choices=("csv", "json", "pretty"), default="csv")
    common.add_argument("--out", help="output file (default stdout)")

    p = _Parser(prog="rotcost", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("distill", parents=[common], help="direct |psi_k> distillation costs")
    sub.add_parser("sequence", parents=[common], help="Clifford+T sequence costs")
    sub.add_parser("compare", parents=[common], help="both methods and the crossover k0")
    s = sub.add_parser("synth", help="enumerate Clifford+T approximations of Z_k")
    s.add_argument("--k", required=True)
    s.add_argument("--nmax", type=int, required=True)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--out")
    return p


COMMANDS = {"distill": cmd_distill, "sequence": cmd_sequence,
            "compare": cmd_compare, "synth": cmd_synth}


def main(argv=None):
    logging.basicConfig(format="%(name)s: %(levelname)s: %(message)s")
    args = make_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"rotcost {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
