"""Cost of Z_k built from Clifford+T approximating sequences.

A sequence with ``n`` T gates and precision ``delta`` meets a gate error
budget ``p`` when ``n * p_T + 2 * delta**2 <= p``. Only T gates are charged;
each is a distilled Z_2 gate with its own corrective S cascade.

Sequence files hold one record per line, ``<k> <t_count> <delta> [<word>]``,
with ``#`` starting a comment. A ``.json`` file holds a list of objects with
keys ``k``, ``t_count``, ``delta`` and optionally ``word``.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from . import planner
from .error_model import PhysicalParams
from .exceptions import Infeasible, SequenceFileError
from .ring import word_unitary
from .synth import CALIBRATED_MODEL, TCountModel, delta, zk_target

__all__ = [
    "CALIBRATED_MODEL",
    "SequenceRecord",
    "TCountModel",
    "Verdict",
    "best_sequence_cost",
    "compare_methods",
    "crossover_k0",
    "export_sequences",
    "import_sequences",
    "records_from_candidates",
    "t_gate_cost",
    "table_seq",
]

WORD_ALPHABET = frozenset("HTSXYZW")
VALIDATION_RTOL = 1e-8
VALIDATION_ATOL = 1e-15
SOURCES = ("generated", "imported", "model")


@dataclass(frozen=True)
class SequenceRecord:
    k_target: int
    t_count: int
    delta: float
    source: str = "imported"
    word: str | None = None

    def __post_init__(self):
        if self.delta < 0 or not math.isfinite(self.delta):
            raise ValueError(f"delta must be finite and >= 0, got {self.delta!r}")
        if self.t_count < 1:
            raise ValueError("t_count must be >= 1")
        if self.k_target < 1:
            raise ValueError("k must be >= 1")
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        if self.source == "model" and self.word is not None:
            raise ValueError("model-derived records carry no word")


def records_from_candidates(cands) -> list[SequenceRecord]:
    """Sequence records for enumerated candidates; Clifford-only entries are dropped."""
    return [
        SequenceRecord(c.k_target, c.t_count, c.delta, "generated", str(c.word))
        for c in cands
        if c.t_count >= 1
    ]


def _validate(rec: SequenceRecord, where):
    if rec.word is None:
        return
    bad = set(rec.word) - WORD_ALPHABET
    if bad:
        raise SequenceFileError(f"word contains unknown gates {sorted(bad)}", where)
    if rec.word.count("T") != rec.t_count:
        raise SequenceFileError(
            f"record k={rec.k_target} t_count={rec.t_count}: word has "
            f"{rec.word.count('T')} T gates", where)
    got = delta(zk_target(rec.k_target), word_unitary(rec.word))
    if abs(got - rec.delta) > VALIDATION_RTOL * max(got, rec.delta) + VALIDATION_ATOL:
        raise SequenceFileError(
            f"record k={rec.k_target} t_count={rec.t_count}: stated delta {rec.delta!r} "
            f"but word gives {got!r}", where)


def _parse_text(text):
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (3, 4):
            raise SequenceFileError(f"expected 3 or 4 fields, got {len(parts)}", lineno)
        try:
            k, n, d = int(parts[0]), int(parts[1]), float(parts[2])
            rec = SequenceRecord(k, n, d, "imported", parts[3] if len(parts) == 4 else None)
        except ValueError as exc:
            raise SequenceFileError(str(exc), lineno) from None
        _validate(rec, lineno)
        out.append(rec)
    return out


def _parse_json(text):
    try:
        items = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SequenceFileError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(items, list):
        raise SequenceFileError("JSON sequence file must hold a list of records")
    out = []
    for i, item in enumerate(items):
        try:
            rec = SequenceRecord(int(item["k"]), int(item["t_count"]), float(item["delta"]),
                                 "imported", item.get("word"))
        except (KeyError, TypeError, ValueError) as exc:
            raise SequenceFileError(f"record {i}: {exc}") from None
        _validate(rec, None)
        out.append(rec)
    return out


def import_sequences(path) -> list[SequenceRecord]:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return _parse_json(text)
    return _parse_text(text)


def export_sequences(records: Iterable[SequenceRecord], path=None, fmt=None) -> str:
    """Write records in the text (default) or JSON layout; returns the text."""
    records = list(records)
    if fmt is None:
        fmt = "json" if path is not None and Path(path).suffix.lower() == ".json" else "text"
    if fmt == "json":
        body = json.dumps(
            [{"k": r.k_target, "t_count": r.t_count, "delta": r.delta, "word": r.word}
             for r in records], indent=1) + "\n"
    else:
        buf = io.StringIO()
        buf.write("# k t_count delta word\n")
        for r in records:
            fields = [str(r.k_target), str(r.t_count), repr(float(r.delta))]
            if r.word:
                fields.append(r.word)
            buf.write(" ".join(fields) + "\n")
        body = buf.getvalue()
    if path is not None:
        Path(path).write_text(body)
    return body


@lru_cache(maxsize=1 << 14)
def _t_gate(p, params, sweep):
    try:
        return planner.optimize_epsilon(2, p, params, sweep)
    except Infeasible:
        return None


def t_gate_cost(p, params: PhysicalParams, sweep=planner.DEFAULT_EPS_GRID):
    """Cheapest distilled T gate with error ``p``, or None if unreachable."""
    return _t_gate(float(p), params, tuple(sweep))


def _model_deltas(p_target, per_decade=20, decades=3):
    hi = math.sqrt(p_target / 2)
    return [hi * 10.0 ** (i / per_decade - decades) for i in range(per_decade * decades)]


def best_sequence_cost(k, p_target, params: PhysicalParams, db: Sequence[SequenceRecord] = (),
                       model: TCountModel | None = CALIBRATED_MODEL,
                       sweep=planner.DEFAULT_EPS_GRID) -> planner.CostReport:
    """Cheapest approximating sequence for Z_k with total error ``p_target``."""
    if p_target <= 0:
        raise ValueError("p_target must be positive")
    options = [r for r in db if r.k_target == k and 2 * r.delta**2 < p_target]
    if model is not None:
        for dl in _model_deltas(p_target):
            n = model.t_count(dl)
            if n > model.n_exact_max:
                options.append(SequenceRecord(k, n, dl, "model"))
    if not options:
        raise Infeasible(f"no sequence for k={k} has 2*delta^2 below {p_target:.3g}")
    best = None
    for rec in options:
        per_t = (p_target - 2 * rec.delta**2) / rec.t_count
        t_rep = t_gate_cost(per_t, params, sweep)
        if t_rep is None:
            continue
        total = rec.t_count * t_rep.total_qr
        if best is None or total < best[0]:
            best = (total, rec, per_t, t_rep)
    if best is None:
        raise Infeasible(f"no distilled T gate reaches the per-T budget for p={p_target:.3g}")
    total, rec, per_t, t_rep = best
    return planner.CostReport(
        "sequence", k, p_target, params.p_g, total,
        {"t_count": rec.t_count, "delta": rec.delta, "per_t_error": per_t,
         "source": rec.source, "word": rec.word,
         "epsilon": t_rep.parameters["epsilon"], "t_gate": t_rep},
    )


def table_seq(params, k_range, p_out_range, db=(), model=CALIBRATED_MODEL,
              sweep=planner.DEFAULT_EPS_GRID):
    if not k_range or not p_out_range:
        raise ValueError("ranges must be non-empty")
    cells = []
    for p_out in p_out_range:
        for k in k_range:
            try:
                rep = best_sequence_cost(k, p_out, params, db, model, sweep)
                cells.append(planner.TableCell(p_out, k, rep))
            except Infeasible as exc:
                cells.append(planner.TableCell(p_out, k, None, str(exc)))
    return cells


@dataclass(frozen=True)
class Verdict:
    k: int
    p_target: float
    distill_qr: float | None
    sequence_qr: float | None
    winner: str | None  # "distillation", "sequence" or None if neither is feasible

    @property
    def ratio(self):
        """Loser's cost over winner's; infinite when the loser is infeasible."""
        if self.winner is None:
            return math.nan
        if self.distill_qr is None or self.sequence_qr is None:
            return math.inf
        lo, hi = sorted((self.distill_qr, self.sequence_qr))
        return hi / lo


def compare_methods(k, p_target, params, db=(), model=CALIBRATED_MODEL,
                    sweep=planner.DEFAULT_EPS_GRID) -> Verdict:
    try:
        dq = planner.optimize_epsilon(k, p_target, params, sweep).total_qr
    except Infeasible:
        dq = None
    try:
        sq = best_sequence_cost(k, p_target, params, db, model, sweep).total_qr
    except Infeasible:
        sq = None
    if dq is None and sq is None:
        winner = None
    elif sq is None or (dq is not None and dq <= sq):
        winner = "distillation"
    else:
        winner = "sequence"
    return Verdict(k, p_target, dq, sq, winner)


def crossover_k0(verdicts: Iterable[Verdict], p_max=1e-12):
    """Smallest k0 such that sequences win every cell with k > k0 and p <= p_max.

    Returns None when sequences lose somewhere in the highest tabulated k.
    """
    by_k = {}
    for v in verdicts:
        if v.p_target <= p_max * (1 + 1e-9):
            by_k.setdefault(v.k, []).append(v.winner == "sequence")
    if not by_k:
        return None
    ks = sorted(by_k)
    k0 = ks[0] - 1
    for k in ks:
        if not all(by_k[k]):
            k0 = k
    return None if k0 == ks[-1] else k0
