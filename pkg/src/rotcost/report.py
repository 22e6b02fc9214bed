"""CSV, JSON and human-readable renderings of cost tables.

CSV numbers are written in scientific notation with 6 significant digits;
infeasible cells keep their row with an empty total and status
``infeasible``.
"""

from __future__ import annotations

import csv
import io
import json
import math

DISTILL_COLUMNS = ("p_out", "k", "total_qr", "epsilon", "status")
SEQUENCE_COLUMNS = ("p_out", "k", "total_qr", "t_count", "delta", "epsilon", "status")
VERDICT_COLUMNS = ("p_out", "k", "distill_qr", "sequence_qr", "winner", "ratio")


def fmt(x):
    if x is None:
        return ""
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.5e}"


def _write(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def cells_csv(cells, method="distillation"):
    if method == "distillation":
        rows = []
        for c in cells:
            r = c.report
            rows.append([fmt(c.p_out), c.k, fmt(r and r.total_qr),
                         fmt(r and r.parameters["epsilon"]),
                         "ok" if r else "infeasible"])
        return _write(DISTILL_COLUMNS, rows)
    rows = []
    for c in cells:
        r = c.report
        p = r.parameters if r else {}
        rows.append([fmt(c.p_out), c.k, fmt(r and r.total_qr), p.get("t_count", ""),
                     fmt(p.get("delta")), fmt(p.get("epsilon")),
                     "ok" if r else "infeasible"])
    return _write(SEQUENCE_COLUMNS, rows)


def verdicts_csv(verdicts):
    rows = [[fmt(v.p_target), v.k, fmt(v.distill_qr), fmt(v.sequence_qr),
             v.winner or "none", fmt(v.ratio)] for v in verdicts]
    return _write(VERDICT_COLUMNS, rows)


def _clean(o):
    # json cannot carry inf/nan
    if isinstance(o, float) and not math.isfinite(o):
        return str(o)
    if isinstance(o, dict):
        return {k: _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    return o


def cells_json(cells, full=None):
    """Cells as JSON; plan trees are included for single-cell queries by default."""
    if full is None:
        full = len(cells) == 1
    out = []
    for c in cells:
        item = {"p_out": c.p_out, "k": c.k, "status": "ok" if c.report else "infeasible"}
        if c.report:
            item["report"] = c.report.to_dict(full=full)
        else:
            item["reason"] = c.reason
        out.append(item)
    return json.dumps(_clean(out), indent=1) + "\n"


def verdicts_json(verdicts, k0=None):
    items = [{"p_out": v.p_target, "k": v.k, "distill_qr": v.distill_qr,
              "sequence_qr": v.sequence_qr, "winner": v.winner, "ratio": v.ratio}
             for v in verdicts]
    return json.dumps(_clean({"cells": items, "k0": k0}), indent=1) + "\n"


def pretty_grid(cells, title=""):
    ks = sorted({c.k for c in cells})
    rows = []
    for c in cells:
        if not rows or rows[-1][0] != c.p_out:
            rows.append((c.p_out, {}))
        rows[-1][1][c.k] = c
    lines = [title] if title else []
    lines.append("p_out    " + "".join(f"{'k=' + str(k):>10}" for k in ks))
    for p, by_k in rows:
        cols = []
        for k in ks:
            c = by_k.get(k)
            cols.append(f"{c.report.total_qr:10.1e}" if c and c.report else f"{'-':>10}")
        lines.append(f"{p:<9.0e}" + "".join(cols))
    return "\n".join(lines) + "\n"


def pretty_verdicts(verdicts, k0=None):
    lines = [f"{'p_out':<9}{'k':>3}{'distill':>11}{'sequence':>11}  winner"]
    for v in verdicts:
        d = f"{v.distill_qr:11.1e}" if v.distill_qr is not None else f"{'-':>11}"
        s = f"{v.sequence_qr:11.1e}" if v.sequence_qr is not None else f"{'-':>11}"
        lines.append(f"{v.p_target:<9.0e}{v.k:>3}{d}{s}  {v.winner or 'none'}")
    if k0 is not None:
        lines.append(f"k0 = {k0}")
    return "\n".join(lines) + "\n"
