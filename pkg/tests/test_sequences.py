import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from rotcost.exceptions import Infeasible, SequenceFileError
from rotcost.planner import STANDARD_P_OUT, optimize_epsilon
from rotcost.sequences import (
    CALIBRATED_MODEL,
    SequenceRecord,
    Verdict,
    best_sequence_cost,
    compare_methods,
    crossover_k0,
    export_sequences,
    import_sequences,
    records_from_candidates,
    t_gate_cost,
    table_seq,
)
from rotcost.synth import best_by_tcount, enumerate_best


@pytest.fixture(scope="module")
def z3_records():
    return records_from_candidates(best_by_tcount(3, 14).values())


def test_import_single_t(tmp_path):
    f = tmp_path / "t.txt"
    f.write_text("# one exact T\n2 1 0.0 T\n\n")
    (rec,) = import_sequences(f)
    assert rec == SequenceRecord(2, 1, 0.0, "imported", "T")


def test_import_without_word(tmp_path):
    f = tmp_path / "db.txt"
    f.write_text("3 40 1.5e-4\n")
    assert import_sequences(f)[0].word is None


@pytest.mark.parametrize("line, needle", [
    ("3 4 0.5 HTHTHTHT", "word gives"),
    ("3 3 0.5 HTHTHTHT", "T gates"),
    ("3 4 0.5 HTQ", "unknown gates"),
    ("3 4", "fields"),
    ("3 x 0.5", "invalid literal"),
    ("3 4 -0.1", "delta"),
    ("3 0 0.1", "t_count"),
])
def test_corrupt_records(tmp_path, line, needle):
    f = tmp_path / "bad.txt"
    f.write_text("2 1 0.0 T\n" + line + "\n")
    with pytest.raises(SequenceFileError) as err:
        import_sequences(f)
    assert str(err.value).startswith("line 2:")
    assert needle in str(err.value)


def test_json_import(tmp_path):
    f = tmp_path / "db.json"
    f.write_text(json.dumps([{"k": 2, "t_count": 1, "delta": 0.0, "word": "T"},
                             {"k": 4, "t_count": 30, "delta": 1e-3}]))
    recs = import_sequences(f)
    assert [r.t_count for r in recs] == [1, 30]
    f.write_text(json.dumps({"k": 2}))
    with pytest.raises(SequenceFileError):
        import_sequences(f)
    f.write_text("[{")
    with pytest.raises(SequenceFileError):
        import_sequences(f)


@pytest.mark.parametrize("suffix", [".txt", ".json"])
def test_round_trip_100(tmp_path, suffix):
    recs = []
    for k in range(3, 13):
        recs.extend(records_from_candidates(best_by_tcount(k, 10).values()))
    assert len(recs) == 100
    path = tmp_path / ("db" + suffix)
    export_sequences(recs, path)
    back = import_sequences(path)
    assert [(r.k_target, r.t_count, r.delta, r.word) for r in back] == \
        [(r.k_target, r.t_count, r.delta, r.word) for r in recs]


def test_export_text_layout():
    text = export_sequences([SequenceRecord(2, 1, 0.0, "generated", "T")])
    assert text.splitlines() == ["# k t_count delta word", "2 1 0.0 T"]


def test_record_rules():
    with pytest.raises(ValueError):
        SequenceRecord(3, 10, 1e-3, "model", "HT")
    with pytest.raises(ValueError):
        SequenceRecord(3, 10, math.nan)
    with pytest.raises(ValueError):
        SequenceRecord(3, 10, 1e-3, "guessed")
    assert all(r.t_count >= 1 for r in records_from_candidates(enumerate_best(1, 3)))


def test_single_t_matches_distilled_t(pg3):
    db = [SequenceRecord(2, 1, 0.0, "imported", "T")]
    for p in (1e-6, 1e-9, 1e-14):
        rep = best_sequence_cost(2, p, pg3, db, model=None)
        assert rep.total_qr == t_gate_cost(p, pg3).total_qr
        assert rep.total_qr == optimize_epsilon(2, p, pg3).total_qr


def test_needs_some_sequence(pg3):
    with pytest.raises(Infeasible):
        best_sequence_cost(3, 1e-8, pg3, (), model=None)
    # every record is too coarse for the target
    with pytest.raises(Infeasible):
        best_sequence_cost(3, 1e-8, pg3, [SequenceRecord(3, 4, 0.11)], model=None)
    with pytest.raises(ValueError):
        best_sequence_cost(3, 0.0, pg3)


def test_t_gate_unreachable(pg3):
    assert t_gate_cost(0.9, pg3).total_qr == 0.0
    assert t_gate_cost(1e-300, pg3) is None


@pytest.fixture(scope="module")
def seq_tables(pg3, pg4):
    return [(p, table_seq(p, [3, 4, 5, 6, 7], STANDARD_P_OUT)) for p in (pg3, pg4)]


def test_budget_soundness(seq_tables, z3_records, pg3):
    reports = [c.report for _, cells in seq_tables for c in cells]
    reports += [best_sequence_cost(3, p, pg3, z3_records) for p in (1e-3, 1e-4, 1e-6)]
    for rep in reports:
        n, d = rep.parameters["t_count"], rep.parameters["delta"]
        per_t = rep.parameters["per_t_error"]
        assert n * per_t + 2 * d**2 <= rep.p_target * (1 + 1e-12)
        assert rep.parameters["t_gate"].p_target == per_t
        assert rep.total_qr == pytest.approx(n * rep.parameters["t_gate"].total_qr)


def test_model_records_have_no_word(seq_tables):
    for _, cells in seq_tables:
        for c in cells:
            assert c.report.parameters["source"] == "model"
            assert c.report.parameters["word"] is None


def test_row_monotone(seq_tables):
    for _, cells in seq_tables:
        for k in range(3, 8):
            row = [c.report.total_qr for c in cells if c.k == k]
            assert all(b >= a for a, b in zip(row, row[1:]))


def test_k_spread(seq_tables):
    for _, cells in seq_tables:
        for p in STANDARD_P_OUT:
            row = [c.report.total_qr for c in cells if c.p_out == p]
            assert max(row) / min(row) <= 2.0


@settings(max_examples=25, deadline=None)
@given(mask=st.lists(st.booleans(), min_size=14, max_size=14),
       extra=st.integers(0, 13), logp=st.sampled_from([-3, -4, -5]),
       use_model=st.booleans())
def test_superset_dominance(z3_records, pg3, mask, extra, logp, use_model):
    sub = [r for r, keep in zip(z3_records, mask) if keep]
    sup = sub + [z3_records[extra]]
    model = CALIBRATED_MODEL if use_model else None
    p = 10.0**logp

    def cost(db):
        try:
            return best_sequence_cost(3, p, pg3, db, model).total_qr
        except Infeasible:
            return math.inf

    assert cost(sup) <= cost(sub)


def test_exact_records_beat_model_when_cheaper(pg3, z3_records):
    with_db = best_sequence_cost(3, 1e-3, pg3, z3_records)
    model_only = best_sequence_cost(3, 1e-3, pg3)
    assert with_db.total_qr <= model_only.total_qr


def test_compare_examples(pg3, pg4):
    v = compare_methods(2, 1e-8, pg3)
    assert v.winner == "distillation" and v.ratio > 1
    v = compare_methods(5, 1e-8, pg3)
    assert v.distill_qr is None and v.winner == "sequence" and v.ratio == math.inf
    v = compare_methods(7, 1e-12, pg4)
    assert v.winner == "sequence"


def test_verdict_ratio():
    assert Verdict(3, 1e-8, 2.0, 8.0, "distillation").ratio == 4.0
    assert math.isnan(Verdict(3, 1e-8, None, None, None).ratio)
    # a tie goes to distillation
    assert Verdict(3, 1e-8, 5.0, 5.0, "distillation").ratio == 1.0


def _v(k, p, winner):
    return Verdict(k, p, 1.0, 1.0, winner)


def test_crossover_definition():
    cells = [_v(k, p, "sequence" if k > 2 else "distillation")
             for k in range(1, 6) for p in (1e-8, 1e-12, 1e-15)]
    assert crossover_k0(cells) == 2
    # looser targets do not count
    cells.append(_v(4, 1e-8, "distillation"))
    assert crossover_k0(cells) == 2
    cells.append(_v(4, 1e-13, "distillation"))
    assert crossover_k0(cells) == 4
    cells.append(_v(5, 1e-14, "distillation"))
    assert crossover_k0(cells) is None
    assert crossover_k0([]) is None
