import random

import pytest

from slicecheck.analysis import (
    HATECHECK_CATEGORIES,
    AnalysisOptions,
    SelectorContext,
    aave_analysis,
    analyze_on,
    analyze_slices,
    check_anno_agreement,
    check_substring,
    cold_analyze,
    cold_category,
    compare_models,
    hatecheck_analyze,
    hatecheck_category,
    length_bins,
    plot_info_table,
    run_selector,
    sample_error_example,
    str_len_analysis,
)
from slicecheck.datasets import COLD, HATECHECK, DatasetDescriptor
from slicecheck.dialect import DialectModel, uniform_priors
from slicecheck.errors import AlignmentError, ArgumentError, ColumnError, DomainError, KindError, SchemaError
from slicecheck.submission import submit
from slicecheck.table import load_table, read_table

from .helpers import make_submission
from .oracles import report_oracle, sequences_from_confusion

# -- generic ----------------------------------------------------------------------


def test_analyze_on_groups_in_first_appearance_order():
    sub = make_submission(["a", "b", "c", "d"], list("YNYN"), list("YYYN"), extra={"f": ["p", "q", None, "p"]})
    res = analyze_on(sub, "f")
    assert res.labels == ["p", "q", "<missing>"]
    assert [(r.total, r.total_correct) for r in res.rows] == [(2, 2), (1, 0), (1, 1)]
    assert res.row("q").accuracy == 0.0
    assert res.reports["p"].labels == ["N", "Y"]


def test_single_valued_column_matches_overall():
    sub = make_submission("abc", list("YNY"), list("NNY"), extra={"f": ["k"] * 3})
    res = analyze_on(sub, "f")
    assert res.reports["k"] == res.overall


def test_analyze_on_errors():
    sub = make_submission("ab", "YN", "YN", extra={"score": [0.5, 1.5]})
    with pytest.raises(KindError, match="str_len_analysis"):
        analyze_on(sub, "score")
    with pytest.raises(ColumnError):
        analyze_on(sub, "nope")


def test_reference_report_reproduced_through_analyze_on():
    gold, pred = sequences_from_confusion({("N", "N"): 538, ("N", "Y"): 534, ("Y", "N"): 186, ("Y", "Y"): 758})
    sub = make_submission(["t"] * len(gold), gold, pred, extra={"Off": gold})
    res = analyze_on(sub, "Off")
    assert res.labels == ["N", "Y"]
    assert res.overall.per_class["N"].recall == pytest.approx(0.502, abs=1e-3)
    assert res.overall.per_class["Y"].precision == pytest.approx(0.587, abs=1e-3)


def test_agreement_slices():
    extra = {"A1": list("YYNN"), "A2": list("YYNY"), "A3": ["Y", "N", "N", None]}
    sub = make_submission("abcd", list("YYNN"), list("YNNN"), extra=extra)
    res = check_anno_agreement(sub, ["A1", "A2", "A3"])
    assert res.labels == ["full", "partial"]
    assert res.row("full").total == 2 and res.row("partial").total == 2
    assert res.diagnostics["rows_missing_annotator_label"] == 1
    with pytest.raises(ColumnError):
        check_anno_agreement(sub, ["A1", "A9"])
    with pytest.raises(ArgumentError):
        check_anno_agreement(sub, ["A1"])


def test_unanimous_fixture_has_empty_partial():
    extra = {"A1": list("YN"), "A2": list("YN")}
    res = check_anno_agreement(make_submission("ab", "YN", "YY", extra=extra), ["A1", "A2"])
    assert [(r.slice_label, r.total) for r in res.rows] == [("full", 2), ("partial", 0)]


def test_agreement_by_group_name(toy_dir):
    table = read_table(toy_dir / "cold.csv")
    preds = read_table(toy_dir / "cold_predictions.csv")["prediction"]
    sub = submit(table, COLD, preds, {"LABEL_0": "N", "LABEL_1": "Y"})
    by_name = check_anno_agreement(sub, "Off")
    by_cols = check_anno_agreement(sub, ["Off1", "Off2", "Off3"])
    assert by_name.rows == by_cols.rows


def test_substring():
    sub = make_submission(["A female lead", "male", "FEMALE", "x"], list("YNYN"), list("YNNN"))
    res = check_substring(sub, "female")
    assert [(r.slice_label, r.total) for r in res.rows] == [("contains", 1), ("not-contains", 3)]
    res = check_substring(sub, "female", case_sensitive=False)
    assert res.row("contains").total == 2
    assert check_substring(sub, "zzz").row("contains").empty
    with pytest.raises(ArgumentError):
        check_substring(sub, "")


def test_substring_present_everywhere():
    sub = make_submission(["ab", "abc"], "YN", "YN")
    assert check_substring(sub, "ab").row("not-contains").total == 0


def test_length_bins_example():
    edges, idx = length_bins([2, 3, 10, 11], 2)
    assert edges == [2, 6.5, 11] and idx == [0, 0, 1, 1]
    texts = ["a b", "a b c", " ".join("x" * 10), " ".join("y" * 11)]
    res = str_len_analysis(make_submission(texts, "YNYN", "YNYN"), "words", 2)
    assert [(r.slice_label, r.total) for r in res.rows] == [("2–6.5", 2), ("6.5–11", 2)]
    assert all(r.accuracy == 1.0 for r in res.rows)
    assert res.kind == "histogram"


def test_length_edge_cases():
    sub = make_submission(["", "  "], "YN", "YY")
    res = str_len_analysis(sub, "words", 5)
    assert len(res.rows) == 1 and res.rows[0].total == 2
    single = str_len_analysis(make_submission(["a", "abc"], "YN", "YN"), "characters", 1)
    assert [r.total for r in single.rows] == [2]
    with pytest.raises(ArgumentError):
        str_len_analysis(sub, "lines", 2)
    with pytest.raises(ArgumentError):
        length_bins([1], 0)


def test_max_value_lands_in_last_bin():
    edges, idx = length_bins([0, 1, 2, 3], 3)
    assert idx == [0, 1, 2, 2]


TOPICS = ("aa", "hispanic", "other", "white")


def toy_dialect():
    return DialectModel(TOPICS, {"w1": (0.8, 0.2, 0, 0), "w2": (0.2, 0.8, 0, 0)}, uniform_priors(4))


def test_aave_boundary_goes_high():
    sub = make_submission(["w1 w2", "w2", "nothing here"], "YNY", "YNN")
    res = aave_analysis(sub, toy_dialect())
    assert [(r.slice_label, r.total) for r in res.rows] == [
        ("score >= 0.5", 1),
        ("score < 0.5", 1),
        ("no-evidence", 1),
    ]
    high = aave_analysis(sub, toy_dialect(), threshold=0.9)
    assert high.row("score >= 0.9").total == 0


def test_aave_all_out_of_vocab():
    res = aave_analysis(make_submission(["a", "b"], "YN", "YN"), toy_dialect())
    assert res.labels == ["no-evidence"]
    with pytest.raises(ArgumentError):
        aave_analysis(make_submission(["a"], "Y", "Y"), toy_dialect(), threshold=1.0)


# -- COLD ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "args, label",
    [
        (("N", "Y", "N", "N"), "reclaimed"),
        (("Y", "Y", "N", "N"), "off-slur"),
        (("Y", "Y", "Y", "Y"), "off-slur"),
        (("Y", "N", "Y", "N"), "off-nom"),
        (("N", "N", "N", "Y"), "Off=N|Slur=N|Nom=N|Dist=Y"),
        (("Y", "N", "N", "N"), "Off=Y|Slur=N|Nom=N|Dist=N"),
    ],
)
def test_cold_category(args, label):
    assert cold_category(*args) == label


def test_cold_category_domain():
    with pytest.raises(DomainError):
        cold_category("y", "N", "N", "N")


COLD_LITE = DatasetDescriptor("cold-lite", "Text", "Off", label_domain=("N", "Y"))


def test_cold_analyze_delegates_to_cat(toy_dir):
    table = read_table(toy_dir / "cold.csv")
    preds = read_table(toy_dir / "cold_predictions.csv")["prediction"]
    sub = submit(table, COLD, preds, {"LABEL_0": "N", "LABEL_1": "Y"})
    assert cold_analyze(sub, AnalysisOptions(show_examples=True)) == analyze_on(
        sub, "Cat", AnalysisOptions(show_examples=True)
    )


def test_cold_analyze_derives_categories():
    rows = [  # Off, Slur, Nom, Dist -> expected category
        ("N", "Y", "N", "N", "reclaimed"),
        ("Y", "Y", "N", "N", "off-slur"),
        ("Y", "N", "Y", "N", "off-nom"),
        ("N", "N", "N", "Y", "Off=N|Slur=N|Nom=N|Dist=Y"),
        ("N", "Y", "Y", "Y", "reclaimed"),
        ("Y", "N", "N", "N", "Off=Y|Slur=N|Nom=N|Dist=N"),
    ]
    extra = {name: [r[i] for r in rows] for i, name in enumerate(("Off", "Slur", "Nom", "Dist"))}
    sub = make_submission(["t"] * 6, extra["Off"], extra["Off"], descriptor=COLD_LITE, extra=extra)
    res = cold_analyze(sub)
    assert res.labels == ["reclaimed", "off-slur", "off-nom", "Off=N|Slur=N|Nom=N|Dist=Y", "Off=Y|Slur=N|Nom=N|Dist=N"]
    assert res.row("reclaimed").total == 2


def test_cold_analyze_needs_columns():
    sub = make_submission(["t"], ["Y"], ["Y"], descriptor=COLD_LITE, extra={"Off": ["Y"]})
    with pytest.raises(SchemaError, match="Slur"):
        cold_analyze(sub)


# -- HateCheck --------------------------------------------------------------------


@pytest.mark.parametrize(
    "code, category",
    [
        ("counter_quote_nh", "counter"),
        ("derog_neg_emote_h", "derogation"),
        ("ident_neutral_nh", "identity"),
        ("negate_pos_h", "negation"),
        ("target_obj_nh", "nonhateful-abuse"),
        ("phrase_question_h", "phrasing"),
        ("profanity_h", "profanity"),
        ("ref_subs_clause_h", "pronoun-references"),
        ("slur_reclaimed_nh", "slurs"),
        ("spell_char_swap_h", "spelling changes"),
        ("threat_dir_h", "threats"),
        ("zzz_new_case", "zzz"),
    ],
)
def test_hatecheck_category(code, category):
    assert hatecheck_category(code).category == category


def test_grouping_table_matches_report_categories():
    # category names as they appear in the reference per-category report
    printed = ["counter (nh)", "derogation (h)", "identity (nh)", "negation", "nonhateful-abuse (nh)",
               "phrasing (h)", "profanity", "pronoun-references (h)", "slurs", "spelling changes (h)", "threats (h)"]
    assert list(HATECHECK_CATEGORIES.values()) == [p.split(" (")[0] for p in printed]


def _hatecheck_sub(rows, predict):
    text = "\n".join(f"{c},{i},case {i},{g},,,,,,,1" for i, (c, g) in enumerate(rows))
    header = "functionality,case_id,test_case,label_gold,target_ident,direction,focus_words,focus_lemma,ref_case_id,ref_templ_id,templ_id\n"
    table = load_table((header + text + "\n").encode())
    return submit(table, HATECHECK, [predict(g) for _, g in rows], {"hateful": "hateful", "non-hateful": "non-hateful"})


def test_hatecheck_suffixes_and_order():
    rows = [("threat_dir_h", "hateful"), ("negate_pos_h", "hateful"), ("negate_neg_nh", "non-hateful"),
            ("counter_quote_nh", "non-hateful"), ("new_thing", "hateful")]
    res = hatecheck_analyze(_hatecheck_sub(rows, lambda g: "hateful"))
    assert res.labels == ["counter (nh)", "negation", "threats (h)", "new (h)"]
    assert res.row("counter (nh)").accuracy == 0.0
    report = res.reports["counter (nh)"]
    assert report.labels == ["hateful", "non-hateful"]
    assert report.per_class["hateful"].support == 0


def test_hatecheck_requires_functionality():
    sub = make_submission("a", "Y", "Y")
    with pytest.raises(SchemaError, match="functionality"):
        hatecheck_analyze(sub)


def _rows_from_counts(code_h, code_nh, tp_h, fn_h, tp_nh, fn_nh):
    """(functionality, gold) rows and predictions realizing the given counts."""
    rows, preds = [], []
    for code, gold, right, wrong, other in (
        (code_h, "hateful", tp_h, fn_h, "non-hateful"),
        (code_nh, "non-hateful", tp_nh, fn_nh, "hateful"),
    ):
        rows += [(code, gold)] * (right + wrong)
        preds += [gold] * right + [other] * wrong
    return rows, preds


# Confusion counts solved from the reference per-category figures
# (TP = recall * support); the table's values must then come back.
@pytest.mark.parametrize(
    "codes, counts, expected",
    [
        (
            ("negate_pos_h", "negate_neg_nh"),
            (33, 107, 54, 79),
            {
                "hateful": (0.295, 0.236, 0.262, 140),
                "non-hateful": (0.335, 0.406, 0.367, 133),
                "macro avg": (0.315, 0.321, 0.315, 273),
                "weighted avg": (0.315, 0.319, 0.313, 273),
            },
        ),
        (
            ("counter_quote_nh", "counter_ref_nh"),
            (0, 0, 12, 302),
            {
                "hateful": (0.0, 0.0, 0.0, 0),
                "non-hateful": (1.0, 0.038, 0.074, 314),
                "macro avg": (0.5, 0.019, 0.037, 314),
                "weighted avg": (1.0, 0.038, 0.074, 314),
            },
        ),
    ],
)
def test_reference_category_rows_reproduced(codes, counts, expected):
    rows, preds = _rows_from_counts(*codes, *counts)
    it = iter(preds)
    res = hatecheck_analyze(_hatecheck_sub(rows, lambda g: next(it)))
    (label,) = res.labels
    got = dict(res.reports[label].rows())
    for name, (p, r, f, s) in expected.items():
        m = got[name]
        assert (m.precision, m.recall, m.f1) == pytest.approx((p, r, f), abs=1e-3)
        assert m.support == s


def test_hatecheck_toy_file(toy_dir):
    table = read_table(toy_dir / "hatecheck.csv")
    preds = read_table(toy_dir / "hatecheck_predictions_a.csv")["prediction"]
    sub = submit(table, HATECHECK, preds, {"LABEL_0": "non-hateful", "LABEL_1": "hateful"})
    res = analyze_on(sub, "target_ident")
    assert res.labels[-1] == "<missing>"
    assert res.total == table.row_count


# -- comparison -------------------------------------------------------------------


def test_self_comparison_has_zero_deltas():
    sub = make_submission("abcd", list("YNYN"), list("YYNN"), extra={"f": list("ppqq")})
    comp = compare_models(sub, sub, "f")
    assert [r.delta for r in comp.rows] == [0.0, 0.0]


def test_extreme_comparison():
    a = make_submission("abcd", list("YNYN"), list("YNYN"), extra={"f": list("ppqq")})
    b = make_submission("abcd", list("YNYN"), list("NYNY"), extra={"f": list("ppqq")})
    assert [r.delta for r in compare_models(a, b, "f").rows] == [1.0, 1.0]


def test_hand_computed_deltas():
    gold = list("YYNNYN")
    a = make_submission("abcdef", gold, list("YYNYYN"), extra={"f": list("pppqqq")})
    b = make_submission("abcdef", gold, list("NYNYNN"), extra={"f": list("pppqqq")})
    comp = compare_models(a, b, "f", names=("m1", "m2"))
    # slice p: a 3/3, b 2/3; slice q: a 2/3, b 1/3
    assert [(r.slice_label, r.accuracy_a, r.accuracy_b) for r in comp.rows] == [("p", 1.0, 2 / 3), ("q", 2 / 3, 1 / 3)]
    assert [r.delta for r in comp.rows] == pytest.approx([1 / 3, 1 / 3])
    assert comp.to_csv().splitlines()[0] == "slice,total,accuracy_m1,accuracy_m2,delta"


def test_comparison_alignment():
    a = make_submission("ab", "YN", "YN", extra={"f": "pq"})
    with pytest.raises(AlignmentError):
        compare_models(a, make_submission("abc", "YNY", "YNY", extra={"f": "pqq"}), "f")
    with pytest.raises(AlignmentError, match="row 1"):
        compare_models(a, make_submission("ab", "YY", "YN", extra={"f": "pq"}), "f")


# -- examples and determinism -----------------------------------------------------


def test_error_examples():
    sub = make_submission(["ok", "bad", "ok2"], list("YNY"), list("YYY"))
    rng = random.Random(0)
    assert sample_error_example(sub, [0, 2], rng) is None
    ex = sample_error_example(sub, [0, 1, 2], random.Random(99))
    assert (ex.text, ex.predicted_label, ex.gold_label, ex.row) == ("bad", "Y", "N", 1)


def test_examples_are_seeded():
    n = 60
    rng = random.Random(1)
    gold = [rng.choice("YN") for _ in range(n)]
    pred = [rng.choice("YN") for _ in range(n)]
    sub = make_submission([f"t{i}" for i in range(n)], gold, pred, extra={"f": [i % 3 for i in range(n)]})
    opts = AnalysisOptions(show_examples=True, seed=42)
    first, again = analyze_on(sub, "f", opts), analyze_on(sub, "f", opts)
    assert first == again
    assert all(r.example is not None for r in first.rows)
    others = [analyze_on(sub, "f", AnalysisOptions(show_examples=True, seed=s)) for s in range(5)]
    assert len({tuple(r.example.row for r in o.rows) for o in others}) > 1


def test_examples_hidden_by_default():
    sub = make_submission(["a", "b"], "YN", "NY", extra={"f": "pq"})
    assert all(r.example is None for r in analyze_on(sub, "f").rows)
    csv_text = analyze_on(sub, "f").plot_info_csv()
    assert "None" not in csv_text
    assert csv_text.splitlines()[1] == "p,1,0,0.0,,,"


def test_plot_info_round_trip():
    sub = make_submission(["x, y", "b", "c"], "YNY", "NNY", extra={"f": "pqp"})
    res = analyze_on(sub, "f", AnalysisOptions(show_examples=True))
    assert load_table(res.plot_info_csv().encode()) == plot_info_table(res)


def test_reports_csv_layout():
    sub = make_submission("ab", "YN", "YY", extra={"f": "pq"})
    lines = analyze_on(sub, "f").reports_csv().splitlines()
    assert lines[0] == "category,Metrics,precision,recall,f1-score,support"
    assert lines[1] == "p,N,0.000,0.000,0.000,0"
    assert lines[-1].startswith("overall,weighted avg,")


def test_custom_slices_and_registry():
    sub = make_submission("abcd", list("YNYN"), list("YYYN"))
    res = analyze_slices(sub, "parity", [("even", [0, 2]), ("odd", [1, 3])])
    assert res.row("odd").accuracy == 0.5
    assert run_selector(sub, "substring:a").labels == ["contains", "not-contains"]
    with pytest.raises(ArgumentError, match="unknown analysis"):
        run_selector(sub, "bogus")
    with pytest.raises(ArgumentError, match="dialect model"):
        run_selector(sub, "aave", ctx=SelectorContext())
    with pytest.raises(ArgumentError):
        run_selector(sub, "column")


def test_per_slice_reports_match_oracle():
    rng = random.Random(8)
    for _ in range(30):
        n = rng.randint(1, 80)
        gold = [rng.choice("YN") for _ in range(n)]
        pred = [rng.choice("YN") for _ in range(n)]
        feat = [rng.choice(["a", "b", "c", None]) for _ in range(n)]
        res = analyze_on(make_submission(["t"] * n, gold, pred, extra={"f": feat}), "f")
        for label, report in res.reports.items():
            key = None if label == "<missing>" else label
            idx = [i for i in range(n) if feat[i] == key]
            rows, macro, _, total, acc = report_oracle([gold[i] for i in idx], [pred[i] for i in idx], ["N", "Y"])
            for c, (p, r, f, s) in rows.items():
                m = report.per_class[c]
                assert abs(m.precision - float(p)) <= 1e-12 and abs(m.f1 - float(f)) <= 1e-12
                assert m.support == s
            assert abs(report.accuracy - float(acc)) <= 1e-12
