"""Smoke tests for the compiled simtext module.

These exercise the Python surface end to end on tiny inputs; the C++ test
suites carry the numerical depth.
"""

import json
import math
import os
import subprocess

import pytest

import simtext

LEXICON_DIR = os.path.join(os.path.dirname(__file__), "..", "..", "data")
LEXICON = os.path.join(LEXICON_DIR, "style.lex")
COMMON = os.path.join(LEXICON_DIR, "common_words.lex")


def write_corpus(path, pairs=8):
    topics = ["climate", "neurons", "markets", "enzymes"]
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(pairs):
            abstract = (
                "Quantitative analysis demonstrates significant heterogeneity "
                "across experimental conditions underlying the observed "
                "phenomena."
                + " The calibration of the instrumentation underpins the "
                "extrapolation of the apparatus." * (i % 4)
                + f" The {topics[i % 4]} paradigm."
            )
            lay = (
                "We think this is good and people like it. It helps us a lot. "
                "We do not worry."
                + " People use it daily." * (i % 5)
                + f" We like {topics[i % 4]}."
            )
            fh.write(json.dumps({"id": f"p{i:02d}", "kind": "abstract", "text": abstract}) + "\n")
            fh.write(json.dumps({"id": f"p{i:02d}", "kind": "human_lay", "text": lay}) + "\n")


def test_welch_reproduces_reference_contrast():
    result = simtext.welch_t(75.53, 5.57, 800, 69.84, 7.45, 800)
    assert result["t"] == pytest.approx(17.30, abs=0.05)
    assert result["df"] == pytest.approx(1479.6, abs=2.0)
    assert result["d"] == pytest.approx(0.87, abs=0.01)
    assert result["p"] < 0.001


def test_power_solver_sample_sizes():
    assert simtext.power_n("t", 0.2) == 788
    assert simtext.power_n("rm", 0.1, measurements=3) == 164
    assert simtext.power_n("rm", 0.1, measurements=3, convention="univariate") == 163
    with pytest.raises(ValueError):
        simtext.power_n("z", 0.2)


def test_fisher_interval_rounds_to_reference():
    lo, hi = simtext.fisher_ci(0.84, 822)
    assert round(lo, 2) == 0.82
    assert round(hi, 2) == 0.86


def test_select_stimuli_orders_by_gap():
    pairs = [
        ("P1", 79.31, 48.65),
        ("P2", 76.64, 46.32),
        ("P3", 79.07, 52.14),
        ("P4", 85.00, 59.66),
        ("P5", 87.10, 62.81),
    ]
    chosen = simtext.select_stimuli(pairs, 5)
    assert [c[0] for c in chosen] == ["P1", "P2", "P3", "P4", "P5"]
    gaps = [c[1] for c in chosen]
    assert gaps == sorted(gaps, reverse=True)


def test_score_document_returns_metrics():
    card = simtext.score_document(
        "We like this. It is good and people use it.", LEXICON, COMMON
    )
    assert card["word_count"] == 10
    assert 0.0 <= card["common_pct"] <= 100.0
    assert 0.0 <= card["analytic_scaled"] <= 100.0
    assert "pronouns" in card["categories"]


def test_corpus_scoring_and_yoked_comparison(tmp_path):
    corpus = tmp_path / "docs.jsonl"
    write_corpus(str(corpus))

    cards = simtext.score_corpus(str(corpus), LEXICON, COMMON)
    assert len(cards) == 16
    assert all(c["simplicity_z"] is not None for c in cards)

    report = simtext.run_yoked_comparison(
        str(corpus), LEXICON, COMMON, replicates=1000, seed=7
    )
    assert report["study"] == "yoked_comparison"
    measures = [c["measure"] for c in report["comparisons"]]
    assert measures == [
        "simplicity_index",
        "common_words",
        "analytic_writing",
        "readability",
    ]
    index = report["comparisons"][0]
    assert index["d"] > 0  # lay texts read simpler
    assert index["d_ci"]["lower"] <= index["d"] <= index["d_ci"]["upper"]

    again = simtext.run_yoked_comparison(
        str(corpus), LEXICON, COMMON, replicates=1000, seed=7
    )
    assert report == again  # fixed seed, identical report


def test_cronbach_and_bootstrap():
    base = [float(i % 7) for i in range(60)]
    # constant shifts keep the items perfectly parallel, so alpha is exactly 1
    items = [base, [v + 0.5 for v in base], [v + 1.5 for v in base]]
    assert simtext.cronbach_alpha(items) == pytest.approx(1.0, abs=1e-6)

    a = [float(i % 11) for i in range(40)]
    b = [float(i % 11) + 3.0 for i in range(40)]
    lo, hi = simtext.bootstrap_d_ci(a, b, replicates=1000, seed=3)
    assert lo <= hi
    assert hi < 0  # b is uniformly larger, so d = (a - b) is negative


def test_density_summary_shape():
    values = [math.sin(i / 3.0) * 10 + 50 for i in range(100)]
    density = simtext.density_summary(values, bins=20)
    assert len(density["bin_edges"]) == 21
    assert len(density["counts"]) == 20
    assert sum(density["counts"]) == 100
    assert not density["kde_skipped"]


def test_prompt_contains_protocol_phrases():
    prompt = simtext.render_prompt("A tiny abstract.", 120)
    assert "no more than 120 words" in prompt
    assert "Write the significance statement here:" in prompt
    assert "A tiny abstract." in prompt


def test_missing_file_raises_oserror():
    with pytest.raises(OSError):
        simtext.score_corpus("no_such_file.jsonl", LEXICON, COMMON)


def test_cli_binary_agrees_with_module():
    cli = os.environ.get("SIMTEXT_CLI")
    if not cli:
        pytest.skip("SIMTEXT_CLI not set")
    out = subprocess.run(
        [cli, "power", "--design", "t", "--d", "0.2", "--power", "0.8"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == str(simtext.power_n("t", 0.2))
