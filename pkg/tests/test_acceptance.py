"""Acceptance suite: one test per criterion, one pass/fail line each.

Statistical criteria run on frozen seed sets so outcomes are
deterministic; every tolerance is stated inline.
"""
from __future__ import annotations

import csv
import math
import time

import numpy as np

from conftest import score_fixture
from oracles import (
    betweenness_by_enumeration,
    natural_spline_eval,
    random_weighted_graph,
)
from sbsflow.causality import (
    assign_stars,
    cross_correlation_sign,
    f_upper_tail,
    granger_test,
    run_battery,
    select_lag_bic,
)
from sbsflow.corpus import Document, assign_windows, build_windows
from sbsflow.keywords import fixture_path
from sbsflow.network import WordGraph, connectivity, diversity, sbs, standardize
from sbsflow.pipeline import (
    PLOT_CSV,
    SCORES_CSV,
    GRANGER_CSV,
    QUESTIONS_CSV,
    WEEKLY_CSV,
    run_pipeline,
    validate_config,
)
from sbsflow.series import MonthlySeries, WeeklySeries, disaggregate
from sbsflow.stemming import NullStemmer
from sbsflow.synthetic import make_fixture
from sbsflow.textproc import (
    TextConfig,
    extract_cooccurrences,
    normalize_document,
    sequence_cooccurrences,
)

DATA_ARTIFACTS = [SCORES_CSV, WEEKLY_CSV, GRANGER_CSV, QUESTIONS_CSV, PLOT_CSV]


def _ok(criterion: int, message: str) -> None:
    print(f"ACCEPTANCE {criterion:02d} PASS: {message}")


def _graph_from_ints(n, weights):
    edges = {(f"n{i:02d}", f"n{j:02d}"): w for (i, j), w in weights.items()}
    return WordGraph(edges, nodes=[f"n{i:02d}" for i in range(n)])


def test_criterion_01_centrality_oracle_equivalence():
    t0 = time.time()
    rng = np.random.default_rng(12345)
    for _ in range(200):
        n, weights = random_weighted_graph(rng, n_max=10, w_max=5)
        graph = _graph_from_ints(n, weights)
        got = connectivity(graph)
        expected, _ = betweenness_by_enumeration(n, weights)
        for i in range(n):
            assert abs(got[f"n{i:02d}"] - expected[i]) <= 1e-9
        n_nodes = graph.n
        for token in graph.nodes:
            direct = sum(
                math.log10((n_nodes - 1) / graph.degree(nbr))
                for nbr in graph.neighbors(token)
            )
            assert abs(diversity(graph, token) - direct) <= 1e-12
    elapsed = time.time() - t0
    assert elapsed < 30.0
    _ok(1, f"200 random graphs match enumeration and formula oracles ({elapsed:.1f}s)")


def test_criterion_02_closed_form_centrality_cases():
    star = WordGraph({("hub", f"l{i}"): 1 for i in range(4)})
    assert abs(diversity(star, "hub") - 4 * math.log10(4)) <= 1e-9
    assert abs(diversity(star, "hub") - 2.40824) <= 1e-5

    path = WordGraph({("a", "b"): 1, ("b", "c"): 1})
    assert connectivity(path)["b"] == 1.0

    cycle = WordGraph({("a", "b"): 1, ("b", "c"): 1, ("a", "d"): 4, ("c", "d"): 4})
    conn = connectivity(cycle)
    assert conn == {"a": 0.5, "b": 0.0, "c": 0.5, "d": 1.0}  # exact binary fractions
    _ok(2, "star diversity 4*log10(4), path middle 1, weighted 4-cycle exact")


def test_criterion_03_known_sentence_adjacency():
    sentence = (
        "The same principle, the same love of system, the same regard to the "
        "beauty of order, of art and contrivance, frequently serves to "
        "recommend those institutions which tend to promote the public welfare."
    )
    cfg = TextConfig(
        language="none",
        stopwords=frozenset({"the", "of", "to", "and", "which", "those"}),
        stemmer=NullStemmer(),
        window_size=3,
    )
    seq = normalize_document("smith", sentence, cfg)
    from sbsflow.network import build_graph

    graph = build_graph(sequence_cooccurrences(seq, 3))
    neighborhood = set(graph.neighbors("same"))
    assert {"principle", "love", "system"} <= neighborhood
    _ok(3, f"'same' adjacent to principle/love/system (neighborhood {sorted(neighborhood)})")


def test_criterion_04_spline_correctness():
    t0 = time.time()
    windows = build_windows(
        __import__("datetime").date(2021, 2, 1), __import__("datetime").date(2021, 4, 19)
    )

    def mk(values):
        d = __import__("datetime").date
        return MonthlySeries(
            name="s", months=(d(2021, 2, 1), d(2021, 3, 1), d(2021, 4, 1)),
            values=tuple(values),
        )

    constant = disaggregate(mk([7.5, 7.5, 7.5]), windows)
    assert all(abs(v - 7.5) <= 1e-9 for v in constant.values)

    collinear = disaggregate(mk([3.0, 3.0 + 0.5 * 4, 3.0 + 0.5 * 9]), windows)
    for idx, v in zip(collinear.indices, collinear.values):
        assert abs(v - (3.0 + 0.5 * idx)) <= 1e-9

    weekly = disaggregate(mk([1.0, 2.0, 0.5]), windows)
    by_idx = dict(zip(weekly.indices, weekly.values))
    for knot, value in [(0, 1.0), (4, 2.0), (9, 0.5)]:
        assert abs(by_idx[knot] - value) <= 1e-9
    expected = natural_spline_eval([0, 4, 9], [1.0, 2.0, 0.5], list(weekly.indices))
    for v, e in zip(weekly.values, expected):
        assert abs(v - e) <= 1e-9
    elapsed = time.time() - t0
    assert elapsed < 1.0
    _ok(4, f"knot pass-through, constant/collinear, tridiagonal oracle ({elapsed:.2f}s)")


def test_criterion_05_f_distribution_accuracy():
    import mpmath as mp

    mp.mp.dps = 40
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 50:
        d1 = int(rng.integers(1, 11))
        d2 = int(rng.integers(5, 201))
        f = float(rng.uniform(0.01, 12.0))
        x = mp.mpf(d2) / (d2 + d1 * mp.mpf(f))
        oracle = float(
            mp.betainc(mp.mpf(d2) / 2, mp.mpf(d1) / 2, 0, x, regularized=True)
        )
        assert abs(f_upper_tail(f, d1, d2) - oracle) <= 1e-8
        checked += 1
    assert abs(f_upper_tail(4.9646, 1, 10) - 0.05) <= 5e-4
    assert abs(f_upper_tail(3.4928, 2, 20) - 0.05) <= 5e-4
    _ok(5, "50-point incomplete-beta grid within 1e-8; both 5% critical values hit")


def test_criterion_06_granger_size_and_power():
    t0 = time.time()
    rejections = 0
    for seed in range(200):
        rng = np.random.default_rng(seed)
        _, p = granger_test(rng.normal(size=300), rng.normal(size=300), 1)
        rejections += p < 0.05
    size = rejections / 200
    assert 0.01 <= size <= 0.12

    strong = 0
    for seed in range(100):
        rng = np.random.default_rng(10_000 + seed)
        x = rng.normal(size=300)
        e = rng.normal(size=300)
        y = np.zeros(300)
        for t in range(1, 300):
            y[t] = 0.5 * y[t - 1] + 0.8 * x[t - 1] + e[t]
        _, p = granger_test(y, x, 1)
        strong += p < 0.01
    elapsed = time.time() - t0
    assert strong >= 95
    assert elapsed < 60.0
    _ok(6, f"size {size:.3f} in [0.01, 0.12]; power {strong}/100 at p<.01 ({elapsed:.1f}s)")


def test_criterion_07_bic_lag_recovery():
    hits = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        T = 500
        x = rng.normal(size=T)
        e = rng.normal(size=T)
        y = np.zeros(T)
        for t in range(2, T):
            y[t] = 0.5 * y[t - 1] + 0.8 * x[t - 2] + e[t]
        hits += select_lag_bic(y, x, 4) == 2
    assert hits >= 80
    _ok(7, f"BIC selected the planted lag 2 in {hits}/100 seeds")


def test_criterion_08_end_to_end_planted_signal(tmp_path):
    t0 = time.time()
    base = 100  # frozen seed base; per-seed no-star probability ~0.87
    wins = 0
    outcomes = []
    for seed in range(20):
        fx = make_fixture(
            tmp_path / f"s{seed}", seed=base + seed, n_docs=416, n_months=24,
            intensity_phi=0.0,
        )
        _, series_by_kw = score_fixture(fx)
        planted = series_by_kw["covid"]
        decoy = series_by_kw["economy"]
        lam = fx.intensity["covid"]
        zlam = (lam - lam.mean()) / lam.std()
        rng = np.random.default_rng(base + 777 + seed)
        y = np.zeros(len(zlam))
        y[1:] = 0.9 * zlam[:-1]
        y += 0.5 * rng.normal(size=len(zlam))
        target = WeeklySeries(name="target", indices=planted.indices, values=tuple(y))
        by_kw = {r.keyword: r for r in run_battery([planted, decoy], [target], p_max=4)}
        ok = (
            by_kw["covid"].stars == "***"
            and by_kw["covid"].cc_sign == "+"
            and by_kw["economy"].stars == ""
        )
        wins += ok
        outcomes.append((by_kw["covid"].stars, by_kw["covid"].cc_sign, by_kw["economy"].stars))
    elapsed = time.time() - t0
    assert wins >= 18, outcomes  # >= 90% of 20 seeds
    assert elapsed < 120.0
    _ok(8, f"planted ***/+ with clean decoy in {wins}/20 seeds ({elapsed:.1f}s)")


def test_criterion_09_table_shape_reproduction(tmp_path):
    fx = make_fixture(tmp_path / "fx", seed=42)
    climate = ["climate", "personal", "economic", "current", "future"]
    questions = [f"q{i}" for i in range(1, 10)]
    rows = ["month," + ",".join(climate + questions)]
    rng = np.random.default_rng(3)
    base = 100 + rng.normal(0, 1, size=(14, fx.n_months)).cumsum(axis=1)
    months = []
    y, m = 2021, 1
    for _ in range(fx.n_months):
        months.append(f"{y:04d}-{m:02d}")
        y, m = (y + 1, 1) if m == 12 else (y, m + 1)
    for j, month in enumerate(months):
        rows.append(month + "," + ",".join(f"{base[k, j]:.4f}" for k in range(14)))
    monthly = tmp_path / "monthly14.csv"
    monthly.write_text("\n".join(rows) + "\n")

    config = tmp_path / "cfg.yaml"
    config.write_text(
        "\n".join(
            [
                "corpus:",
                f"  path: {fx.corpus_path}",
                f"registry: {fixture_path('keywords_full.yaml')}",
                "language: english",
                "start_date: 2021-01-04",
                "end_date: 2022-01-01",
                f"monthly_targets: {monthly}",
                f"climate_targets: [{', '.join(climate)}]",
                f"question_targets: [{', '.join(questions)}]",
                "p_max: 4",
                f"output_dir: {tmp_path / 'out'}",
                "",
            ]
        )
    )
    manifest = run_pipeline(validate_config(config))
    assert manifest["status"] == "ok"
    with (tmp_path / "out" / GRANGER_CSV).open() as fh:
        fh.readline()  # caveat
        long_rows = list(csv.DictReader(fh))
    assert len(long_rows) == 59 * 5
    assert len({r["keyword"] for r in long_rows}) == 59
    with (tmp_path / "out" / QUESTIONS_CSV).open() as fh:
        fh.readline()  # caveat
        wide_rows = list(csv.DictReader(fh))
    assert len(wide_rows) == 59
    assert all(len(row) == 10 for row in wide_rows)  # keyword + nine questions
    _ok(9, "long battery CSV is 59x5 rows; wide CSV pivots to 59 rows x 9 question columns")


def test_criterion_10_worker_determinism(tmp_path):
    fx = make_fixture(tmp_path / "fx", seed=7)
    cfg = validate_config(fx.config_path)
    digests: list[dict[str, bytes]] = []
    for rep in range(3):
        for workers in (1, 8):
            out = tmp_path / f"rep{rep}_w{workers}"
            run_pipeline(cfg, out_dir=out, workers=workers)
            digests.append({name: (out / name).read_bytes() for name in DATA_ARTIFACTS})
    for other in digests[1:]:
        assert other == digests[0]
    _ok(10, "byte-identical data artifacts across 1 vs 8 workers, 3 repetitions")


def test_criterion_11_invariant_suite(rng):
    # z-score mean zero
    values = {f"w{i}": float(v) for i, v in enumerate(rng.normal(size=50))}
    z = standardize(values)
    assert abs(sum(z.values()) / len(z)) < 1e-9

    # composite score decomposition is exact
    seqs = [["covid", "badora", "gedora", "covid"], ["badora", "tidora", "gedora"]]
    from sbsflow.network import build_graph, prevalence

    prev = prevalence(seqs)
    records = extract_cooccurrences(seqs[0], 3) + extract_cooccurrences(seqs[1], 3)
    graph = build_graph(records, extra_nodes=prev.keys())
    for s in sbs(graph, prev, list(graph.nodes)):
        assert s.sbs == s.z_prevalence + s.z_diversity + s.z_connectivity

    # F scale invariance
    x = rng.normal(size=200)
    e = rng.normal(size=200)
    y = np.zeros(200)
    for t in range(1, 200):
        y[t] = 0.5 * y[t - 1] + 0.8 * x[t - 1] + e[t]
    f0, p0 = granger_test(y, x, 1)
    f1, p1 = granger_test(3.0 * y - 7.0, -2.0 * x + 5.0, 1)
    assert abs(f1 - f0) <= 1e-8 * max(1.0, abs(f0))
    assert abs(p1 - p0) <= 1e-8
    assert cross_correlation_sign(y, -x, 4).sign != cross_correlation_sign(y, x, 4).sign

    # shortest-path sets invariant under positive weight scaling
    n, weights = random_weighted_graph(np.random.default_rng(5), n_max=8)
    g1 = _graph_from_ints(n, weights)
    g2 = _graph_from_ints(n, {k: 7.0 * w for k, w in weights.items()})
    c1, c2 = connectivity(g1), connectivity(g2)
    assert all(abs(c1[k] - c2[k]) <= 1e-9 for k in c1)

    # ingestion partition property
    from datetime import date, timedelta

    start = date(2021, 5, 3)
    docs = [
        Document(f"d{i}", start + timedelta(days=int(off)), "", "")
        for i, off in enumerate(rng.integers(-20, 100, size=80))
    ]
    out = assign_windows(docs, start, start + timedelta(days=70))
    assert out.assigned + out.excluded == len(docs)

    # adjacent-pair count conservation at window 2
    tokens = [str(t) for t in rng.integers(0, 5, size=60)]
    total = sum(extract_cooccurrences(tokens, 2).values())
    assert total == sum(1 for a, b in zip(tokens, tokens[1:]) if a != b)

    # stars function matches the footnote thresholds exactly
    for p, expected in [(0.005, "***"), (0.01, "**"), (0.049, "**"), (0.05, "*"), (0.0999, "*"), (0.10, ""), (0.9, "")]:
        assert assign_stars(p) == expected

    _ok(11, "named invariants hold (full property suite lives in the module tests)")
