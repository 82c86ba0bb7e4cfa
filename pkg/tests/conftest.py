from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

from sbsflow.corpus import assign_windows, load_corpus  # noqa: E402
from sbsflow.keywords import compile_canonical_map, parse_registry  # noqa: E402
from sbsflow.network import build_graph, prevalence, sbs  # noqa: E402
from sbsflow.pipeline import load_stopwords  # noqa: E402
from sbsflow.series import WeeklySeries  # noqa: E402
from sbsflow.stemming import get_stemmer  # noqa: E402
from sbsflow.textproc import (  # noqa: E402
    TextConfig,
    merge_cooccurrences,
    normalize_document,
    sequence_cooccurrences,
)


def score_fixture(fx, language="english", stopwords_path=None):
    """Score a synthetic fixture through the library, one call per window.

    Returns (windows, {keyword: WeeklySeries of composite scores}).
    """
    from sbsflow.keywords import fixture_path

    stopwords = load_stopwords(stopwords_path or fixture_path("stopwords_en.txt"))
    stemmer = get_stemmer(language)
    sets = parse_registry(fx.registry_path)
    canonical = compile_canonical_map(sets, stemmer, stopwords)
    cfg = TextConfig(
        language=language, stopwords=stopwords, canonical=canonical,
        window_size=3, stemmer=stemmer,
    )
    docs = list(load_corpus(fx.corpus_path))

    # same grid the fixture config describes
    import yaml

    conf = yaml.safe_load(fx.config_path.read_text())
    assignment = assign_windows(docs, conf["start_date"], conf["end_date"])
    labels = sorted(s.label for s in sets)
    per_kw: dict[str, list[float]] = {kw: [] for kw in labels}
    for w in assignment.windows:
        seqs = [
            normalize_document(d.id, d.text(), cfg) for d in assignment.by_window[w.index]
        ]
        prev = prevalence(seqs)
        records = merge_cooccurrences(sequence_cooccurrences(s, cfg.window_size) for s in seqs)
        graph = build_graph(records, extra_nodes=prev.keys(), window_index=w.index)
        for score in sbs(graph, prev, labels):
            per_kw[score.keyword].append(score.sbs)
    n = len(assignment.windows)
    out = {
        kw: WeeklySeries(name=kw, indices=tuple(range(n)), values=tuple(vals))
        for kw, vals in per_kw.items()
    }
    return assignment.windows, out


@pytest.fixture
def rng():
    return np.random.default_rng(20210104)
