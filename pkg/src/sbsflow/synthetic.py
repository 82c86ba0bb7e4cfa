"""Deterministic synthetic fixtures: corpus, targets and config in one call.

The generator plants keywords into background chatter with per-week
injection intensities it also returns, so tests and demos know the ground
truth behind every fixture they run.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

import numpy as np

__all__ = ["SyntheticFixture", "make_fixture", "DEFAULT_KEYWORD_SETS"]


def _background_vocabulary(size: int) -> list[str]:
    """Pseudo-word vocabulary; syllable products never collide with keyword stems."""
    onsets = ["b", "d", "f", "g", "l", "m", "n", "p", "r", "t", "v", "z"]
    nuclei = ["a", "e", "i", "o", "u"]
    words = []
    for first in onsets:
        for second in nuclei:
            for third in onsets:
                words.append(f"{first}{second}{third}ora")
                if len(words) >= size:
                    return words
    raise ValueError(f"vocabulary size {size} too large")


DEFAULT_KEYWORD_SETS = [
    {"label": "covid", "members": ["covid", "coronavirus"]},
    {"label": "economy", "members": ["economy", "economies"]},
    {"label": "interest_rate", "members": ["interest rate", "interest rates"]},
]


@dataclass
class SyntheticFixture:
    """Paths plus the ground truth used to build them."""

    root: Path
    corpus_path: Path
    registry_path: Path
    monthly_path: Path
    config_path: Path
    n_docs: int
    n_windows: int
    n_months: int
    keywords: list[str]
    intensity: dict[str, np.ndarray] = field(default_factory=dict)
    planted_counts: dict[str, int] = field(default_factory=dict)


def _week_of(day_offset: int) -> int:
    return day_offset // 7


def make_fixture(
    root: str | Path,
    seed: int = 0,
    n_docs: int = 200,
    n_months: int = 12,
    start: date = date(2021, 1, 4),
    keyword_sets: list[dict] | None = None,
    docs_per_sentence_words: tuple[int, int] = (6, 12),
    sentences_per_doc: tuple[int, int] = (2, 5),
    intensity_phi: float = 0.6,
    vocab_size: int = 120,
    workers: int = 1,
) -> SyntheticFixture:
    """Write corpus.jsonl, keywords.yaml, monthly.csv and config.yaml.

    Documents cover every window evenly; each keyword set gets an
    independent stationary weekly injection intensity in [0, 1], the
    probability that any given sentence mentions it. A mention replaces a
    background word, so sentence lengths stay independent of intensity.
    """
    rng = np.random.default_rng(seed)
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    keyword_sets = keyword_sets if keyword_sets is not None else DEFAULT_KEYWORD_SETS
    labels = [ks["label"] for ks in keyword_sets]

    months = []
    cursor = date(start.year, start.month, 1)
    for _ in range(n_months):
        months.append(cursor)
        cursor = date(cursor.year + 1, 1, 1) if cursor.month == 12 else date(cursor.year, cursor.month + 1, 1)
    end = date(cursor.year, cursor.month, 1)
    span_days = (end - start).days
    n_windows = -(-span_days // 7)  # ceil

    # stationary mean-reverting weekly intensity per keyword; random walks
    # over a few dozen weeks correlate spuriously across keywords
    intensity: dict[str, np.ndarray] = {}
    for label in labels:
        mean = float(rng.uniform(0.35, 0.65))
        values = np.empty(n_windows)
        level = mean
        for w in range(n_windows):
            level = mean + intensity_phi * (level - mean) + rng.normal(0.0, 0.15)
            values[w] = level
        intensity[label] = np.clip(values, 0.05, 0.95)

    vocabulary = _background_vocabulary(vocab_size)
    # Zipf frequencies: hub words outweigh any keyword, so one keyword's
    # intensity cannot move the window's score distribution
    ranks = np.arange(1, vocab_size + 1, dtype=float)
    zipf = (1.0 / ranks**1.1) / np.sum(1.0 / ranks**1.1)
    planted_counts = {label: 0 for label in labels}
    corpus_path = root / "corpus.jsonl"
    with corpus_path.open("w", encoding="utf-8") as fh:
        for i in range(n_docs):
            # round-robin placement: every window carries the same load
            week = i % n_windows
            day_in_week = (i // n_windows) % 7
            offset = min(week * 7 + day_in_week, span_days - 1)
            day = start + timedelta(days=offset)
            week = min(_week_of(offset), n_windows - 1)
            sentences = []
            n_sent = int(rng.integers(*sentences_per_doc))
            for _ in range(n_sent):
                n_words = int(rng.integers(*docs_per_sentence_words))
                words = list(rng.choice(vocabulary, size=n_words, p=zipf))
                slots = rng.permutation(len(words))
                for k, ks in enumerate(keyword_sets):
                    if rng.random() < intensity[ks["label"]][week]:
                        member = str(rng.choice(ks["members"]))
                        words[int(slots[k % len(words)])] = member
                        planted_counts[ks["label"]] += 1
                sentences.append(" ".join(words))
            record = {
                "id": f"doc-{i:05d}",
                "date": day.isoformat(),
                "title": sentences[0],
                "body": ". ".join(sentences[1:]) + ".",
                "source": f"outlet-{int(rng.integers(1, 6))}",
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")

    registry_path = root / "keywords.yaml"
    with registry_path.open("w", encoding="utf-8") as fh:
        for ks in keyword_sets:
            fh.write(f"- label: {ks['label']}\n")
            members = ", ".join(f'"{m}"' for m in ks["members"])
            fh.write(f"  members: [{members}]\n")

    # monthly targets: smooth series so the spline has something to follow
    monthly_path = root / "monthly.csv"
    names = ["climate", "personal", "economic"]
    t = np.arange(n_months)
    base = 100 + 5 * np.sin(t / 2.0) + rng.normal(0, 0.5, size=(len(names), n_months)).cumsum(axis=1)
    with monthly_path.open("w", encoding="utf-8") as fh:
        fh.write("month," + ",".join(names) + "\n")
        for j, m in enumerate(months):
            cells = ",".join(f"{base[k, j]:.4f}" for k in range(len(names)))
            fh.write(f"{m:%Y-%m},{cells}\n")

    config_path = root / "config.yaml"
    config_path.write_text(
        "\n".join(
            [
                "corpus:",
                "  path: corpus.jsonl",
                "  format: jsonl",
                "  include_title: true",
                "registry: keywords.yaml",
                "language: english",
                "window_size: 3",
                "min_edge_weight: 1",
                f"start_date: {start.isoformat()}",
                f"end_date: {end.isoformat()}",
                "monthly_targets: monthly.csv",
                f"climate_targets: [{', '.join(names)}]",
                "p_max: 4",
                "output_dir: out",
                f"workers: {workers}",
                "",
            ]
        ),
        encoding="utf-8",
    )
    return SyntheticFixture(
        root=root,
        corpus_path=corpus_path,
        registry_path=registry_path,
        monthly_path=monthly_path,
        config_path=config_path,
        n_docs=n_docs,
        n_windows=n_windows,
        n_months=n_months,
        keywords=labels,
        intensity=intensity,
        planted_counts=planted_counts,
    )
