"""End-to-end orchestration: one config file in, score and table CSVs out.

Stages: registry compilation, corpus ingestion and windowing, per-window
scoring (parallel over windows with a deterministic merge), target
disaggregation, the causality battery, and artifact emission. Output bytes
are a pure function of the corpus and config bytes: worker count and
scheduling never change results.
"""
from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path

import yaml

from . import causality, network, series, textproc
from .corpus import (
    IngestConfig,
    IngestReport,
    WindowAssignment,
    assign_windows,
    build_windows,
    load_corpus,
)
from .keywords import compile_canonical_map, fixture_path, parse_registry
from .network import SbsScore
from .series import WeeklySeries
from .stemming import get_stemmer

__all__ = [
    "RunConfig",
    "ConfigError",
    "PipelineError",
    "validate_config",
    "run_pipeline",
    "SCORES_CSV",
    "WEEKLY_CSV",
    "GRANGER_CSV",
    "QUESTIONS_CSV",
    "PLOT_CSV",
    "MANIFEST_JSON",
]

SCORES_CSV = "sbs_scores.csv"
WEEKLY_CSV = "weekly_targets.csv"
GRANGER_CSV = "granger_tests.csv"
QUESTIONS_CSV = "granger_questions_wide.csv"
PLOT_CSV = "plot_data.csv"
MANIFEST_JSON = "manifest.json"

# weekly targets come from a smooth interpolant; flagged on every report
CAVEAT = (
    "weekly target values are spline-interpolated from monthly data and are "
    "serially smooth by construction; Granger tests run on levels"
)


class ConfigError(ValueError):
    """All validation failures of a run config, reported together."""

    def __init__(self, failures: list[str]):
        self.failures = failures
        super().__init__("invalid configuration:\n" + "\n".join(f"  - {f}" for f in failures))


class PipelineError(RuntimeError):
    """A pipeline stage failed after validation."""


@dataclass
class RunConfig:
    corpus_path: Path
    registry_path: Path
    stopwords_path: Path
    monthly_path: Path
    output_dir: Path
    ingest: IngestConfig
    include_title: bool = True
    language: str = "italian"
    window_size: int = 3
    min_edge_weight: int = 1
    edge_length: str = "inverse"
    sentence_split: bool = True
    min_token_len: int = 2
    start_date: date = date(2017, 1, 2)
    end_date: date = date(2020, 8, 31)
    climate_targets: list[str] = field(default_factory=list)
    question_targets: list[str] = field(default_factory=list)
    p_max: int = 8
    star_thresholds: tuple[float, float, float] = causality.DEFAULT_THRESHOLDS
    workers: int = 1
    config_bytes: bytes = b""


def _as_date(value, failures: list[str], name: str) -> date | None:
    if isinstance(value, datetime):
        return value.date()
    if isinstance(value, date):
        return value
    try:
        return date.fromisoformat(str(value))
    except (TypeError, ValueError):
        failures.append(f"{name}: expected YYYY-MM-DD date, got {value!r}")
        return None


def validate_config(path: str | Path) -> RunConfig:
    """Resolve and validate a YAML run config, reporting every failure at once."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError([f"config file not found: {path}"])
    raw_bytes = path.read_bytes()
    try:
        data = yaml.safe_load(raw_bytes) or {}
    except yaml.YAMLError as exc:
        raise ConfigError([f"config does not parse as YAML: {exc}"]) from None
    if not isinstance(data, dict):
        raise ConfigError(["config root must be a mapping"])
    base = path.parent
    failures: list[str] = []

    def resolve(p) -> Path:
        p = Path(str(p))
        return p if p.is_absolute() else base / p

    corpus = data.get("corpus") or {}
    if not isinstance(corpus, dict) or "path" not in corpus:
        failures.append("corpus.path: required")
        corpus_path = base / "missing"
    else:
        corpus_path = resolve(corpus["path"])
        if not corpus_path.is_file():
            failures.append(f"corpus.path: file not found: {corpus_path}")
    fmt = str(corpus.get("format", "jsonl"))
    if fmt not in ("jsonl", "csv"):
        failures.append(f"corpus.format: must be 'jsonl' or 'csv', got {fmt!r}")
    fields = corpus.get("fields") or {}
    ingest = IngestConfig(
        format=fmt if fmt in ("jsonl", "csv") else "jsonl",
        id_field=str(fields.get("id", "id")),
        date_field=str(fields.get("date", "date")),
        title_field=str(fields.get("title", "title")),
        body_field=str(fields.get("body", "body")),
        source_field=str(fields.get("source", "source")),
        date_format=str(corpus.get("date_format", "%Y-%m-%d")),
    )

    language = str(data.get("language", "italian")).lower()
    if language not in ("italian", "english", "none"):
        failures.append(f"language: must be 'italian', 'english' or 'none', got {language!r}")

    if "registry" in data:
        registry_path = resolve(data["registry"])
    else:
        failures.append("registry: required")
        registry_path = base / "missing"
    if "registry" in data and not registry_path.is_file():
        failures.append(f"registry: file not found: {registry_path}")

    if "stopwords" in data:
        stopwords_path = resolve(data["stopwords"])
    else:
        stopwords_path = fixture_path(
            "stopwords_it.txt" if language == "italian" else "stopwords_en.txt"
        )
    if not stopwords_path.is_file():
        failures.append(f"stopwords: file not found: {stopwords_path}")

    if "monthly_targets" in data:
        monthly_path = resolve(data["monthly_targets"])
        if not monthly_path.is_file():
            failures.append(f"monthly_targets: file not found: {monthly_path}")
    else:
        failures.append("monthly_targets: required")
        monthly_path = base / "missing"

    window_size = int(data.get("window_size", 3))
    if window_size < 2:
        failures.append(f"window_size: must be >= 2, got {window_size}")
    min_edge_weight = int(data.get("min_edge_weight", 1))
    if min_edge_weight < 1:
        failures.append(f"min_edge_weight: must be >= 1, got {min_edge_weight}")
    edge_length = str(data.get("edge_length", "inverse"))
    if edge_length not in ("inverse", "direct"):
        failures.append(f"edge_length: must be 'inverse' or 'direct', got {edge_length!r}")
    min_token_len = int(data.get("min_token_len", 2))
    if min_token_len < 1:
        failures.append(f"min_token_len: must be >= 1, got {min_token_len}")
    p_max = int(data.get("p_max", 8))
    if p_max < 1:
        failures.append(f"p_max: must be >= 1, got {p_max}")
    workers = int(data.get("workers", 1))
    if workers < 1:
        failures.append(f"workers: must be >= 1, got {workers}")

    start = _as_date(data.get("start_date"), failures, "start_date")
    end = _as_date(data.get("end_date"), failures, "end_date")
    if start is not None and end is not None and start >= end:
        failures.append(f"start_date: {start} must precede end_date {end}")

    thresholds = data.get("star_thresholds", list(causality.DEFAULT_THRESHOLDS))
    try:
        thresholds = tuple(float(t) for t in thresholds)
    except (TypeError, ValueError):
        failures.append(f"star_thresholds: expected three numbers, got {thresholds!r}")
        thresholds = causality.DEFAULT_THRESHOLDS
    if len(thresholds) != 3:
        failures.append(f"star_thresholds: expected exactly three values, got {len(thresholds)}")
        thresholds = causality.DEFAULT_THRESHOLDS
    elif not (thresholds[0] > thresholds[1] > thresholds[2] > 0):
        failures.append(
            f"star_thresholds: must be strictly decreasing and positive, got {list(thresholds)}"
        )

    climate = [str(t) for t in (data.get("climate_targets") or [])]
    questions = [str(t) for t in (data.get("question_targets") or [])]

    if failures:
        raise ConfigError(failures)
    return RunConfig(
        corpus_path=corpus_path,
        registry_path=registry_path,
        stopwords_path=stopwords_path,
        monthly_path=monthly_path,
        output_dir=resolve(data.get("output_dir", "out")),
        ingest=ingest,
        include_title=bool(corpus.get("include_title", True)),
        language=language,
        window_size=window_size,
        min_edge_weight=min_edge_weight,
        edge_length=edge_length,
        sentence_split=bool(data.get("sentence_split", True)),
        min_token_len=min_token_len,
        start_date=start,
        end_date=end,
        climate_targets=climate,
        question_targets=questions,
        p_max=p_max,
        star_thresholds=thresholds,
        workers=workers,
        config_bytes=raw_bytes,
    )


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One token per line; blank lines and '#' comments ignored."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


# ---------------------------------------------------------------------------
# Per-window scoring, parallel over windows.
# ---------------------------------------------------------------------------

_CTX: dict = {}


def _init_worker(text_cfg, keywords, min_edge_weight, edge_length) -> None:
    _CTX["text_cfg"] = text_cfg
    _CTX["keywords"] = keywords
    _CTX["min_edge_weight"] = min_edge_weight
    _CTX["edge_length"] = edge_length


def _score_window(payload: tuple[int, list[tuple[str, str]]]) -> tuple[int, list[SbsScore]]:
    window_index, docs = payload
    text_cfg = _CTX["text_cfg"]
    sequences = [textproc.normalize_document(doc_id, text, text_cfg) for doc_id, text in docs]
    prev = network.prevalence(sequences)
    records = textproc.merge_cooccurrences(
        textproc.sequence_cooccurrences(seq, text_cfg.window_size) for seq in sequences
    )
    graph = network.build_graph(
        records,
        min_edge_weight=_CTX["min_edge_weight"],
        extra_nodes=prev.keys(),
        window_index=window_index,
    )
    scores = network.sbs(graph, prev, _CTX["keywords"], edge_length=_CTX["edge_length"])
    return window_index, scores


def _score_windows(
    assignment: WindowAssignment,
    text_cfg: textproc.TextConfig,
    keywords: list[str],
    cfg: RunConfig,
    workers: int,
) -> dict[int, list[SbsScore]]:
    payloads = []
    for w in assignment.windows:
        docs = [
            (d.id, d.text(cfg.include_title)) for d in assignment.by_window[w.index]
        ]
        payloads.append((w.index, docs))
    initargs = (text_cfg, keywords, cfg.min_edge_weight, cfg.edge_length)
    if workers <= 1:
        _init_worker(*initargs)
        results = [_score_window(p) for p in payloads]
    else:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=initargs
        ) as pool:
            results = list(pool.map(_score_window, payloads))
    # merge in fixed window order regardless of scheduling
    return {idx: scores for idx, scores in sorted(results)}


# ---------------------------------------------------------------------------
# Artifact writers. Score z-columns keep full round-trip precision so the
# sbs = z_p + z_d + z_c identity survives serialization; table statistics
# use 6 significant digits.
# ---------------------------------------------------------------------------


def _fmt6(x: float) -> str:
    return format(float(x), ".6g")


def _write_scores_csv(path: Path, windows, scores_by_window: dict[int, list[SbsScore]]) -> None:
    starts = {w.index: w.start_date.isoformat() for w in windows}
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(
            "window_index,week_start,keyword,prevalence_raw,diversity_raw,"
            "connectivity_raw,z_prevalence,z_diversity,z_connectivity,sbs\n"
        )
        for idx in sorted(scores_by_window):
            for s in sorted(scores_by_window[idx], key=lambda s: s.keyword):
                fh.write(
                    f"{idx},{starts[idx]},{s.keyword},{s.prevalence_raw:g},"
                    f"{s.diversity_raw!r},{s.connectivity_raw!r},"
                    f"{s.z_prevalence!r},{s.z_diversity!r},{s.z_connectivity!r},{s.sbs!r}\n"
                )


def _write_weekly_csv(path: Path, windows, weekly: list[WeeklySeries]) -> None:
    starts = {w.index: w.start_date.isoformat() for w in windows}
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write("series,window_index,week_start,value\n")
        for s in weekly:
            for idx, value in zip(s.indices, s.values):
                fh.write(f"{s.name},{idx},{starts[idx]},{value!r}\n")


def _write_granger_csv(path: Path, results) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(f"# caveat: {CAVEAT}\n")
        fh.write("keyword,target,lags,f_stat,p_value,stars,cc_sign,status\n")
        for r in results:
            lags = "" if r.lags is None else str(r.lags)
            f_stat = "" if r.f_stat is None else _fmt6(r.f_stat)
            p_value = "" if r.p_value is None else _fmt6(r.p_value)
            status = r.status.replace(",", ";").replace("\n", " ")
            fh.write(
                f"{r.keyword},{r.target},{lags},{f_stat},{p_value},{r.stars},{r.cc_sign},{status}\n"
            )


def _write_questions_csv(path: Path, results, questions: list[str]) -> None:
    by_pair = {(r.keyword, r.target): r for r in results}
    keywords = sorted({r.keyword for r in results})
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(f"# caveat: {CAVEAT}\n")
        fh.write("keyword," + ",".join(questions) + "\n")
        for kw in keywords:
            cells = []
            for q in questions:
                r = by_pair.get((kw, q))
                if r is None or r.f_stat is None:
                    cells.append("NA")
                else:
                    cells.append(f"{_fmt6(r.f_stat)}{r.stars}")
            fh.write(f"{kw}," + ",".join(cells) + "\n")


def _write_plot_csv(path: Path, windows, sbs_series, targets) -> None:
    starts = {w.index: w.start_date.isoformat() for w in windows}
    cols = [(f"sbs:{s.name}", dict(zip(s.indices, s.values))) for s in sbs_series]
    cols += [(f"target:{t.name}", dict(zip(t.indices, t.values))) for t in targets]
    grid = sorted(set.intersection(*(set(c[1]) for c in cols))) if cols else []
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write("window_index,week_start," + ",".join(name for name, _ in cols) + "\n")
        for idx in grid:
            row = ",".join(repr(values[idx]) for _, values in cols)
            fh.write(f"{idx},{starts[idx]},{row}\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


# ---------------------------------------------------------------------------
# Pipeline driver.
# ---------------------------------------------------------------------------


class _StageClock:
    def __init__(self) -> None:
        self.timings: list[dict] = []
        self.current: str | None = None
        self._t0 = 0.0

    def start(self, name: str) -> None:
        self.current = name
        self._t0 = time.perf_counter()

    def stop(self) -> None:
        self.timings.append(
            {"stage": self.current, "seconds": round(time.perf_counter() - self._t0, 6)}
        )
        self.current = None


def _keyword_series(
    scores_by_window: dict[int, list[SbsScore]], keywords: list[str]
) -> list[WeeklySeries]:
    per_kw: dict[str, dict[int, float]] = {kw: {} for kw in keywords}
    for idx, scores in scores_by_window.items():
        for s in scores:
            per_kw[s.keyword][idx] = s.sbs
    out = []
    for kw in sorted(per_kw):
        vals = per_kw[kw]
        indices = tuple(sorted(vals))
        out.append(WeeklySeries(name=kw, indices=indices, values=tuple(vals[i] for i in indices)))
    return out


def run_pipeline(
    cfg: RunConfig,
    out_dir: str | Path | None = None,
    workers: int | None = None,
    stage_mode: str = "run",
) -> dict:
    """Execute the pipeline and return the manifest (also written to disk).

    ``stage_mode`` "score" stops after the score dump; "test" re-runs the
    econometrics from a previously written score dump; "run" does both.
    """
    if stage_mode not in ("run", "score", "test"):
        raise ValueError(f"unknown stage_mode {stage_mode!r}")
    out = Path(out_dir) if out_dir is not None else cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    workers = cfg.workers if workers is None else workers
    clock = _StageClock()
    manifest: dict = {
        "config_sha256": hashlib.sha256(cfg.config_bytes).hexdigest(),
        "mode": stage_mode,
        "status": "ok",
        "failed_stage": None,
        "caveats": [CAVEAT],
        "corpus": {},
        "stages": [],
        "artifacts": [],
    }
    artifacts: list[Path] = []
    try:
        clock.start("registry")
        stopwords = load_stopwords(cfg.stopwords_path)
        stemmer = get_stemmer(cfg.language)
        sets = parse_registry(cfg.registry_path)
        canonical = compile_canonical_map(sets, stemmer, stopwords)
        keywords = sorted(s.label for s in sets)
        text_cfg = textproc.TextConfig(
            language=cfg.language,
            stopwords=stopwords,
            canonical=canonical,
            window_size=cfg.window_size,
            split_sentences=cfg.sentence_split,
            min_token_len=cfg.min_token_len,
            stemmer=stemmer,
        )
        clock.stop()

        windows = None
        scores_by_window: dict[int, list[SbsScore]] = {}
        if stage_mode in ("run", "score"):
            clock.start("ingest")
            report = IngestReport()
            docs = list(load_corpus(cfg.corpus_path, cfg.ingest, report))
            assignment = assign_windows(docs, cfg.start_date, cfg.end_date)
            windows = assignment.windows
            manifest["corpus"] = {
                "records": report.records,
                "loaded": report.loaded,
                "rejected": len(report.rejects),
                "excluded_out_of_range": assignment.excluded,
                "assigned": assignment.assigned,
                "windows": len(windows),
            }
            clock.stop()

            clock.start("scores")
            if assignment.assigned == 0:
                first, last = windows[0], windows[-1]
                raise PipelineError(
                    "no documents fell into any analysis window "
                    f"{first.index}..{last.index} "
                    f"({first.start_date.isoformat()}..{last.end_date.isoformat()})"
                )
            scores_by_window = _score_windows(assignment, text_cfg, keywords, cfg, workers)
            clock.stop()

            clock.start("write_scores")
            scores_path = out / SCORES_CSV
            _write_scores_csv(scores_path, windows, scores_by_window)
            artifacts.append(scores_path)
            clock.stop()
        else:
            windows = build_windows(cfg.start_date, cfg.end_date)
            clock.start("read_scores")
            scores_path = out / SCORES_CSV
            if not scores_path.is_file():
                raise PipelineError(
                    f"stage 'test' needs a previous score dump at {scores_path}"
                )
            scores_by_window = _read_scores_csv(scores_path)
            clock.stop()

        if stage_mode in ("run", "test"):
            clock.start("targets")
            monthly = series.load_monthly(cfg.monthly_path)
            available = {m.name for m in monthly}
            wanted = (cfg.climate_targets or [m.name for m in monthly]) + cfg.question_targets
            missing = [t for t in wanted if t not in available]
            if missing:
                raise PipelineError(
                    f"monthly target file lacks configured series: {missing}"
                )
            weekly = [
                series.disaggregate(m, windows)
                for m in monthly
                if m.name in set(wanted)
            ]
            weekly_by_name = {w.name: w for w in weekly}
            weekly_path = out / WEEKLY_CSV
            _write_weekly_csv(weekly_path, windows, weekly)
            artifacts.append(weekly_path)
            clock.stop()

            clock.start("causality")
            keywords = sorted({s.keyword for scores in scores_by_window.values() for s in scores})
            sbs_series = _keyword_series(scores_by_window, keywords)
            climate_names = cfg.climate_targets or [m.name for m in monthly]
            climate = [weekly_by_name[n] for n in climate_names]
            questions = [weekly_by_name[n] for n in cfg.question_targets]
            results = causality.run_battery(
                sbs_series, climate + questions, p_max=cfg.p_max, thresholds=cfg.star_thresholds
            )
            climate_set = set(climate_names)
            main_rows = [r for r in results if r.target in climate_set]
            question_rows = [r for r in results if r.target in set(cfg.question_targets)]
            clock.stop()

            clock.start("write_tables")
            t1 = out / GRANGER_CSV
            _write_granger_csv(t1, main_rows)
            artifacts.append(t1)
            t2 = out / QUESTIONS_CSV
            _write_questions_csv(t2, question_rows, cfg.question_targets)
            artifacts.append(t2)
            plot = out / PLOT_CSV
            _write_plot_csv(plot, windows, sbs_series, climate + questions)
            artifacts.append(plot)
            clock.stop()
    except Exception:
        if clock.current is not None:
            manifest["failed_stage"] = clock.current
            clock.stop()
        manifest["status"] = "failed"
        manifest["stages"] = clock.timings
        manifest["artifacts"] = [
            {"path": p.name, "sha256": _sha256(p)} for p in artifacts if p.is_file()
        ]
        (out / MANIFEST_JSON).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
        raise
    manifest["stages"] = clock.timings
    manifest["artifacts"] = [{"path": p.name, "sha256": _sha256(p)} for p in artifacts]
    (out / MANIFEST_JSON).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest


def _read_scores_csv(path: Path) -> dict[int, list[SbsScore]]:
    """Parse a score dump back into per-window score lists."""
    import csv as _csv

    scores: dict[int, list[SbsScore]] = {}
    with path.open("r", encoding="utf-8", newline="") as fh:
        for row in _csv.DictReader(fh):
            idx = int(row["window_index"])
            scores.setdefault(idx, []).append(
                SbsScore(
                    keyword=row["keyword"],
                    window=idx,
                    prevalence_raw=float(row["prevalence_raw"]),
                    diversity_raw=float(row["diversity_raw"]),
                    connectivity_raw=float(row["connectivity_raw"]),
                    z_prevalence=float(row["z_prevalence"]),
                    z_diversity=float(row["z_diversity"]),
                    z_connectivity=float(row["z_connectivity"]),
                    sbs=float(row["sbs"]),
                )
            )
    return scores
