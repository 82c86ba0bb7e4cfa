"""Keyword registry: named keyword sets compiled into a canonicalization map.

The registry file is YAML, a list of blocks with a ``label`` and its
``members`` (surface forms; multi-word phrases allowed)::

    - label: covid
      members: [covid, coronavirus]
    - label: interest_rate
      members: ["interest rate", "interest rates"]

Single-word members are matched on their stemmed form; multi-word members
are collapsed to the label by a greedy longest-first phrase scan that runs
before stemming, so "interest rate" never decays into interest + rate.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from .stemming import Stemmer
from .textproc import tokenize

__all__ = [
    "KeywordSet",
    "CanonicalMap",
    "RegistryError",
    "parse_registry",
    "compile_canonical_map",
    "fixture_path",
]

FIXTURES = ("keywords_core.yaml", "keywords_full.yaml")

# labels become graph nodes and CSV cells; keep them identifier-like
# (lowercase latin letters incl. accents, digits, underscores)
_LABEL_RE = re.compile(
    r"[a-zà-öø-ÿ][a-z0-9_à-öø-ÿ]*"
)


class RegistryError(ValueError):
    """Raised for malformed or internally inconsistent registry files."""


@dataclass(frozen=True)
class KeywordSet:
    """One canonical label with its surface forms."""

    label: str
    members: tuple[str, ...]


@dataclass(frozen=True)
class CanonicalMap:
    """Compiled lookup structures used by text normalization.

    ``stem_map`` maps post-stem surface forms to labels; ``phrases`` holds
    tokenized multi-word members, longest first; ``labels`` lets normalized
    labels pass through later stages untouched.
    """

    stem_map: dict[str, str]
    phrases: tuple[tuple[tuple[str, ...], str], ...]
    labels: frozenset[str]


def fixture_path(name: str) -> Path:
    """Path of a fixture file shipped with the package."""
    return Path(str(resources.files("sbsflow").joinpath("fixtures", name)))


def parse_registry(path: str | Path) -> list[KeywordSet]:
    """Load keyword sets, enforcing unique labels and surface forms."""
    raw = Path(path).read_text(encoding="utf-8")
    data = yaml.safe_load(raw)
    if data is None:
        return []
    if not isinstance(data, list):
        raise RegistryError(f"{path}: registry must be a list of keyword blocks")
    sets: list[KeywordSet] = []
    label_at: dict[str, int] = {}
    member_at: dict[str, tuple[int, str]] = {}
    for pos, block in enumerate(data):
        if not isinstance(block, dict) or "label" not in block:
            raise RegistryError(f"{path}: block {pos} has no 'label'")
        label = str(block["label"])
        if not _LABEL_RE.fullmatch(label):
            raise RegistryError(
                f"{path}: block {pos}: label {label!r} must be lowercase "
                "letters, digits and underscores"
            )
        if label in label_at:
            raise RegistryError(
                f"{path}: duplicate label {label!r} in blocks {label_at[label]} and {pos}"
            )
        label_at[label] = pos
        members = block.get("members") or []
        if not isinstance(members, list) or not members:
            raise RegistryError(f"{path}: block {pos} ({label}): members must be a non-empty list")
        cleaned = []
        for m in members:
            m = str(m).strip().lower()
            if not m:
                raise RegistryError(f"{path}: block {pos} ({label}): empty member")
            if m in member_at:
                other_pos, other_label = member_at[m]
                raise RegistryError(
                    f"{path}: surface form {m!r} claimed by both "
                    f"{other_label!r} (block {other_pos}) and {label!r} (block {pos})"
                )
            member_at[m] = (pos, label)
            cleaned.append(m)
        sets.append(KeywordSet(label=label, members=tuple(cleaned)))
    return sets


def compile_canonical_map(
    sets: list[KeywordSet],
    stemmer: Stemmer,
    stopwords: frozenset[str] | set[str] = frozenset(),
) -> CanonicalMap:
    """Build the stem map and phrase table; stem collisions across labels are fatal.

    Phrase tokens are filtered through ``stopwords`` so multi-word members
    like "bank of italy" still match the stop-word-stripped token stream.
    """
    stem_map: dict[str, str] = {}
    stem_source: dict[str, str] = {}
    phrases: list[tuple[tuple[str, ...], str]] = []
    labels = frozenset(s.label for s in sets)
    for ks in sets:
        for member in ks.members:
            words = tuple(t for t in tokenize(member, min_len=1) if t not in stopwords)
            if not words:
                raise RegistryError(f"member {member!r} of {ks.label!r} has no tokens")
            if len(words) > 1:
                phrases.append((words, ks.label))
                continue
            stem = stemmer.stem(words[0])
            if stem in stem_map and stem_map[stem] != ks.label:
                raise RegistryError(
                    f"stem collision: {member!r} ({ks.label}) and "
                    f"{stem_source[stem]!r} ({stem_map[stem]}) both stem to {stem!r}"
                )
            stem_map[stem] = ks.label
            stem_source.setdefault(stem, member)
        # the label itself is a fixed point of canonicalization
        if stem_map.get(ks.label, ks.label) != ks.label:
            raise RegistryError(
                f"label {ks.label!r} collides with a stem of "
                f"{stem_source[ks.label]!r} ({stem_map[ks.label]})"
            )
        stem_map.setdefault(ks.label, ks.label)
    phrases.sort(key=lambda e: (-len(e[0]), e[0]))
    return CanonicalMap(stem_map=stem_map, phrases=tuple(phrases), labels=labels)
