"""Scoring predicted triples against gold annotations."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import DuplicateKey, FormatError
from .extractor import UNKNOWN, Triple
from .gazetteer import Gazetteers

POLICIES = ("strict", "loose")

_AUXILIARIES = frozenset({
    "is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had",
    "do", "does", "did", "can", "could", "may", "might", "must", "shall", "should",
    "will", "would", "not",
})
_PREPOSITIONS = frozenset({
    "about", "across", "against", "as", "at", "by", "for", "from", "in", "into", "of",
    "on", "onto", "over", "through", "to", "under", "upon", "via", "with", "within",
})

SentenceKey = tuple[str, int]


@dataclass(frozen=True)
class GoldRecord:
    doc_id: str
    sentence_index: int
    sentence_text: str
    triples: tuple[Triple, ...] = ()

    @property
    def key(self) -> SentenceKey:
        return (self.doc_id, self.sentence_index)


def load_gold(file: str | Path) -> list[GoldRecord]:
    records: list[GoldRecord] = []
    seen: dict[SentenceKey, int] = {}
    text = Path(file).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            doc_id = raw["doc_id"]
            index = raw["sentence_index"]
            if not isinstance(doc_id, str) or not isinstance(index, int):
                raise TypeError("doc_id must be a string and sentence_index an integer")
            sentence_text = raw.get("sentence_text", "")
            triples = tuple(
                Triple.from_dict({**t, "doc_id": doc_id, "sentence_index": index,
                                  "sentence_text": sentence_text})
                for t in raw["triples"]
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad gold record: {exc}", line_no) from None
        rec = GoldRecord(doc_id, index, sentence_text, triples)
        if rec.key in seen:
            raise DuplicateKey(f"duplicate sentence {rec.key} (first at line {seen[rec.key]})",
                               line_no)
        seen[rec.key] = line_no
        records.append(rec)
    return records


def normalize_text(text: str) -> str:
    words = [w for w in text.casefold().split() if w != "the"]
    return " ".join(words)


def _drop_articles(text: str) -> str:
    return " ".join(w for w in text.split() if w.casefold() != "the")


def main_verb(relation: str) -> str:
    """Last token that is neither an auxiliary nor a preposition ("was released under" -> "released")."""
    words = normalize_text(relation).split()
    content = [w for w in words if w not in _AUXILIARIES and w not in _PREPOSITIONS]
    if content:
        return content[-1]
    return words[-1] if words else ""


class Normalizer:
    """Maps triple slots to comparison keys, optionally canonicalising through gazetteers."""

    def __init__(self, gazetteers: Gazetteers | None = None):
        self.gazetteers = gazetteers

    def subject(self, s: str) -> str:
        if self.gazetteers is not None:
            canonical = self.gazetteers.model.lookup(_drop_articles(s))
            if canonical is not None:
                return normalize_text(canonical)
        return normalize_text(s)

    def object(self, o: str) -> str:
        if self.gazetteers is not None:
            for gaz in self.gazetteers.object_gazetteers():
                canonical = gaz.lookup(_drop_articles(o))
                if canonical is not None:
                    return normalize_text(canonical)
        return normalize_text(o)

    def strict_key(self, t: Triple) -> tuple[str, str, str]:
        return (self.subject(t.subject), normalize_text(t.relation), self.object(t.object))


@dataclass
class SentenceMatch:
    key: SentenceKey
    tp: int
    fp: int
    fn: int

    @property
    def exact(self) -> bool:
        return self.fp == 0 and self.fn == 0


@dataclass
class MatchResult:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    sentences: int = 0
    exact_sentences: int = 0
    policy: str = "strict"
    per_sentence: list[SentenceMatch] = field(default_factory=list)


def _max_matching(left: list, right: list, compatible) -> int:
    # augmenting-path bipartite matching; sentence-level sets are tiny
    match_right: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for j in range(len(right)):
            if j in seen or not compatible(left[i], right[j]):
                continue
            seen.add(j)
            if j not in match_right or augment(match_right[j], seen):
                match_right[j] = i
                return True
        return False

    return sum(1 for i in range(len(left)) if augment(i, set()))


def match_triples(pred: Iterable[Triple], gold: Iterable[GoldRecord], policy: str = "strict",
                  gazetteers: Gazetteers | None = None) -> MatchResult:
    """Per-sentence triple matching; sentences are the union of gold and predicted keys."""
    if policy not in POLICIES:
        raise ValueError(f"policy must be one of {POLICIES}")
    norm = Normalizer(gazetteers)
    gold_by: dict[SentenceKey, set] = {}
    for rec in gold:
        gold_by[rec.key] = {norm.strict_key(t) for t in rec.triples}
    pred_by: dict[SentenceKey, set] = defaultdict(set)
    for t in pred:
        pred_by[(t.provenance.doc_id, t.provenance.sentence_index)].add(norm.strict_key(t))

    if policy == "strict":
        def compatible(p, g):
            return p == g
    else:
        def compatible(p, g):
            return p[0] == g[0] and p[2] == g[2] and main_verb(p[1]) == main_verb(g[1])

    result = MatchResult(policy=policy)
    for key in sorted(set(gold_by) | set(pred_by)):
        p = sorted(pred_by.get(key, ()))
        g = sorted(gold_by.get(key, ()))
        tp = _max_matching(p, g, compatible)
        sm = SentenceMatch(key, tp, len(p) - tp, len(g) - tp)
        result.per_sentence.append(sm)
        result.tp += sm.tp
        result.fp += sm.fp
        result.fn += sm.fn
        result.sentences += 1
        result.exact_sentences += sm.exact
    return result


@dataclass(frozen=True)
class Metrics:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    accuracy: float

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn,
                "precision": self.precision, "recall": self.recall, "f1": self.f1,
                "accuracy": self.accuracy, "zero_division": 0.0}


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def score(mr: MatchResult) -> Metrics:
    if min(mr.tp, mr.fp, mr.fn) < 0:
        raise ValueError("counts must be non-negative")
    p = _ratio(mr.tp, mr.tp + mr.fp)
    r = _ratio(mr.tp, mr.tp + mr.fn)
    f1 = _ratio(2 * p * r, p + r)
    return Metrics(mr.tp, mr.fp, mr.fn, p, r, f1, _ratio(mr.exact_sentences, mr.sentences))


def format_table(m: Metrics) -> str:
    rows = [("Accuracy", m.accuracy), ("Recall", m.recall), ("Precision", m.precision),
            ("F1 value (F1-Score)", m.f1)]
    width = max(len(name) for name, _ in rows)
    lines = [f"{'Metric':<{width}}  Value", f"{'-' * width}  -----"]
    lines += [f"{name:<{width}}  {value:.2f}" for name, value in rows]
    return "\n".join(lines) + "\n"


def report(mr: MatchResult, m: Metrics) -> dict:
    return {"policy": mr.policy, "sentences": mr.sentences,
            "exact_sentences": mr.exact_sentences, **m.to_dict()}


def drop_unknown(triples: Iterable[Triple]) -> list[Triple]:
    return [t for t in triples if t.category != UNKNOWN]
