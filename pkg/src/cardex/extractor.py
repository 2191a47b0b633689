"""Rule engine turning dependency trees into (model, relation, object) triples.

Passive clauses (nsubjpass + auxpass on the main verb) yield
subject / auxiliaries + verb + first preposition / prepositional object.
Active clauses try, in order: direct object, adjectival complement with a
prepositional phrase, and a bare prepositional phrase on the verb.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

from .corpus import ParsedSentence, reconstruct_text
from .deptree import PAPER, DepTree, LabelScheme, adapt_labels, build_tree, normalize_copula, subtree_phrase
from .errors import FormatError, NoPredicate, RejectedSubject, RejectedTriple
from .gazetteer import LICENCE, APPLICATION, Gazetteers, find_mentions, tokenize

UNKNOWN = "unknown"
TRIPLE_CATEGORIES = (LICENCE, APPLICATION, UNKNOWN)

_CORE_UPOS = frozenset({"VERB", "AUX", "ADJ"})
SUBJECT_PRUNE = ("relcl", "acl", "appos", "conj", "cc", "advcl", "parataxis", "prep")
OBJECT_PRUNE = ("conj", "cc", "preconj", "relcl")


@dataclass(frozen=True, order=True)
class Provenance:
    doc_id: str = ""
    sentence_index: int = 0
    sentence_text: str = ""

    def to_dict(self) -> dict:
        return {"doc_id": self.doc_id, "sentence_index": self.sentence_index,
                "sentence_text": self.sentence_text}


@dataclass
class ExtractionState:
    subject: int | None = None
    obj: int | None = None
    relation: list[int] = field(default_factory=list)
    is_passive: bool = False
    branch: str | None = None

    @property
    def complete(self) -> bool:
        return (self.subject is not None and self.obj is not None
                and bool(self.relation) and self.subject != self.obj)


@dataclass(frozen=True, order=True)
class Triple:
    subject: str
    relation: str
    object: str
    category: str
    provenance: Provenance = Provenance()

    def __post_init__(self):
        if not (self.subject and self.relation and self.object):
            raise ValueError("triple slots must be non-empty")
        if self.category not in TRIPLE_CATEGORIES:
            raise ValueError(f"unknown category {self.category!r}")

    def to_dict(self) -> dict:
        return {"subject": self.subject, "relation": self.relation, "object": self.object,
                "category": self.category, **self.provenance.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "Triple":
        prov = Provenance(d.get("doc_id", ""), int(d.get("sentence_index", 0)),
                          d.get("sentence_text", ""))
        return cls(d["subject"], d["relation"], d["object"], d.get("category", UNKNOWN), prov)


def _predicate(tree: DepTree) -> tuple[DepTree, int]:
    norm = normalize_copula(tree)
    if norm.root.upos not in _CORE_UPOS:
        raise NoPredicate(f"root {norm.root.form!r} ({norm.root.upos}) is not a verb or adjective")
    return norm, norm.root_id


def _is_passive(tree: DepTree, verb: int) -> bool:
    return bool(tree.children(verb, "nsubjpass")) and bool(tree.children(verb, "auxpass"))


def detect_voice(tree: DepTree) -> bool:
    """True for a passive main clause. Raises NoPredicate when there is no verb/adjective core."""
    norm, verb = _predicate(tree)
    return _is_passive(norm, verb)


def extract_passive(tree: DepTree) -> ExtractionState | None:
    try:
        t, verb = _predicate(tree)
    except NoPredicate:
        return None
    if not _is_passive(t, verb):
        return None
    subject = t.first_child(verb, "nsubjpass")
    prep = t.first_child(verb, "prep")
    if prep is None:
        return None
    obj = t.first_child(prep, "pobj")
    if obj is None:
        return None
    relation = sorted(t.children(verb, "aux", "auxpass") + [verb, prep])
    return ExtractionState(subject, obj, relation, True, "passive")


def extract_active(tree: DepTree) -> ExtractionState | None:
    try:
        t, verb = _predicate(tree)
    except NoPredicate:
        return None
    if _is_passive(t, verb):
        return None
    subject = t.first_child(verb, "nsubj")
    if subject is None:
        return None
    aux = t.children(verb, "aux")

    dobj = t.first_child(verb, "dobj")
    if dobj is not None:
        return ExtractionState(subject, dobj, sorted(aux + [verb]), False, "dobj")

    acomp = t.first_child(verb, "acomp")
    if acomp is not None:
        prep = t.first_child(acomp, "prep")
        if prep is None:
            prep = t.first_child(verb, "prep")
        obj = t.first_child(prep, "pobj") if prep is not None else None
        if obj is not None:
            return ExtractionState(subject, obj, sorted(aux + [verb, acomp, prep]), False, "acomp")

    prep = t.first_child(verb, "prep")
    if prep is not None:
        obj = t.first_child(prep, "pobj")
        if obj is not None:
            return ExtractionState(subject, obj, sorted(aux + [verb, prep]), False, "prep")
    return None


def assemble_relation(tree: DepTree, state: ExtractionState) -> str:
    return " ".join(tree.forms(sorted(state.relation)))


def classify_object(phrase: str, gazetteers: Gazetteers) -> str:
    tokens = tokenize(phrase)
    for gaz in gazetteers.object_gazetteers():
        if find_mentions(tokens, gaz):
            return gaz.category
    return UNKNOWN


def validate_triple(state: ExtractionState, tree: DepTree, gazetteers: Gazetteers,
                    provenance: Provenance | None = None) -> Triple:
    if not state.complete:
        raise RejectedTriple("incomplete extraction state")
    subject_phrase = subtree_phrase(tree, state.subject, SUBJECT_PRUNE)
    canonical = gazetteers.model.lookup(subject_phrase)
    if canonical is None:
        raise RejectedSubject(subject_phrase)
    object_phrase = subtree_phrase(tree, state.obj, OBJECT_PRUNE)
    if not object_phrase:
        raise RejectedTriple("empty object phrase")
    return Triple(canonical, assemble_relation(tree, state), object_phrase,
                  classify_object(object_phrase, gazetteers), provenance or Provenance())


def _conjuncts(tree: DepTree, node_id: int) -> list[int]:
    found = []
    stack = tree.children(node_id, "conj")
    while stack:
        cur = stack.pop()
        found.append(cur)
        stack.extend(tree.children(cur, "conj"))
    return sorted(found)


def extract_state(tree: DepTree) -> ExtractionState | None:
    return extract_passive(tree) or extract_active(tree)


def extract_sentence(tree: DepTree, gazetteers: Gazetteers,
                     provenance: Provenance | None = None) -> list[Triple]:
    state = extract_state(tree)
    if state is None:
        return []
    try:
        triples = [validate_triple(state, tree, gazetteers, provenance)]
    except RejectedTriple:
        return []
    for conj in _conjuncts(tree, state.obj):
        try:
            triples.append(validate_triple(replace(state, obj=conj), tree, gazetteers, provenance))
        except RejectedTriple:
            continue
    return triples


def extract_parsed(ps: ParsedSentence, gazetteers: Gazetteers,
                   scheme: LabelScheme = PAPER) -> list[Triple]:
    tree = adapt_labels(build_tree(ps), scheme)
    prov = Provenance(ps.doc_id, ps.index, reconstruct_text(ps))
    return extract_sentence(tree, gazetteers, prov)


def extract_corpus(sentences: Iterable[ParsedSentence], gazetteers: Gazetteers,
                   scheme: LabelScheme = PAPER) -> list[Triple]:
    triples = []
    for ps in sentences:
        triples.extend(extract_parsed(ps, gazetteers, scheme))
    # stable sort keeps within-sentence order (head object before conjuncts)
    return sorted(triples, key=lambda t: (t.provenance.doc_id, t.provenance.sentence_index))


def dump_triples(triples: Iterable[Triple]) -> str:
    return "".join(json.dumps(t.to_dict(), ensure_ascii=False) + "\n" for t in triples)


def load_triples(path: str | Path) -> list[Triple]:
    triples = []
    text = Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            triples.append(Triple.from_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad triple record: {exc}", line_no) from None
    return triples
