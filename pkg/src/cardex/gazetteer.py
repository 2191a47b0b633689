"""Dictionary lookup of model, licence and application names."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ConflictError, FormatError

MODEL = "model"
LICENCE = "licence"
APPLICATION = "application"
CATEGORIES = (MODEL, LICENCE, APPLICATION)


def tokenize(text: str) -> list[str]:
    """Whitespace split, then peel leading/trailing punctuation into separate tokens.

    Punctuation inside a chunk is kept, so "2.0", "v1.5" and "GPT-4" survive whole.
    """
    tokens: list[str] = []
    for chunk in text.split():
        start, end = 0, len(chunk)
        while start < end and not chunk[start].isalnum():
            start += 1
        while end > start and not chunk[end - 1].isalnum():
            end -= 1
        tokens.extend(chunk[:start])
        if start < end:
            tokens.append(chunk[start:end])
        tokens.extend(chunk[end:])
    return tokens


def lookup_key(text: str) -> str:
    """Case-folded, whitespace-collapsed form with standalone hyphens glued to neighbours."""
    out: list[str] = []
    glue = False
    for part in tokenize(text.casefold()):
        if part == "-":
            out.append("-")
            glue = True
            continue
        if out and not glue:
            out.append(" ")
        out.append(part)
        glue = False
    return "".join(out)


def _span_width(key: str) -> int:
    # upper bound on how many sentence tokens can produce this key
    return len(tokenize(key.replace("-", " - ")))


@dataclass(frozen=True)
class Mention:
    category: str
    canonical: str
    surface: str
    token_span: tuple[int, int]

    def to_dict(self) -> dict:
        return {"category": self.category, "canonical": self.canonical,
                "surface": self.surface, "token_span": list(self.token_span)}


@dataclass
class Gazetteer:
    category: str
    entries: dict[str, frozenset[str]] = field(default_factory=dict)
    _index: dict[str, str] = field(default_factory=dict, repr=False, compare=False)
    _max_span: int = field(default=0, repr=False, compare=False)

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown category {self.category!r}")
        entries, self.entries = self.entries, {}
        for canonical, aliases in entries.items():
            self.add(canonical, aliases)

    def add(self, canonical: str, aliases=(), line_no: int | None = None) -> None:
        canonical = canonical.strip()
        if not canonical:
            raise FormatError("empty canonical name", line_no)
        merged = set(self.entries.get(canonical, ())) | {canonical}
        for alias in aliases:
            alias = alias.strip()
            if not alias:
                raise FormatError(f"empty alias for {canonical!r}", line_no)
            merged.add(alias)
        for alias in merged:
            key = lookup_key(alias)
            other = self._index.get(key)
            if other is not None and other != canonical:
                raise ConflictError(alias, other, canonical, line_no)
        for alias in merged:
            key = lookup_key(alias)
            self._index[key] = canonical
            self._max_span = max(self._max_span, _span_width(key))
        self.entries[canonical] = frozenset(merged)

    def lookup(self, surface: str) -> str | None:
        return self._index.get(lookup_key(surface))

    def __contains__(self, surface: str) -> bool:
        return self.lookup(surface) is not None

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Gazetteers:
    model: Gazetteer
    licence: Gazetteer
    application: Gazetteer

    def __iter__(self):
        return iter((self.model, self.licence, self.application))

    def object_gazetteers(self) -> tuple[Gazetteer, Gazetteer]:
        return self.licence, self.application


def load_gazetteer(file: str | Path, category: str) -> Gazetteer:
    gaz = Gazetteer(category)
    text = Path(file).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        canonical, tab, rest = line.partition("\t")
        if not tab:
            gaz.add(canonical, (), line_no)
            continue
        if "\t" in rest:
            raise FormatError("more than one TAB separator", line_no)
        gaz.add(canonical, rest.split("|"), line_no)
    return gaz


def load_gazetteers(models, licences, applications) -> Gazetteers:
    return Gazetteers(load_gazetteer(models, MODEL),
                      load_gazetteer(licences, LICENCE),
                      load_gazetteer(applications, APPLICATION))


def starter_path(category: str) -> Path:
    name = {MODEL: "models.txt", LICENCE: "licences.txt", APPLICATION: "applications.txt"}
    return Path(str(resources.files("cardex") / "data" / name[category]))


def starter_gazetteers() -> Gazetteers:
    """The bundled, deliberately non-exhaustive dictionaries."""
    return load_gazetteers(starter_path(MODEL), starter_path(LICENCE), starter_path(APPLICATION))


def find_mentions(tokens: list[str], gaz: Gazetteer) -> list[Mention]:
    """Greedy left-to-right longest match; spans never overlap."""
    mentions: list[Mention] = []
    n = len(tokens)
    i = 0
    while i < n:
        for j in range(min(n, i + gaz._max_span), i, -1):
            surface = " ".join(tokens[i:j])
            canonical = gaz.lookup(surface)
            if canonical is not None:
                mentions.append(Mention(gaz.category, canonical, surface, (i, j)))
                i = j
                break
        else:
            i += 1
    return mentions


def normalize_mention(surface: str, gaz: Gazetteer) -> str | None:
    return gaz.lookup(surface)


@dataclass(frozen=True)
class CandidateVerdict:
    is_candidate: bool
    model_mentions: list[Mention]
    licence_mentions: list[Mention]
    application_mentions: list[Mention]

    @property
    def mentions(self) -> list[Mention]:
        found = self.model_mentions + self.licence_mentions + self.application_mentions
        return sorted(found, key=lambda m: (m.token_span, m.category))


def select_candidates(sentence_text: str, gazetteers: Gazetteers) -> CandidateVerdict:
    tokens = tokenize(sentence_text)
    models = find_mentions(tokens, gazetteers.model)
    licences = find_mentions(tokens, gazetteers.licence)
    apps = find_mentions(tokens, gazetteers.application)
    return CandidateVerdict(bool(models) and bool(licences or apps), models, licences, apps)
