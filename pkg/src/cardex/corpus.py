"""Document ingestion: sentence segmentation for raw text and CoNLL-U I/O."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

from .errors import FormatError

_TERMINATORS = ".?!"
_MULTIWORD_ID = re.compile(r"^\d+-\d+$")
_EMPTY_NODE_ID = re.compile(r"^\d+\.\d+$")


@dataclass(frozen=True)
class Document:
    doc_id: str
    text: str

    def __post_init__(self):
        if not self.doc_id:
            raise ValueError("doc_id must be non-empty")

    @classmethod
    def from_path(cls, path: str | Path) -> "Document":
        path = Path(path)
        return cls(path.stem, path.read_text(encoding="utf-8"))


@dataclass(frozen=True)
class Sentence:
    doc_id: str
    index: int
    text: str
    char_span: tuple[int, int]


@dataclass(frozen=True)
class Row:
    """One CoNLL-U token line. Rules read only id/form/upos/head/deprel."""

    id: int
    form: str
    upos: str
    head: int
    deprel: str
    lemma: str = "_"
    xpos: str = "_"
    feats: str = "_"
    deps: str = "_"
    misc: str = "_"

    def to_line(self) -> str:
        cols = [str(self.id), self.form, self.lemma, self.upos, self.xpos, self.feats,
                str(self.head), self.deprel, self.deps, self.misc]
        return "\t".join(cols)


@dataclass(frozen=True)
class ParsedSentence:
    doc_id: str
    index: int
    rows: tuple[Row, ...]
    raw_text: str | None = None
    sent_id: str | None = None
    comments: tuple[str, ...] = field(default=(), compare=False)

    @property
    def tokens(self) -> list[str]:
        return [r.form for r in self.rows]


def _is_protected_period(text: str, i: int) -> bool:
    before = text[i - 1] if i > 0 else ""
    after = text[i + 1] if i + 1 < len(text) else ""
    if before.isdigit() and after.isdigit():
        return True
    # initials such as "J. Smith"
    if before.isupper() and (i < 2 or not text[i - 2].isalnum()):
        return True
    return False


def segment_sentences(doc: Document) -> list[Sentence]:
    """Split ``doc.text`` at '.', '?' or '!' followed by whitespace and an uppercase letter."""
    text = doc.text
    n = len(text)
    out: list[Sentence] = []

    def emit(start: int, end: int) -> None:
        while start < end and text[start].isspace():
            start += 1
        while end > start and text[end - 1].isspace():
            end -= 1
        if start < end:
            out.append(Sentence(doc.doc_id, len(out), text[start:end], (start, end)))

    start = 0
    for i, ch in enumerate(text):
        if ch not in _TERMINATORS:
            continue
        if i + 1 >= n or not text[i + 1].isspace():
            continue
        j = i + 1
        while j < n and text[j].isspace():
            j += 1
        if j >= n or not text[j].isupper():
            continue
        if ch == "." and _is_protected_period(text, i):
            continue
        emit(start, i + 1)
        start = j
    emit(start, n)
    return out


def _read_text(stream: str | TextIO) -> str:
    if hasattr(stream, "read"):
        return stream.read()
    return stream


def parse_conllu(stream: str | TextIO, doc_id: str = "doc") -> list[ParsedSentence]:
    """Parse CoNLL-U text (or an open file) into sentences.

    ``# newdoc id = X`` switches the document id for the blocks that follow;
    ``# sent_id`` sets the index when it is a plain integer, otherwise the
    0-based ordinal within the document is used.
    """
    text = _read_text(stream)
    if text.startswith("\ufeff"):
        text = text[1:]
    sentences: list[ParsedSentence] = []
    state = {"doc_id": doc_id, "ordinal": 0}
    block: list[tuple[int, str]] = []

    for line_no, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            block.append((line_no, line))
            continue
        if block:
            _flush(block, sentences, state)
            block = []
    if block:
        _flush(block, sentences, state)
    return sentences


def _flush(block: list[tuple[int, str]], out: list[ParsedSentence], state: dict) -> None:
    rows: list[Row] = []
    row_lines: list[int] = []
    comments: list[str] = []
    sent_id = raw_text = None

    for line_no, line in block:
        if line.startswith("#"):
            body = line[1:].strip()
            key, sep, value = body.partition("=")
            key, value = key.strip(), value.strip()
            if sep and key == "newdoc id":
                state["doc_id"] = value
                state["ordinal"] = 0
            elif sep and key == "sent_id":
                sent_id = value
            elif sep and key == "text":
                raw_text = value
            else:
                comments.append(line)
            continue

        cols = line.split("\t")
        if len(cols) != 10:
            raise FormatError(f"expected 10 tab-separated columns, got {len(cols)}", line_no)
        if _MULTIWORD_ID.match(cols[0]) or _EMPTY_NODE_ID.match(cols[0]):
            continue
        try:
            tok_id = int(cols[0])
        except ValueError:
            raise FormatError(f"non-integer ID {cols[0]!r}", line_no) from None
        try:
            head = int(cols[6])
        except ValueError:
            raise FormatError(f"non-integer HEAD {cols[6]!r}", line_no) from None
        if tok_id != len(rows) + 1:
            raise FormatError(f"expected ID {len(rows) + 1}, got {tok_id}", line_no)
        rows.append(Row(id=tok_id, form=cols[1], lemma=cols[2], upos=cols[3], xpos=cols[4],
                        feats=cols[5], head=head, deprel=cols[7], deps=cols[8], misc=cols[9]))
        row_lines.append(line_no)

    if not rows:
        return

    n = len(rows)
    roots = []
    for row, line_no in zip(rows, row_lines):
        if not 0 <= row.head <= n:
            raise FormatError(f"HEAD {row.head} out of range 0..{n}", line_no)
        if row.head == 0:
            roots.append(line_no)
    if not roots:
        raise FormatError("sentence has no root (HEAD=0)", block[0][0])
    if len(roots) > 1:
        raise FormatError("sentence has multiple roots (HEAD=0)", roots[1])

    index = state["ordinal"]
    if sent_id is not None and sent_id.isdigit():
        index = int(sent_id)
    out.append(ParsedSentence(state["doc_id"], index, tuple(rows), raw_text, sent_id,
                              tuple(comments)))
    state["ordinal"] += 1


def serialize_conllu(sentences: Iterable[ParsedSentence]) -> str:
    blocks = []
    current_doc = None
    for ps in sentences:
        lines = []
        if ps.doc_id != current_doc:
            lines.append(f"# newdoc id = {ps.doc_id}")
            current_doc = ps.doc_id
        if ps.sent_id is not None:
            lines.append(f"# sent_id = {ps.sent_id}")
        if ps.raw_text is not None:
            lines.append(f"# text = {ps.raw_text}")
        lines.extend(ps.comments)
        lines.extend(r.to_line() for r in ps.rows)
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def read_conllu(path: str | Path, doc_id: str | None = None) -> list[ParsedSentence]:
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_conllu(fh, doc_id or path.stem)


def reconstruct_text(ps: ParsedSentence) -> str:
    if ps.raw_text is not None:
        return ps.raw_text
    return " ".join(r.form for r in ps.rows)
