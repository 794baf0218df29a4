"""Corpus ingestion and chunking.

Two corpus styles are supported, declared per document via ``corpus_tag``:

* ``textbook``: the body is split into chunks of at most ``chunk_limit``
  characters by recursive character splitting (blank line, newline, sentence
  boundary, space, then a hard split). Separators stay attached to the
  preceding piece, so concatenating chunk contents reproduces the body
  byte for byte.
* ``hierarchical``: one chunk per blank-line-delimited paragraph. Markdown
  style heading lines ("# Anatomy", "## Nerves") update the active heading
  chain; each chunk's title is the article title joined with the chain in
  effect at its paragraph. The optional document-level ``headings`` list
  seeds the initial chain.

Corpus files are JSON lines: {"id", "title", "headings"?, "content",
"corpus_tag"}.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator

from .errors import ContractViolationError, InputError

logger = logging.getLogger(__name__)

DEFAULT_CHUNK_LIMIT = 1000
HEADING_JOINER = " -- "

_SENTENCE_SEP = "sentence"
_SEPARATORS: tuple[str, ...] = ("\n\n", "\n", _SENTENCE_SEP, " ")
_SENTENCE_BOUNDARY_RE = re.compile(r"[.!?] ")
_HEADING_RE = re.compile(r"^(#{1,6})\s+(.*)$", re.DOTALL)


class CorpusStyle(Enum):
    TEXTBOOK = "textbook"
    HIERARCHICAL = "hierarchical"


@dataclass
class CorpusDocument:
    doc_id: str
    title: str
    body: str
    style: CorpusStyle
    headings: list[str] = field(default_factory=list)


@dataclass
class Chunk:
    chunk_id: str
    doc_id: str
    title: str
    content: str
    ordinal: int

    def to_json(self) -> dict:
        return {
            "chunk_id": self.chunk_id,
            "doc_id": self.doc_id,
            "title": self.title,
            "content": self.content,
            "ordinal": self.ordinal,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Chunk":
        return cls(
            chunk_id=obj["chunk_id"],
            doc_id=obj["doc_id"],
            title=obj["title"],
            content=obj["content"],
            ordinal=int(obj["ordinal"]),
        )


def _chunk_id(doc_id: str, ordinal: int) -> str:
    return f"{doc_id}#{ordinal:05d}"


def _split_points(piece: str, separator: str) -> list[int]:
    if separator == _SENTENCE_SEP:
        return [m.end() for m in _SENTENCE_BOUNDARY_RE.finditer(piece)]
    return [m.end() for m in re.finditer(re.escape(separator), piece)]


def _split_recursive(piece: str, limit: int, level: int, doc_id: str) -> list[str]:
    if len(piece) <= limit:
        return [piece]
    if level >= len(_SEPARATORS):
        logger.warning(
            "hard split in %s: unsplittable run of %d chars exceeds limit %d",
            doc_id, len(piece), limit,
        )
        return [piece[i:i + limit] for i in range(0, len(piece), limit)]
    points = _split_points(piece, _SEPARATORS[level])
    parts = []
    start = 0
    for point in points:
        parts.append(piece[start:point])
        start = point
    if start < len(piece):
        parts.append(piece[start:])
    if len(parts) <= 1:
        return _split_recursive(piece, limit, level + 1, doc_id)
    resolved: list[str] = []
    for part in parts:
        if len(part) > limit:
            resolved.extend(_split_recursive(part, limit, level + 1, doc_id))
        else:
            resolved.append(part)
    merged: list[str] = []
    for part in resolved:
        if merged and len(merged[-1]) + len(part) <= limit:
            merged[-1] += part
        else:
            merged.append(part)
    return merged


def chunk_textbook_style(doc: CorpusDocument, limit: int = DEFAULT_CHUNK_LIMIT) -> list[Chunk]:
    """Split a prose body into <= limit-char chunks, losslessly."""
    if not doc.body:
        raise ContractViolationError(f"document {doc.doc_id!r} has an empty body")
    if limit <= 0:
        raise ContractViolationError("chunk limit must be positive")
    pieces = _split_recursive(doc.body, limit, 0, doc.doc_id)
    return [
        Chunk(
            chunk_id=_chunk_id(doc.doc_id, i),
            doc_id=doc.doc_id,
            title=doc.title,
            content=piece,
            ordinal=i,
        )
        for i, piece in enumerate(pieces)
    ]


def chunk_hierarchical(doc: CorpusDocument, heading_joiner: str = HEADING_JOINER) -> list[Chunk]:
    """One chunk per paragraph, titled with the active heading chain."""
    if not doc.body:
        raise ContractViolationError(f"document {doc.doc_id!r} has an empty body")
    chain: list[str] = list(doc.headings)
    chunks: list[Chunk] = []
    for block in doc.body.split("\n\n"):
        paragraph = block.strip()
        if not paragraph:
            continue
        heading = _HEADING_RE.match(paragraph)
        if heading:
            level = len(heading.group(1))
            chain = chain[:level - 1] + [heading.group(2).strip()]
            continue
        title = heading_joiner.join([doc.title] + chain) if chain else doc.title
        chunks.append(
            Chunk(
                chunk_id=_chunk_id(doc.doc_id, len(chunks)),
                doc_id=doc.doc_id,
                title=title,
                content=paragraph,
                ordinal=len(chunks),
            )
        )
    return chunks


def chunk_document(doc: CorpusDocument, limit: int = DEFAULT_CHUNK_LIMIT) -> list[Chunk]:
    if doc.style is CorpusStyle.TEXTBOOK:
        return chunk_textbook_style(doc, limit)
    return chunk_hierarchical(doc)


def read_corpus(path: str | Path) -> Iterator[CorpusDocument]:
    """Stream corpus documents from a JSONL file."""
    path = Path(path)
    try:
        handle = path.open("r", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read corpus {path}: {exc}") from exc
    seen: set[str] = set()
    with handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"{where}: invalid JSON: {exc}") from exc
            if not isinstance(obj, dict):
                raise InputError(f"{where}: expected a JSON object")
            for key in ("id", "title", "content", "corpus_tag"):
                if key not in obj:
                    raise InputError(f"{where}: missing '{key}'")
            doc_id = str(obj["id"])
            if not doc_id.strip():
                raise InputError(f"{where}: empty 'id'")
            if doc_id in seen:
                raise InputError(f"{where}: duplicate doc id {doc_id!r}")
            seen.add(doc_id)
            if not str(obj["content"]):
                raise InputError(f"{where}: empty 'content'")
            try:
                style = CorpusStyle(str(obj["corpus_tag"]).lower())
            except ValueError:
                raise InputError(
                    f"{where}: corpus_tag must be 'textbook' or 'hierarchical', "
                    f"got {obj['corpus_tag']!r}"
                ) from None
            headings = obj.get("headings") or []
            if not isinstance(headings, list):
                raise InputError(f"{where}: headings must be a list")
            yield CorpusDocument(
                doc_id=doc_id,
                title=str(obj["title"]),
                body=str(obj["content"]),
                style=style,
                headings=[str(h) for h in headings],
            )
