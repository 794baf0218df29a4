"""Exact inner-product vector index with a binary on-disk cache.

The index is an exhaustive flat store: search computes the inner product of
the query against every stored vector and sorts descending, ties broken by
ascending chunk id. No quantization, no clustering.

Cache file layout (little-endian):
    magic   8 bytes  b"PQFVEC1\\0"
    u32     dimension
    u64     record count
    records u16 id length, UTF-8 chunk id, dimension * f32
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Chunk
from .errors import ContractViolationError, IndexFormatError, InputError

MAGIC = b"PQFVEC1\x00"

VECTORS_FILENAME = "vectors.pqfvec"
CHUNKS_FILENAME = "chunks.jsonl"
MANIFEST_FILENAME = "manifest.json"


@dataclass
class RetrievalHit:
    chunk: Chunk
    score: float
    rank: int


def content_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class VectorIndex:
    """Immutable flat store of (chunk_id, float32 vector) pairs."""

    def __init__(self, dimension: int, chunk_ids: list[str], matrix: np.ndarray):
        if matrix.shape != (len(chunk_ids), dimension):
            raise ContractViolationError(
                f"matrix shape {matrix.shape} does not match "
                f"{len(chunk_ids)} ids x {dimension} dims"
            )
        if len(set(chunk_ids)) != len(chunk_ids):
            raise ContractViolationError("chunk ids must be unique")
        bad = np.flatnonzero(~np.isfinite(matrix).all(axis=1))
        if bad.size:
            raise ContractViolationError(
                f"non-finite embedding component in chunk {chunk_ids[int(bad[0])]!r}"
            )
        self.dimension = dimension
        self.chunk_ids = list(chunk_ids)
        self._matrix32 = np.ascontiguousarray(matrix, dtype=np.float32)
        self._matrix64 = self._matrix32.astype(np.float64)
        # Rank of each row's id in lexicographic order, for stable tie-breaks.
        order = np.argsort(np.array(self.chunk_ids)) if chunk_ids else np.array([], dtype=np.int64)
        self._id_rank = np.empty(len(chunk_ids), dtype=np.int64)
        self._id_rank[order] = np.arange(len(chunk_ids))

    def __len__(self) -> int:
        return len(self.chunk_ids)

    @property
    def vectors(self) -> np.ndarray:
        """Stored float32 vectors; treat as read-only."""
        return self._matrix32

    @classmethod
    def from_vectors(cls, chunk_ids: list[str], vectors: np.ndarray) -> "VectorIndex":
        vectors = np.asarray(vectors, dtype=np.float32)
        if vectors.ndim != 2:
            raise ContractViolationError("vectors must be a 2-D array")
        return cls(vectors.shape[1], list(chunk_ids), vectors)

    def search_vector(self, query: np.ndarray, k: int) -> list[tuple[str, float]]:
        """Top-k (chunk_id, inner product), score descending, id ascending on ties."""
        if k < 1:
            raise ContractViolationError("k must be >= 1")
        if len(self.chunk_ids) == 0:
            return []
        q = np.asarray(query, dtype=np.float64).reshape(-1)
        if q.shape[0] != self.dimension:
            raise ContractViolationError(
                f"query dimension {q.shape[0]} != index dimension {self.dimension}"
            )
        scores = self._matrix64 @ q
        order = np.lexsort((self._id_rank, -scores))[:k]
        return [(self.chunk_ids[i], float(scores[i])) for i in order]

    # -- persistence ---------------------------------------------------------

    def save(self, path: str | Path) -> None:
        with Path(path).open("wb") as handle:
            handle.write(MAGIC)
            handle.write(struct.pack("<I", self.dimension))
            handle.write(struct.pack("<Q", len(self.chunk_ids)))
            for chunk_id, row in zip(self.chunk_ids, self._matrix32):
                encoded = chunk_id.encode("utf-8")
                if len(encoded) > 0xFFFF:
                    raise ContractViolationError(f"chunk id too long: {chunk_id[:40]!r}...")
                handle.write(struct.pack("<H", len(encoded)))
                handle.write(encoded)
                handle.write(row.tobytes())

    @classmethod
    def load(cls, path: str | Path, expected_dimension: int | None = None) -> "VectorIndex":
        path = Path(path)
        try:
            blob = path.read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read vector cache {path}: {exc}") from exc
        if blob[:8] != MAGIC:
            raise IndexFormatError(f"{path}: bad magic bytes, not a vector cache")
        try:
            dimension = struct.unpack_from("<I", blob, 8)[0]
            count = struct.unpack_from("<Q", blob, 12)[0]
            offset = 20
            chunk_ids = []
            rows = np.empty((count, dimension), dtype=np.float32)
            for i in range(count):
                (id_len,) = struct.unpack_from("<H", blob, offset)
                offset += 2
                chunk_ids.append(blob[offset:offset + id_len].decode("utf-8"))
                offset += id_len
                rows[i] = np.frombuffer(blob, dtype="<f4", count=dimension, offset=offset)
                offset += dimension * 4
        except (struct.error, ValueError, UnicodeDecodeError) as exc:
            raise IndexFormatError(f"{path}: truncated or corrupt vector cache: {exc}") from exc
        if offset != len(blob):
            raise IndexFormatError(f"{path}: {len(blob) - offset} trailing bytes")
        if expected_dimension is not None and dimension != expected_dimension:
            raise IndexFormatError(
                f"{path}: dimension {dimension} does not match expected {expected_dimension}"
            )
        return cls(dimension, chunk_ids, rows)


def build_index(chunks: list[Chunk], embedder, batch_size: int = 64,
                reuse: dict[str, np.ndarray] | None = None) -> VectorIndex:
    """Embed chunk contents (reusing cached vectors) and build the flat index.

    ``reuse`` maps chunk_id to a previously computed vector whose content
    hash is already known to match; those chunks are not re-embedded.
    """
    reuse = reuse or {}
    pending = [c for c in chunks if c.chunk_id not in reuse]
    fresh: dict[str, np.ndarray] = {}
    for start in range(0, len(pending), batch_size):
        batch = pending[start:start + batch_size]
        vectors = embedder.embed([c.content for c in batch])
        for chunk, vector in zip(batch, vectors):
            if not np.isfinite(vector).all():
                raise ContractViolationError(
                    f"embedder returned a non-finite vector for chunk {chunk.chunk_id!r}"
                )
            fresh[chunk.chunk_id] = vector
    dimension = None
    rows = []
    ids = []
    for chunk in chunks:
        vector = reuse.get(chunk.chunk_id)
        if vector is None:
            vector = fresh[chunk.chunk_id]
        vector = np.asarray(vector, dtype=np.float32).reshape(-1)
        if dimension is None:
            dimension = vector.shape[0]
        elif vector.shape[0] != dimension:
            raise ContractViolationError(
                f"dimension mismatch at chunk {chunk.chunk_id!r}: "
                f"{vector.shape[0]} != {dimension}"
            )
        ids.append(chunk.chunk_id)
        rows.append(vector)
    if dimension is None:
        return VectorIndex.from_vectors([], np.zeros((0, embedder.embed_dimension), np.float32))
    return VectorIndex(dimension, ids, np.vstack(rows))


def search_top_k(index: VectorIndex, query_text: str, k: int, embedder) -> list[tuple[str, float]]:
    """Embed the query text and run exact top-k search."""
    if k < 1:
        raise ContractViolationError("k must be >= 1")
    if len(index) == 0:
        return []
    query = embedder.embed([query_text])[0]
    return index.search_vector(query, k)


class Retriever:
    """Index plus chunk store; returns ranked hits with their chunks."""

    def __init__(self, index: VectorIndex, chunks_by_id: dict[str, Chunk],
                 embedder, k: int = 3):
        self.index = index
        self.chunks_by_id = chunks_by_id
        self.embedder = embedder
        self.k = k

    def search(self, query_text: str, k: int | None = None) -> list[RetrievalHit]:
        results = search_top_k(self.index, query_text, k or self.k, self.embedder)
        return [
            RetrievalHit(chunk=self.chunks_by_id[chunk_id], score=score, rank=rank)
            for rank, (chunk_id, score) in enumerate(results, start=1)
        ]


# -- index directory artifact -------------------------------------------------

def save_index_dir(directory: str | Path, index: VectorIndex, chunks: list[Chunk],
                   manifest_extra: dict | None = None) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    index.save(directory / VECTORS_FILENAME)
    with (directory / CHUNKS_FILENAME).open("w", encoding="utf-8") as handle:
        for chunk in chunks:
            record = chunk.to_json()
            record["content_sha256"] = content_hash(chunk.content)
            handle.write(json.dumps(record, ensure_ascii=False))
            handle.write("\n")
    manifest = {
        "format": "plainscore-index/1",
        "dimension": index.dimension,
        "chunk_count": len(chunks),
        "vector_count": len(index),
    }
    manifest.update(manifest_extra or {})
    (directory / MANIFEST_FILENAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_index_dir(directory: str | Path,
                   expected_dimension: int | None = None,
                   ) -> tuple[VectorIndex, dict[str, Chunk], dict]:
    directory = Path(directory)
    manifest_path = directory / MANIFEST_FILENAME
    if not manifest_path.exists():
        raise InputError(f"{directory} is not an index directory (missing manifest)")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    index = VectorIndex.load(directory / VECTORS_FILENAME, expected_dimension)
    chunks: dict[str, Chunk] = {}
    with (directory / CHUNKS_FILENAME).open("r", encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                chunk = Chunk.from_json(json.loads(line))
                chunks[chunk.chunk_id] = chunk
    missing = [cid for cid in index.chunk_ids if cid not in chunks]
    if missing:
        raise InputError(f"{directory}: vectors without chunk records: {missing[:5]}")
    return index, chunks, manifest


def load_cached_vectors(directory: str | Path,
                        chunks: list[Chunk]) -> dict[str, np.ndarray]:
    """Vectors from an existing index dir for chunks whose content is unchanged."""
    directory = Path(directory)
    if not (directory / MANIFEST_FILENAME).exists():
        return {}
    try:
        index, stored_chunks, _ = load_index_dir(directory)
    except (InputError, IndexFormatError):
        return {}
    hashes = {cid: content_hash(chunk.content) for cid, chunk in stored_chunks.items()}
    by_id = {cid: index.vectors[i] for i, cid in enumerate(index.chunk_ids)}
    reusable = {}
    for chunk in chunks:
        vector = by_id.get(chunk.chunk_id)
        if vector is not None and hashes.get(chunk.chunk_id) == content_hash(chunk.content):
            reusable[chunk.chunk_id] = vector
    return reusable
