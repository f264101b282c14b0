"""Knowledge-base construction, persistence, and record model.

A knowledge base is an ordered list of (substructure SMILES, description,
corpus count) records, optionally carrying cached embeddings tied to a
scorer checkpoint. Persistence is JSON Lines: a header object followed by
one record object per line.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

from ..chem.graph import ChemError
from ..chem.parser import parse_smiles
from .describe import Describer, describe_substructure
from .extract import extract_substructures

logger = logging.getLogger(__name__)

_FORMAT_VERSION = 1


class KbError(ValueError):
    pass


class CorpusParseError(KbError):
    """Every corpus line failed to parse."""


@dataclass(frozen=True)
class SubstructureRecord:
    smiles: str  # canonical substructure SMILES
    description: str
    count: int
    embedding: tuple[float, ...] | None = None
    checkpoint_id: str | None = None


@dataclass(frozen=True)
class KnowledgeBase:
    records: tuple[SubstructureRecord, ...]
    corpus_id: str
    threshold: int
    checkpoint_id: str | None = None

    @property
    def kb_id(self) -> str:
        digest = hashlib.sha256()
        digest.update(f"{self.corpus_id}|{self.threshold}".encode())
        for record in self.records:
            digest.update(f"{record.smiles}|{record.count}|{record.description}".encode())
        return digest.hexdigest()[:16]

    def __len__(self) -> int:
        return len(self.records)


def count_substructures(corpus: Iterable[str]) -> tuple[dict[str, int], int, int]:
    """Per-molecule substructure counts over a SMILES corpus.

    Returns (counts, parsed, failed); each substructure is counted at most
    once per molecule. Unparseable lines are logged and skipped.
    """
    counts: dict[str, int] = {}
    parsed = 0
    failed = 0
    for line in corpus:
        smiles = line.strip()
        if not smiles or smiles.startswith("#"):
            continue
        try:
            mol = parse_smiles(smiles)
        except ChemError as exc:
            failed += 1
            logger.warning("skipping corpus line %r: %s", smiles, exc)
            continue
        parsed += 1
        for sub in extract_substructures(mol):
            counts[sub] = counts.get(sub, 0) + 1
    return counts, parsed, failed


def build_kb(
    corpus: Iterable[str],
    threshold: int,
    describer: Describer,
    *,
    corpus_id: str = "",
) -> KnowledgeBase:
    """Count substructures, keep those at or above the frequency threshold,
    and describe each survivor. Deterministic: records are ordered by
    descending count, then lexicographic SMILES."""
    if threshold < 1:
        raise KbError("threshold must be >= 1")
    counts, parsed, failed = count_substructures(corpus)
    if parsed == 0:
        raise CorpusParseError(f"no corpus molecule parsed ({failed} failures)")
    survivors = sorted(
        ((smiles, n) for smiles, n in counts.items() if n >= threshold),
        key=lambda item: (-item[1], item[0]),
    )
    records = []
    for smiles, n in survivors:
        _, description = describe_substructure(smiles, describer)
        records.append(SubstructureRecord(smiles=smiles, description=description, count=n))
    return KnowledgeBase(records=tuple(records), corpus_id=corpus_id, threshold=threshold)


def save_kb(kb: KnowledgeBase, path: str | Path) -> None:
    with open(path, "w") as fh:
        header = {
            "kind": "kb_header",
            "version": _FORMAT_VERSION,
            "corpus_id": kb.corpus_id,
            "threshold": kb.threshold,
            "checkpoint_id": kb.checkpoint_id,
            "records": len(kb.records),
            "kb_id": kb.kb_id,
        }
        fh.write(json.dumps(header) + "\n")
        for record in kb.records:
            row = {
                "smiles": record.smiles,
                "description": record.description,
                "count": record.count,
            }
            if record.embedding is not None:
                row["embedding"] = list(record.embedding)
                row["checkpoint_id"] = record.checkpoint_id
            fh.write(json.dumps(row) + "\n")


def load_kb(path: str | Path) -> KnowledgeBase:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise KbError(f"{path}: empty knowledge base file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise KbError(f"{path}: bad header line: {exc}") from exc
    if header.get("kind") != "kb_header":
        raise KbError(f"{path}: missing kb_header line")
    records = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
            embedding = row.get("embedding")
            records.append(
                SubstructureRecord(
                    smiles=row["smiles"],
                    description=row["description"],
                    count=int(row["count"]),
                    embedding=tuple(embedding) if embedding is not None else None,
                    checkpoint_id=row.get("checkpoint_id"),
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise KbError(f"{path}:{line_no}: bad record: {exc}") from exc
    if len(records) != int(header.get("records", len(records))):
        raise KbError(f"{path}: header promises {header.get('records')} records, found {len(records)}")
    return KnowledgeBase(
        records=tuple(records),
        corpus_id=header.get("corpus_id", ""),
        threshold=int(header.get("threshold", 1)),
        checkpoint_id=header.get("checkpoint_id"),
    )


def embed_kb(kb: KnowledgeBase, scorer) -> KnowledgeBase:
    """Attach normalized molecule-encoder embeddings for every record."""
    import numpy as np

    mols = [parse_smiles(record.smiles) for record in kb.records]
    records = kb.records
    if mols:
        vectors = scorer.encode_molecules(mols)
        vectors = vectors / np.maximum(
            np.linalg.norm(vectors, axis=1, keepdims=True), 1e-12
        )
        vectors = vectors.astype(np.float32)  # byte-stable storage precision
        records = tuple(
            replace(
                record,
                embedding=tuple(float(x) for x in vectors[i]),
                checkpoint_id=scorer.checkpoint_id,
            )
            for i, record in enumerate(kb.records)
        )
    return KnowledgeBase(
        records=records,
        corpus_id=kb.corpus_id,
        threshold=kb.threshold,
        checkpoint_id=scorer.checkpoint_id,
    )
