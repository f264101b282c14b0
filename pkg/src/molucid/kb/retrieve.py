"""Spectrum-driven top-k retrieval over knowledge-base records."""

from __future__ import annotations

import numpy as np

from ..chem.parser import parse_smiles
from ..spectra.model import SpectrumTokens
from .build import KbError, KnowledgeBase, SubstructureRecord


class CheckpointMismatchError(KbError):
    """Record embeddings were cached under a different checkpoint."""


class Retriever:
    """Read-only retrieval session binding a knowledge base to a scorer.

    Record embeddings are taken from the KB when cached (verifying the
    checkpoint id) and computed lazily otherwise; queries encode the
    spectrum and rank records by cosine similarity.
    """

    def __init__(self, kb: KnowledgeBase, scorer):
        self.kb = kb
        self.scorer = scorer
        self._matrix = self._embedding_matrix()

    def _embedding_matrix(self) -> np.ndarray:
        dim = self.scorer.checkpoint.config.embed_dim
        if not self.kb.records:
            return np.zeros((0, dim))
        rows: list[np.ndarray | None] = []
        missing: list[int] = []
        for i, record in enumerate(self.kb.records):
            if record.embedding is not None:
                if record.checkpoint_id != self.scorer.checkpoint_id:
                    raise CheckpointMismatchError(
                        f"record {record.smiles!r} embedded under checkpoint "
                        f"{record.checkpoint_id}, scorer is {self.scorer.checkpoint_id}"
                    )
                if len(record.embedding) != dim:
                    raise KbError(f"record {record.smiles!r} embedding has wrong dimension")
                rows.append(np.asarray(record.embedding, dtype=np.float64))
            else:
                rows.append(None)
                missing.append(i)
        if missing:
            mols = [parse_smiles(self.kb.records[i].smiles) for i in missing]
            computed = self.scorer.encode_molecules(mols)
            for row_idx, record_idx in enumerate(missing):
                rows[record_idx] = computed[row_idx]
        matrix = np.stack([r for r in rows])  # type: ignore[list-item]
        norms = np.maximum(np.linalg.norm(matrix, axis=1, keepdims=True), 1e-12)
        return matrix / norms

    def topk_by_vector(
        self, query: np.ndarray, k: int
    ) -> list[tuple[SubstructureRecord, float]]:
        if k <= 0 or not self.kb.records:
            return []
        q = np.asarray(query, dtype=np.float64)
        q = q / max(np.linalg.norm(q), 1e-12)
        sims = self._matrix @ q
        order = sorted(range(len(sims)), key=lambda i: (-sims[i], i))[:k]
        return [(self.kb.records[i], float(sims[i])) for i in order]

    def topk(self, tokens: SpectrumTokens, k: int) -> list[tuple[SubstructureRecord, float]]:
        if k <= 0:
            return []
        return self.topk_by_vector(self.scorer.encode_spectrum(tokens), k)


def retrieve_topk(
    kb: KnowledgeBase, tokens: SpectrumTokens, k: int, scorer
) -> list[tuple[SubstructureRecord, float]]:
    """One-shot top-k retrieval; build a Retriever for repeated queries."""
    if k <= 0:
        return []
    return Retriever(kb, scorer).topk(tokens, k)


def topk_by_stub_embeddings(
    kb: KnowledgeBase, query: np.ndarray, k: int
) -> list[tuple[SubstructureRecord, float]]:
    """Rank records by cosine against a raw query vector using only the
    embeddings stored on the records (no scorer involved)."""
    if k <= 0 or not kb.records:
        return []
    if any(record.embedding is None for record in kb.records):
        raise KbError("all records need stored embeddings for stub retrieval")
    matrix = np.asarray([record.embedding for record in kb.records], dtype=np.float64)
    matrix = matrix / np.maximum(np.linalg.norm(matrix, axis=1, keepdims=True), 1e-12)
    q = np.asarray(query, dtype=np.float64)
    q = q / max(np.linalg.norm(q), 1e-12)
    sims = matrix @ q
    order = sorted(range(len(sims)), key=lambda i: (-sims[i], i))[:k]
    return [(kb.records[i], float(sims[i])) for i in order]
