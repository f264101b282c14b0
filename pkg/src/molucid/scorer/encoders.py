"""Molecule and spectrum encoders producing comparable embeddings.

Molecule side: a GIN stack over atom features with mean readout, fused via
MLPs with a fingerprint branch. Spectrum side: summed token embeddings for
each carbon/hydrogen atom through a small pre-norm transformer with masked
mean pooling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..chem.fingerprints import fingerprint_set
from ..chem.graph import Molecule
from ..spectra.model import SpectrumTokens
from .config import ATOM_FEATURE_DIM, ELEMENT_TABLE, ScorerConfig
from .layers import Embedding, GinLayer, Module, TransformerEncoder, mlp


class EncoderError(ValueError):
    pass


class EmptyMoleculeError(EncoderError):
    pass


class EmptySpectrumError(EncoderError):
    pass


_ELEMENT_INDEX = {el: i for i, el in enumerate(ELEMENT_TABLE)}


def atom_features(mol: Molecule) -> np.ndarray:
    """Per-atom feature rows: element one-hot (+other), degree, aromatic,
    charge bucket, implicit-H bucket."""
    n = len(mol.atoms)
    out = np.zeros((n, ATOM_FEATURE_DIM))
    n_el = len(ELEMENT_TABLE) + 1
    for i, atom in enumerate(mol.atoms):
        out[i, _ELEMENT_INDEX.get(atom.element, n_el - 1)] = 1.0
        out[i, n_el + min(mol.degree(i), 5)] = 1.0
        out[i, n_el + 6] = 1.0 if atom.aromatic else 0.0
        out[i, n_el + 7 + min(max(atom.charge, -2), 2) + 2] = 1.0
        out[i, n_el + 12 + min(atom.hydrogens, 4)] = 1.0
    return out


def fingerprint_vector(mol: Molecule) -> np.ndarray:
    fps = fingerprint_set(mol).concatenated()
    vec = np.zeros(fps.size)
    vec[sorted(fps.bits)] = 1.0
    return vec


@dataclass
class MoleculeBatch:
    features: np.ndarray  # (N_total, F)
    edges: np.ndarray  # (2, E) directed, both directions
    graph_ids: np.ndarray  # (N_total,)
    n_graphs: int
    fingerprints: np.ndarray  # (B, fingerprint_dim)


def build_molecule_batch(
    mols: list[Molecule],
    features: list[np.ndarray] | None = None,
    fingerprints: list[np.ndarray] | None = None,
) -> MoleculeBatch:
    """Concatenate graphs into one disjoint batch. Precomputed per-molecule
    features/fingerprints may be passed to avoid recomputation in training."""
    if not mols:
        raise EmptyMoleculeError("empty molecule batch")
    feats = []
    edge_list: list[tuple[int, int]] = []
    graph_ids = []
    fps = []
    offset = 0
    for g, mol in enumerate(mols):
        if len(mol.atoms) == 0:
            raise EmptyMoleculeError(f"molecule {g} has no atoms")
        feats.append(features[g] if features is not None else atom_features(mol))
        fps.append(
            fingerprints[g] if fingerprints is not None else fingerprint_vector(mol)
        )
        for bond in mol.bonds:
            edge_list.append((offset + bond.a, offset + bond.b))
            edge_list.append((offset + bond.b, offset + bond.a))
        graph_ids.extend([g] * len(mol.atoms))
        offset += len(mol.atoms)
    edges = (
        np.array(edge_list, dtype=np.int64).T
        if edge_list
        else np.zeros((2, 0), dtype=np.int64)
    )
    return MoleculeBatch(
        features=np.concatenate(feats, axis=0),
        edges=edges,
        graph_ids=np.array(graph_ids, dtype=np.int64),
        n_graphs=len(mols),
        fingerprints=np.stack(fps),
    )


class MoleculeEncoder(Module):
    def __init__(self, cfg: ScorerConfig, rng: np.random.Generator):
        super().__init__()
        self.cfg = cfg
        width = cfg.gin_width
        self.gin_layers = [
            self.child(
                f"gin{i}",
                GinLayer(ATOM_FEATURE_DIM if i == 0 else width, width, rng),
            )
            for i in range(cfg.gin_layers)
        ]
        self.fp_mlp = self.child(
            "fp_mlp", mlp([cfg.fingerprint_dim, width, width], rng)
        )
        self.fuse_mlp = self.child(
            "fuse_mlp", mlp([2 * width, width, cfg.embed_dim], rng)
        )
        self._cache: tuple | None = None

    def forward(self, batch: MoleculeBatch) -> np.ndarray:
        h = batch.features
        for layer in self.gin_layers:
            h = layer.forward(h, batch.edges)
        counts = np.bincount(batch.graph_ids, minlength=batch.n_graphs).astype(np.float64)
        readout = np.zeros((batch.n_graphs, h.shape[1]))
        np.add.at(readout, batch.graph_ids, h)
        readout /= counts[:, None]
        fp = self.fp_mlp.forward(batch.fingerprints)
        fused = np.concatenate([readout, fp], axis=1)
        self._cache = (batch, counts, h.shape[1])
        return self.fuse_mlp.forward(fused)

    def backward(self, dout: np.ndarray) -> None:
        assert self._cache is not None
        batch, counts, width = self._cache
        dfused = self.fuse_mlp.backward(dout)
        dreadout = dfused[:, :width]
        dfp = dfused[:, width:]
        self.fp_mlp.backward(dfp)
        dh = dreadout[batch.graph_ids] / counts[batch.graph_ids][:, None]
        for layer in reversed(self.gin_layers):
            dh = layer.backward(dh)


@dataclass
class SpectrumBatch:
    c_ids: np.ndarray  # (B, T) carbon shift token ids, 0 where inactive
    h_shift_ids: np.ndarray  # (B, T)
    h_split_ids: np.ndarray  # (B, T)
    h_coup_ids: np.ndarray  # (B, T)
    carbon_mask: np.ndarray  # (B, T) bool
    hydrogen_mask: np.ndarray  # (B, T) bool

    @property
    def valid_mask(self) -> np.ndarray:
        return self.carbon_mask | self.hydrogen_mask


def build_spectrum_batch(token_lists: list[SpectrumTokens]) -> SpectrumBatch:
    if not token_lists:
        raise EmptySpectrumError("empty spectrum batch")
    lengths = [len(t) for t in token_lists]
    if any(length == 0 for length in lengths):
        raise EmptySpectrumError("spectrum with no tokens")
    b, t_max = len(token_lists), max(lengths)
    c_ids = np.zeros((b, t_max), dtype=np.int64)
    h_shift = np.zeros((b, t_max), dtype=np.int64)
    h_split = np.zeros((b, t_max), dtype=np.int64)
    h_coup = np.zeros((b, t_max), dtype=np.int64)
    c_mask = np.zeros((b, t_max), dtype=bool)
    h_mask = np.zeros((b, t_max), dtype=bool)
    for i, tokens in enumerate(token_lists):
        nc = len(tokens.carbon)
        c_ids[i, :nc] = tokens.carbon
        c_mask[i, :nc] = True
        for j, (shift, split, coup) in enumerate(tokens.hydrogen):
            h_shift[i, nc + j] = shift
            h_split[i, nc + j] = split
            h_coup[i, nc + j] = coup
            h_mask[i, nc + j] = True
    return SpectrumBatch(c_ids, h_shift, h_split, h_coup, c_mask, h_mask)


class SpectrumEncoder(Module):
    def __init__(self, cfg: ScorerConfig, rng: np.random.Generator):
        super().__init__()
        self.cfg = cfg
        dim = cfg.transformer_width
        self.c_shift = self.child("c_shift", Embedding(cfg.c_shift_vocab, dim, rng))
        self.h_shift = self.child("h_shift", Embedding(cfg.h_shift_vocab, dim, rng))
        self.h_split = self.child("h_split", Embedding(cfg.split_vocab, dim, rng))
        self.h_coup = self.child("h_coup", Embedding(cfg.coupling_vocab, dim, rng))
        self.transformer = self.child(
            "transformer",
            TransformerEncoder(
                dim, cfg.transformer_layers, cfg.attention_heads, cfg.ffn_hidden, rng
            ),
        )
        self._cache: SpectrumBatch | None = None

    def forward(self, batch: SpectrumBatch) -> np.ndarray:
        c_emb = self.c_shift.forward(batch.c_ids) * batch.carbon_mask[:, :, None]
        h_emb = (
            self.h_shift.forward(batch.h_shift_ids)
            + self.h_split.forward(batch.h_split_ids)
            + self.h_coup.forward(batch.h_coup_ids)
        ) * batch.hydrogen_mask[:, :, None]
        self._cache = batch
        return self.transformer.forward(c_emb + h_emb, batch.valid_mask)

    def backward(self, dout: np.ndarray) -> None:
        assert self._cache is not None
        batch = self._cache
        dx = self.transformer.backward(dout)
        self.c_shift.backward(dx * batch.carbon_mask[:, :, None])
        dh = dx * batch.hydrogen_mask[:, :, None]
        self.h_shift.backward(dh)
        self.h_split.backward(dh)
        self.h_coup.backward(dh)
