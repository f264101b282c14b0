"""Contrastive training of the molecule-spectrum scorer."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..chem.graph import Molecule
from ..spectra.model import SpectrumTokens
from .checkpoint import ScorerCheckpoint, make_checkpoint
from .config import ScorerConfig
from .encoders import (
    MoleculeEncoder,
    SpectrumEncoder,
    atom_features,
    build_molecule_batch,
    build_spectrum_batch,
    fingerprint_vector,
)
from .loss import BatchTooSmallError, nt_xent_loss

logger = logging.getLogger(__name__)


class DivergenceError(RuntimeError):
    """Training loss became non-finite; carries the epoch index."""

    def __init__(self, epoch: int):
        super().__init__(f"non-finite loss at epoch {epoch}")
        self.epoch = epoch


class Adam:
    def __init__(self, params: dict[str, np.ndarray], lr: float,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.params = params
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, grads: dict[str, np.ndarray]) -> None:
        self.step_count += 1
        b1c = 1.0 - self.beta1**self.step_count
        b2c = 1.0 - self.beta2**self.step_count
        for name, param in self.params.items():
            grad = grads[name]
            self.m[name] = self.beta1 * self.m[name] + (1 - self.beta1) * grad
            self.v[name] = self.beta2 * self.v[name] + (1 - self.beta2) * grad**2
            m_hat = self.m[name] / b1c
            v_hat = self.v[name] / b2c
            param -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


@dataclass
class _PreparedPair:
    molecule: Molecule
    tokens: SpectrumTokens
    features: np.ndarray
    fingerprint: np.ndarray


def _prepare(pairs: list[tuple[Molecule, SpectrumTokens]]) -> list[_PreparedPair]:
    return [
        _PreparedPair(mol, tokens, atom_features(mol), fingerprint_vector(mol))
        for mol, tokens in pairs
    ]


def _batch_loss(
    mol_enc: MoleculeEncoder,
    spec_enc: SpectrumEncoder,
    items: list[_PreparedPair],
    tau: float,
    *,
    with_grads: bool,
) -> float:
    mol_batch = build_molecule_batch(
        [p.molecule for p in items],
        features=[p.features for p in items],
        fingerprints=[p.fingerprint for p in items],
    )
    spec_batch = build_spectrum_batch([p.tokens for p in items])
    hm = mol_enc.forward(mol_batch)
    hs = spec_enc.forward(spec_batch)
    if len(items) == 1:
        # Degenerate validation case: no in-batch negatives exist, fall back
        # to the positive alignment term alone.
        um = hm[0] / max(np.linalg.norm(hm[0]), 1e-12)
        us = hs[0] / max(np.linalg.norm(hs[0]), 1e-12)
        return float(-(um @ us) / tau)
    loss, dhm, dhs = nt_xent_loss(hm, hs, tau)
    if with_grads:
        mol_enc.backward(dhm)
        spec_enc.backward(dhs)
    return loss


def train(
    pairs: list[tuple[Molecule, SpectrumTokens]],
    val_pairs: list[tuple[Molecule, SpectrumTokens]],
    cfg: ScorerConfig,
) -> ScorerCheckpoint:
    """Adam-optimized NT-Xent training; returns the best-validation epoch's
    parameters as a checkpoint. Deterministic for a given config seed."""
    if len(pairs) < 2:
        raise BatchTooSmallError("need at least 2 training pairs")
    if len(val_pairs) < 1:
        raise BatchTooSmallError("need at least 1 validation pair")

    rng = np.random.default_rng(cfg.seed)
    mol_enc = MoleculeEncoder(cfg, rng)
    spec_enc = SpectrumEncoder(cfg, rng)

    train_items = _prepare(pairs)
    val_items = _prepare(val_pairs)

    def all_params() -> dict[str, np.ndarray]:
        out = {f"mol.{k}": v for k, v in mol_enc.named_params().items()}
        out.update({f"spec.{k}": v for k, v in spec_enc.named_params().items()})
        return out

    def all_grads() -> dict[str, np.ndarray]:
        out = {f"mol.{k}": v for k, v in mol_enc.named_grads().items()}
        out.update({f"spec.{k}": v for k, v in spec_enc.named_grads().items()})
        return out

    params = all_params()
    optimizer = Adam(params, lr=cfg.learning_rate)

    best_val = float("inf")
    best_params: dict[str, np.ndarray] | None = None
    n = len(train_items)
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        n_batches = 0
        for start in range(0, n, cfg.batch_size):
            chunk = [train_items[i] for i in order[start : start + cfg.batch_size]]
            if len(chunk) < 2:
                continue  # a trailing singleton has no in-batch negatives
            mol_enc.zero_grads()
            spec_enc.zero_grads()
            loss = _batch_loss(mol_enc, spec_enc, chunk, cfg.tau, with_grads=True)
            if not np.isfinite(loss):
                raise DivergenceError(epoch)
            optimizer.step(all_grads())
            epoch_loss += loss
            n_batches += 1
        val_loss = _batch_loss(mol_enc, spec_enc, val_items, cfg.tau, with_grads=False)
        if not np.isfinite(val_loss):
            raise DivergenceError(epoch)
        if val_loss < best_val:
            best_val = val_loss
            best_params = {k: v.copy() for k, v in params.items()}
        logger.debug(
            "epoch %d: train %.4f (%d batches), val %.4f",
            epoch, epoch_loss / max(n_batches, 1), n_batches, val_loss,
        )
    assert best_params is not None
    return make_checkpoint(cfg, best_params, best_val)
