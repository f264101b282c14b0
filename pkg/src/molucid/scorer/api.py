"""Inference over a loaded checkpoint: embeddings and reward scoring."""

from __future__ import annotations

import numpy as np

from ..chem.graph import Molecule
from ..spectra.model import SpectrumTokens
from .checkpoint import ScorerCheckpoint
from .encoders import (
    EmptyMoleculeError,
    EmptySpectrumError,
    MoleculeEncoder,
    SpectrumEncoder,
    build_molecule_batch,
    build_spectrum_batch,
)
from .loss import cosine


class LoadedScorer:
    """Immutable wrapper around a checkpoint; safe for concurrent readers."""

    def __init__(self, ckpt: ScorerCheckpoint):
        self.checkpoint = ckpt
        rng = np.random.default_rng(0)
        self._mol_enc = MoleculeEncoder(ckpt.config, rng)
        self._spec_enc = SpectrumEncoder(ckpt.config, rng)
        self._mol_enc.load_params(
            {k[len("mol."):]: v for k, v in ckpt.params.items() if k.startswith("mol.")}
        )
        self._spec_enc.load_params(
            {k[len("spec."):]: v for k, v in ckpt.params.items() if k.startswith("spec.")}
        )

    @property
    def checkpoint_id(self) -> str:
        return self.checkpoint.checkpoint_id

    def encode_molecule(self, mol: Molecule) -> np.ndarray:
        if len(mol.atoms) == 0:
            raise EmptyMoleculeError("cannot encode an empty molecule")
        return self.encode_molecules([mol])[0]

    def encode_molecules(self, mols: list[Molecule]) -> np.ndarray:
        return self._mol_enc.forward(build_molecule_batch(mols))

    def encode_spectrum(self, tokens: SpectrumTokens) -> np.ndarray:
        if len(tokens) == 0:
            raise EmptySpectrumError("cannot encode an empty spectrum")
        return self.encode_spectra([tokens])[0]

    def encode_spectra(self, token_lists: list[SpectrumTokens]) -> np.ndarray:
        return self._spec_enc.forward(build_spectrum_batch(token_lists))

    def score(self, mol: Molecule, tokens: SpectrumTokens) -> float:
        """Reward in [-1, 1]: cosine between molecule and spectrum embeddings."""
        return cosine(self.encode_molecule(mol), self.encode_spectrum(tokens))
