"""Molecule-spectrum reward model: encoders, loss, training, checkpoints."""

from .api import LoadedScorer
from .checkpoint import (
    CheckpointError,
    FormatError,
    ScorerCheckpoint,
    ShapeMismatchError,
    load_checkpoint,
    make_checkpoint,
    save_checkpoint,
)
from .config import ATOM_FEATURE_DIM, ELEMENT_TABLE, ConfigError, ScorerConfig, desk_config
from .encoders import (
    EmptyMoleculeError,
    EmptySpectrumError,
    EncoderError,
    MoleculeEncoder,
    SpectrumEncoder,
    atom_features,
    build_molecule_batch,
    build_spectrum_batch,
    fingerprint_vector,
)
from .loss import BatchTooSmallError, cosine, nt_xent_loss
from .train import Adam, DivergenceError, train

__all__ = [
    "ATOM_FEATURE_DIM",
    "Adam",
    "BatchTooSmallError",
    "CheckpointError",
    "ConfigError",
    "DivergenceError",
    "ELEMENT_TABLE",
    "EmptyMoleculeError",
    "EmptySpectrumError",
    "EncoderError",
    "FormatError",
    "LoadedScorer",
    "MoleculeEncoder",
    "ScorerCheckpoint",
    "ScorerConfig",
    "ShapeMismatchError",
    "SpectrumEncoder",
    "atom_features",
    "build_molecule_batch",
    "build_spectrum_batch",
    "cosine",
    "desk_config",
    "fingerprint_vector",
    "load_checkpoint",
    "make_checkpoint",
    "nt_xent_loss",
    "save_checkpoint",
    "train",
]
