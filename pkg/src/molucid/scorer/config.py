"""Scorer hyperparameters."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields


class ConfigError(ValueError):
    pass


#: Atom feature layout: 12-element table + other, degree 0-5, aromatic flag,
#: charge bucket -2..+2, implicit-H bucket 0-4.
ELEMENT_TABLE = ("B", "C", "N", "O", "F", "Si", "P", "S", "Cl", "Se", "Br", "I")
ATOM_FEATURE_DIM = (len(ELEMENT_TABLE) + 1) + 6 + 1 + 5 + 5


@dataclass(frozen=True)
class ScorerConfig:
    gin_layers: int = 5
    gin_width: int = 300
    fingerprint_dim: int = 2215
    embed_dim: int = 256
    transformer_layers: int = 2
    transformer_width: int = 256
    attention_heads: int = 4
    ffn_hidden: int = 512
    c_shift_vocab: int = 2500
    h_shift_vocab: int = 1500
    split_vocab: int = 75
    coupling_vocab: int = 200
    tau: float = 0.07
    epochs: int = 100
    learning_rate: float = 1e-3
    batch_size: int = 64
    seed: int = 0

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name != "seed" and isinstance(value, int) and value <= 0:
                raise ConfigError(f"{f.name} must be positive, got {value}")
        if self.tau <= 0:
            raise ConfigError("tau must be positive")
        if self.transformer_width % self.attention_heads != 0:
            raise ConfigError("transformer_width must be divisible by attention_heads")
        if self.transformer_width != self.embed_dim:
            # All four token embeddings share the transformer width, and the
            # mean-pooled spectrum embedding must match the molecule side.
            raise ConfigError("transformer_width must equal embed_dim")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ScorerConfig":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})


def desk_config(**overrides) -> ScorerConfig:
    """Small configuration for laptop-scale training runs and tests."""
    base = dict(
        gin_layers=3,
        gin_width=96,
        embed_dim=96,
        transformer_layers=2,
        transformer_width=96,
        attention_heads=4,
        ffn_hidden=192,
        epochs=40,
        batch_size=32,
        learning_rate=1e-3,
    )
    base.update(overrides)
    return ScorerConfig(**base)
