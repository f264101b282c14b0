"""NMR spectrum data model."""

from __future__ import annotations

from dataclasses import dataclass, field

C_SHIFT_MAX = 250.0
H_SHIFT_MAX = 15.0


class SpectrumError(ValueError):
    """Base class for spectrum-layer failures."""


class SpectrumSyntaxError(SpectrumError):
    """Malformed spectrum text; carries the offending clause index."""

    def __init__(self, message: str, clause_index: int | None = None):
        super().__init__(message)
        self.clause_index = clause_index


@dataclass(frozen=True)
class CarbonPeak:
    shift: float  # ppm, clamped to [0, 250)
    count: int  # number of carbon atoms under this peak
    pattern: str = "s"


@dataclass(frozen=True)
class HydrogenPeak:
    shift: float  # ppm, clamped to [0, 15)
    count: int  # number of hydrogen atoms under this peak
    pattern: str = "s"
    coupling: float | None = None  # Hz; None for uncoupled peaks


@dataclass(frozen=True)
class NmrSpectrum:
    carbon: tuple[CarbonPeak, ...]
    hydrogen: tuple[HydrogenPeak, ...]

    def carbon_atom_count(self) -> int:
        return sum(p.count for p in self.carbon)

    def hydrogen_atom_count(self) -> int:
        return sum(p.count for p in self.hydrogen)


def clamp_c_shift(shift: float) -> float:
    return min(max(shift, 0.0), C_SHIFT_MAX - 1e-6)


def clamp_h_shift(shift: float) -> float:
    return min(max(shift, 0.0), H_SHIFT_MAX - 1e-6)


@dataclass(frozen=True)
class SpectrumTokens:
    """Discretized per-atom token IDs feeding the spectrum encoder.

    ``carbon``: one shift token per carbon atom (peaks expanded by their
    multiplicity). ``hydrogen``: one (shift, split, coupling) triple per
    hydrogen atom. ``unknown_splits`` tallies patterns that fell back to
    the unknown-split token 0.
    """

    carbon: tuple[int, ...]
    hydrogen: tuple[tuple[int, int, int], ...] = field(default_factory=tuple)
    unknown_splits: int = 0

    def __len__(self) -> int:
        return len(self.carbon) + len(self.hydrogen)
