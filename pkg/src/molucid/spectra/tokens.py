"""Discretization of NMR features into token IDs.

Vocabulary sizes: 2500 carbon-shift bins (0.1 ppm over 0-250), 1500
hydrogen-shift bins (0.01 ppm over 0-15), 75 splitting-pattern IDs
(0 = unknown), 200 coupling IDs (0 = absent, then 0.1 Hz bins over 0-19.9).
"""

from __future__ import annotations

import math

from .model import NmrSpectrum, SpectrumTokens

C_SHIFT_VOCAB = 2500
H_SHIFT_VOCAB = 1500
SPLIT_VOCAB = 75
COUPLING_VOCAB = 200

#: Known splitting patterns; IDs start at 1 (0 is the unknown sentinel).
SPLIT_PATTERNS = (
    "s",
    "d",
    "t",
    "q",
    "quint",
    "sext",
    "sept",
    "m",
    "br",
    "brs",
    "brd",
    "dd",
    "dt",
    "td",
    "dq",
    "qd",
    "tt",
    "qq",
    "ddd",
    "ddt",
    "dtd",
    "tdd",
    "dddd",
    "quin",
    "hept",
    "oct",
    "non",
)

assert len(SPLIT_PATTERNS) + 1 <= SPLIT_VOCAB

_SPLIT_IDS = {name: i + 1 for i, name in enumerate(SPLIT_PATTERNS)}

_BIN_EPS = 1e-9  # absorbs float noise just below bin boundaries


def _bin(value: float, scale: float, max_token: int) -> int:
    if value < 0:
        value = 0.0
    return min(int(math.floor(value * scale + _BIN_EPS)), max_token)


def c_shift_token(shift: float) -> int:
    return _bin(shift, 10.0, C_SHIFT_VOCAB - 1)


def h_shift_token(shift: float) -> int:
    return _bin(shift, 100.0, H_SHIFT_VOCAB - 1)


def split_token(pattern: str) -> int:
    return _SPLIT_IDS.get(pattern.strip().lower(), 0)


def coupling_token(coupling: float | None) -> int:
    if coupling is None:
        return 0
    return 1 + _bin(coupling, 10.0, COUPLING_VOCAB - 2)


def tokenize(spectrum: NmrSpectrum) -> SpectrumTokens:
    """Expand peaks by multiplicity and discretize into token IDs."""
    carbon: list[int] = []
    for peak in spectrum.carbon:
        carbon.extend([c_shift_token(peak.shift)] * peak.count)
    hydrogen: list[tuple[int, int, int]] = []
    unknown = 0
    for peak in spectrum.hydrogen:
        split = split_token(peak.pattern)
        if split == 0:
            unknown += peak.count
        triple = (h_shift_token(peak.shift), split, coupling_token(peak.coupling))
        hydrogen.extend([triple] * peak.count)
    return SpectrumTokens(tuple(carbon), tuple(hydrogen), unknown_splits=unknown)
