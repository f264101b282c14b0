"""NMR parsing, tokenization, and rule-based simulation."""

from .model import (
    CarbonPeak,
    HydrogenPeak,
    NmrSpectrum,
    SpectrumError,
    SpectrumSyntaxError,
    SpectrumTokens,
)
from .parse import format_cnmr, format_hnmr, parse_cnmr, parse_hnmr, parse_spectrum
from .question import (
    ElucidationQuestion,
    load_question,
    question_from_molecule,
    save_question,
)
from .simulate import NoCarbonError, simulate_nmr
from .tokens import (
    C_SHIFT_VOCAB,
    COUPLING_VOCAB,
    H_SHIFT_VOCAB,
    SPLIT_PATTERNS,
    SPLIT_VOCAB,
    c_shift_token,
    coupling_token,
    h_shift_token,
    split_token,
    tokenize,
)

__all__ = [
    "C_SHIFT_VOCAB",
    "COUPLING_VOCAB",
    "CarbonPeak",
    "ElucidationQuestion",
    "H_SHIFT_VOCAB",
    "HydrogenPeak",
    "NmrSpectrum",
    "NoCarbonError",
    "SPLIT_PATTERNS",
    "SPLIT_VOCAB",
    "SpectrumError",
    "SpectrumSyntaxError",
    "SpectrumTokens",
    "c_shift_token",
    "coupling_token",
    "format_cnmr",
    "format_hnmr",
    "h_shift_token",
    "load_question",
    "parse_cnmr",
    "parse_hnmr",
    "parse_spectrum",
    "question_from_molecule",
    "save_question",
    "simulate_nmr",
    "split_token",
    "tokenize",
]
