"""Textual NMR peak-list parsing and serialization.

Grammar (clauses separated by commas outside parentheses):

    C-NMR clause:  <shift> (<n>C, <pattern>)
    H-NMR clause:  <shift> (<n>H, <pattern>[, J = <x>[, <y>...] Hz]...)

Multiple coupling constants may appear; only the first is retained.
"""

from __future__ import annotations

import re

from .model import (
    CarbonPeak,
    HydrogenPeak,
    NmrSpectrum,
    SpectrumSyntaxError,
    clamp_c_shift,
    clamp_h_shift,
)

_C_CLAUSE_RE = re.compile(
    r"^\s*(?P<shift>-?\d+(?:\.\d+)?)\s*\(\s*(?P<count>\d+)\s*C\s*,\s*(?P<pattern>[A-Za-z]+)\s*\)\s*$"
)
_H_CLAUSE_RE = re.compile(
    r"^\s*(?P<shift>-?\d+(?:\.\d+)?)\s*\(\s*(?P<count>\d+)\s*H\s*,\s*(?P<pattern>[A-Za-z]+)"
    r"(?P<rest>(?:\s*,[^()]*)?)\s*\)\s*$"
)
_J_VALUE_RE = re.compile(r"[-+]?\d+(?:\.\d+)?")


def _split_clauses(text: str) -> list[str]:
    clauses: list[str] = []
    depth = 0
    current: list[str] = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise SpectrumSyntaxError("unbalanced parentheses")
        if ch == "," and depth == 0:
            clauses.append("".join(current))
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise SpectrumSyntaxError("unbalanced parentheses")
    clauses.append("".join(current))
    return clauses


def parse_cnmr(text: str) -> tuple[CarbonPeak, ...]:
    """Parse C-NMR text like ``9.1 (2C, s), 27.8 (2C, s)``."""
    if not text or not text.strip():
        raise SpectrumSyntaxError("empty C-NMR text")
    peaks: list[CarbonPeak] = []
    for index, clause in enumerate(_split_clauses(text)):
        match = _C_CLAUSE_RE.match(clause)
        if match is None:
            raise SpectrumSyntaxError(f"bad C-NMR clause {index}: {clause.strip()!r}", index)
        count = int(match.group("count"))
        if count < 1:
            raise SpectrumSyntaxError(f"zero multiplicity in clause {index}", index)
        peaks.append(
            CarbonPeak(
                shift=clamp_c_shift(float(match.group("shift"))),
                count=count,
                pattern=match.group("pattern").lower(),
            )
        )
    return tuple(peaks)


def parse_hnmr(text: str) -> tuple[HydrogenPeak, ...]:
    """Parse H-NMR text like ``5.44 (1H, d, J = 1.9 Hz)``."""
    if not text or not text.strip():
        raise SpectrumSyntaxError("empty H-NMR text")
    peaks: list[HydrogenPeak] = []
    for index, clause in enumerate(_split_clauses(text)):
        match = _H_CLAUSE_RE.match(clause)
        if match is None:
            raise SpectrumSyntaxError(f"bad H-NMR clause {index}: {clause.strip()!r}", index)
        count = int(match.group("count"))
        if count < 1:
            raise SpectrumSyntaxError(f"zero multiplicity in clause {index}", index)
        rest = match.group("rest") or ""
        coupling: float | None = None
        if rest.strip():
            if "J" not in rest and "j" not in rest:
                raise SpectrumSyntaxError(f"unrecognized clause tail in clause {index}: {rest.strip()!r}", index)
            values = _J_VALUE_RE.findall(rest)
            if not values:
                raise SpectrumSyntaxError(f"no coupling value in clause {index}", index)
            coupling = float(values[0])
        peaks.append(
            HydrogenPeak(
                shift=clamp_h_shift(float(match.group("shift"))),
                count=count,
                pattern=match.group("pattern").lower(),
                coupling=coupling,
            )
        )
    return tuple(peaks)


def parse_spectrum(cnmr: str, hnmr: str) -> NmrSpectrum:
    return NmrSpectrum(carbon=parse_cnmr(cnmr), hydrogen=parse_hnmr(hnmr))


def format_cnmr(peaks: tuple[CarbonPeak, ...]) -> str:
    return ", ".join(f"{p.shift:.1f} ({p.count}C, {p.pattern})" for p in peaks)


def format_hnmr(peaks: tuple[HydrogenPeak, ...]) -> str:
    parts = []
    for p in peaks:
        if p.coupling is None:
            parts.append(f"{p.shift:.2f} ({p.count}H, {p.pattern})")
        else:
            parts.append(f"{p.shift:.2f} ({p.count}H, {p.pattern}, J = {p.coupling:.1f} Hz)")
    return ", ".join(parts)
