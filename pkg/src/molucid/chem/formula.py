"""Molecular formulas: computation from a molecule, Hill-order text I/O."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .elements import ELEMENTS
from .graph import ChemError, Molecule


class FormulaSyntaxError(ChemError):
    """Formula text with bad grammar or an unknown element symbol."""


_TOKEN_RE = re.compile(r"([A-Z][a-z]?)(\d*)")


@dataclass(frozen=True)
class Formula:
    """Element -> count map with Hill-order serialization."""

    items: tuple[tuple[str, int], ...]

    @classmethod
    def from_counts(cls, counts: dict[str, int]) -> "Formula":
        cleaned = {el: n for el, n in counts.items() if n > 0}
        return cls(tuple(sorted(cleaned.items())))

    @property
    def counts(self) -> dict[str, int]:
        return dict(self.items)

    def __str__(self) -> str:
        counts = self.counts
        parts: list[str] = []

        def emit(element: str) -> None:
            n = counts.pop(element, 0)
            if n:
                parts.append(element if n == 1 else f"{element}{n}")

        if "C" in counts:
            emit("C")
            emit("H")
        for element in sorted(counts):
            emit(element)
        return "".join(parts)


def molecular_formula(mol: Molecule) -> Formula:
    """Element counts including implicit hydrogens; charge is ignored."""
    counts: dict[str, int] = {}
    for atom in mol.atoms:
        counts[atom.element] = counts.get(atom.element, 0) + 1
        if atom.hydrogens:
            counts["H"] = counts.get("H", 0) + atom.hydrogens
    return Formula.from_counts(counts)


def parse_formula(text: str) -> Formula:
    """Parse Hill-style formula text like ``C6H10O3``."""
    if not text or not text.strip():
        raise FormulaSyntaxError("empty formula")
    text = text.strip()
    counts: dict[str, int] = {}
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.start() != pos or not match.group(1):
            raise FormulaSyntaxError(f"bad formula token at position {pos} in {text!r}")
        element, digits = match.groups()
        if element not in ELEMENTS:
            raise FormulaSyntaxError(f"unknown element {element!r} in {text!r}")
        count = int(digits) if digits else 1
        if count < 1:
            raise FormulaSyntaxError(f"zero count for {element} in {text!r}")
        counts[element] = counts.get(element, 0) + count
        pos = match.end()
    return Formula.from_counts(counts)
