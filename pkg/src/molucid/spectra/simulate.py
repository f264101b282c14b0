"""Rule-based NMR simulation for synthetic training pairs.

Additive-increment model: every carbon gets a base shift for its
environment class (sp3 / alkene / aromatic / carbonyl / nitrile / imine)
plus tabulated substituent increments; hydrogen shifts derive from the
attached carbon's class; splitting follows the n+1 rule over hydrogens on
adjacent carbons. Values are deterministic per (molecule, seed), with a
small seeded jitter drawn once per symmetry class. Hydrogens on
heteroatoms are not emitted. Fidelity to real spectra is not a goal; the
output only needs to be a consistent, structure-sensitive mapping.
"""

from __future__ import annotations

import random

from ..chem.graph import AROMATIC, Molecule
from ..chem.writer import symmetry_classes
from .model import (
    CarbonPeak,
    HydrogenPeak,
    NmrSpectrum,
    SpectrumError,
    clamp_c_shift,
    clamp_h_shift,
)


class NoCarbonError(SpectrumError):
    """Simulation needs at least one carbon atom."""


_C_BASE = {
    "sp3": 6.0,
    "alkene": 130.0,
    "aromatic": 127.0,
    "imine": 158.0,
    "nitrile": 118.0,
    "aldehyde": 199.0,
    "ketone": 205.0,
    "acid_ester": 171.0,
    "amide": 170.0,
}

_SP3_INCREMENT = {
    "C": 9.2, "N": 20.0, "O": 41.0, "S": 11.0, "P": 10.0,
    "F": 63.0, "Cl": 31.0, "Br": 19.0, "I": -8.0, "B": 2.0,
}

_AROMATIC_INCREMENT = {
    "C": 9.0, "N": 19.0, "O": 28.0, "S": 10.0, "P": 5.0,
    "F": 35.0, "Cl": 6.0, "Br": -5.0, "I": -32.0, "B": 2.0,
}

_ALKENE_INCREMENT = {
    "C": 6.0, "N": 12.0, "O": 18.0, "S": 8.0, "P": 4.0,
    "F": 24.0, "Cl": 3.0, "Br": -1.0, "I": -10.0, "B": 1.0,
}

_H_HETERO_INCREMENT = {
    "O": 2.6, "N": 1.7, "S": 1.3, "F": 3.2, "Cl": 2.1, "Br": 2.0, "I": 1.9, "P": 0.9,
}

_H_BASE = {"sp3": 0.9, "alkene": 5.4, "aromatic": 7.26, "imine": 7.9, "aldehyde": 9.75}

_J_BASE = {"sp3": 7.0, "aromatic": 7.8, "alkene": 11.0, "aldehyde": 2.5}

_CARBONYL = ("aldehyde", "ketone", "acid_ester", "amide")


def _carbon_class(mol: Molecule, idx: int) -> str:
    atom = mol.atoms[idx]
    if atom.aromatic:
        return "aromatic"
    doubles = [(j, b) for j, b in mol.neighbors[idx] if b.order == 2]
    if any(b.order == 3 and mol.atoms[j].element == "N" for j, b in mol.neighbors[idx]):
        return "nitrile"
    for j, _ in doubles:
        if mol.atoms[j].element == "O":
            if atom.hydrogens >= 1:
                return "aldehyde"
            singles = [
                mol.atoms[k].element
                for k, b in mol.neighbors[idx]
                if b.order == 1
            ]
            if "N" in singles:
                return "amide"
            if "O" in singles:
                return "acid_ester"
            return "ketone"
    if any(mol.atoms[j].element == "C" for j, _ in doubles):
        return "alkene"
    if any(mol.atoms[j].element == "N" for j, _ in doubles):
        return "imine"
    return "sp3"


def _c_shift(mol: Molecule, idx: int, cls: str) -> float:
    base = _C_BASE[cls]
    if cls == "sp3":
        table = _SP3_INCREMENT
        neighbors = [j for j, _ in mol.neighbors[idx]]
    elif cls == "aromatic":
        table = _AROMATIC_INCREMENT
        neighbors = [j for j, b in mol.neighbors[idx] if b.order != AROMATIC]
    elif cls == "alkene":
        table = _ALKENE_INCREMENT
        neighbors = [j for j, b in mol.neighbors[idx] if b.order == 1]
    else:
        return base
    return base + sum(table.get(mol.atoms[j].element, 0.0) for j in neighbors)


def _h_shift(mol: Molecule, idx: int, cls: str) -> float:
    base = _H_BASE.get(cls, 2.0)
    if cls != "sp3":
        return base
    shift = base
    carbon_neighbors = 0
    for j, _ in mol.neighbors[idx]:
        element = mol.atoms[j].element
        if element == "C":
            carbon_neighbors += 1
            neighbor_cls = _carbon_class(mol, j)
            if neighbor_cls in _CARBONYL:
                shift += 1.1
            elif neighbor_cls == "aromatic":
                shift += 1.3
            elif neighbor_cls in ("alkene", "imine"):
                shift += 0.7
            elif neighbor_cls == "nitrile":
                shift += 0.9
        else:
            shift += _H_HETERO_INCREMENT.get(element, 0.8)
    shift += 0.25 * max(carbon_neighbors - 1, 0)
    return shift


def _split_pattern(n_coupled: int) -> str:
    return {0: "s", 1: "d", 2: "t", 3: "q"}.get(n_coupled, "m")


def simulate_nmr(mol: Molecule, seed: int) -> NmrSpectrum:
    """Simulate a C-NMR/H-NMR pair; deterministic per (molecule, seed)."""
    carbons = [i for i, a in enumerate(mol.atoms) if a.element == "C"]
    if not carbons:
        raise NoCarbonError("molecule has no carbon atoms")

    classes = symmetry_classes(mol)
    rng = random.Random(seed)

    # Group carbons by symmetry class so equivalent atoms share one peak
    # and one jitter draw; iterate in class-rank order for determinism.
    by_class: dict[int, list[int]] = {}
    for idx in carbons:
        by_class.setdefault(classes[idx], []).append(idx)

    c_entries: list[tuple[float, int]] = []
    h_entries: list[tuple[float, int, str, float | None]] = []
    for rank in sorted(by_class):
        members = by_class[rank]
        rep = members[0]
        cls = _carbon_class(mol, rep)
        shift = _c_shift(mol, rep, cls) + rng.uniform(-1.5, 1.5)
        c_entries.append((round(clamp_c_shift(shift), 1), len(members)))

        hydrogens = mol.atoms[rep].hydrogens
        if hydrogens == 0:
            continue
        h_shift = _h_shift(mol, rep, cls) + rng.uniform(-0.12, 0.12)
        n_coupled = sum(
            mol.atoms[j].hydrogens
            for j, _ in mol.neighbors[rep]
            if mol.atoms[j].element == "C"
        )
        pattern = _split_pattern(n_coupled)
        coupling: float | None = None
        if pattern in ("d", "t", "q"):
            coupling = _J_BASE.get(cls, 6.0) + rng.uniform(-0.5, 0.5)
            coupling = round(min(max(coupling, 0.5), 19.8), 1)
        h_entries.append(
            (round(clamp_h_shift(h_shift), 2), hydrogens * len(members), pattern, coupling)
        )

    # Merge entries that land on identical rounded values.
    c_merged: dict[float, int] = {}
    for shift, count in c_entries:
        c_merged[shift] = c_merged.get(shift, 0) + count
    h_merged: dict[tuple[float, str, float | None], int] = {}
    for shift, count, pattern, coupling in h_entries:
        key = (shift, pattern, coupling)
        h_merged[key] = h_merged.get(key, 0) + count

    carbon = tuple(
        CarbonPeak(shift=s, count=c, pattern="s") for s, c in sorted(c_merged.items())
    )
    hydrogen = tuple(
        HydrogenPeak(shift=s, count=c, pattern=p, coupling=j)
        for (s, p, j), c in sorted(
            h_merged.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2] or 0.0)
        )
    )
    return NmrSpectrum(carbon=carbon, hydrogen=hydrogen)
