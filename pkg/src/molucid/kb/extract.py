"""Substructure extraction: ring systems and chain neighborhoods.

Ring substructures: smallest rings are merged when they share two or more
atoms; each merged system is extended with every atom bonded to it and
returned as an induced subgraph. Chain substructures: the induced two-hop
neighborhood of each non-ring carbon, discarding any candidate that
touches a ring atom.
"""

from __future__ import annotations

from ..chem.graph import Molecule, induced_subgraph, sssr
from ..chem.writer import canonical_smiles


def _ring_systems(mol: Molecule) -> list[set[int]]:
    """Transitive closure of the pairwise share-two-or-more-atoms relation."""
    rings = [set(ring) for ring in sssr(mol)]
    parent = list(range(len(rings)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(rings)):
        for j in range(i + 1, len(rings)):
            if len(rings[i] & rings[j]) >= 2:
                parent[find(i)] = find(j)

    systems: dict[int, set[int]] = {}
    for i, ring in enumerate(rings):
        systems.setdefault(find(i), set()).update(ring)
    return list(systems.values())


def extract_ring_substructures(mol: Molecule) -> set[str]:
    """Canonical SMILES of each extended ring system; {} for acyclic input."""
    out: set[str] = set()
    for system in _ring_systems(mol):
        extended = set(system)
        for idx in system:
            extended.update(other for other, _ in mol.neighbors[idx])
        out.add(canonical_smiles(induced_subgraph(mol, extended)))
    return out


def extract_chain_substructures(mol: Molecule) -> set[str]:
    """Canonical SMILES of two-hop neighborhoods of non-ring carbons."""
    out: set[str] = set()
    for idx, atom in enumerate(mol.atoms):
        if atom.element != "C" or atom.in_ring:
            continue
        hood = {idx}
        for one_hop, _ in mol.neighbors[idx]:
            hood.add(one_hop)
            hood.update(two_hop for two_hop, _ in mol.neighbors[one_hop])
        if any(mol.atoms[i].in_ring for i in hood):
            continue
        out.add(canonical_smiles(induced_subgraph(mol, hood)))
    return out


def extract_substructures(mol: Molecule) -> set[str]:
    return extract_ring_substructures(mol) | extract_chain_substructures(mol)
