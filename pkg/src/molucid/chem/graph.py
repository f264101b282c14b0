"""Molecular graph model: atoms, bonds, ring perception, subgraph extraction."""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

#: Sentinel bond order for aromatic bonds (1, 2, 3 are plain orders).
AROMATIC = 4

ORGANIC_SUBSET = ("B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I")

#: Elements allowed to carry an aromatic flag.
AROMATIC_ELEMENTS = frozenset({"B", "C", "N", "O", "P", "S"})

#: Default valences used for implicit-hydrogen assignment. The smallest
#: listed valence that is >= the bond-order sum wins.
VALENCES = {
    "B": (3,),
    "C": (4,),
    "N": (3, 5),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
}


class ChemError(ValueError):
    """Base class for chemistry-layer failures."""


class SmilesSyntaxError(ChemError):
    """Malformed SMILES text (bad token, unmatched ring bond or branch)."""


class ValenceError(ChemError):
    """An atom's bond-order sum exceeds every allowed valence."""


@dataclass(frozen=True)
class Atom:
    element: str
    charge: int = 0
    aromatic: bool = False
    hydrogens: int = 0
    in_ring: bool = False


@dataclass(frozen=True)
class Bond:
    a: int
    b: int
    order: int  # 1, 2, 3 or AROMATIC

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a


@dataclass(frozen=True)
class Molecule:
    """Immutable attributed graph of heavy atoms.

    Hydrogens are implicit counts on atoms; ``smiles`` records the text the
    molecule was parsed from (or written to), purely informational.
    """

    atoms: tuple[Atom, ...]
    bonds: tuple[Bond, ...]
    smiles: str = ""

    @cached_property
    def neighbors(self) -> tuple[tuple[tuple[int, Bond], ...], ...]:
        adj: list[list[tuple[int, Bond]]] = [[] for _ in self.atoms]
        for bond in self.bonds:
            adj[bond.a].append((bond.b, bond))
            adj[bond.b].append((bond.a, bond))
        return tuple(tuple(entry) for entry in adj)

    def degree(self, idx: int) -> int:
        return len(self.neighbors[idx])

    def bond_between(self, a: int, b: int) -> Bond | None:
        for other, bond in self.neighbors[a]:
            if other == b:
                return bond
        return None

    @property
    def heavy_atom_count(self) -> int:
        return len(self.atoms)

    def total_hydrogens(self) -> int:
        return sum(atom.hydrogens for atom in self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)


def validate(mol: Molecule) -> None:
    """Check structural invariants; raises ChemError on violation."""
    n = len(mol.atoms)
    seen: set[tuple[int, int]] = set()
    for bond in mol.bonds:
        if not (0 <= bond.a < n and 0 <= bond.b < n):
            raise ChemError(f"bond endpoint out of range: {bond}")
        if bond.a == bond.b:
            raise ChemError(f"self-loop bond on atom {bond.a}")
        key = (min(bond.a, bond.b), max(bond.a, bond.b))
        if key in seen:
            raise ChemError(f"duplicate bond between atoms {key}")
        seen.add(key)
        if bond.order == AROMATIC:
            if not (mol.atoms[bond.a].aromatic and mol.atoms[bond.b].aromatic):
                raise ChemError(f"aromatic bond {key} touches a non-aromatic atom")
    for idx, atom in enumerate(mol.atoms):
        if atom.hydrogens < 0:
            raise ChemError(f"negative hydrogen count on atom {idx}")
    flags = ring_membership(mol)
    for idx, atom in enumerate(mol.atoms):
        if atom.in_ring != flags[idx]:
            raise ChemError(f"stale ring flag on atom {idx}")


def ring_membership(mol: Molecule) -> list[bool]:
    """True per atom iff the atom lies on some cycle.

    An edge lies on a cycle iff it is not a bridge; an atom is a ring atom
    iff it has at least one incident non-bridge edge.
    """
    n = len(mol.atoms)
    bridges = _bridges(mol)
    flags = [False] * n
    for bond in mol.bonds:
        key = (min(bond.a, bond.b), max(bond.a, bond.b))
        if key not in bridges:
            flags[bond.a] = True
            flags[bond.b] = True
    return flags


def _bridges(mol: Molecule) -> set[tuple[int, int]]:
    """Bridge edges via iterative Tarjan low-link."""
    n = len(mol.atoms)
    disc = [-1] * n
    low = [0] * n
    bridges: set[tuple[int, int]] = set()
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        # stack of (node, parent-edge id, neighbor iterator position)
        stack = [(root, -1, 0)]
        disc[root] = low[root] = timer
        timer += 1
        while stack:
            node, parent_edge, pos = stack[-1]
            nbrs = mol.neighbors[node]
            if pos < len(nbrs):
                stack[-1] = (node, parent_edge, pos + 1)
                other, bond = nbrs[pos]
                edge_id = id(bond)
                if edge_id == parent_edge:
                    continue
                if disc[other] == -1:
                    disc[other] = low[other] = timer
                    timer += 1
                    stack.append((other, edge_id, 0))
                else:
                    low[node] = min(low[node], disc[other])
            else:
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[node])
                    if low[node] > disc[parent]:
                        key = (min(parent, node), max(parent, node))
                        bridges.add(key)
    return bridges


def sssr(mol: Molecule) -> list[list[int]]:
    """Smallest set of smallest rings as sorted atom-index lists.

    Uses a minimum cycle basis of the bond graph. Acyclic molecules
    yield []. Ring atom order within a list is ascending, not cyclic.
    """
    import networkx as nx

    graph = nx.Graph()
    graph.add_nodes_from(range(len(mol.atoms)))
    graph.add_edges_from((b.a, b.b) for b in mol.bonds)
    rings = [sorted(cycle) for cycle in nx.minimum_cycle_basis(graph)]
    rings.sort(key=lambda r: (len(r), r))
    return rings


def smallest_ring_sizes(mol: Molecule) -> list[int]:
    """Per atom: size of the smallest SSSR ring containing it, 0 if none."""
    sizes = [0] * len(mol.atoms)
    for ring in sssr(mol):
        for idx in ring:
            if sizes[idx] == 0 or len(ring) < sizes[idx]:
                sizes[idx] = len(ring)
    return sizes


def inferred_hydrogens(element: str, aromatic: bool, bond_order_sum: int) -> int:
    """Implicit H count a bare (non-bracket) SMILES atom would receive.

    Aromatic bonds must be counted with order 1 in ``bond_order_sum``.
    Aromatic carbon contributes one electron to the ring system, leaving
    three sigma slots; aromatic heteroatoms take no implicit hydrogens.
    Raises ValenceError when the bond sum exceeds every allowed valence.
    """
    if aromatic:
        if element == "C":
            if bond_order_sum > 4:
                raise ValenceError(f"aromatic C with bond sum {bond_order_sum}")
            return max(3 - bond_order_sum, 0)
        return 0
    valences = VALENCES.get(element)
    if valences is None:
        return 0
    for valence in valences:
        if valence >= bond_order_sum:
            return valence - bond_order_sum
    raise ValenceError(
        f"{element} with bond-order sum {bond_order_sum} exceeds valence {max(valences)}"
    )


def _bond_order_sum(mol: Molecule, idx: int) -> int:
    total = 0
    for _, bond in mol.neighbors[idx]:
        total += 1 if bond.order == AROMATIC else bond.order
    return total


def induced_subgraph(mol: Molecule, atom_indices: set[int] | frozenset[int]) -> Molecule:
    """Induced subgraph over ``atom_indices`` as a standalone Molecule.

    Cut bonds are healed with implicit hydrogens: hydrogen counts of
    uncharged non-aromatic atoms are re-derived from the remaining bonds.
    Aromatic atoms that keep at least one aromatic bond keep their original
    hydrogen count; ones that lose all aromatic bonds (e.g. the attachment
    atom of a neighboring aromatic ring) are demoted to plain atoms.
    """
    keep = sorted(atom_indices)
    remap = {old: new for new, old in enumerate(keep)}
    bonds = tuple(
        Bond(remap[b.a], remap[b.b], b.order)
        for b in mol.bonds
        if b.a in atom_indices and b.b in atom_indices
    )
    atoms: list[Atom] = []
    for old in keep:
        atoms.append(mol.atoms[old])
    sub = Molecule(tuple(atoms), bonds)

    fixed: list[Atom] = []
    for new_idx, atom in enumerate(sub.atoms):
        aromatic = atom.aromatic and any(
            bond.order == AROMATIC for _, bond in sub.neighbors[new_idx]
        )
        hydrogens = atom.hydrogens
        if atom.charge == 0 and not aromatic:
            hydrogens = inferred_hydrogens(
                atom.element, False, _bond_order_sum(sub, new_idx)
            )
        fixed.append(replace(atom, aromatic=aromatic, hydrogens=hydrogens, in_ring=False))
    sub = Molecule(tuple(fixed), bonds)
    flags = ring_membership(sub)
    final = tuple(replace(a, in_ring=flags[i]) for i, a in enumerate(sub.atoms))
    return Molecule(final, bonds)


def permute_atoms(mol: Molecule, perm: list[int]) -> Molecule:
    """Relabel atoms so new index ``perm[i]`` holds old atom ``i``."""
    if sorted(perm) != list(range(len(mol.atoms))):
        raise ChemError("not a permutation of atom indices")
    atoms: list[Atom | None] = [None] * len(mol.atoms)
    for old, new in enumerate(perm):
        atoms[new] = mol.atoms[old]
    bonds = tuple(Bond(perm[b.a], perm[b.b], b.order) for b in mol.bonds)
    return Molecule(tuple(atoms), bonds)  # type: ignore[arg-type]
