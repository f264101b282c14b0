"""Subgraph pattern matching over molecular graphs.

Pattern semantics (deliberately simpler than SMARTS, documented here and
pinned by tests):

* uppercase pattern atoms match any atom of that element, aromatic or not;
  lowercase atoms match aromatic atoms only; ``*`` matches any atom;
* bracket pattern atoms additionally constrain the exact hydrogen count and
  formal charge (``[CH3]`` is a methyl carbon, ``[C]`` a carbon with no H);
* a single/default pattern bond matches single or aromatic target bonds;
  ``=`` and ``#`` match exactly; an aromatic pattern bond matches aromatic.

Matches are subgraph monomorphisms: extra target bonds are allowed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .graph import AROMATIC, Molecule
from .parser import parse_pattern_smiles


@dataclass(frozen=True)
class _PatternAtom:
    element: str  # "*" for wildcard
    aromatic_only: bool
    require_h: int | None
    require_charge: int | None


@dataclass(frozen=True)
class Pattern:
    smiles: str
    atoms: tuple[_PatternAtom, ...]
    bonds: tuple[tuple[int, int, frozenset[int]], ...]

    def __len__(self) -> int:
        return len(self.atoms)


_SINGLE_OK = frozenset({1, AROMATIC})


def compile_pattern(smiles: str) -> Pattern:
    mol, bracket = parse_pattern_smiles(smiles)
    atoms = tuple(
        _PatternAtom(
            element=atom.element,
            aromatic_only=atom.aromatic,
            require_h=atom.hydrogens if bracket[i] else None,
            require_charge=atom.charge if bracket[i] else None,
        )
        for i, atom in enumerate(mol.atoms)
    )
    bonds = []
    for bond in mol.bonds:
        if bond.order == 1:
            allowed = _SINGLE_OK
        else:
            allowed = frozenset({bond.order})
        bonds.append((bond.a, bond.b, allowed))
    return Pattern(smiles, atoms, tuple(bonds))


@lru_cache(maxsize=512)
def cached_pattern(smiles: str) -> Pattern:
    return compile_pattern(smiles)


def _atom_ok(p: _PatternAtom, mol: Molecule, idx: int) -> bool:
    atom = mol.atoms[idx]
    if p.element != "*" and p.element != atom.element:
        return False
    if p.aromatic_only and not atom.aromatic:
        return False
    if p.require_h is not None and atom.hydrogens != p.require_h:
        return False
    if p.require_charge is not None and atom.charge != p.require_charge:
        return False
    return True


def has_substructure(target: Molecule, pattern: Pattern) -> bool:
    """True iff the pattern embeds into the target graph."""
    n_pat = len(pattern.atoms)
    if n_pat == 0:
        return True
    if n_pat > len(target.atoms):
        return False

    # Pattern adjacency and a connectivity-first assignment order.
    adj: dict[int, list[tuple[int, frozenset[int]]]] = {i: [] for i in range(n_pat)}
    for a, b, allowed in pattern.bonds:
        adj[a].append((b, allowed))
        adj[b].append((a, allowed))
    order: list[int] = []
    placed: set[int] = set()
    pending = [0]
    while pending:
        cur = pending.pop(0)
        if cur in placed:
            continue
        placed.add(cur)
        order.append(cur)
        for nxt, _ in adj[cur]:
            if nxt not in placed:
                pending.append(nxt)
    for i in range(n_pat):  # disconnected pattern pieces, if any
        if i not in placed:
            order.append(i)
            placed.add(i)

    assignment: dict[int, int] = {}
    used: set[int] = set()

    def candidates(p_idx: int):
        anchors = [(j, allowed) for j, allowed in adj[p_idx] if j in assignment]
        if anchors:
            j, _ = anchors[0]
            return [other for other, _ in target.neighbors[assignment[j]]]
        return range(len(target.atoms))

    def edges_ok(p_idx: int, t_idx: int) -> bool:
        for j, allowed in adj[p_idx]:
            if j not in assignment:
                continue
            bond = target.bond_between(t_idx, assignment[j])
            if bond is None or bond.order not in allowed:
                return False
        return True

    def extend(depth: int) -> bool:
        if depth == len(order):
            return True
        p_idx = order[depth]
        for t_idx in candidates(p_idx):
            if t_idx in used:
                continue
            if not _atom_ok(pattern.atoms[p_idx], target, t_idx):
                continue
            if not edges_ok(p_idx, t_idx):
                continue
            assignment[p_idx] = t_idx
            used.add(t_idx)
            if extend(depth + 1):
                return True
            del assignment[p_idx]
            used.discard(t_idx)
        return False

    return extend(0)
