"""SMILES output and canonicalization.

Canonical form: iterative neighborhood refinement assigns atom ranks; any
remaining symmetry is broken by individualizing each member of the first
ambiguous cell in turn, and the lexicographically smallest DFS output over
all discrete labelings is the canonical string. The result depends only on
the abstract graph, never on input atom order.
"""

from __future__ import annotations

from .graph import (
    AROMATIC,
    ORGANIC_SUBSET,
    ChemError,
    Molecule,
    ValenceError,
    inferred_hydrogens,
    smallest_ring_sizes,
)

_MAX_LABELINGS = 10000


def _initial_keys(mol: Molecule) -> list[tuple]:
    ring_sizes = smallest_ring_sizes(mol)
    keys = []
    for idx, atom in enumerate(mol.atoms):
        keys.append(
            (
                atom.element,
                mol.degree(idx),
                atom.charge,
                atom.hydrogens,
                atom.aromatic,
                ring_sizes[idx],
            )
        )
    return keys


def _dense_ranks(keys: list[tuple]) -> list[int]:
    order = {key: rank for rank, key in enumerate(sorted(set(keys)))}
    return [order[key] for key in keys]


def _refine(mol: Molecule, ranks: list[int]) -> list[int]:
    while True:
        keys = []
        for idx in range(len(mol.atoms)):
            neighborhood = sorted(
                (bond.order, ranks[other]) for other, bond in mol.neighbors[idx]
            )
            keys.append((ranks[idx], tuple(neighborhood)))
        refined = _dense_ranks(keys)
        if refined == ranks:
            return ranks
        ranks = refined


def symmetry_classes(mol: Molecule) -> list[int]:
    """Stable refinement ranks; atoms sharing a rank are symmetry candidates."""
    if not mol.atoms:
        return []
    return _refine(mol, _dense_ranks(_initial_keys(mol)))


def _discrete_labelings(mol: Molecule):
    budget = [_MAX_LABELINGS]

    def gen(ranks: list[int]):
        ranks = _refine(mol, ranks)
        cells: dict[int, list[int]] = {}
        for idx, rank in enumerate(ranks):
            cells.setdefault(rank, []).append(idx)
        ambiguous = [rank for rank, members in cells.items() if len(members) > 1]
        if not ambiguous:
            budget[0] -= 1
            if budget[0] < 0:
                raise ChemError("molecule too symmetric to canonicalize")
            yield ranks
            return
        target = min(ambiguous)
        for atom in cells[target]:
            keys = [(ranks[i], 0 if i == atom else 1) for i in range(len(ranks))]
            yield from gen(_dense_ranks(keys))

    yield from gen(symmetry_classes(mol))


def _inferred_on_read(mol: Molecule, idx: int) -> int | None:
    atom = mol.atoms[idx]
    order_sum = 0
    for _, bond in mol.neighbors[idx]:
        order_sum += 1 if bond.order == AROMATIC else bond.order
    try:
        return inferred_hydrogens(atom.element, atom.aromatic, order_sum)
    except ValenceError:
        return None


def _atom_token(mol: Molecule, idx: int) -> str:
    atom = mol.atoms[idx]
    if atom.element == "*":
        return "*"
    symbol = atom.element.lower() if atom.aromatic else atom.element
    bare_ok = (
        atom.element in ORGANIC_SUBSET
        and atom.charge == 0
        and _inferred_on_read(mol, idx) == atom.hydrogens
    )
    if bare_ok:
        return symbol
    if atom.hydrogens == 0:
        hpart = ""
    elif atom.hydrogens == 1:
        hpart = "H"
    else:
        hpart = f"H{atom.hydrogens}"
    if atom.charge == 0:
        cpart = ""
    elif atom.charge == 1:
        cpart = "+"
    elif atom.charge == -1:
        cpart = "-"
    else:
        cpart = f"{'+' if atom.charge > 0 else '-'}{abs(atom.charge)}"
    return f"[{symbol}{hpart}{cpart}]"


def _bond_symbol(mol: Molecule, a: int, b: int, order: int) -> str:
    if order == AROMATIC:
        return ""
    if order == 2:
        return "="
    if order == 3:
        return "#"
    # Explicit single between two aromatic atoms, or a reader would see an
    # aromatic bond (biaryl junctions, single bonds inside odd ring systems).
    if mol.atoms[a].aromatic and mol.atoms[b].aromatic:
        return "-"
    return ""


def write_smiles(mol: Molecule, ranks: list[int] | None = None) -> str:
    """Write SMILES visiting atoms in ascending ``ranks`` order (index order
    by default). Output re-parses to a graph isomorphic to the input."""
    n = len(mol.atoms)
    if n == 0:
        raise ChemError("cannot write an empty molecule")
    if ranks is None:
        ranks = list(range(n))

    import sys

    start = min(range(n), key=lambda i: ranks[i])
    children: dict[int, list[int]] = {i: [] for i in range(n)}
    ring_bonds: list[tuple[int, int, int]] = []  # (opener, closer, order)
    seen_edges: set[tuple[int, int]] = set()
    visited: set[int] = set()

    # Single deterministic traversal (children in ascending rank order); the
    # emission pass below replays exactly this tree, so every ring-closure
    # opener is printed before its closer.
    if n + 100 > sys.getrecursionlimit():
        sys.setrecursionlimit(n + 1000)

    def explore(node: int) -> None:
        visited.add(node)
        for other, bond in sorted(mol.neighbors[node], key=lambda nb: ranks[nb[0]]):
            key = (min(node, other), max(node, other))
            if key in seen_edges:
                continue
            seen_edges.add(key)
            if other in visited:
                ring_bonds.append((other, node, bond.order))
            else:
                children[node].append(other)
                explore(other)

    explore(start)
    if len(visited) != n:
        raise ChemError("disconnected molecule cannot be written as one SMILES")
    opens: dict[int, list[int]] = {}
    closes: dict[int, list[int]] = {}
    for ring_id, (opener, closer, _) in enumerate(ring_bonds):
        opens.setdefault(opener, []).append(ring_id)
        closes.setdefault(closer, []).append(ring_id)

    digits: dict[int, int] = {}
    in_use: set[int] = set()

    def take_digit(ring_id: int) -> int:
        digit = 1
        while digit in in_use:
            digit += 1
        in_use.add(digit)
        digits[ring_id] = digit
        return digit

    def digit_text(digit: int) -> str:
        return str(digit) if digit < 10 else f"%{digit:02d}"

    out: list[str] = []

    def emit(node: int) -> None:
        out.append(_atom_token(mol, node))
        for ring_id in closes.get(node, []):
            digit = digits[ring_id]
            in_use.discard(digit)
            out.append(digit_text(digit))
        for ring_id in opens.get(node, []):
            opener, closer, order = ring_bonds[ring_id]
            out.append(_bond_symbol(mol, opener, closer, order))
            out.append(digit_text(take_digit(ring_id)))
        kids = children[node]
        for i, kid in enumerate(kids):
            bond = mol.bond_between(node, kid)
            assert bond is not None
            symbol = _bond_symbol(mol, node, kid, bond.order)
            if i < len(kids) - 1:
                out.append("(" + symbol)
                emit(kid)
                out.append(")")
            else:
                out.append(symbol)
                emit(kid)

    emit(start)
    return "".join(out)


def canonical_smiles(mol: Molecule) -> str:
    """Canonical SMILES: invariant under any atom renumbering of the graph."""
    best: str | None = None
    for ranks in _discrete_labelings(mol):
        written = write_smiles(mol, ranks)
        if best is None or written < best:
            best = written
    assert best is not None
    return best
