"""SMILES parsing for the organic subset.

Supported: organic-subset atoms (B, C, N, O, P, S, F, Cl, Br, I), aromatic
lowercase (b, c, n, o, p, s), bracket atoms with explicit hydrogen count and
charge, branches, bond orders (- = # :), ring closures including %nn, and
directional/chirality markers which are accepted and discarded. Disconnected
structures ('.') and wildcard atoms ('*', pattern tables only) are rejected
unless explicitly enabled.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .elements import ELEMENTS
from .graph import (
    AROMATIC,
    AROMATIC_ELEMENTS,
    Atom,
    Bond,
    Molecule,
    SmilesSyntaxError,
    inferred_hydrogens,
    ring_membership,
    sssr,
)

_TWO_LETTER = ("Cl", "Br")
_SINGLE_UPPER = frozenset("BCNOPSFI")
_AROMATIC_LOWER = frozenset("bcnops")

_BRACKET_RE = re.compile(
    r"""^\[
    (?P<isotope>\d+)?
    (?P<element>[A-Z][a-z]?|[a-z]|\*)
    (?P<chiral>@{1,2}(?:TH\d|AL\d|SP\d)?)?
    (?P<hcount>H\d*)?
    (?P<charge>\+\d+|-\d+|\++|-+)?
    (?::(?P<cls>\d+))?
    \]$""",
    re.VERBOSE,
)

_BOND_ORDERS = {"-": 1, "=": 2, "#": 3, "/": 1, "\\": 1}


@dataclass
class _RawAtom:
    element: str
    aromatic: bool
    charge: int = 0
    explicit_h: int | None = None  # None: infer from valence
    bracket: bool = False


def _parse_bracket(token: str, pos: int) -> _RawAtom:
    match = _BRACKET_RE.match(token)
    if match is None:
        raise SmilesSyntaxError(f"malformed bracket atom {token!r} at position {pos}")
    symbol = match.group("element")
    aromatic = symbol.islower()
    element = "*" if symbol == "*" else symbol.capitalize()
    if aromatic and symbol not in _AROMATIC_LOWER:
        raise SmilesSyntaxError(f"{symbol!r} cannot be aromatic (position {pos})")
    if element != "*" and element not in ELEMENTS:
        raise SmilesSyntaxError(f"unknown element {element!r} at position {pos}")
    hcount = match.group("hcount")
    hydrogens = 0
    if hcount is not None:
        hydrogens = 1 if hcount == "H" else int(hcount[1:])
    charge_text = match.group("charge")
    charge = 0
    if charge_text:
        if charge_text[-1].isdigit():
            charge = int(charge_text[1:]) * (1 if charge_text[0] == "+" else -1)
        else:
            charge = len(charge_text) * (1 if charge_text[0] == "+" else -1)
    return _RawAtom(element, aromatic, charge, hydrogens, bracket=True)


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    """Yield (kind, value, position); kinds: atom, bond, open, close, ring."""
    tokens: list[tuple[str, object, int]] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "[":
            end = text.find("]", i)
            if end == -1:
                raise SmilesSyntaxError(f"unclosed bracket at position {i}")
            tokens.append(("atom", _parse_bracket(text[i : end + 1], i), i))
            i = end + 1
        elif text[i : i + 2] in _TWO_LETTER:
            tokens.append(("atom", _RawAtom(text[i : i + 2], False), i))
            i += 2
        elif ch in _SINGLE_UPPER:
            tokens.append(("atom", _RawAtom(ch, False), i))
            i += 1
        elif ch in _AROMATIC_LOWER:
            tokens.append(("atom", _RawAtom(ch.upper(), True), i))
            i += 1
        elif ch == "*":
            tokens.append(("atom", _RawAtom("*", False), i))
            i += 1
        elif ch in _BOND_ORDERS or ch == ":":
            tokens.append(("bond", ch, i))
            i += 1
        elif ch == "(":
            tokens.append(("open", None, i))
            i += 1
        elif ch == ")":
            tokens.append(("close", None, i))
            i += 1
        elif ch.isdigit():
            tokens.append(("ring", int(ch), i))
            i += 1
        elif ch == "%":
            if i + 2 >= n or not text[i + 1 : i + 3].isdigit():
                raise SmilesSyntaxError(f"malformed %nn ring closure at position {i}")
            tokens.append(("ring", int(text[i + 1 : i + 3]), i))
            i += 3
        elif ch == ".":
            raise SmilesSyntaxError("disconnected structures ('.') are not supported")
        else:
            raise SmilesSyntaxError(f"unexpected character {ch!r} at position {i}")
    return tokens


def parse_smiles(text: str) -> Molecule:
    """Parse SMILES text into a Molecule with implicit hydrogens assigned.

    Kekule-written rings that satisfy a minimal Hueckel check (C/N/O/S in
    5- or 6-rings, six pi electrons) are normalized to aromatic form so
    that e.g. C1=CC=CC=C1 and c1ccccc1 produce identical graphs.
    """
    mol, _ = _parse(text, allow_wildcard=False, pattern=False)
    return mol


def parse_pattern_smiles(text: str) -> tuple[Molecule, tuple[bool, ...]]:
    """Parse a subgraph pattern; relaxed rules plus per-atom bracket flags.

    Patterns may contain wildcard atoms ('*') and lone aromatic atoms
    outside rings; bracket flags tell the matcher which atoms carry exact
    hydrogen/charge constraints.
    """
    return _parse(text, allow_wildcard=True, pattern=True)


def _parse(
    text: str, *, allow_wildcard: bool, pattern: bool
) -> tuple[Molecule, tuple[bool, ...]]:
    if not text or not text.strip():
        raise SmilesSyntaxError("empty SMILES")
    text = text.strip()

    atoms: list[_RawAtom] = []
    bonds: list[list[int | str | None]] = []  # [a, b, symbol]
    pending: str | None = None
    anchor: int | None = None
    branch_stack: list[tuple[int, int]] = []  # (anchor, atom count at open)
    ring_open: dict[int, tuple[int, str | None, int]] = {}

    for kind, value, pos in _tokenize(text):
        if kind == "atom":
            raw = value  # type: ignore[assignment]
            assert isinstance(raw, _RawAtom)
            if raw.element == "*" and not allow_wildcard:
                raise SmilesSyntaxError("wildcard atoms are not supported here")
            idx = len(atoms)
            atoms.append(raw)
            if anchor is not None:
                bonds.append([anchor, idx, pending])
            elif pending is not None:
                raise SmilesSyntaxError(f"bond symbol with no preceding atom at {pos}")
            pending = None
            anchor = idx
        elif kind == "bond":
            if pending is not None:
                raise SmilesSyntaxError(f"dangling bond symbol before position {pos}")
            pending = value  # type: ignore[assignment]
        elif kind == "open":
            if anchor is None:
                raise SmilesSyntaxError(f"branch with no preceding atom at {pos}")
            if pending is not None:
                raise SmilesSyntaxError(f"bond symbol before branch open at {pos}")
            branch_stack.append((anchor, len(atoms)))
        elif kind == "close":
            if not branch_stack:
                raise SmilesSyntaxError(f"unmatched ')' at position {pos}")
            if pending is not None:
                raise SmilesSyntaxError(f"dangling bond symbol at branch close, {pos}")
            opened_anchor, count = branch_stack.pop()
            if len(atoms) == count:
                raise SmilesSyntaxError(f"empty branch at position {pos}")
            anchor = opened_anchor
        else:  # ring closure
            num = value  # type: ignore[assignment]
            assert isinstance(num, int)
            if anchor is None:
                raise SmilesSyntaxError(f"ring closure before any atom at {pos}")
            if num in ring_open:
                other, sym, _ = ring_open.pop(num)
                if other == anchor:
                    raise SmilesSyntaxError(f"ring bond {num} closes on itself at {pos}")
                if sym is not None and pending is not None and sym != pending:
                    raise SmilesSyntaxError(f"conflicting orders for ring bond {num}")
                bonds.append([other, anchor, sym if sym is not None else pending])
            else:
                ring_open[num] = (anchor, pending, pos)
            pending = None

    if branch_stack:
        raise SmilesSyntaxError("unclosed branch '('")
    if ring_open:
        nums = sorted(ring_open)
        raise SmilesSyntaxError(f"unmatched ring closure digits {nums}")
    if pending is not None:
        raise SmilesSyntaxError("trailing bond symbol")
    dup = set()
    for a, b, _ in bonds:
        key = (min(a, b), max(a, b))  # type: ignore[call-overload]
        if key in dup:
            raise SmilesSyntaxError(f"duplicate bond between atoms {key}")
        dup.add(key)

    mol = _finish(atoms, bonds, text, pattern=pattern)
    return mol, tuple(a.bracket for a in atoms)


def _finish(
    raw_atoms: list[_RawAtom],
    raw_bonds: list[list[int | str | None]],
    text: str,
    *,
    pattern: bool = False,
) -> Molecule:
    # Topology-only pass so default bonds between aromatic atoms can be
    # resolved: aromatic inside rings, single elsewhere (biaryl junctions).
    skeleton = Molecule(
        tuple(Atom(a.element, a.charge, a.aromatic) for a in raw_atoms),
        tuple(Bond(b[0], b[1], 1) for b in raw_bonds),  # type: ignore[arg-type]
    )
    in_ring = ring_membership(skeleton)
    ring_edges = {
        (min(b.a, b.b), max(b.a, b.b))
        for b in skeleton.bonds
        if in_ring[b.a] and in_ring[b.b]
    }
    # A ring-flagged pair may still be joined by a bridge edge (two rings
    # linked by a chain); recheck actual cycle membership per edge.
    from .graph import _bridges

    bridges = _bridges(skeleton)
    ring_edges -= bridges

    orders: list[int] = []
    for a, b, sym in raw_bonds:
        a_i, b_i = int(a), int(b)  # type: ignore[arg-type]
        both_aromatic = raw_atoms[a_i].aromatic and raw_atoms[b_i].aromatic
        key = (min(a_i, b_i), max(a_i, b_i))
        if sym is None:
            if both_aromatic and key in ring_edges:
                orders.append(AROMATIC)
            else:
                orders.append(1)
        elif sym == ":":
            if not both_aromatic:
                raise SmilesSyntaxError("':' bond between non-aromatic atoms")
            orders.append(AROMATIC)
        else:
            orders.append(_BOND_ORDERS[str(sym)])

    for idx, raw in enumerate(raw_atoms):
        if raw.aromatic and not in_ring[idx] and not pattern:
            raise SmilesSyntaxError(f"aromatic atom outside of a ring (atom {idx})")
        if raw.aromatic and raw.element not in AROMATIC_ELEMENTS:
            raise SmilesSyntaxError(f"{raw.element} cannot be aromatic (atom {idx})")

    # Implicit hydrogens from the as-written (possibly Kekule) orders.
    hydrogens: list[int] = []
    for idx, raw in enumerate(raw_atoms):
        if raw.explicit_h is not None:
            hydrogens.append(raw.explicit_h)
            continue
        order_sum = 0
        for b_idx, (a, b, _) in enumerate(raw_bonds):
            if idx in (int(a), int(b)):  # type: ignore[arg-type]
                order = orders[b_idx]
                order_sum += 1 if order == AROMATIC else order
        hydrogens.append(inferred_hydrogens(raw.element, raw.aromatic, order_sum))

    aromatic_flags = [raw.aromatic for raw in raw_atoms]
    mol = Molecule(
        tuple(
            Atom(raw.element, raw.charge, aromatic_flags[i], hydrogens[i], in_ring[i])
            for i, raw in enumerate(raw_atoms)
        ),
        tuple(
            Bond(int(a), int(b), orders[i])  # type: ignore[arg-type]
            for i, (a, b, _) in enumerate(raw_bonds)
        ),
        text,
    )
    return _aromatize_kekule(mol)


def _aromatize_kekule(mol: Molecule) -> Molecule:
    """Flip qualifying Kekule rings to aromatic atoms/bonds, keeping H counts."""
    to_flip_atoms: set[int] = set()
    to_flip_bonds: set[tuple[int, int]] = set()
    for ring in sssr(mol):
        if len(ring) not in (5, 6):
            continue
        members = set(ring)
        if all(mol.atoms[i].aromatic for i in ring):
            continue
        decision = _huckel_pi_count(mol, ring, members)
        if decision == 6:
            to_flip_atoms.update(ring)
            for bond in mol.bonds:
                if bond.a in members and bond.b in members:
                    to_flip_bonds.add((min(bond.a, bond.b), max(bond.a, bond.b)))
    if not to_flip_atoms:
        return mol
    atoms = tuple(
        Atom(a.element, a.charge, a.aromatic or i in to_flip_atoms, a.hydrogens, a.in_ring)
        for i, a in enumerate(mol.atoms)
    )
    bonds = tuple(
        Bond(b.a, b.b, AROMATIC)
        if (min(b.a, b.b), max(b.a, b.b)) in to_flip_bonds
        else b
        for b in mol.bonds
    )
    return Molecule(atoms, bonds, mol.smiles)


def _huckel_pi_count(mol: Molecule, ring: list[int], members: set[int]) -> int:
    """Pi-electron count for a candidate ring, or -1 if it cannot be aromatic.

    Each atom must either sit in exactly one double bond whose partner is a
    ring atom (contributes 1), or be a lone-pair donor: O, S, or a saturated
    N with three connections (contributes 2). Fused systems are handled by
    letting the double-bond partner be any ring atom of the molecule.
    """
    pi = 0
    for idx in ring:
        atom = mol.atoms[idx]
        if atom.element not in ("C", "N", "O", "S") or atom.charge != 0:
            return -1
        if atom.aromatic:
            # Shared edge with an already-aromatic ring: sp2, one pi electron.
            pi += 1
            continue
        doubles = [b for _, b in mol.neighbors[idx] if b.order == 2]
        if any(b.order == 3 for _, b in mol.neighbors[idx]):
            return -1
        if len(doubles) > 1:
            return -1
        if len(doubles) == 1:
            partner = doubles[0].other(idx)
            if not mol.atoms[partner].in_ring:
                return -1
            pi += 1
        else:
            if atom.element in ("O", "S"):
                pi += 2
            elif atom.element == "N" and (
                atom.hydrogens >= 1 or mol.degree(idx) == 3
            ):
                pi += 2
            else:
                return -1
    return pi
