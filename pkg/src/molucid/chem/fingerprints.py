"""Native molecular fingerprints and Tanimoto similarity.

Three deterministic bit sets per molecule:

* circular (Morgan-style) fingerprint, radius 2, hashed to 1024 bits;
* linear path fingerprint, bond paths of length 1..7, hashed to 1024 bits;
* 167 structural keys from a versioned pattern table shipped as data.

None aims for bit compatibility with any external toolkit; definitions are
pinned here and by the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .graph import AROMATIC, ChemError, Molecule
from .match import Pattern, cached_pattern, has_substructure

MORGAN_BITS = 1024
PATH_BITS = 1024
KEY_BITS = 167
TOTAL_BITS = MORGAN_BITS + PATH_BITS + KEY_BITS

_MORGAN_RADIUS = 2
_MAX_PATH_BONDS = 7

_ORDER_TEXT = {1: "-", 2: "=", 3: "#", AROMATIC: ":"}


class LengthMismatchError(ChemError):
    """Tanimoto over bit sets of different sizes."""


@dataclass(frozen=True)
class BitSet:
    size: int
    bits: frozenset[int]

    def __post_init__(self) -> None:
        if any(not (0 <= b < self.size) for b in self.bits):
            raise ChemError("bit index out of range")

    def popcount(self) -> int:
        return len(self.bits)


def tanimoto(a: BitSet, b: BitSet) -> float:
    """|intersection| / |union|; 1.0 when both sets are empty."""
    if a.size != b.size:
        raise LengthMismatchError(f"bit set sizes differ: {a.size} vs {b.size}")
    union = a.bits | b.bits
    if not union:
        return 1.0
    return len(a.bits & b.bits) / len(union)


@dataclass(frozen=True)
class FingerprintSet:
    morgan: BitSet
    path: BitSet
    keys: BitSet

    def concatenated(self) -> BitSet:
        bits = set(self.morgan.bits)
        bits.update(b + MORGAN_BITS for b in self.path.bits)
        bits.update(b + MORGAN_BITS + PATH_BITS for b in self.keys.bits)
        return BitSet(TOTAL_BITS, frozenset(bits))


def _fnv1a(data: bytes) -> int:
    value = 0xCBF29CE484222325
    for byte in data:
        value ^= byte
        value = (value * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return value


def _hash_text(text: str) -> int:
    return _fnv1a(text.encode("utf-8"))


def morgan_bits(mol: Molecule, radius: int = _MORGAN_RADIUS, nbits: int = MORGAN_BITS) -> BitSet:
    """Circular fingerprint over iteratively hashed atom environments."""
    invariants = [
        _hash_text(
            f"{atom.element}|{mol.degree(i)}|{atom.charge}|{atom.hydrogens}"
            f"|{int(atom.aromatic)}|{int(atom.in_ring)}"
        )
        for i, atom in enumerate(mol.atoms)
    ]
    identifiers = set(invariants)
    for _ in range(radius):
        updated = []
        for i in range(len(mol.atoms)):
            env = sorted(
                (bond.order, invariants[other]) for other, bond in mol.neighbors[i]
            )
            updated.append(_hash_text(repr((invariants[i], tuple(env)))))
        invariants = updated
        identifiers.update(invariants)
    return BitSet(nbits, frozenset(ident % nbits for ident in identifiers))


def path_bits(mol: Molecule, max_bonds: int = _MAX_PATH_BONDS, nbits: int = PATH_BITS) -> BitSet:
    """Linear-path fingerprint: each simple bond path of length 1..max_bonds
    is encoded as element/bond text (smaller of the two directions) and hashed."""
    labels = [
        atom.element.lower() if atom.aromatic else atom.element for atom in mol.atoms
    ]
    codes: set[str] = set()

    def walk(path: list[int], text_parts: list[str]) -> None:
        last = path[-1]
        for other, bond in mol.neighbors[last]:
            if other in path:
                continue
            parts = text_parts + [_ORDER_TEXT[bond.order], labels[other]]
            forward = "".join(parts)
            backward = "".join(reversed(parts))
            codes.add(min(forward, backward))
            if (len(parts) - 1) // 2 < max_bonds:
                path.append(other)
                walk(path, parts)
                path.pop()

    for start in range(len(mol.atoms)):
        walk([start], [labels[start]])
    return BitSet(nbits, frozenset(_hash_text(code) % nbits for code in codes))


@lru_cache(maxsize=1)
def structural_key_table() -> tuple[tuple[int, str, Pattern], ...]:
    """The bundled versioned key table: (index, name, compiled pattern)."""
    text = resources.files("molucid.chem").joinpath("data/structural_keys.tsv").read_text()
    entries: list[tuple[int, str, Pattern]] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ChemError(f"structural key line {line_no}: expected 3 fields")
        index, name, smiles = fields
        entries.append((int(index), name, cached_pattern(smiles)))
    if len(entries) != KEY_BITS:
        raise ChemError(f"structural key table has {len(entries)} entries, expected {KEY_BITS}")
    if [e[0] for e in entries] != list(range(KEY_BITS)):
        raise ChemError("structural key indices must be 0..166 in order")
    return tuple(entries)


def key_bits(mol: Molecule) -> BitSet:
    bits = {
        index
        for index, _, pattern in structural_key_table()
        if has_substructure(mol, pattern)
    }
    return BitSet(KEY_BITS, frozenset(bits))


def key_hits(mol: Molecule) -> list[str]:
    """Names of matched structural keys (report/debug helper)."""
    return [name for index, name, pattern in structural_key_table() if has_substructure(mol, pattern)]


def fingerprint_set(mol: Molecule) -> FingerprintSet:
    return FingerprintSet(morgan=morgan_bits(mol), path=path_bits(mol), keys=key_bits(mol))
