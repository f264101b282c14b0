"""Native cheminformatics core: SMILES, graphs, formulas, fingerprints."""

from .formula import Formula, FormulaSyntaxError, molecular_formula, parse_formula
from .fingerprints import (
    BitSet,
    FingerprintSet,
    LengthMismatchError,
    fingerprint_set,
    key_hits,
    tanimoto,
)
from .graph import (
    AROMATIC,
    Atom,
    Bond,
    ChemError,
    Molecule,
    SmilesSyntaxError,
    ValenceError,
    induced_subgraph,
    permute_atoms,
    ring_membership,
    sssr,
)
from .match import Pattern, cached_pattern, compile_pattern, has_substructure
from .parser import parse_smiles
from .writer import canonical_smiles, symmetry_classes, write_smiles

__all__ = [
    "AROMATIC",
    "Atom",
    "BitSet",
    "Bond",
    "ChemError",
    "FingerprintSet",
    "Formula",
    "FormulaSyntaxError",
    "LengthMismatchError",
    "Molecule",
    "Pattern",
    "SmilesSyntaxError",
    "ValenceError",
    "cached_pattern",
    "canonical_smiles",
    "compile_pattern",
    "fingerprint_set",
    "has_substructure",
    "induced_subgraph",
    "key_hits",
    "molecular_formula",
    "parse_formula",
    "parse_smiles",
    "permute_atoms",
    "ring_membership",
    "sssr",
    "symmetry_classes",
    "tanimoto",
    "write_smiles",
]
