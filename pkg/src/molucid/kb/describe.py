"""Structure facts and description providers for knowledge-base records.

Facts are computed natively (ring census, functional-group hits from the
bundled pattern table, formula). Descriptions come either from a
deterministic template (mock describer) or from an LLM prompted with the
facts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ..chem.formula import molecular_formula
from ..chem.graph import ChemError, Molecule, sssr
from ..chem.match import Pattern, cached_pattern, has_substructure
from ..chem.parser import parse_smiles


class DescriberError(RuntimeError):
    """Description provider failed; carries the offending SMILES."""

    def __init__(self, smiles: str, message: str):
        super().__init__(f"describer failed for {smiles!r}: {message}")
        self.smiles = smiles


@dataclass(frozen=True)
class RingFacts:
    size: int
    aromatic: bool
    elements: tuple[tuple[str, int], ...]  # sorted (element, count)


@dataclass(frozen=True)
class StructureFacts:
    formula: str
    rings: tuple[RingFacts, ...]
    functional_groups: tuple[str, ...]  # matched group names, sorted unique

    @property
    def ring_count(self) -> int:
        return len(self.rings)


@lru_cache(maxsize=1)
def functional_group_table() -> tuple[tuple[str, Pattern], ...]:
    text = resources.files("molucid.kb").joinpath("data/functional_groups.tsv").read_text()
    entries: list[tuple[str, Pattern]] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise ChemError(f"functional group line {line_no}: expected 2 fields")
        name, smiles = fields
        entries.append((name, cached_pattern(smiles)))
    return tuple(entries)


def functional_group_hits(mol: Molecule) -> tuple[str, ...]:
    hits = {
        name for name, pattern in functional_group_table() if has_substructure(mol, pattern)
    }
    return tuple(sorted(hits))


def structure_facts(mol: Molecule) -> StructureFacts:
    rings = []
    for ring in sssr(mol):
        counts: dict[str, int] = {}
        for idx in ring:
            counts[mol.atoms[idx].element] = counts.get(mol.atoms[idx].element, 0) + 1
        rings.append(
            RingFacts(
                size=len(ring),
                aromatic=all(mol.atoms[i].aromatic for i in ring),
                elements=tuple(sorted(counts.items())),
            )
        )
    rings.sort(key=lambda r: (r.size, r.elements))
    return StructureFacts(
        formula=str(molecular_formula(mol)),
        rings=tuple(rings),
        functional_groups=functional_group_hits(mol),
    )


def facts_text(facts: StructureFacts) -> str:
    """Deterministic plain-text rendering of structure facts."""
    lines = [f"formula: {facts.formula}"]
    if facts.rings:
        lines.append(f"rings: {len(facts.rings)}")
        for ring in facts.rings:
            kind = "aromatic" if ring.aromatic else "aliphatic"
            atoms = ", ".join(f"{el}x{n}" for el, n in ring.elements)
            lines.append(f"  - {ring.size}-membered {kind} ring ({atoms})")
    else:
        lines.append("rings: none")
    if facts.functional_groups:
        lines.append("functional groups: " + ", ".join(facts.functional_groups))
    else:
        lines.append("functional groups: none detected")
    return "\n".join(lines)


def describe_substructure(smiles: str, describer: "Describer") -> tuple[StructureFacts, str]:
    """Compute facts for a substructure and obtain its description text."""
    mol = parse_smiles(smiles)
    facts = structure_facts(mol)
    return facts, describer(smiles, facts)


class Describer:
    """Callable description provider: (smiles, facts) -> text."""

    def __call__(self, smiles: str, facts: StructureFacts) -> str:
        raise NotImplementedError


class MockDescriber(Describer):
    """Deterministic template rendering of the computed facts."""

    def __call__(self, smiles: str, facts: StructureFacts) -> str:
        parts = [f"Fragment {smiles} with formula {facts.formula}."]
        if facts.rings:
            ring_bits = []
            for ring in facts.rings:
                kind = "aromatic" if ring.aromatic else "aliphatic"
                atoms = ", ".join(f"{n} {el}" for el, n in ring.elements)
                ring_bits.append(f"a {ring.size}-membered {kind} ring of {atoms}")
            parts.append("Contains " + "; ".join(ring_bits) + ".")
        else:
            parts.append("Open-chain fragment with no rings.")
        if facts.functional_groups:
            parts.append("Functional groups: " + ", ".join(facts.functional_groups) + ".")
        return " ".join(parts)


class LlmDescriber(Describer):
    """Asks a chat client to describe the fragment given the extracted facts."""

    def __init__(self, client, max_retries: int = 2):
        self._client = client
        self._max_retries = max_retries

    def __call__(self, smiles: str, facts: StructureFacts) -> str:
        from ..llm import LlmError, render, user_message

        prompt = render("describe", {"smiles": smiles, "facts": facts_text(facts)})
        last: Exception | None = None
        for _ in range(self._max_retries + 1):
            try:
                response = self._client.chat([user_message(prompt)], template_id="describe")
                if response.text.strip():
                    return response.text.strip()
                last = DescriberError(smiles, "empty description")
            except LlmError as exc:
                last = exc
        raise DescriberError(smiles, str(last))
