"""Elucidation question files: one structure-determination task as JSON."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from ..chem.formula import molecular_formula
from ..chem.graph import Molecule
from .model import SpectrumError
from .parse import format_cnmr, format_hnmr
from .simulate import simulate_nmr


@dataclass(frozen=True)
class ElucidationQuestion:
    """One task: spectra plus formula; target kept for evaluation only."""

    id: str
    formula: str
    cnmr: str
    hnmr: str
    ir_image: str | None = None
    target_smiles: str | None = None


def load_question(path: str | Path) -> ElucidationQuestion:
    data = json.loads(Path(path).read_text())
    try:
        return ElucidationQuestion(
            id=str(data["id"]),
            formula=data["formula"],
            cnmr=data["cnmr"],
            hnmr=data["hnmr"],
            ir_image=data.get("ir_image"),
            target_smiles=data.get("target_smiles"),
        )
    except KeyError as exc:
        raise SpectrumError(f"question file {path} is missing field {exc}") from exc


def save_question(question: ElucidationQuestion, path: str | Path) -> None:
    Path(path).write_text(json.dumps(asdict(question), indent=2) + "\n")


def question_from_molecule(
    mol: Molecule, question_id: str, seed: int, *, include_target: bool = True
) -> ElucidationQuestion:
    """Build a synthetic question by simulating the molecule's spectra."""
    spectrum = simulate_nmr(mol, seed)
    return ElucidationQuestion(
        id=question_id,
        formula=str(molecular_formula(mol)),
        cnmr=format_cnmr(spectrum.carbon),
        hnmr=format_hnmr(spectrum.hydrogen),
        target_smiles=mol.smiles if include_target and mol.smiles else None,
    )
