"""Large-scale resemblance structures: checkers, dimension and nearness tools."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ._coarselab import (
    DOCUMENT_VERSION,
    VERSION,
    CoarselabError,
    LineSet,
    hausdorff_distance,
)
from . import _coarselab

__all__ = [
    "DOCUMENT_VERSION",
    "VERSION",
    "CoarselabError",
    "CommandResult",
    "LineSet",
    "bunch_obstruction",
    "hausdorff_distance",
    "lsr_documents",
    "run",
    "validate_obstruction",
]

COMMANDS = ("check", "asdim", "near", "bunch", "map", "mine")


@dataclass
class CommandResult:
    exit_code: int
    lines: list[str]
    report: dict[str, Any]
    text: str = field(repr=False, default="")

    @property
    def passed(self) -> bool:
        return self.exit_code == 0


def run(command: str, document: dict | str | Path | None = None, **options: Any) -> CommandResult:
    """Run a CLI command on an instance document (dict, JSON text or file path)."""
    if isinstance(document, Path):
        text = document.read_text()
    elif isinstance(document, str):
        text = document
    else:
        text = json.dumps(document)
    code, lines, report, rendered = _coarselab.run(command, text, **options)
    return CommandResult(code, list(lines), json.loads(report), rendered)


def bunch_obstruction(family: list[LineSet], window: int = 100_000, max_scale: int = 32) -> tuple[dict | None, str]:
    """Certificate that no bunch contains the family, or None with the rejection reason."""
    built, cert, rejection = _coarselab.bunch_obstruction(family, window, max_scale)
    return (json.loads(cert) if built else None), rejection


def validate_obstruction(certificate: dict) -> dict:
    return json.loads(_coarselab.validate_obstruction(json.dumps(certificate)))


def lsr_documents(width: int) -> list[dict]:
    """Instance documents for every LS.R on `width` <= 3 points."""
    return [json.loads(d) for d in _coarselab.lsr_documents(width)]


def _line_to_json(self: LineSet) -> dict:
    return json.loads(self.to_json_text())


def _line_from_json(obj: dict) -> LineSet:
    return LineSet.from_json_text(json.dumps(obj))


LineSet.to_json = _line_to_json
LineSet.from_json = staticmethod(_line_from_json)
