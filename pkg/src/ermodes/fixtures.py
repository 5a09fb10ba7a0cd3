"""Bundled example diagrams.

Three ready-made schemas ship with the package, mostly for tests, demos
and the acceptance suite:

    university     professors, students, courses; target Professor.Tenure
    imdb_schema    people and movies; reflexive WorkedUnder target
    uwcse_schema   an academic department; reflexive AdvisedBy target
"""

from __future__ import annotations

from importlib import resources

from .ir import parse_ir
from .model import ERDiagram

FIXTURE_NAMES = ("university", "imdb_schema", "uwcse_schema")


def fixture_path(name: str):
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r} "
                       f"(expected one of {', '.join(FIXTURE_NAMES)})")
    return resources.files(__package__) / "fixtures" / f"{name}.erd.json"


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


def load_fixture(name: str) -> ERDiagram:
    return parse_ir(fixture_text(name))
