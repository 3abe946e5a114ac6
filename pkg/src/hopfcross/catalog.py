"""Built-in fixtures and the default catalog of coactions."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .coaction import Coaction

FIXTURE_PACKAGE = "hopfcross.fixtures"

BASE_ENTRIES = (
    "trivial-c-z2",
    "swap-c2",
    "z3-shift-c3",
    "ad-diag-m2",
    "pauli-m2",
    "grading-m2",
    "trivial-m2-z2",
    "trivial-m2-trivial",
)
DERIVED_ENTRIES = (
    "dual-swap-c2",
    "dual-trivial-c-z2",
    "second-dual-trivial-c-z2",
    "second-dual-swap-c2",
)
DEFAULT_CATALOG = BASE_ENTRIES + DERIVED_ENTRIES

# group actions whose freeness verdicts are pinned in the acceptance tests
GROUP_ACTION_ENTRIES = ("swap-c2", "z3-shift-c3", "trivial-c-z2", "ad-diag-m2", "pauli-m2")


def fixture_dir() -> Path:
    return Path(str(resources.files(FIXTURE_PACKAGE)))


def fixture_names() -> list[str]:
    return sorted(p.stem for p in fixture_dir().glob("*.json"))


def fixture_path(name: str) -> Path:
    return fixture_dir() / f"{name}.json"


def resolve_path(path) -> Path:
    """A path as given, or the built-in fixture with the same file name if it does not exist."""
    p = Path(path)
    if p.exists():
        return p
    builtin = fixture_path(p.stem)
    if p.suffix in ("", ".json") and builtin.exists():
        return builtin
    return p


@dataclass
class CatalogEntry:
    name: str
    coaction: Coaction


def load_entry(name: str) -> CatalogEntry:
    from .workbench import load
    wb = load(fixture_path(name))
    return CatalogEntry(name, wb.coaction)


def load_catalog(names=DEFAULT_CATALOG) -> list[CatalogEntry]:
    return [load_entry(n) for n in names]
