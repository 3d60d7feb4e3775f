"""The bundled catalog of worked examples."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .fileformat import Document, Expectation, parse


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    document: Document
    path: str

    @property
    def expected(self) -> list[Expectation]:
        return self.document.expectations


def catalog_files() -> list[Path]:
    root = resources.files("equichain") / "catalog"
    return sorted((Path(str(p)) for p in root.iterdir() if p.name.endswith(".eqc")), key=lambda p: p.name)


def load(path: str | Path) -> CatalogEntry:
    path = Path(path)
    doc = parse(path.read_text())
    if doc.entry is None:
        doc.entry = path.stem
    return CatalogEntry(doc.entry, doc, str(path))


def catalog() -> list[CatalogEntry]:
    """Every bundled entry, sorted by name."""
    return sorted((load(p) for p in catalog_files()), key=lambda e: e.name)


def entry(name: str) -> CatalogEntry:
    for e in catalog():
        if e.name == name:
            return e
    raise KeyError(name)
