"""Shared fixtures: repository paths and cached parsed models."""

from pathlib import Path

import pytest

from emuc import analyzer
from emuc.parser import parse_diagram

REPO = Path(__file__).resolve().parent.parent
MODELS = REPO / "models"
CORPUS_DIR = Path(__file__).resolve().parent / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"

MINIMED = MODELS / "minimed.emuc"
ALARIS = MODELS / "alaris.emuc"


def corpus_paths() -> list[Path]:
    """Every model in the corpus: the shipped assets plus the synthetics."""
    return sorted(MODELS.glob("*.emuc")) + sorted(CORPUS_DIR.glob("*.emuc"))


def load(path: Path):
    """Parse and type-resolve a model file."""
    return analyzer.resolve(parse_diagram(path.read_text()))


@pytest.fixture(scope="session")
def minimed():
    return load(MINIMED)


@pytest.fixture(scope="session")
def alaris():
    return load(ALARIS)
