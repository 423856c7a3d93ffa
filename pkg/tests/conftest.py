import random
from pathlib import Path

import pytest

from nomuni.models.nominal import Atom, NominalProblem
from nomuni.settings import NomuniSettings
from nomuni.syntax import parse_problem

CORPUS = Path(__file__).parent / "corpus"


def load_problem(name: str) -> NominalProblem:
    return parse_problem((CORPUS / f"{name}.nom").read_text(encoding="utf-8"))


def atoms_of_problem(p: NominalProblem, *names: str):
    return [p.signature.atom(n) for n in names]


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20221018)


@pytest.fixture
def ab():
    return Atom("a", "N"), Atom("b", "N")


@pytest.fixture
def isolated_settings(tmp_path, monkeypatch):
    """ a settings object backed by an empty config file, swapped in for the module singleton """
    import nomuni.settings
    import nomuni.error
    import nomuni.main
    import nomuni.pipeline

    fresh = NomuniSettings(tmp_path / "config.toml", environ={})
    for module in (nomuni.settings, nomuni.error, nomuni.main, nomuni.pipeline):
        monkeypatch.setattr(module, "settings", fresh)
    return fresh
