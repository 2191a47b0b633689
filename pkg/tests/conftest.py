import pytest

from cardex.gazetteer import starter_gazetteers
from cardex.extractor import load_triples

from helpers import DATA, corpus


@pytest.fixture(scope="session")
def gaz():
    return starter_gazetteers()


@pytest.fixture(scope="session")
def fixture_sentences():
    return corpus("fixtures6.conllu")


@pytest.fixture(scope="session")
def corpus20():
    return corpus("corpus20.conllu")


@pytest.fixture(scope="session")
def reference_triples():
    return load_triples(DATA / "reference_triples.jsonl")
