import functools
from collections import Counter

import pytest

from skossim import data_path
from skossim.analysis import parse_population
from skossim.closure import reflexive_closure, transitive_closure
from skossim.context import load_context
from skossim.rdf import SKOS, Iri, load_stores

SKOS_CONCEPT = Iri(SKOS + "Concept")
BROADER = Iri(SKOS + "broader")
RELATED_MATCH = Iri(SKOS + "relatedMatch")


def habitat(code):
    return Iri("urn:eunis:habitat:" + code)


def species(slug):
    return Iri("urn:eunis:species:" + slug)


@pytest.fixture
def table1():
    return load_stores([data_path("table1.nt")])


@pytest.fixture
def table1_closed():
    store = load_stores([data_path("table1.nt")])
    transitive_closure(store, BROADER)
    reflexive_closure(store, BROADER, SKOS_CONCEPT)
    return store.freeze()


@pytest.fixture(scope="session")
def ctx1():
    return load_context(data_path("context1.ctx"))


@pytest.fixture(scope="session")
def ctx2():
    return load_context(data_path("context2.ctx"))


@pytest.fixture(scope="session")
def habitats():
    with open(data_path("habitats.txt")) as fh:
        return parse_population(fh.read())


@pytest.fixture(scope="session")
def species_population():
    with open(data_path("species.txt")) as fh:
        return parse_population(fh.read())


# acceptance summary: one line per criterion at the end of the run
_criteria = {}


def record_criterion(number, title, passed):
    _criteria[number] = (title, passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, passed = _criteria[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}")


# how many generated cases each property test has run (read by the acceptance suite)
CASES = Counter()


def counted(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        CASES[fn.__name__] += 1
        return fn(*args, **kwargs)
    return wrapper
