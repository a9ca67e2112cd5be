"""Exit criteria. Each test reports one PASS/FAIL line in the terminal summary.

All similarity comparisons are exact (Fraction equality); there is no
tolerance anywhere in this module.
"""

import contextlib
import time
from fractions import Fraction

import numpy as np
import pytest

import test_closure
import test_similarity
from conftest import (BROADER, CASES, RELATED_MATCH, SKOS_CONCEPT, habitat, record_criterion,
                      species)
from skossim import data_path
from skossim.analysis import (ContainmentRelation, containment_report, export_csv, format_value,
                              parse_population, read_csv, render_pgm)
from skossim.bench import SynthParams, bench_matrix, concept_iri, generate_links, generate_taxonomy
from skossim.cli import run_cli
from skossim.closure import reflexive_closure, symmetric_closure, transitive_closure
from skossim.context import load_context
from skossim.rdf import Iri, TripleStore, load_stores, serialize_ntriples
from skossim.similarity import FeatureTable, SimilarityMatrix, similarity_matrix

F = Fraction


@contextlib.contextmanager
def criterion(number, title):
    try:
        yield
    except BaseException:
        record_criterion(number, title, False)
        raise
    record_criterion(number, title, True)


def test_1_context1_b21_b231():
    with criterion(1, "Context 1: SIM(B2.1,B2.31)=3/11, SIM(B2.31,B2.1)=1/6, 3 shared, < 1 s"):
        start = time.perf_counter()
        store = load_stores([data_path("table1.nt")]).freeze()
        spec = load_context(data_path("context1.ctx"))
        with open(data_path("habitats.txt")) as fh:
            population = parse_population(fh.read())
        table = FeatureTable(store, spec)
        m = similarity_matrix(store, spec, population, table=table)
        elapsed = time.perf_counter() - start

        assert m.sim(habitat("B2.1"), habitat("B2.31")) == F(3, 11)
        assert m.sim(habitat("B2.31"), habitat("B2.1")) == F(1, 6)
        shared = table.features(habitat("B2.1")).overlap(table.features(habitat("B2.31")))
        assert shared == 3
        assert elapsed < 1.0, elapsed


def test_2_context2_taxonomy():
    with criterion(2, "Context 2: SIM(B2,X)=1 for all X; SIM(B2.1,child)=1; SIM(B2.11,B2.1)=2/3"):
        store = load_stores([data_path("table1.nt")])
        transitive_closure(store, BROADER)
        reflexive_closure(store, BROADER, SKOS_CONCEPT)
        spec = load_context(data_path("context2.ctx"))
        with open(data_path("habitats.txt")) as fh:
            population = parse_population(fh.read())
        m = similarity_matrix(store.freeze(), spec, population)

        assert len(population) == 11
        assert all(m.sim(habitat("B2"), x) == 1 for x in population)
        for child in ("B2.11", "B2.12", "B2.13", "B2.14"):
            assert m.sim(habitat("B2.1"), habitat(child)) == 1
        assert m.sim(habitat("B2.11"), habitat("B2.1")) == F(2, 3)


def test_3_species_matrix(species_population):
    with criterion(3, "Species: SIM(longipes,glabriuscula)=1, reverse=1/2; valeriana column in {0,1}"):
        # rebuild the species->habitat direction from the habitat->species links
        full = load_stores([data_path("table1.nt")])
        store = TripleStore(t for t in full
                            if t.predicate != RELATED_MATCH or "habitat" in t.subject.value)
        symmetric_closure(store, RELATED_MATCH)
        spec = load_context(data_path("context1.ctx"))
        m = similarity_matrix(store.freeze(), spec, species_population)

        longipes, glab = species("atriplex-longipes"), species("atriplex-glabriuscula")
        assert m.sim(longipes, glab) == 1
        assert m.sim(glab, longipes) == F(1, 2)
        # figure convention: the first argument indexes the column
        valeriana = species("valeriana-salina")
        column = {m.sim(valeriana, x) for x in species_population}
        assert column <= {F(0), F(1)}
        assert column == {F(0), F(1)}


def test_4_containment_report(table1, ctx1, habitats):
    with criterion(4, "Report: (B2.3,B2.32) Equivalent; B2.1/B2.31 Overlap"):
        rows = containment_report(similarity_matrix(table1, ctx1, habitats))
        assert (habitat("B2.3"), habitat("B2.32"), ContainmentRelation.EQUIVALENT) in rows
        assert (habitat("B2.1"), habitat("B2.31"), ContainmentRelation.OVERLAP) in rows


PROPERTY_SUITES = [
    test_similarity.test_range,
    test_similarity.test_one_iff_subset,
    test_similarity.test_equal_size_symmetry,
    test_similarity.test_shared_feature_monotone,
    test_closure.test_transitive_matches_oracle,
    test_similarity.test_matrix_equals_naive_oracle,
    test_closure.test_chain_edge_counts,
]


def test_5_property_suites():
    with criterion(5, "Property suites: each >= 200 cases, all < 10 s"):
        start = time.perf_counter()
        for suite in PROPERTY_SUITES:
            name = suite.__name__
            CASES[name] = 0
            suite()
            assert CASES[name] >= 200, (name, CASES[name])
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0, elapsed


def _cli_bytes(tmp_path, argv, name):
    out = tmp_path / name
    assert run_cli([str(a) for a in argv] + ["--out", str(out)]) == 0
    return out.read_bytes()


@pytest.fixture(scope="module")
def synthetic(tmp_path_factory):
    root = tmp_path_factory.mktemp("synthetic")
    params = SynthParams(n_concepts=1000, link_density=10, seed=11)
    store = generate_links(generate_taxonomy(params), params)
    (root / "synth.nt").write_text(serialize_ntriples(store))
    (root / "pop.txt").write_text("".join(concept_iri(i).value + "\n" for i in range(1000)))
    (root / "synth.ctx").write_text(open(data_path("context1.ctx")).read())
    return root


def test_6_determinism(tmp_path, synthetic):
    with criterion(6, "Determinism: --threads 1 vs 8 byte-identical CSV/PGM; cache stat = resources"):
        cases = [
            (data_path("table1.nt"), data_path("context1.ctx"), data_path("habitats.txt")),
            (data_path("table1.nt"), data_path("context1.ctx"), data_path("species.txt")),
            (synthetic / "synth.nt", synthetic / "synth.ctx", synthetic / "pop.txt"),
        ]
        for i, (nt, ctx, pop) in enumerate(cases):
            base = ["matrix", "--data", nt, "--context", ctx, "--population", pop]
            for fmt in ("csv", "pgm"):
                one = _cli_bytes(tmp_path, base + ["--format", fmt, "--threads", "1"], f"{i}-1.{fmt}")
                eight = _cli_bytes(tmp_path, base + ["--format", fmt, "--threads", "8"], f"{i}-8.{fmt}")
                assert one == eight, (i, fmt)
                assert len(one) > 0

        report = bench_matrix(SynthParams(n_concepts=1000, link_density=10, seed=11), workers=8)
        assert report.extractions == report.distinct_resources == 1000
        assert bench_matrix(SynthParams(n_concepts=1000, link_density=10, seed=11),
                            workers=1).checksum == report.checksum


def test_7_format_exactness(table1, ctx1, species_population):
    with criterion(7, "Formats: 3/11->0.272727, 1/6->0.166667; PGM 1->0, 0->255, 1/2->128; CSV round-trip"):
        assert format_value(F(3, 11)) == "0.272727"
        assert format_value(F(1, 6)) == "0.166667"

        # 2x2 matrix with SIM(a,a)=1, SIM(a,b)=1/2, SIM(b,a)=0, SIM(b,b)=1
        m = SimilarityMatrix((Iri("urn:a"), Iri("urn:b")),
                             np.array([[1, 1], [0, 1]]), np.array([[1, 2], [1, 1]]))
        csv = export_csv(m, "decimal").splitlines()
        assert csv[1:] == ["urn:a,1.000000,0.500000", "urn:b,0.000000,1.000000"]
        assert render_pgm(m) == b"P2\n2 2\n255\n0 255\n128 0\n"

        full = similarity_matrix(table1, ctx1, species_population)
        pop, values = read_csv(export_csv(full, "rational"))
        assert tuple(pop) == full.population
        assert values == full.values()
