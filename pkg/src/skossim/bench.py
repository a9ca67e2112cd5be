"""Synthetic SKOS-like graphs and phase timing for the similarity pipeline."""

from __future__ import annotations

import hashlib
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .closure import reflexive_closure, transitive_closure
from .context import ContextSpec, RelationSpec, Operator
from .rdf import RDF_TYPE, SKOS, Iri, Triple, TripleStore
from .similarity import FeatureTable, similarity_matrix
from .analysis import export_csv

__all__ = ["SynthParams", "BenchReport", "generate_taxonomy", "generate_links",
           "bench_matrix", "concept_iri", "BENCH_CONTEXT"]

CONCEPT = Iri(SKOS + "Concept")
BROADER = Iri(SKOS + "broader")
RELATED_MATCH = Iri(SKOS + "relatedMatch")

# taxonomy position and links pooled into one feature set
BENCH_CONTEXT = ContextSpec(
    prefixes=(("skos", SKOS),),
    class_ref=CONCEPT,
    relation_specs=(RelationSpec(BROADER, Operator.INTER),
                    RelationSpec(RELATED_MATCH, Operator.INTER)),
)


@dataclass(frozen=True)
class SynthParams:
    n_concepts: int = 1000
    branching: int = 4
    n_targets: int = 1000
    link_density: float = 10.0
    seed: int = 0

    def __post_init__(self):
        if self.n_concepts < 1 or self.branching < 1 or self.n_targets < 1:
            raise ValueError("n_concepts, branching and n_targets must be positive")
        if self.link_density < 0:
            raise ValueError("link_density must be nonnegative")


@dataclass
class BenchReport:
    n_concepts: int
    workers: int
    timings_ms: dict = field(default_factory=dict)
    extractions: int = 0
    distinct_resources: int = 0
    n_triples: int = 0
    n_features: int = 0
    checksum: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def concept_iri(i: int) -> Iri:
    return Iri(f"urn:synth:concept:{i}")


def target_iri(j: int) -> Iri:
    return Iri(f"urn:synth:target:{j}")


def generate_taxonomy(params: SynthParams) -> TripleStore:
    """Rooted tree in heap layout: the parent of node i is (i - 1) // branching."""
    store = TripleStore()
    for i in range(params.n_concepts):
        store.add(Triple(concept_iri(i), RDF_TYPE, CONCEPT))
        if i:
            store.add(Triple(concept_iri(i), BROADER, concept_iri((i - 1) // params.branching)))
    return store


def generate_links(store: TripleStore, params: SynthParams) -> TripleStore:
    """Link each concept to a Poisson(link_density) sample of distinct targets."""
    rng = np.random.default_rng(params.seed)
    counts = rng.poisson(params.link_density, size=params.n_concepts)
    for i, k in enumerate(counts.tolist()):
        k = min(k, params.n_targets)
        if not k:
            continue
        for j in sorted(rng.choice(params.n_targets, size=k, replace=False).tolist()):
            store.add(Triple(concept_iri(i), RELATED_MATCH, target_iri(j)))
    return store


def bench_matrix(params: SynthParams, workers: int = 1) -> BenchReport:
    """Time generate -> closure -> feature extraction -> matrix.

    The matrix is reduced to a SHA-256 of its rational CSV so runs with
    different worker counts can be compared.
    """
    report = BenchReport(n_concepts=params.n_concepts, workers=workers)
    clock = time.perf_counter

    t0 = clock()
    store = generate_links(generate_taxonomy(params), params)
    t1 = clock()
    transitive_closure(store, BROADER)
    reflexive_closure(store, BROADER, CONCEPT)
    store.freeze()
    t2 = clock()
    population = [concept_iri(i) for i in range(params.n_concepts)]
    table = FeatureTable(store, BENCH_CONTEXT)
    for iri in population:
        table.features(iri)
    t3 = clock()
    matrix = similarity_matrix(store, BENCH_CONTEXT, population, workers=workers, table=table)
    t4 = clock()

    report.timings_ms = {"load": (t1 - t0) * 1e3, "closure": (t2 - t1) * 1e3,
                         "extraction": (t3 - t2) * 1e3, "matrix": (t4 - t3) * 1e3}
    report.extractions = sum(table.extractions.values())
    report.distinct_resources = len(set(population))
    report.n_triples = len(store)
    report.n_features = len(table)
    report.checksum = hashlib.sha256(export_csv(matrix, "rational").encode()).hexdigest()
    return report
