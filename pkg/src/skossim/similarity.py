"""Context-selected feature sets and the asymmetric similarity matrix.

SIM(X, Y) is the fraction of X's features that Y also has::

    SIM(X, Y) = |F(X) & F(Y)| / |F(X)|

so SIM(X, Y) == 1 exactly when F(X) is a subset of F(Y). Values are kept as
exact fractions throughout; containment tests never need a tolerance.
"""

from __future__ import annotations

import threading
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from .context import ContextSpec
from .rdf import Iri, Term, TripleStore

__all__ = [
    "EmptyPolicy",
    "FeatureSet",
    "FeatureTable",
    "SimilarityMatrix",
    "DuplicateResourceError",
    "extract_features",
    "sim_ratio",
    "similarity_matrix",
]


class EmptyPolicy(str, Enum):
    """Value of SIM(X, .) when X has no features."""

    ONE = "one"
    ZERO = "zero"


class DuplicateResourceError(ValueError):
    pass


class FeatureSet:
    """Ascending, duplicate-free tuple of interned feature ids."""

    __slots__ = ("ids", "_mask")

    def __init__(self, ids: Iterable[int] = ()):
        self.ids = tuple(sorted(set(ids)))
        self._mask = None

    @property
    def mask(self) -> int:
        if self._mask is None:
            m = 0
            for i in self.ids:
                m |= 1 << i
            self._mask = m
        return self._mask

    def __len__(self):
        return len(self.ids)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ids)

    def __contains__(self, fid):
        return fid in self.ids

    def __eq__(self, other):
        return isinstance(other, FeatureSet) and self.ids == other.ids

    def __hash__(self):
        return hash(self.ids)

    def __repr__(self):
        return f"FeatureSet({list(self.ids)})"

    def overlap(self, other: "FeatureSet") -> int:
        return (self.mask & other.mask).bit_count()

    def issubset(self, other: "FeatureSet") -> bool:
        return self.mask & ~other.mask == 0


class FeatureTable:
    """Interns ``(predicate, object)`` features and memoizes per-resource sets.

    ``extractions`` counts how often each resource's features were actually
    read from the store; with the cache in place every count stays at 1.
    """

    def __init__(self, store: TripleStore, spec: ContextSpec):
        self.store = store
        self.predicates = spec.predicates
        self._ids: dict[tuple[Iri, Term], int] = {}
        self._pairs: list[tuple[Iri, Term]] = []
        self._cache: dict[Term, FeatureSet] = {}
        self._lock = threading.Lock()
        self.extractions: Counter = Counter()

    def intern(self, predicate: Iri, obj: Term) -> int:
        key = (predicate, obj)
        fid = self._ids.get(key)
        if fid is None:
            fid = self._ids[key] = len(self._pairs)
            self._pairs.append(key)
        return fid

    def pair(self, fid: int) -> tuple[Iri, Term]:
        return self._pairs[fid]

    def __len__(self):
        return len(self._pairs)

    def features(self, resource: Term) -> FeatureSet:
        cached = self._cache.get(resource)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._cache.get(resource)
            if cached is None:
                self.extractions[resource] += 1
                ids = [self.intern(p, o)
                       for p in self.predicates
                       for o in self.store.objects(resource, p)]
                cached = self._cache[resource] = FeatureSet(ids)
            return cached

    def decode(self, fs: FeatureSet) -> set[tuple[Iri, Term]]:
        return {self._pairs[i] for i in fs}


def extract_features(store: TripleStore, spec: ContextSpec, resource: Term,
                     table: FeatureTable | None = None) -> FeatureSet:
    if table is None:
        table = FeatureTable(store, spec)
    return table.features(resource)


def sim_ratio(fx: FeatureSet, fy: FeatureSet, policy: EmptyPolicy = EmptyPolicy.ONE) -> Fraction:
    if not len(fx):
        return Fraction(1) if EmptyPolicy(policy) is EmptyPolicy.ONE else Fraction(0)
    return Fraction(fx.overlap(fy), len(fx))


@dataclass(eq=False)
class SimilarityMatrix:
    """Dense matrix of exact similarity values over an ordered population.

    Cell ``(r, c)`` holds SIM(population[r], population[c]) as the reduced
    fraction ``numerators[r, c] / denominators[r, c]``.
    """

    population: tuple[Iri, ...]
    numerators: np.ndarray
    denominators: np.ndarray
    empty_policy: EmptyPolicy = EmptyPolicy.ONE
    context: str = ""
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self._index = {iri: i for i, iri in enumerate(self.population)}

    def __len__(self):
        return len(self.population)

    def index(self, iri: Iri) -> int:
        try:
            return self._index[iri]
        except KeyError:
            raise KeyError(f"{iri} is not in the population") from None

    def __getitem__(self, rc: tuple[int, int]) -> Fraction:
        r, c = rc
        return Fraction(int(self.numerators[r, c]), int(self.denominators[r, c]))

    def sim(self, x: Iri, y: Iri) -> Fraction:
        return self[self.index(x), self.index(y)]

    def values(self) -> list[list[Fraction]]:
        n = len(self)
        return [[self[r, c] for c in range(n)] for r in range(n)]

    def __eq__(self, other):
        if not isinstance(other, SimilarityMatrix):
            return NotImplemented
        return (self.population == other.population
                and np.array_equal(self.numerators, other.numerators)
                and np.array_equal(self.denominators, other.denominators))

    @classmethod
    def from_counts(cls, population, overlap: np.ndarray, sizes: np.ndarray,
                    policy: EmptyPolicy = EmptyPolicy.ONE, context: str = "") -> "SimilarityMatrix":
        """Build from raw intersection counts and per-row feature counts."""
        policy = EmptyPolicy(policy)
        num = np.asarray(overlap, dtype=np.int64).copy()
        den = np.repeat(np.asarray(sizes, dtype=np.int64)[:, None], len(population), axis=1)
        empty = den == 0
        num[empty] = 1 if policy is EmptyPolicy.ONE else 0
        den[empty] = 1
        g = np.gcd(num, den)
        g[g == 0] = 1
        return cls(tuple(population), num // g, den // g, policy, context)


def _incidence(sets: Sequence[FeatureSet], n_features: int) -> sp.csr_matrix:
    indptr = np.zeros(len(sets) + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(s) for s in sets])
    indices = np.fromiter((i for s in sets for i in s.ids), dtype=np.int64, count=int(indptr[-1]))
    data = np.ones(len(indices), dtype=np.int64)
    return sp.csr_matrix((data, indices, indptr), shape=(len(sets), max(n_features, 1)))


def _row_blocks(n: int, workers: int) -> list[tuple[int, int]]:
    k = max(1, min(workers, n))
    bounds = np.linspace(0, n, k + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def similarity_matrix(store: TripleStore, spec: ContextSpec, population: Sequence[Iri],
                      policy: EmptyPolicy = EmptyPolicy.ONE, workers: int = 1,
                      table: FeatureTable | None = None) -> SimilarityMatrix:
    """Compute SIM for every ordered pair of ``population``.

    Rows are split into contiguous blocks computed concurrently by
    ``workers`` threads. Intersection counts are exact integers, so the
    result does not depend on the worker count or scheduling.
    """
    if workers < 1:
        raise ValueError("workers must be positive")
    seen = set()
    for iri in population:
        if iri in seen:
            raise DuplicateResourceError(f"duplicate population entry {iri}")
        seen.add(iri)
    if not population:
        raise ValueError("population is empty")

    if table is None:
        table = FeatureTable(store, spec)
    sets = [table.features(r) for r in population]
    inc = _incidence(sets, len(table))
    inc_t = inc.T.tocsc()
    n = len(population)
    overlap = np.zeros((n, n), dtype=np.int64)

    def block(bounds):
        a, b = bounds
        overlap[a:b] = (inc[a:b] @ inc_t).toarray()

    blocks = _row_blocks(n, workers)
    if workers == 1:
        for bounds in blocks:
            block(bounds)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(block, blocks))

    sizes = np.array([len(s) for s in sets], dtype=np.int64)
    return SimilarityMatrix.from_counts(population, overlap, sizes, policy, spec.fingerprint())
