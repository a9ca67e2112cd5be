"""Reading similarity matrices: containment, ranking, CSV and PGM output."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .rdf import Iri
from .similarity import SimilarityMatrix

__all__ = [
    "ContainmentRelation",
    "RankEntry",
    "PopulationError",
    "classify_pair",
    "containment_report",
    "rank_by_similarity",
    "export_csv",
    "read_csv",
    "render_pgm",
    "read_pgm",
    "parse_population",
    "format_value",
]


class ContainmentRelation(str, Enum):
    EQUIVALENT = "Equivalent"
    FIRST_CONTAINED_IN_SECOND = "FirstContainedInSecond"
    SECOND_CONTAINED_IN_FIRST = "SecondContainedInFirst"
    DISJOINT = "Disjoint"
    OVERLAP = "Overlap"


@dataclass(frozen=True)
class RankEntry:
    resource: Iri
    value: Fraction


class PopulationError(ValueError):
    pass


def classify_pair(sim_xy: Fraction, sim_yx: Fraction) -> ContainmentRelation:
    if sim_xy == 1 and sim_yx == 1:
        return ContainmentRelation.EQUIVALENT
    if sim_xy == 1:
        return ContainmentRelation.FIRST_CONTAINED_IN_SECOND
    if sim_yx == 1:
        return ContainmentRelation.SECOND_CONTAINED_IN_FIRST
    if sim_xy == 0 and sim_yx == 0:
        return ContainmentRelation.DISJOINT
    return ContainmentRelation.OVERLAP


def containment_report(matrix: SimilarityMatrix) -> list[tuple[Iri, Iri, ContainmentRelation]]:
    """Classify every unordered pair, first member earlier in population order."""
    pop = matrix.population
    return [(pop[i], pop[j], classify_pair(matrix[i, j], matrix[j, i]))
            for i in range(len(pop)) for j in range(i + 1, len(pop))]


def rank_by_similarity(matrix: SimilarityMatrix, query: Iri,
                       direction: str = "from-query") -> list[RankEntry]:
    """Rank the other population members against ``query``.

    ``from-query`` orders by SIM(query, candidate), i.e. how much of the
    query's features each candidate covers; ``to-query`` by SIM(candidate, query).
    """
    q = matrix.index(query)
    if direction == "from-query":
        value = lambda c: matrix[q, c]  # noqa: E731
    elif direction == "to-query":
        value = lambda c: matrix[c, q]  # noqa: E731
    else:
        raise ValueError(f"direction must be 'from-query' or 'to-query', not {direction!r}")
    entries = [RankEntry(iri, value(c)) for c, iri in enumerate(matrix.population) if c != q]
    entries.sort(key=lambda e: e.resource.value)
    entries.sort(key=lambda e: e.value, reverse=True)
    return entries


def _round_half_up(num: np.ndarray, den: np.ndarray, scale: int) -> np.ndarray:
    # round(num/den * scale), halves away from zero; all inputs nonnegative
    return (2 * num * scale + den) // (2 * den)


def format_value(value: Fraction, mode: str = "decimal") -> str:
    if mode == "rational":
        return f"{value.numerator}/{value.denominator}"
    q = (2 * value.numerator * 10**6 + value.denominator) // (2 * value.denominator)
    return f"{q // 10**6}.{q % 10**6:06d}"


def export_csv(matrix: SimilarityMatrix, mode: str = "decimal") -> str:
    """Row-major CSV: row X, column Y holds SIM(X, Y)."""
    num, den = matrix.numerators, matrix.denominators
    if mode == "decimal":
        q = _round_half_up(num, den, 10**6)
        whole, frac = np.divmod(q, 10**6)
        cells = [[f"{w}.{f:06d}" for w, f in zip(wr.tolist(), fr.tolist())]
                 for wr, fr in zip(whole, frac)]
    elif mode == "rational":
        cells = [[f"{a}/{b}" for a, b in zip(nr.tolist(), dr.tolist())]
                 for nr, dr in zip(num, den)]
    else:
        raise ValueError(f"unknown value mode {mode!r}")
    lines = ["sim," + ",".join(iri.value for iri in matrix.population)]
    lines.extend(iri.value + "," + ",".join(row) for iri, row in zip(matrix.population, cells))
    return "\n".join(lines) + "\n"


def read_csv(text: str) -> tuple[list[Iri], list[list[Fraction]]]:
    """Parse a matrix CSV back into its population and exact values."""
    lines = text.splitlines()
    header = lines[0].split(",")
    if header[0] != "sim":
        raise ValueError("CSV header must start with 'sim'")
    population = [Iri(h) for h in header[1:]]
    values = []
    for line, iri in zip(lines[1:], population):
        fields = line.split(",")
        if fields[0] != iri.value:
            raise ValueError(f"row label {fields[0]} does not match column {iri}")
        values.append([Fraction(f) for f in fields[1:]])
    return population, values


def render_pgm(matrix: SimilarityMatrix) -> bytes:
    """Plain PGM heatmap, black = 1 and white = 0.

    The image is the transpose of the CSV: image column i is the first
    argument, so a resource contained in everything shows as a black column.
    """
    n = len(matrix)
    gray = _round_half_up(matrix.denominators - matrix.numerators, matrix.denominators, 255)
    lines = ["P2", f"{n} {n}", "255"]
    lines.extend(" ".join(map(str, row)) for row in gray.T.tolist())
    return ("\n".join(lines) + "\n").encode("ascii")


def read_pgm(data: bytes) -> np.ndarray:
    """Parse a plain PGM into a (height, width) array of gray levels."""
    tokens = re.sub(rb"#[^\n]*", b"", data).split()
    if tokens[0] != b"P2":
        raise ValueError("not a plain PGM")
    w, h = int(tokens[1]), int(tokens[2])
    pixels = np.array([int(t) for t in tokens[4:4 + w * h]], dtype=np.int64)
    return pixels.reshape(h, w)


_ABSOLUTE_IRI = re.compile(r'^[A-Za-z][A-Za-z0-9+.\-]*:[^\s<>"{}|^`\\]*$')


def parse_population(text: str) -> list[Iri]:
    population, seen = [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("<") and line.endswith(">"):
            line = line[1:-1]
        if not _ABSOLUTE_IRI.match(line):
            raise PopulationError(f"line {lineno}: not an absolute IRI: {line!r}")
        if line in seen:
            raise PopulationError(f"line {lineno}: duplicate IRI {line} (first on line {seen[line]})")
        seen[line] = lineno
        population.append(Iri(line))
    if not population:
        raise PopulationError("empty population")
    return population
