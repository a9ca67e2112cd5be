"""Asymmetric, context-dependent similarity between SKOS concepts."""

from importlib import resources

__version__ = "0.1.0"

from .rdf import (BlankNode, Iri, Literal, PrefixMap, Triple, TripleStore, parse_ntriples,  # noqa: E402
                  resolve_curie, serialize_ntriples)
from .context import ContextSpec, parse_context, validate_context  # noqa: E402
from .closure import reflexive_closure, symmetric_closure, transitive_closure  # noqa: E402
from .similarity import (EmptyPolicy, FeatureSet, FeatureTable, SimilarityMatrix,  # noqa: E402
                         extract_features, sim_ratio, similarity_matrix)
from .analysis import (ContainmentRelation, classify_pair, containment_report,  # noqa: E402
                       export_csv, parse_population, rank_by_similarity, render_pgm)


__all__ = [
    "Iri", "BlankNode", "Literal", "Triple", "TripleStore", "PrefixMap",
    "parse_ntriples", "serialize_ntriples", "resolve_curie",
    "ContextSpec", "parse_context", "validate_context",
    "transitive_closure", "reflexive_closure", "symmetric_closure",
    "EmptyPolicy", "FeatureSet", "FeatureTable", "SimilarityMatrix",
    "extract_features", "sim_ratio", "similarity_matrix",
    "ContainmentRelation", "classify_pair", "containment_report", "rank_by_similarity",
    "export_csv", "render_pgm", "parse_population", "data_path",
]


def data_path(name: str) -> str:
    """Filesystem path of a bundled fixture (``table1.nt``, ``context1.ctx``, ...)."""
    return str(resources.files(__name__) / "data" / name)
