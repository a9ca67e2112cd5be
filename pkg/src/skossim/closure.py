"""Materialize transitive, reflexive and symmetric closures of one predicate.

Closures add triples to the store in place and return it. They never remove
triples and never add triples under any predicate other than the one asked
for.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .rdf import BlankNode, Iri, Term, Triple, TripleStore

__all__ = [
    "ClosureRequest",
    "transitive_closure",
    "reflexive_closure",
    "symmetric_closure",
    "apply_closure",
    "parse_scope",
    "PREDICATE_NODES",
]

PREDICATE_NODES = "predicate-nodes"


@dataclass(frozen=True)
class ClosureRequest:
    predicate: Iri
    transitive: bool = False
    reflexive: bool = False
    # "predicate-nodes", or a class IRI whose instances get self-loops
    reflexive_scope: "str | Iri" = PREDICATE_NODES
    symmetric: bool = False

    def __post_init__(self):
        if not (self.transitive or self.reflexive or self.symmetric):
            raise ValueError("closure request must set at least one of transitive/reflexive/symmetric")


def _successors(store: TripleStore, predicate: Iri) -> dict[Term, set[Term]]:
    succ = defaultdict(set)
    for t in store.match(p=predicate):
        succ[t.subject].add(t.object)
    return succ


def transitive_closure(store: TripleStore, predicate: Iri) -> TripleStore:
    """Add ``(x, p, z)`` for every ``z`` reachable from ``x`` by a ``p`` path."""
    succ = _successors(store, predicate)
    new = []
    for source in succ:
        # DFS from each subject; cycles are handled by the seen set
        seen: set[Term] = set()
        stack = list(succ[source])
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            stack.extend(succ.get(node, ()))
        new.extend(Triple(source, predicate, z) for z in seen if z not in succ[source])
    store.update(new)
    return store


def reflexive_closure(store: TripleStore, predicate: Iri,
                      scope: "str | Iri" = PREDICATE_NODES) -> TripleStore:
    """Add self-loops ``(n, p, n)``.

    With ``scope="predicate-nodes"`` every subject or object of a ``p`` triple
    gets one; with a class IRI as scope every instance of that class does.
    Literal nodes are skipped since they cannot be subjects.
    """
    if isinstance(scope, Iri):
        nodes = store.instances_of(scope)
    elif scope == PREDICATE_NODES:
        nodes = store.nodes_of(predicate)
    else:
        raise ValueError(f"unknown reflexive scope {scope!r}")
    store.update(Triple(n, predicate, n) for n in nodes if isinstance(n, (Iri, BlankNode)))
    return store


def symmetric_closure(store: TripleStore, predicate: Iri) -> TripleStore:
    new = [Triple(t.object, predicate, t.subject) for t in store.match(p=predicate)
           if isinstance(t.object, (Iri, BlankNode))]
    store.update(new)
    return store


def apply_closure(store: TripleStore, request: ClosureRequest) -> TripleStore:
    """Run the closures named by ``request``.

    Order is symmetric, then transitive, then reflexive, so that a request for
    all three yields the full equivalence closure.
    """
    if request.symmetric:
        symmetric_closure(store, request.predicate)
    if request.transitive:
        transitive_closure(store, request.predicate)
    if request.reflexive:
        reflexive_closure(store, request.predicate, request.reflexive_scope)
    return store


def parse_scope(text: str, resolve) -> "str | Iri":
    """Turn a CLI scope string into a scope value; ``resolve`` expands CURIEs."""
    if text == PREDICATE_NODES:
        return PREDICATE_NODES
    if text.startswith("class:"):
        return resolve(text[len("class:"):])
    raise ValueError(f"reflexive scope must be '{PREDICATE_NODES}' or 'class:<iri>', got {text!r}")
