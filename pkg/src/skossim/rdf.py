"""In-memory RDF graphs: terms, an indexed triple store, and N-Triples I/O.

Only N-Triples is read and written. Anything richer should be converted
to N-Triples before it reaches this module.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

__all__ = [
    "Iri",
    "BlankNode",
    "Literal",
    "Term",
    "Triple",
    "TripleStore",
    "PrefixMap",
    "NTriplesSyntaxError",
    "UnboundPrefixError",
    "RDF_TYPE",
    "SKOS",
    "parse_ntriples",
    "serialize_ntriples",
    "resolve_curie",
    "load_stores",
]

_BAD_IRI_CHARS = re.compile(r'[\x00-\x20<>"{}|^`\\]')


@dataclass(frozen=True, order=True)
class Iri:
    value: str

    def __post_init__(self):
        if not self.value or _BAD_IRI_CHARS.search(self.value):
            raise ValueError(f"invalid IRI: {self.value!r}")

    def __str__(self):
        return self.value

    def n3(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True, order=True)
class BlankNode:
    label: str

    def n3(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True, order=True)
class Literal:
    lexical: str
    datatype: Optional[Iri] = None
    language: Optional[str] = None

    def __post_init__(self):
        if self.datatype is not None and self.language is not None:
            raise ValueError("a literal cannot carry both a datatype and a language tag")

    def n3(self) -> str:
        out = '"' + _escape_string(self.lexical) + '"'
        if self.language is not None:
            return out + "@" + self.language
        if self.datatype is not None:
            return out + "^^" + self.datatype.n3()
        return out


Term = Union[Iri, BlankNode, Literal]


@dataclass(frozen=True)
class Triple:
    subject: Term
    predicate: Iri
    object: Term

    def __post_init__(self):
        if not isinstance(self.predicate, Iri):
            raise TypeError("triple predicate must be an IRI")
        if isinstance(self.subject, Literal):
            raise TypeError("triple subject must be an IRI or blank node")

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."


RDF_TYPE = Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")
SKOS = "http://www.w3.org/2004/02/skos/core#"


class TripleStore:
    """A set of triples with subject, predicate and object indexes.

    The store is mutable until :meth:`freeze` is called; after that it is
    read-only and can be shared between threads.
    """

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: set[Triple] = set()
        self._by_s: dict[Term, set[Triple]] = defaultdict(set)
        self._by_p: dict[Term, set[Triple]] = defaultdict(set)
        self._by_o: dict[Term, set[Triple]] = defaultdict(set)
        self._sp: dict[tuple[Term, Term], set[Term]] = defaultdict(set)
        self.frozen = False
        for t in triples:
            self.add(t)

    def add(self, t: Triple) -> bool:
        """Insert ``t``; return True if it was not already present."""
        if self.frozen:
            raise RuntimeError("store is frozen")
        if t in self._triples:
            return False
        self._triples.add(t)
        self._by_s[t.subject].add(t)
        self._by_p[t.predicate].add(t)
        self._by_o[t.object].add(t)
        self._sp[t.subject, t.predicate].add(t.object)
        return True

    def update(self, triples: Iterable[Triple]) -> int:
        return sum(self.add(t) for t in triples)

    def freeze(self) -> "TripleStore":
        self.frozen = True
        return self

    def __len__(self):
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, t):
        return t in self._triples

    def __eq__(self, other):
        if not isinstance(other, TripleStore):
            return NotImplemented
        return self._triples == other._triples

    def triples(self) -> frozenset[Triple]:
        return frozenset(self._triples)

    def match(self, s: Optional[Term] = None, p: Optional[Term] = None,
              o: Optional[Term] = None) -> set[Triple]:
        """Return the triples matching every bound position."""
        candidates = []
        for term, index in ((s, self._by_s), (p, self._by_p), (o, self._by_o)):
            if term is not None:
                found = index.get(term)
                if not found:
                    return set()
                candidates.append(found)
        if not candidates:
            return set(self._triples)
        candidates.sort(key=len)
        smallest = candidates[0]
        return {t for t in smallest
                if (s is None or t.subject == s)
                and (p is None or t.predicate == p)
                and (o is None or t.object == o)}

    def objects(self, s: Term, p: Term) -> set[Term]:
        return set(self._sp.get((s, p), ()))

    def instances_of(self, class_iri: Iri) -> set[Term]:
        return {t.subject for t in self._by_o.get(class_iri, ()) if t.predicate == RDF_TYPE}

    def nodes_of(self, p: Iri) -> set[Term]:
        """Every term appearing as subject or object of a ``p`` triple."""
        out = set()
        for t in self._by_p.get(p, ()):
            out.add(t.subject)
            out.add(t.object)
        return out


# N-Triples parsing

class NTriplesSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
          '"': '"', "'": "'", "\\": "\\"}
_BNODE = re.compile(r"[A-Za-z0-9_\u00C0-\U000EFFFF](?:[A-Za-z0-9_.\-\u00B7\u00C0-\U000EFFFF]*"
                    r"[A-Za-z0-9_\-\u00B7\u00C0-\U000EFFFF])?")
_LANG = re.compile(r"[A-Za-z]+(?:-[A-Za-z0-9]+)*")


class _LineParser:
    def __init__(self, text: str, lineno: int):
        self.text = text
        self.pos = 0
        self.lineno = lineno

    def error(self, message: str, pos: Optional[int] = None):
        col = (self.pos if pos is None else pos) + 1
        raise NTriplesSyntaxError(message, self.lineno, col)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text) or self.text[self.pos] == "#"

    def uchar(self, width: int) -> str:
        digits = self.text[self.pos:self.pos + width]
        if len(digits) != width or not all(c in "0123456789abcdefABCDEF" for c in digits):
            self.error(f"bad \\{'u' if width == 4 else 'U'} escape")
        self.pos += width
        try:
            return chr(int(digits, 16))
        except ValueError:
            self.error("escape outside the Unicode range")

    def iri(self) -> Iri:
        start = self.pos
        self.pos += 1  # '<'
        chars = []
        while True:
            c = self.peek()
            if not c:
                self.error("unterminated IRI", start)
            self.pos += 1
            if c == ">":
                break
            if c == "\\":
                kind = self.peek()
                self.pos += 1
                if kind == "u":
                    chars.append(self.uchar(4))
                elif kind == "U":
                    chars.append(self.uchar(8))
                else:
                    self.error("only \\u and \\U escapes are allowed in IRIs", self.pos - 2)
            elif c in '<"{}|^`' or c <= " ":
                self.error(f"character {c!r} not allowed in IRI", self.pos - 1)
            else:
                chars.append(c)
        value = "".join(chars)
        if not value:
            self.error("empty IRI", start)
        try:
            return Iri(value)
        except ValueError:
            self.error("escaped character not allowed in IRI", start)

    def bnode(self) -> BlankNode:
        start = self.pos
        if self.text[self.pos:self.pos + 2] != "_:":
            self.error("expected blank node")
        self.pos += 2
        m = _BNODE.match(self.text, self.pos)
        if not m:
            self.error("bad blank node label", start)
        self.pos = m.end()
        return BlankNode(m.group())

    def literal(self) -> Literal:
        start = self.pos
        self.pos += 1
        chars = []
        while True:
            c = self.peek()
            if not c:
                self.error("unterminated string literal", start)
            self.pos += 1
            if c == '"':
                break
            if c == "\\":
                kind = self.peek()
                self.pos += 1
                if kind == "u":
                    chars.append(self.uchar(4))
                elif kind == "U":
                    chars.append(self.uchar(8))
                elif kind in _ECHAR:
                    chars.append(_ECHAR[kind])
                else:
                    self.error("bad string escape", self.pos - 2)
            elif c in "\n\r":
                self.error("newline in string literal", self.pos - 1)
            else:
                chars.append(c)
        lexical = "".join(chars)
        if self.peek() == "@":
            m = _LANG.match(self.text, self.pos + 1)
            if not m:
                self.error("bad language tag")
            self.pos = m.end()
            return Literal(lexical, language=m.group())
        if self.text.startswith("^^", self.pos):
            self.pos += 2
            if self.peek() != "<":
                self.error("expected datatype IRI")
            return Literal(lexical, datatype=self.iri())
        return Literal(lexical)

    def term(self, role: str) -> Term:
        self.skip_ws()
        c = self.peek()
        if c == "<":
            return self.iri()
        if c == "_" and role != "predicate":
            return self.bnode()
        if c == '"' and role == "object":
            return self.literal()
        if not c or c == "#" or c == ".":
            self.error(f"missing {role}")
        self.error(f"unexpected {c!r} where {role} expected")

    def triple(self) -> Triple:
        s = self.term("subject")
        p = self.term("predicate")
        o = self.term("object")
        self.skip_ws()
        if self.peek() != ".":
            self.error("expected '.'")
        self.pos += 1
        if not self.at_end():
            self.error("trailing content after '.'")
        return Triple(s, p, o)


def iter_ntriples(lines: Iterable[str]) -> Iterator[Triple]:
    """Stream triples from an iterable of N-Triples lines."""
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        parser = _LineParser(line, lineno)
        if parser.at_end():
            continue
        yield parser.triple()


def parse_ntriples(text: str) -> list[Triple]:
    """Parse an N-Triples document into a list of triples in file order.

    Raises :class:`NTriplesSyntaxError` (with 1-based line and column) on the
    first malformed line.
    """
    # split on LF only: str.splitlines() would also break on U+2028 etc.
    return list(iter_ntriples(text.split("\n")))


def _escape_string(s: str) -> str:
    return (s.replace("\\", "\\\\").replace('"', '\\"')
             .replace("\n", "\\n").replace("\r", "\\r"))


def serialize_ntriples(store: Iterable[Triple]) -> str:
    """Canonical N-Triples: one triple per line, lines sorted, LF endings."""
    lines = sorted(t.n3() for t in store)
    return "".join(line + "\n" for line in lines)


def load_stores(paths: Iterable[str]) -> TripleStore:
    """Merge one or more N-Triples files into a single store."""
    store = TripleStore()
    for path in paths:
        with open(path, encoding="utf-8", newline="") as fh:
            store.update(iter_ntriples(fh))
    return store


# CURIEs

class UnboundPrefixError(KeyError):
    def __init__(self, prefix: str):
        super().__init__(prefix)
        self.prefix = prefix

    def __str__(self):
        return f"unbound prefix {self.prefix!r}"


class PrefixMap(dict):
    """Prefix label -> namespace IRI. Rebinding a label replaces it."""

    def bind(self, prefix: str, namespace: str) -> None:
        self[prefix] = namespace


def resolve_curie(prefixes: PrefixMap, token: str) -> Iri:
    if token.startswith("<") and token.endswith(">"):
        return Iri(token[1:-1])
    prefix, sep, local = token.partition(":")
    if not sep:
        raise ValueError(f"not a CURIE or <IRI>: {token!r}")
    if prefix not in prefixes:
        raise UnboundPrefixError(prefix)
    return Iri(prefixes[prefix] + local)
