"""Parser for context specifications.

A context names the class whose instances are compared and the relations
whose objects make up each instance's features::

    PREFIX skos: <http://www.w3.org/2004/02/skos/core#>
    [skos:Concept]->{ },{(skos:broader, Inter)}
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from .rdf import Iri, PrefixMap, UnboundPrefixError, resolve_curie

__all__ = [
    "Operator",
    "RelationSpec",
    "ContextSpec",
    "ContextSyntaxError",
    "ContextValidationError",
    "parse_context",
    "parse_prefixes",
    "validate_context",
    "load_context",
    "format_context",
]


class Operator(str, Enum):
    INTER = "Inter"


@dataclass(frozen=True)
class RelationSpec:
    predicate: Iri
    operator: str


@dataclass(frozen=True)
class ContextSpec:
    prefixes: tuple[tuple[str, str], ...]
    class_ref: Iri
    relation_specs: tuple[RelationSpec, ...]
    attribute_specs: tuple[str, ...] = field(default=())

    @property
    def prefix_map(self) -> PrefixMap:
        return PrefixMap(self.prefixes)

    @property
    def predicates(self) -> tuple[Iri, ...]:
        return tuple(r.predicate for r in self.relation_specs)

    def fingerprint(self) -> str:
        rels = ",".join(r.predicate.value for r in self.relation_specs)
        return f"{self.class_ref.value}|{rels}"


class ContextSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ContextValidationError(ValueError):
    pass


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"\s]*>)
  | (?P<arrow>->)
  | (?P<punct>[\[\]{}(),])
  | (?P<curie>(?:[A-Za-z_][\w.\-]*)?:[\w.\-]*)
  | (?P<ident>[A-Za-z_][\w\-]*)
""", re.VERBOSE)


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> Iterator[_Token]:
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ContextSyntaxError(f"unexpected character {text[pos]!r}",
                                     line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            yield _Token(kind, m.group(), line, pos - line_start + 1)
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    yield _Token("eof", "", line, pos - line_start + 1)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.i = 0
        self.prefixes = PrefixMap()

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.tok
        found = repr(tok.text) if tok.kind != "eof" else "end of input"
        raise ContextSyntaxError(f"{message}, found {found}", tok.line, tok.column)

    def expect(self, text: str) -> _Token:
        if self.tok.text != text or self.tok.kind in ("iri", "eof"):
            self.fail(f"expected {text!r}")
        tok = self.tok
        self.i += 1
        return tok

    def prefix_decls(self):
        while self.tok.kind == "ident" and self.tok.text == "PREFIX":
            self.i += 1
            tok = self.tok
            if tok.kind != "curie" or not tok.text.endswith(":") or tok.text.count(":") != 1:
                self.fail("expected prefix name ending in ':'")
            self.i += 1
            if self.tok.kind != "iri":
                self.fail("expected <IRI>")
            self.prefixes.bind(tok.text[:-1], self.tok.text[1:-1])
            self.i += 1

    def ref(self) -> Iri:
        tok = self.tok
        if tok.kind not in ("iri", "curie"):
            self.fail("expected CURIE or <IRI>")
        self.i += 1
        try:
            return resolve_curie(self.prefixes, tok.text)
        except UnboundPrefixError as exc:
            raise ContextSyntaxError(f"unbound prefix {exc.prefix!r}", tok.line, tok.column) from None
        except ValueError as exc:
            raise ContextSyntaxError(str(exc), tok.line, tok.column) from None

    def attr_list(self) -> tuple[str, ...]:
        # attributes are kept verbatim; validation rejects them
        items, current, depth = [], [], 0
        while not (self.tok.text == "}" and depth == 0 and self.tok.kind == "punct"):
            tok = self.tok
            if tok.kind == "eof":
                self.fail("unterminated attribute block")
            if tok.text in "([{" and tok.kind == "punct":
                depth += 1
            elif tok.text in ")]}" and tok.kind == "punct":
                depth -= 1
            if tok.text == "," and depth == 0:
                items.append(" ".join(current))
                current = []
            else:
                current.append(tok.text)
            self.i += 1
        if current:
            items.append(" ".join(current))
        return tuple(items)

    def rel_spec(self) -> RelationSpec:
        self.expect("(")
        predicate = self.ref()
        self.expect(",")
        if self.tok.kind != "ident":
            self.fail("expected operator name")
        op = self.tok.text
        self.i += 1
        self.expect(")")
        return RelationSpec(predicate, op)

    def context(self) -> ContextSpec:
        self.prefix_decls()
        self.expect("[")
        class_ref = self.ref()
        self.expect("]")
        self.expect("->")
        self.expect("{")
        attrs = self.attr_list()
        self.expect("}")
        self.expect(",")
        self.expect("{")
        rels = []
        if self.tok.text != "}":
            rels.append(self.rel_spec())
            while self.tok.text == ",":
                self.i += 1
                rels.append(self.rel_spec())
        self.expect("}")
        if self.tok.kind != "eof":
            self.fail("unexpected trailing input")
        return ContextSpec(tuple(self.prefixes.items()), class_ref, tuple(rels), attrs)


def parse_context(text: str) -> ContextSpec:
    """Parse context text into an unvalidated :class:`ContextSpec`.

    CURIEs are resolved against the file's own PREFIX declarations.
    """
    return _Parser(text).context()


def parse_prefixes(text: str) -> PrefixMap:
    """Read only the leading PREFIX declarations of a context file."""
    parser = _Parser(text)
    parser.prefix_decls()
    return parser.prefixes


def validate_context(raw: ContextSpec) -> ContextSpec:
    if raw.attribute_specs:
        raise ContextValidationError(
            f"attribute comparison unsupported: {', '.join(raw.attribute_specs)}")
    if not raw.relation_specs:
        raise ContextValidationError("context has no relation specs")
    rels = []
    for rel in raw.relation_specs:
        try:
            op = Operator(rel.operator)
        except ValueError:
            raise ContextValidationError(f"unsupported operator {rel.operator}") from None
        rels.append(RelationSpec(rel.predicate, op))
    return ContextSpec(raw.prefixes, raw.class_ref, tuple(rels), ())


def load_context(path: str) -> ContextSpec:
    with open(path, encoding="utf-8") as fh:
        return validate_context(parse_context(fh.read()))


def format_context(spec: ContextSpec) -> str:
    """Pretty-print ``spec``; parsing the output gives back ``spec``."""
    lines = [f"PREFIX {p}: <{ns}>" for p, ns in spec.prefixes]
    attrs = ", ".join(spec.attribute_specs)
    rels = ",".join(f"({r.predicate.n3()}, {getattr(r.operator, 'value', r.operator)})"
                    for r in spec.relation_specs)
    lines.append(f"[{spec.class_ref.n3()}]->{{ {attrs} }},{{{rels}}}")
    return "\n".join(lines) + "\n"
