import pytest
from hypothesis import given, settings, strategies as st

from conftest import BROADER, RELATED_MATCH, SKOS_CONCEPT
from skossim.context import (ContextSyntaxError, ContextValidationError, Operator, RelationSpec,
                             format_context, parse_context, parse_prefixes, validate_context)
from skossim.rdf import Iri

CONTEXT_1 = """PREFIX skos: <http://www.w3.org/2004/02/skos/core#>
[skos:Concept]->{ },{(skos:relatedMatch, Inter)}
"""
CONTEXT_2 = """PREFIX skos: <http://www.w3.org/2004/02/skos/core#>
[skos:Concept]->{ },{(skos:broader, Inter)}
"""


def test_context_1():
    spec = validate_context(parse_context(CONTEXT_1))
    assert spec.class_ref == SKOS_CONCEPT
    assert spec.relation_specs == (RelationSpec(RELATED_MATCH, Operator.INTER),)
    assert spec.attribute_specs == ()


def test_context_2():
    spec = parse_context(CONTEXT_2)
    assert spec.relation_specs == (RelationSpec(BROADER, "Inter"),)


def test_two_relations_in_order():
    spec = parse_context("[<urn:C>]->{ },{(<urn:p>, Inter),(<urn:q>, Inter)}")
    assert spec.class_ref == Iri("urn:C")
    assert spec.predicates == (Iri("urn:p"), Iri("urn:q"))


def test_comments_allowed():
    text = "# ctx\n" + CONTEXT_1.replace("}\n", "} # done\n")
    assert parse_context(text) == parse_context(CONTEXT_1)


def test_missing_relation_block():
    with pytest.raises(ContextSyntaxError):
        parse_context("PREFIX skos: <http://www.w3.org/2004/02/skos/core#>\n[skos:Concept]->{ }")


def test_syntax_error_position():
    with pytest.raises(ContextSyntaxError) as err:
        parse_context("[<urn:C>]->{ },\n  {(<urn:p> Inter)}")
    assert (err.value.line, err.value.column) == (2, 13)


def test_unbound_prefix():
    with pytest.raises(ContextSyntaxError, match="unbound prefix 'skos'"):
        parse_context("[skos:Concept]->{ },{(skos:broader, Inter)}")


def test_unsupported_operator():
    raw = parse_context(CONTEXT_1.replace("Inter", "Union"))
    with pytest.raises(ContextValidationError, match="unsupported operator Union"):
        validate_context(raw)


def test_operator_is_case_sensitive():
    with pytest.raises(ContextValidationError, match="inter"):
        validate_context(parse_context(CONTEXT_1.replace("Inter", "inter")))


def test_attributes_rejected_at_validation():
    raw = parse_context(CONTEXT_1.replace("{ }", "{skos:prefLabel}"))
    assert raw.attribute_specs == ("skos:prefLabel",)
    with pytest.raises(ContextValidationError, match="attribute comparison unsupported"):
        validate_context(raw)


def test_empty_relation_block_rejected_at_validation():
    raw = parse_context("[<urn:C>]->{ },{ }")
    with pytest.raises(ContextValidationError):
        validate_context(raw)


def test_parse_prefixes_only():
    pm = parse_prefixes("PREFIX ex: <urn:ex:>\nPREFIX ex: <urn:other:>\n")
    assert pm == {"ex": "urn:other:"}


def test_pretty_print_round_trip():
    for text in (CONTEXT_1, CONTEXT_2, "[<urn:C>]->{ a:b, (c) },{(<urn:p>, Inter),(<urn:q>, Union)}"):
        once = parse_context(text)
        assert parse_context(format_context(once)) == once
        assert format_context(parse_context(format_context(once))) == format_context(once)


# whitespace between tokens is insignificant

_TOKENS = ["PREFIX", "skos:", "<http://www.w3.org/2004/02/skos/core#>",
           "[", "skos:Concept", "]", "->", "{", "}", ",", "{",
           "(", "skos:relatedMatch", ",", "Inter", ")", ",", "(", "<urn:p>", ",", "Inter", ")", "}"]
# separators that must stay non-empty: between adjacent word-like tokens
_NEEDS_SPACE = {0, 1}


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(["", " ", "\n", "\t", "  \n "]), min_size=len(_TOKENS) + 1,
                max_size=len(_TOKENS) + 1))
def test_whitespace_invariance(gaps):
    pieces = [gaps[0]]
    for i, tok in enumerate(_TOKENS):
        pieces.append(tok)
        gap = gaps[i + 1]
        if i in _NEEDS_SPACE and not gap:
            gap = " "
        pieces.append(gap)
    reference = parse_context(" ".join(_TOKENS))
    assert parse_context("".join(pieces)) == reference
