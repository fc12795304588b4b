"""Selector grammar: parsing, serialization, specificity, matching."""

from __future__ import annotations

import pytest

from classwatch.dom import (
    SelectorError,
    parse_html,
    parse_selector,
    parse_selector_list,
    query,
)
from classwatch.dom.selectors import matches, specificity

DOC = """
<div id="outer" class="box">
  <p class="lead big">one</p>
  <div id="mid">
    <p id="inner" class="lead">two</p>
    <span>three</span>
  </div>
</div>
<p class="lead">four</p>
"""


@pytest.fixture
def tree():
    root, _ = parse_html(DOC)
    return root


def ids_or_texts(nodes):
    return [n.id or n.text_content().strip() for n in nodes]


# ---------------------------------------------------------------------------
# parsing and serialization

@pytest.mark.parametrize(
    "text,serialized",
    [
        ("div", "div"),
        ("#a", "#a"),
        (".b", ".b"),
        ("p.lead", "p.lead"),
        ("div#a.b.c", "div#a.b.c"),
        ("a:hover", "a:hover"),
        ("div p", "div p"),
        ("div > p", "div > p"),
        ("div>p", "div > p"),
        ("div  >  p   span", "div > p span"),
        ("*", "*"),
    ],
)
def test_parse_serialize(text, serialized):
    assert parse_selector(text).serialize() == serialized


def test_serialize_is_canonical_fixed_point():
    selector = parse_selector("div#a.z.b > p.lead:hover")
    again = parse_selector(selector.serialize())
    assert again == selector
    assert again.serialize() == selector.serialize()


def test_selector_list_parses_alternatives():
    selectors = parse_selector_list("h1, .lead , #inner")
    assert [s.serialize() for s in selectors] == ["h1", ".lead", "#inner"]


@pytest.mark.parametrize(
    "bad",
    ["", "  ", ">", "div >", "> p", "div >> p", ":focus", "a:visited",
     "p..", "#", ".", "div p >", ",", "a,,b"],
)
def test_selector_errors(bad):
    with pytest.raises(SelectorError):
        parse_selector_list(bad)


# ---------------------------------------------------------------------------
# specificity

@pytest.mark.parametrize(
    "text,expected",
    [
        ("div", (0, 0, 1)),
        ("#a", (1, 0, 0)),
        (".b", (0, 1, 0)),
        ("a:hover", (0, 1, 1)),
        ("div#a.b > p.c", (1, 2, 2)),
        ("*", (0, 0, 0)),
    ],
)
def test_specificity(text, expected):
    assert specificity(parse_selector(text)) == expected


# ---------------------------------------------------------------------------
# matching

def test_query_by_type(tree):
    assert ids_or_texts(query(parse_selector("span"), tree)) == ["three"]


def test_query_by_id_and_class(tree):
    assert ids_or_texts(query(parse_selector("#inner"), tree)) == ["inner"]
    assert len(query(parse_selector(".lead"), tree)) == 3
    assert ids_or_texts(query(parse_selector("p.lead.big"), tree)) == ["one"]


def test_query_descendant_combinator(tree):
    assert ids_or_texts(query(parse_selector("#outer p"), tree)) == ["one", "inner"]
    assert ids_or_texts(query(parse_selector("div div p"), tree)) == ["inner"]


def test_query_child_combinator(tree):
    assert ids_or_texts(query(parse_selector("#outer > p"), tree)) == ["one"]
    assert ids_or_texts(query(parse_selector("#mid > p"), tree)) == ["inner"]


def test_query_returns_document_order(tree):
    assert ids_or_texts(query(parse_selector("p"), tree)) == [
        "one", "inner", "four",
    ]


def test_query_selector_list_is_union_in_document_order(tree):
    nodes = query(parse_selector_list("span, #outer > p"), tree)
    assert ids_or_texts(nodes) == ["one", "three"]


def test_universal_compound_matches_every_element(tree):
    assert len(query(parse_selector("*"), tree)) == 6


def test_root_never_matches(tree):
    assert query(parse_selector("*"), tree) == [n for n in tree.elements()]
    assert not matches(tree, parse_selector("*"))


def test_hover_is_unmatchable_in_query_context(tree):
    assert query(parse_selector("p:hover"), tree) == []
    assert query(parse_selector_list("p:hover, span"), tree) != []


def test_matches_hover_only_with_state_flag(tree):
    node = query(parse_selector("#inner"), tree)[0]
    selector = parse_selector("p:hover")
    assert not matches(node, selector)
    assert matches(node, selector, match_hover=True)


def test_descendant_skips_levels_child_does_not(tree):
    inner = query(parse_selector("#inner"), tree)[0]
    assert matches(inner, parse_selector("#outer p"))
    assert not matches(inner, parse_selector("#outer > p"))
    assert matches(inner, parse_selector("#outer > #mid > p"))
