"""Cascade resolution: directed cases plus randomized oracle agreement."""

from __future__ import annotations

import pytest

from classwatch.dom import parse_css, parse_html, parse_selector_list, query
from classwatch.dom.cascade import (
    PROVENANCE_INHERITED,
    PROVENANCE_INLINE,
    computed_style,
)
from classwatch.dom.selectors import matches, parse_selector

from oracles import (
    oracle_computed,
    oracle_matches,
    oracle_query,
    random_case,
    render_selector,
    selector_has_hover,
)


def styled(html: str, *css_texts: str, selector: str = "#t"):
    root, _ = parse_html(html)
    sheets = [parse_css(text)[0] for text in css_texts]
    node = query(parse_selector(selector), root)[0]
    return computed_style(node, sheets), sheets


# ---------------------------------------------------------------------------
# directed cascade cases

def test_later_rule_wins_source_order_tie():
    style, _ = styled('<p id="t"></p>', "p { color: red } p { color: blue }")
    assert style["color"].value == "#0000ff"
    assert style["color"].provenance == "rule:1"


def test_source_order_tie_across_sheets():
    style, _ = styled('<p id="t"></p>', "p { color: red }", "p { color: blue }")
    assert style["color"].value == "#0000ff"


def test_later_declaration_wins_within_rule():
    style, _ = styled('<p id="t"></p>', "p { color: red; color: blue }")
    assert style["color"].value == "#0000ff"


def test_higher_specificity_beats_source_order():
    style, _ = styled(
        '<p id="t" class="x"></p>', "p.x { color: red } p { color: blue }"
    )
    assert style["color"].value == "#ff0000"


def test_id_beats_any_class_count():
    style, _ = styled(
        '<p id="t" class="x y"></p>', "#t { color: red } p.x.y { color: blue }"
    )
    assert style["color"].value == "#ff0000"


def test_inline_beats_stylesheet():
    style, _ = styled(
        '<p id="t" style="color: green"></p>', "#t { color: red !important }"
    )
    assert style["color"].value == "#ff0000"
    style, _ = styled('<p id="t" style="color: green"></p>', "#t { color: red }")
    assert style["color"].value == "#008000"
    assert style["color"].provenance == PROVENANCE_INLINE


def test_important_beats_inline_and_specificity():
    style, _ = styled(
        '<p id="t" class="x" style="color: green"></p>',
        "p { color: blue !important } #t.x { color: red }",
    )
    assert style["color"].value == "#0000ff"


def test_important_inline_beats_important_rule():
    style, _ = styled(
        '<p id="t" style="color: green !important"></p>',
        "#t { color: red !important }",
    )
    assert style["color"].value == "#008000"


def test_hover_rules_never_apply_to_computed_style():
    style, _ = styled(
        '<p id="t"></p>', "p:hover { color: red } p { color: blue }"
    )
    assert style["color"].value == "#0000ff"


def test_values_are_normalized():
    style, _ = styled(
        '<p id="t"></p>', "p { font-weight: bold; width: 350.0px; color: RED }"
    )
    assert style["font-weight"].value == "700"
    assert style["width"].value == "350px"
    assert style["color"].value == "#ff0000"


def test_best_alternative_specificity_is_used():
    # the rule matches via both alternatives; the stronger one must count
    style, _ = styled(
        '<div><p id="t" class="x"></p></div>',
        "p, #t { color: red } p.x { color: blue }",
    )
    assert style["color"].value == "#ff0000"


# ---------------------------------------------------------------------------
# inheritance

def test_inheritable_properties_flow_from_nearest_ancestor():
    style, _ = styled(
        '<div class="outer"><div class="mid"><p id="t"></p></div></div>',
        ".outer { color: red; font-size: 10px } .mid { color: blue }",
    )
    assert style["color"].value == "#0000ff"
    assert style["color"].provenance == PROVENANCE_INHERITED
    assert style["font-size"].value == "10px"


def test_own_declaration_beats_inheritance():
    style, _ = styled(
        '<div class="outer"><p id="t"></p></div>',
        ".outer { color: red } p { color: blue }",
    )
    assert style["color"].provenance == "rule:1"
    assert style["color"].value == "#0000ff"


def test_non_inheritable_properties_do_not_flow():
    style, _ = styled(
        '<div class="outer"><p id="t"></p></div>',
        ".outer { display: flex; width: 10px }",
    )
    assert "display" not in style
    assert "width" not in style


def test_inline_ancestor_style_inherits():
    style, _ = styled('<div style="color: teal"><p id="t"></p></div>')
    assert style["color"].value == "#008080"
    assert style["color"].provenance == PROVENANCE_INHERITED


# ---------------------------------------------------------------------------
# randomized oracle agreement (small here; scaled up in the acceptance suite)

@pytest.mark.parametrize("seed", range(40))
def test_cascade_and_query_agree_with_oracle(seed):
    root, elements, inline_styles, structured, parsed, probes = random_case(
        seed, max_nodes=25, max_rules=12
    )
    for node in elements:
        computed = {p: e.value for p, e in computed_style(node, parsed).items()}
        assert computed == oracle_computed(node, structured, inline_styles)
    for probe in probes:
        text = render_selector(probe)
        engine_nodes = query(parse_selector_list(text), root)
        assert engine_nodes == oracle_query([probe], root), text


@pytest.mark.parametrize("seed", range(20))
def test_matches_agrees_with_exhaustive_oracle(seed):
    root, elements, _, _, _, probes = random_case(seed, max_nodes=20, max_rules=2)
    for probe in probes:
        selector = parse_selector(render_selector(probe))
        for node in elements:
            for match_hover in (False, True):
                got = matches(node, selector, match_hover=match_hover)
                want = oracle_matches(node, probe, match_hover=match_hover)
                assert got == want, (render_selector(probe), node, match_hover)


def test_oracle_sanity_hover_alternative_is_unmatchable_in_query():
    root, _ = parse_html('<p id="t"></p>')
    probe = (((None, "t", (), True),), ())
    # guard the oracle itself: a hover compound can't match in query context
    assert oracle_query([probe], root) == []
