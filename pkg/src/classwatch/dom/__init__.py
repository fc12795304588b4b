"""HTML/CSS evaluation substrate: parsing, selectors, cascade, normalization."""

from .cascade import INHERITABLE, StyleEntry, computed_style
from .css import Declaration, Rule, Stylesheet, parse_css
from .html_parser import parse_html
from .nodes import ROOT_TAG, VOID_ELEMENTS, DomNode
from .normalize import CSS_NAMED_COLORS, normalize_value
from .selectors import (
    Compound,
    Selector,
    SelectorError,
    matches,
    parse_selector,
    parse_selector_list,
    query,
    specificity,
)
from .serialize import fingerprint_digest, serialize_normalized

__all__ = [
    "CSS_NAMED_COLORS",
    "Compound",
    "Declaration",
    "DomNode",
    "INHERITABLE",
    "ROOT_TAG",
    "Rule",
    "Selector",
    "SelectorError",
    "StyleEntry",
    "Stylesheet",
    "VOID_ELEMENTS",
    "computed_style",
    "fingerprint_digest",
    "matches",
    "normalize_value",
    "parse_css",
    "parse_html",
    "parse_selector",
    "parse_selector_list",
    "query",
    "serialize_normalized",
    "specificity",
]
