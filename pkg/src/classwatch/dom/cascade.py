"""Cascade resolution: importance > inline > specificity > source order,
plus inheritance for the small inheritable property set."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .css import Stylesheet, _parse_declarations
from .nodes import DomNode
from .normalize import normalize_value
from .selectors import matches, specificity

INHERITABLE = frozenset({"font-size", "font-weight", "color", "text-align"})

PROVENANCE_INLINE = "inline"
PROVENANCE_INHERITED = "inherited"


@dataclass(frozen=True)
class StyleEntry:
    value: str
    provenance: str  # "inline" | "rule:<order>" | "inherited"


def _declared_map(node: DomNode, stylesheets: Iterable[Stylesheet]) -> dict:
    """Winning declared value per property for one node (no inheritance)."""
    # candidate: (important, is_inline, specificity, order, tie) -> value
    best: dict[str, tuple] = {}

    def offer(prop: str, key: tuple, value: str, provenance: str) -> None:
        current = best.get(prop)
        if current is None or key >= current[0]:
            best[prop] = (key, value, provenance)

    order_base = 0
    for sheet in stylesheets:
        for rule_index, rule in enumerate(sheet):
            spec = None
            for selector in rule.selectors:
                if not selector.has_pseudo and matches(node, selector):
                    s = specificity(selector)
                    if spec is None or s > spec:
                        spec = s
            if spec is None:
                continue
            for position, decl in enumerate(rule.declarations):
                offer(
                    decl.prop,
                    (decl.important, False, spec, order_base + rule_index, position),
                    decl.value,
                    f"rule:{rule.order}",
                )
        order_base += len(sheet.rules)

    inline = node.attr("style")
    if inline:
        declarations, _ = _parse_declarations(inline)
        for position, decl in enumerate(declarations):
            offer(
                decl.prop,
                (decl.important, True, (0, 0, 0), order_base, position),
                decl.value,
                PROVENANCE_INLINE,
            )
    return {prop: (value, provenance) for prop, (_, value, provenance) in best.items()}


def computed_style(
    node: DomNode,
    stylesheets: Iterable[Stylesheet],
    tree: Optional[DomNode] = None,
) -> dict:
    """Computed StyleMap: property -> StyleEntry with canonical values.

    Declared properties win per the cascade; undeclared inheritable
    properties take the nearest ancestor's computed value.
    """
    sheets = list(stylesheets)
    result = {
        prop: StyleEntry(normalize_value(prop, value), provenance)
        for prop, (value, provenance) in _declared_map(node, sheets).items()
    }
    missing = set(INHERITABLE) - set(result)
    if missing:
        for ancestor in node.ancestors():
            if not ancestor.is_element or ancestor.is_root:
                continue
            ancestral = _declared_map(ancestor, sheets)
            for prop in list(missing):
                if prop in ancestral:
                    value, _ = ancestral[prop]
                    result[prop] = StyleEntry(
                        normalize_value(prop, value), PROVENANCE_INHERITED
                    )
                    missing.discard(prop)
            if not missing:
                break
    return result
