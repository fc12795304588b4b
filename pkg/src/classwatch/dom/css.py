"""CSS parser: rules, declarations, !important; malformed input never aborts."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .selectors import Selector, SelectorError, parse_selector_list

_COMMENT = re.compile(r"/\*.*?\*/", re.S)
_IMPORTANT = re.compile(r"!\s*important\s*$", re.I)


@dataclass(frozen=True)
class Declaration:
    prop: str
    value: str
    important: bool = False


@dataclass
class Rule:
    selectors: list  # list[Selector]
    selector_text: str
    declarations: list  # list[Declaration]
    order: int  # global source-order index across the sheet


@dataclass
class Stylesheet:
    rules: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.rules)


def _parse_declarations(body: str) -> tuple[list[Declaration], list[str]]:
    declarations = []
    diagnostics = []
    for chunk in body.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        prop, sep, value = chunk.partition(":")
        prop, value = prop.strip().lower(), value.strip()
        if not sep or not prop or not value:
            diagnostics.append(f"dropped malformed declaration {chunk!r}")
            continue
        important = False
        match = _IMPORTANT.search(value)
        if match:
            important = True
            value = value[: match.start()].rstrip()
        declarations.append(Declaration(prop, value, important))
    return declarations, diagnostics


def parse_css(text: str, order_base: int = 0) -> tuple[Stylesheet, list[str]]:
    """Best-effort parse; unparseable rules are dropped and counted."""
    sheet = Stylesheet()
    diagnostics: list[str] = []
    text = _COMMENT.sub("", text)
    i, n = 0, len(text)
    order = order_base
    while i < n:
        brace = text.find("{", i)
        if brace == -1:
            if text[i:].strip():
                diagnostics.append("trailing text without a rule body dropped")
            break
        selector_text = text[i:brace].strip()
        end = text.find("}", brace)
        if end == -1:
            diagnostics.append("unterminated rule body dropped")
            break
        body = text[brace + 1 : end]
        i = end + 1
        if selector_text.startswith("@"):
            # at-rules (media queries, imports) are out of the supported subset
            diagnostics.append(f"dropped at-rule {selector_text.split()[0]}")
            # skip the whole block if it nests
            depth = body.count("{")
            while depth > 0 and i < n:
                close = text.find("}", i)
                if close == -1:
                    break
                depth -= 1
                i = close + 1
            continue
        if not selector_text or "}" in selector_text:
            stray = selector_text.count("}")
            if stray:
                diagnostics.append("stray '}' dropped")
                selector_text = selector_text.rsplit("}", 1)[-1].strip()
            if not selector_text:
                diagnostics.append("rule without selector dropped")
                continue
        try:
            selectors = parse_selector_list(selector_text)
        except SelectorError as exc:
            diagnostics.append(f"dropped rule with bad selector: {exc}")
            continue
        declarations, decl_diags = _parse_declarations(body)
        diagnostics.extend(decl_diags)
        sheet.rules.append(Rule(selectors, selector_text, declarations, order))
        order += 1
    return sheet, diagnostics
