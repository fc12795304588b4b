"""Selector grammar: type/#id/.class/:hover compounds joined by ' ' and '>'."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .nodes import DomNode


class SelectorError(Exception):
    pass


@dataclass(frozen=True)
class Compound:
    type_name: Optional[str] = None  # None = universal
    ids: frozenset = frozenset()
    classes: frozenset = frozenset()
    pseudos: frozenset = frozenset()  # only "hover" recognized

    def serialize(self) -> str:
        parts = [self.type_name or ""]
        parts += [f"#{i}" for i in sorted(self.ids)]
        parts += [f".{c}" for c in sorted(self.classes)]
        parts += [f":{p}" for p in sorted(self.pseudos)]
        out = "".join(parts)
        return out or "*"


@dataclass(frozen=True)
class Selector:
    """Compounds right-to-left significant; combinators[i] joins compound i
    to compound i+1 (' ' descendant, '>' child)."""

    compounds: tuple
    combinators: tuple  # length = len(compounds) - 1

    def serialize(self) -> str:
        out = self.compounds[0].serialize()
        for comb, compound in zip(self.combinators, self.compounds[1:]):
            out += " " if comb == " " else " > "
            out += compound.serialize()
        return out

    @property
    def has_pseudo(self) -> bool:
        return any(c.pseudos for c in self.compounds)


_TOKEN = re.compile(r"([#.:]?)([A-Za-z_][\w-]*|\*)")


def _parse_compound(text: str) -> Compound:
    type_name = None
    ids, classes, pseudos = set(), set(), set()
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise SelectorError(f"unparseable compound {text!r}")
        prefix, name = match.groups()
        if prefix == "#":
            ids.add(name)
        elif prefix == ".":
            classes.add(name)
        elif prefix == ":":
            if name != "hover":
                raise SelectorError(f"unsupported pseudo-class :{name}")
            pseudos.add(name)
        else:
            if pos != 0 or type_name is not None:
                raise SelectorError(f"misplaced type in compound {text!r}")
            if name != "*":
                type_name = name.lower()
        pos = match.end()
    return Compound(type_name, frozenset(ids), frozenset(classes), frozenset(pseudos))


def parse_selector(text: str) -> Selector:
    """Parse one selector path (no commas; see parse_selector_list)."""
    stripped = text.strip()
    if not stripped:
        raise SelectorError("empty selector")
    # normalize child combinator spacing, then split into tokens
    tokens = stripped.replace(">", " > ").split()
    compounds: list[Compound] = []
    combinators: list[str] = []
    expect_compound = True
    for token in tokens:
        if token == ">":
            if expect_compound or not compounds:
                raise SelectorError(f"dangling '>' in {text!r}")
            combinators.append(">")
            expect_compound = True
        else:
            if not expect_compound:
                combinators.append(" ")
            compounds.append(_parse_compound(token))
            expect_compound = False
    if expect_compound:
        raise SelectorError(f"selector ends with combinator: {text!r}")
    return Selector(tuple(compounds), tuple(combinators))


def parse_selector_list(text: str) -> list[Selector]:
    """Comma-separated selector alternatives."""
    parts = [p for p in text.split(",")]
    if not any(p.strip() for p in parts):
        raise SelectorError("empty selector list")
    return [parse_selector(p) for p in parts]


def specificity(selector: Selector) -> tuple[int, int, int]:
    """(id count, class+pseudo count, type count), compared lexicographically."""
    ids = classes = types = 0
    for compound in selector.compounds:
        ids += len(compound.ids)
        classes += len(compound.classes) + len(compound.pseudos)
        if compound.type_name is not None:
            types += 1
    return (ids, classes, types)


def _compound_matches(node: DomNode, compound: Compound, *, match_hover: bool) -> bool:
    if not node.is_element or node.is_root:
        return False
    if compound.type_name is not None and node.tag != compound.type_name:
        return False
    if compound.ids and not (len(compound.ids) == 1 and node.id in compound.ids):
        return False
    if not compound.classes <= node.classes:
        return False
    if compound.pseudos and not match_hover:
        # state pseudo-classes are statically unmatchable
        return False
    return True


def matches(node: DomNode, selector: Selector, *, match_hover: bool = False) -> bool:
    """Full-path match of ``selector`` against ``node`` (rightmost compound)."""
    compounds = selector.compounds
    if not _compound_matches(node, compounds[-1], match_hover=match_hover):
        return False
    return _match_left(node, selector, len(compounds) - 2)


def _match_left(node: DomNode, selector: Selector, index: int) -> bool:
    if index < 0:
        return True
    combinator = selector.combinators[index]
    compound = selector.compounds[index]
    if combinator == ">":
        parent = node.parent
        if parent is None or not _compound_matches(parent, compound, match_hover=False):
            return False
        return _match_left(parent, selector, index - 1)
    for ancestor in node.ancestors():
        if _compound_matches(ancestor, compound, match_hover=False):
            if _match_left(ancestor, selector, index - 1):
                return True
    return False


def query(selector, tree: DomNode) -> list[DomNode]:
    """Document-order elements matching the selector (or any alternative in a
    list). :hover anywhere makes a path unmatchable in query context."""
    selectors = selector if isinstance(selector, list) else [selector]
    results = []
    for node in tree.elements():
        if any(not s.has_pseudo and matches(node, s) for s in selectors):
            results.append(node)
    return results
