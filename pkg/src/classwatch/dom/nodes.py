"""DOM node model shared by the HTML parser, selector engine, and cascade."""

from __future__ import annotations

from typing import Iterator, Optional

VOID_ELEMENTS = frozenset({"input", "img", "br", "hr", "meta", "link"})

ROOT_TAG = "#document"


class DomNode:
    """Element or text node. The parser hands back a synthetic root element
    with tag ``#document``; it never matches selectors."""

    __slots__ = ("kind", "tag", "attrs", "children", "text", "parent")

    def __init__(self, kind: str, tag: str = "", attrs: Optional[dict] = None,
                 text: str = "", parent: Optional["DomNode"] = None):
        self.kind = kind  # "element" | "text"
        self.tag = tag
        self.attrs = attrs if attrs is not None else {}
        self.children: list[DomNode] = []
        self.text = text
        self.parent = parent

    @classmethod
    def element(cls, tag: str, attrs: Optional[dict] = None,
                parent: Optional["DomNode"] = None) -> "DomNode":
        return cls("element", tag=tag.lower(), attrs=attrs, parent=parent)

    @classmethod
    def text_node(cls, text: str, parent: Optional["DomNode"] = None) -> "DomNode":
        return cls("text", text=text, parent=parent)

    @property
    def is_element(self) -> bool:
        return self.kind == "element"

    @property
    def is_root(self) -> bool:
        return self.tag == ROOT_TAG

    def attr(self, name: str) -> Optional[str]:
        return self.attrs.get(name.lower())

    @property
    def id(self) -> Optional[str]:
        return self.attrs.get("id")

    @property
    def classes(self) -> frozenset:
        value = self.attrs.get("class", "")
        return frozenset(value.split())

    def append(self, child: "DomNode") -> None:
        child.parent = self
        self.children.append(child)

    def walk(self) -> Iterator["DomNode"]:
        """Document-order traversal of this node and its descendants."""
        yield self
        for child in self.children:
            yield from child.walk()

    def elements(self) -> Iterator["DomNode"]:
        for node in self.walk():
            if node.is_element and not node.is_root:
                yield node

    def text_content(self) -> str:
        if self.kind == "text":
            return self.text
        return "".join(child.text_content() for child in self.children)

    def ancestors(self) -> Iterator["DomNode"]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def __repr__(self) -> str:
        if self.kind == "text":
            return f"Text({self.text!r})"
        return f"<{self.tag} {self.attrs}>[{len(self.children)} children]"
