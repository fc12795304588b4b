"""Deterministic element serialization used for fingerprinting."""

from __future__ import annotations

import hashlib
from typing import Iterable, Optional

from .cascade import computed_style
from .nodes import DomNode


def serialize_normalized(
    node: DomNode,
    stylesheets: Iterable = (),
    style_properties: Optional[Iterable[str]] = None,
) -> str:
    """Canonical string for a node: tag, sorted attributes, the computed
    style entries for ``style_properties`` sorted by name, then children.
    Whitespace-only text nodes are dropped, other text is trimmed.
    """
    sheets = list(stylesheets)
    props = sorted(style_properties) if style_properties else []

    def render(current: DomNode) -> str:
        if current.kind == "text":
            text = current.text.strip()
            return f"text({text})" if text else ""
        attrs = ";".join(f"{k}={v}" for k, v in sorted(current.attrs.items()))
        style = ""
        if props:
            computed = computed_style(current, sheets)
            style = ";".join(
                f"{p}:{computed[p].value}" for p in props if p in computed
            )
        inner = ",".join(
            part for part in (render(child) for child in current.children) if part
        )
        return f"{current.tag}[{attrs}][{style}]({inner})"

    return render(node)


def fingerprint_digest(serialized: str) -> str:
    return hashlib.sha256(serialized.encode("utf-8")).hexdigest()
