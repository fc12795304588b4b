"""Error-recovering HTML parser for the bounded subset the exercises use.

Never fails hard: unclosed elements auto-close, stray close tags are dropped,
comments and doctypes are discarded. Script bodies are captured as opaque
text (no tag recognition inside <script>).
"""

from __future__ import annotations

from .nodes import ROOT_TAG, VOID_ELEMENTS, DomNode

_ENTITIES = {"&amp;": "&", "&lt;": "<", "&gt;": ">", "&quot;": '"'}


def _decode_entities(text: str) -> str:
    for entity, char in _ENTITIES.items():
        text = text.replace(entity, char)
    return text


def _parse_attrs(raw: str) -> dict:
    attrs: dict = {}
    i, n = 0, len(raw)
    while i < n:
        while i < n and raw[i] in " \t\r\n":
            i += 1
        if i >= n:
            break
        start = i
        while i < n and raw[i] not in " \t\r\n=":
            i += 1
        name = raw[start:i].lower()
        if not name:
            i += 1
            continue
        while i < n and raw[i] in " \t\r\n":
            i += 1
        value = ""
        if i < n and raw[i] == "=":
            i += 1
            while i < n and raw[i] in " \t\r\n":
                i += 1
            if i < n and raw[i] in "\"'":
                quote = raw[i]
                i += 1
                start = i
                while i < n and raw[i] != quote:
                    i += 1
                value = raw[start:i]
                i += 1
            else:
                start = i
                while i < n and raw[i] not in " \t\r\n":
                    i += 1
                value = raw[start:i]
        if name not in attrs:
            attrs[name] = _decode_entities(value)
    return attrs


def parse_html(text: str) -> tuple[DomNode, list[str]]:
    """Return (root element tagged '#document', diagnostics)."""
    root = DomNode.element(ROOT_TAG)
    stack = [root]
    diagnostics: list[str] = []

    def flush_text(buffer: str) -> None:
        if buffer:
            stack[-1].append(DomNode.text_node(_decode_entities(buffer)))

    i, n = 0, len(text)
    buffer = ""
    while i < n:
        char = text[i]
        if char != "<":
            buffer += char
            i += 1
            continue

        if text.startswith("<!--", i):
            end = text.find("-->", i + 4)
            if end == -1:
                diagnostics.append("unterminated comment")
                flush_text(buffer)
                return root, diagnostics
            i = end + 3
            continue
        if text.startswith("<!", i) or text.startswith("<?", i):
            end = text.find(">", i)
            i = n if end == -1 else end + 1
            continue

        close = text.find(">", i)
        if close == -1:
            diagnostics.append("unterminated tag at end of input")
            buffer += text[i:]
            break
        raw = text[i + 1 : close].strip()
        i = close + 1
        if not raw:
            diagnostics.append("empty tag dropped")
            continue

        flush_text(buffer)
        buffer = ""

        if raw.startswith("/"):
            name = raw[1:].strip().lower()
            open_tags = [node.tag for node in stack[1:]]
            if name in open_tags:
                # auto-close everything opened inside the closed element
                while stack[-1].tag != name:
                    diagnostics.append(f"auto-closed <{stack[-1].tag}>")
                    stack.pop()
                stack.pop()
            else:
                diagnostics.append(f"ignored mismatched close tag </{name}>")
            continue

        self_closing = raw.endswith("/")
        if self_closing:
            raw = raw[:-1].rstrip()
        name, _, attr_text = raw.partition(" ")
        name = name.lower()
        if not name:
            diagnostics.append("empty tag name dropped")
            continue
        node = DomNode.element(name, _parse_attrs(attr_text))
        stack[-1].append(node)

        if name == "script" and not self_closing:
            end = text.find("</script", i)
            if end == -1:
                node.append(DomNode.text_node(text[i:]))
                diagnostics.append("auto-closed <script> at end of input")
                i = n
            else:
                body = text[i:end]
                if body:
                    node.append(DomNode.text_node(body))
                skip = text.find(">", end)
                i = n if skip == -1 else skip + 1
            continue

        if not self_closing and name not in VOID_ELEMENTS:
            stack.append(node)

    flush_text(buffer)
    while len(stack) > 1:
        diagnostics.append(f"auto-closed <{stack[-1].tag}> at end of input")
        stack.pop()
    return root, diagnostics
