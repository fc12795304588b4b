"""Checkpoint/task/assertion model, config parsing, test suggestion, and
reference verification."""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from typing import Optional

from .documents import DocumentSnapshot
from .dom import SelectorError, normalize_value, parse_selector, parse_selector_list

MAX_WAIT_MS = 10_000

SUGGEST_URL_ENV = "SPARK_SUGGEST_URL"
SUGGEST_KEY_ENV = "SPARK_SUGGEST_KEY"


class ConfigError(Exception):
    """Aggregates every violation found in a checkpoint config."""

    def __init__(self, problems: list):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


class ProviderError(Exception):
    pass


# ---------------------------------------------------------------------------
# model

_INTERACTION_KINDS = {"click", "type_text", "hover", "wait"}
_ASSERTION_KINDS = {
    "exists", "count", "attribute", "text", "style", "rule_declared", "ancestor",
}
_COMPARATORS = {"=", ">=", "<="}
_COMPARATOR_ALIASES = {"==": "=", "≥": ">=", "≤": "<="}


@dataclass(frozen=True)
class InteractionStep:
    kind: str  # click | type_text | hover | wait
    selector: str = ""
    text: str = ""
    ms: int = 0

    def to_dict(self) -> dict:
        record = {"kind": self.kind}
        if self.kind == "wait":
            record["ms"] = self.ms
        else:
            record["selector"] = self.selector
            if self.kind == "type_text":
                record["text"] = self.text
        return record


@dataclass(frozen=True)
class Assertion:
    kind: str
    selector: str = ""
    min_count: int = 1
    comparator: str = "="
    n: int = 0
    attribute: str = ""
    expected: str = ""
    mode: str = "exact"  # for text: exact | contains
    property: str = ""
    ancestor: str = ""

    def to_dict(self) -> dict:
        record = {"kind": self.kind, "selector": self.selector}
        if self.kind == "exists":
            record["min_count"] = self.min_count
        elif self.kind == "count":
            record["comparator"] = self.comparator
            record["n"] = self.n
        elif self.kind == "attribute":
            record["attribute"] = self.attribute
            record["expected"] = self.expected
        elif self.kind == "text":
            record["expected"] = self.expected
            record["mode"] = self.mode
        elif self.kind in ("style", "rule_declared"):
            record["property"] = self.property
            record["expected"] = self.expected
        elif self.kind == "ancestor":
            record["ancestor"] = self.ancestor
        return record


@dataclass(frozen=True)
class Task:
    id: str
    description: str
    interaction: tuple = ()
    assertions: tuple = ()

    @property
    def requires_runtime(self) -> bool:
        return len(self.interaction) > 0

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "interaction": [step.to_dict() for step in self.interaction],
            "assertions": [a.to_dict() for a in self.assertions],
        }


@dataclass(frozen=True)
class Checkpoint:
    id: str
    title: str
    tasks: tuple = ()

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "tasks": [task.to_dict() for task in self.tasks],
        }

    def task(self, task_id: str) -> Optional[Task]:
        for task in self.tasks:
            if task.id == task_id:
                return task
        return None


@dataclass
class TaskVerification:
    task_id: str
    outcome: str  # pass | fail | unsupported
    detail: str = ""


@dataclass
class VerificationReport:
    checkpoint_id: str
    tasks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(t.outcome == "pass" for t in self.tasks)

    def to_dict(self) -> dict:
        return {
            "checkpoint_id": self.checkpoint_id,
            "passed": self.passed,
            "tasks": [
                {"task_id": t.task_id, "outcome": t.outcome, "detail": t.detail}
                for t in self.tasks
            ],
        }


# ---------------------------------------------------------------------------
# config parsing

def _check_selector(text, location: str, problems: list) -> None:
    if not isinstance(text, str) or not text.strip():
        problems.append(f"{location}: missing selector")
        return
    try:
        parse_selector_list(text)
    except SelectorError as exc:
        problems.append(f"{location}: bad selector {text!r} ({exc})")


def _parse_interaction(record, location: str, problems: list) -> Optional[InteractionStep]:
    if not isinstance(record, dict):
        problems.append(f"{location}: interaction step must be an object")
        return None
    kind = record.get("kind")
    if kind not in _INTERACTION_KINDS:
        problems.append(f"{location}: unknown interaction kind {kind!r}")
        return None
    if kind == "wait":
        ms = record.get("ms")
        if not isinstance(ms, int) or ms < 0 or ms > MAX_WAIT_MS:
            problems.append(f"{location}: wait ms must be an int in [0, {MAX_WAIT_MS}]")
            return None
        return InteractionStep("wait", ms=ms)
    _check_selector(record.get("selector"), location, problems)
    text = record.get("text", "")
    if kind == "type_text" and not isinstance(text, str):
        problems.append(f"{location}: type_text text must be a string")
        return None
    return InteractionStep(
        kind, selector=str(record.get("selector", "")), text=text if isinstance(text, str) else ""
    )


def _parse_assertion(record, location: str, problems: list) -> Optional[Assertion]:
    if not isinstance(record, dict):
        problems.append(f"{location}: assertion must be an object")
        return None
    kind = record.get("kind")
    if kind not in _ASSERTION_KINDS:
        problems.append(f"{location}: unknown assertion kind {kind!r}")
        return None
    _check_selector(record.get("selector"), location, problems)
    selector = str(record.get("selector", ""))

    if kind == "exists":
        min_count = record.get("min_count", 1)
        if not isinstance(min_count, int) or min_count < 1:
            problems.append(f"{location}: min_count must be a positive int")
            min_count = 1
        return Assertion("exists", selector=selector, min_count=min_count)
    if kind == "count":
        comparator = record.get("comparator", "=")
        comparator = _COMPARATOR_ALIASES.get(comparator, comparator)
        if comparator not in _COMPARATORS:
            problems.append(f"{location}: comparator must be one of =, >=, <=")
            comparator = "="
        n = record.get("n")
        if not isinstance(n, int) or n < 0:
            problems.append(f"{location}: n must be a non-negative int")
            n = 0
        return Assertion("count", selector=selector, comparator=comparator, n=n)
    if kind == "attribute":
        attribute = record.get("attribute")
        if not isinstance(attribute, str) or not attribute:
            problems.append(f"{location}: attribute name required")
            attribute = ""
        return Assertion(
            "attribute", selector=selector, attribute=attribute.lower(),
            expected=str(record.get("expected", "")),
        )
    if kind == "text":
        mode = record.get("mode", "exact")
        if mode not in ("exact", "contains"):
            problems.append(f"{location}: text mode must be exact or contains")
            mode = "exact"
        return Assertion(
            "text", selector=selector, expected=str(record.get("expected", "")), mode=mode
        )
    if kind in ("style", "rule_declared"):
        prop = record.get("property")
        if not isinstance(prop, str) or not prop:
            problems.append(f"{location}: property required")
            prop = ""
        return Assertion(
            kind, selector=selector, property=prop.lower(),
            expected=str(record.get("expected", "")),
        )
    # ancestor
    _check_selector(record.get("ancestor"), f"{location}.ancestor", problems)
    return Assertion("ancestor", selector=selector, ancestor=str(record.get("ancestor", "")))


def parse_checkpoint_config(text: str) -> tuple[list, list]:
    """Parse a checkpoint config document -> (checkpoints, diagnostics).

    All violations are collected and raised together as ConfigError.
    """
    problems: list[str] = []
    diagnostics: list[str] = []
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"config is not valid JSON: {exc}"]) from exc
    if isinstance(data, dict) and "checkpoints" in data:
        data = data["checkpoints"]
    if not isinstance(data, list):
        raise ConfigError(["config must be an array of checkpoints"])

    checkpoints: list[Checkpoint] = []
    seen_checkpoint_ids: set[str] = set()
    for ci, cp in enumerate(data):
        location = f"checkpoint[{ci}]"
        if not isinstance(cp, dict):
            problems.append(f"{location}: must be an object")
            continue
        cp_id = cp.get("id")
        if not isinstance(cp_id, str) or not cp_id:
            problems.append(f"{location}: missing id")
            cp_id = f"<checkpoint {ci}>"
        if cp_id in seen_checkpoint_ids:
            problems.append(f"{location}: duplicate checkpoint id {cp_id!r}")
        seen_checkpoint_ids.add(cp_id)
        title = cp.get("title", "")
        raw_tasks = cp.get("tasks")
        if not isinstance(raw_tasks, list) or not raw_tasks:
            problems.append(f"{location}: checkpoint needs at least one task")
            raw_tasks = []
        tasks: list[Task] = []
        seen_task_ids: set[str] = set()
        for ti, raw_task in enumerate(raw_tasks):
            task_loc = f"{location}.task[{ti}]"
            if not isinstance(raw_task, dict):
                problems.append(f"{task_loc}: must be an object")
                continue
            task_id = raw_task.get("id")
            if not isinstance(task_id, str) or not task_id:
                problems.append(f"{task_loc}: missing id")
                task_id = f"<task {ti}>"
            if task_id in seen_task_ids:
                problems.append(f"{task_loc}: duplicate task id {task_id!r}")
            seen_task_ids.add(task_id)
            interaction = []
            for si, step in enumerate(raw_task.get("interaction", []) or []):
                parsed = _parse_interaction(step, f"{task_loc}.interaction[{si}]", problems)
                if parsed is not None:
                    interaction.append(parsed)
            raw_assertions = raw_task.get("assertions")
            if not isinstance(raw_assertions, list) or not raw_assertions:
                problems.append(f"{task_loc}: task needs at least one assertion")
                raw_assertions = []
            assertions = []
            for ai, raw_assertion in enumerate(raw_assertions):
                parsed = _parse_assertion(
                    raw_assertion, f"{task_loc}.assertions[{ai}]", problems
                )
                if parsed is not None:
                    assertions.append(parsed)
            tasks.append(Task(
                id=task_id,
                description=str(raw_task.get("description", "")),
                interaction=tuple(interaction),
                assertions=tuple(assertions),
            ))
        checkpoints.append(Checkpoint(id=cp_id, title=str(title), tasks=tuple(tasks)))

    if problems:
        raise ConfigError(problems)
    return checkpoints, diagnostics


def serialize_checkpoints(checkpoints: list) -> str:
    return json.dumps(
        {"checkpoints": [cp.to_dict() for cp in checkpoints]},
        indent=2, ensure_ascii=False,
    )


# ---------------------------------------------------------------------------
# suggestion

_PROMPT_TEMPLATE = (
    "Generate Puppeteer code to achieve the required interaction and "
    "evaluation for: {description}.\n"
    "The reference code answer is: {reference}.\n"
    "Evaluation should be done by getting the element, get the requirement "
    "from the element, and return if the requirement is met. If no "
    "interaction is needed, just evaluate.\n"
    "Reply only a single JSON object with fields \"interaction\" and "
    "\"assertions\" using the checkpoint assertion schema. Do not reply "
    "with any natural language text and do not include any comment."
)


@dataclass(frozen=True)
class SuggestionRequest:
    description: str
    reference: DocumentSnapshot


@dataclass
class SuggestionResult:
    interaction: list
    assertions: list
    provider: str
    low_confidence: bool = False

    def to_dict(self) -> dict:
        return {
            "interaction": [step.to_dict() for step in self.interaction],
            "assertions": [a.to_dict() for a in self.assertions],
            "provider": self.provider,
            "low_confidence": self.low_confidence,
        }


def build_suggestion_prompt(task_description: str, reference: DocumentSnapshot) -> str:
    """Instantiate the suggestion prompt with the description and full
    reference files. Pure: byte-identical output for identical inputs."""
    parts = []
    for path in sorted(reference.files):
        parts.append(f"--- {path} ---\n{reference.files[path]}")
    return _PROMPT_TEMPLATE.format(
        description=task_description, reference="\n".join(parts)
    )


_SEL_TOKEN = re.compile(r"[#.][A-Za-z_][\w-]*")
_PX_TOKEN = re.compile(r"(\d+(?:\.\d+)?)\s*px\b")
_PROPERTY_HINTS = [
    ("font size", "font-size"),
    ("font-size", "font-size"),
    ("background color", "background-color"),
    ("background-color", "background-color"),
    ("background", "background-color"),
    ("border", "border"),
    ("height", "height"),
    ("width", "width"),
]
_COLOR_WORDS = re.compile(
    r"\b(red|darkred|blue|darkblue|green|darkgreen|yellow|orange|purple|pink|"
    r"black|white|gray|grey|brown)\b"
)


class HeuristicSuggestionProvider:
    """Deterministic offline provider: keyword extraction over the task
    description and reference code."""

    name = "heuristic"

    def suggest(self, request: SuggestionRequest) -> SuggestionResult:
        description = request.description
        lower = description.lower()
        selectors = _SEL_TOKEN.findall(description)
        target = selectors[0] if selectors else None

        css_text = "\n".join(
            text for path, text in sorted(request.reference.files.items())
            if path.endswith(".css")
        )

        assertions: list[Assertion] = []
        if target:
            assertions.append(Assertion("exists", selector=target))

        def emit_style(prop: str, value: str) -> None:
            sel = target or (selectors[0] if selectors else None)
            if sel is None:
                return
            # prefer a rule-declaration check when the reference declares the
            # value only for a state pseudo-class or a runtime-created class
            if "hover" in lower:
                assertions.append(Assertion(
                    "rule_declared", selector=f"{sel}:hover", property=prop, expected=value,
                ))
            elif sel.startswith(".") and f"{sel}" in css_text:
                assertions.append(Assertion(
                    "rule_declared", selector=sel, property=prop, expected=value,
                ))
            else:
                assertions.append(Assertion(
                    "style", selector=sel, property=prop, expected=value,
                ))

        px_values = _PX_TOKEN.findall(description)
        if px_values:
            prop = next(
                (canonical for hint, canonical in _PROPERTY_HINTS if hint in lower),
                "width",
            )
            emit_style(prop, f"{px_values[0]}px")
        color_match = _COLOR_WORDS.search(lower)
        if color_match:
            prop = next(
                (canonical for hint, canonical in _PROPERTY_HINTS
                 if hint in lower and "color" in canonical),
                "background-color" if "background" in lower else "color",
            )
            emit_style(prop, color_match.group(1))
        if "bold" in lower:
            emit_style("font-weight", "bold")

        low_confidence = False
        if not assertions:
            low_confidence = True
            fallback = self._first_reference_id(request.reference)
            assertions.append(Assertion("exists", selector=fallback))
        return SuggestionResult(
            interaction=[], assertions=assertions, provider=self.name,
            low_confidence=low_confidence,
        )

    @staticmethod
    def _first_reference_id(reference: DocumentSnapshot) -> str:
        from .dom import parse_html

        for path in sorted(reference.files):
            if not path.endswith(".html"):
                continue
            tree, _ = parse_html(reference.files[path])
            for node in tree.elements():
                if node.id:
                    return f"#{node.id}"
        return "body"


class RemoteSuggestionProvider:
    """HTTP provider seam; the endpoint receives the prompt and must answer
    with the {interaction, assertions} schema object."""

    name = "remote"

    def __init__(self, url: Optional[str] = None, key: Optional[str] = None,
                 timeout_s: float = 30.0):
        self.url = url or os.environ.get(SUGGEST_URL_ENV, "")
        self.key = key or os.environ.get(SUGGEST_KEY_ENV, "")
        self.timeout_s = timeout_s
        if not self.url:
            raise ProviderError(f"{SUGGEST_URL_ENV} not configured")

    def suggest(self, request: SuggestionRequest) -> SuggestionResult:
        import httpx

        prompt = build_suggestion_prompt(request.description, request.reference)
        headers = {"Content-Type": "text/plain"}
        if self.key:
            headers["Authorization"] = f"Bearer {self.key}"
        try:
            response = httpx.post(
                self.url, content=prompt, headers=headers, timeout=self.timeout_s
            )
            response.raise_for_status()
            payload = response.json()
        except Exception as exc:
            raise ProviderError(f"remote suggestion failed: {exc}") from exc
        return validate_suggestion_payload(payload, provider=self.name)


def validate_suggestion_payload(payload, provider: str) -> SuggestionResult:
    """Validate a provider reply against the assertion schema."""
    if not isinstance(payload, dict):
        raise ProviderError("provider reply is not an object")
    problems: list[str] = []
    interaction = []
    for si, step in enumerate(payload.get("interaction", []) or []):
        parsed = _parse_interaction(step, f"interaction[{si}]", problems)
        if parsed is not None:
            interaction.append(parsed)
    assertions = []
    raw = payload.get("assertions")
    if not isinstance(raw, list) or not raw:
        problems.append("assertions must be a non-empty array")
        raw = []
    for ai, record in enumerate(raw):
        parsed = _parse_assertion(record, f"assertions[{ai}]", problems)
        if parsed is not None:
            assertions.append(parsed)
    if problems:
        raise ProviderError("; ".join(problems))
    return SuggestionResult(
        interaction=interaction, assertions=assertions, provider=provider,
        low_confidence=bool(payload.get("low_confidence", False)),
    )


def suggest_assertions(request: SuggestionRequest, provider=None) -> SuggestionResult:
    if provider is None:
        provider = HeuristicSuggestionProvider()
    result = provider.suggest(request)
    # suggestion safety: proposals must survive config validation
    probe = serialize_checkpoints([Checkpoint(
        id="probe", title="probe",
        tasks=(Task(
            id="probe", description=request.description,
            interaction=tuple(result.interaction), assertions=tuple(result.assertions),
        ),),
    )])
    parse_checkpoint_config(probe)
    return result


def verify_checkpoint(checkpoint: Checkpoint, reference: DocumentSnapshot,
                      runner) -> VerificationReport:
    """Run every task against the reference snapshot through the same runner
    used for student grading."""
    report = VerificationReport(checkpoint_id=checkpoint.id)
    for task in checkpoint.tasks:
        outcome = runner.evaluate(task, reference)
        report.tasks.append(TaskVerification(
            task_id=task.id, outcome=outcome.status, detail=outcome.detail,
        ))
    return report
