"""Task evaluation against snapshots, progress matrices, classroom stats."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .checkpoints import Assertion, Checkpoint, Task
from .documents import DocumentSnapshot, SnapshotCache
from .dom import (
    DomNode,
    Stylesheet,
    normalize_value,
    parse_css,
    parse_html,
    parse_selector,
    parse_selector_list,
    query,
)
from .dom.cascade import computed_style

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_UNSUPPORTED = "unsupported"
STATUS_ERROR = "error"


@dataclass(frozen=True)
class TaskOutcome:
    task_id: str
    status: str  # pass | fail | unsupported | error
    detail: str
    evaluated_at: int
    snapshot_hash: str

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "status": self.status,
            "detail": self.detail,
            "evaluated_at": self.evaluated_at,
            "snapshot_hash": self.snapshot_hash,
        }


@dataclass
class ParsedSnapshot:
    """HTML trees and stylesheets of one snapshot, parsed once per task batch."""

    document: Optional[DomNode]
    stylesheets: list
    has_html: bool


def parse_snapshot(snapshot: DocumentSnapshot) -> ParsedSnapshot:
    html_paths = sorted(p for p in snapshot.files if p.endswith(".html"))
    # index.html is the document when present
    for preferred in ("index.html",):
        if preferred in snapshot.files:
            html_paths.remove(preferred)
            html_paths.insert(0, preferred)
    document = None
    if html_paths:
        document, _ = parse_html(snapshot.files[html_paths[0]])
    stylesheets = []
    order_base = 0
    for path in sorted(p for p in snapshot.files if p.endswith(".css")):
        sheet, _ = parse_css(snapshot.files[path], order_base=order_base)
        order_base += len(sheet.rules)
        stylesheets.append(sheet)
    return ParsedSnapshot(document, stylesheets, bool(html_paths))


def _check_count(comparator: str, actual: int, n: int) -> bool:
    if comparator == "=":
        return actual == n
    if comparator == ">=":
        return actual >= n
    return actual <= n


def _selector_norm(text: str) -> str:
    return ", ".join(s.serialize() for s in parse_selector_list(text))


def evaluate_assertion(assertion: Assertion, parsed: ParsedSnapshot) -> tuple[bool, str]:
    """(ok, failure detail). Never raises for student-code content."""
    tree = parsed.document
    selectors = parse_selector_list(assertion.selector) if assertion.selector else []
    nodes = query(selectors, tree) if tree is not None else []

    if assertion.kind == "exists":
        if len(nodes) >= assertion.min_count:
            return True, ""
        return False, f"expected at least {assertion.min_count} match(es), got {len(nodes)}"
    if assertion.kind == "count":
        if _check_count(assertion.comparator, len(nodes), assertion.n):
            return True, ""
        return False, f"expected count {assertion.comparator} {assertion.n}, got {len(nodes)}"
    if assertion.kind == "ancestor":
        if not nodes:
            return False, "no elements matched"
        ancestor_selectors = parse_selector_list(assertion.ancestor)
        ancestors = set(id(a) for a in query(ancestor_selectors, tree))
        first = nodes[0]
        if any(id(a) in ancestors for a in first.ancestors()):
            return True, ""
        return False, f"expected an ancestor matching {assertion.ancestor}, found none"
    if assertion.kind == "rule_declared":
        wanted_selector = _selector_norm(assertion.selector)
        wanted_value = normalize_value(assertion.property, assertion.expected)
        found_other = None
        for sheet in parsed.stylesheets:
            for rule in sheet:
                if all(s.serialize() != wanted_selector for s in rule.selectors):
                    continue
                for decl in rule.declarations:
                    if decl.prop != assertion.property:
                        continue
                    got = normalize_value(decl.prop, decl.value)
                    if got == wanted_value:
                        return True, ""
                    found_other = got
        if found_other is not None:
            return False, f"expected {wanted_value}, got {found_other}"
        return False, (
            f"no rule for {assertion.selector} declares {assertion.property}"
        )

    # attribute / text / style need a matched element
    if not nodes:
        return False, "no elements matched"
    first = nodes[0]
    if assertion.kind == "attribute":
        actual = first.attr(assertion.attribute)
        if actual == assertion.expected:
            return True, ""
        return False, f"expected {assertion.expected!r}, got {actual!r}"
    if assertion.kind == "text":
        actual = " ".join(first.text_content().split())
        expected = " ".join(assertion.expected.split())
        ok = expected in actual if assertion.mode == "contains" else actual == expected
        if ok:
            return True, ""
        return False, f"expected {expected!r} ({assertion.mode}), got {actual!r}"
    # style
    styles = computed_style(first, parsed.stylesheets)
    entry = styles.get(assertion.property)
    wanted = normalize_value(assertion.property, assertion.expected)
    if entry is None:
        return False, f"expected {wanted}, got (unset)"
    if entry.value == wanted:
        return True, ""
    return False, f"expected {wanted}, got {entry.value}"


def evaluate_task_static(task: Task, snapshot: DocumentSnapshot) -> TaskOutcome:
    """Static assertion evaluation; first failure short-circuits."""
    if task.requires_runtime:
        return TaskOutcome(
            task.id, STATUS_UNSUPPORTED,
            "task requires interaction; static runner cannot execute scripts",
            snapshot.timestamp_ms, snapshot.content_hash,
        )
    parsed = parse_snapshot(snapshot)
    if not parsed.has_html:
        return TaskOutcome(
            task.id, STATUS_ERROR, "snapshot has no parseable HTML file",
            snapshot.timestamp_ms, snapshot.content_hash,
        )
    for index, assertion in enumerate(task.assertions):
        ok, detail = evaluate_assertion(assertion, parsed)
        if not ok:
            return TaskOutcome(
                task.id, STATUS_FAIL,
                f"assertion {index}: {assertion.kind} on {assertion.selector}: {detail}",
                snapshot.timestamp_ms, snapshot.content_hash,
            )
    return TaskOutcome(task.id, STATUS_PASS, "", snapshot.timestamp_ms, snapshot.content_hash)


class StaticRunner:
    """In-core runner: declarative assertions only, no script execution."""

    capabilities = "static-only"

    def evaluate(self, task: Task, snapshot: DocumentSnapshot) -> TaskOutcome:
        return evaluate_task_static(task, snapshot)


class MemoizingRunner:
    """Wraps a runner with a (task_id, snapshot_hash) result cache.

    Safe because any runner is deterministic for a fixed (task, snapshot).
    """

    def __init__(self, runner):
        self._runner = runner
        self._cache: dict[tuple, TaskOutcome] = {}
        self.calls = 0

    @property
    def capabilities(self) -> str:
        return self._runner.capabilities

    def evaluate(self, task: Task, snapshot: DocumentSnapshot) -> TaskOutcome:
        key = (task.id, snapshot.content_hash)
        cached = self._cache.get(key)
        if cached is not None:
            # Restamp to the requested snapshot so results are independent
            # of which timestamp happened to be evaluated first.
            return replace(cached, evaluated_at=snapshot.timestamp_ms)
        self.calls += 1
        outcome = self._runner.evaluate(task, snapshot)
        self._cache[key] = outcome
        return outcome


def evaluate_student_at(
    student_id: str,
    t: int,
    checkpoints: Iterable[Checkpoint],
    runner,
    cache: SnapshotCache,
) -> list[TaskOutcome]:
    """Outcomes for every task of every checkpoint at reconstruct_at(student, t)."""
    snapshot = cache.reconstruct_at(student_id, t)
    outcomes = []
    for checkpoint in checkpoints:
        for task in checkpoint.tasks:
            try:
                outcomes.append(runner.evaluate(task, snapshot))
            except Exception as exc:  # runner malfunction, not student content
                outcomes.append(TaskOutcome(
                    task.id, STATUS_ERROR, f"runner error: {exc}",
                    snapshot.timestamp_ms, snapshot.content_hash,
                ))
    return outcomes


def completion_rate(outcomes: Iterable[TaskOutcome]) -> float:
    """passed / total; unsupported and error count as not passed."""
    outcomes = list(outcomes)
    if not outcomes:
        raise ValueError("completion over zero tasks")
    passed = sum(1 for o in outcomes if o.status == STATUS_PASS)
    return passed / len(outcomes)


@dataclass
class MatrixCell:
    completion: float
    outcomes: list  # list[TaskOutcome]

    def to_dict(self) -> dict:
        return {
            "completion": self.completion,
            "outcomes": [o.to_dict() for o in self.outcomes],
        }


@dataclass
class ProgressMatrix:
    """ticks -> student -> checkpoint -> MatrixCell."""

    ticks: list = field(default_factory=list)
    students: list = field(default_factory=list)
    checkpoint_ids: list = field(default_factory=list)
    cells: dict = field(default_factory=dict)  # (t, student, checkpoint_id) -> MatrixCell
    errors: list = field(default_factory=list)

    def cell(self, t: int, student_id: str, checkpoint_id: str) -> Optional[MatrixCell]:
        return self.cells.get((t, student_id, checkpoint_id))

    def slice_at(self, t: int) -> dict:
        """student -> checkpoint_id -> MatrixCell for one tick."""
        out: dict = {}
        for student in self.students:
            per_cp = {}
            for cp_id in self.checkpoint_ids:
                cell = self.cells.get((t, student, cp_id))
                if cell is not None:
                    per_cp[cp_id] = cell
            out[student] = per_cp
        return out

    def to_dict(self) -> dict:
        return {
            "ticks": self.ticks,
            "students": self.students,
            "checkpoints": self.checkpoint_ids,
            "cells": {
                f"{t}|{s}|{c}": cell.to_dict()
                for (t, s, c), cell in sorted(self.cells.items())
            },
            "errors": list(self.errors),
        }


def build_progress_matrix(
    log,
    checkpoints: list,
    ticks: list,
    runner,
    starter=None,
    students: Optional[list] = None,
    cache: Optional[SnapshotCache] = None,
) -> ProgressMatrix:
    """Complete matrix for every (tick, student, checkpoint)."""
    if list(ticks) != sorted(set(ticks)):
        raise ValueError("ticks must be strictly increasing")
    roster = students if students is not None else log.students()
    if cache is None:
        cache = SnapshotCache(log, starter, session_start_ms=ticks[0] if ticks else None)
    matrix = ProgressMatrix(
        ticks=list(ticks),
        students=list(roster),
        checkpoint_ids=[cp.id for cp in checkpoints],
    )
    for t in ticks:
        for student in roster:
            try:
                outcomes = evaluate_student_at(student, t, checkpoints, runner, cache)
            except Exception as exc:
                matrix.errors.append(f"{student}@{t}: {exc}")
                continue
            by_task = {o.task_id: o for o in outcomes}
            for checkpoint in checkpoints:
                cp_outcomes = [by_task[task.id] for task in checkpoint.tasks]
                matrix.cells[(t, student, checkpoint.id)] = MatrixCell(
                    completion=completion_rate(cp_outcomes),
                    outcomes=cp_outcomes,
                )
    return matrix


@dataclass
class ClassroomStats:
    class_size: int
    task_pass_counts: dict  # task_id -> number of students passing
    checkpoint_summary: dict  # checkpoint_id -> {min, median, max}

    def to_dict(self) -> dict:
        return {
            "class_size": self.class_size,
            "task_pass_counts": dict(self.task_pass_counts),
            "checkpoint_summary": {
                k: dict(v) for k, v in self.checkpoint_summary.items()
            },
        }


def classroom_stats(matrix: ProgressMatrix, t: int) -> ClassroomStats:
    """Per-task pass counts and per-checkpoint completion distribution at t."""
    task_counts: dict[str, int] = {}
    completions: dict[str, list] = {cp: [] for cp in matrix.checkpoint_ids}
    for student in matrix.students:
        for cp_id in matrix.checkpoint_ids:
            cell = matrix.cells.get((t, student, cp_id))
            if cell is None:
                continue
            completions[cp_id].append(cell.completion)
            for outcome in cell.outcomes:
                task_counts.setdefault(outcome.task_id, 0)
                if outcome.status == STATUS_PASS:
                    task_counts[outcome.task_id] += 1
    summary = {}
    for cp_id, values in completions.items():
        if values:
            summary[cp_id] = {
                "min": min(values),
                "median": statistics.median(values),
                "max": max(values),
            }
        else:
            summary[cp_id] = {"min": 0.0, "median": 0.0, "max": 0.0}
    return ClassroomStats(
        class_size=len(matrix.students),
        task_pass_counts=task_counts,
        checkpoint_summary=summary,
    )
