"""Class-wide element inspection: property distributions and render clusters."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .checkpoints import Task
from .documents import DocumentSnapshot
from .dom import (
    SelectorError,
    fingerprint_digest,
    normalize_value,
    parse_selector_list,
    query,
    serialize_normalized,
)
from .dom.cascade import computed_style
from .evaluator import ParsedSnapshot, parse_snapshot

BUCKET_NO_MATCH = "no match"
BUCKET_PARSE_ERROR = "parse error"
BUCKET_UNSET = "(unset)"

CLUSTER_ERROR_DIGEST = "error"


class KeyNotFound(KeyError):
    pass


@dataclass
class PropertyDistribution:
    selector: str
    property: str
    timestamp_ms: int
    buckets: dict = field(default_factory=dict)  # canonical value -> [student_id]

    def to_dict(self) -> dict:
        return {
            "selector": self.selector,
            "property": self.property,
            "timestamp_ms": self.timestamp_ms,
            "buckets": {k: list(v) for k, v in self.buckets.items()},
        }


@dataclass
class Cluster:
    digest: str
    representative: str
    members: list

    def to_dict(self) -> dict:
        return {
            "digest": self.digest,
            "representative": self.representative,
            "members": list(self.members),
        }


@dataclass
class ClusterSet:
    selector: str
    timestamp_ms: int
    clusters: list = field(default_factory=list)
    pre_interaction: bool = False

    def to_dict(self) -> dict:
        return {
            "selector": self.selector,
            "timestamp_ms": self.timestamp_ms,
            "pre_interaction": self.pre_interaction,
            "clusters": [c.to_dict() for c in self.clusters],
        }


def inspect_property(
    snapshots: Mapping[str, DocumentSnapshot],
    selector: str,
    prop: str,
    timestamp_ms: Optional[int] = None,
) -> PropertyDistribution:
    """Bucket every student by the canonical value of ``prop`` on the first
    element matching ``selector``. Every student lands in exactly one bucket.
    """
    try:
        selectors = parse_selector_list(selector)
    except SelectorError:
        raise
    prop = prop.strip().lower()
    if timestamp_ms is None:
        timestamp_ms = max(
            (s.timestamp_ms for s in snapshots.values()), default=0
        )
    distribution = PropertyDistribution(selector, prop, timestamp_ms)

    def bucket(key: str, student_id: str) -> None:
        distribution.buckets.setdefault(key, []).append(student_id)

    for student_id in sorted(snapshots):
        parsed = parse_snapshot(snapshots[student_id])
        if not parsed.has_html:
            bucket(BUCKET_PARSE_ERROR, student_id)
            continue
        nodes = query(selectors, parsed.document)
        if not nodes:
            bucket(BUCKET_NO_MATCH, student_id)
            continue
        styles = computed_style(nodes[0], parsed.stylesheets)
        entry = styles.get(prop)
        if entry is None:
            bucket(BUCKET_UNSET, student_id)
        else:
            bucket(entry.value, student_id)
    return distribution


def fingerprint(snapshot: DocumentSnapshot, selectors, style_properties) -> Optional[tuple]:
    """(serialization, digest) of the first matched element, or None."""
    parsed = parse_snapshot(snapshot)
    if not parsed.has_html:
        return None
    nodes = query(selectors, parsed.document)
    if not nodes:
        return None
    serialized = serialize_normalized(nodes[0], parsed.stylesheets, style_properties)
    return serialized, fingerprint_digest(serialized)


def task_style_properties(task: Optional[Task]) -> list:
    """Fingerprint on the properties the task's Style assertions grade."""
    if task is None:
        return []
    props = {
        a.property
        for a in task.assertions
        if a.kind in ("style", "rule_declared") and a.property
    }
    return sorted(props)


def preview_clusters(
    snapshots: Mapping[str, DocumentSnapshot],
    task: Optional[Task],
    selector: str,
    runner=None,
    timestamp_ms: Optional[int] = None,
    style_properties: Optional[Iterable[str]] = None,
) -> ClusterSet:
    """Exact-digest grouping of per-student element fingerprints.

    When the task needs interaction and an interactive runner is attached the
    runner supplies the post-interaction document; otherwise the static
    snapshot is fingerprinted and the result is flagged pre-interaction.
    """
    selectors = parse_selector_list(selector)
    props = (
        sorted(style_properties) if style_properties is not None
        else task_style_properties(task)
    )
    if timestamp_ms is None:
        timestamp_ms = max((s.timestamp_ms for s in snapshots.values()), default=0)

    needs_runtime = task is not None and task.requires_runtime
    interactive = (
        runner is not None and getattr(runner, "capabilities", "") == "interactive"
    )
    pre_interaction = needs_runtime and not interactive

    groups: dict[str, tuple[str, list]] = {}
    no_match: list = []
    errors: list = []
    for student_id in sorted(snapshots):
        snapshot = snapshots[student_id]
        if needs_runtime and interactive:
            document_snapshot = runner.post_interaction_snapshot(task, snapshot)
            if document_snapshot is None:
                errors.append(student_id)
                continue
            snapshot = document_snapshot
        try:
            result = fingerprint(snapshot, selectors, props)
        except Exception:
            errors.append(student_id)
            continue
        if result is None:
            no_match.append(student_id)
            continue
        serialized, digest = result
        groups.setdefault(digest, (serialized, []))[1].append(student_id)

    clusters = [
        Cluster(digest, serialized, members)
        for digest, (serialized, members) in groups.items()
    ]
    if no_match:
        clusters.append(Cluster(
            BUCKET_NO_MATCH, f"(no element matched {selector})", no_match
        ))
    if errors:
        clusters.append(Cluster(CLUSTER_ERROR_DIGEST, "(inspection error)", errors))
    clusters.sort(key=lambda c: (-len(c.members), c.digest))
    return ClusterSet(
        selector=selector,
        timestamp_ms=timestamp_ms,
        clusters=clusters,
        pre_interaction=pre_interaction,
    )


def students_matching(structure, key: str) -> list:
    """Stable, id-ordered member list for one bucket or cluster."""
    if isinstance(structure, PropertyDistribution):
        if key not in structure.buckets:
            raise KeyNotFound(key)
        return sorted(structure.buckets[key])
    if isinstance(structure, ClusterSet):
        for cluster in structure.clusters:
            if cluster.digest == key:
                return sorted(cluster.members)
        raise KeyNotFound(key)
    raise KeyNotFound(key)
