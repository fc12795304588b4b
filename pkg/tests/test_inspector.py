"""Class-wide inspection: distributions, clusters, partition properties."""

from __future__ import annotations

import pytest

from classwatch.checkpoints import Assertion, InteractionStep, Task
from classwatch.documents import DocumentSnapshot
from classwatch.dom import SelectorError
from classwatch.inspector import (
    BUCKET_NO_MATCH,
    BUCKET_PARSE_ERROR,
    BUCKET_UNSET,
    KeyNotFound,
    fingerprint,
    inspect_property,
    preview_clusters,
    students_matching,
    task_style_properties,
)
from classwatch.dom import parse_selector_list


def snapshot(student_id, html, css="", t=0):
    files = {"index.html": html}
    if css:
        files["styles.css"] = css
    return DocumentSnapshot.of(student_id, files, t)


@pytest.fixture
def classroom():
    return {
        "s01": snapshot("s01", '<h1 id="t">A</h1>', "#t { font-size: 25px }"),
        "s02": snapshot("s02", '<h1 id="t">A</h1>', "#t { font-size: 25px }"),
        "s03": snapshot("s03", '<h1 id="t">A</h1>', "#t { font-size: 24px }"),
        "s04": snapshot("s04", '<h1 id="t">A</h1>'),           # property unset
        "s05": snapshot("s05", "<p>no title</p>"),             # no match
        "s06": DocumentSnapshot.of("s06", {"notes.txt": "x"}, 0),  # no html
    }


# ---------------------------------------------------------------------------
# property distribution

def test_distribution_buckets_by_canonical_value(classroom):
    dist = inspect_property(classroom, "#t", "font-size")
    assert dist.buckets["25px"] == ["s01", "s02"]
    assert dist.buckets["24px"] == ["s03"]
    assert dist.buckets[BUCKET_UNSET] == ["s04"]
    assert dist.buckets[BUCKET_NO_MATCH] == ["s05"]
    assert dist.buckets[BUCKET_PARSE_ERROR] == ["s06"]


def test_distribution_partitions_roster(classroom):
    dist = inspect_property(classroom, "#t", "font-size")
    members = [s for bucket in dist.buckets.values() for s in bucket]
    assert sorted(members) == sorted(classroom)
    assert len(members) == len(set(members))


def test_distribution_rejects_bad_selector(classroom):
    with pytest.raises(SelectorError):
        inspect_property(classroom, ">>", "font-size")


def test_distribution_normalizes_value_spellings():
    snapshots = {
        "a": snapshot("a", '<p id="t"></p>', "#t { color: red }"),
        "b": snapshot("b", '<p id="t"></p>', "#t { color: #FF0000 }"),
        "c": snapshot("c", '<p id="t" style="color: #f00"></p>'),
    }
    dist = inspect_property(snapshots, "#t", "color")
    assert dist.buckets == {"#ff0000": ["a", "b", "c"]}


# ---------------------------------------------------------------------------
# fingerprints and clusters

def test_fingerprint_none_when_unmatched():
    selectors = parse_selector_list("#ghost")
    assert fingerprint(snapshot("s", "<p></p>"), selectors, []) is None


def test_fingerprint_covers_structure_attrs_and_styles():
    selectors = parse_selector_list("#t")
    base = snapshot("s", '<div id="t"><p class="a">x</p></div>',
                    "#t { width: 10px }")
    same = snapshot("s2", '<div id="t"><p class="a">x</p></div>',
                    "#t { width: 10.0px }")  # same canonical width
    different = snapshot("s3", '<div id="t"><p class="b">x</p></div>',
                         "#t { width: 10px }")
    digest = lambda s: fingerprint(s, selectors, ["width"])[1]
    assert digest(base) == digest(same)
    assert digest(base) != digest(different)


def test_task_style_properties_union():
    task = Task(id="t", description="", assertions=(
        Assertion("style", selector="#a", property="width", expected="1px"),
        Assertion("rule_declared", selector=".b", property="color", expected="red"),
        Assertion("exists", selector="#c"),
    ))
    assert task_style_properties(task) == ["color", "width"]
    assert task_style_properties(None) == []


def test_clusters_group_identical_renders(classroom):
    clusters = preview_clusters(classroom, None, "#t",
                                style_properties=["font-size"])
    by_members = {tuple(c.members): c.digest for c in clusters.clusters}
    assert ("s01", "s02") in by_members
    assert ("s03",) in by_members
    assert ("s04",) in by_members
    no_match = [c for c in clusters.clusters if c.digest == BUCKET_NO_MATCH][0]
    assert no_match.members == ["s05", "s06"]


def test_clusters_partition_roster(classroom):
    clusters = preview_clusters(classroom, None, "#t",
                                style_properties=["font-size"])
    members = [s for c in clusters.clusters for s in c.members]
    assert sorted(members) == sorted(classroom)


def test_clusters_sorted_by_size_then_digest(classroom):
    clusters = preview_clusters(classroom, None, "#t",
                                style_properties=["font-size"])
    sizes = [len(c.members) for c in clusters.clusters]
    assert sizes == sorted(sizes, reverse=True)
    for a, b in zip(clusters.clusters, clusters.clusters[1:]):
        if len(a.members) == len(b.members):
            assert a.digest < b.digest


def test_clusters_default_to_task_graded_properties(classroom):
    task = Task(id="t", description="", assertions=(
        Assertion("style", selector="#t", property="font-size", expected="25px"),
    ))
    with_task = preview_clusters(classroom, task, "#t")
    explicit = preview_clusters(classroom, None, "#t",
                                style_properties=["font-size"])
    assert [c.members for c in with_task.clusters] == [
        c.members for c in explicit.clusters
    ]


def test_pre_interaction_flag_for_runtime_tasks(classroom):
    runtime_task = Task(
        id="t", description="",
        interaction=(InteractionStep("click", selector="#t"),),
        assertions=(Assertion("exists", selector="#t"),),
    )
    static_result = preview_clusters(classroom, runtime_task, "#t")
    assert static_result.pre_interaction
    static_task = Task(id="t", description="",
                       assertions=(Assertion("exists", selector="#t"),))
    assert not preview_clusters(classroom, static_task, "#t").pre_interaction


def test_clusters_match_pairwise_equality_oracle(classroom):
    selectors = parse_selector_list("#t")
    clusters = preview_clusters(classroom, None, "#t",
                                style_properties=["font-size"])
    renders = {}
    for student, snap_ in classroom.items():
        result = fingerprint(snap_, selectors, ["font-size"])
        renders[student] = None if result is None else result[0]
    for cluster in clusters.clusters:
        if cluster.digest == BUCKET_NO_MATCH:
            continue
        for a in cluster.members:
            for b in cluster.members:
                assert renders[a] == renders[b]
    grouped = {}
    for cluster in clusters.clusters:
        for member in cluster.members:
            grouped[member] = cluster.digest
    for a in classroom:
        for b in classroom:
            if renders[a] is not None and renders[a] == renders[b]:
                assert grouped[a] == grouped[b]


# ---------------------------------------------------------------------------
# membership lookup

def test_students_matching_distribution(classroom):
    dist = inspect_property(classroom, "#t", "font-size")
    assert students_matching(dist, "25px") == ["s01", "s02"]
    with pytest.raises(KeyNotFound):
        students_matching(dist, "99px")


def test_students_matching_clusters(classroom):
    clusters = preview_clusters(classroom, None, "#t",
                                style_properties=["font-size"])
    assert students_matching(clusters, BUCKET_NO_MATCH) == ["s05", "s06"]
    with pytest.raises(KeyNotFound):
        students_matching(clusters, "deadbeef")
