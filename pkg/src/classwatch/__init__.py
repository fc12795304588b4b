"""Real-time classroom monitoring engine for web-programming exercises.

The package reconstructs student workspaces from edit-event streams,
evaluates checkpoint assertions against parsed HTML/CSS snapshots, and
serves live progress over HTTP.
"""

from classwatch.events import (
    EditEvent,
    EventLog,
    ConflictError,
    FormatError,
    RejectNoOp,
    RejectPath,
    RejectSeq,
    ReplayClock,
    ReplayReport,
    SPEED_MAX,
    load_log,
    merge_logs,
    replay,
)
from classwatch.documents import (
    DocumentSnapshot,
    OutOfBounds,
    SnapshotCache,
    StreamCorrupt,
    apply_edit,
    content_hash,
    load_starter,
    minute_ticks,
    reconstruct_at,
)
from classwatch.checkpoints import (
    Assertion,
    Checkpoint,
    ConfigError,
    InteractionStep,
    Task,
    parse_checkpoint_config,
    serialize_checkpoints,
)
from classwatch.evaluator import (
    MemoizingRunner,
    ProgressMatrix,
    StaticRunner,
    TaskOutcome,
    build_progress_matrix,
    classroom_stats,
    completion_rate,
    evaluate_student_at,
)
from classwatch.inspector import (
    Cluster,
    ClusterSet,
    PropertyDistribution,
    inspect_property,
    preview_clusters,
    students_matching,
)

__version__ = "0.1.0"

__all__ = [
    "EditEvent",
    "EventLog",
    "ConflictError",
    "FormatError",
    "RejectNoOp",
    "RejectPath",
    "RejectSeq",
    "ReplayClock",
    "ReplayReport",
    "SPEED_MAX",
    "load_log",
    "merge_logs",
    "replay",
    "DocumentSnapshot",
    "OutOfBounds",
    "SnapshotCache",
    "StreamCorrupt",
    "apply_edit",
    "content_hash",
    "load_starter",
    "minute_ticks",
    "reconstruct_at",
    "Assertion",
    "Checkpoint",
    "ConfigError",
    "InteractionStep",
    "Task",
    "parse_checkpoint_config",
    "serialize_checkpoints",
    "MemoizingRunner",
    "ProgressMatrix",
    "StaticRunner",
    "TaskOutcome",
    "build_progress_matrix",
    "classroom_stats",
    "completion_rate",
    "evaluate_student_at",
    "Cluster",
    "ClusterSet",
    "PropertyDistribution",
    "inspect_property",
    "preview_clusters",
    "students_matching",
    "__version__",
]
