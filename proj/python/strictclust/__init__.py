"""Single-pass streaming clustering driven by a fixed similarity strictness."""

from ._core import (
    AssignmentOutcome,
    Cluster,
    ClusterState,
    Clusterer,
    Config,
    DecisionPath,
    MatchProfile,
    StrictclustError,
    audit,
    decode_snapshot,
    encode_snapshot,
    feature_similarity,
    load_snapshot,
    match_profile,
    qualifies,
    qualifying_range,
    run_stream,
    save_snapshot,
    scale_above_100,
    should_match_features,
    validate_config,
)

__all__ = [
    "AssignmentOutcome",
    "Cluster",
    "ClusterState",
    "Clusterer",
    "Config",
    "DecisionPath",
    "MatchProfile",
    "StrictclustError",
    "audit",
    "decode_snapshot",
    "encode_snapshot",
    "feature_similarity",
    "load_snapshot",
    "match_profile",
    "qualifies",
    "qualifying_range",
    "run_stream",
    "save_snapshot",
    "scale_above_100",
    "should_match_features",
    "validate_config",
]
