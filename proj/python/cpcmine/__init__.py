"""Causal event-pair mining over dependency-annotated film-scene text."""

from ._cpcmine import (
    EventInstance,
    PairCountTable,
    ParseError,
    SceneDocument,
    ScoredPair,
    causal_potential,
    count_events,
    count_streams,
    cpc,
    extract_events,
    pairwise_alpha,
    parse_annotation,
    pmi,
    pooled_alpha,
    render_report,
    run_pipeline,
    score_events,
    scp,
)

__version__ = "0.1.0"

__all__ = [
    "EventInstance",
    "PairCountTable",
    "ParseError",
    "SceneDocument",
    "ScoredPair",
    "causal_potential",
    "count_events",
    "count_streams",
    "cpc",
    "extract_events",
    "pairwise_alpha",
    "parse_annotation",
    "pmi",
    "pooled_alpha",
    "render_report",
    "run_pipeline",
    "score_events",
    "scp",
]
