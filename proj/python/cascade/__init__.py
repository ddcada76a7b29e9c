"""Dissemination structures, availability audits and removal cascades for tweet mentions."""

from ._core import (
    CascadeError,
    Corpus,
    StatusSnapshot,
    analyze,
    audit,
    classify_error,
    fit_power_law,
    load_mentions,
    load_statuses,
    monte_carlo,
    parse_mentions,
    parse_statuses,
    pdf_ccdf,
    reason_distribution,
    run_cli,
    simulate,
    spearman,
    structure,
    worst_case,
)

__all__ = [
    "CascadeError",
    "Corpus",
    "StatusSnapshot",
    "analyze",
    "audit",
    "classify_error",
    "fit_power_law",
    "load_mentions",
    "load_statuses",
    "monte_carlo",
    "parse_mentions",
    "parse_statuses",
    "pdf_ccdf",
    "reason_distribution",
    "run_cli",
    "simulate",
    "spearman",
    "structure",
    "worst_case",
]
