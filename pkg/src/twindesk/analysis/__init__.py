"""Session evaluation: event rates, rank tests, questionnaire aggregation."""

from .metrics import (
    Rates,
    compute_rates,
    parse_session_log,
    read_log_header,
    tower_histogram,
)
from .questionnaire import (
    ItemStats,
    TLX_SUBSCALES,
    TlxSummary,
    aggregate_items,
    load_item_csv,
    load_tlx_csv,
    tlx_raw,
)
from .stats import TestResult, mann_whitney_u, significance_tier

__all__ = [
    "ItemStats",
    "Rates",
    "TLX_SUBSCALES",
    "TestResult",
    "TlxSummary",
    "aggregate_items",
    "compute_rates",
    "load_item_csv",
    "load_tlx_csv",
    "mann_whitney_u",
    "parse_session_log",
    "read_log_header",
    "significance_tier",
    "tlx_raw",
    "tower_histogram",
]
