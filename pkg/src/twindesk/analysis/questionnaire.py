"""Questionnaire aggregation: raw TLX, single-item scales, CSV intake.

Scale bounds are configurable; the defaults (TLX 0-20, SEQ 1-7, SSQ 1-4) are
recorded assumptions, not measured facts.
"""

import csv
import math
from dataclasses import dataclass

TLX_SUBSCALES = ("mental", "physical", "temporal", "performance", "effort", "frustration")

TLX_SCALE = (0.0, 20.0)
SEQ_SCALE = (1.0, 7.0)
SSQ_SCALE = (1.0, 4.0)


@dataclass(frozen=True)
class ItemStats:
    mean: float
    std: float  # sample (n-1); 0 when n == 1
    n: int
    single_sample: bool

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std": self.std,
            "n": self.n,
            "single_sample": self.single_sample,
        }


@dataclass(frozen=True)
class TlxSummary:
    per_subscale: dict  # subscale name -> ItemStats across participants
    overall: ItemStats  # stats of per-participant unweighted means
    per_participant: tuple  # unweighted mean per participant, input order


def _check_scale(values, scale):
    if scale is None:
        return
    lo, hi = scale
    for v in values:
        if not lo <= v <= hi:
            raise ValueError(f"score {v} outside scale [{lo}, {hi}]")


def aggregate_items(scores, scale=None) -> ItemStats:
    values = [float(s) for s in scores]
    if not values:
        raise ValueError("no scores to aggregate")
    _check_scale(values, scale)
    n = len(values)
    mean = sum(values) / n
    if n == 1:
        return ItemStats(mean, 0.0, 1, True)
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return ItemStats(mean, math.sqrt(var), n, False)


def tlx_raw(responses, scale=TLX_SCALE) -> TlxSummary:
    """responses: one 6-score row per participant, subscale order fixed."""
    rows = [list(map(float, r)) for r in responses]
    if not rows:
        raise ValueError("no participants")
    for r in rows:
        if len(r) != len(TLX_SUBSCALES):
            raise ValueError(f"expected {len(TLX_SUBSCALES)} subscale scores, got {len(r)}")
        _check_scale(r, scale)
    per_subscale = {
        name: aggregate_items([r[i] for r in rows])
        for i, name in enumerate(TLX_SUBSCALES)
    }
    per_participant = tuple(sum(r) / len(r) for r in rows)
    return TlxSummary(per_subscale, aggregate_items(per_participant), per_participant)


def load_tlx_csv(path, scale=TLX_SCALE) -> TlxSummary:
    """CSV with one row per participant, columns named after TLX_SUBSCALES."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        missing = [c for c in TLX_SUBSCALES if c not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"missing TLX columns: {', '.join(missing)}")
        rows = [[row[c] for c in TLX_SUBSCALES] for row in reader]
    return tlx_raw(rows, scale)


def load_item_csv(path, column, scale=None) -> ItemStats:
    """Single-column questionnaire (SEQ, SSQ symptom) from a participant CSV."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if column not in (reader.fieldnames or []):
            raise ValueError(f"column {column!r} not in CSV header")
        values = [row[column] for row in reader]
    return aggregate_items(values, scale)
