import json
from dataclasses import dataclass

from ..scene import TRIAL, SessionEvent


@dataclass(frozen=True)
class Rates:
    picks: int
    places: int
    collapses: int
    placing_rate: float
    collapse_rate: float
    still_in_place_rate: float

    def as_dict(self) -> dict:
        return {
            "picks": self.picks,
            "places": self.places,
            "collapses": self.collapses,
            "placing_rate": self.placing_rate,
            "collapse_rate": self.collapse_rate,
            "still_in_place_rate": self.still_in_place_rate,
        }


class LogFormatError(ValueError):
    pass


def _is_header(obj: dict) -> bool:
    return "type" not in obj


def read_log_header(path) -> dict | None:
    with open(path, "r", encoding="utf-8") as f:
        first = f.readline().strip()
    if not first:
        return None
    obj = json.loads(first)
    return obj if _is_header(obj) else None


def parse_session_log(path) -> list:
    """JSONL to SessionEvents; one optional header line; monotone timestamps."""
    events = []
    last_t = None
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise LogFormatError(f"line {lineno}: malformed JSON ({e.msg})") from e
            if not isinstance(obj, dict):
                raise LogFormatError(f"line {lineno}: expected a JSON object")
            if lineno == 1 and _is_header(obj):
                continue
            try:
                ev = SessionEvent(float(obj["t"]), obj["type"], obj.get("detail", {}))
            except (KeyError, TypeError, ValueError) as e:
                raise LogFormatError(f"line {lineno}: {e}") from e
            if last_t is not None and ev.t < last_t:
                raise LogFormatError(
                    f"line {lineno}: timestamp {ev.t} precedes previous {last_t}"
                )
            last_t = ev.t
            events.append(ev)
    return events


def _phase_of(ev) -> str | None:
    detail = ev.detail if isinstance(ev.detail, dict) else {}
    return detail.get("phase")


def compute_rates(events, phase: str = TRIAL) -> Rates:
    picks = places = collapses = 0
    for ev in events:
        if _phase_of(ev) != phase:
            continue
        if ev.type == "pick":
            picks += 1
        elif ev.type == "place":
            places += 1
        elif ev.type == "collapse":
            collapses += 1
    if picks == 0:
        raise ValueError(f"no pick events in phase {phase}: rates are undefined")
    placing = places / picks
    collapse = collapses / picks
    # defined as the difference so the Fig.-style identity holds bit-exactly
    still = placing - collapse
    return Rates(picks, places, collapses, placing, collapse, still)


def tower_histogram(counts) -> dict:
    counts = list(counts)
    if not counts:
        raise ValueError("no sessions given")
    for c in counts:
        if c < 0 or c != int(c):
            raise ValueError(f"tower count must be a non-negative integer, got {c}")
    out = {}
    for c in counts:
        out[int(c)] = out.get(int(c), 0) + 1
    return {k: 100.0 * v / len(counts) for k, v in sorted(out.items())}
