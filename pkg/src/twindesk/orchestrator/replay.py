"""Replay a recorded session onto a bus at scaled time.

Events are republished on /world/events with their original timestamps in
the envelope, so a playback client sees the identical stream; only the wall
pacing between events is scaled.
"""

from __future__ import annotations

import json
import time

from ..bus import Bus, Envelope, schemas


class RecordError(ValueError):
    """Corrupt or truncated session record; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def read_record(path) -> tuple[dict | None, list[dict]]:
    """Parse a JSONL record into (header, events), checking integrity."""
    blob = open(path, "rb").read()
    header = None
    events = []
    offset = 0
    first = True
    while offset < len(blob):
        end = blob.find(b"\n", offset)
        if end < 0:
            raise RecordError("record truncated mid-line", offset)
        line = blob[offset:end]
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            raise RecordError("corrupt record line", offset) from None
        if not isinstance(obj, dict):
            raise RecordError("record line is not an object", offset)
        if first and "type" not in obj:
            header = obj
        else:
            if "type" not in obj or "t" not in obj:
                raise RecordError("event line missing t/type", offset)
            events.append(obj)
        first = False
        offset = end + 1
    return header, events


def replay(path, speed: float, bus: Bus, sleep=time.sleep) -> int:
    """Republish a record's events at `speed` x realtime; returns the count."""
    if speed <= 0:
        raise ValueError("speed must be positive")
    _, events = read_record(path)
    prev_t = events[0]["t"] if events else 0.0
    for ev in events:
        gap = (ev["t"] - prev_t) / speed
        if gap > 0:
            sleep(gap)
        prev_t = ev["t"]
        bus.publish_envelope(
            Envelope("/world/events", 4, int(round(ev["t"] * 1e9)), schemas.encode_event(ev))
        )
    return len(events)
