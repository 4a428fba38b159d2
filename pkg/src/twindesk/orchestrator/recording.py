"""JSONL session records: one header line, then one event dict per line."""

from __future__ import annotations

import json
from datetime import datetime, timezone


class SessionRecorder:
    """Collects event dicts in memory and optionally streams them to a file."""

    def __init__(self, path, header: dict):
        self.path = path
        self.header = dict(header)
        self.events: list[dict] = []
        self._fh = None
        if path is not None:
            self._fh = open(path, "w")
            self._fh.write(json.dumps(self.header) + "\n")

    def record(self, event: dict) -> None:
        self.events.append(event)
        if self._fh is not None:
            self._fh.write(json.dumps(event) + "\n")

    def close(self) -> None:
        if self._fh is not None:
            self._fh.flush()
            self._fh.close()
            self._fh = None


def make_header(cfg_hash: str, robot: str, started_at: str | None = None) -> dict:
    if started_at is None:
        started_at = datetime.now(timezone.utc).isoformat()
    return {"config_hash": cfg_hash, "robot": robot, "started_at": started_at}
