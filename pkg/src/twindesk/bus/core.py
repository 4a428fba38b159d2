"""In-process topic bus with latest-wins and bounded-queue subscriptions.

One bus instance carries all traffic for a session. Timestamps are
session-relative nanoseconds taken from the clock callable at publish time and
bumped when needed so the stamped sequence is strictly increasing.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

from .frames import Envelope


class BusClosedError(RuntimeError):
    pass


@dataclass(frozen=True)
class SubscriptionMode:
    mode: str  # "latest_wins" or "queued"
    queue_capacity: int = 64

    def __post_init__(self):
        if self.mode not in ("latest_wins", "queued"):
            raise ValueError(f"unknown subscription mode {self.mode!r}")
        if self.mode == "queued" and self.queue_capacity < 1:
            raise ValueError("queue_capacity must be positive")

    @staticmethod
    def latest() -> "SubscriptionMode":
        return SubscriptionMode("latest_wins")

    @staticmethod
    def queued(capacity: int = 64) -> "SubscriptionMode":
        return SubscriptionMode("queued", capacity)


class Subscription:
    """Message stream handle owned by a single consumer."""

    def __init__(self, bus: "Bus", topic: str, mode: SubscriptionMode, wakeup=None):
        self._bus = bus
        self.topic = topic
        self.mode = mode
        self._lock = threading.Lock()
        self._cond = threading.Condition(self._lock)
        self._slot: Optional[Envelope] = None
        self._queue: deque[Envelope] = deque()
        self._wakeup = wakeup
        self.drops = 0
        self.closed = False

    def _deliver(self, env: Envelope) -> None:
        with self._cond:
            if self.closed:
                return
            if self.mode.mode == "latest_wins":
                self._slot = env
            else:
                if len(self._queue) >= self.mode.queue_capacity:
                    self._queue.popleft()
                    self.drops += 1
                self._queue.append(env)
            self._cond.notify_all()
        if self._wakeup is not None:
            self._wakeup()

    def poll(self) -> list[Envelope]:
        """Drain without blocking: the newest envelope (latest_wins) or the
        whole queue in publish order (queued)."""
        with self._cond:
            if self.mode.mode == "latest_wins":
                if self._slot is None:
                    return []
                out = [self._slot]
                self._slot = None
                return out
            out = list(self._queue)
            self._queue.clear()
            return out

    def recv(self, timeout: Optional[float] = None) -> list[Envelope]:
        """Block until at least one envelope (or timeout/close); then drain."""
        with self._cond:
            if self.mode.mode == "latest_wins":
                ready = lambda: self._slot is not None or self.closed
            else:
                ready = lambda: bool(self._queue) or self.closed
            self._cond.wait_for(ready, timeout=timeout)
        return self.poll()

    def unsubscribe(self) -> None:
        self._bus._remove(self)
        with self._cond:
            self.closed = True
            self._cond.notify_all()


class Bus:
    def __init__(self, clock: Callable[[], int] = lambda: 0):
        self._clock = clock
        self._lock = threading.Lock()
        self._subs: dict[str, list[Subscription]] = {}
        self._last_ts = -1
        self._closed = False

    def publish(self, topic: str, schema_id: int, payload: bytes) -> Envelope:
        """Stamp and deliver; returns the stamped envelope."""
        with self._lock:
            if self._closed:
                raise BusClosedError("publish after shutdown")
            ts = max(int(self._clock()), self._last_ts + 1)
            self._last_ts = ts
            env = Envelope(topic, schema_id, ts, payload).validate()
            targets = list(self._subs.get(topic, ()))
        for sub in targets:
            sub._deliver(env)
        return env

    def publish_envelope(self, env: Envelope) -> None:
        """Deliver a pre-stamped envelope unchanged (bridge ingress, replay)."""
        env.validate()
        with self._lock:
            if self._closed:
                raise BusClosedError("publish after shutdown")
            self._last_ts = max(self._last_ts, env.timestamp_ns)
            targets = list(self._subs.get(env.topic, ()))
        for sub in targets:
            sub._deliver(env)

    def subscribe(self, topic: str, mode: SubscriptionMode, wakeup=None) -> Subscription:
        with self._lock:
            if self._closed:
                raise BusClosedError("subscribe after shutdown")
            sub = Subscription(self, topic, mode, wakeup)
            self._subs.setdefault(topic, []).append(sub)
            return sub

    def _remove(self, sub: Subscription) -> None:
        with self._lock:
            subs = self._subs.get(sub.topic)
            if subs and sub in subs:
                subs.remove(sub)
                if not subs:
                    del self._subs[sub.topic]

    @property
    def closed(self) -> bool:
        return self._closed

    def shutdown(self) -> None:
        """Idempotent; unblocks every waiting subscriber."""
        with self._lock:
            if self._closed:
                return
            self._closed = True
            subs = [s for lst in self._subs.values() for s in lst]
            self._subs.clear()
        for sub in subs:
            with sub._cond:
                sub.closed = True
                sub._cond.notify_all()
