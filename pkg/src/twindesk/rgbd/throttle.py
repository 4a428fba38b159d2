import math


class Throttle:
    """Admits at most one emission per period, aligned to clock-time slots.

    Alignment to floor(t / period) slots rather than last-emit offsets keeps
    the long-run rate pinned at exactly 1/period regardless of source jitter.
    """

    def __init__(self, period: float = 0.1):
        if period <= 0:
            raise ValueError("period must be positive")
        self.period = period
        self._last_slot = None

    def should_emit(self, t: float) -> bool:
        slot = math.floor(t / self.period + 1e-9)
        if slot != self._last_slot:
            self._last_slot = slot
            return True
        return False

    def reset(self) -> None:
        self._last_slot = None
