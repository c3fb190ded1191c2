from collections import deque
from typing import Deque, Iterator, Tuple
from fairness_engine.core.types import ScoredList
from fairness_engine.utils.errors import OrderingError

DEFAULT_WINDOW = 100


class HistoryWindow:
    """FIFO of the most recent delivered lists, bounded by a list count.

    Single writer: the opportunity loop that owns it.
    """
    def __init__(self, capacity: int = DEFAULT_WINDOW):
        if capacity < 1:
            raise ValueError(f"[HISTORY] window capacity must be positive, got {capacity}")
        self.capacity = capacity
        self._buffer: Deque[ScoredList] = deque(maxlen=capacity)

    def __len__(self) -> int:
        return len(self._buffer)

    def __iter__(self) -> Iterator[ScoredList]:
        return iter(self._buffer)

    @property
    def latest_tick(self):
        return self._buffer[-1].produced_at if self._buffer else None

    def append(self, scored_list: ScoredList) -> "HistoryWindow":
        latest = self.latest_tick
        if latest is not None and scored_list.produced_at <= latest:
            raise OrderingError(
                f"[HISTORY] tick {scored_list.produced_at} is not after latest tick {latest}"
            )
        self._buffer.append(scored_list)
        return self

    def view(self) -> Tuple[ScoredList, ...]:
        return tuple(self._buffer)


def append_list(window: HistoryWindow, scored_list: ScoredList) -> HistoryWindow:
    return window.append(scored_list)


def window_view(window: HistoryWindow) -> Tuple[ScoredList, ...]:
    return window.view()
