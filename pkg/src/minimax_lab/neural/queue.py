"""Bounded FIFO of parameter snapshots."""

from __future__ import annotations

from collections import deque
from typing import Iterator

from .mlp import ParamVector


class ModelQueue:
    """Holds at most ``capacity`` read-only snapshots; pushing when full drops the oldest."""

    def __init__(self, capacity: int = 5):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = int(capacity)
        self._items: deque[ParamVector] = deque(maxlen=self.capacity)
        self.inserted = 0

    def push(self, params: ParamVector) -> ParamVector | None:
        """Store a snapshot of ``params``; returns the evicted snapshot, if any."""
        evicted = self._items[0] if len(self._items) == self.capacity else None
        self._items.append(params.snapshot())
        self.inserted += 1
        return evicted

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[ParamVector]:
        return iter(self._items)

    def __getitem__(self, i: int) -> ParamVector:
        return self._items[i]

    @property
    def latest(self) -> ParamVector:
        return self._items[-1]

    def __repr__(self) -> str:
        return f"ModelQueue({len(self)}/{self.capacity}, inserted={self.inserted})"
