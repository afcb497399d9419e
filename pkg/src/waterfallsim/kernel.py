"""Deterministic discrete-event kernel.

Activities are plain generators. They yield commands to the kernel:

    wait = yield pool.acquire(3)     # suspend until 3 units are granted
    yield sim.timeout(7)             # suspend for 7 time units
    pool.release(3)                  # non-blocking

Events are totally ordered by ``(time, seq)`` where ``seq`` is assigned at
schedule time, so simultaneous events run in the order they were scheduled.
Pools grant whole batches atomically from a single strict-FIFO queue: a
small request never overtakes a larger one waiting at the head.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Generator, Optional

__all__ = [
    "SimulationError",
    "ContractViolation",
    "StarvationError",
    "Event",
    "Simulation",
    "Process",
    "ResourcePool",
    "PendingRequest",
]


class SimulationError(Exception):
    """Base class for kernel errors."""


class ContractViolation(SimulationError):
    """A caller broke an operation's precondition."""


class StarvationError(SimulationError):
    """A request asks for more units than the pool can ever hold."""


@dataclass(frozen=True)
class Event:
    time: float
    seq: int
    activation: Callable[[], Any] = field(compare=False, repr=False)


class Simulation:
    """Simulation clock plus event calendar.

    If ``record_events`` is set, the ``(time, seq)`` key of every processed
    event is appended to ``event_log``.
    """

    def __init__(self, record_events: bool = False) -> None:
        self.now = 0.0
        self._calendar: list[tuple[float, int, Event]] = []
        self._seq = 0
        self.processed = 0
        self.event_log: Optional[list[tuple[float, int]]] = [] if record_events else None

    def schedule(self, delay: float, activation: Callable[[], Any]) -> Event:
        if not delay >= 0:
            raise ContractViolation(f"cannot schedule with negative delay {delay!r}")
        return self.schedule_at(self.now + delay, activation)

    def schedule_at(self, time: float, activation: Callable[[], Any]) -> Event:
        if not time >= self.now:
            raise ContractViolation(f"cannot schedule at {time!r}, clock is already {self.now!r}")
        event = Event(time, self._seq, activation)
        self._seq += 1
        heapq.heappush(self._calendar, (event.time, event.seq, event))
        return event

    def pending(self) -> int:
        return len(self._calendar)

    def step(self) -> Event:
        """Process the next event."""
        time, seq, event = heapq.heappop(self._calendar)
        if time < self.now:
            raise ContractViolation(f"event at {time} precedes clock {self.now}")
        self.now = time
        self.processed += 1
        if self.event_log is not None:
            self.event_log.append((time, seq))
        event.activation()
        return event

    def run(self) -> float:
        """Process events until the calendar is empty and return the final clock."""
        while self._calendar:
            self.step()
        return self.now

    def timeout(self, delay: float) -> "_Timeout":
        if not delay >= 0:
            raise ContractViolation(f"negative timeout {delay!r}")
        return _Timeout(delay)

    def process(self, generator: Generator, name: str = "") -> "Process":
        """Start ``generator`` as an activity at the current instant."""
        proc = Process(self, generator, name)
        self.schedule(0.0, proc._start)
        return proc


@dataclass(frozen=True)
class _Timeout:
    delay: float


@dataclass(frozen=True)
class _Acquire:
    pool: "ResourcePool"
    quantity: int


class Process:
    """A suspendable activity driven by a generator."""

    def __init__(self, sim: Simulation, generator: Generator, name: str = "") -> None:
        self.sim = sim
        self.name = name
        self._gen = generator
        self.done = False
        self.value: Any = None

    def _start(self) -> None:
        self._resume(None)

    def _resume(self, value: Any) -> None:
        # Runs synchronously until the activity suspends or finishes.
        while True:
            try:
                command = self._gen.send(value)
            except StopIteration as stop:
                self.done = True
                self.value = stop.value
                return
            if isinstance(command, _Timeout):
                self.sim.schedule(command.delay, lambda: self._resume(None))
                return
            if isinstance(command, _Acquire):
                granted = command.pool._request(self, command.quantity)
                if granted:
                    value = 0.0
                    continue
                return
            raise ContractViolation(f"process {self.name!r} yielded unsupported {command!r}")


@dataclass
class PendingRequest:
    quantity: int
    requested_at: float
    requester: Process
    ticket: int


class ResourcePool:
    """Counted pool of identical units with atomic FIFO batch grants.

    ``history`` holds one ``(time, in_use, queue_len)`` entry per state change
    (a release and the grants it triggers count as one change),
    starting with the idle state at the pool's creation time. ``grant_order``
    lists the tickets of queued requests in the order they were granted.
    """

    def __init__(self, sim: Simulation, name: str, capacity: int) -> None:
        if not isinstance(capacity, int) or capacity <= 0:
            raise ContractViolation(f"pool {name!r}: capacity must be a positive integer, got {capacity!r}")
        self.sim = sim
        self.name = name
        self.capacity = capacity
        self.in_use = 0
        self.queue: deque[PendingRequest] = deque()
        self.requests = 0
        self.queued = 0
        self.grant_order: list[int] = []
        self._tickets = 0
        self.history: list[tuple[float, int, int]] = [(sim.now, 0, 0)]

    @property
    def available(self) -> int:
        return self.capacity - self.in_use

    def acquire(self, quantity: int) -> _Acquire:
        """Command to yield from an activity; the activity receives its wait."""
        self._check_quantity(quantity)
        return _Acquire(self, quantity)

    def release(self, quantity: int) -> None:
        if not isinstance(quantity, int) or quantity <= 0:
            raise ContractViolation(f"pool {self.name!r}: release quantity must be positive, got {quantity!r}")
        if quantity > self.in_use:
            raise ContractViolation(
                f"pool {self.name!r}: releasing {quantity} with only {self.in_use} in use"
            )
        self.in_use -= quantity
        while self.queue and self.queue[0].quantity <= self.available:
            req = self.queue.popleft()
            self._grant(req.quantity)
            self.grant_order.append(req.ticket)
            wait = self.sim.now - req.requested_at
            self.sim.schedule(0.0, lambda p=req.requester, w=wait: p._resume(w))
        self._snapshot()

    def _check_quantity(self, quantity: int) -> None:
        if not isinstance(quantity, int) or quantity <= 0:
            raise ContractViolation(f"pool {self.name!r}: quantity must be a positive integer, got {quantity!r}")
        if quantity > self.capacity:
            raise StarvationError(
                f"pool {self.name!r}: request for {quantity} units exceeds capacity {self.capacity}"
            )

    def _request(self, requester: Process, quantity: int) -> bool:
        self._check_quantity(quantity)
        self.requests += 1
        if not self.queue and quantity <= self.available:
            self._grant(quantity)
            self._snapshot()
            return True
        self.queued += 1
        self.queue.append(PendingRequest(quantity, self.sim.now, requester, self._tickets))
        self._tickets += 1
        self._snapshot()
        return False

    def _grant(self, quantity: int) -> None:
        self.in_use += quantity

    def _snapshot(self) -> None:
        self.history.append((self.sim.now, self.in_use, len(self.queue)))
