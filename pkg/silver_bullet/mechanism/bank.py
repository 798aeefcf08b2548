import logging
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel

from ..models.device import DeviceProfile
from ..models.errors import TraceError
from ..models.mechanism import MechanismConfig, TiePolicy, TieRule
from .refresh_window import RefreshWindow
from .regions import BankGeometry
from .trace import EventKind, TraceEvent

logger = logging.getLogger(__name__)


class SubbankEntry:
    """FRAC, PENDING and LOCAL_INDEX of one subbank"""
    __slots__ = ('frac', 'pending', 'local_index')

    def __init__(self, frac: int = 0, pending: int = 0, local_index: int = 0):
        self.frac = frac
        self.pending = pending
        self.local_index = local_index

    def copy(self) -> "SubbankEntry":
        return SubbankEntry(self.frac, self.pending, self.local_index)

    def as_tuple(self) -> Tuple[int, int, int]:
        return self.frac, self.pending, self.local_index

    def __repr__(self) -> str:
        return f"SubbankEntry(frac={self.frac}, pending={self.pending}, local_index={self.local_index})"


class BankStats(BaseModel):
    total_activations: int = 0
    total_preventive_refreshes: int = 0
    total_periodic_refreshes: int = 0
    max_pending_observed: int = 0
    max_window_observed: int = 0


class BankState:
    """Live Silver Bullet table of one bank plus per-row hammer windows.

    A row's window is the number of hammers its refresh owners received
    since the row was last refreshed. Each subbank keeps a running hammer
    total and each row remembers the total at its last refresh, so a hammer
    costs O(1) regardless of subbank size.
    """

    def __init__(self, device: DeviceProfile, config: MechanismConfig,
                 policy: Optional[TiePolicy] = None, geometry: Optional[BankGeometry] = None,
                 record_refreshes: bool = False):
        self.device = device
        self.config = config
        self.policy = policy or config.tie_policy
        self.geometry = geometry or BankGeometry(device, config)
        self.d = config.d
        self.refresh_burst_r = device.refresh_burst_r

        n, rows = self.geometry.n_subbanks, self.geometry.rows
        self.entries: List[SubbankEntry] = [SubbankEntry() for _ in range(n)]
        self.window = RefreshWindow(device.window_t)
        self.hammers = [0] * n
        self.row_refreshes = [0] * rows
        self.subbank_refreshes = [0] * n
        self.last_refreshed_row: List[Optional[int]] = [None] * n
        self.refresh_log: Optional[List[Tuple[int, int]]] = [] if record_refreshes else None
        self.total_activations = 0
        self.total_preventive_refreshes = 0
        self.total_periodic_refreshes = 0
        self.max_pending_observed = 0
        self._base = [0] * rows
        self._peak = [0] * rows
        self._deferred: List[int] = []
        self._in_burst = False
        self._rotation = 0

    def window_count(self, row: int) -> int:
        return sum(self.hammers[s] for s in self.geometry.refresh_owners[row]) - self._base[row]

    @property
    def window_counts(self) -> List[int]:
        return [self.window_count(row) for row in range(self.geometry.rows)]

    def max_window(self, row: int) -> int:
        """Largest window ``row`` has reached so far, including the open one"""
        return max(self._peak[row], self.window_count(row))

    def max_window_per_row(self) -> List[int]:
        return [self.max_window(row) for row in range(self.geometry.rows)]

    def peak_window(self) -> int:
        """Largest window of any row since the last ``clear_peaks``"""
        return max(max(self._peak, default=0), max(self.window_counts, default=0))

    def clear_peaks(self) -> None:
        self._peak = [0] * self.geometry.rows

    def _reset_window(self, row: int) -> None:
        current = self.window_count(row)
        if current > self._peak[row]:
            self._peak[row] = current
        self._base[row] += current

    @property
    def activations_in_window(self) -> int:
        return self.window.activations_in_window

    @property
    def stats(self) -> BankStats:
        return BankStats(
            total_activations=self.total_activations,
            total_preventive_refreshes=self.total_preventive_refreshes,
            total_periodic_refreshes=self.total_periodic_refreshes,
            max_pending_observed=self.max_pending_observed,
            max_window_observed=max(self.max_window_per_row(), default=0),
        )

    def hammer_subbank(self, subbank: int) -> int:
        """One hammer on ``subbank``; returns 1 when it produces a pending refresh"""
        self.hammers[subbank] += 1
        entry = self.entries[subbank]
        entry.frac += 1
        if entry.frac < self.d:
            return 0
        entry.frac = 0
        if self._in_burst:
            # refreshes produced inside a burst wait for the next one
            self._deferred.append(subbank)
        else:
            entry.pending += 1
            if entry.pending > self.max_pending_observed:
                self.max_pending_observed = entry.pending
        return 1

    def apply_event(self, event: TraceEvent, ordinal: Optional[int] = None) -> None:
        row = event.row
        if not 0 <= row < self.geometry.rows:
            raise TraceError(f"row {row} outside bank of {self.geometry.rows} rows", ordinal=ordinal)
        if event.kind == EventKind.ACTIVATE:
            for subbank in self.geometry.counter_subbanks[row]:
                self.hammer_subbank(subbank)
            self.total_activations += 1
            if self.window.record_activation():
                self.consumer_burst()
        elif event.kind == EventKind.PERIODIC_REFRESH:
            self._reset_window(row)
            for subbank in self.geometry.counter_subbanks[row]:
                self.hammer_subbank(subbank)
            self.total_periodic_refreshes += 1
        else:
            raise TraceError(f"unknown event kind {event.kind!r}", ordinal=ordinal)

    def activate(self, row: int) -> None:
        self.apply_event(TraceEvent.activate(row))

    def service_order(self, candidates: Sequence[int]) -> List[int]:
        """Order in which the tie policy would refresh equally pending subbanks"""
        rule = self.policy.rule
        if rule == TieRule.ADVERSARIAL:
            target = self.policy.target_subbank
            ordered = sorted(s for s in candidates if s != target)
            if target in candidates:
                ordered.append(target)
            return ordered
        if rule == TieRule.ROTATING:
            n = self.geometry.n_subbanks
            return sorted(candidates, key=lambda s: (s - self._rotation) % n)
        return sorted(candidates)

    def select_subbank(self) -> Optional[int]:
        """Subbank the consumer refreshes next, or None when nothing is pending"""
        best = 0
        tied: List[int] = []
        for index, entry in enumerate(self.entries):
            if entry.pending > best:
                best = entry.pending
                tied = [index]
            elif entry.pending == best and best > 0:
                tied.append(index)
        if not tied:
            return None
        if len(tied) == 1:
            return tied[0]
        return self.service_order(tied)[0]

    def consumer_burst(self) -> int:
        """Up to R preventive refreshes, re-selecting the maximum before each"""
        performed = 0
        self._in_burst = True
        for _ in range(self.refresh_burst_r):
            subbank = self.select_subbank()
            if subbank is None:
                break
            self._preventive_refresh(subbank)
            performed += 1
        self._in_burst = False

        for subbank in self._deferred:
            entry = self.entries[subbank]
            entry.pending += 1
            if entry.pending > self.max_pending_observed:
                self.max_pending_observed = entry.pending
        self._deferred = []
        self.total_preventive_refreshes += performed
        if performed and logger.isEnabledFor(logging.DEBUG):
            logger.debug(f"Burst {self.window.windows_elapsed}: {performed} preventive refreshes")
        return performed

    def _preventive_refresh(self, subbank: int) -> int:
        entry = self.entries[subbank]
        schedule = self.geometry.schedules[subbank]
        row = schedule[entry.local_index]
        entry.local_index = (entry.local_index + 1) % len(schedule)
        entry.pending -= 1
        if self.policy.rule == TieRule.ROTATING:
            self._rotation = (subbank + 1) % self.geometry.n_subbanks

        self._reset_window(row)
        self.row_refreshes[row] += 1
        self.subbank_refreshes[subbank] += 1
        self.last_refreshed_row[subbank] = row
        if self.refresh_log is not None:
            self.refresh_log.append((subbank, row))
        for hammered in self.geometry.counter_subbanks[row]:
            self.hammer_subbank(hammered)
        return row

    def copy(self) -> "BankState":
        clone = BankState.__new__(BankState)
        clone.__dict__.update(self.__dict__)
        clone.entries = [entry.copy() for entry in self.entries]
        clone.window = self.window.copy()
        clone.hammers = list(self.hammers)
        clone.row_refreshes = list(self.row_refreshes)
        clone.subbank_refreshes = list(self.subbank_refreshes)
        clone.last_refreshed_row = list(self.last_refreshed_row)
        clone.refresh_log = None if self.refresh_log is None else list(self.refresh_log)
        clone._base = list(self._base)
        clone._peak = list(self._peak)
        clone._deferred = list(self._deferred)
        return clone

    def key(self) -> Tuple:
        """Everything that determines future windows, as a hashable value"""
        return (
            tuple(entry.as_tuple() for entry in self.entries),
            self.window.activations_in_window,
            self._rotation,
            tuple(self.window_counts),
        )
