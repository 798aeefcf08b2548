import logging
from enum import Enum
from pathlib import Path
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from ..models.errors import TraceError

logger = logging.getLogger(__name__)


class EventKind(str, Enum):
    ACTIVATE = "A"
    PERIODIC_REFRESH = "P"


class TraceEvent(NamedTuple):
    """One bank event: an attacker activation or a periodic refresh of a row"""
    kind: EventKind
    row: int

    @classmethod
    def activate(cls, row: int) -> "TraceEvent":
        return cls(EventKind.ACTIVATE, row)

    @classmethod
    def periodic_refresh(cls, row: int) -> "TraceEvent":
        return cls(EventKind.PERIODIC_REFRESH, row)

    def to_line(self) -> str:
        return f"{self.kind.value} {self.row}"


def parse_trace(lines: Iterable[str]) -> List[TraceEvent]:
    """Parse ``A <row>`` / ``P <row>`` lines; ``#`` starts a comment"""
    events: List[TraceEvent] = []
    for number, line in enumerate(lines, start=1):
        entry = line.split('#', 1)[0].strip()
        if not entry:
            continue
        parts = entry.split()
        if len(parts) != 2:
            raise TraceError(f"expected '<A|P> <row>', got '{entry}'", line=number)
        kind_text, row_text = parts
        try:
            kind = EventKind(kind_text.upper())
        except ValueError:
            raise TraceError(f"unknown event kind '{kind_text}'", line=number)
        try:
            row = int(row_text)
        except ValueError:
            raise TraceError(f"row must be an integer, got '{row_text}'", line=number)
        if row < 0:
            raise TraceError(f"row must not be negative, got {row}", line=number)
        events.append(TraceEvent(kind, row))
    return events


def load_trace(path: Union[str, Path]) -> List[TraceEvent]:
    with open(path, encoding='utf-8') as handle:
        events = parse_trace(handle)
    logger.info(f"Loaded {len(events)} events from {path}")
    return events


def format_trace(events: Optional[Sequence[TraceEvent]] = None,
                 phases: Optional[Sequence[Tuple[str, Sequence[TraceEvent]]]] = None) -> str:
    """Render events as trace-file text, optionally split by ``# phase:`` markers"""
    lines: List[str] = []
    if events:
        lines.extend(event.to_line() for event in events)
    for name, phase_events in phases or []:
        lines.append(f"# phase: {name}")
        lines.extend(event.to_line() for event in phase_events)
    return "\n".join(lines) + ("\n" if lines else "")


def write_trace(path: Union[str, Path], events: Sequence[TraceEvent]) -> None:
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(format_trace(events))
