from .regions import (
    BankGeometry,
    counter_region_subbanks,
    refresh_region_owners,
    refresh_schedule,
)
from .refresh_window import RefreshWindow
from .trace import EventKind, TraceEvent, format_trace, load_trace, parse_trace, write_trace
from .bank import BankState, BankStats, SubbankEntry
from .simulator import SimReport, Simulator, build_report, run_trace

__all__ = [
    "BankGeometry",
    "BankState",
    "BankStats",
    "EventKind",
    "RefreshWindow",
    "SimReport",
    "Simulator",
    "SubbankEntry",
    "TraceEvent",
    "build_report",
    "counter_region_subbanks",
    "format_trace",
    "load_trace",
    "parse_trace",
    "refresh_region_owners",
    "refresh_schedule",
    "run_trace",
    "write_trace",
]
