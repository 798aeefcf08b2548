import logging
from typing import Iterable, List, Optional

from pydantic import BaseModel

from ..models.device import DeviceProfile
from ..models.errors import ConstraintError
from ..models.mechanism import MechanismConfig, TiePolicy
from ..models.validation import validate
from .bank import BankState
from .regions import BankGeometry
from .trace import TraceEvent

logger = logging.getLogger(__name__)


class SimReport(BaseModel):
    """Outcome of replaying one trace against a bank"""
    events: int
    activations: int
    max_window: int
    worst_row: Optional[int]
    max_window_per_row: List[int]
    max_pending_observed: int
    refresh_count: int
    periodic_refreshes: int
    uhc: int
    safe: bool


def build_report(state: BankState, events: int) -> SimReport:
    windows = state.max_window_per_row()
    max_window = max(windows, default=0)
    worst_row = windows.index(max_window) if max_window > 0 else None
    return SimReport(
        events=events,
        activations=state.total_activations,
        max_window=max_window,
        worst_row=worst_row,
        max_window_per_row=windows,
        max_pending_observed=state.max_pending_observed,
        refresh_count=state.total_preventive_refreshes,
        periodic_refreshes=state.total_periodic_refreshes,
        uhc=state.device.uhc_dram,
        safe=max_window < state.device.uhc_dram,
    )


class Simulator:
    """Replays traces against fresh bank states of one configuration"""

    def __init__(self, device: DeviceProfile, config: MechanismConfig,
                 policy: Optional[TiePolicy] = None, allow_unsafe: bool = False):
        violations = validate(device, config)
        if violations:
            if not allow_unsafe:
                raise ConstraintError("; ".join(str(v) for v in violations))
            logger.warning(f"Simulating an unsafe configuration: {len(violations)} violation(s)")
        self.device = device
        self.config = config
        self.policy = policy or config.tie_policy
        self.geometry = BankGeometry(device, config)

    def new_state(self, record_refreshes: bool = False) -> BankState:
        return BankState(self.device, self.config, self.policy, self.geometry, record_refreshes)

    def replay(self, events: Iterable[TraceEvent], state: Optional[BankState] = None) -> SimReport:
        state = state or self.new_state()
        count = 0
        for ordinal, event in enumerate(events, start=1):
            state.apply_event(event, ordinal)
            count = ordinal
        report = build_report(state, count)
        logger.debug(
            f"Replayed {count} events: max window {report.max_window}, "
            f"max pending {report.max_pending_observed}, {report.refresh_count} refreshes"
        )
        return report


def run_trace(device: DeviceProfile, config: MechanismConfig, events: Iterable[TraceEvent],
              allow_unsafe: bool = False, policy: Optional[TiePolicy] = None) -> SimReport:
    """Replay ``events`` from an empty table and report the hammer windows"""
    simulator = Simulator(device, config, policy, allow_unsafe)
    logger.info(f"Simulating D={config.d}, S_SB={config.subbank_rows_ssb}, N_SB={config.n_subbanks_nsb}")
    report = simulator.replay(events)
    logger.info(f"Simulation finished: max window {report.max_window}, safe={report.safe}")
    return report
