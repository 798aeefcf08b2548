import logging
from typing import Dict, Iterator, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel
from tqdm import tqdm

from ..analytics.bounds import hammer_bounds
from ..config.settings import get_settings
from ..mechanism.regions import BankGeometry
from ..mechanism.simulator import Simulator
from ..mechanism.trace import TraceEvent
from ..models.device import DeviceProfile
from ..models.mechanism import MechanismConfig
from .patterns import AccessPattern, PatternFactory, PatternKind

logger = logging.getLogger(__name__)


def _generate(patterns: Sequence[AccessPattern], seed: int, count: int, length: int) -> Iterator[List[TraceEvent]]:
    rng = np.random.default_rng(seed)
    for index in range(count):
        yield patterns[index % len(patterns)].generate(rng, length)


def fuzz_traces(device: DeviceProfile, config: MechanismConfig, seed: int, count: int, length: int,
                kinds: Optional[Sequence[PatternKind]] = None) -> Iterator[List[TraceEvent]]:
    """Deterministic stream of activation traces cycling through the pattern kinds"""
    geometry = BankGeometry(device, config)
    patterns = [PatternFactory.create_pattern(kind, geometry, config.d)
                for kind in (kinds or PatternFactory.all_kinds())]
    return _generate(patterns, seed, count, length)


class PatternStats(BaseModel):
    kind: PatternKind
    traces: int = 0
    worst_window: int = 0
    worst_pending: int = 0
    thc_violations: int = 0
    unsafe_traces: int = 0


class CampaignReport(BaseModel):
    """Aggregate of one fuzz campaign"""
    seed: int
    count: int
    length: int
    thc: int
    uhc: int
    worst_window: int
    worst_pending: int
    thc_violations: int
    unsafe_traces: int
    patterns: List[PatternStats]

    @property
    def safe(self) -> bool:
        return self.unsafe_traces == 0


class FuzzCampaign:
    """Replays batches of fuzz traces against one configuration"""

    def __init__(self, device: DeviceProfile, config: MechanismConfig,
                 kinds: Optional[Sequence[PatternKind]] = None, allow_unsafe: bool = False):
        self.device = device
        self.config = config
        self.simulator = Simulator(device, config, allow_unsafe=allow_unsafe)
        self.thc = hammer_bounds(device, config).thc
        self.patterns: Dict[PatternKind, AccessPattern] = {}
        self._initialize_patterns(kinds or PatternFactory.all_kinds())

    def _initialize_patterns(self, kinds: Sequence[PatternKind]) -> None:
        for kind in kinds:
            try:
                self.patterns[PatternKind(kind)] = PatternFactory.create_pattern(
                    kind, self.simulator.geometry, self.config.d)
            except ValueError as e:
                logger.error(f"Failed to initialize pattern {kind}: {str(e)}")
        logger.info(f"Fuzz patterns: {[k.value for k in self.patterns]}")

    def run(self, seed: int, count: int, length: int, progress: Optional[bool] = None) -> CampaignReport:
        if progress is None:
            progress = get_settings().progress
        stats = {kind: PatternStats(kind=kind) for kind in self.patterns}
        patterns = list(self.patterns.values())
        traces = _generate(patterns, seed, count, length)

        for index, trace in enumerate(tqdm(traces, total=count, disable=not progress, desc="fuzz")):
            kind = patterns[index % len(patterns)].kind
            report = self.simulator.replay(trace)
            entry = stats[kind]
            entry.traces += 1
            entry.worst_window = max(entry.worst_window, report.max_window)
            entry.worst_pending = max(entry.worst_pending, report.max_pending_observed)
            if report.max_window > self.thc:
                entry.thc_violations += 1
                logger.warning(f"Trace {index} ({kind.value}) reached window {report.max_window} above THC {self.thc}")
            if not report.safe:
                entry.unsafe_traces += 1

        per_pattern = list(stats.values())
        result = CampaignReport(
            seed=seed,
            count=count,
            length=length,
            thc=self.thc,
            uhc=self.device.uhc_dram,
            worst_window=max((p.worst_window for p in per_pattern), default=0),
            worst_pending=max((p.worst_pending for p in per_pattern), default=0),
            thc_violations=sum(p.thc_violations for p in per_pattern),
            unsafe_traces=sum(p.unsafe_traces for p in per_pattern),
            patterns=per_pattern,
        )
        logger.info(f"Fuzz campaign: {count} traces, worst window {result.worst_window}, THC {self.thc}")
        return result
