import logging
from typing import Callable, Dict, Iterable, List, Optional, Set, Tuple

from pydantic import BaseModel

from ..analytics.bounds import hammer_bounds, p_ref_range
from ..mechanism.bank import BankState
from ..mechanism.regions import BankGeometry
from ..mechanism.trace import TraceEvent, format_trace
from ..models.device import DeviceProfile
from ..models.errors import ConstraintError, DomainError
from ..models.mechanism import MechanismConfig, TieRule
from ..models.validation import validate
from .phase1 import Phase1Schedule, plan_phase1

logger = logging.getLogger(__name__)


class WavePlan(BaseModel):
    """Activation trace of a two-phase Wave Attack, split by phase"""
    target_subbank: int
    victim_row: int
    p_ref: Optional[int] = None
    schedule: Phase1Schedule
    init_events: List[TraceEvent]
    iteration_events: List[List[TraceEvent]]
    phase2_events: List[TraceEvent]
    achieved_p: int = 0
    restore_length: int = 0

    @property
    def phase1_events(self) -> List[TraceEvent]:
        events = list(self.init_events)
        for iteration in self.iteration_events:
            events.extend(iteration)
        return events

    @property
    def events(self) -> List[TraceEvent]:
        return self.phase1_events + list(self.phase2_events)

    def phases(self) -> List[Tuple[str, List[TraceEvent]]]:
        named = [("init", list(self.init_events))]
        named.extend((f"iteration {i}", list(events)) for i, events in enumerate(self.iteration_events))
        if self.restore_length:
            named.append(("restore", list(self.phase2_events[:self.restore_length])))
        named.append(("phase2", list(self.phase2_events[self.restore_length:])))
        return named

    def to_trace_text(self) -> str:
        """Trace-file text with ``# phase:`` markers between the parts"""
        header = (f"# wave attack: target subbank {self.target_subbank}, victim row {self.victim_row}"
                  + (f", p_ref {self.p_ref}" if self.p_ref is not None else ""))
        return header + "\n" + format_trace(phases=self.phases())


class AttackOutcome(BaseModel):
    """Replay of a WavePlan against a fresh bank"""
    target_subbank: int
    victim_row: int
    events: int
    achieved_p: int
    hc_phase1: int
    hc_phase2: int
    observed_p1max: int
    max_pending: int
    max_victim_window: int
    max_window: int
    victim_refreshed: bool
    victim_refreshed_before_uhc: bool
    thc: int
    hc_attack_bound: int
    bound_gap: int
    uhc: int

    @property
    def safe(self) -> bool:
        return self.max_window < self.uhc


def choose_target(config: MechanismConfig) -> int:
    """Subbank the tie policy services last among equals"""
    policy = config.tie_policy
    if policy.rule == TieRule.ADVERSARIAL:
        return policy.target_subbank
    return config.n_subbanks_nsb - 1


class WavePlanner:
    """Builds a Wave Attack while watching a private replica of the bank.

    The mechanism is deterministic, so the planner observes the replica
    after every activation it emits and picks the next row from the state
    it sees: which subbanks still need hammers, which ones the consumer
    has serviced, and when the victim row is refreshed.
    """

    def __init__(self, device: DeviceProfile, config: MechanismConfig,
                 p_ref: Optional[int] = None, retry_passes: int = 3):
        if p_ref is not None and p_ref not in p_ref_range(config.n_subbanks_nsb):
            allowed = p_ref_range(config.n_subbanks_nsb)
            raise DomainError(f"p_ref={p_ref} outside [1, {allowed.stop - 1}] for N_SB={config.n_subbanks_nsb}")
        self.device = device
        self.config = config
        self.p_ref = p_ref
        self.retry_passes = retry_passes
        self.d = config.d
        self.thc = hammer_bounds(device, config).thc
        self.geometry = BankGeometry(device, config)
        self.state = BankState(device, config, geometry=self.geometry)
        self.schedule = plan_phase1(device, config)
        self.target = choose_target(config)
        self._buffer: List[TraceEvent] = []
        self._p_ref_done = False
        self._filler_cache: Dict[frozenset, Optional[int]] = {}

    def _emit(self, row: int) -> None:
        event = TraceEvent.activate(row)
        self.state.apply_event(event)
        self._buffer.append(event)

    def _take(self) -> List[TraceEvent]:
        events, self._buffer = self._buffer, []
        return events

    def _entry(self, subbank: int):
        return self.state.entries[subbank]

    def _hammer_row(self, subbank: int, avoid: Iterable[int] = ()) -> int:
        """Row hammering ``subbank``, touching none of ``avoid`` when possible"""
        exclusive = self.geometry.exclusive_rows(subbank)
        if exclusive:
            return exclusive[-1] if subbank == 0 else exclusive[0]
        avoid = set(avoid)
        rows = self.geometry.rows_hammering(subbank)
        for row in rows:
            if not avoid.intersection(self.geometry.counter_subbanks[row]):
                return row
        return rows[0]

    def _filler_row(self, protect: Set[int]) -> Optional[int]:
        """A row outside the counter regions of ``protect``, far from the target"""
        key = frozenset(protect)
        if key not in self._filler_cache:
            rows = range(self.geometry.rows)
            if self.target < self.geometry.n_subbanks // 2:
                rows = reversed(rows)
            self._filler_cache[key] = next(
                (row for row in rows if not key.intersection(self.geometry.counter_subbanks[row])), None
            )
        return self._filler_cache[key]

    def _wait_budget(self) -> int:
        return 4 * (self.geometry.n_subbanks + 2) * self.device.window_t * (self.schedule.i_last + 3)

    def _wait_for_target_refresh(self, protect: Set[int], start: int) -> bool:
        """Idle on filler rows until the target has been refreshed since ``start``"""
        filler = self._filler_row(protect | {self.target})
        if filler is None:
            filler = self._hammer_row(self.target)
        for _ in range(self._wait_budget()):
            if self.state.subbank_refreshes[self.target] != start:
                return True
            self._emit(filler)
        return self.state.subbank_refreshes[self.target] != start

    def _forced_refresh(self) -> int:
        """Produce exactly one pending on the target and wait for its refresh"""
        row = self._hammer_row(self.target)
        start = self.state.subbank_refreshes[self.target]
        for _ in range(self.d - self._entry(self.target).frac):
            self._emit(row)
        if not self._wait_for_target_refresh(set(), start):
            logger.warning(f"Target subbank {self.target} was not refreshed at plan start")
        return self.state.last_refreshed_row[self.target]

    def _prime_row(self, needy: List[int], members: Set[int]) -> int:
        needy_set = set(needy)
        for subbank in needy:
            if subbank + 1 in needy_set:
                row = self.geometry.shared_row(subbank, subbank + 1)
                if row is not None:
                    return row
        for subbank in needy:
            if self.geometry.exclusive_rows(subbank):
                return self._hammer_row(subbank)
        primed = {s for s in members if self._entry(s).frac >= self.d - 1}
        return self._hammer_row(needy[0], avoid=primed)

    def _prime(self, members: Iterable[int]) -> bool:
        """Raise every member's FRAC to D-1 so one more hammer produces a refresh"""
        members = set(members)
        budget = len(members) * self.d + self.device.window_t
        for _ in range(self.retry_passes):
            for _ in range(budget):
                needy = sorted(s for s in members if self._entry(s).frac < self.d - 1)
                if not needy:
                    return True
                self._emit(self._prime_row(needy, members))
        done = all(self._entry(s).frac >= self.d - 1 for s in members)
        if not done:
            logger.warning(f"Could not prime {sorted(members)} within {self.retry_passes} passes")
        return done

    def _push(self, members: List[int]) -> None:
        """One more hammer on each primed member, target last, pairs through shared rows"""
        order = sorted(members, key=lambda s: (s == self.target or s + 1 == self.target, s))
        pushed: Set[int] = set()
        member_set = set(members)
        for subbank in order:
            if subbank in pushed:
                continue
            partner = subbank + 1
            row = None
            if partner in member_set and partner not in pushed:
                row = self.geometry.shared_row(subbank, partner)
            if row is not None:
                pushed.update((subbank, partner))
            else:
                row = self._hammer_row(subbank, avoid=member_set - {subbank})
                pushed.add(subbank)
            self._emit(row)

    def _choose_keep(self, survivors: List[int], count: int) -> List[int]:
        order = self.state.service_order(survivors)
        keep = order[-count:] if count < len(order) else order
        if self.target in survivors and self.target not in keep:
            keep = keep[1:] + [self.target]
        return sorted(keep)

    def _attempt(self, step: Callable[[], object]) -> bool:
        """Run ``step`` on the replica, rolling it back if the consumer refreshed the target meanwhile"""
        saved, mark = self.state.copy(), len(self._buffer)
        start = self.state.subbank_refreshes[self.target]
        step()
        if self.state.subbank_refreshes[self.target] == start:
            return True
        self.state = saved
        del self._buffer[mark:]
        return False

    def _prime_keep(self, survivors: List[int], count: int) -> List[int]:
        """Prime the largest keep set, down to the target alone, that leaves the target unrefreshed"""
        for size in range(min(count, len(survivors)), 0, -1):
            keep = self._choose_keep(survivors, size)
            if self._attempt(lambda: self._prime(keep)):
                if size < count:
                    logger.info(f"Kept {size} of the scheduled {count} subbanks to keep the target on the wave")
                return keep
        return []

    def _arrange_p_ref_refresh(self, protect: Set[int]) -> None:
        """Raise the target to PENDING p_ref and idle until the consumer refreshes it"""
        start = self.state.subbank_refreshes[self.target]
        row = self._hammer_row(self.target)
        for _ in range(self._wait_budget()):
            if (self._entry(self.target).pending >= self.p_ref
                    or self.state.subbank_refreshes[self.target] != start):
                break
            self._emit(row)
        pending = self._entry(self.target).pending
        if self._wait_for_target_refresh(protect, start):
            logger.info(f"Target refreshed at PENDING {pending}: row {self.state.last_refreshed_row[self.target]}")
        else:
            logger.warning(f"Target subbank {self.target} was not refreshed at PENDING {self.p_ref}")
        self._p_ref_done = True

    def _p_ref_due(self, level: int, current: List[int]) -> bool:
        return (self.p_ref is not None and not self._p_ref_done
                and self.target in current and level + 1 == self.p_ref)

    def _aggressor_rows(self, victim: int) -> List[int]:
        """The 2B rows of the target subbank nearest the victim"""
        rows = [row for row in self.geometry.subbank_row_range(self.target) if row != victim]
        rows.sort(key=lambda row: (abs(row - victim), row))
        aggressors = rows[:2 * self.device.blast_radius_b]
        return aggressors or [self._hammer_row(self.target)]

    def _run_phase1(self) -> Tuple[List[List[TraceEvent]], int]:
        """Ride the wave up through the schedule; returns the iterations and the level reached.

        The target is never refreshed here except by the p_ref arrangement:
        any push or prime that would let the consumer reach it is rolled back.
        """
        counts = self.schedule.n_per_iteration
        i_last = self.schedule.i_last
        current = list(range(self.geometry.n_subbanks))
        level = 0
        iterations: List[List[TraceEvent]] = []
        for i in range(i_last):
            if self._p_ref_due(level, current):
                # target goes up alone and leaves the wave after its refresh
                self._arrange_p_ref_refresh(set(current) - {self.target})
                current.remove(self.target)
            members = list(current)
            if not members:
                break
            if not self._attempt(lambda: self._push(members)):
                logger.warning(f"Iteration {i}: pushing {len(members)} subbanks would refresh the target, "
                               f"stopping at PENDING {level}")
                break
            reached = max(self._entry(s).pending for s in members)
            if reached <= level:
                logger.warning(f"Iteration {i}: no subbank rose above PENDING {level}")
                iterations.append(self._take())
                break
            level = reached
            survivors = [s for s in members if self._entry(s).pending == level]
            if i == i_last - 1:
                logger.info(f"Iteration {i}: PENDING level {level} on {len(survivors)} subbanks")
                iterations.append(self._take())
                break
            keep = self._prime_keep(survivors, counts[i + 1])
            current = [s for s in keep
                       if self._entry(s).pending == level and self._entry(s).frac >= self.d - 1]
            logger.info(f"Iteration {i}: PENDING level {level}, keeping {len(current)} of {len(survivors)}")
            iterations.append(self._take())
            needs_target = self.p_ref is None or not self._p_ref_done
            if not current or (needs_target and self.target not in current):
                logger.warning(f"Iteration {i}: the wave lost the target, stopping at PENDING {level}")
                break
        return iterations, level

    def plan(self) -> WavePlan:
        logger.info(f"Planning wave attack on subbank {self.target} of {self.geometry.n_subbanks}")
        self._forced_refresh()
        self._prime(range(self.geometry.n_subbanks))
        init_events = self._take()

        iteration_events, achieved = self._run_phase1()
        if achieved < self.schedule.achieved_p:
            logger.warning(f"Phase 1 reached PENDING {achieved}, short of the scheduled {self.schedule.achieved_p}")
        if self.p_ref is not None and not self._p_ref_done:
            self._arrange_p_ref_refresh(set())
        leftover = self._take()
        if leftover:
            if iteration_events:
                iteration_events[-1].extend(leftover)
            else:
                init_events.extend(leftover)

        victim = self.state.last_refreshed_row[self.target]
        if victim is None:
            victim = self.geometry.schedules[self.target][0]
        observed = max(entry.pending for entry in self.state.entries)
        logger.info(f"Phase 2 on victim row {victim}, highest PENDING {observed}")

        # restore the target to the level the wave reached, then keep hammering
        aggressors = self._aggressor_rows(victim)
        start = self.state.row_refreshes[victim]
        restore_length: Optional[int] = None
        for step in range(2 * self.thc):
            if self.state.row_refreshes[victim] != start:
                break
            if restore_length is None and self._entry(self.target).pending >= achieved:
                restore_length = step
            self._emit(aggressors[step % len(aggressors)])
        phase2_events = self._take()
        if restore_length is None:
            restore_length = len(phase2_events)
        if restore_length:
            logger.info(f"Restored the target to PENDING {achieved} in {restore_length} activations")

        return WavePlan(
            target_subbank=self.target,
            victim_row=victim,
            p_ref=self.p_ref,
            schedule=self.schedule,
            init_events=init_events,
            iteration_events=iteration_events,
            phase2_events=phase2_events,
            achieved_p=achieved,
            restore_length=restore_length,
        )


def plan_wave(device: DeviceProfile, config: MechanismConfig, p_ref: Optional[int] = None,
              allow_unsafe: bool = False) -> WavePlan:
    """Synthesize the worst-case two-phase attack for one configuration"""
    violations = validate(device, config)
    if violations and not allow_unsafe:
        raise ConstraintError("; ".join(str(v) for v in violations))
    return WavePlanner(device, config, p_ref).plan()


def execute(device: DeviceProfile, config: MechanismConfig, plan: WavePlan) -> AttackOutcome:
    """Replay a plan on a fresh bank and measure the victim's window"""
    state = BankState(device, config)
    target, victim = plan.target_subbank, plan.victim_row
    ordinal = 0
    for event in plan.phase1_events:
        ordinal += 1
        state.apply_event(event, ordinal)
    hc_phase1 = state.hammers[target]
    observed = max((entry.pending for entry in state.entries), default=0)
    refreshes_before = state.row_refreshes[victim]

    for event in plan.phase2_events:
        ordinal += 1
        state.apply_event(event, ordinal)
    victim_refreshed = state.row_refreshes[victim] > refreshes_before

    bounds = hammer_bounds(device, config)
    max_victim_window = state.max_window(victim)
    outcome = AttackOutcome(
        target_subbank=target,
        victim_row=victim,
        events=ordinal,
        achieved_p=plan.achieved_p,
        hc_phase1=hc_phase1,
        hc_phase2=state.hammers[target] - hc_phase1,
        observed_p1max=observed,
        max_pending=state.max_pending_observed,
        max_victim_window=max_victim_window,
        max_window=state.peak_window(),
        victim_refreshed=victim_refreshed,
        victim_refreshed_before_uhc=victim_refreshed and max_victim_window < device.uhc_dram,
        thc=bounds.thc,
        hc_attack_bound=bounds.hc_attack,
        bound_gap=bounds.thc - max_victim_window,
        uhc=device.uhc_dram,
    )
    logger.info(f"Wave attack: victim window {max_victim_window} against THC {bounds.thc}")
    return outcome
