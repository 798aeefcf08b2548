from typing import Dict, FrozenSet, List, Optional, Tuple

from ..models.device import DeviceProfile
from ..models.mechanism import MechanismConfig, Scheme


def _overlap(row: int, subbank_rows: int, n_subbanks: int, blast_radius: int) -> Tuple[int, ...]:
    """Owning subbank plus the neighbour whose boundary lies within B rows"""
    owner = row // subbank_rows
    offset = row - owner * subbank_rows
    subbanks = [owner]
    if offset < blast_radius and owner > 0:
        subbanks.insert(0, owner - 1)
    if offset >= subbank_rows - blast_radius and owner + 1 < n_subbanks:
        subbanks.append(owner + 1)
    return tuple(subbanks)


def counter_region_subbanks(row: int, device: DeviceProfile, config: MechanismConfig) -> FrozenSet[int]:
    """Subbanks whose FRAC counts a hammer of ``row``"""
    if config.scheme == Scheme.EPRR:
        return frozenset({row // config.subbank_rows_ssb})
    return frozenset(_overlap(row, config.subbank_rows_ssb, config.n_subbanks_nsb, device.blast_radius_b))


def refresh_region_owners(row: int, device: DeviceProfile, config: MechanismConfig) -> FrozenSet[int]:
    """Subbanks whose refresh schedule covers ``row``"""
    if config.scheme == Scheme.EPRR:
        return frozenset(_overlap(row, config.subbank_rows_ssb, config.n_subbanks_nsb, device.blast_radius_b))
    return frozenset({row // config.subbank_rows_ssb})


def refresh_schedule(subbank: int, device: DeviceProfile, config: MechanismConfig) -> Tuple[int, ...]:
    """Rows a subbank refreshes, in LOCAL_INDEX order.

    Under EPRR every margin row (internal and external, B rows on each side)
    appears twice, half a cycle apart, and core rows once.
    """
    size = config.subbank_rows_ssb
    first, last = subbank * size, (subbank + 1) * size
    own = list(range(first, last))
    if config.scheme == Scheme.ECR:
        return tuple(own)

    b = device.blast_radius_b
    internal = sorted(set(own[:b]) | set(own[-b:]))
    external = []
    if subbank > 0:
        external.extend(range(max(0, first - b), first))
    if subbank + 1 < config.n_subbanks_nsb:
        external.extend(range(last, last + b))
    margins = sorted(set(internal) | set(external))
    core = [row for row in own if row not in set(internal)]
    half = len(core) // 2
    return tuple(margins + core[:half] + margins + core[half:])


class BankGeometry:
    """Row and subbank maps of one bank, built once per configuration"""

    def __init__(self, device: DeviceProfile, config: MechanismConfig):
        self.device = device
        self.config = config
        self.subbank_rows = config.subbank_rows_ssb
        self.n_subbanks = config.n_subbanks_nsb
        self.rows = config.covered_rows
        self.counter_subbanks: List[Tuple[int, ...]] = [
            tuple(sorted(counter_region_subbanks(row, device, config))) for row in range(self.rows)
        ]
        self.refresh_owners: List[Tuple[int, ...]] = [
            tuple(sorted(refresh_region_owners(row, device, config))) for row in range(self.rows)
        ]
        self.schedules: List[Tuple[int, ...]] = [
            refresh_schedule(s, device, config) for s in range(self.n_subbanks)
        ]
        self._exclusive: Dict[int, List[int]] = {}

    def owner(self, row: int) -> int:
        return row // self.subbank_rows

    def subbank_row_range(self, subbank: int) -> range:
        return range(subbank * self.subbank_rows, (subbank + 1) * self.subbank_rows)

    def exclusive_rows(self, subbank: int) -> List[int]:
        """Rows whose activation hammers ``subbank`` and nothing else"""
        if subbank not in self._exclusive:
            self._exclusive[subbank] = [row for row in self.subbank_row_range(subbank)
                                        if self.counter_subbanks[row] == (subbank,)]
        return self._exclusive[subbank]

    def shared_row(self, first: int, second: int) -> Optional[int]:
        """A row hammering exactly the two given subbanks, if the scheme has one"""
        low, high = sorted((first, second))
        if high != low + 1 or high >= self.n_subbanks:
            return None
        boundary = high * self.subbank_rows
        for row in (boundary - 1, boundary):
            if self.counter_subbanks[row] == (low, high):
                return row
        return None

    def rows_hammering(self, subbank: int) -> List[int]:
        """Every row in the counter region of ``subbank``"""
        lo = max(0, (subbank - 1) * self.subbank_rows)
        hi = min(self.rows, (subbank + 2) * self.subbank_rows)
        return [row for row in range(lo, hi) if subbank in self.counter_subbanks[row]]
