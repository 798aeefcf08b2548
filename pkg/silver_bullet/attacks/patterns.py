from abc import ABC, abstractmethod
from enum import Enum
from typing import List

import numpy as np

from ..mechanism.regions import BankGeometry
from ..mechanism.trace import TraceEvent


class PatternKind(str, Enum):
    """Pattern families mixed into fuzz campaigns"""
    SINGLE_SIDED = "single_sided"
    DOUBLE_SIDED = "double_sided"
    RANDOM_ROWS = "random_rows"
    WAVE_BURST = "wave_burst"


class AccessPattern(ABC):
    """Base class for activation pattern generators"""

    def __init__(self, kind: PatternKind, geometry: BankGeometry, d: int):
        self.kind = kind
        self.geometry = geometry
        self.d = d

    @abstractmethod
    def rows(self, rng: np.random.Generator, length: int) -> List[int]:
        """Rows to activate, in order"""
        pass

    def generate(self, rng: np.random.Generator, length: int) -> List[TraceEvent]:
        return [TraceEvent.activate(row) for row in self.rows(rng, length)]


class SingleSidedPattern(AccessPattern):
    """One aggressor next to a randomly chosen victim"""

    def __init__(self, geometry: BankGeometry, d: int):
        super().__init__(PatternKind.SINGLE_SIDED, geometry, d)

    def rows(self, rng: np.random.Generator, length: int) -> List[int]:
        total = self.geometry.rows
        if total == 1:
            return [0] * length
        victim = int(rng.integers(total))
        if victim == 0:
            aggressor = 1
        elif victim == total - 1:
            aggressor = victim - 1
        else:
            aggressor = victim + (1 if rng.integers(2) else -1)
        return [aggressor] * length


class DoubleSidedPattern(AccessPattern):
    """Alternates the two rows on either side of a victim"""

    def __init__(self, geometry: BankGeometry, d: int):
        super().__init__(PatternKind.DOUBLE_SIDED, geometry, d)

    def rows(self, rng: np.random.Generator, length: int) -> List[int]:
        total = self.geometry.rows
        if total < 3:
            return [total - 1] * length
        victim = int(rng.integers(1, total - 1))
        sides = (victim - 1, victim + 1)
        return [sides[i % 2] for i in range(length)]


class RandomRowsPattern(AccessPattern):
    def __init__(self, geometry: BankGeometry, d: int):
        super().__init__(PatternKind.RANDOM_ROWS, geometry, d)

    def rows(self, rng: np.random.Generator, length: int) -> List[int]:
        return rng.integers(0, self.geometry.rows, size=length).tolist()


class WaveBurstPattern(AccessPattern):
    """Bursts across a shrinking set of subbanks, ending on a single subbank.

    Each round hammers every subbank in the set through rows of its counter
    region, then keeps half of the set, mimicking the two attack phases
    without the planner's knowledge of the consumer.
    """

    def __init__(self, geometry: BankGeometry, d: int):
        super().__init__(PatternKind.WAVE_BURST, geometry, d)

    def rows(self, rng: np.random.Generator, length: int) -> List[int]:
        n = self.geometry.n_subbanks
        subbanks = rng.permutation(n)[:int(rng.integers(1, n + 1))].tolist()
        rows: List[int] = []
        while len(rows) < length:
            for subbank in sorted(subbanks):
                candidates = self.geometry.rows_hammering(subbank)
                row = candidates[int(rng.integers(len(candidates)))]
                rows.extend([row] * int(rng.integers(1, self.d + 1)))
            if len(subbanks) > 1:
                subbanks = subbanks[:max(1, len(subbanks) // 2)]
        return rows[:length]


class PatternFactory:
    """Factory for creating access pattern generators"""

    _patterns = {
        PatternKind.SINGLE_SIDED: SingleSidedPattern,
        PatternKind.DOUBLE_SIDED: DoubleSidedPattern,
        PatternKind.RANDOM_ROWS: RandomRowsPattern,
        PatternKind.WAVE_BURST: WaveBurstPattern,
    }

    @staticmethod
    def create_pattern(kind: PatternKind, geometry: BankGeometry, d: int) -> AccessPattern:
        """Create a generator for the given pattern kind"""
        try:
            return PatternFactory._patterns[PatternKind(kind)](geometry, d)
        except (KeyError, ValueError):
            raise ValueError(f"unknown access pattern '{kind}'")

    @staticmethod
    def all_kinds() -> List[PatternKind]:
        return list(PatternKind)
