import logging
import math
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, ConfigDict

from ..analytics.bounds import iteration_step, k_fraction
from ..models.device import DeviceProfile
from ..models.mechanism import MechanismConfig

logger = logging.getLogger(__name__)


class Phase1Schedule(BaseModel):
    """Subbank counts of each Phase 1 iteration"""
    model_config = ConfigDict(frozen=True)

    k: float
    n_per_iteration: List[int]
    n_act_per_iteration: List[float]
    n_consumed_per_iteration: List[float]
    i_last: int
    achieved_p: int


def plan_phase1(device: DeviceProfile, config: MechanismConfig,
                k: Optional[float] = None) -> Phase1Schedule:
    """Shrink the set of subbanks at the maximum PENDING by k per iteration.

    Starts from all N_SB subbanks and stops once floor(k * N(i)) reaches 0;
    every iteration raises the surviving subbanks' PENDING by one.
    """
    if k is None:
        factor = k_fraction(config.d, device.window_t, device.refresh_burst_r, config.scheme)
    else:
        factor = Fraction(k).limit_denominator(1 << 20)

    counts = [config.n_subbanks_nsb]
    while factor > 0:
        following = math.floor(factor * counts[-1])
        if following == 0 or following >= counts[-1]:
            break
        counts.append(following)

    n_act: List[float] = []
    n_consumed: List[float] = []
    for i, current in enumerate(counts):
        following = counts[i + 1] if i + 1 < len(counts) else 0
        step = iteration_step(current, following, config.d, device.window_t,
                              device.refresh_burst_r, config.scheme)
        n_act.append(step.n_act)
        n_consumed.append(step.n_consumed)

    i_last = len(counts) - 1
    logger.info(f"Phase 1 plan: N(i) = {counts}, k = {float(factor):.6f}")
    return Phase1Schedule(
        k=float(factor),
        n_per_iteration=counts,
        n_act_per_iteration=n_act,
        n_consumed_per_iteration=n_consumed,
        i_last=i_last,
        achieved_p=i_last,
    )
