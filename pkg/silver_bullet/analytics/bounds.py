import logging
import math
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict

from ..models.device import DeviceProfile
from ..models.errors import ConstraintError, DomainError
from ..models.mechanism import MechanismConfig, Scheme
from .table import TableGeometry, log2_subbanks

logger = logging.getLogger(__name__)


class IterationStep(BaseModel):
    """Activation and consumption budget of one Phase 1 iteration"""
    model_config = ConfigDict(frozen=True)

    n_act: float
    n_consumed: float
    n_next_cap: int


class BoundsReport(BaseModel):
    """Closed-form hammer counts of the worst-case attack on one configuration"""
    model_config = ConfigDict(frozen=True)

    scheme: Scheme
    n_sb: int
    min_d: int
    k: float
    k_upper: float
    p_p1max: float
    achievable_p1max: float
    hc1: int
    hc2a: int
    hc2b: int
    hc2: int
    hc_attack: int
    hc_ref: int
    hc_total: int
    thc: int
    refresh_per_100_acts: float
    p_ref_used: Optional[int] = None
    table: Optional[TableGeometry] = None


def min_d(window_t: int, refresh_burst_r: int, scheme: Scheme = Scheme.ECR) -> int:
    """Smallest D for which production can never outpace the consumer"""
    if window_t < 1 or refresh_burst_r < 1:
        raise DomainError(f"T and R must be at least 1, got T={window_t}, R={refresh_burst_r}")
    if Scheme(scheme) == Scheme.EPRR:
        bound = Fraction(window_t + refresh_burst_r, refresh_burst_r)
    else:
        bound = 2 * (Fraction(window_t, refresh_burst_r) + 1)
    return math.ceil(bound)


def k_fraction(d: int, window_t: int, refresh_burst_r: int, scheme: Scheme = Scheme.ECR) -> Fraction:
    """Exact reduction factor without any constraint check, floored at zero"""
    if Scheme(scheme) == Scheme.EPRR:
        k = Fraction(window_t - refresh_burst_r, window_t + (d - 1) * refresh_burst_r)
    else:
        k = Fraction(2 * window_t - refresh_burst_r, 2 * window_t + (d - 1) * refresh_burst_r)
    return max(k, Fraction(0))


def k_reduction(d: int, window_t: int, refresh_burst_r: int, scheme: Scheme = Scheme.ECR) -> float:
    """Fraction of subbanks that can be kept at the maximum from one iteration to the next"""
    required = min_d(window_t, refresh_burst_r, scheme)
    if d < required:
        raise ConstraintError(f"D={d} is below the minimum {required} for T={window_t}, R={refresh_burst_r}")
    k = k_fraction(d, window_t, refresh_burst_r, scheme)
    if k <= 0:
        raise ConstraintError(
            f"R={refresh_burst_r} refreshes per window of T={window_t} leave no pending to accumulate"
        )
    return float(k)


def k_upper(d: int) -> float:
    if d < 2:
        raise DomainError(f"k_upper needs D >= 2, got {d}")
    return float(Fraction(d - 1, 2 * d - 1))


def p1max(n0: int, k: float) -> float:
    """Highest PENDING Phase 1 can reach starting from n0 subbanks"""
    if n0 < 1:
        raise DomainError(f"n0 must be at least 1, got {n0}")
    if not 0 < k < 1:
        raise DomainError(f"k must lie in (0, 1), got {k}")
    return math.log2(n0) / -math.log2(k)


def p1max_upper(n_subbanks: int) -> float:
    if n_subbanks < 1:
        raise DomainError(f"n_subbanks must be at least 1, got {n_subbanks}")
    return log2_subbanks(n_subbanks)


def iteration_step(n_i: int, n_i_next: int, d: int, window_t: int,
                   refresh_burst_r: int, scheme: Scheme = Scheme.ECR) -> IterationStep:
    if not n_i >= n_i_next >= 0:
        raise DomainError(f"need n_i >= n_i_next >= 0, got {n_i}, {n_i_next}")
    if Scheme(scheme) == Scheme.EPRR:
        n_act = Fraction(n_i) + (d - 1) * n_i_next
    else:
        # one overlap-row activation hammers two subbanks
        n_act = Fraction(n_i, 2) + Fraction((d - 1) * n_i_next, 2)
    n_consumed = Fraction(refresh_burst_r, window_t) * n_act
    k = k_fraction(d, window_t, refresh_burst_r, scheme)
    return IterationStep(
        n_act=float(n_act),
        n_consumed=float(n_consumed),
        n_next_cap=math.floor(k * n_i),
    )


def phase1_hammers(d: int, n_subbanks: int) -> int:
    """ceil(D * log2(N_SB)), exact for power-of-two subbank counts"""
    if n_subbanks & (n_subbanks - 1) == 0:
        return d * (n_subbanks.bit_length() - 1)
    return math.ceil(d * math.log2(n_subbanks) - 1e-9)


def p_ref_range(n_subbanks: int) -> range:
    return range(1, math.ceil(p1max_upper(n_subbanks) - 1e-9) + 1)


def effective_subbank_rows(config: MechanismConfig, blast_radius_b: int) -> int:
    """Rows a subbank refreshes per cycle; margins count twice under EPRR"""
    if config.scheme == Scheme.EPRR:
        return config.subbank_rows_ssb + 6 * blast_radius_b
    return config.subbank_rows_ssb


def hammer_bounds(device: DeviceProfile, config: MechanismConfig,
                  p_ref: Optional[int] = None) -> BoundsReport:
    """Every hammer-count component of the worst-case attack.

    Uses the worst case k = 0.5 with all subbanks in play, so the Phase 1
    term is D * log2(N_SB). The reduction factor of the actual configuration
    is reported alongside as ``k`` and ``achievable_p1max``.
    """
    n_sb = config.n_subbanks_nsb
    d = config.d
    if p_ref is not None and p_ref not in p_ref_range(n_sb):
        allowed = p_ref_range(n_sb)
        raise DomainError(
            f"p_ref={p_ref} outside [1, {allowed.stop - 1}] for N_SB={n_sb}"
            if len(allowed) else f"p_ref={p_ref} given but N_SB={n_sb} has no Phase 1"
        )

    s_eff = effective_subbank_rows(config, device.blast_radius_b)
    hc_p1 = phase1_hammers(d, n_sb)
    if p_ref is None:
        hc1 = hc_p1
        hc2a = d * s_eff
    else:
        hc1 = d * p_ref
        hc2a = hc_p1 - d * p_ref + d * s_eff
    hc2b = device.window_t
    hc2 = hc2a + hc2b
    hc_attack = hc1 + hc2
    hc_ref = 2 * device.blast_radius_b
    hc_total = hc_attack + hc_ref

    k = float(k_fraction(d, device.window_t, device.refresh_burst_r, config.scheme))
    achievable = p1max(n_sb, k) if 0 < k < 1 else 0.0
    report = BoundsReport(
        scheme=config.scheme,
        n_sb=n_sb,
        min_d=min_d(device.window_t, device.refresh_burst_r, config.scheme),
        k=k,
        k_upper=float(Fraction(d - 1, 2 * d - 1)),
        p_p1max=p1max_upper(n_sb),
        achievable_p1max=achievable,
        hc1=hc1,
        hc2a=hc2a,
        hc2b=hc2b,
        hc2=hc2,
        hc_attack=hc_attack,
        hc_ref=hc_ref,
        hc_total=hc_total,
        thc=hc_total,
        refresh_per_100_acts=100 / d,
        p_ref_used=p_ref,
    )
    logger.debug(f"Bounds for D={d}, S_SB={config.subbank_rows_ssb}, N_SB={n_sb}: THC={report.thc}")
    return report
