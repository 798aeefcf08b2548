import logging
from enum import Enum
from typing import Dict, List, Union

from pydantic import BaseModel, ConfigDict, Field

from .device import DeviceProfile
from .mechanism import MechanismConfig

logger = logging.getLogger(__name__)


class ViolationCode(str, Enum):
    D_BELOW_MIN = "D_BELOW_MIN"
    SUBBANK_BELOW_2B = "SUBBANK_BELOW_2B"
    SUBBANK_ABOVE_BANK = "SUBBANK_ABOVE_BANK"
    N_SB_MISMATCH = "N_SB_MISMATCH"
    T_NOT_BELOW_UHC = "T_NOT_BELOW_UHC"
    UHC_NOT_ABOVE_THC = "UHC_NOT_ABOVE_THC"


class Violation(BaseModel):
    """One failed RowHammer-safety check with the values that failed it"""
    model_config = ConfigDict(frozen=True)

    code: ViolationCode
    message: str
    values: Dict[str, Union[int, str]] = Field(default_factory=dict)

    def __str__(self) -> str:
        return f"{self.code.value}: {self.message}"


def validate(device: DeviceProfile, config: MechanismConfig, log_violations: bool = True) -> List[Violation]:
    """Check the constraint set that makes a configuration RowHammer-safe.

    Returns an empty list when every check passes. Checks run in a fixed
    order and each failure appears once, logged at WARNING unless
    ``log_violations`` is off.
    """
    # bounds imports the model modules, so it is pulled in here
    from ..analytics.bounds import hammer_bounds, min_d

    violations: List[Violation] = []
    t, r, b = device.window_t, device.refresh_burst_r, device.blast_radius_b
    s_sb, s_b = config.subbank_rows_ssb, device.bank_rows_sb

    required = min_d(t, r, config.scheme)
    if config.d < required:
        violations.append(Violation(
            code=ViolationCode.D_BELOW_MIN,
            message=f"D={config.d} is below the minimum {required} for T={t}, R={r} ({config.scheme.value})",
            values={"d": config.d, "min_d": required, "window_t": t, "refresh_burst_r": r},
        ))

    if s_sb < 2 * b:
        violations.append(Violation(
            code=ViolationCode.SUBBANK_BELOW_2B,
            message=f"S_SB={s_sb} is below 2B={2 * b}",
            values={"subbank_rows": s_sb, "blast_radius": b},
        ))
    if s_sb > s_b:
        violations.append(Violation(
            code=ViolationCode.SUBBANK_ABOVE_BANK,
            message=f"S_SB={s_sb} exceeds the bank size {s_b}",
            values={"subbank_rows": s_sb, "bank_rows": s_b},
        ))

    if config.covered_rows != s_b:
        violations.append(Violation(
            code=ViolationCode.N_SB_MISMATCH,
            message=f"N_SB={config.n_subbanks_nsb} subbanks of {s_sb} rows do not tile {s_b} rows",
            values={"n_subbanks": config.n_subbanks_nsb, "subbank_rows": s_sb, "bank_rows": s_b},
        ))

    if t >= device.uhc_dram:
        violations.append(Violation(
            code=ViolationCode.T_NOT_BELOW_UHC,
            message=f"T={t} is not below UHC={device.uhc_dram}",
            values={"window_t": t, "uhc_dram": device.uhc_dram},
        ))

    thc = hammer_bounds(device, config).thc
    if device.uhc_dram <= thc:
        violations.append(Violation(
            code=ViolationCode.UHC_NOT_ABOVE_THC,
            message=f"UHC={device.uhc_dram} is not above THC={thc}",
            values={"uhc_dram": device.uhc_dram, "thc": thc},
        ))

    for violation in violations if log_violations else ():
        logger.warning(f"Violation {violation}")
    return violations
