from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import TimingError


class WindowDerivation(str, Enum):
    """How the activation window T is read off the refresh timings"""
    REFI_PLUS_RFC = "refi_plus_rfc"  # attacker may activate during tRFC
    REFI_ONLY = "refi_only"


def derive_window_t(t_refi_ns: int, t_rfc_ns: int, t_rc_ns: int,
                    derivation: WindowDerivation = WindowDerivation.REFI_PLUS_RFC) -> int:
    """Number of attacker activations that fit in one refresh interval.

    The default derivation is the worst case for the defender: the attacker
    keeps activating while the periodic refresh command is in flight.
    """
    if t_rc_ns is None or t_rc_ns <= 0:
        raise TimingError(f"t_rc_ns must be positive, got {t_rc_ns}")
    if t_refi_ns is None or t_refi_ns <= 0:
        raise TimingError(f"t_refi_ns must be positive, got {t_refi_ns}")
    if t_rfc_ns is None or t_rfc_ns < 0:
        raise TimingError(f"t_rfc_ns must not be negative, got {t_rfc_ns}")

    if WindowDerivation(derivation) == WindowDerivation.REFI_ONLY:
        window = t_refi_ns // t_rc_ns
    else:
        window = (t_refi_ns + t_rfc_ns) // t_rc_ns
    if window < 1:
        raise TimingError(
            f"timings ({t_refi_ns}, {t_rfc_ns}, {t_rc_ns}) leave no room for a single activation"
        )
    return window


class DeviceProfile(BaseModel):
    """DRAM chip and protocol characteristics of one bank"""
    model_config = ConfigDict(frozen=True)

    uhc_dram: int = Field(gt=0, description="activations needed to flip a bit")
    blast_radius_b: int = Field(gt=0, description="rows disturbed on each side of an aggressor")
    bank_rows_sb: int = Field(gt=0, description="rows per bank")
    refresh_burst_r: int = Field(gt=0, description="preventive refreshes per window")
    window_t: int = Field(gt=0, description="attacker activations per window")
    t_refi_ns: Optional[int] = Field(default=None, gt=0)
    t_rfc_ns: Optional[int] = Field(default=None, ge=0)
    t_rc_ns: Optional[int] = Field(default=None, gt=0)

    @model_validator(mode="before")
    @classmethod
    def fill_window_from_timings(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("window_t") is None:
            triple = (data.get("t_refi_ns"), data.get("t_rfc_ns"), data.get("t_rc_ns"))
            if all(v is not None for v in triple):
                data = dict(data)
                data["window_t"] = derive_window_t(*triple)
        return data

    @model_validator(mode="after")
    def check_timing_triple(self) -> "DeviceProfile":
        triple = (self.t_refi_ns, self.t_rfc_ns, self.t_rc_ns)
        present = [v is not None for v in triple]
        if any(present) and not all(present):
            raise ValueError("t_refi_ns, t_rfc_ns and t_rc_ns must be given together")
        if all(present):
            derived = derive_window_t(*triple)
            if derived != self.window_t:
                raise ValueError(
                    f"window_t={self.window_t} disagrees with timings, which give {derived}"
                )
        return self

    @property
    def has_timings(self) -> bool:
        return self.t_rc_ns is not None
