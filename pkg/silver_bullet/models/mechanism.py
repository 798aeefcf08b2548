from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Scheme(str, Enum):
    """Where the region overlap between neighbouring subbanks lives"""
    ECR = "ecr"    # extended counter region
    EPRR = "eprr"  # extended preventive refresh region


class TieRule(str, Enum):
    """How the consumer picks among subbanks with equal PENDING"""
    ADVERSARIAL = "adversarial"
    LOWEST = "lowest"
    ROTATING = "rotating"


class TiePolicy(BaseModel):
    """Tie-break rule of the consumer, with the protected target for the adversarial rule"""
    model_config = ConfigDict(frozen=True)

    rule: TieRule = TieRule.LOWEST
    target_subbank: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def check_target(self) -> "TiePolicy":
        if self.rule == TieRule.ADVERSARIAL and self.target_subbank is None:
            raise ValueError("the adversarial tie rule needs a target_subbank")
        return self

    @classmethod
    def adversarial(cls, target_subbank: int) -> "TiePolicy":
        return cls(rule=TieRule.ADVERSARIAL, target_subbank=target_subbank)

    @classmethod
    def lowest_index_first(cls) -> "TiePolicy":
        return cls(rule=TieRule.LOWEST)

    @classmethod
    def rotating_start(cls) -> "TiePolicy":
        return cls(rule=TieRule.ROTATING)


class MechanismConfig(BaseModel):
    """Silver Bullet table parameters for one bank.

    Cross-checks against the device (minimum D, subbank size against the
    blast radius, exact subbank count) are reported by ``validate`` so that
    an unsafe configuration can still be analysed.
    """
    model_config = ConfigDict(frozen=True)

    d: int = Field(gt=0, description="hammers per produced preventive refresh")
    subbank_rows_ssb: int = Field(gt=0)
    n_subbanks_nsb: int = Field(gt=0)
    scheme: Scheme = Scheme.ECR
    tie_policy: TiePolicy = Field(default_factory=TiePolicy)
    sharing_factor_n: int = Field(default=1, gt=0)
    sram_area_factor: int = Field(default=200, gt=0)

    @model_validator(mode="after")
    def check_target_in_bank(self) -> "MechanismConfig":
        target = self.tie_policy.target_subbank
        if target is not None and target >= self.n_subbanks_nsb:
            raise ValueError(
                f"target_subbank {target} is outside the {self.n_subbanks_nsb} subbanks"
            )
        return self

    @property
    def covered_rows(self) -> int:
        return self.subbank_rows_ssb * self.n_subbanks_nsb
