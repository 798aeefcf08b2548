from .phase1 import Phase1Schedule, plan_phase1
from .wave import AttackOutcome, WavePlan, WavePlanner, choose_target, execute, plan_wave
from .patterns import AccessPattern, PatternFactory, PatternKind
from .fuzz import CampaignReport, FuzzCampaign, PatternStats, fuzz_traces
from .oracle import exhaustive_oracle, oracle_bound

__all__ = [
    "AccessPattern",
    "AttackOutcome",
    "CampaignReport",
    "FuzzCampaign",
    "PatternFactory",
    "PatternKind",
    "PatternStats",
    "Phase1Schedule",
    "WavePlan",
    "WavePlanner",
    "choose_target",
    "execute",
    "exhaustive_oracle",
    "fuzz_traces",
    "oracle_bound",
    "plan_phase1",
    "plan_wave",
]
