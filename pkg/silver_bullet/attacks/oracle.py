import logging
from typing import Dict, Optional, Tuple

from ..analytics.bounds import hammer_bounds
from ..config.settings import Settings, get_settings
from ..mechanism.bank import BankState
from ..mechanism.regions import BankGeometry
from ..mechanism.trace import TraceEvent
from ..models.device import DeviceProfile
from ..models.errors import OracleLimitError
from ..models.mechanism import MechanismConfig

logger = logging.getLogger(__name__)


def _check_limits(config: MechanismConfig, horizon: int, settings: Settings) -> None:
    if horizon < 0:
        raise OracleLimitError(f"horizon must not be negative, got {horizon}", "use a horizon of 0 or more")
    checks = [
        ("N_SB", config.n_subbanks_nsb, settings.oracle_max_subbanks, "SILVER_BULLET_ORACLE_MAX_SUBBANKS"),
        ("S_SB", config.subbank_rows_ssb, settings.oracle_max_subbank_rows, "SILVER_BULLET_ORACLE_MAX_SUBBANK_ROWS"),
        ("horizon", horizon, settings.oracle_max_horizon, "SILVER_BULLET_ORACLE_MAX_HORIZON"),
    ]
    for name, value, limit, variable in checks:
        if value > limit:
            raise OracleLimitError(
                f"{name}={value} exceeds the exhaustive-search limit {limit}",
                f"reduce {name} by {value - limit} or raise {variable}",
            )


def oracle_bound(device: DeviceProfile, config: MechanismConfig) -> int:
    """Attack bound without the periodic-refresh term; the oracle never issues periodic refreshes"""
    return hammer_bounds(device, config).hc_attack


def exhaustive_oracle(device: DeviceProfile, config: MechanismConfig, horizon: int,
                      settings: Optional[Settings] = None) -> int:
    """Largest row window any activation sequence of at most ``horizon`` events can reach"""
    settings = settings or get_settings()
    _check_limits(config, horizon, settings)
    if horizon == 0:
        return 0

    geometry = BankGeometry(device, config)
    rows = geometry.rows
    memo: Dict[Tuple, int] = {}

    def best(state: BankState, remaining: int) -> int:
        if remaining == 0:
            return 0
        key = (state.key(), remaining)
        if key in memo:
            return memo[key]
        value = 0
        for row in range(rows):
            child = state.copy()
            # memoized values cover the future only
            child.clear_peaks()
            child.apply_event(TraceEvent.activate(row))
            step = child.peak_window()
            value = max(value, step, best(child, remaining - 1))
        memo[key] = value
        return value

    result = best(BankState(device, config, geometry=geometry), horizon)
    logger.debug(f"Oracle explored {len(memo)} states")
    logger.info(f"Exhaustive oracle over {horizon} activations: {result}")
    return result
