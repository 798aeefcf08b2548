from .settings import Settings, get_settings
from .loader import apply_overrides, build_config, load_config, parse_config_lines

__all__ = [
    "Settings",
    "apply_overrides",
    "build_config",
    "get_settings",
    "load_config",
    "parse_config_lines",
]
