import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

from pydantic import ValidationError

from ..models.device import DeviceProfile
from ..models.errors import ConfigError, TimingError
from ..models.mechanism import MechanismConfig, Scheme, TiePolicy, TieRule
from .settings import get_settings

logger = logging.getLogger(__name__)

INT_KEYS = {
    'uhc_dram', 'blast_radius', 'bank_rows', 'refresh_burst_r', 'window_t',
    't_refi_ns', 't_rfc_ns', 't_rc_ns', 'd', 'subbank_rows', 'target_subbank',
    'sharing_factor', 'sram_area_factor',
}
CHOICE_KEYS = {
    'scheme': [s.value for s in Scheme],
    'tie_policy': [r.value for r in TieRule],
}
REQUIRED_KEYS = ['uhc_dram', 'blast_radius', 'bank_rows', 'refresh_burst_r', 'd', 'subbank_rows']

# key -> (value, line it came from)
RawConfig = Dict[str, Tuple[Union[int, str], Optional[int]]]


def _parse_value(key: str, text: str, path: Optional[str], line: Optional[int]) -> Union[int, str]:
    if key in INT_KEYS:
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"'{key}' needs an integer, got '{text}'", path, line, key)
    choices = CHOICE_KEYS[key]
    value = text.lower()
    if value not in choices:
        raise ConfigError(f"'{key}' must be one of {choices}, got '{text}'", path, line, key)
    return value


def _split(entry: str, path: Optional[str], line: Optional[int]) -> Tuple[str, str]:
    if '=' not in entry:
        raise ConfigError(f"expected 'key = value', got '{entry}'", path, line)
    key, _, text = entry.partition('=')
    key, text = key.strip(), text.strip()
    if key not in INT_KEYS and key not in CHOICE_KEYS:
        raise ConfigError(f"unknown key '{key}'", path, line, key)
    if not text:
        raise ConfigError(f"'{key}' has no value", path, line, key)
    return key, text


def parse_config_lines(lines: Iterable[str], path: Optional[str] = None) -> RawConfig:
    raw: RawConfig = {}
    for number, line in enumerate(lines, start=1):
        entry = line.split('#', 1)[0].strip()
        if not entry:
            continue
        key, text = _split(entry, path, number)
        if key in raw:
            raise ConfigError(f"duplicate key '{key}' (first set on line {raw[key][1]})", path, number, key)
        raw[key] = (_parse_value(key, text, path, number), number)
    return raw


def apply_overrides(raw: RawConfig, overrides: Optional[List[str]], path: Optional[str] = None) -> RawConfig:
    """Apply ``key=value`` overrides on top of a parsed file"""
    merged = dict(raw)
    for override in overrides or []:
        key, text = _split(override, path, None)
        value = _parse_value(key, text, path, None)
        previous = merged.get(key, (None, None))[0]
        logger.warning(f"Override {key}: {previous} -> {value}")
        merged[key] = (value, None)
    return merged


def build_config(raw: RawConfig, path: Optional[str] = None) -> Tuple[DeviceProfile, MechanismConfig]:
    values = {key: value for key, (value, _) in raw.items()}
    for key in REQUIRED_KEYS:
        if key not in values:
            raise ConfigError(f"missing required key '{key}'", path, None, key)
    if 'window_t' not in values and not all(k in values for k in ('t_refi_ns', 't_rfc_ns', 't_rc_ns')):
        raise ConfigError("give window_t or all of t_refi_ns, t_rfc_ns, t_rc_ns", path, None, 'window_t')

    try:
        device = DeviceProfile(
            uhc_dram=values['uhc_dram'],
            blast_radius_b=values['blast_radius'],
            bank_rows_sb=values['bank_rows'],
            refresh_burst_r=values['refresh_burst_r'],
            window_t=values.get('window_t'),
            t_refi_ns=values.get('t_refi_ns'),
            t_rfc_ns=values.get('t_rfc_ns'),
            t_rc_ns=values.get('t_rc_ns'),
        )
        rule = TieRule(values.get('tie_policy', TieRule.LOWEST.value))
        target = values.get('target_subbank')
        if rule == TieRule.ADVERSARIAL and target is None:
            target = 0
        subbank_rows = values['subbank_rows']
        config = MechanismConfig(
            d=values['d'],
            subbank_rows_ssb=subbank_rows,
            # a non-tiling subbank size is reported by validate, not here
            n_subbanks_nsb=max(1, device.bank_rows_sb // subbank_rows) if subbank_rows > 0 else 1,
            scheme=Scheme(values.get('scheme', Scheme.ECR.value)),
            tie_policy=TiePolicy(rule=rule, target_subbank=target),
            sharing_factor_n=values.get('sharing_factor', 1),
            sram_area_factor=values.get('sram_area_factor', get_settings().sram_area_factor),
        )
    except ValidationError as e:
        first = e.errors()[0]
        key = str(first['loc'][0]) if first.get('loc') else None
        raise ConfigError(f"invalid configuration: {first['msg']}", path, None, key)
    except TimingError as e:
        raise ConfigError(str(e), path, None, "t_rc_ns")
    return device, config


def load_config(path: Union[str, Path], overrides: Optional[List[str]] = None) -> Tuple[DeviceProfile, MechanismConfig]:
    """Read a ``key = value`` config file into a device profile and mechanism config"""
    path = str(path)
    try:
        with open(path, encoding='utf-8') as handle:
            lines = handle.readlines()
    except OSError as e:
        raise ConfigError(f"cannot read config: {e.strerror or str(e)}", path)

    raw = apply_overrides(parse_config_lines(lines, path), overrides, path)
    device, config = build_config(raw, path)
    logger.info(
        f"Loaded {path}: D={config.d}, S_SB={config.subbank_rows_ssb}, N_SB={config.n_subbanks_nsb}, "
        f"T={device.window_t}, R={device.refresh_burst_r}, B={device.blast_radius_b}, scheme={config.scheme.value}"
    )
    return device, config
