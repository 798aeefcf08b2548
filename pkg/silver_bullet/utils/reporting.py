import json
import logging
from enum import Enum
from typing import Any, Iterable, List, Optional

from pydantic import BaseModel

logger = logging.getLogger(__name__)

# per-row lists are too long for terminal reports
DEFAULT_EXCLUDE = {'max_window_per_row'}


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return f"{value:.6g}"
    if value is None:
        return '-'
    if isinstance(value, (list, tuple)):
        return ','.join(_format_value(item) for item in value)
    return str(value)


def _flatten(prefix: str, value: Any, lines: List[str]) -> None:
    if isinstance(value, BaseModel):
        for name in type(value).model_fields:
            _flatten(f"{prefix}{name}.", getattr(value, name), lines)
        return
    if isinstance(value, list) and value and isinstance(value[0], BaseModel):
        for index, item in enumerate(value):
            _flatten(f"{prefix}{index}.", item, lines)
        return
    lines.append(f"{prefix[:-1]}={_format_value(value)}")


def to_text(report: BaseModel, exclude: Optional[Iterable[str]] = None) -> str:
    """``key=value`` lines in field order; nested models use dotted keys"""
    skip = DEFAULT_EXCLUDE if exclude is None else set(exclude)
    lines: List[str] = []
    for name in type(report).model_fields:
        if name in skip:
            continue
        _flatten(f"{name}.", getattr(report, name), lines)
    return '\n'.join(lines)


def to_json(report: BaseModel, exclude: Optional[Iterable[str]] = None) -> str:
    """Stable-ordered JSON of a report"""
    skip = DEFAULT_EXCLUDE if exclude is None else set(exclude)
    return json.dumps(report.model_dump(mode='json', exclude=set(skip)), indent=2)


def render(report: BaseModel, as_json: bool = False, exclude: Optional[Iterable[str]] = None) -> str:
    return to_json(report, exclude) if as_json else to_text(report, exclude)
