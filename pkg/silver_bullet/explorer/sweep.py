import itertools
import logging
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

import pandas as pd
from pydantic import BaseModel

from ..analytics.bounds import hammer_bounds, min_d
from ..analytics.table import table_geometry
from ..models.device import DeviceProfile
from ..models.mechanism import MechanismConfig, Scheme
from ..models.validation import validate
from .presets import preset_ranges

logger = logging.getLogger(__name__)

CSV_COLUMNS = ['d', 's_sb', 'n_sb', 'b', 't', 'r', 'scheme', 'thc',
               'refresh_per_100_acts', 'entry_bits', 'table_bytes', 'valid']
MARKER_COLUMNS = ['r', 'min_d']


class SweepRow(BaseModel):
    d: int
    s_sb: int
    n_sb: int
    b: int
    t: int
    r: int
    scheme: Scheme
    thc: int
    refresh_per_100_acts: float
    entry_bits: int
    table_bytes: float
    valid: bool

    def sort_key(self) -> Tuple:
        return (self.scheme.value, self.r, self.b, self.t, self.n_sb * self.s_sb, self.s_sb, self.d)


def evaluate_point(d: int, s_sb: int, s_b: int, b: int, t: int, r: int,
                   scheme: Union[Scheme, str] = Scheme.ECR) -> SweepRow:
    """One design point; validity is judged with UHC just above its own THC"""
    scheme = Scheme(scheme)
    n_sb = max(1, s_b // s_sb)
    config = MechanismConfig(d=d, subbank_rows_ssb=s_sb, n_subbanks_nsb=n_sb, scheme=scheme)
    draft = DeviceProfile(uhc_dram=t + 1, blast_radius_b=b, bank_rows_sb=s_b, refresh_burst_r=r, window_t=t)
    thc = hammer_bounds(draft, config).thc
    device = draft.model_copy(update={'uhc_dram': thc + 1})
    geometry = table_geometry(config, r)
    return SweepRow(
        d=d, s_sb=s_sb, n_sb=n_sb, b=b, t=t, r=r, scheme=scheme, thc=thc,
        refresh_per_100_acts=100 / d,
        entry_bits=geometry.entry_bits,
        table_bytes=geometry.table_bytes,
        valid=not validate(device, config, log_violations=False),
    )


def sweep(preset: Optional[str] = None, *, d: Optional[Iterable[int]] = None,
          s_sb: Optional[Iterable[int]] = None, s_b: Optional[Iterable[int]] = None,
          b: Optional[Iterable[int]] = None, t: Optional[Iterable[int]] = None,
          r: Optional[Iterable[int]] = None, scheme: Optional[Iterable[str]] = None,
          density: int = 1) -> List[SweepRow]:
    """Evaluate every combination of a preset's ranges, or of explicit ranges.

    Explicit ranges override the matching preset range; without a preset
    every range must be given except ``scheme``, which defaults to ECR.
    """
    ranges = preset_ranges(preset, density) if preset else {'scheme': ['ecr']}
    explicit = dict(d=d, s_sb=s_sb, s_b=s_b, b=b, t=t, r=r, scheme=scheme)
    for key, values in explicit.items():
        if values is not None:
            ranges[key] = list(values)
    missing = [key for key in ('d', 's_sb', 's_b', 'b', 't', 'r') if key not in ranges]
    if missing:
        raise ValueError(f"sweep needs ranges for {missing}")

    keys = ['d', 's_sb', 's_b', 'b', 't', 'r', 'scheme']
    rows = [evaluate_point(**dict(zip(keys, combo)))
            for combo in itertools.product(*(ranges[key] for key in keys))]
    rows.sort(key=SweepRow.sort_key)
    logger.info(f"Sweep {preset or 'custom'}: {len(rows)} rows, {sum(r.valid for r in rows)} valid")
    return rows


def min_d_markers(t: int, r_values: Iterable[int]) -> List[Tuple[int, int]]:
    """Protocol limit on D for each refresh burst size"""
    return [(r, min_d(t, r, Scheme.ECR)) for r in r_values]


def rows_to_frame(rows: List[SweepRow]) -> pd.DataFrame:
    records = [row.model_dump(mode='json') for row in rows]
    return pd.DataFrame.from_records(records, columns=CSV_COLUMNS)


def write_csv(rows: List[SweepRow], path: Union[str, Path]) -> None:
    rows_to_frame(rows).to_csv(path, index=False, lineterminator='\n', encoding='utf-8')
    logger.info(f"Wrote {len(rows)} rows to {path}")


def markers_path(path: Union[str, Path]) -> Path:
    """``fig7.csv`` -> ``fig7_markers.csv`` in the same directory"""
    path = Path(path)
    return path.with_name(f"{path.stem}_markers{path.suffix or '.csv'}")


def write_markers(markers: List[Tuple[int, int]], path: Union[str, Path]) -> None:
    frame = pd.DataFrame.from_records(markers, columns=MARKER_COLUMNS)
    frame.to_csv(path, index=False, lineterminator='\n', encoding='utf-8')
    logger.info(f"Wrote {len(markers)} protocol limits to {path}")
