from .presets import OPERATING_POINTS, PRESET_NAMES, power_grid, preset_ranges
from .sweep import (
    CSV_COLUMNS,
    MARKER_COLUMNS,
    SweepRow,
    evaluate_point,
    markers_path,
    min_d_markers,
    rows_to_frame,
    sweep,
    write_csv,
    write_markers,
)

__all__ = [
    "CSV_COLUMNS",
    "MARKER_COLUMNS",
    "OPERATING_POINTS",
    "PRESET_NAMES",
    "SweepRow",
    "evaluate_point",
    "markers_path",
    "min_d_markers",
    "power_grid",
    "preset_ranges",
    "rows_to_frame",
    "sweep",
    "write_csv",
    "write_markers",
]
