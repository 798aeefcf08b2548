from .table import TableGeometry, table_geometry
from .bounds import (
    BoundsReport,
    IterationStep,
    hammer_bounds,
    iteration_step,
    k_fraction,
    k_reduction,
    k_upper,
    min_d,
    p1max,
    p1max_upper,
    p_ref_range,
)

__all__ = [
    "BoundsReport",
    "IterationStep",
    "TableGeometry",
    "hammer_bounds",
    "iteration_step",
    "k_fraction",
    "k_reduction",
    "k_upper",
    "min_d",
    "p1max",
    "p1max_upper",
    "p_ref_range",
    "table_geometry",
]
