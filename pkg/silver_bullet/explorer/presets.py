from typing import Dict, List

import numpy as np

from ..models.errors import UsageError


def power_grid(low: int, high: int, density: int = 1) -> List[int]:
    """Integer grid from ``low`` to ``high`` with ``density`` points per doubling"""
    if density < 1:
        raise UsageError(f"density must be at least 1, got {density}")
    exponents = np.arange(np.log2(low), np.log2(high) + 1e-9, 1.0 / density)
    return sorted(set(np.rint(2.0 ** exponents).astype(int).tolist()))


def preset_ranges(name: str, density: int = 1) -> Dict[str, List]:
    """Swept parameter lists of a named dataset"""
    d_range = power_grid(2, 1024, density)
    table_d = [16, 32, 64, 128]
    presets = {
        # THC against D and subbank size, B = 4
        'fig5': dict(d=d_range, s_sb=power_grid(8, 4096, density), s_b=[65536], b=[4], t=[177], r=[1]),
        # same with B = 1, subbanks from two rows
        'fig6': dict(d=d_range, s_sb=power_grid(2, 4096, density), s_b=[65536], b=[1], t=[177], r=[1]),
        # THC against D with the protocol limit for several R
        'fig7': dict(d=d_range, s_sb=power_grid(8, 4096, density), s_b=[65536], b=[4], t=[177], r=[1, 2, 4, 8]),
        # bank size sensitivity
        'fig8a': dict(d=table_d, s_sb=[64], s_b=power_grid(16384, 524288, density), b=[4], t=[177], r=[1]),
        # subbank size sensitivity
        'fig8b': dict(d=table_d, s_sb=power_grid(8, 8192, density), s_b=[65536], b=[4], t=[177], r=[1]),
        # blast radius sensitivity
        'fig9': dict(d=table_d, s_sb=power_grid(16, 2048, density), s_b=[65536],
                     b=np.arange(1, 9).tolist(), t=[177], r=[1]),
    }
    if name not in presets:
        raise UsageError(f"unknown preset '{name}', choose from {sorted(presets)}")
    ranges = presets[name]
    ranges['scheme'] = ['ecr']
    return ranges


PRESET_NAMES = ['fig5', 'fig6', 'fig7', 'fig8a', 'fig8b', 'fig9']

# Named design points with their tolerable hammer counts, T = 177, R = 1, 64k-row bank
OPERATING_POINTS: Dict[str, Dict[str, int]] = {
    'lowest_thc': dict(d=32, s_sb=8, s_b=65536, b=4, t=177, r=1, thc=857),
    'table_8kb': dict(d=256, s_sb=16, s_b=65536, b=4, t=177, r=1, thc=7353),
    'table_1kb': dict(d=64, s_sb=128, s_b=65536, b=4, t=177, r=1, thc=8953),
    'smallest_d': dict(d=2, s_sb=8, s_b=65536, b=4, t=177, r=1, thc=227),
    'lowest_thc_b1': dict(d=32, s_sb=8, s_b=65536, b=1, t=177, r=1, thc=851),
    'table_1kb_b1': dict(d=64, s_sb=128, s_b=65536, b=1, t=177, r=1, thc=8947),
    'smallest_d_b1': dict(d=2, s_sb=2, s_b=65536, b=1, t=177, r=1, thc=213),
}
