"""
Silver Bullet RowHammer mitigation: analytical bounds, bank simulator and attack synthesis.
"""

__version__ = "0.1.0"

from .analytics import hammer_bounds, table_geometry
from .config import load_config
from .mechanism import run_trace
from .models import DeviceProfile, MechanismConfig, validate
from .main import main

__all__ = [
    'DeviceProfile',
    'MechanismConfig',
    'hammer_bounds',
    'load_config',
    'main',
    'run_trace',
    'table_geometry',
    'validate',
]
