import logging
import math

from pydantic import BaseModel, ConfigDict

from ..models.mechanism import MechanismConfig

logger = logging.getLogger(__name__)


class TableGeometry(BaseModel):
    """Size of the Silver Bullet table for one bank"""
    model_config = ConfigDict(frozen=True)

    frac_bits: int
    pending_bits: int
    local_index_bits: int
    entry_bits: int
    shared_entries: int
    table_bits: int
    table_bytes: float
    dram_equiv_bytes: float
    clamped: bool = False


def ceil_log2_int(value: int) -> int:
    """Exact ceil(log2(value)) for a positive integer"""
    return (value - 1).bit_length()


def _ceil_log2_real(value: float) -> int:
    return math.ceil(math.log2(value) - 1e-12)


def log2_subbanks(n_subbanks: int) -> float:
    if n_subbanks & (n_subbanks - 1) == 0:
        return float(n_subbanks.bit_length() - 1)
    return math.log2(n_subbanks)


def table_geometry(config: MechanismConfig, refresh_burst_r: int) -> TableGeometry:
    """Bits per entry and total table size.

    Field widths that come out below one bit (single subbank, D = 1,
    one-row subbanks) are widened to one bit and the result is flagged.
    """
    widths = [
        ceil_log2_int(config.d),
        _ceil_log2_real(log2_subbanks(config.n_subbanks_nsb) + refresh_burst_r / 2),
        ceil_log2_int(config.subbank_rows_ssb),
    ]
    clamped = any(w < 1 for w in widths)
    if clamped:
        logger.warning(f"Table field widths {widths} clamped to at least 1 bit")
    frac_bits, pending_bits, local_index_bits = (max(1, w) for w in widths)

    entry_bits = frac_bits + pending_bits + local_index_bits
    shared_entries = -(-config.n_subbanks_nsb // config.sharing_factor_n)
    table_bits = entry_bits * shared_entries
    table_bytes = table_bits / 8
    return TableGeometry(
        frac_bits=frac_bits,
        pending_bits=pending_bits,
        local_index_bits=local_index_bits,
        entry_bits=entry_bits,
        shared_entries=shared_entries,
        table_bits=table_bits,
        table_bytes=table_bytes,
        dram_equiv_bytes=table_bytes * config.sram_area_factor,
        clamped=clamped,
    )
