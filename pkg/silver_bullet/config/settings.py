import os

from pydantic import BaseModel, Field


class Settings(BaseModel):
    """Process-wide settings read from the environment (and a .env file via the CLI)"""

    log_level: str = "INFO"
    progress: bool = False
    oracle_max_subbanks: int = Field(default=4, gt=0)
    oracle_max_subbank_rows: int = Field(default=4, gt=0)
    oracle_max_horizon: int = Field(default=20, ge=0)
    sram_area_factor: int = Field(default=200, gt=0)

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            log_level=os.getenv('SILVER_BULLET_LOG_LEVEL', 'INFO').upper(),
            progress=os.getenv('SILVER_BULLET_PROGRESS', 'false').lower() == 'true',
            oracle_max_subbanks=int(os.getenv('SILVER_BULLET_ORACLE_MAX_SUBBANKS', '4')),
            oracle_max_subbank_rows=int(os.getenv('SILVER_BULLET_ORACLE_MAX_SUBBANK_ROWS', '4')),
            oracle_max_horizon=int(os.getenv('SILVER_BULLET_ORACLE_MAX_HORIZON', '20')),
            sram_area_factor=int(os.getenv('SILVER_BULLET_SRAM_AREA_FACTOR', '200')),
        )


def get_settings() -> Settings:
    """Current settings; read on every call so tests can patch the environment"""
    return Settings.from_env()
