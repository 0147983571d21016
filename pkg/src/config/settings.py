import os
from dotenv import load_dotenv

load_dotenv()


class Settings:
    VERSION: str = "0.1.0"
    TRUNCATION: int = int(os.getenv("LOSC_TRUNCATION", "128"))
    TOL: float = float(os.getenv("LOSC_TOL", "1e-8"))
    FORMAT: str = os.getenv("LOSC_FORMAT", "json")
    SERIES_TOL: float = float(os.getenv("LOSC_SERIES_TOL", "1e-16"))
    SERIES_MAX_TERMS: int = int(os.getenv("LOSC_SERIES_MAX_TERMS", "100000"))
    QUAD_BUDGET: int = int(os.getenv("LOSC_QUAD_BUDGET", "1000000"))
    LOG_LEVEL: str = os.getenv("LOSC_LOG_LEVEL", "INFO").upper()
    LOG_FILE: str = os.getenv("LOSC_LOG_FILE", "losc.log")


settings = Settings()
