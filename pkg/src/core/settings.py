# src/core/settings.py
import logging
import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from src.core.errors import InputFormatError

logger = logging.getLogger(__name__)

load_dotenv()

DEFAULT_MAIS_LIMIT = 24
DEFAULT_MINRANK_BUDGET = 2 ** 24
DEFAULT_SEARCH_BUDGET = 20000
DEFAULT_LOG_LEVEL = "WARNING"


def _parse_budget(name: str, raw: Optional[str], default: int) -> int:
    """Parse a budget written either as a decimal integer or as ``2**N``."""
    if raw is None or not raw.strip():
        return default
    text = raw.strip()
    try:
        if text.startswith("2**"):
            value = 2 ** int(text[3:])
        else:
            value = int(text)
    except ValueError:
        raise InputFormatError(f"{name} must be an integer or 2**N, got {raw!r}")
    if value < 1:
        raise InputFormatError(f"{name} must be positive, got {raw!r}")
    return value


@dataclass(frozen=True)
class Settings:
    mais_limit: int = DEFAULT_MAIS_LIMIT
    minrank_budget: int = DEFAULT_MINRANK_BUDGET
    search_budget: int = DEFAULT_SEARCH_BUDGET
    log_level: str = DEFAULT_LOG_LEVEL


def load_settings() -> Settings:
    """Read the current environment (and .env) into a Settings snapshot.

    OIC_BUDGET overrides the minrank enumeration budget and the MAIS
    vertex limit together; the specific variables win over it.
    """
    override = os.getenv("OIC_BUDGET")
    minrank_budget = _parse_budget("OIC_BUDGET", override, DEFAULT_MINRANK_BUDGET)
    mais_limit = DEFAULT_MAIS_LIMIT
    if override:
        # the MAIS limit counts vertices, the override counts enumerations
        mais_limit = max(DEFAULT_MAIS_LIMIT, minrank_budget.bit_length() - 1)

    settings = Settings(
        mais_limit=_parse_budget("OIC_MAIS_LIMIT", os.getenv("OIC_MAIS_LIMIT"), mais_limit),
        minrank_budget=_parse_budget(
            "OIC_MINRANK_BUDGET", os.getenv("OIC_MINRANK_BUDGET"), minrank_budget),
        search_budget=_parse_budget(
            "OIC_SEARCH_BUDGET", os.getenv("OIC_SEARCH_BUDGET"), DEFAULT_SEARCH_BUDGET),
        log_level=os.getenv("OIC_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper(),
    )
    logger.debug(f"Loaded settings: {settings}")
    return settings
