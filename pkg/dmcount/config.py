import sys
import os
from dataclasses import dataclass
from typing import Optional
from dotenv import load_dotenv
import logging

from .utils.errors import ConfigurationError

DEFAULT_ORACLE_CAP = 1024
DEFAULT_AUT_ORACLE_CAP = 64


@dataclass(frozen=True)
class EngineConfig:
    """Limits for the brute-force paths; the closed formulas have none."""

    oracle_cap: int = DEFAULT_ORACLE_CAP
    aut_oracle_cap: int = DEFAULT_AUT_ORACLE_CAP

    def __post_init__(self):
        if self.oracle_cap < 1 or self.aut_oracle_cap < 1:
            raise ConfigurationError("oracle caps must be positive")


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")


def load_engine_config(oracle_cap: Optional[int] = None) -> EngineConfig:
    """Read caps from the environment (and .env); an explicit oracle_cap wins."""
    load_dotenv()
    if oracle_cap is None:
        oracle_cap = _int_from_env("DM_ORACLE_CAP", DEFAULT_ORACLE_CAP)
    return EngineConfig(
        oracle_cap=oracle_cap,
        aut_oracle_cap=_int_from_env("DM_AUT_ORACLE_CAP", DEFAULT_AUT_ORACLE_CAP),
    )


def log_level_from_env(default: str = "WARNING") -> str:
    load_dotenv()
    return os.getenv("DM_LOG_LEVEL") or default


def load_configurations(app):
    load_dotenv()
    engine = load_engine_config()
    app.config["ORACLE_CAP"] = engine.oracle_cap
    app.config["AUT_ORACLE_CAP"] = engine.aut_oracle_cap
    app.config["LOG_LEVEL"] = log_level_from_env("INFO")


def engine_config_from_app(app, oracle_cap: Optional[int] = None) -> EngineConfig:
    return EngineConfig(
        oracle_cap=oracle_cap if oracle_cap is not None else app.config["ORACLE_CAP"],
        aut_oracle_cap=app.config["AUT_ORACLE_CAP"],
    )


def configure_logging(level="INFO", stream=sys.stdout, force=False):
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=stream,
        force=force,
    )
