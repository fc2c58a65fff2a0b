import os
from dotenv import load_dotenv
from typing import Optional
import logging

# Load environment variables from .env file if it exists
load_dotenv()

logger = logging.getLogger(__name__)


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() in ("1", "true", "yes", "on")


class Settings:
    """Runtime settings loaded from environment variables."""

    # Output
    LGF_OUTPUT_DIR: str = os.getenv("LGF_OUTPUT_DIR", "results")
    LGF_CONFIG: Optional[str] = os.getenv("LGF_CONFIG")

    # Reproducibility
    LGF_SEED: int = int(os.getenv("LGF_SEED", "20240601"))

    # Budgets
    LGF_MAX_ENUMERATION: int = int(float(os.getenv("LGF_MAX_ENUMERATION", "1e7")))
    LGF_MAX_DEVICE_SLOTS: int = int(float(os.getenv("LGF_MAX_DEVICE_SLOTS", "5e9")))

    # Monte Carlo replication engine
    LGF_REPLICATION_SLOTS: int = int(os.getenv("LGF_REPLICATION_SLOTS", "5000"))
    LGF_PARALLEL: bool = _env_bool("LGF_PARALLEL", "true")

    # Logging Configuration
    LOG_LEVEL: str = os.getenv("LGF_LOG_LEVEL", os.getenv("LOG_LEVEL", "INFO"))

    @classmethod
    def refresh_from_env(cls) -> None:
        """Refresh Settings class attributes from current environment.
        Use this instead of reloading the module to avoid stale references.
        """
        cls.LGF_OUTPUT_DIR = os.getenv("LGF_OUTPUT_DIR", "results")
        cls.LGF_CONFIG = os.getenv("LGF_CONFIG")

        cls.LGF_SEED = int(os.getenv("LGF_SEED", "20240601"))

        cls.LGF_MAX_ENUMERATION = int(float(os.getenv("LGF_MAX_ENUMERATION", "1e7")))
        cls.LGF_MAX_DEVICE_SLOTS = int(float(os.getenv("LGF_MAX_DEVICE_SLOTS", "5e9")))

        cls.LGF_REPLICATION_SLOTS = int(os.getenv("LGF_REPLICATION_SLOTS", "5000"))
        cls.LGF_PARALLEL = _env_bool("LGF_PARALLEL", "true")

        cls.LOG_LEVEL = os.getenv("LGF_LOG_LEVEL", os.getenv("LOG_LEVEL", "INFO"))

    @classmethod
    def validate(cls) -> bool:
        """Validate that settings are usable."""
        errors = []

        if cls.LGF_MAX_ENUMERATION < 1:
            errors.append("LGF_MAX_ENUMERATION must be >= 1")
        if cls.LGF_MAX_DEVICE_SLOTS < 1:
            errors.append("LGF_MAX_DEVICE_SLOTS must be >= 1")
        if cls.LGF_REPLICATION_SLOTS < 1:
            errors.append("LGF_REPLICATION_SLOTS must be >= 1")
        if cls.LGF_SEED < 0:
            errors.append("LGF_SEED must be a non-negative integer")

        if errors:
            logger.error("Configuration validation failed:")
            for error in errors:
                logger.error(f"  - {error}")
            return False

        return True

    @classmethod
    def log_config(cls) -> None:
        """Log current configuration."""
        logger.info("lgfnoma configuration:")
        logger.info(f"  Output directory: {cls.LGF_OUTPUT_DIR}")
        logger.info(f"  Config file: {cls.LGF_CONFIG or 'auto-discover'}")
        logger.info(f"  Default seed: {cls.LGF_SEED}")
        logger.info(f"  Enumeration budget: {cls.LGF_MAX_ENUMERATION} assignments")
        logger.info(f"  Device-slot budget: {cls.LGF_MAX_DEVICE_SLOTS}")
        logger.info(
            "  Replications: %d slots/stream, %s",
            cls.LGF_REPLICATION_SLOTS,
            "threaded" if cls.LGF_PARALLEL else "serial",
        )
        logger.info(f"  Log Level: {cls.LOG_LEVEL}")


def setup_logging(level: Optional[str] = None) -> None:
    """Set up logging configuration."""
    log_level = level or Settings.LOG_LEVEL

    # Handle special "NO" level to disable all logging
    if log_level.upper() == "NO":
        numeric_level = logging.CRITICAL + 1
    else:
        numeric_level = getattr(logging, log_level.upper(), logging.INFO)

    logging.basicConfig(
        level=numeric_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    logging.getLogger().setLevel(numeric_level)

    # Reduce noise from third-party libraries
    logging.getLogger("asyncio").setLevel(max(numeric_level, logging.WARNING))
    logging.getLogger("numpy").setLevel(max(numeric_level, logging.WARNING))
    logging.getLogger("pandas").setLevel(max(numeric_level, logging.WARNING))

    if log_level.upper() != "NO":
        logger.debug(f"Logging configured at {log_level.upper()} level")
