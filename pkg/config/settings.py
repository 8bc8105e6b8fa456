"""
Settings for amice-kit, read through the configuration loader.
"""

import os
import logging
from typing import Dict, Any

from .config_loader import config_loader

logger = logging.getLogger(__name__)


class Settings:
    """Application settings backed by the environment-aware config loader."""

    def __init__(self, loader=None):
        self._config_loader = loader or config_loader
        self._environment = self._config_loader.environment
        self._computation_config = self._config_loader.get_computation_config()
        self._logging_config = self._config_loader.get_logging_config()

    @property
    def ENVIRONMENT(self) -> str:
        """Get current environment."""
        return self._environment

    # Computation limits
    @property
    def MAX_ORDER(self) -> int:
        """Largest truncation order a command may request."""
        return self._computation_config.max_order

    @property
    def DOMINATION_WINDOW_FACTOR(self) -> int:
        """Window multiplier for the finite domination check on table rows."""
        return self._computation_config.domination_window_factor

    @property
    def PADIC_TARGET_PRECISION(self) -> int:
        """Default target precision for p-adic evaluation."""
        return self._computation_config.padic_target_precision

    @property
    def DEFAULT_TRUNCATION_ORDER(self) -> int:
        return self._computation_config.default_truncation_order

    # Logging
    @property
    def LOG_LEVEL(self) -> str:
        return self._logging_config.level

    @property
    def LOG_JSON(self) -> bool:
        return self._logging_config.use_json

    def get_computation_limits(self) -> Dict[str, int]:
        """Get all computation limits as a dictionary."""
        return self._computation_config.to_dict()

    def validate_config(self) -> Dict[str, Any]:
        """Report whether the loaded configuration is usable."""
        issues = []
        if self.MAX_ORDER > 4096:
            issues.append(f"MAX_ORDER={self.MAX_ORDER} makes O(N^3) checks impractical")
        if not os.path.exists(self._config_loader.config_path):
            issues.append(f"no configuration file for environment '{self.ENVIRONMENT}'")
        return {
            'valid': not issues,
            'environment': self.ENVIRONMENT,
            'issues': issues,
        }

    def reload_config(self):
        """Reload configuration from all sources."""
        try:
            self._config_loader.reload_config()
            self._computation_config = self._config_loader.get_computation_config()
            self._logging_config = self._config_loader.get_logging_config()
            logger.info("Settings configuration reloaded successfully")
        except Exception as e:
            logger.error(f"Error reloading settings configuration: {str(e)}")
            raise


# Global settings instance
settings = Settings()
