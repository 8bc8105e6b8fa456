"""
Configuration loader with environment-based switching.

Sources, in order of precedence (later wins): the environment JSON file under
``config/environments``, then ``AMICE_KIT_*`` / ``LOG_*`` environment
variables (a ``.env`` file in the working directory is loaded first).
"""

import os
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Any, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

VALID_LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


@dataclass
class ComputationConfig:
    """Limits and defaults for exact computations."""
    max_order: int = 256
    domination_window_factor: int = 10
    padic_target_precision: int = 20
    default_truncation_order: int = 16

    def __post_init__(self):
        """Validate configuration after initialization."""
        for name in ('max_order', 'domination_window_factor',
                     'padic_target_precision', 'default_truncation_order'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.default_truncation_order > self.max_order:
            raise ValueError(
                f"default_truncation_order ({self.default_truncation_order}) "
                f"exceeds max_order ({self.max_order})"
            )

    def to_dict(self) -> Dict[str, int]:
        """Convert to dictionary."""
        return {
            'max_order': self.max_order,
            'domination_window_factor': self.domination_window_factor,
            'padic_target_precision': self.padic_target_precision,
            'default_truncation_order': self.default_truncation_order,
        }


@dataclass
class LoggingConfig:
    """Logging configuration."""
    level: str = 'INFO'
    use_json: bool = False

    def __post_init__(self):
        self.level = str(self.level).upper()
        if self.level not in VALID_LOG_LEVELS:
            raise ValueError(f"Unsupported log level: {self.level}")


# environment variable -> (section, key)
_INT_ENV_VARS = {
    'AMICE_KIT_MAX_ORDER': ('computation', 'max_order'),
    'AMICE_KIT_DOMINATION_WINDOW': ('computation', 'domination_window_factor'),
    'AMICE_KIT_PADIC_PRECISION': ('computation', 'padic_target_precision'),
    'AMICE_KIT_DEFAULT_ORDER': ('computation', 'default_truncation_order'),
}


class ConfigLoader:
    """Configuration loader with environment-based switching."""

    def __init__(self, environment: str = None, config_path: str = None,
                 dotenv_path: Optional[str] = None):
        load_dotenv(dotenv_path=dotenv_path, override=False)
        self.environment = environment or os.getenv('ENVIRONMENT', 'development')
        self.config_path = config_path or self._get_default_config_path()
        self._config_cache: Dict[str, Any] = {}

        logger.debug(f"Initializing ConfigLoader for environment: {self.environment}")

    def _get_default_config_path(self) -> str:
        """Get the default configuration file path."""
        base_path = Path(__file__).parent
        return str(base_path / f"environments/{self.environment}.json")

    def _load_file_config(self) -> Dict[str, Any]:
        """Load configuration from file."""
        if not os.path.exists(self.config_path):
            logger.warning(f"Configuration file not found: {self.config_path}")
            return {}

        try:
            with open(self.config_path, 'r') as f:
                return json.load(f)
        except (json.JSONDecodeError, IOError) as e:
            logger.error(f"Error loading configuration file {self.config_path}: {str(e)}")
            return {}

    def _load_environment_config(self) -> Dict[str, Any]:
        """Load configuration from environment variables."""
        config: Dict[str, Any] = {}

        for var, (section, key) in _INT_ENV_VARS.items():
            if var not in os.environ:
                continue
            raw = os.environ[var]
            try:
                value = int(raw)
            except ValueError:
                raise ValueError(f"{var} must be an integer, got {raw!r}")
            config.setdefault(section, {})[key] = value

        logging_config = {}
        if 'LOG_LEVEL' in os.environ:
            logging_config['level'] = os.getenv('LOG_LEVEL')
        if 'LOG_JSON' in os.environ:
            logging_config['use_json'] = os.getenv('LOG_JSON').lower() == 'true'
        if logging_config:
            config['logging'] = logging_config

        return config

    def _merge_configs(self, *configs: Dict[str, Any]) -> Dict[str, Any]:
        """Merge multiple configuration dictionaries."""
        merged: Dict[str, Any] = {}
        for config in configs:
            for key, value in config.items():
                if key in merged and isinstance(merged[key], dict) and isinstance(value, dict):
                    merged[key] = self._merge_configs(merged[key], value)
                else:
                    merged[key] = value
        return merged

    def load_config(self, use_cache: bool = True) -> Dict[str, Any]:
        """Load complete configuration from all sources."""
        if use_cache and 'full_config' in self._config_cache:
            return self._config_cache['full_config']

        file_config = self._load_file_config()
        env_config = self._load_environment_config()

        full_config = self._merge_configs(file_config, env_config)

        if use_cache:
            self._config_cache['full_config'] = full_config

        return full_config

    def get_computation_config(self) -> ComputationConfig:
        """Get computation limits and defaults."""
        section = self.load_config().get('computation', {})
        defaults = ComputationConfig()

        return ComputationConfig(
            max_order=section.get('max_order', defaults.max_order),
            domination_window_factor=section.get(
                'domination_window_factor', defaults.domination_window_factor),
            padic_target_precision=section.get(
                'padic_target_precision', defaults.padic_target_precision),
            default_truncation_order=section.get(
                'default_truncation_order', defaults.default_truncation_order),
        )

    def get_logging_config(self) -> LoggingConfig:
        """Get logging configuration."""
        section = self.load_config().get('logging', {})

        return LoggingConfig(
            level=section.get('level', 'INFO'),
            use_json=section.get('use_json', False),
        )

    def reload_config(self):
        """Clear cache and reload configuration."""
        self._config_cache.clear()
        logger.info("Configuration cache cleared and reloaded")


# Global configuration loader instance
config_loader = ConfigLoader()
