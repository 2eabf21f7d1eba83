"""Configuration management for quatlat."""

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

import yaml

from .errors import ConfigError

DEFAULT_NODE_BUDGET = 10 ** 8
DEFAULT_LLL_DELTA = "99/100"
BUDGET_ENV_VAR = "QUATLAT_BUDGET"


@dataclass
class EnumerationConfig:
    """Lattice enumeration settings."""
    budget: int = DEFAULT_NODE_BUDGET
    lll_delta: str = DEFAULT_LLL_DELTA


@dataclass
class OutputConfig:
    """Result document settings."""
    json_indent: int = 2
    precision_bits: int = 64
    embed: bool = False


@dataclass
class QuatLatConfig:
    """Complete quatlat configuration."""
    enumeration: EnumerationConfig = field(default_factory=EnumerationConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    debug_checks: bool = False
    fixtures_dir: str = "fixtures"


class ConfigManager:
    """Loads configuration from YAML and applies environment overrides."""

    def __init__(self, config_file: Optional[str] = None):
        self.config_file = config_file or self._find_config_file()
        self.config = self._load_config()
        self._apply_environment()

    def _find_config_file(self) -> Optional[str]:
        """Find configuration file in standard locations."""
        possible_paths = [
            'quatlat.yaml',
            'quatlat.yml',
            'config.yaml',
            os.path.expanduser('~/.quatlat.yaml'),
            '/etc/quatlat/config.yaml',
        ]

        for path in possible_paths:
            if os.path.exists(path):
                return path
        return None

    def _load_config(self) -> QuatLatConfig:
        """Load configuration from file or create default."""
        if self.config_file and os.path.exists(self.config_file):
            with open(self.config_file, 'r') as f:
                try:
                    data = yaml.safe_load(f) or {}
                except yaml.YAMLError as e:
                    raise ConfigError(f"Cannot parse {self.config_file}: {e}") from e
            if not isinstance(data, dict):
                raise ConfigError(f"{self.config_file} must contain a mapping")
            return self._dict_to_config(data)
        return QuatLatConfig()

    def _dict_to_config(self, data: Dict) -> QuatLatConfig:
        """Convert dictionary to QuatLatConfig."""
        enum_data = data.get('enumeration') or {}
        enumeration = EnumerationConfig(
            budget=_positive_int(enum_data.get('budget', DEFAULT_NODE_BUDGET), 'enumeration.budget'),
            lll_delta=str(enum_data.get('lll_delta', DEFAULT_LLL_DELTA)),
        )

        output_data = data.get('output') or {}
        output = OutputConfig(
            json_indent=int(output_data.get('json_indent', 2)),
            precision_bits=_positive_int(output_data.get('precision_bits', 64), 'output.precision_bits'),
            embed=bool(output_data.get('embed', False)),
        )

        return QuatLatConfig(
            enumeration=enumeration,
            output=output,
            debug_checks=bool(data.get('debug_checks', False)),
            fixtures_dir=str(data.get('fixtures_dir', 'fixtures')),
        )

    def _apply_environment(self):
        """Apply environment variable overrides."""
        budget = os.getenv(BUDGET_ENV_VAR)
        if budget:
            self.config.enumeration.budget = _positive_int(budget, BUDGET_ENV_VAR)

    def lll_delta(self) -> Fraction:
        """Return the LLL parameter as an exact rational."""
        try:
            delta = Fraction(self.config.enumeration.lll_delta)
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigError(f"Invalid lll_delta: {self.config.enumeration.lll_delta!r}") from e
        if not Fraction(1, 4) < delta < 1:
            raise ConfigError(f"lll_delta must lie strictly between 1/4 and 1, got {delta}")
        return delta

    def save_config(self, output_file: Optional[str] = None):
        """Save current configuration to file."""
        output_file = output_file or self.config_file or 'quatlat.yaml'

        data = {
            'enumeration': {
                'budget': self.config.enumeration.budget,
                'lll_delta': self.config.enumeration.lll_delta,
            },
            'output': {
                'json_indent': self.config.output.json_indent,
                'precision_bits': self.config.output.precision_bits,
                'embed': self.config.output.embed,
            },
            'debug_checks': self.config.debug_checks,
            'fixtures_dir': self.config.fixtures_dir,
        }

        with open(output_file, 'w') as f:
            yaml.dump(data, f, default_flow_style=False, indent=2)


def _positive_int(value, name: str) -> int:
    try:
        number = int(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}") from e
    if number <= 0:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    return number
