"""
Configuration management for digitdrift
"""
import json
import os
from fractions import Fraction
from typing import Any, Dict, List, Optional

from models import ExperimentConfig

THREADS_ENV = "DIGITDRIFT_THREADS"

DEFAULTS: Dict[str, Any] = {
    'seed': 2024,
    'p': "1/2",
    'samples': 1,
    'max_order': 6,
    'jet_order': 12,
    'grid': [-4.0, 4.0, 41],
    'threads': None,
    'lag_cap': 64,
}


class ConfigManager:
    """Layered settings: CLI flag > config file > default; DIGITDRIFT_THREADS caps threads"""

    def __init__(self, config_file: Optional[str] = None):
        """
        Initialize configuration manager

        Args:
            config_file: Path to configuration file. If None, looks for digitdrift.json
        """
        self.config_file = config_file or "digitdrift.json"
        self.settings: Dict[str, Any] = dict(DEFAULTS)
        self.settings['threads'] = os.cpu_count() or 1
        self.unknown_keys: List[str] = []
        self.env_issues: List[str] = []
        self.threads_cap: Optional[int] = None

        if os.path.exists(self.config_file):
            self.load_config()
        self._apply_environment()

    def load_config(self) -> None:
        """Load configuration from file"""
        try:
            with open(self.config_file, 'r') as f:
                config_data = json.load(f)
            if not isinstance(config_data, dict):
                raise ValueError("top level must be a JSON object")
        except Exception as e:
            raise ValueError(f"Failed to load config from {self.config_file}: {e}")

        for key, value in config_data.items():
            if key in DEFAULTS:
                self.settings[key] = value
            else:
                self.unknown_keys.append(key)

    def _apply_environment(self):
        raw = os.environ.get(THREADS_ENV)
        if raw is None:
            return
        try:
            self.threads_cap = int(raw)
        except ValueError:
            self.env_issues.append(f"{THREADS_ENV}={raw!r} is not an integer")
            return
        if self.threads_cap < 1:
            self.env_issues.append(f"{THREADS_ENV} must be positive, got {self.threads_cap}")
            self.threads_cap = None

    def apply_overrides(self, **overrides) -> None:
        """CLI values; None means the flag was not given"""
        for key, value in overrides.items():
            if value is not None:
                self.settings[key] = value

    @property
    def seed(self) -> int:
        return int(self.settings['seed'])

    @property
    def p(self) -> Fraction:
        return Fraction(str(self.settings['p']))

    @property
    def samples(self) -> int:
        return int(self.settings['samples'])

    @property
    def max_order(self) -> int:
        return int(self.settings['max_order'])

    @property
    def jet_order(self) -> int:
        return int(self.settings['jet_order'])

    @property
    def threads(self) -> int:
        """Configured worker count, capped by DIGITDRIFT_THREADS"""
        threads = int(self.settings['threads'])
        return threads if self.threads_cap is None else min(threads, self.threads_cap)

    @property
    def lag_cap(self) -> int:
        return int(self.settings['lag_cap'])

    @property
    def grid(self) -> List[float]:
        lo, hi, steps = self.settings['grid']
        steps = int(steps)
        return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]

    def validate_config(self) -> List[str]:
        """Validate current configuration and return list of issues"""
        issues = list(self.env_issues)
        issues.extend(f"Unknown key '{key}'" for key in self.unknown_keys)

        try:
            p = self.p
            if not 0 <= p <= 1:
                issues.append(f"p must lie in [0, 1], got {p}")
        except (ValueError, ZeroDivisionError):
            issues.append(f"p must be a rational 'num/den', got {self.settings['p']!r}")

        mistyped = [key for key in ('seed', 'samples', 'max_order', 'jet_order', 'threads', 'lag_cap')
                    if not isinstance(self.settings[key], int) or isinstance(self.settings[key], bool)]
        issues.extend(f"{key} must be an integer, got {self.settings[key]!r}" for key in mistyped)
        if mistyped:
            return issues

        if not 0 <= self.seed < 2 ** 64:
            issues.append(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        for key in ('samples', 'threads', 'lag_cap'):
            if self.settings[key] < 1:
                issues.append(f"{key} must be positive, got {self.settings[key]}")
        for key in ('max_order', 'jet_order'):
            if self.settings[key] < 0:
                issues.append(f"{key} must be non-negative, got {self.settings[key]}")

        grid = self.settings['grid']
        if not isinstance(grid, (list, tuple)) or len(grid) != 3:
            issues.append(f"grid must be [lo, hi, steps], got {grid!r}")
        else:
            lo, hi, steps = grid
            if not lo < hi:
                issues.append(f"grid needs lo < hi, got {lo} >= {hi}")
            if not isinstance(steps, int) or steps < 2:
                issues.append(f"grid needs at least 2 steps, got {steps!r}")

        return issues

    def experiment_config(self, n: int) -> ExperimentConfig:
        return ExperimentConfig(seed=self.seed, p=self.p, n=n, samples=self.samples,
                                max_moment_order=self.max_order, lag_cap=self.lag_cap)

