"""
Base interface for seeded digit-sum experiments
"""
from abc import ABC, abstractmethod
import time
import logging
from typing import Any, Dict, List

from models import ExperimentConfig, ExperimentResult, ResultRow


def geometric_ladder(n_max: int, start: int = 16) -> List[int]:
    """start, 2 start, 4 start, ... below n_max, then n_max itself"""
    if n_max < 1:
        return []
    ladder = []
    n = start
    while n < n_max:
        ladder.append(n)
        n *= 2
    ladder.append(n_max)
    return ladder


class Experiment(ABC):
    """Abstract base class for all experiments"""

    name = "experiment"

    def __init__(self):
        self.logger = logging.getLogger(f"experiment.{self.name}")

    def run(self, config: ExperimentConfig) -> ExperimentResult:
        """
        Run the experiment for one configuration

        Args:
            config: seed, bias, length and sample count

        Returns:
            ExperimentResult with rows sorted by (n, statistic, seed, sample)
        """
        start_time = time.time()
        self.logger.info(f"Starting {self.name} with seed {config.seed}, n={config.n}, p={config.p}")

        rows = sorted(self._collect_rows(config), key=lambda row: row.sort_key)

        run_time = time.time() - start_time
        self.logger.info(f"Finished {self.name} (seed {config.seed}): {len(rows)} rows in {run_time:.2f}s")
        return ExperimentResult(
            name=self.name,
            rows=rows,
            metadata={
                'config': config.to_dict(),
                'parameters': self.parameters(),
                'run_time': run_time,
            },
        )

    def parameters(self) -> Dict[str, Any]:
        """Experiment-specific parameters echoed into the metadata"""
        return {}

    @abstractmethod
    def _collect_rows(self, config: ExperimentConfig) -> List[ResultRow]:
        """
        Produce the raw result rows

        Args:
            config: The experiment configuration

        Returns:
            Rows in any order
        """
        pass
