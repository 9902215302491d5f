"""
Multi-seed experiment runner and worker-pool helpers
"""
import asyncio
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

from experiment_interface import Experiment
from models import ExperimentConfig, ExperimentResult, SeedOutcome

T = TypeVar("T")
R = TypeVar("R")


def default_workers() -> int:
    return os.cpu_count() or 1


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """fn over items on a thread pool, results in input order"""
    items = list(items)
    workers = max(1, min(workers or default_workers(), len(items) or 1))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


class ExperimentRunner:
    """Runs one experiment for many seeds, at most `workers` at a time"""

    def __init__(self, workers: Optional[int] = None):
        """
        Initialize the runner

        Args:
            workers: Maximum number of seeds evaluated concurrently (default: cpu count)
        """
        self.workers = max(1, workers or default_workers())
        self.logger = logging.getLogger("runner")

    async def run_seeds(self, experiment: Experiment, config: ExperimentConfig,
                        seeds: Sequence[int]) -> List[SeedOutcome]:
        """
        Run the experiment once per seed

        Args:
            experiment: The experiment to run
            config: Base configuration; only the seed changes between runs
            seeds: Seeds in output order

        Returns:
            One SeedOutcome per seed, in seed order
        """
        self.logger.info(f"Running {experiment.name} for {len(seeds)} seeds on {self.workers} workers")
        start_time = time.time()
        limit = asyncio.Semaphore(self.workers)
        loop = asyncio.get_running_loop()

        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            async def run_one(seed: int) -> SeedOutcome:
                async with limit:
                    seed_start = time.time()
                    result = await loop.run_in_executor(pool, experiment.run, config.with_seed(seed))
                    run_time = time.time() - seed_start
                    self.logger.info(f"Seed {seed} finished in {run_time:.2f}s")
                    return SeedOutcome(seed=seed, success=True, result=result, run_time=run_time)

            results = await asyncio.gather(*(run_one(seed) for seed in seeds), return_exceptions=True)

        outcomes = []
        for seed, result in zip(seeds, results):
            if isinstance(result, Exception):
                self.logger.error(f"Seed {seed} failed with exception: {result}")
                outcomes.append(SeedOutcome(seed=seed, success=False, result=None,
                                            run_time=0.0, error_message=str(result)))
            else:
                outcomes.append(result)

        failed = sum(1 for outcome in outcomes if not outcome.success)
        self.logger.info(f"Completed {len(outcomes)} seeds in {time.time() - start_time:.2f}s ({failed} failed)")
        return outcomes

    def run(self, experiment: Experiment, config: ExperimentConfig, seeds: Sequence[int]) -> List[SeedOutcome]:
        """Synchronous wrapper around run_seeds"""
        return asyncio.run(self.run_seeds(experiment, config, seeds))


def merge_results(outcomes: Sequence[SeedOutcome], name: Optional[str] = None) -> ExperimentResult:
    """Rows of every successful seed, sorted by (n, statistic, seed, sample)"""
    rows = []
    for outcome in outcomes:
        if outcome.success and outcome.result is not None:
            rows.extend(outcome.result.rows)
            name = name or outcome.result.name
    rows.sort(key=lambda row: row.sort_key)
    return ExperimentResult(
        name=name or "experiment",
        rows=rows,
        metadata={
            'seeds': [outcome.seed for outcome in outcomes],
            'failed_seeds': {outcome.seed: outcome.error_message for outcome in outcomes if not outcome.success},
            'run_time': sum(outcome.run_time for outcome in outcomes),
        },
    )
