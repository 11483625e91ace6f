"""
Run the selected suites and collect a report.

Every check gets its own generator seeded from ``(seed, index)``, where
``index`` is the position of the check in the run, so results do not depend
on the order in which checks are awaited.
"""

import asyncio
import logging
import time
from typing import List, Optional, Tuple

import numpy as np

from .config import RunConfig
from .group2 import MatrixCrossedModule
from .report import CheckReport, Report
from .suites import AGENTS, SuiteAgent, SuiteContext, SuiteResult, SuiteTask

logger = logging.getLogger(__name__)


def plan(config: RunConfig, context: SuiteContext) -> List[Tuple[SuiteAgent, SuiteTask]]:
    """The checks of a run, in dependency order, each with its own generator."""
    tasks: List[Tuple[SuiteAgent, SuiteTask]] = []
    for suite in config.ordered_suites:
        agent = AGENTS[suite]()
        for check in agent.checks(context):
            rng = np.random.default_rng([config.seed, len(tasks)])
            task = SuiteTask(
                id=f"{suite.value}/{check}",
                name=check,
                params={"context": context, "rng": rng},
            )
            tasks.append((agent, task))
    return tasks


async def run_async(config: RunConfig, cm: Optional[MatrixCrossedModule] = None) -> Report:
    started = time.perf_counter()
    context = SuiteContext(config, cm)
    tasks = plan(config, context)
    logger.info(f"Running {len(tasks)} checks from {len(config.ordered_suites)} suites")

    results: List[SuiteResult] = list(
        await asyncio.gather(*(agent.execute_task(task) for agent, task in tasks))
    )

    report = Report(seed=config.seed)
    for (agent, task), result in zip(tasks, results):
        if result.error:
            logger.warning(f"{task.id} failed with an error: {result.error}")
        report.add(
            CheckReport(
                suite=agent.agent_id,
                check=task.name,
                assertions=result.outcome.assertions,
                max_residual=result.outcome.max_residual,
                tolerance=result.outcome.tolerance,
                passed=result.success,
            )
        )
    report.elapsed = time.perf_counter() - started
    return report


def run(config: RunConfig, cm: Optional[MatrixCrossedModule] = None) -> Report:
    """
    Execute the selected suites.

    ``cm`` replaces the crossed module named in the config; tests use it to
    inject a corrupted action.
    """
    return asyncio.run(run_async(config, cm))
