"""
Tests for the suite agents and the runner.
"""

import math

import numpy as np
import pytest

from lie2vanest.config import ExampleName, RunConfig, SuiteName
from lie2vanest.runner import plan, run
from lie2vanest.suites import AGENTS, HomotopySuite, SuiteContext, SuiteTask


def make_task(context, name, seed=0):
    """A task for one named check."""
    return SuiteTask(
        id=f"test/{name}",
        name=name,
        params={"context": context, "rng": np.random.default_rng(seed)},
    )


class TestSuiteAgents:
    """Test the suite agents."""

    def test_agent_ids(self):
        """Test that every suite name has an agent with that id."""
        for suite, agent_class in AGENTS.items():
            agent = agent_class()
            assert agent.agent_id == suite.value
            assert agent.capabilities
            assert set(agent.capabilities) == set(agent.handlers)

    @pytest.mark.asyncio
    async def test_execute_task(self, quick_config):
        """Test running a single check."""
        context = SuiteContext(quick_config)
        agent = AGENTS[SuiteName.WEIL]()

        result = await agent.execute_task(make_task(context, "leibniz"))

        assert result.success
        assert result.error is None
        assert result.outcome.assertions > 0
        assert result.metadata["agent"] == "Weil Suite"

    @pytest.mark.asyncio
    async def test_unknown_check(self, quick_config):
        """Test that an unknown check fails without raising."""
        context = SuiteContext(quick_config)
        agent = AGENTS[SuiteName.WEIL]()

        result = await agent.execute_task(make_task(context, "nope"))

        assert not result.success
        assert "nope" in result.error
        assert math.isinf(result.outcome.max_residual)

    def test_coadjoint_checks_need_the_example(self, quick_config):
        """Test that the coadjoint suite has nothing to check without its example."""
        agent = AGENTS[SuiteName.COADJOINT]()

        assert agent.checks(SuiteContext(quick_config)) == []

    def test_context_levels(self, quick_config):
        """Test that the context honours the level cap."""
        context = SuiteContext(quick_config)

        assert context.group.cap == 3
        assert context.max_level == 3
        assert context.coadjoint is None


class TestRunner:
    """Test planning and running whole suites."""

    def test_plan(self, quick_config):
        """Test that checks are planned in dependency order with distinct generators."""
        tasks = plan(quick_config, SuiteContext(quick_config))
        ids = [task.id for _, task in tasks]

        assert ids[0] == "crossed_module/lie_axioms"
        assert ids[-1] == "weil/leibniz"
        assert len(ids) == 13
        draws = {task.params["rng"].standard_normal() for _, task in tasks}
        assert len(draws) == 13

    def test_quick_run_passes(self, quick_config):
        """Test that the cheap suites pass on the tangent crossed module."""
        report = run(quick_config)

        assert report.passed, [row for row in report.rows if not row.passed]
        assert len(report.rows) == 13
        assert report.seed == 0
        assert report.elapsed > 0.0

    def test_empty_selection(self):
        """Test that a run without checks passes trivially."""
        config = RunConfig(example=ExampleName.NONE, suites=[SuiteName.COADJOINT])
        report = run(config)

        assert report.rows == []
        assert report.passed

    def test_deterministic_json(self, quick_config):
        """Test that equal configs give byte-identical JSON."""
        assert run(quick_config).to_json() == run(quick_config).to_json()

    def test_corrupted_crossed_module_fails(self, corrupted_so3):
        """Test that a trivial action on SO(3) is caught."""
        config = RunConfig(
            example=ExampleName.NONE,
            crossed_module="tangent",
            level_cap=3,
            samples=1,
            suites=[SuiteName.CROSSED_MODULE],
        )
        report = run(config, cm=corrupted_so3)
        rows = {row.check: row for row in report.rows}

        assert not report.passed
        assert not rows["group_axioms"].passed
        assert math.isinf(rows["differentiate"].max_residual)

    @pytest.mark.slow
    def test_default_run_passes(self):
        """Test that the default so3/coadjoint configuration passes every suite."""
        report = run(RunConfig())

        assert report.passed, [row for row in report.rows if not row.passed]
        checks = {row.check for row in report.rows}
        assert {"zigzag", "phi_oracle", "phi_other_blocks", "h0_forms"} <= checks


class TestNewChecks:
    """Test the homotopy, algebroid and coadjoint checks that draw from the sample budget."""

    @pytest.fixture
    def homotopy_context(self):
        """A tangent run capped at level 3 with the homotopy suites."""
        config = RunConfig(
            example=ExampleName.NONE,
            crossed_module="tangent",
            level_cap=3,
            samples=1,
            suites=[SuiteName.ALGEBROID, SuiteName.HOMOTOPY],
        )
        return SuiteContext(config)

    def test_new_capabilities(self):
        """Test that the form-level and π*-image checks are registered."""
        homotopy = AGENTS[SuiteName.HOMOTOPY]()
        algebroid = AGENTS[SuiteName.ALGEBROID]()
        coadjoint = AGENTS[SuiteName.COADJOINT]()

        assert {"h0_forms", "total_forms", "h_pi", "h_delta"} <= set(homotopy.capabilities)
        assert "pi_iota_closed" in algebroid.capabilities
        assert {"phi_oracle", "phi_other_blocks", "phi_omega"} <= set(coadjoint.capabilities)

    @pytest.mark.asyncio
    @pytest.mark.parametrize("check", ["h0_forms", "total_forms", "h_pi", "h_delta"])
    async def test_homotopy_checks_pass(self, homotopy_context, check):
        """Test the homotopy identities on forms and on π*-images."""
        agent = AGENTS[SuiteName.HOMOTOPY]()

        result = await agent.execute_task(make_task(homotopy_context, check))

        assert result.success, (result.error, result.outcome)
        assert result.outcome.assertions > 0

    @pytest.mark.asyncio
    async def test_pi_iota_on_closed_elements(self, homotopy_context):
        """Test π0*ι0* = Id on ∂-closed level-0 elements."""
        agent = AGENTS[SuiteName.ALGEBROID]()

        result = await agent.execute_task(make_task(homotopy_context, "pi_iota_closed"))

        assert result.success, (result.error, result.outcome)
        assert result.outcome.assertions > 0

    def test_homotopy_levels_follow_the_profile(self):
        """Test that the acceptance profile runs the homotopy identities up to level 3."""
        quick = SuiteContext(RunConfig(example=ExampleName.NONE, crossed_module="tangent"))
        full = SuiteContext(
            RunConfig(example=ExampleName.NONE, crossed_module="tangent", profile="acceptance")
        )

        assert HomotopySuite.top_level(quick) == 2
        assert HomotopySuite.top_level(full) == 3
        assert full.budget.dc_elements >= 20
