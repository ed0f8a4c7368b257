import logging

import pytest

from app.core.config import settings
from app.core.errors import ParseError
from app.services.verification import SUITES, run_suite

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def setup_module(module):
    module.saved_samples = settings.LATTICE_SAMPLES
    settings.LATTICE_SAMPLES = 60
    logger.info("[setup] Lattice suite limited to 60 samples")


def teardown_module(module):
    settings.LATTICE_SAMPLES = module.saved_samples


def assert_passed(result):
    assert result.passed, f"{result.name} failures: {result.failures[:5]}"
    assert result.checked > 0
    logger.info(f"{result.name}: {result.checked} checks, counts {result.counts}")


@pytest.mark.parametrize("name", ["group", "lemma32", "lemma43", "remark42", "section5"])
def test_suites_pass_on_small_groups(name):
    assert_passed(run_suite(name, max_order=8))


def test_lattice_suite():
    result = run_suite("lattice", seed=5)
    assert_passed(result)
    assert result.counts["matrices"] == 60


def test_lemma32_finds_the_unfaithful_single_summand_cases():
    result = run_suite("lemma32", max_order=6)
    assert_passed(result)
    # C2..C6 with trivial H contribute tuples whose single summand acts trivially
    assert result.counts["tuples"] > result.counts["reports"]


def test_section5_suite_includes_d4():
    result = run_suite("section5", max_order=4)
    assert_passed(result)
    assert result.counts["triples"] >= 1


def test_seeded_runs_are_reproducible():
    first = run_suite("lemma43", max_order=6, seed=9)
    second = run_suite("lemma43", max_order=6, seed=9)
    assert first.counts == second.counts
    assert first.checked == second.checked


def test_unknown_suite():
    with pytest.raises(ParseError):
        run_suite("everything")


@pytest.mark.slow
@pytest.mark.parametrize("name", SUITES)
def test_full_acceptance_runs(name):
    saved = settings.LATTICE_SAMPLES
    settings.LATTICE_SAMPLES = 500
    try:
        assert_passed(run_suite(name))
    finally:
        settings.LATTICE_SAMPLES = saved


def test_group_suite_covers_every_subgroup_pair():
    result = run_suite("group", max_order=8)
    assert_passed(result)
    # n subgroups give n(n+1)/2 unordered pairs, so pairs never fall below subgroups
    assert result.counts["pairs"] >= result.counts["subgroups"]
