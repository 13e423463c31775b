from importlib.metadata import entry_points

import pytest

pytest_plugins = ["pytester"]


def test_fixtures_give_scoped_limits_and_streams(pytester: pytest.Pytester):
    pytester.makeconftest(
        """
from pottslab.pytest_fixtures import lab_context, rng_stream, tmp_artifact_dir
"""
    )
    pytester.makepyfile(
        """
import pottslab
from pottslab._context import lab_globals


def test_limits_are_scoped(lab_context):
    pottslab.configure(max_sites=12)
    assert lab_context.max_sites == 12
    assert lab_globals.max_sites == 12


def test_limits_start_fresh(lab_context):
    assert lab_context.max_sites > 12


def test_streams_are_seeded(rng_stream):
    a = rng_stream(7).generator().random()
    b = rng_stream(7).generator().random()
    c = rng_stream(7, 1).generator().random()
    assert a == b
    assert a != c


def test_artifact_dir_is_empty(tmp_artifact_dir):
    assert tmp_artifact_dir.is_dir()
    assert list(tmp_artifact_dir.iterdir()) == []
"""
    )

    result = pytester.runpytest("-q")
    result.assert_outcomes(passed=4)


def test_pytest_entry_point_auto_loads_fixture_plugin(pytester: pytest.Pytester):
    if not any(
        entry_point.name == "pottslab" and entry_point.value == "pottslab.pytest_fixtures"
        for entry_point in entry_points(group="pytest11")
    ):
        dist_info = pytester.path / "pottslab_entrypoint_test-0.0.dist-info"
        dist_info.mkdir()
        (dist_info / "METADATA").write_text(
            "Name: pottslab-entrypoint-test\nVersion: 0.0\n"
        )
        (dist_info / "entry_points.txt").write_text(
            "[pytest11]\npottslab = pottslab.pytest_fixtures\n"
        )

    pytester.makepyfile(
        """
def test_fixture_auto_loaded(pytestconfig):
    fixture_names = set(
        pytestconfig.pluginmanager.get_plugin("funcmanage")._arg2fixturedefs
    )

    assert {"lab_context", "rng_stream", "tmp_artifact_dir"} <= fixture_names
"""
    )

    result = pytester.runpytest_subprocess("-q")
    result.assert_outcomes(passed=1)
