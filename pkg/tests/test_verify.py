import pytest

from fiberquant.errors import FiberquantError
from fiberquant.scenario import default_scenario
from fiberquant.verify import run_suite


@pytest.mark.parametrize("suite", ["orbit", "fiber"])
def test_light_suites_pass(suite):
    checks = run_suite(suite, default_scenario(2, "monopole", strength=1))
    failed = [c for c in checks if not c.passed]
    assert not failed, f"failed: {[(c.name, c.value) for c in failed]}"


def test_gauge_suite_passes():
    checks = run_suite("gauge", default_scenario(2, "monopole", strength=1))
    failed = [c for c in checks if not c.passed]
    assert not failed, f"failed: {[(c.name, c.value) for c in failed]}"
    names = {c.name for c in checks}
    assert "gauge.connection_equivalence" in names
    assert "gauge.transformation_law" in names


def test_transport_suite_passes():
    checks = run_suite("transport", default_scenario(2, "monopole", strength=1))
    failed = [c for c in checks if not c.passed]
    assert not failed, f"failed: {[(c.name, c.value) for c in failed]}"


def test_all_aggregates_every_suite():
    scenario = default_scenario(1, "trivial")
    names = {c.name for c in run_suite("all", scenario)}
    for prefix in ("orbit.", "fiber.", "gauge.", "transport."):
        assert any(name.startswith(prefix) for name in names)


def test_unknown_suite_rejected():
    with pytest.raises(FiberquantError):
        run_suite("everything", default_scenario())


def test_min_mode_checks_report_floor():
    checks = run_suite("fiber", default_scenario(1, "trivial"))
    ratio = next(c for c in checks if c.name == "fiber.polarization_counterexample_ratio")
    assert ratio.mode == "min" and ratio.passed
