import json

import pytest

from projschwarz.checks import CHECK_NAMES, REGISTRY, run_check, run_suite
from projschwarz.errors import ScenarioError

SPEC_NAMES = {
    "jet-ring", "chain-rule", "pi-trace-free", "ell-cocycle", "ell-moebius-vanish",
    "thm31-invariance", "thm31-alpha-beta-must-fail", "lemma32-contravariance",
    "schwarzian-cocycle", "schwarzian-kernel", "schwarzian-threepaths", "jet3-dependence",
    "jacobian-identity", "coord-1d-reduction", "sigma-roundtrip", "sigma-equivariance",
    "diagram-commute", "weight-specializations", "sturm-liouville", "action-composition",
}


def test_registry_is_complete():
    assert set(CHECK_NAMES) == SPEC_NAMES
    assert all(spec.trials <= 100 for spec in REGISTRY.values())


@pytest.mark.parametrize("name", CHECK_NAMES)
def test_every_check_passes(name):
    report = run_check(name, seed=7)
    assert report.passed, report.line()
    assert json.loads(json.dumps(report.to_json()))["name"] == name


def test_documented_runs():
    r = run_check("ell-moebius-vanish", 42, 50, 1e-9)
    assert r.passed and r.max_abs_err < 1e-9
    r = run_check("thm31-alpha-beta-must-fail", 42, 20, 1e-3)
    assert r.passed and r.must_fail and r.min_discrepancy > 1e-3
    assert run_check("jet-ring", 1, 100, 1e-12).passed


def test_must_fail_reports_failure_when_tolerance_is_too_loose():
    r = run_check("thm31-alpha-beta-must-fail", 3, 5, 1e3)
    assert not r.passed
    assert r.line().startswith("FAIL")


def test_tolerance_override_can_fail_a_check():
    r = run_check("schwarzian-cocycle", 3, 5, 1e-300)
    assert not r.passed


def test_determinism():
    a = run_check("diagram-commute", 11, 10).to_json()
    b = run_check("diagram-commute", 11, 10).to_json()
    assert a == b
    c = run_check("diagram-commute", 12, 10).to_json()
    assert c["max_abs_err"] != a["max_abs_err"]


def test_unknown_names():
    with pytest.raises(ScenarioError):
        run_check("no-such-check")
    with pytest.raises(ScenarioError):
        run_suite(["jet-ring", "nope"])


def test_suite_orders_by_name():
    reports = run_suite(["sigma-roundtrip", "jet-ring"], seed=1, trials=3)
    assert [r.name for r in reports] == ["jet-ring", "sigma-roundtrip"]
    assert all(r.trials == 3 for r in reports)
