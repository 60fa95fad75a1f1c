"""Acceptance criteria, one test each, at their stated tolerances.

Each test prints a single ``PASS``/``FAIL`` line. Run with
``pytest tests/test_acceptance.py -v`` to see them.
"""

import numpy as np
import pytest

from projschwarz.checks import run_check
from projschwarz.diffeo import CallableDiffeo, ExprDiffeo
from projschwarz.jet import exp
from projschwarz.sampling import random_moebius, random_point, rng_for
from projschwarz.schwarzian import classical_schwarzian

SEED = 42


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        return ok

    return emit


def checks(*names):
    reports = [run_check(name, SEED) for name in names]
    return all(r.passed for r in reports), "; ".join(r.line() for r in reports)


def exp_map():
    return CallableDiffeo(lambda x: [np.exp(x[0]) if isinstance(x[0], float) else exp(x[0])], 1)


def test_criterion_01_classical_schwarzian(report):
    errs = [abs(classical_schwarzian(ExprDiffeo(["x1^2"]), [1.0]) + 1.5)]
    errs += [abs(classical_schwarzian(exp_map(), [x]) + 0.5) for x in (-1.0, 0.0, 0.5, 2.0)]
    rng = rng_for(SEED, "acceptance-classical")
    for _ in range(50):
        x = random_point(rng, 1)
        errs.append(abs(classical_schwarzian(random_moebius(rng, 1, x=x), x)))
    worst = max(errs)
    ok = report(1, worst < 1e-10, f"classical Schwarzian max abs err {worst:.3e} < 1e-10")
    assert ok


def test_criterion_02_one_dimensional_reduction(report):
    ok, detail = checks("coord-1d-reduction")
    assert report(2, ok, detail)


def test_criterion_03_ell_cocycle(report):
    ok, detail = checks("ell-cocycle")
    assert report(3, ok, detail)


def test_criterion_04_schwarzian_cocycle(report):
    ok, detail = checks("schwarzian-cocycle")
    assert report(4, ok, detail)


def test_criterion_05_moebius_kernel(report):
    ok, detail = checks("ell-moebius-vanish", "schwarzian-kernel")
    assert report(5, ok, detail)


def test_criterion_06_trace_conditions(report):
    ok, detail = checks("pi-trace-free")
    assert report(6, ok, detail)


def test_criterion_07_well_definedness(report):
    ok, detail = checks("thm31-invariance", "thm31-alpha-beta-must-fail")
    assert report(7, ok, detail)


def test_criterion_08_three_paths(report):
    ok, detail = checks("schwarzian-threepaths", "jacobian-identity")
    assert report(8, ok, detail)


def test_criterion_09_diagram(report):
    ok, detail = checks("diagram-commute", "weight-specializations")
    assert report(9, ok, detail)


def test_criterion_10_symbol_equivariance(report):
    ok, detail = checks("sigma-equivariance")
    assert report(10, ok, detail)


def test_criterion_11_sturm_liouville(report):
    ok, detail = checks("sturm-liouville")
    assert report(11, ok, detail)


def test_criterion_12_third_jet_dependence(report):
    ok, detail = checks("jet3-dependence")
    assert report(12, ok, detail)
