import math

from zeno_discord import selfcheck


def test_default_suite_passes():
    results = selfcheck.run_checks()
    assert len(results) == 6
    for r in results:
        assert r.passed, r.line()
        assert r.line().startswith("PASS ")


def test_eta_half_check_reports_singular_handling():
    r = selfcheck.check_eta_half()
    assert r.passed
    assert "EtaSingular" in r.detail


def test_loosened_quadrature_fails_with_deviation_report():
    results = selfcheck.run_checks(quad_epsabs=1e-1, quad_limit=10)
    quad = next(r for r in results if r.name == "closed form vs quadrature")
    assert not quad.passed
    assert math.isfinite(quad.max_deviation) and quad.max_deviation > quad.tolerance
    assert quad.line().startswith("FAIL closed form vs quadrature: max deviation")


def test_quadrature_failure_becomes_a_fail_line():
    results = selfcheck.run_checks(quad_epsabs=1e-14, quad_limit=1)
    quad = results[0]
    assert not quad.passed
    assert "FAIL" in quad.line()


def test_random_xstates_reproducible_and_valid():
    a, b = selfcheck.random_xstates(5), selfcheck.random_xstates(5)
    assert a == b
    for x in a:
        assert abs(x.trace - 1) < 1e-12
        assert min(x.eigenvalues()) >= -1e-12
