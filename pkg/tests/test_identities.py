import json

from blenders import convexity
from blenders.forms import Form
from blenders.identities import CHECKS, check_theta, run_suite


def test_full_suite_passes():
    report = run_suite()
    assert report.ok, report.text()
    assert len(report.results) == len(CHECKS)
    assert all(r.line().startswith("[PASS]") for r in report.results)


def test_suite_json():
    obj = json.loads(json.dumps(run_suite(checks=[("theta", check_theta)]).to_json()))
    assert obj["ok"] is True


def _broken_theta(p: Form) -> Form:
    th = convexity.theta(p)
    # double one coefficient
    e = next(iter(sorted(th.terms)))
    terms = dict(th.terms)
    terms[e] = terms[e] * 2
    return Form(2, th.degree, terms)


def test_mutation_names_coefficient():
    report = run_suite(checks=[("theta", check_theta)], overrides={"check_theta": lambda: check_theta(theta_fn=_broken_theta)})
    assert not report.ok
    assert "b_" in report.results[0].detail


def test_exceptions_become_failures():
    def boom():
        raise RuntimeError("kaput")

    report = run_suite(checks=[("boom", boom)])
    assert not report.ok
    assert "kaput" in report.results[0].detail
