"""The law-checking suites themselves, their shrinker and replay path.

A deliberately broken checker is planted to prove the shrinker reduces
counterexamples to a minimal carrier and that replay reproduces them from
the text payload alone.
"""

import pytest

from coheyting.posets import build_poset
from coheyting.suites import (
    CHECKERS,
    Failure,
    SuiteContext,
    _fail,
    replay_failure,
    run_suites,
    suite_names,
)

QUICK = SuiteContext(seed=7, budget=40, max_points=4)


def test_suite_names_inventory():
    names = suite_names()
    assert len(names) == 20
    assert names == sorted(names)
    for expected in (
        "s2-identities",
        "ultrametric",
        "dim-rank",
        "quotient-fini",
        "duality-roundtrip",
        "tower-coherence",
    ):
        assert expected in names


@pytest.mark.parametrize("name", suite_names())
def test_each_suite_passes(name):
    (report,) = run_suites([name], QUICK)
    assert report.ok, report.describe()
    assert report.cases > 0
    assert report.suite == name
    assert "ok" in report.describe()


def test_unknown_suite_rejected():
    with pytest.raises(KeyError):
        run_suites(["no-such-suite"], QUICK)


def test_run_all_defaults_to_every_suite():
    reports = run_suites(None, QUICK)
    assert [r.suite for r in reports] == suite_names()
    assert all(r.ok for r in reports)


def planted_checker(algebra, e, extra):
    if not e["a"].is_bottom():
        return "a must be empty"
    return None


def test_shrinker_minimizes_planted_failure():
    CHECKERS["planted"] = planted_checker
    try:
        chain = build_poset(
            ["q0", "q1", "q2"], [("q0", "q1"), ("q1", "q2")]
        )
        failure = _fail(
            "planted", "a must be empty", chain, {"a": chain.full}, {}
        )
        assert failure.suite == "planted"
        assert failure.law == "a must be empty"
        # one carrier point and a single-point mask survive
        assert failure.poset_text.strip() == "points: q0"
        assert failure.masks == {"a": "{q0}"}
        assert replay_failure(failure)
        passing = Failure(
            suite="planted",
            law="a must be empty",
            poset_text=failure.poset_text,
            masks={"a": "{}"},
            extra={},
        )
        assert not replay_failure(passing)
    finally:
        del CHECKERS["planted"]


def test_failure_describe_format():
    failure = Failure(
        suite="demo",
        law="x = y",
        poset_text="points: p0\n",
        masks={"x": "{p0}", "y": "{}"},
        extra={"note": "hand built"},
    )
    text = failure.describe()
    assert "[demo] law violated: x = y" in text
    assert "points: p0" in text
    assert "x = {p0}" in text
    assert "note: hand built" in text
