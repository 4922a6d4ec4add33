import pytest

from weightkit import fuzz
from weightkit.fuzz import FuzzConfig, run_property_suite


def test_reports_are_reproducible():
    cfg = FuzzConfig(seed=7, trials=15, mutate=True)
    a = run_property_suite(cfg).text()
    b = run_property_suite(cfg).text()
    assert a == b and "status: PASS" in a


def test_parallel_matches_sequential(monkeypatch):
    cfg = FuzzConfig(seed=8, trials=6, properties=("methods_agree", "ideal"))
    seq = run_property_suite(cfg, jobs=1).text()
    monkeypatch.setenv(fuzz.JOBS_ENV, "2")
    assert run_property_suite(cfg).text() == seq


def test_mutations_are_caught():
    rep = run_property_suite(FuzzConfig(seed=9, trials=60,
                                        properties=("linear_algebra",),
                                        mutate=True))
    mu = rep.mutations
    assert mu["invalid"] > 0 and mu["invalid_missed"] == 0
    assert mu["valid_disagree"] == 0


def test_broken_method_is_reported_and_shrunk(monkeypatch):
    real = fuzz.kills_weights

    def lying(g, win, method="direct", decompositions=None):
        v = real(g, win, method, decompositions)
        if method == "detector" and g.source.total_rank() >= 2:
            v.verdict = not v.verdict
        return v

    monkeypatch.setattr(fuzz, "kills_weights", lying)
    rep = run_property_suite(FuzzConfig(seed=10, trials=10,
                                        coefficients=("Q",),
                                        properties=("methods_agree",)))
    assert rep.failures and not rep.ok
    f = rep.failures[0]
    assert f["message"].startswith("methods disagree")
    assert "map" in f["artifact"] and "status: FAIL" in rep.text()


@pytest.mark.parametrize("kwargs", [dict(trials=0), dict(seed=-1),
                                    dict(coefficients=("R",)),
                                    dict(properties=("nope",))])
def test_bad_configs(kwargs):
    with pytest.raises(ValueError):
        FuzzConfig(**kwargs)


def test_bad_jobs_env(monkeypatch):
    monkeypatch.setenv(fuzz.JOBS_ENV, "many")
    with pytest.raises(ValueError):
        fuzz.jobs_from_env()
