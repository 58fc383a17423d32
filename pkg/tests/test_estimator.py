from pathlib import Path

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from sdbuchi import BuchiChecker
from sdbuchi.errors import InvariantViolation, ValidationError
from sdbuchi.fixtures import example_diagram, relay, single
from sdbuchi.romdp import ComponentEntrance as CE

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def test_params_round_trip():
    c = BuchiChecker(method="shortcut", cache="exact")
    p = c.get_params()
    assert p["method"] == "shortcut" and p["cache"] == "exact"
    c2 = clone(c)
    assert c2.get_params() == p and c2 is not c
    c2.set_params(method="bottomup")
    assert c2.method == "bottomup" and c.method == "shortcut"


def test_fit_predict_on_example():
    c = BuchiChecker(entrances="all").fit(example_diagram())
    got = c.predict()
    assert got.dtype == np.bool_ and got.tolist() == [True, True, True, False, True, True]
    assert c.n_entrances_ == 6
    assert c.predict(["r.0.0.1:1", "r.0.0.0:3"]).tolist() == [False, True]
    assert CE((0, 0, 1), 1) not in c.winning_entrances()


@pytest.mark.parametrize("method", ["monolithic", "bottomup", "shortcut", "refine", "all"])
def test_methods_agree_through_the_facade(method):
    assert BuchiChecker(method=method).fit_predict(FIX / "example.sdg").tolist() == [True]


def test_accepts_text_and_paths():
    text = (FIX / "relay.sdg").read_text()
    assert BuchiChecker().fit_predict(text).tolist() == [False]
    assert BuchiChecker().fit_predict(str(FIX / "relay.sdg")).tolist() == [False]
    assert BuchiChecker().fit_predict(single(relay(True))).tolist() == [False]


def test_not_fitted():
    with pytest.raises(NotFittedError):
        BuchiChecker().predict()


@pytest.mark.parametrize("params", [{"method": "guess"}, {"cache": "lru"}, {"sharing": "maybe"},
                                    {"init": "eager"}, {"guard_effects": 0}])
def test_bad_params_fail_at_fit(params):
    with pytest.raises(ValidationError):
        BuchiChecker(**params).fit(example_diagram())


def test_predict_outside_fit():
    c = BuchiChecker().fit(example_diagram())
    with pytest.raises(ValidationError):
        c.predict(["r.0.0.1:2"])


def test_disagreement_surfaces(monkeypatch):
    import sdbuchi.decide as dec
    monkeypatch.setitem(dec.RUNNERS, "refine", lambda d, e, o: ({ce: False for ce in e}, {}))
    with pytest.raises(InvariantViolation):
        BuchiChecker(method="all").fit(example_diagram())


def test_docstring_example():
    import doctest

    import sdbuchi.estimator

    assert doctest.testmod(sdbuchi.estimator).failed == 0
