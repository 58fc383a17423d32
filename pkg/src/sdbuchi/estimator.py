"""Estimator-style facade: fit a checker to a diagram, then predict entrance verdicts."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .decide import decide
from .refinement import CACHE_MODES, INIT_MODES
from .compose import SHARING_MODES
from .errors import ValidationError
from .validation import check_diagram, check_method, check_positive, resolve_entrances


class BuchiChecker(BaseEstimator):
    """Decide almost-sure Büchi objectives for the entrances of a string diagram.

    ``fit`` solves the diagram once for the selected entrances (global ones by
    default, ``entrances="all"`` for every component entrance);
    ``predict`` looks verdicts up.

    >>> from sdbuchi.fixtures import example_diagram
    >>> BuchiChecker().fit(example_diagram()).predict()
    array([ True])
    """

    def __init__(self, method="refine", entrances="global", cache="monotone", sharing="solution",
                 init="repaired", strict_shortcut=False, guard_effects=2 ** 20):
        self.method = method
        self.entrances = entrances
        self.cache = cache
        self.sharing = sharing
        self.init = init
        self.strict_shortcut = strict_shortcut
        self.guard_effects = guard_effects

    def _check_params(self):
        check_method(self.method, allow_all=True)
        for name, value, ok in (("cache", self.cache, CACHE_MODES), ("sharing", self.sharing, SHARING_MODES),
                                ("init", self.init, INIT_MODES)):
            if value not in ok:
                raise ValidationError(f"{name} must be one of {', '.join(ok)}, got {value!r}")
        check_positive("guard_effects", self.guard_effects)

    def fit(self, X, y=None):
        self._check_params()
        d = check_diagram(X)
        ents = resolve_entrances(d, self.entrances)
        report = decide(d, self.method, ents, cache=self.cache, sharing=self.sharing, init=self.init,
                        strict_shortcut=bool(self.strict_shortcut), guard_effects=self.guard_effects)
        self.diagram_ = d
        self.entrances_ = ents
        self.verdicts_ = report["verdicts"]
        self.stats_ = report["stats"]
        self.n_entrances_ = len(ents)
        return self

    def predict(self, X=None):
        """Verdicts for the given entrance selectors (default: those fitted), as a bool array."""
        check_is_fitted(self, "verdicts_")
        ents = self.entrances_ if X is None else resolve_entrances(self.diagram_, X)
        missing = [str(ce) for ce in ents if ce not in self.verdicts_]
        if missing:
            raise ValidationError("entrances were not part of the fit: " + ", ".join(missing))
        return np.array([self.verdicts_[ce] for ce in ents], dtype=bool)

    def fit_predict(self, X, y=None):
        return self.fit(X).predict()

    def winning_entrances(self):
        check_is_fitted(self, "verdicts_")
        return [ce for ce in self.entrances_ if self.verdicts_[ce]]
