"""scikit-learn style front ends.

The minimizers take a function where an estimator would take ``X``::

    >>> from quasimnat.gallery import example_2_2
    >>> est = SteepestDescentMinimizer(algorithm="basic").fit(example_2_2().function, x0=(0, 1))
    >>> est.minimizer_, est.n_iter_
    ((2, 0), 2)

Parameters live in ``__init__`` and are exposed through ``get_params`` /
``set_params``; fitted state ends in an underscore.
"""
from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from . import axioms
from .minimize import ALGORITHMS, domain_reduction, is_local_min, minimize
from .validation import check_function, check_point


def _check_fitted(est, attr):
    if not hasattr(est, attr):
        raise NotFittedError(f"{type(est).__name__} is not fitted yet; call fit() first")


class SteepestDescentMinimizer(BaseEstimator):
    """Minimize a lattice function with one of the descent algorithms.

    Parameters
    ----------
    algorithm : {"basic", "modified", "domain-reduction"}
    strict : bool or None
        Verify axiom preconditions before running. None means "only for
        tables with at most 10^4 points".
    audit : bool
        Check after every step that the shrinking region keeps a minimizer
        (``modified`` and ``domain-reduction`` only).
    max_iter : int or None
    """

    def __init__(self, algorithm="basic", strict=None, audit=False, max_iter=None):
        self.algorithm = algorithm
        self.strict = strict
        self.audit = audit
        self.max_iter = max_iter

    def fit(self, f, x0=None, box=None):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        tabulated = self.algorithm == "domain-reduction" or self.strict or self.audit or (box is None and self.algorithm == "modified")
        f = check_function(f, tabulated=bool(tabulated))
        if self.algorithm == "domain-reduction":
            res = domain_reduction(f, strict=self.strict, audit=self.audit, max_iter=self.max_iter)
            self.trace_ = res.state
        else:
            if x0 is None:
                raise ValueError(f"algorithm {self.algorithm!r} needs a start point x0")
            x0 = check_point(x0, f, in_domain=True)
            kw = {"strict": self.strict, "max_iter": self.max_iter}
            if self.algorithm == "modified":
                kw.update(box=box, audit=self.audit)
            res = minimize(f, self.algorithm, x0, **kw)
            self.trace_ = res
        self.minimizer_ = res.minimizer
        self.value_ = res.value
        self.n_iter_ = res.iterations
        self.n_features_in_ = f.dim
        self.function_ = f
        return self

    def predict(self, X=None):
        """Return the fitted minimizer (once per row of ``X`` if given)."""
        _check_fitted(self, "minimizer_")
        if X is None:
            return self.minimizer_
        return [self.minimizer_ for _ in X]

    def score(self, f=None):
        """Negated value at the minimizer, so that larger is better."""
        _check_fitted(self, "value_")
        f = self.function_ if f is None else f
        return -f(self.minimizer_)


class LocalOptimalityClassifier(BaseEstimator):
    """Label points of a function's domain as local minima (1) or not (0)."""

    def fit(self, f):
        self.function_ = check_function(f, tabulated=False)
        self.n_features_in_ = self.function_.dim
        return self

    def predict(self, X):
        _check_fitted(self, "function_")
        f = self.function_
        return [int(is_local_min(f, check_point(x, f))) for x in X]


class AxiomChecker(BaseEstimator):
    """Run one exchange-axiom checker; ``report_`` holds the result."""

    def __init__(self, axiom="ssqm-nat", exhaustive=False, threads=None):
        self.axiom = axiom
        self.exhaustive = exhaustive
        self.threads = threads

    def fit(self, f):
        f = check_function(f)
        kw = {"exhaustive": self.exhaustive}
        if self.axiom != "descent-lemma":
            kw["threads"] = self.threads
        self.report_ = axioms.check_axiom(f, self.axiom, **kw)
        self.passed_ = bool(self.report_.passed)
        return self

    def predict(self, functions):
        """Verdicts (True/False) for a list of functions, without refitting."""
        return [bool(axioms.check_axiom(check_function(g), self.axiom).passed) for g in functions]
