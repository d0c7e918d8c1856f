"""scikit-learn style wrappers around the functional API.

The estimators accept either a :class:`SymbolSequence` or a 1-d array of
labels (``+1/-1``, ``0/1``, ...), validate it, and expose the usual
``fit`` / ``transform`` / ``get_params`` surface so they can be cloned,
grid-searched over ``g`` or ``m``, and chained in pipelines.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_is_fitted

from .criterion import criterion_scan, epsilon_table
from .empirics import Weighting, autocovariance, block_distribution
from .exceptions import ValidationError
from .generators import difference_indicator, doubling
from .sequences import SymbolSequence


def check_sequence(X, *, pm1: bool = False, min_length: int = 1) -> SymbolSequence:
    """Coerce ``X`` to a :class:`SymbolSequence` and check its basic shape."""
    if isinstance(X, SymbolSequence):
        seq = X
    else:
        arr = np.asarray(X)
        if arr.ndim == 2 and 1 in arr.shape:
            arr = arr.ravel()
        if arr.ndim != 1:
            raise ValidationError(f"expected a 1-d sequence of labels, got shape {arr.shape}")
        if arr.size == 0:
            raise ValidationError("expected a non-empty sequence")
        if arr.dtype.kind == "f" and not np.all(np.isfinite(arr)):
            raise ValidationError("sequence contains NaN or infinite values")
        seq = SymbolSequence.from_labels(arr)
    if len(seq) < min_length:
        raise ValidationError(f"sequence of length {len(seq)} is shorter than {min_length}")
    if pm1 and not seq.alphabet.is_pm1:
        raise ValidationError("expected a +-1 valued sequence")
    return seq


class BlockFrequencies(BaseEstimator):
    """Empirical distribution of length-``m`` blocks.

    Attributes
    ----------
    distribution_ : BlockDistribution
    entropy_ : float
        Plug-in Shannon entropy of the block law, in bits.
    """

    def __init__(self, m=1, weighting="cesaro"):
        self.m = m
        self.weighting = weighting

    def fit(self, X, y=None):
        seq = check_sequence(X, min_length=self.m)
        self.distribution_ = block_distribution(seq, self.m, Weighting.coerce(self.weighting))
        self.entropy_ = self.distribution_.entropy()
        self.n_positions_ = self.distribution_.n_positions
        return self

    def mass(self, block) -> float:
        check_is_fitted(self, "distribution_")
        return self.distribution_[block]


class SarnakCriterion(BaseEstimator):
    """Scan ``eps_g`` defect totals for ``g`` in ``gaps`` and ``m <= m_max``.

    After ``fit``, ``certified_gaps_`` lists the gaps whose largest total
    stays below ``eps``; ``score`` returns minus the smallest such total so
    that higher is better.
    """

    def __init__(self, gaps=(1,), m_max=6, eps=0.05, weighting="cesaro"):
        self.gaps = gaps
        self.m_max = m_max
        self.eps = eps
        self.weighting = weighting

    def fit(self, X, y=None):
        seq = check_sequence(X, pm1=True)
        self.report_ = criterion_scan(seq, list(self.gaps), self.m_max, self.eps,
                                      Weighting.coerce(self.weighting))
        self.sup_totals_ = self.report_.sup_totals
        self.certified_gaps_ = self.report_.certified_gaps
        return self

    def certifies(self) -> bool:
        check_is_fitted(self, "report_")
        return bool(self.certified_gaps_)

    def score(self, X=None, y=None) -> float:
        if X is not None:
            self.fit(X)
        check_is_fitted(self, "report_")
        return -min(self.sup_totals_.values())

    def epsilon_table(self, X, g: int, m: int):
        return epsilon_table(check_sequence(X, pm1=True), g, m, Weighting.coerce(self.weighting))


class Autocovariance(BaseEstimator):
    """Empirical autocovariances at lags ``0..max_lag``."""

    def __init__(self, max_lag=1, weighting="cesaro"):
        self.max_lag = max_lag
        self.weighting = weighting

    def fit(self, X, y=None):
        seq = check_sequence(X, min_length=self.max_lag + 1)
        w = Weighting.coerce(self.weighting)
        self.autocovariance_ = np.array([autocovariance(seq, lag, w) for lag in range(self.max_lag + 1)])
        return self


class _StatelessTransformer(TransformerMixin, BaseEstimator):
    def fit(self, X, y=None):
        check_sequence(X)
        self.fitted_ = True
        return self

    def _check(self):
        if not getattr(self, "fitted_", False):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet")


class DifferenceIndicator(_StatelessTransformer):
    """Map ``u`` to ``1[u_j != u_{j+1}]``."""

    def transform(self, X):
        self._check()
        return difference_indicator(check_sequence(X, min_length=2))


class Doubling(_StatelessTransformer):
    """Map ``u`` to ``u_0, u_0, u_1, u_1, ...``."""

    def transform(self, X):
        self._check()
        return doubling(check_sequence(X))
