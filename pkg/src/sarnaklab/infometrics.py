"""Plug-in information theory on finite distributions.

All logarithms are base 2.  Conventions: ``0 log 0 = 0``, ``0/0 = 0`` in
KL terms, and conditional quantities skip columns whose ``Y``-marginal is
zero.  Total variation is the plain L1 distance, so it ranges over ``[0, 2]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import ComputationError, ValidationError

LOG2_E = math.log2(math.e)
MASS_TOL = 1e-9


def _check_pmf(probs: np.ndarray, what: str = "distribution") -> np.ndarray:
    probs = np.asarray(probs, dtype=np.float64)
    if probs.size == 0:
        raise ValidationError(f"{what} is empty")
    if np.any(~np.isfinite(probs)) or np.any(probs < 0):
        raise ValidationError(f"{what} has negative or non-finite entries")
    total = probs.sum()
    if abs(total - 1.0) > MASS_TOL:
        raise ValidationError(f"{what} has total mass {total!r}, expected 1")
    return probs


@dataclass(frozen=True, eq=False)
class FiniteDistribution:
    probs: np.ndarray
    support: Sequence = None

    def __post_init__(self):
        probs = _check_pmf(self.probs)
        support = list(range(probs.size)) if self.support is None else list(self.support)
        if len(support) != probs.size:
            raise ValidationError("support and probability vector differ in length")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "support", support)

    def __len__(self) -> int:
        return self.probs.size


@dataclass(frozen=True, eq=False)
class FiniteJoint:
    """Joint law of ``(X, Y)``: rows index ``X``, columns index ``Y``."""

    probs: np.ndarray
    x_support: Sequence = None
    y_support: Sequence = None

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != 2:
            raise ValidationError("a joint distribution must be a 2-d array")
        _check_pmf(probs, "joint distribution")
        xs = list(range(probs.shape[0])) if self.x_support is None else list(self.x_support)
        ys = list(range(probs.shape[1])) if self.y_support is None else list(self.y_support)
        if (len(xs), len(ys)) != probs.shape:
            raise ValidationError("supports do not match the joint's shape")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "x_support", xs)
        object.__setattr__(self, "y_support", ys)

    @property
    def px(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    @property
    def py(self) -> np.ndarray:
        return self.probs.sum(axis=0)

    def x_marginal(self) -> FiniteDistribution:
        return FiniteDistribution(self.px, self.x_support)

    def y_marginal(self) -> FiniteDistribution:
        return FiniteDistribution(self.py, self.y_support)

    def product_of_marginals(self) -> np.ndarray:
        return np.outer(self.px, self.py)


@dataclass(frozen=True)
class PinskerBounds:
    """``lower <= tv_mid <= upper`` with ``info_gap = H(X) - H(X|Y)`` in bits."""

    info_gap: float
    tv_mid: float
    lower: float
    upper: float
    beta: float

    def holds(self, slack: float = 1e-9) -> bool:
        return self.lower <= self.tv_mid + slack and self.tv_mid <= self.upper + slack


def _as_pmf(p) -> np.ndarray:
    if isinstance(p, FiniteDistribution):
        return p.probs
    return _check_pmf(p)


def _as_joint(j) -> FiniteJoint:
    return j if isinstance(j, FiniteJoint) else FiniteJoint(j)


def shannon_entropy_pmf(probs: np.ndarray) -> float:
    probs = np.asarray(probs, dtype=np.float64)
    nz = probs[probs > 0]
    return float(-(nz * np.log2(nz)).sum()) + 0.0


def shannon_entropy(p) -> float:
    """``H = -sum p log2 p`` in bits."""
    return shannon_entropy_pmf(_as_pmf(p))


def conditional_entropy(j) -> float:
    """``H(X|Y) = sum_y p_Y(y) H(X | Y=y)``."""
    j = _as_joint(j)
    total = 0.0
    py = j.py
    for col, w in enumerate(py):
        if w > 0:
            total += w * shannon_entropy_pmf(j.probs[:, col] / w)
    return float(total)


def _same_support(p, q) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(p, FiniteDistribution) and isinstance(q, FiniteDistribution):
        if p.support != q.support:
            raise ValidationError("distributions are defined on different supports")
    pa, qa = _as_pmf(p), _as_pmf(q)
    if pa.shape != qa.shape:
        raise ValidationError(f"support mismatch: {pa.size} vs {qa.size} outcomes")
    return pa, qa


def kl_divergence(p, q) -> float:
    """``D(p || q)`` in bits; ``inf`` when ``p`` is not absolutely continuous w.r.t. ``q``."""
    pa, qa = _same_support(p, q)
    pos = pa > 0
    if np.any(qa[pos] == 0):
        return math.inf
    val = float((pa[pos] * np.log2(pa[pos] / qa[pos])).sum())
    return max(val, 0.0)


def total_variation(p, q) -> float:
    """``sum_x |p(x) - q(x)|``, in ``[0, 2]``."""
    pa, qa = _same_support(p, q)
    return float(np.abs(pa - qa).sum())


def mean_conditional_tv(j) -> float:
    """``E_Y || p_{X|Y}(.|Y) - p_X ||``, evaluated as ``sum_{x,y} |p(x,y) - p(x)p(y)|``."""
    j = _as_joint(j)
    return float(np.abs(j.probs - j.product_of_marginals()).sum())


def mean_conditional_tv_by_columns(j) -> float:
    """The same expectation computed column by column from the conditional laws."""
    j = _as_joint(j)
    px, py = j.px, j.py
    total = 0.0
    for col, w in enumerate(py):
        if w > 0:
            total += w * float(np.abs(j.probs[:, col] / w - px).sum())
    return float(total)


def mutual_information(j) -> float:
    """``D(p_{X,Y} || p_X (x) p_Y)`` in bits."""
    j = _as_joint(j)
    return kl_divergence(j.probs.ravel(), j.product_of_marginals().ravel())


def pinsker_beta(j) -> float:
    """``beta`` with ``1/beta = max p(x,y) / (p(x)p(y))`` over product-positive cells."""
    j = _as_joint(j)
    prod = j.product_of_marginals()
    null = prod == 0
    if np.any(j.probs[null] > 0):
        raise ComputationError("beta undefined: joint puts mass on a cell of zero product mass")
    ratio = j.probs[~null] / prod[~null]
    # the max ratio is >= 1 in exact arithmetic
    return float(min(1.0, 1.0 / ratio.max()))


def pinsker_bounds(j) -> PinskerBounds:
    """Two-sided bound on the mean conditional total variation by the information gap."""
    j = _as_joint(j)
    beta = pinsker_beta(j)
    px = j.px
    gap = float(shannon_entropy_pmf(px) - conditional_entropy(j))
    pos = max(gap, 0.0)
    return PinskerBounds(
        info_gap=gap,
        tv_mid=mean_conditional_tv(j),
        lower=2.0 * math.sqrt(beta) / LOG2_E * pos,
        upper=math.sqrt(2.0 * pos),
        beta=beta,
    )


def covariance(j, x_values, y_values) -> float:
    """Covariance of the labels ``x_values[X]`` and ``y_values[Y]`` under ``j``."""
    j = _as_joint(j)
    xv = np.asarray(x_values, dtype=np.float64)
    yv = np.asarray(y_values, dtype=np.float64)
    exy = float(xv @ j.probs @ yv)
    return exy - float(xv @ j.px) * float(yv @ j.py)
