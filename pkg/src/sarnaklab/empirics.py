"""Empirical block statistics of a finite window.

Blocks of length ``m`` are encoded as base-``k`` integers (``k`` the
alphabet size, first symbol most significant).  Only blocks that fit
entirely inside the window are counted, and the averaging denominator is
the number of valid starting positions, not the window length.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import ValidationError
from .sequences import Alphabet, SymbolSequence

MAX_BLOCK_BITS = 56
CHUNK = 1 << 20


@dataclass(frozen=True)
class Weighting:
    """Cesaro (equal weights) or logarithmic (weight ``1/i``, ``i >= 1``) averaging."""

    kind: str = "cesaro"

    def __post_init__(self):
        kind = {"log": "logarithmic"}.get(self.kind, self.kind)
        if kind not in ("cesaro", "logarithmic"):
            raise ValidationError(f"unknown weighting {self.kind!r}")
        object.__setattr__(self, "kind", kind)

    @classmethod
    def coerce(cls, w) -> "Weighting":
        if isinstance(w, Weighting):
            return w
        return cls("cesaro" if w is None else str(w))

    def weights(self, start: int, count: int) -> np.ndarray | None:
        """Unnormalized weights for ambient positions ``start .. start+count-1``.

        ``None`` means equal weights.  Logarithmic weights index positions
        from 1, so ambient position ``p`` gets ``1/(p+1)``.
        """
        if self.kind == "cesaro":
            return None
        return 1.0 / np.arange(start + 1, start + count + 1, dtype=np.float64)

    def __str__(self) -> str:
        return self.kind


CESARO = Weighting("cesaro")
LOGARITHMIC = Weighting("logarithmic")


def _check_block_fits(alphabet: Alphabet, m: int) -> None:
    if m * math.log2(max(alphabet.size, 1)) > MAX_BLOCK_BITS:
        raise ValidationError(
            f"block too long: {m} symbols over {alphabet.size} letters exceed {MAX_BLOCK_BITS} bits"
        )


def encode_blocks(codes: np.ndarray, k: int, m: int, count: int, offset: int = 0) -> np.ndarray:
    """Integer codes of the blocks ``codes[offset+i : offset+i+m]`` for ``i < count``.

    Vectorized form of the rolling update ``c <- c*k + new``; the leading
    term drops out because each block is rebuilt from its own ``m`` symbols.
    """
    out = np.zeros(count, dtype=np.int64)
    for t in range(m):
        out *= k
        out += codes[offset + t: offset + t + count]
    return out


def decode_block(code: int, k: int, m: int) -> tuple[int, ...]:
    digits = []
    for _ in range(m):
        code, r = divmod(code, k)
        digits.append(r)
    return tuple(reversed(digits))


DENSE_LIMIT = 1 << 22


def _tally(keys: np.ndarray, weights: np.ndarray | None, key_space: int | None = None):
    """Distinct keys and their (weighted) totals, sorted by key.

    Small key spaces are counted densely with ``bincount``; others go
    through a sort.  Both give the same table.
    """
    if key_space is not None and key_space <= DENSE_LIMIT:
        dense = np.bincount(keys, weights=weights, minlength=key_space)
        if weights is not None:
            present = np.bincount(keys, minlength=key_space) > 0
        else:
            present = dense > 0
        uniq = np.flatnonzero(present)
        return uniq, dense[uniq].astype(np.float64)
    uniq, inverse = np.unique(keys, return_inverse=True)
    if weights is None:
        totals = np.bincount(inverse, minlength=uniq.size).astype(np.float64)
    else:
        totals = np.bincount(inverse, weights=weights, minlength=uniq.size)
    return uniq, totals


@dataclass(frozen=True, eq=False)
class BlockDistribution:
    """Empirical law of length-``m`` blocks.  ``codes`` are sorted; absent blocks have mass 0."""

    m: int
    alphabet: Alphabet
    codes: np.ndarray
    probs: np.ndarray
    weighting: Weighting
    window_length: int
    n_positions: int

    @cached_property
    def mass(self) -> dict[int, float]:
        return dict(zip(self.codes.tolist(), self.probs.tolist()))

    def __getitem__(self, block) -> float:
        if not isinstance(block, (int, np.integer)):
            block = self.encode(block)
        return self.mass.get(int(block), 0.0)

    def encode(self, block) -> int:
        k = self.alphabet.size
        code = 0
        for s in block:
            code = code * k + int(s)
        return code

    def block_codes(self, code: int) -> tuple[int, ...]:
        return decode_block(code, self.alphabet.size, self.m)

    def block_string(self, code: int) -> str:
        return self.alphabet.format_block(self.block_codes(code))

    def entropy(self) -> float:
        from .infometrics import shannon_entropy_pmf
        return shannon_entropy_pmf(self.probs)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "weighting": self.weighting.kind,
            "n": self.window_length,
            "n_effective": self.n_positions,
            "mass": {self.block_string(c): p for c, p in zip(self.codes.tolist(), self.probs.tolist())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Empirical law of ``(u_i, u_{i+g} .. u_{i+g+m-1})``.

    ``origin`` and ``block`` are parallel arrays of occurring pairs; ``probs``
    their masses.  Both marginals are counted directly from the window
    when the joint is built, so the origin marginal equals the 1-block
    distribution over the same positions exactly.
    """

    g: int
    m: int
    alphabet: Alphabet
    origin: np.ndarray
    block: np.ndarray
    probs: np.ndarray
    weighting: Weighting
    window_length: int
    n_positions: int
    origin_marginal: np.ndarray
    block_marginal: tuple

    @cached_property
    def mass(self) -> dict[tuple[int, int], float]:
        return {(int(a), int(q)): float(p) for a, q, p in zip(self.origin, self.block, self.probs)}

    def matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Dense ``(alphabet size) x (occurring blocks)`` joint and the block codes of its columns."""
        blocks, inverse = np.unique(self.block, return_inverse=True)
        mat = np.zeros((self.alphabet.size, blocks.size))
        np.add.at(mat, (self.origin.astype(np.intp), inverse), self.probs)
        return mat, blocks

    def to_finite_joint(self):
        from .infometrics import FiniteJoint
        mat, blocks = self.matrix()
        return FiniteJoint(mat, x_support=list(self.alphabet.symbols), y_support=blocks.tolist())


def _window_check(u: SymbolSequence, span: int, what: str) -> int:
    if span < 1:
        raise ValidationError("block length must be >= 1")
    if len(u) < span:
        raise ValidationError(f"window of length {len(u)} is shorter than {what} = {span}")
    return len(u) - span + 1


def _normalize(totals: np.ndarray, weighting: Weighting, start: int, count: int) -> np.ndarray:
    if weighting.kind == "cesaro":
        return totals / count
    return totals / weighting.weights(start, count).sum()


def block_distribution(u: SymbolSequence, m: int, weighting=CESARO) -> BlockDistribution:
    """Weighted frequency of each length-``m`` block over positions ``0..len(u)-m``."""
    weighting = Weighting.coerce(weighting)
    m = int(m)
    count = _window_check(u, m, "block length m")
    _check_block_fits(u.alphabet, m)
    keys = encode_blocks(u.codes, u.alphabet.size, m, count)
    w = weighting.weights(u.origin_offset, count)
    codes, totals = _tally(keys, w, u.alphabet.size ** m)
    return BlockDistribution(m, u.alphabet, codes, _normalize(totals, weighting, u.origin_offset, count),
                             weighting, len(u), count)


def joint_block_distribution(u: SymbolSequence, g: int, m: int, weighting=CESARO,
                             n_positions: int | None = None) -> JointDistribution:
    """Weighted frequency of ``(u_i = a, u_{i+g}^{i+g+m-1} = q)`` over ``i = 0..len(u)-g-m``.

    ``n_positions`` restricts the sum to the first positions, which lets
    different ``(g, m)`` be compared on one common index range.
    """
    weighting = Weighting.coerce(weighting)
    g, m = int(g), int(m)
    if g < 0:
        raise ValidationError("gap must be >= 0")
    count = _window_check(u, g + m, "g + m")
    if n_positions is not None:
        if not 1 <= n_positions <= count:
            raise ValidationError(f"n_positions must be in [1, {count}]")
        count = int(n_positions)
    _check_block_fits(u.alphabet, m + 1)
    k = u.alphabet.size
    blocks = encode_blocks(u.codes, k, m, count, offset=g)
    keys = u.codes[:count].astype(np.int64) * (k ** m) + blocks
    w = weighting.weights(u.origin_offset, count)
    pairs, totals = _tally(keys, w, k ** (m + 1))
    origin, block = np.divmod(pairs, k ** m)
    start = u.origin_offset

    origin_codes, origin_totals = _tally(u.codes[:count].astype(np.int64), w, k)
    origin_marginal = np.zeros(k)
    origin_marginal[origin_codes] = _normalize(origin_totals, weighting, start, count)
    block_codes, block_totals = _tally(blocks, w, k ** m)
    return JointDistribution(g, m, u.alphabet, origin, block,
                             _normalize(totals, weighting, start, count),
                             weighting, len(u), count, origin_marginal,
                             (block_codes, _normalize(block_totals, weighting, start, count)))


def _weighted_sum(values: np.ndarray, weights: np.ndarray | None):
    """Sum in fixed-size chunks combined left to right.

    Chunk boundaries do not depend on thread count, so the result is
    reproducible bit for bit; integer inputs are summed exactly.
    """
    if weights is None and values.dtype.kind in "iu":
        return int(values.sum(dtype=np.int64))
    total = 0.0
    for lo in range(0, values.size, CHUNK):
        part = values[lo:lo + CHUNK]
        if weights is not None:
            part = part * weights[lo:lo + CHUNK]
        total += part.sum()
    return total


def lagged_product_mean(u: SymbolSequence, lags, weighting=CESARO, conjugate_origin: bool = False):
    """Weighted mean of ``label(u_i) * prod_r label(u_{i+r})`` over valid ``i``.

    Shared by :func:`autocovariance` and the Chowla correlation so that the
    single-lag case of both is the same computation.
    """
    weighting = Weighting.coerce(weighting)
    lags = [int(r) for r in lags]
    span = max(lags, default=0)
    if span >= len(u):
        raise ValidationError(f"lag {span} must be smaller than the window length {len(u)}")
    count = len(u) - span
    lab = u.labels
    prod = np.conj(lab[:count]) if conjugate_origin and np.iscomplexobj(lab) else lab[:count].copy()
    for r in lags:
        prod = prod * lab[r:r + count]
    w = weighting.weights(u.origin_offset, count)
    total = _weighted_sum(prod, w)
    norm = count if w is None else _weighted_sum(w, None)
    value = total / norm
    if isinstance(value, complex) or np.iscomplexobj(value):
        return complex(value)
    return float(value)


def autocovariance(u: SymbolSequence, lag: int, weighting=CESARO):
    """Weighted mean of ``label(u_{i+lag}) * conj(label(u_i))``.

    Returns a float for real alphabets and a complex number otherwise.
    """
    lag = int(lag)
    if lag < 0:
        raise ValidationError("lag must be >= 0")
    if lag >= len(u):
        raise ValidationError(f"lag {lag} must be smaller than the window length {len(u)}")
    return lagged_product_mean(u, [lag], weighting, conjugate_origin=True)
