"""Generators for the sequences and processes studied by the toolkit.

Everything here is a pure function of its arguments: random generators
draw from numpy's counter-based Philox bit generator keyed by a 64-bit
seed, so a given ``(parameters, seed)`` always yields the same bytes.
"""
from __future__ import annotations

import numpy as np

from .exceptions import ValidationError
from .sequences import Alphabet, SkewRealization, SymbolSequence
from .sieve import liouville_codes

PRNG_NAME = "numpy.random.Philox(key=seed)"


def _rng(seed: int) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValidationError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(key=seed))


def _check_length(n) -> int:
    n = int(n)
    if n < 1:
        raise ValidationError(f"length must be >= 1, got {n}")
    return n


def gen_iid(alphabet: Alphabet, probs, n: int, seed: int) -> SymbolSequence:
    """Independent draws with probabilities ``probs`` (one per alphabet symbol).

    Each symbol is the first code whose cumulative probability exceeds a
    uniform double from the Philox stream.
    """
    n = _check_length(n)
    probs = np.asarray(probs, dtype=np.float64)
    if probs.ndim != 1 or probs.size != alphabet.size:
        raise ValidationError(
            f"probability vector has length {probs.size}, alphabet has {alphabet.size} symbols"
        )
    if np.any(probs < 0):
        raise ValidationError("probabilities must be non-negative")
    if abs(probs.sum() - 1.0) > 1e-9:
        raise ValidationError(f"probabilities sum to {probs.sum()!r}, not 1")
    cdf = np.cumsum(probs)
    cdf[-1] = np.inf
    draws = _rng(seed).random(n)
    codes = np.searchsorted(cdf, draws, side="right").astype(np.uint8)
    return SymbolSequence(alphabet, codes, meta={"prng": PRNG_NAME, "seed": int(seed)})


def gen_liouville(n: int, variant: str = "liouville", threads: int = 1) -> SymbolSequence:
    """Liouville (or Moebius) values at ``k = 1..n``.

    Window position ``j`` holds ``k = j + 1``, so logarithmic weighting
    gives ``lambda(k)`` the weight ``1/k``.
    """
    n = _check_length(n)
    if variant == "liouville":
        return SymbolSequence(Alphabet.pm1(), liouville_codes(n, threads=threads))
    if variant == "moebius":
        return SymbolSequence(Alphabet.moebius(), liouville_codes(n, moebius=True, threads=threads))
    raise ValidationError(f"unknown variant {variant!r}; expected 'liouville' or 'moebius'")


def gen_rotation_coding(alpha: float, x0: float, n: int, labels=(0, 1),
                        width: float = 0.5) -> SymbolSequence:
    """Code 0 when ``frac(x0 + j*alpha)`` lies in ``[0, width)``, else code 1.

    The default ``width=1/2`` codes the two half-circles.  For irrational
    ``alpha`` that coding has ``2m`` distinct ``m``-blocks; ``width=1-alpha``
    gives the Sturmian coding with ``m+1``.
    """
    n = _check_length(n)
    if not (0 <= alpha < 1 and 0 <= x0 < 1):
        raise ValidationError("alpha and x0 must lie in [0, 1)")
    if not 0 < width <= 1:
        raise ValidationError("width must lie in (0, 1]")
    j = np.arange(n, dtype=np.float64)
    # reduce j*alpha before adding x0 so large j keep full precision
    phase = np.mod(x0 + np.mod(j * alpha, 1.0), 1.0)
    codes = (phase >= width).astype(np.uint8)
    return SymbolSequence(Alphabet(tuple(labels)), codes)


def doubling(u: SymbolSequence) -> SymbolSequence:
    """``out[2j] = out[2j+1] = u[j]``."""
    return SymbolSequence(u.alphabet, np.repeat(u.codes, 2), 2 * u.origin_offset)


def pointwise_product(u: SymbolSequence, v: SymbolSequence) -> SymbolSequence:
    """Label-wise product; the output alphabet is the set of realized products."""
    if len(u) != len(v):
        raise ValidationError(f"length mismatch: {len(u)} != {len(v)}")
    table = np.array([[a * b for b in v.alphabet.labels] for a in u.alphabet.labels])
    pair = u.codes.astype(np.int64) * v.alphabet.size + v.codes
    used = np.unique(pair)
    values = table.ravel()[used]
    realized = sorted(set(values.tolist()), key=lambda z: (-z.real, -z.imag))
    alphabet = Alphabet(tuple(realized))
    remap = np.zeros(table.size, dtype=np.uint8)
    for p, val in zip(used, values):
        remap[p] = realized.index(val)
    return SymbolSequence(alphabet, remap[pair], u.origin_offset)


def skew_process(x: SymbolSequence, y: SymbolSequence) -> SkewRealization:
    """Advance the source ``x`` only when the clock ``y`` ticks: ``x'_j = x[K_j]``.

    ``K_0 = 0`` and ``K_{j+1} = K_j + y_j``; ``x`` must cover ``K_{len(y)}``.
    """
    if x.alphabet.size != 2:
        raise ValidationError("skew_process needs a two-symbol source x")
    ylab = y.labels
    if not np.all((ylab == 0) | (ylab == 1)):
        raise ValidationError("the driver y must be {0,1}-valued")
    steps = ylab.real.astype(np.int64) if np.iscomplexobj(ylab) else ylab.astype(np.int64)
    if not steps.any():
        raise ValidationError("driver y is identically 0: the clock K_n never diverges")
    clock = np.zeros(len(y) + 1, dtype=np.int64)
    np.cumsum(steps, out=clock[1:])
    if clock[-1] >= len(x):
        raise ValidationError(
            f"source x too short: need at least {clock[-1] + 1} symbols, got {len(x)}"
        )
    x_prime = SymbolSequence(x.alphabet, x.codes[clock[:-1]])
    return SkewRealization(x_prime=x_prime, clock=clock, y=y, x=x)


def gen_skew_alternating(n: int, i0: int, seed: int) -> SymbolSequence:
    """Fair +-1 bits, each repeated twice, read from phase ``i0``.

    With ``Z_j = B_{floor(j/2)}`` the output is ``Y_j = Z_{j + i0}``.
    """
    n = _check_length(n)
    if i0 not in (0, 1):
        raise ValidationError(f"i0 must be 0 or 1, got {i0!r}")
    bits = _rng(seed).integers(0, 2, size=(n + 2) // 2 + 1, dtype=np.uint8)
    z = np.repeat(bits, 2)
    return SymbolSequence(Alphabet.pm1(), z[i0:i0 + n],
                          meta={"prng": PRNG_NAME, "seed": int(seed)})


def difference_indicator(u: SymbolSequence) -> SymbolSequence:
    """Binary sequence with ``out[j] = 1`` iff ``u[j] != u[j+1]``."""
    if len(u) < 2:
        raise ValidationError("difference_indicator needs a window of length >= 2")
    codes = (u.codes[:-1] != u.codes[1:]).astype(np.uint8)
    return SymbolSequence(Alphabet.binary(), codes, u.origin_offset)


def relabel(u: SymbolSequence, labels) -> SymbolSequence:
    """Same codes under a new label set, e.g. ``{0,1}`` to ``{+1,-1}``."""
    return SymbolSequence(Alphabet(tuple(labels)), u.codes, u.origin_offset, u.meta)
