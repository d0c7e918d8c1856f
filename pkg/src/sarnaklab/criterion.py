"""Finite-window Sarnak criterion, Chowla correlations and orthogonality averages.

For a +-1 window ``u``, gap ``g`` and block length ``m``, the defect of a
block ``q`` is

    eps_g(q) = | 1/2 * P[u_{i+g}^{i+g+m-1} = q] - P[u_i = +1, u_{i+g}^{i+g+m-1} = q] |

with probabilities taken over the starting positions ``i = 0..n-g-m``
(Cesaro or logarithmic weights).  Blocks always sit in the future of the
origin symbol.  A gap certifies a level ``eps`` when the sum of defects
stays below ``eps`` for every ``m <= m_max``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .empirics import (
    CESARO,
    JointDistribution,
    Weighting,
    _weighted_sum,
    decode_block,
    joint_block_distribution,
    lagged_product_mean,
)
from .exceptions import NotCenteredWarning, ValidationError
from .infometrics import conditional_entropy, pinsker_bounds
from .sequences import SymbolSequence

BALANCE_TOL = 0.05


def _require_pm1(u: SymbolSequence) -> int:
    if not u.alphabet.is_pm1:
        raise ValidationError(
            f"criterion: expected a +-1 alphabet, got {{{u.alphabet.format_labels()}}}"
        )
    return u.alphabet.code_of(1)


@dataclass(frozen=True, eq=False)
class EpsilonTable:
    """Per-block defects ``eps_g(q)`` for one ``(g, m)``."""

    g: int
    m: int
    entries: dict
    total: float
    weighting: Weighting
    window_length: int
    n_positions: int
    block_mass: dict
    p_plus: float
    block_labels: dict = field(default_factory=dict, repr=False)

    @property
    def centered(self) -> bool:
        return abs(self.p_plus - 0.5) <= BALANCE_TOL

    def by_label(self) -> dict[str, float]:
        return {self.block_labels[q]: e for q, e in self.entries.items()}


def _epsilon_from_joint(joint: JointDistribution, plus: int) -> EpsilonTable:
    blocks, block_mass = joint.block_marginal
    plus_mass = np.zeros(blocks.size)
    sel = joint.origin == plus
    plus_mass[np.searchsorted(blocks, joint.block[sel])] = joint.probs[sel]
    eps = np.abs(0.5 * block_mass - plus_mass)
    alpha = joint.alphabet
    labels = {int(q): alpha.format_block(decode_block(int(q), alpha.size, joint.m))
              for q in blocks.tolist()}
    return EpsilonTable(
        g=joint.g,
        m=joint.m,
        entries=dict(zip(blocks.tolist(), eps.tolist())),
        total=float(eps.sum()),
        weighting=joint.weighting,
        window_length=joint.window_length,
        n_positions=joint.n_positions,
        block_mass=dict(zip(blocks.tolist(), block_mass.tolist())),
        p_plus=float(joint.origin_marginal[plus]),
        block_labels=labels,
    )


def _check_gap(g) -> int:
    g = int(g)
    if g < 1:
        raise ValidationError(f"gap must be >= 1, got {g}")
    return g


def epsilon_table(u: SymbolSequence, g: int, m: int, weighting=CESARO,
                  n_positions: int | None = None) -> EpsilonTable:
    """Defects ``eps_g(q)`` of every ``m``-block ``q`` occurring at distance ``g``."""
    plus = _require_pm1(u)
    g = _check_gap(g)
    joint = joint_block_distribution(u, g, m, weighting, n_positions=n_positions)
    table = _epsilon_from_joint(joint, plus)
    if not table.centered:
        warnings.warn(_not_centered_message(table.p_plus), NotCenteredWarning, stacklevel=2)
    return table


def _not_centered_message(p_plus: float) -> str:
    return f"sequence not centered: P[X_0 = +1] = {p_plus:.6g}"


def entropy_gap(u: SymbolSequence, g: int, m: int, weighting=CESARO) -> float:
    """``1 - H(X_0 | X_g^{g+m-1})`` from the empirical joint, in bits."""
    plus = _require_pm1(u)
    g = _check_gap(g)
    joint = joint_block_distribution(u, g, m, weighting)
    p_plus = float(joint.origin_marginal[plus])
    if abs(p_plus - 0.5) > BALANCE_TOL:
        warnings.warn(_not_centered_message(p_plus), NotCenteredWarning, stacklevel=2)
    mat, _ = joint.matrix()
    return 1.0 - conditional_entropy(mat)


@dataclass(frozen=True, eq=False)
class ScanRow:
    g: int
    m: int
    epsilon_total: float
    entropy_gap: float
    info_gap: float
    tv_mid: float
    pinsker_lower: float
    pinsker_upper: float
    p_plus: float
    n_effective: int


@dataclass(frozen=True, eq=False)
class CriterionReport:
    """Results of :func:`criterion_scan`, ordered by ``(g, m)``."""

    rows: list
    gaps: list
    m_max: int
    eps: float
    weighting: Weighting
    window_length: int
    warnings: list = field(default_factory=list)

    @property
    def epsilon_totals(self) -> dict:
        return {(r.g, r.m): r.epsilon_total for r in self.rows}

    @property
    def entropy_gaps(self) -> dict:
        return {(r.g, r.m): r.entropy_gap for r in self.rows}

    @property
    def sup_totals(self) -> dict:
        """Largest defect total over ``m <= m_max``, per gap."""
        out = {}
        for r in self.rows:
            out[r.g] = max(out.get(r.g, 0.0), r.epsilon_total)
        return out

    @property
    def certified_gaps(self) -> list:
        return [g for g, s in self.sup_totals.items() if s < self.eps]

    @property
    def centered(self) -> bool:
        return not any("not centered" in w for w in self.warnings)


def scan_row(joint: JointDistribution, plus: int) -> ScanRow:
    table = _epsilon_from_joint(joint, plus)
    mat, _ = joint.matrix()
    bounds = pinsker_bounds(mat)
    return ScanRow(
        g=joint.g,
        m=joint.m,
        epsilon_total=table.total,
        entropy_gap=1.0 - conditional_entropy(mat),
        info_gap=bounds.info_gap,
        tv_mid=bounds.tv_mid,
        pinsker_lower=bounds.lower,
        pinsker_upper=bounds.upper,
        p_plus=table.p_plus,
        n_effective=joint.n_positions,
    )


def criterion_scan(u: SymbolSequence, g_list, m_max: int, eps: float,
                   weighting=CESARO) -> CriterionReport:
    """Defect totals and entropy gaps over the grid ``g in g_list``, ``1 <= m <= m_max``."""
    plus = _require_pm1(u)
    weighting = Weighting.coerce(weighting)
    gaps = sorted({_check_gap(g) for g in g_list})
    if not gaps:
        raise ValidationError("criterion: empty gap list")
    m_max = int(m_max)
    if m_max < 1:
        raise ValidationError("criterion: m_max must be >= 1")
    if len(u) < gaps[-1] + m_max:
        raise ValidationError(
            f"criterion: window of length {len(u)} is shorter than max(g) + m_max = {gaps[-1] + m_max}"
        )
    rows = [scan_row(joint_block_distribution(u, g, m, weighting), plus)
            for g in gaps for m in range(1, m_max + 1)]
    notes = []
    p_plus = rows[0].p_plus
    if abs(p_plus - 0.5) > BALANCE_TOL:
        notes.append(_not_centered_message(p_plus))
        warnings.warn(notes[-1], NotCenteredWarning, stacklevel=2)
    return CriterionReport(rows=rows, gaps=gaps, m_max=m_max, eps=float(eps),
                           weighting=weighting, window_length=len(u), warnings=notes)


def chowla_correlation(u: SymbolSequence, lags, weighting=CESARO) -> float:
    """Weighted mean of ``u_i * u_{i+r_1} * ... * u_{i+r_k}``."""
    _require_pm1(u)
    lags = [int(r) for r in lags]
    if not lags:
        raise ValidationError("chowla: at least one lag is required")
    if lags[0] < 1 or any(b <= a for a, b in zip(lags, lags[1:])):
        raise ValidationError("chowla: lags must be strictly increasing positive integers")
    return lagged_product_mean(u, lags, weighting)


def orthogonality_average(u: SymbolSequence, b: SymbolSequence, weighting=CESARO):
    """Weighted mean of ``label(b_i) * label(u_i)``."""
    if len(u) != len(b):
        raise ValidationError(f"ortho: length mismatch {len(u)} != {len(b)}")
    weighting = Weighting.coerce(weighting)
    prod = b.labels * u.labels
    w = weighting.weights(u.origin_offset, len(u))
    total = _weighted_sum(prod, w)
    value = total / (len(u) if w is None else _weighted_sum(w, None))
    if np.iscomplexobj(value) or isinstance(value, complex):
        return complex(value)
    return float(value)

