"""Closed-form success probabilities of the earlier iterative concentration scheme.

The baseline scheme concentrates a three-photon polarization W state in two
steps, each of which may be repeated; round n of step 1 and round m of step 2
succeed with probabilities whose denominators are chains of factors
x^(2^k) + y^(2^k). Raw powers like that underflow double precision near
n = 10, so each chain factor is evaluated through the ratio
s^(2^k) = (min/max)^(2^k), carried by repeated squaring; the ratio underflows
gracefully to 0 exactly when the true term is negligible.

The four-curve sweep compares round-capped totals of the baseline scheme
(curves A, B, C) against the one-shot circuit's 3*gamma^2 (curve D) over the
admissible range of the leading coefficient.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .protocols import WCoefficients, analytic_total_probability

FIG_BETA = 1.0 / math.sqrt(3.0)
ALPHA_LO = math.sqrt(1.0 / 3.0)
ALPHA_HI = math.sqrt(2.0 / 3.0)

DEFAULT_CAPS: Mapping[str, tuple[int, int]] = {"A": (1, 1), "B": (3, 3), "C": (5, 5)}
DEFAULT_GRID_POINTS = 200
GRID_MARGIN = 1e-6


class DomainError(ValueError):
    """Parameters outside the admissible coefficient range."""


@dataclass(frozen=True)
class PriorEcpParams:
    """Moduli of the three coefficients plus the round caps for both steps."""

    alpha: float
    beta: float
    gamma: float
    iterations_step1: int = 25
    iterations_step2: int = 25

    def __post_init__(self) -> None:
        for name, v in (("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)):
            if not (0.0 < v < 1.0):
                raise DomainError(f"{name} = {v} must lie in (0, 1)")
        total = self.alpha**2 + self.beta**2 + self.gamma**2
        if abs(total - 1.0) > 1e-9:
            raise DomainError(f"squared moduli sum to {total}, not 1")
        if self.iterations_step1 < 1 or self.iterations_step2 < 1:
            raise DomainError("round caps must be positive")


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    curve: str
    probability: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.probability <= 1.0):
            raise DomainError(f"probability {self.probability} outside [0, 1]")


@dataclass(frozen=True)
class SweepTable:
    rows: tuple[SweepRow, ...]

    def curve(self, curve_id: str) -> tuple[SweepRow, ...]:
        return tuple(r for r in self.rows if r.curve == curve_id)


def _chain(x2: float, y2: float, n: int) -> tuple[float, float, float]:
    """Stable pieces of the n-factor chain prod_{j<n} (x^(2^(j+1)) + y^(2^(j+1))).

    Returns (s^(2^(n-1)), prod_{j<n} (1 + s^(2^j)), max(x2, y2)) where
    s = min(x2, y2) / max(x2, y2); the chain itself equals
    max^(2^n - 1) * prod, which is never materialized.
    """
    hi = max(x2, y2)
    s = min(x2, y2) / hi
    prod = 1.0
    sj = s
    last = sj
    for _ in range(n):
        prod *= 1.0 + sj
        last = sj
        sj = sj * sj
    return last, prod, hi


def prior_step1_prob(p: PriorEcpParams, n: int) -> float:
    """Success probability of round n of the baseline scheme's first step."""
    if n < 1:
        raise DomainError("round index must be >= 1")
    a2, b2, g2 = p.alpha**2, p.beta**2, p.gamma**2
    s_pow, prod, hi = _chain(a2, b2, n)
    return (g2 + 2.0 * b2) / b2 * hi * s_pow / prod


def prior_step2_prob(p: PriorEcpParams, m: int) -> float:
    """Success probability of round m of the baseline scheme's second step."""
    if m < 1:
        raise DomainError("round index must be >= 1")
    b2, g2 = p.beta**2, p.gamma**2
    s_pow, prod, hi = _chain(g2, b2, m)
    return 3.0 * hi * s_pow / prod / (g2 + 2.0 * b2)


def prior_total_prob(p: PriorEcpParams) -> float:
    """Round-capped total: (sum of step-1 rounds) * (sum of step-2 rounds).

    The exact total sums both series to infinity; the doubly exponential
    exponents make the default caps of 25 agree with the limit to well below
    1e-3 everywhere on the sweep domain.
    """
    s1 = sum(prior_step1_prob(p, n) for n in range(1, p.iterations_step1 + 1))
    s2 = sum(prior_step2_prob(p, m) for m in range(1, p.iterations_step2 + 1))
    return s1 * s2


def _current_curve_label(caps: Mapping[str, tuple[int, int]]) -> str:
    last = max(caps) if caps else "@"  # "@" precedes "A"
    return chr(ord(last) + 1)


def default_alpha_grid(points: int = DEFAULT_GRID_POINTS) -> tuple[float, ...]:
    """Uniform alpha grid over the open admissible interval.

    Endpoints violate the strict ordering of the coefficients, so the grid
    approaches them to within GRID_MARGIN instead of touching them.
    """
    if points < 1:
        raise DomainError("grid needs at least one point")
    lo = ALPHA_LO + GRID_MARGIN
    hi = ALPHA_HI - GRID_MARGIN
    if points == 1:
        return (lo,)
    step = (hi - lo) / (points - 1)
    return tuple(lo + i * step for i in range(points))


def sweep_point(
    alpha: float, caps_per_curve: Mapping[str, tuple[int, int]] | None = None
) -> dict[str, float]:
    """All curve values at one alpha, with beta pinned to 1/sqrt(3).

    Curves named in ``caps_per_curve`` are round-capped baseline totals; one
    extra curve (next letter up, D by default) is the one-shot circuit's
    closed form.

    Raises:
        DomainError: gamma^2 <= 0 at this alpha, or the strict ordering
            alpha > beta > gamma fails.
    """
    caps = DEFAULT_CAPS if caps_per_curve is None else caps_per_curve
    beta = FIG_BETA
    gamma2 = 1.0 - alpha * alpha - beta * beta
    if gamma2 <= 0.0:
        raise DomainError(f"alpha = {alpha} leaves no weight for gamma")
    gamma = math.sqrt(gamma2)
    if not (alpha > beta > gamma):
        raise DomainError(f"alpha = {alpha} violates the strict coefficient ordering")

    values = {}
    for label, (cap1, cap2) in caps.items():
        params = PriorEcpParams(alpha, beta, gamma,
                                iterations_step1=cap1, iterations_step2=cap2)
        values[label] = prior_total_prob(params)
    coeffs = WCoefficients.from_squared((alpha * alpha, beta * beta, gamma2))
    values[_current_curve_label(caps)] = analytic_total_probability(coeffs)
    return values


def figure3_sweep(
    alpha_grid: Sequence[float] | None = None,
    caps_per_curve: Mapping[str, tuple[int, int]] | None = None,
) -> SweepTable:
    """Four-curve comparison table over the alpha grid.

    Rows are ordered by grid position, then curve label. Any grid alpha
    outside the admissible open interval raises DomainError; callers that
    prefer skipping bad points should iterate ``sweep_point`` themselves.
    """
    grid = default_alpha_grid() if alpha_grid is None else tuple(alpha_grid)
    rows = []
    for alpha in grid:
        for label, prob in sorted(sweep_point(alpha, caps_per_curve).items()):
            rows.append(SweepRow(alpha=alpha, curve=label, probability=prob))
    return SweepTable(rows=tuple(rows))
