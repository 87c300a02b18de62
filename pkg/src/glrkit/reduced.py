"""Evidence from reduced data: dichotomous test results and p-values.

When only the outcome of a level-alpha test is reported, the likelihood of
the reduced datum "reject / not reject" is the power function evaluated over
each hypothesis, and the ratio of its suprema measures the evidence.  Four
archetype power shapes admit closed forms; a tabulated kind covers real
power curves that violate the archetype assumptions.  For a reported
p-value from a normal shift family there is a closed form as well
(:func:`glr_from_pvalue_normal`).

Not provided: a ratio built by maximizing the fixed-level rejection GLR over
significance levels above (or below) the observed p-value.  Once the level
is chosen from the observed p-value, the rejection indicator is a different
statistic and the fixed-level closed forms no longer describe it; the two
candidate constructions also disagree with each other, so neither is a
trustworthy summary.  Use :func:`glr_from_pvalue_normal` instead, which
treats the p-value itself as the datum.

These calculators are a fallback: when the raw data are available, compute
the full-data ratio instead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .regions import Region

__all__ = [
    "PowerFunction",
    "TestOutcome",
    "glr_from_test",
    "glr_from_pvalue_normal",
    "glr_from_pvalue_general",
]


class TestOutcome(enum.IntEnum):
    NOT_REJECTED = 0
    REJECTED = 1


@dataclass(frozen=True, eq=False)
class PowerFunction:
    """Rejection probability of a test as a function of the parameter.

    Archetype kinds encode the monotone shapes behind the closed forms:

    - ``one_sided``: power increasing from 0 through alpha at the boundary
      up to 1 (composite null on the low side).
    - ``point_null_one_sided``: same shape, point null at the boundary.
    - ``two_sided_point_null``: power alpha at the null point, increasing to
      1 toward both ends.
    - ``equivalence``: power peaking at pi_max inside the band, alpha at the
      band edges, falling to 0 outside.
    - ``tabulated``: explicit (theta, power) table with the two hypothesis
      regions; suprema and infima are taken over the covered grid points.
    """

    kind: str
    alpha: float
    pi_max: float | None = None
    thetas: np.ndarray | None = None
    powers: np.ndarray | None = None
    h1: Region | None = None
    h2: Region | None = None

    _KINDS = (
        "one_sided",
        "point_null_one_sided",
        "two_sided_point_null",
        "equivalence",
        "tabulated",
    )

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown power-function kind {self.kind!r}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.kind == "equivalence":
            if self.pi_max is None or not self.alpha < self.pi_max <= 1.0:
                raise ValueError(
                    f"equivalence needs alpha < pi_max <= 1, got {self.pi_max}"
                )
        if self.kind == "tabulated":
            if self.thetas is None or self.powers is None:
                raise ValueError("tabulated kind needs theta and power arrays")
            if self.h1 is None or self.h2 is None:
                raise ValueError("tabulated kind needs both hypothesis regions")
            if (
                len(self.h1.space.params) != 1
                or self.h1.space.names != self.h2.space.names
            ):
                raise ValueError("hypothesis regions must share one scalar parameter")
            object.__setattr__(self, "thetas", np.asarray(self.thetas, dtype=float))
            object.__setattr__(self, "powers", np.asarray(self.powers, dtype=float))
            if self.thetas.shape != self.powers.shape or self.thetas.ndim != 1:
                raise ValueError("theta and power arrays must be equal-length 1-D")
            if np.any(self.powers < 0) or np.any(self.powers > 1):
                raise ValueError("power values must lie in [0, 1]")

    @classmethod
    def one_sided(cls, alpha: float) -> "PowerFunction":
        return cls("one_sided", alpha)

    @classmethod
    def point_null_one_sided(cls, alpha: float) -> "PowerFunction":
        return cls("point_null_one_sided", alpha)

    @classmethod
    def two_sided_point_null(cls, alpha: float) -> "PowerFunction":
        return cls("two_sided_point_null", alpha)

    @classmethod
    def equivalence(cls, alpha: float, pi_max: float) -> "PowerFunction":
        return cls("equivalence", alpha, pi_max=pi_max)

    @classmethod
    def tabulated(cls, thetas, powers, h1: Region, h2: Region) -> "PowerFunction":
        # alpha is unused for tabulated curves; 0.5 just satisfies validation
        return cls("tabulated", 0.5, thetas=thetas, powers=powers, h1=h1, h2=h2)


def _tabulated_ratio(pf: PowerFunction, t: int) -> float:
    name = pf.h1.space.params[0].name
    mask1 = np.array([pf.h1.contains({name: x}) for x in pf.thetas])
    mask2 = np.array([pf.h2.contains({name: x}) for x in pf.thetas])
    if not mask1.any() or not mask2.any():
        raise ValueError("tabulated grid does not cover both hypothesis regions")
    if t == 1:
        num = float(pf.powers[mask2].max())
        den = float(pf.powers[mask1].max())
    else:
        num = 1.0 - float(pf.powers[mask2].min())
        den = 1.0 - float(pf.powers[mask1].min())
    if den == 0.0:
        return math.inf if num > 0.0 else 1.0
    return num / den


def glr_from_test(pf: PowerFunction, t: int) -> float:
    """Likelihood ratio of the alternative to the null given only the test
    outcome t (1 = rejected, 0 = not rejected)."""
    if t not in (0, 1):
        raise ValueError(f"test outcome must be 0 or 1, got {t}")
    if pf.kind == "one_sided":
        return 1.0 / pf.alpha if t == 1 else 1.0 - pf.alpha
    if pf.kind in ("point_null_one_sided", "two_sided_point_null"):
        return 1.0 / pf.alpha if t == 1 else 1.0
    if pf.kind == "equivalence":
        return pf.pi_max / pf.alpha if t == 1 else 1.0 - pf.alpha
    return _tabulated_ratio(pf, t)


def glr_from_pvalue_normal(u: float) -> float:
    """Evidence in a one-sided p-value from a normal shift family.

    For the hypotheses "shift <= 0" versus "shift > 0" and the p-value
    1 - Phi(statistic), the ratio of the p-value density suprema is
    exp(+q^2/2) for u <= 0.5 and exp(-q^2/2) for u > 0.5, q = Phi^{-1}(1-u).
    Values above 1 favor the positive-shift hypothesis.
    """
    if not 0.0 < u < 1.0:
        raise ValueError(f"p-value must be in (0, 1), got {u}")
    q = float(ndtri(1.0 - u))
    half_q2 = q * q / 2.0
    return math.exp(half_q2) if u <= 0.5 else math.exp(-half_q2)


def glr_from_pvalue_general(
    u: float,
    h1: tuple[float, float],
    h2: tuple[float, float],
    scale: float = 1.0,
) -> float:
    """Evidence of h2 over h1 in a p-value from a normal shift family.

    ``h1`` and ``h2`` are closed intervals for the mean, and ``scale`` maps
    the mean to the standardized shift (sqrt(n)/sigma for a one-sample mean).
    The p-value density under shift s is proportional to phi(q - s) with
    q = Phi^{-1}(1-u), so each supremum is phi evaluated at the distance from
    q to the scaled interval; sign regions reproduce
    :func:`glr_from_pvalue_normal` exactly, and the two-sample pooled case is
    the same expression under its own scale.
    """
    if not 0.0 < u < 1.0:
        raise ValueError(f"p-value must be in (0, 1), got {u}")
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    q = float(ndtri(1.0 - u))

    def dist(region: tuple[float, float]) -> float:
        lo, hi = region
        if math.isnan(lo) or math.isnan(hi) or lo > hi:
            raise ValueError(f"invalid mean interval [{lo}, {hi}]")
        slo = lo * scale if not math.isinf(lo) else -math.inf
        shi = hi * scale if not math.isinf(hi) else math.inf
        if q < slo:
            return slo - q
        if q > shi:
            return q - shi
        return 0.0

    d1 = dist(h1)
    d2 = dist(h2)
    return math.exp((d1 * d1 - d2 * d2) / 2.0)
