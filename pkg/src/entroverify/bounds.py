"""Closed-form continuity bounds as pure scalar functions (base-2 logs).

Validity ranges are enforced strictly: out-of-range parameters raise instead
of clamping, so a verification run can never silently test the wrong regime.
The convention 0*log(0) = 0 applies at eps in {0, 1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operator_core import ValidationError

FAMILIES = ("afw", "fannes_audenaert", "renyi_down", "tsallis_down", "marwah_up")


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise ValidationError(f"eps must be in [0, 1], got {eps}")
    return eps


def _xlog2x(x: float) -> float:
    return 0.0 if x == 0.0 else x * np.log2(x)


def binary_entropy(p: float) -> float:
    """s2(p) = -p log2 p - (1-p) log2 (1-p)."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"probability must be in [0, 1], got {p}")
    return -_xlog2x(p) - _xlog2x(1.0 - p)


def afw_bound(eps: float, d: int) -> float:
    """Alicki-Fannes-Winter bound 2 eps log d + (eps+1) log(eps+1) - eps log eps."""
    eps = _check_eps(eps)
    if d < 1:
        raise ValidationError(f"dimension must be >= 1, got {d}")
    return 2.0 * eps * np.log2(d) + _xlog2x(eps + 1.0) - _xlog2x(eps)


def fannes_audenaert(T: float, d: int) -> float:
    """Fannes-Audenaert entropy bound T log(d-1) + s2(T)."""
    T = _check_eps(T)
    if d < 2:
        raise ValidationError(f"dimension must be >= 2, got {d}")
    return T * np.log2(d - 1) + binary_entropy(T)


@dataclass(frozen=True)
class MarwahParams:
    """Dual order beta with 1/alpha + 1/beta = 2, used for alpha > 1."""

    alpha: float

    def __post_init__(self):
        if self.alpha <= 1.0:
            raise ValidationError(f"the dual order is only used for alpha > 1, got {self.alpha}")

    @property
    def beta(self) -> float:
        return self.alpha / (2.0 * self.alpha - 1.0)


def renyi_down_bound(alpha: float, d: int, eps: float) -> float:
    """Continuity bound for the sandwiched Renyi down conditional entropy.

    alpha in [1/2, 1): log(1+eps) + log(1 + eps^a d^(2(1-a))) / (1-a).
    alpha > 1: a/(a-1) log(1+eps), independent of d.
    """
    eps = _check_eps(eps)
    alpha = float(alpha)
    if d < 1:
        raise ValidationError(f"dimension must be >= 1, got {d}")
    if alpha == 1.0 or alpha < 0.5:
        raise ValidationError(f"alpha must be in [1/2, 1) or (1, inf), got {alpha}")
    if alpha < 1.0:
        return float(
            np.log2(1.0 + eps)
            + np.log2(1.0 + eps ** alpha * d ** (2.0 * (1.0 - alpha))) / (1.0 - alpha)
        )
    return float(alpha / (alpha - 1.0) * np.log2(1.0 + eps))


def tsallis_down_bound(alpha: float, d: int, eps: float) -> float:
    """Continuity bound for the sandwiched Tsallis down conditional entropy.

    alpha in [1/2, 1): ((1+eps^a)(1+eps)^(1-a) - 1) d^(1-a) / (1-a).
    alpha in (1, 2): (((1+eps)^(a-1)-1) d^(a-1) + eps (1+eps)^(a-1) d^(1-a)) / (a-1).
    """
    eps = _check_eps(eps)
    alpha = float(alpha)
    if d < 1:
        raise ValidationError(f"dimension must be >= 1, got {d}")
    if alpha < 0.5 or alpha == 1.0 or alpha >= 2.0:
        raise ValidationError(f"alpha must be in [1/2, 1) or (1, 2), got {alpha}")
    if alpha < 1.0:
        return float(
            ((1.0 + eps ** alpha) * (1.0 + eps) ** (1.0 - alpha) - 1.0)
            * d ** (1.0 - alpha)
            / (1.0 - alpha)
        )
    return float(
        (
            ((1.0 + eps) ** (alpha - 1.0) - 1.0) * d ** (alpha - 1.0)
            + eps * (1.0 + eps) ** (alpha - 1.0) * d ** (1.0 - alpha)
        )
        / (alpha - 1.0)
    )


def marwah_up_bound(alpha: float, d: int, eps: float) -> float:
    """Uniform continuity bound for the optimized Renyi up conditional entropy.

    For alpha > 1 the bound is the alpha < 1 expression evaluated at the dual
    order beta = alpha/(2 alpha - 1) with sqrt(2 eps) in place of eps.
    """
    eps = _check_eps(eps)
    alpha = float(alpha)
    if d < 1:
        raise ValidationError(f"dimension must be >= 1, got {d}")
    if alpha < 0.5 or alpha == 1.0:
        raise ValidationError(f"alpha must be in [1/2, 1) or (1, inf), got {alpha}")

    def branch(a: float, e: float) -> float:
        inner = e ** a * d ** (2.0 * (1.0 - a)) + 1.0
        if e > 0:
            inner -= e / (1.0 + e) ** (1.0 - a)
        return float(np.log2(1.0 + e) + np.log2(inner) / (1.0 - a))

    if alpha < 1.0:
        return branch(alpha, eps)
    beta = MarwahParams(alpha).beta
    return branch(beta, np.sqrt(2.0 * eps))


@dataclass(frozen=True)
class BoundSpec:
    """One bound family instance (family, alpha, d, eps)."""

    family: str
    alpha: float
    d: int
    eps: float

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown bound family {self.family!r}; choose from {FAMILIES}")
        _check_eps(self.eps)
        if self.d < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.d}")

    def value(self) -> float:
        return bound_value(self)


def bound_value(spec: BoundSpec) -> float:
    """Evaluate the bound a BoundSpec identifies (range checks included)."""
    if spec.family == "afw":
        return afw_bound(spec.eps, spec.d)
    if spec.family == "fannes_audenaert":
        return fannes_audenaert(spec.eps, spec.d)
    if spec.family == "renyi_down":
        return renyi_down_bound(spec.alpha, spec.d, spec.eps)
    if spec.family == "tsallis_down":
        return tsallis_down_bound(spec.alpha, spec.d, spec.eps)
    return marwah_up_bound(spec.alpha, spec.d, spec.eps)
