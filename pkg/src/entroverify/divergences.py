"""Relative entropies: Umegaki, sandwiched Renyi, sandwiched Tsallis, plain Tsallis.

The second argument of every divergence may be an unnormalized PSD operator
(identity-tensored marginals are the main use case); no silent normalization
is ever applied. Logarithmic quantities are base 2; +inf is returned as a
value, never raised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operator_core import (
    SUPPORT_RELATIVE_CUTOFF,
    ValidationError,
    asmatrix,
    hermitize,
)

SUPPORT_LEAK_ATOL = 1e-8


@dataclass(frozen=True)
class RenyiOrder:
    """Order parameter alpha with the sandwich exponent gamma = (1-alpha)/(2 alpha)."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValidationError(f"alpha must be positive, got {self.alpha}")
        if self.alpha == 1.0:
            raise ValidationError(
                "alpha = 1 is the Umegaki limit; use relative_entropy instead"
            )

    @property
    def gamma(self) -> float:
        return (1.0 - self.alpha) / (2.0 * self.alpha)


def as_order(order) -> RenyiOrder:
    if isinstance(order, RenyiOrder):
        return order
    return RenyiOrder(float(order))


def _spectral(matrix: np.ndarray):
    w, V = np.linalg.eigh(hermitize(matrix))
    return w, V


def _support_mask(w: np.ndarray) -> np.ndarray:
    cutoff = SUPPORT_RELATIVE_CUTOFF * max(float(w.max()), 0.0)
    return w > cutoff


def _power_on_support(matrix: np.ndarray, t: float) -> np.ndarray:
    w, V = _spectral(matrix)
    mask = _support_mask(w)
    powered = np.zeros_like(w)
    powered[mask] = w[mask] ** t
    return (V * powered) @ V.conj().T


def _support_contained(rho: np.ndarray, sigma: np.ndarray) -> bool:
    """Projector-inclusion test ||(I - Pi_sigma) Pi_rho|| <= 1e-8."""
    wr, Vr = _spectral(rho)
    ws, Vs = _spectral(sigma)
    Pr = Vr[:, _support_mask(wr)]
    Qs = Vs[:, ~_support_mask(ws)]
    if Qs.shape[1] == 0 or Pr.shape[1] == 0:
        return True
    overlap = Qs.conj().T @ Pr
    return float(np.linalg.norm(overlap, 2)) <= SUPPORT_LEAK_ATOL


def support_root(matrix: np.ndarray) -> np.ndarray:
    """Rectangular square root restricted to the support: a d x r array R
    with R R† = matrix and r the support rank. Exact-zero modes are removed
    as columns instead of carried as rounding-level eigenvalues."""
    w, V = _spectral(matrix)
    w = np.clip(w, 0.0, None)
    mask = _support_mask(w)
    return V[:, mask] * np.sqrt(w[mask])


def trace_functional(rho, sigma, order) -> float:
    """The sandwich kernel Tr{(sigma^gamma rho sigma^gamma)^alpha}.

    Exposed separately because the continuity proofs manipulate it directly.
    Returns +inf when alpha > 1 and supp(rho) is not contained in supp(sigma).

    Computed through the singular values of sigma^gamma rho^(1/2) with the
    root restricted to rho's support: their squares are the nonzero
    eigenvalues of the sandwich, and no rounding-level zero modes survive to
    be amplified by the alpha power.
    """
    order = as_order(order)
    rho_m, sigma_m = asmatrix(rho), asmatrix(sigma)
    if rho_m.shape != sigma_m.shape:
        raise ValidationError(f"dimension mismatch: {rho_m.shape} vs {sigma_m.shape}")
    if order.alpha > 1 and not _support_contained(rho_m, sigma_m):
        return float("inf")
    G = _power_on_support(sigma_m, order.gamma)
    svals = np.linalg.svd(G @ support_root(rho_m), compute_uv=False)
    svals = svals[svals > 0]
    return float(np.sum(svals ** (2.0 * order.alpha)))


def sandwiched_renyi(rho, sigma, order) -> float:
    """Sandwiched Renyi divergence (base 2)."""
    order = as_order(order)
    kernel = trace_functional(rho, sigma, order)
    if not np.isfinite(kernel) or kernel <= 0.0:
        return float("inf")
    return float(np.log2(kernel) / (order.alpha - 1.0))


def sandwiched_tsallis(rho, sigma, order) -> float:
    """Sandwiched Tsallis divergence (power form of the same kernel)."""
    order = as_order(order)
    kernel = trace_functional(rho, sigma, order)
    if not np.isfinite(kernel):
        return float("inf")
    return float((kernel - 1.0) / (order.alpha - 1.0))


def tsallis_relative(rho, sigma, order) -> float:
    """Plain (non-sandwiched) Tsallis divergence from Tr{rho^a sigma^(1-a)}."""
    order = as_order(order)
    rho_m, sigma_m = asmatrix(rho), asmatrix(sigma)
    if rho_m.shape != sigma_m.shape:
        raise ValidationError(f"dimension mismatch: {rho_m.shape} vs {sigma_m.shape}")
    if order.alpha > 1 and not _support_contained(rho_m, sigma_m):
        return float("inf")
    value = np.trace(
        _power_on_support(rho_m, order.alpha)
        @ _power_on_support(sigma_m, 1.0 - order.alpha)
    ).real
    return float((value - 1.0) / (order.alpha - 1.0))


def relative_entropy(rho, sigma) -> float:
    """Umegaki relative entropy Tr(rho log rho - rho log sigma), base 2."""
    rho_m, sigma_m = asmatrix(rho), asmatrix(sigma)
    if rho_m.shape != sigma_m.shape:
        raise ValidationError(f"dimension mismatch: {rho_m.shape} vs {sigma_m.shape}")
    if not _support_contained(rho_m, sigma_m):
        return float("inf")
    wr, Vr = _spectral(rho_m)
    ws, Vs = _spectral(sigma_m)
    mask_r = _support_mask(wr) & (wr > 0)
    plogp = float(np.sum(wr[mask_r] * np.log2(wr[mask_r])))
    mask_s = _support_mask(ws)
    log_sigma = (Vs[:, mask_s] * np.log2(ws[mask_s])) @ Vs[:, mask_s].conj().T
    cross = float(np.trace(rho_m @ log_sigma).real)
    return plogp - cross


def von_neumann_entropy(rho) -> float:
    """S(rho) = -Tr rho log2 rho with the 0 log 0 = 0 convention."""
    w = np.linalg.eigvalsh(hermitize(asmatrix(rho)))
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))
