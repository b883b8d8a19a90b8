"""Random states, purifications, and equal-marginal pair construction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import as_generator, ginibre
from .channels import extend_apply, identity_channel, mix_channels, random_channel
from .operator_core import (
    DensityOperator,
    ValidationError,
    density,
    hermitize,
    jordan_decompose,
    partial_trace,
    trace_distance,
)


@dataclass(frozen=True)
class BipartiteState:
    """Density operator on A (x) B with dims (dA, dB)."""

    state: DensityOperator

    def __post_init__(self):
        if len(self.state.dims) != 2:
            raise ValidationError(f"expected two subsystems, got dims {self.state.dims}")

    @property
    def matrix(self) -> np.ndarray:
        return self.state.matrix

    @property
    def dims(self) -> tuple[int, int]:
        return self.state.dims

    def marginal_a(self) -> DensityOperator:
        return density(partial_trace(self.state, self.state.dims, keep=[0]).matrix,
                       (self.state.dims[0],))

    def marginal_b(self) -> DensityOperator:
        return density(partial_trace(self.state, self.state.dims, keep=[1]).matrix,
                       (self.state.dims[1],))


def bipartite(matrix: np.ndarray, dims) -> BipartiteState:
    return BipartiteState(density(matrix, dims))


@dataclass(frozen=True)
class DeltaBundle:
    """The mixture state Delta = (rho + eps*Q)/(1+eps) = (sigma + eps*P)/(1+eps)
    together with the normalized Jordan parts P, Q of rho - sigma."""

    delta: BipartiteState
    p: BipartiteState
    q: BipartiteState
    eps: float


def random_pure(d: int, seed=None) -> DensityOperator:
    """Rank-1 projector onto a Haar-uniform unit vector."""
    if d < 1:
        raise ValidationError(f"dimension must be >= 1, got {d}")
    rng = as_generator(seed)
    v = ginibre(d, 1, rng)[:, 0]
    v /= np.linalg.norm(v)
    return density(np.outer(v, v.conj()), (d,))


def random_density(d: int, rank: int, seed=None) -> DensityOperator:
    """Ginibre-induced random density operator of the given rank."""
    if not 1 <= rank <= d:
        raise ValidationError(f"rank must be in [1, {d}], got {rank}")
    rng = as_generator(seed)
    G = ginibre(d, rank, rng)
    M = G @ G.conj().T
    return density(hermitize(M / np.trace(M).real), (d,))


def purify(rho: DensityOperator) -> DensityOperator:
    """Canonical purification on dims (d, d); tracing the second factor
    recovers the input."""
    matrix = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=complex)
    d = matrix.shape[0]
    w, V = np.linalg.eigh(hermitize(matrix))
    w = np.clip(w, 0.0, None)
    # |psi> = sum_i sqrt(w_i) |v_i>|i> with the computational basis on the
    # reference factor.
    vec = np.zeros((d, d), dtype=complex)
    for i, (wi, vi) in enumerate(zip(w, V.T)):
        if wi > 0:
            vec[:, i] = np.sqrt(wi) * vi
    vec = vec.reshape(d * d)
    return density(np.outer(vec, vec.conj()), (d, d))


def equal_marginal_pair(dA: int, dB: int, method: str = "local-channel",
                        strength: float = 0.5, seed=None):
    """Sample a pair of bipartite states with identical B marginals.

    local-channel: sigma = (Phi_A (x) id_B)(rho) for a random channel acting
    only on A, interpolated with the identity by ``strength``. This preserves
    the B marginal exactly for any rho.

    mixture: sigma = (1-strength)*rho + strength*tau with tau itself produced
    by a local channel on A, so tau shares rho's B marginal.
    """
    if method not in ("local-channel", "mixture"):
        raise ValidationError(f"unknown method {method!r}")
    if not 0.0 <= strength <= 1.0:
        raise ValidationError(f"strength must be in [0, 1], got {strength}")
    rng = as_generator(seed)
    rho = density(random_density(dA * dB, dA * dB, rng).matrix, (dA, dB))
    local = random_channel(dA, dA, rng)
    if method == "local-channel":
        channel = mix_channels([identity_channel(dA), local], [1.0 - strength, strength])
        sigma = extend_apply(channel, rho)
    else:
        tau = extend_apply(local, rho)
        mixed = (1.0 - strength) * rho.matrix + strength * tau.matrix
        sigma = density(hermitize(mixed), (dA, dB))
    return BipartiteState(rho), BipartiteState(sigma)


def build_delta(rho: BipartiteState, sigma: BipartiteState) -> DeltaBundle:
    """Construct the proof's mixture state Delta and the normalized Jordan
    parts P, Q of rho - sigma; eps is the measured halved trace distance."""
    if rho.dims != sigma.dims:
        raise ValidationError(f"dimension mismatch: {rho.dims} vs {sigma.dims}")
    eps = trace_distance(rho.state, sigma.state)
    if eps <= 1e-14:
        raise ValidationError("delta undefined at epsilon zero")
    parts = jordan_decompose(rho.matrix - sigma.matrix)
    p = density(parts.pos.matrix / eps, rho.dims)
    q = density(parts.neg.matrix / eps, rho.dims)
    delta = density(
        hermitize((rho.matrix + eps * q.matrix) / (1.0 + eps)), rho.dims
    )
    return DeltaBundle(
        delta=BipartiteState(delta),
        p=BipartiteState(p),
        q=BipartiteState(q),
        eps=eps,
    )
