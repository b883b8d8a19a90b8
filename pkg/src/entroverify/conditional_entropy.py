"""Conditional entropies of bipartite states.

Six quantities: the von Neumann H(A|B), the sandwiched Renyi pair
(down: divergence to I_A (x) rho_B, up: optimized over the conditioning
marginal), the sandwiched Tsallis pair, and the plain Tsallis down variant
with the closed form for its up variant.
"""

from __future__ import annotations

import numpy as np

from .divergences import (
    RenyiOrder,
    as_order,
    support_root,
    trace_functional,
    von_neumann_entropy,
)
from .operator_core import (
    DensityOperator,
    ValidationError,
    density,
    hermitize,
    partial_trace,
)
from .optim import ConvergenceError, OptimizerConfig
from .states import BipartiteState

INTERIOR_MIX = 1e-9


def _as_bipartite(state) -> tuple[np.ndarray, int, int]:
    if isinstance(state, BipartiteState):
        return state.matrix, state.dims[0], state.dims[1]
    if isinstance(state, DensityOperator):
        if len(state.dims) != 2:
            raise ValidationError(f"expected dims (dA, dB), got {state.dims}")
        return state.matrix, state.dims[0], state.dims[1]
    raise ValidationError("expected a BipartiteState or a two-subsystem DensityOperator")


def _marginal_b(matrix: np.ndarray, dA: int, dB: int) -> np.ndarray:
    return np.einsum("aiaj->ij", matrix.reshape(dA, dB, dA, dB))


def _kernel_at_marginal(matrix: np.ndarray, dA: int, dB: int, order: RenyiOrder) -> float:
    omega = np.kron(np.eye(dA), _marginal_b(matrix, dA, dB))
    return trace_functional(matrix, omega, order)


def cond_entropy(state) -> float:
    """Von Neumann conditional entropy H(A|B) = S(AB) - S(B), base 2."""
    matrix, dA, dB = _as_bipartite(state)
    return von_neumann_entropy(matrix) - von_neumann_entropy(_marginal_b(matrix, dA, dB))


def renyi_down(state, order) -> float:
    """Sandwiched Renyi conditional entropy with the state's own marginal."""
    order = as_order(order)
    matrix, dA, dB = _as_bipartite(state)
    kernel = _kernel_at_marginal(matrix, dA, dB, order)
    return float(np.log2(kernel) / (1.0 - order.alpha))


def tsallis_down_sandwiched(state, order) -> float:
    """Sandwiched Tsallis conditional entropy with the state's own marginal."""
    order = as_order(order)
    matrix, dA, dB = _as_bipartite(state)
    kernel = _kernel_at_marginal(matrix, dA, dB, order)
    return float((kernel - 1.0) / (1.0 - order.alpha))


def tsallis_down_plain(state, order) -> float:
    """Plain Tsallis conditional entropy from Tr{rho^a rho_B^(1-a)}."""
    order = as_order(order)
    matrix, dA, dB = _as_bipartite(state)
    rho_b = _marginal_b(matrix, dA, dB)
    value = np.trace(
        _power_psd(matrix, order.alpha) @ np.kron(np.eye(dA), _power_psd(rho_b, 1.0 - order.alpha))
    ).real
    return float((value - 1.0) / (1.0 - order.alpha))


def tsallis_up_plain_closed(state, order) -> float:
    """Closed form of the plain Tsallis up entropy:
    ((Tr{(Tr_A rho^a)^(1/a)})^a - 1) / (1 - a)."""
    order = as_order(order)
    matrix, dA, dB = _as_bipartite(state)
    powered = _power_psd(matrix, order.alpha)
    reduced = np.einsum("aiaj->ij", powered.reshape(dA, dB, dA, dB))
    inner = np.trace(_power_psd(reduced, 1.0 / order.alpha)).real
    return float((inner ** order.alpha - 1.0) / (1.0 - order.alpha))


def _power_psd(matrix: np.ndarray, t: float) -> np.ndarray:
    w, V = np.linalg.eigh(hermitize(matrix))
    w = np.clip(w, 0.0, None)
    cutoff = 1e-12 * max(float(w.max()), 0.0) if w.size else 0.0
    powered = np.zeros_like(w)
    mask = w > cutoff
    powered[mask] = w[mask] ** t
    return (V * powered) @ V.conj().T



def duality_gap(rho_pure, order) -> float:
    """T_down_a(A|B) + T_down_(2-a)(A|C) for a tripartite pure state.

    The proposition says this vanishes for alpha in (0, 2); the returned gap
    measures the defect.
    """
    order = as_order(order)
    if not 0.0 < order.alpha < 2.0:
        raise ValidationError(f"duality needs alpha in (0, 2), got {order.alpha}")
    if not isinstance(rho_pure, DensityOperator) or len(rho_pure.dims) != 3:
        raise ValidationError("expected a DensityOperator with dims (dA, dB, dC)")
    w = np.linalg.eigvalsh(rho_pure.matrix)
    if w[-1] < 1.0 - 1e-10:
        raise ValidationError(f"input is not pure: largest eigenvalue {w[-1]!r}")
    dA, dB, dC = rho_pure.dims
    rho_ab = density(partial_trace(rho_pure, rho_pure.dims, keep=[0, 1]).matrix, (dA, dB))
    rho_ac = density(partial_trace(rho_pure, rho_pure.dims, keep=[0, 2]).matrix, (dA, dC))
    return tsallis_down_plain(rho_ab, order) + tsallis_down_plain(
        rho_ac, RenyiOrder(2.0 - order.alpha)
    )


# ---------------------------------------------------------------------------
# Optimized (up) variants: exponentiated-gradient ascent over the conditioning
# marginal, run in log-space so iterates stay strictly positive definite.
# ---------------------------------------------------------------------------


def _hermitian_basis(d: int) -> np.ndarray:
    """Orthonormal basis of d x d Hermitian matrices, shape (d*d, d, d)."""
    basis = []
    for i in range(d):
        E = np.zeros((d, d), dtype=complex)
        E[i, i] = 1.0
        basis.append(E)
    for i in range(d):
        for j in range(i + 1, d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = E[j, i] = 1.0 / np.sqrt(2.0)
            basis.append(E)
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = -1j / np.sqrt(2.0)
            E[j, i] = 1j / np.sqrt(2.0)
            basis.append(E)
    return np.stack(basis)


def _batched_expm(L: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(L)
    return np.einsum("nik,nk,njk->nij", V, np.exp(w), V.conj())


def _batched_kernel(root3: np.ndarray, sigmas: np.ndarray, alpha: float) -> np.ndarray:
    """Tr{((I (x) s^g) rho (I (x) s^g))^a} for a batch of PD sigma matrices.

    root3 is rho's support-restricted root reshaped to (dA, dB, rank); the
    kernel comes from the singular values of (I (x) s^g) rho^(1/2).
    """
    gamma = (1.0 - alpha) / (2.0 * alpha)
    w, V = np.linalg.eigh(sigmas)
    G = np.einsum("nik,nk,njk->nij", V, w ** gamma, V.conj())
    lifted = np.einsum("nrs,asj->narj", G, root3)
    m = lifted.shape[0]
    d = root3.shape[0] * root3.shape[1]
    sv = np.linalg.svd(lifted.reshape(m, d, root3.shape[2]), compute_uv=False)
    return np.sum(np.where(sv > 0, sv, 1.0) ** (2.0 * alpha) * (sv > 0), axis=1)


def _optimize_sigma(matrix: np.ndarray, dA: int, dB: int, order: RenyiOrder,
                    opt: OptimizerConfig):
    """Extremize the sandwich kernel over the conditioning marginal.

    Maximizes the kernel for alpha < 1 and minimizes it for alpha > 1 (both
    correspond to the 'up' entropies). Returns (kernel_value, sigma_matrix).
    """
    alpha = order.alpha
    sense = 1.0 if alpha < 1.0 else -1.0
    root = support_root(matrix)
    root3 = root.reshape(dA, dB, root.shape[1])
    rng = np.random.default_rng(opt.seed)
    basis = _hermitian_basis(dB)
    n_par = basis.shape[0]

    pi_b = np.eye(dB) / dB
    starts = [_marginal_b(matrix, dA, dB), pi_b]
    starts.extend(np.asarray(s, dtype=complex) for s in opt.extra_starts)
    while len(starts) < opt.restarts:
        G = rng.normal(size=(dB, dB)) + 1j * rng.normal(size=(dB, dB))
        M = G @ G.conj().T
        starts.append(M / np.trace(M).real)

    def to_log(sigma):
        mixed = (1.0 - INTERIOR_MIX) * hermitize(sigma) + INTERIOR_MIX * pi_b
        w, V = np.linalg.eigh(mixed)
        w = np.clip(w, 1e-300, None)
        return (V * np.log(w)) @ V.conj().T

    L = np.stack([to_log(s) for s in starts])
    n = L.shape[0]

    def objective(Ls):
        sig = _batched_expm(Ls)
        sig /= np.trace(sig, axis1=-2, axis2=-1).real[:, None, None]
        return sense * _batched_kernel(root3, sig, alpha)

    value = objective(L)
    step = np.full(n, 0.25)
    h = 1e-6
    converged = np.zeros(n, dtype=bool)
    for _ in range(opt.max_iter):
        live = np.where(~converged)[0]
        # Central differences along the Hermitian basis, batched over the
        # restarts that are still moving.
        m = live.size
        probes = (
            L[live, None, None, :, :]
            + np.array([h, -h])[None, :, None, None, None] * basis[None, None, :, :, :]
        )
        vals = objective(probes.reshape(m * 2 * n_par, dB, dB)).reshape(m, 2, n_par)
        grad_coeff = (vals[:, 0, :] - vals[:, 1, :]) / (2.0 * h)
        grad = np.einsum("np,pij->nij", grad_coeff, basis)

        scale = np.abs(grad_coeff).max(axis=1)
        scale[scale == 0] = 1.0
        trial_step = step[live] / scale
        pending = np.ones(m, dtype=bool)
        improvement = np.zeros(m)
        for _ in range(30):
            if not pending.any():
                break
            idx = live[pending]
            cand = L[idx] + trial_step[pending, None, None] * grad[pending]
            cand_val = objective(cand)
            better = cand_val > value[idx] + 1e-16
            hit = idx[better]
            improvement[np.where(pending)[0][better]] = cand_val[better] - value[hit]
            L[hit] = cand[better]
            value[hit] = cand_val[better]
            step[hit] *= 1.25
            step[idx[~better]] *= 0.5
            trial_step[pending] = np.where(better, trial_step[pending], trial_step[pending] * 0.5)
            still = np.where(pending)[0][~better]
            pending = np.zeros(m, dtype=bool)
            pending[still] = True
        converged[live] = improvement < opt.tol
        if converged.all():
            break
        # Recenter so exp(L) keeps a bounded trace.
        tr = np.trace(L, axis1=-2, axis2=-1).real / dB
        L -= tr[:, None, None] * np.eye(dB)[None]
    else:
        if not converged.all():
            best = float(sense * value.max())
            raise ConvergenceError(
                f"sigma optimizer hit the iteration cap {opt.max_iter} "
                f"with best kernel {best!r}",
                best,
            )

    ibest = int(np.argmax(value))
    sig = _batched_expm(L[ibest : ibest + 1])[0]
    sig = hermitize(sig / np.trace(sig).real)
    return float(sense * value[ibest]), sig


def renyi_up(state, order, opt: OptimizerConfig | None = None):
    """Optimized sandwiched Renyi conditional entropy.

    Returns (value, argmin) where argmin is the optimal conditioning marginal
    as a DensityOperator on B.
    """
    order = as_order(order)
    matrix, dA, dB = _as_bipartite(state)
    opt = opt or OptimizerConfig()
    kernel, sigma = _optimize_sigma(matrix, dA, dB, order, opt)
    value = float(np.log2(kernel) / (1.0 - order.alpha))
    return value, density(sigma, (dB,))


def tsallis_up_sandwiched(state, order, opt: OptimizerConfig | None = None):
    """Optimized sandwiched Tsallis conditional entropy.

    The kernel extremizer coincides with the Renyi one (the Tsallis
    functional is a monotone transform at fixed alpha), so this shares the
    optimizer and maps the kernel value.
    """
    order = as_order(order)
    matrix, dA, dB = _as_bipartite(state)
    opt = opt or OptimizerConfig()
    kernel, sigma = _optimize_sigma(matrix, dA, dB, order, opt)
    value = float((kernel - 1.0) / (1.0 - order.alpha))
    return value, density(sigma, (dB,))
