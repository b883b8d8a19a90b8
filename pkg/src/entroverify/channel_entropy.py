"""Channel entropies via optimization over purified inputs.

The entropy of a channel is the infimum over pure inputs psi on A (x) R
(dR = dA) of the output conditional entropy H(B|R). The optimizer performs
multistart projected gradient descent on the input sphere with numerical
gradients, batched over restarts; the returned value is an upper bound on
the true infimum, exact for channels whose objective is input-independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import QuantumChannel, tensor_channels
from .divergences import sandwiched_tsallis
from .operator_core import DensityOperator, ValidationError, density
from .optim import OptimizerConfig

KINDS = ("von_neumann", "renyi", "tsallis")
GRAD_STEP = 1e-6


@dataclass(frozen=True)
class ChannelEntropyResult:
    value: float
    argmin_input: DensityOperator
    certificate: dict
    converged: bool


def _validate_kind(kind: str, alpha: float | None) -> float | None:
    if kind not in KINDS:
        raise ValidationError(f"unknown kind {kind!r}; choose from {KINDS}")
    if kind == "von_neumann":
        return None
    if alpha is None:
        raise ValidationError(f"kind {kind!r} needs an alpha")
    alpha = float(alpha)
    if kind == "renyi" and (alpha < 0.5 or alpha == 1.0):
        raise ValidationError(f"renyi channel entropy needs alpha in [1/2,1) or (1,inf), got {alpha}")
    if kind == "tsallis" and not (0.0 < alpha < 2.0 and alpha != 1.0):
        raise ValidationError(f"tsallis channel entropy needs alpha in (0,2) minus 1, got {alpha}")
    return alpha


def _batched_objective(kraus, dA: int, dB: int, psis: np.ndarray,
                       kind: str, alpha: float | None) -> np.ndarray:
    """Conditional entropy H(B|R) of (N (x) id)(psi psi†) for a batch of psi.

    Pure inputs keep the output in factored form: the columns of W are the
    Kraus images of psi, so the output's nonzero spectrum is the squared
    singular values of W (entropy branch) or of (I (x) rho_R^gamma) W
    (sandwich kernels), avoiding alpha-amplified rounding of near-zero modes.
    """
    n = psis.shape[0]
    dR = dA
    mats = psis.reshape(n, dA, dR)
    rho_r = np.einsum("nar,nas->nrs", mats, mats.conj())
    W = np.stack([np.einsum("ba,nar->nbr", K, mats) for K in kraus], axis=-1)

    if kind == "von_neumann":
        sv = np.linalg.svd(W.reshape(n, dB * dR, len(kraus)), compute_uv=False)
        ev_br = sv * sv
        ev_r = np.clip(np.linalg.eigvalsh(rho_r), 0.0, None)

        def entropy(ev):
            return -np.sum(np.where(ev > 0, ev * np.log2(np.where(ev > 0, ev, 1.0)), 0.0), axis=1)

        return entropy(ev_br) - entropy(ev_r)

    gamma = (1.0 - alpha) / (2.0 * alpha)
    w, V = np.linalg.eigh(rho_r)
    w = np.clip(w, 0.0, None)
    cut = 1e-12 * w.max(axis=1, keepdims=True)
    powered = np.where(w > cut, w, 1.0) ** gamma * (w > cut)
    G = np.einsum("nik,nk,njk->nij", V, powered, V.conj())
    GW = np.einsum("nrs,nbsk->nbrk", G, W).reshape(n, dB * dR, len(kraus))
    sv = np.linalg.svd(GW, compute_uv=False)
    kernel = np.sum(np.where(sv > 0, sv, 1.0) ** (2.0 * alpha) * (sv > 0), axis=1)
    if kind == "renyi":
        return np.log2(kernel) / (1.0 - alpha)
    return (kernel - 1.0) / (1.0 - alpha)


def _normalize_rows(psis: np.ndarray) -> np.ndarray:
    return psis / np.linalg.norm(psis, axis=1, keepdims=True)


def _maximally_entangled(dA: int) -> np.ndarray:
    return np.eye(dA, dtype=complex).reshape(dA * dA) / np.sqrt(dA)


def _minimize_over_inputs(kraus, dA: int, dB: int, kind: str, alpha: float | None,
                          opt: OptimizerConfig):
    rng = np.random.default_rng(opt.seed)
    D = dA * dA
    product = np.zeros(D, dtype=complex)
    product[0] = 1.0
    starts = [_maximally_entangled(dA), product]
    starts.extend(np.asarray(s, dtype=complex).reshape(D) for s in opt.extra_starts)
    while len(starts) < opt.restarts:
        v = rng.normal(size=D) + 1j * rng.normal(size=D)
        starts.append(v / np.linalg.norm(v))
    psis = _normalize_rows(np.stack(starts))
    n = psis.shape[0]

    def objective(p):
        return _batched_objective(kraus, dA, dB, p, kind, alpha)

    value = objective(psis)
    # Real parametrization: 2*D directions (real and imaginary unit vectors).
    directions = np.concatenate([np.eye(D), 1j * np.eye(D)]).astype(complex)
    n_par = directions.shape[0]
    step = np.full(n, 0.1)
    h = GRAD_STEP
    converged = np.zeros(n, dtype=bool)
    trace = [float(value.min())]
    iterations = 0
    for _ in range(opt.max_iter):
        iterations += 1
        live = np.where(~converged)[0]
        m = live.size
        probes = (
            psis[live, None, None, :]
            + np.array([h, -h])[None, :, None, None] * directions[None, None, :, :]
        ).reshape(m * 2 * n_par, D)
        vals = objective(_normalize_rows(probes)).reshape(m, 2, n_par)
        grad_coeff = (vals[:, 0, :] - vals[:, 1, :]) / (2.0 * h)
        grad = grad_coeff[:, :D] + 1j * grad_coeff[:, D:]

        scale = np.abs(grad).max(axis=1)
        scale[scale == 0] = 1.0
        trial = step[live] / scale
        pending = np.ones(m, dtype=bool)
        improvement = np.zeros(m)
        for _ in range(25):
            if not pending.any():
                break
            idx = live[pending]
            cand = _normalize_rows(psis[idx] - trial[pending, None] * grad[pending])
            cand_val = objective(cand)
            better = cand_val < value[idx] - 1e-16
            hit = idx[better]
            improvement[np.where(pending)[0][better]] = value[hit] - cand_val[better]
            psis[hit] = cand[better]
            value[hit] = cand_val[better]
            step[hit] *= 1.3
            step[idx[~better]] *= 0.5
            trial[pending] = np.where(better, trial[pending], trial[pending] * 0.5)
            still = np.where(pending)[0][~better]
            pending = np.zeros(m, dtype=bool)
            pending[still] = True
        converged[live] = improvement < opt.tol
        trace.append(float(value.min()))
        if converged.all():
            break

    best = int(np.argmin(value))
    certificate = {
        "iterations": iterations,
        "converged": bool(converged.all()),
        "restart_values": [float(v) for v in value],
        "descent_trace": trace,
    }
    return float(value[best]), psis[best], certificate


def channel_entropy(channel: QuantumChannel, kind: str, alpha: float | None = None,
                    opt: OptimizerConfig | None = None) -> ChannelEntropyResult:
    """Entropy of a channel: inf over purified inputs of the output H(B|R).

    kind selects the conditional entropy: "von_neumann", "renyi" (sandwiched
    Renyi down), or "tsallis" (sandwiched Tsallis down). The result's value
    is an upper bound on the infimum; non-convergence is flagged in the
    certificate rather than raised.
    """
    alpha = _validate_kind(kind, alpha)
    opt = opt or OptimizerConfig(restarts=32)
    dA, dB = channel.dim_in, channel.dim_out
    value, psi, certificate = _minimize_over_inputs(channel.kraus, dA, dB, kind, alpha, opt)
    argmin = density(np.outer(psi, psi.conj()), (dA, dA))

    if kind == "tsallis":
        # Consistency with the affine definition through the divergence to the
        # randomizing channel, evaluated at the returned argmin.
        from .channels import extend_apply

        out = extend_apply(channel, argmin)
        mat = psi.reshape(dA, dA)
        rho_r = np.einsum("ar,as->rs", mat, mat.conj())
        reference = np.kron(np.eye(dB) / dB, rho_r)
        dvg = sandwiched_tsallis(out.matrix, reference, alpha)
        affine = (dB ** (1.0 - alpha) - 1.0) / (1.0 - alpha) - dB ** (1.0 - alpha) * dvg
        certificate["affine_form_gap"] = abs(affine - value)
        if certificate["affine_form_gap"] > 1e-6:
            raise RuntimeError(
                f"conditional and affine Tsallis channel entropies disagree: {value!r} vs {affine!r}"
            )

    return ChannelEntropyResult(
        value=value,
        argmin_input=argmin,
        certificate=certificate,
        converged=certificate["converged"],
    )


def _product_warm_start(first_psi: np.ndarray, second_psi: np.ndarray,
                        dA1: int, dA2: int) -> np.ndarray:
    """Tensor two purified inputs and reorder to (A1 A2) (x) (R1 R2)."""
    joint = np.kron(first_psi, second_psi).reshape(dA1, dA1, dA2, dA2)
    return joint.transpose(0, 2, 1, 3).reshape((dA1 * dA2) ** 2)


def _top_vector(rho: DensityOperator) -> np.ndarray:
    w, V = np.linalg.eigh(rho.matrix)
    return V[:, -1]


def pseudo_additivity_gap(first: QuantumChannel, second: QuantumChannel,
                          alpha: float, opt: OptimizerConfig | None = None) -> float:
    """Defect of S(N (x) M) = S(N) + S(M) + (1-alpha) S(N) S(M) for the
    Tsallis channel entropy; the product optimization is warm-started at the
    tensor of the factor argmins."""
    opt = opt or OptimizerConfig(restarts=32)
    e1 = channel_entropy(first, "tsallis", alpha, opt)
    e2 = channel_entropy(second, "tsallis", alpha, opt)
    warm = _product_warm_start(
        _top_vector(e1.argmin_input), _top_vector(e2.argmin_input),
        first.dim_in, second.dim_in,
    )
    product_opt = OptimizerConfig(
        restarts=opt.restarts, max_iter=opt.max_iter, tol=opt.tol, seed=opt.seed,
        extra_starts=tuple(opt.extra_starts) + (warm,),
    )
    e12 = channel_entropy(tensor_channels(first, second), "tsallis", alpha, product_opt)
    expected = e1.value + e2.value + (1.0 - alpha) * e1.value * e2.value
    return e12.value - expected


def renyi_additivity_gap(first: QuantumChannel, second: QuantumChannel,
                         alpha: float, opt: OptimizerConfig | None = None) -> float:
    """Defect of plain additivity for the Renyi channel entropy."""
    opt = opt or OptimizerConfig(restarts=32)
    e1 = channel_entropy(first, "renyi", alpha, opt)
    e2 = channel_entropy(second, "renyi", alpha, opt)
    warm = _product_warm_start(
        _top_vector(e1.argmin_input), _top_vector(e2.argmin_input),
        first.dim_in, second.dim_in,
    )
    product_opt = OptimizerConfig(
        restarts=opt.restarts, max_iter=opt.max_iter, tol=opt.tol, seed=opt.seed,
        extra_starts=tuple(opt.extra_starts) + (warm,),
    )
    e12 = channel_entropy(tensor_channels(first, second), "renyi", alpha, product_opt)
    return e12.value - (e1.value + e2.value)
