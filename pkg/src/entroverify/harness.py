"""Monte-Carlo falsification of the continuity theorems, proof-step
inequalities, duality, scaling, additivity, and boundedness claims.

Every check is materialized as a TrialReport row. A trial passes when
lhs_gap <= bound + tol_abs + tol_rel * |bound|; equality identities use their
own (tighter or looser) documented tolerances, recorded per row. Epsilons are
always the measured distances of the sampled pair, never a target value.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import bounds as bounds_mod
from .channels import (
    diamond_distance,
    extend_apply,
    mix_channels,
    random_channel,
    randomizing,
    replacer,
)
from .channel_entropy import channel_entropy, pseudo_additivity_gap, renyi_additivity_gap
from .conditional_entropy import (
    cond_entropy,
    duality_gap,
    renyi_down,
    renyi_up,
    tsallis_down_plain,
    tsallis_down_sandwiched,
)
from .divergences import (
    relative_entropy,
    sandwiched_renyi,
    sandwiched_tsallis,
    trace_functional,
)
from .operator_core import ValidationError, density, hermitize, trace_distance
from .optim import ConvergenceError, OptimizerConfig
from .states import BipartiteState, build_delta, equal_marginal_pair, purify, random_density
from .serialization import dumps_17, format_float

TOL_ABS = 1e-9
TOL_REL = 1e-9

CONDITIONAL_IDS = ("afw", "renyi_lt1", "renyi_gt1", "tsallis_lt1", "tsallis_gt1", "marwah_up")
PROOF_STEP_IDS = (
    "mccarthy_lt1",
    "mccarthy_gt1",
    "eq_upper",
    "eq_lower",
    "eq_upper_gt1",
    "eq_lower_gt1",
    "max_exp_rho",
    "up_exp",
)
CHANNEL_IDS = ("channel_vn", "channel_renyi", "channel_tsallis")
IDENTITY_IDS = (
    "duality",
    "scaling_renyi",
    "scaling_tsallis",
    "dpi_renyi",
    "dpi_tsallis",
    "alpha_limit",
    "entropy_rel_tsallis",
    "renyi_entropy_chain",
    "tsallis_entropy_chain",
    "tsallis_bounds",
    "additivity_renyi",
    "additivity_tsallis",
)
ALL_IDS = CONDITIONAL_IDS + PROOF_STEP_IDS + CHANNEL_IDS + IDENTITY_IDS

CSV_COLUMNS = (
    "theorem_id",
    "seed",
    "alpha",
    "d_a",
    "d_b",
    "method",
    "eps",
    "lhs_gap",
    "bound",
    "tightness",
    "passed",
    "status",
    "note",
    "elapsed_s",
)


@dataclass(frozen=True)
class TrialReport:
    theorem_id: str
    seed: int
    alpha: float | None
    dims: tuple[int, int]
    method: str
    eps: float
    lhs_gap: float
    bound: float
    tightness: float
    passed: bool
    status: str
    note: str = ""
    elapsed: float = 0.0


def _finish(theorem_id, seed, alpha, dims, method, eps, lhs, bound, t0,
            tol_abs=TOL_ABS, tol_rel=TOL_REL, note="") -> TrialReport:
    passed = bool(lhs <= bound + tol_abs + tol_rel * abs(bound))
    tightness = float(lhs / bound) if bound > 0 else 0.0
    return TrialReport(
        theorem_id=theorem_id,
        seed=int(seed),
        alpha=None if alpha is None else float(alpha),
        dims=tuple(dims),
        method=method,
        eps=float(eps),
        lhs_gap=float(lhs),
        bound=float(bound),
        tightness=tightness,
        passed=passed,
        status="pass" if passed else "fail",
        note=note,
        elapsed=time.perf_counter() - t0,
    )


def _skip(theorem_id, seed, alpha, dims, method, note, t0) -> TrialReport:
    return TrialReport(theorem_id, int(seed), alpha, tuple(dims), method, 0.0,
                       0.0, 0.0, 0.0, True, "skip", note, time.perf_counter() - t0)


def _error_report(theorem_id, seed, alpha, dims, method, exc, t0) -> TrialReport:
    return TrialReport(theorem_id, int(seed), alpha, tuple(dims), method, 0.0,
                       float("nan"), float("nan"), 0.0, False, "fail",
                       f"error: {exc}", time.perf_counter() - t0)


def _trial_seed(campaign_seed: int, cell_index: int, trial_index: int) -> int:
    ss = np.random.SeedSequence([int(campaign_seed), int(cell_index), int(trial_index)])
    return int(ss.generate_state(1)[0])


# ---------------------------------------------------------------------------
# Conditional-entropy continuity theorems
# ---------------------------------------------------------------------------

THEOREM_ALPHA_RANGES = {
    "renyi_lt1": lambda a: 0.5 <= a < 1.0,
    "renyi_gt1": lambda a: a > 1.0,
    "tsallis_lt1": lambda a: 0.5 <= a < 1.0,
    "tsallis_gt1": lambda a: 1.0 < a < 2.0,
    "marwah_up": lambda a: a >= 0.5 and a != 1.0,
}


def _conditional_trial(theorem_id: str, alpha: float | None, dims: tuple[int, int],
                       seed: int, method: str, opt: OptimizerConfig | None = None,
                       tol_abs: float = TOL_ABS, tol_rel: float = TOL_REL) -> TrialReport:
    t0 = time.perf_counter()
    dA, dB = dims
    rng = np.random.default_rng(seed)
    strength = float(rng.uniform(0.05, 1.0))
    try:
        if theorem_id == "afw":
            rho = BipartiteState(density(random_density(dA * dB, dA * dB, rng).matrix, (dA, dB)))
            sig = BipartiteState(density(random_density(dA * dB, dA * dB, rng).matrix, (dA, dB)))
        else:
            rho, sig = equal_marginal_pair(dA, dB, method=method, strength=strength, seed=rng)
        eps = trace_distance(rho.state, sig.state)
        if theorem_id == "afw":
            lhs = abs(cond_entropy(rho) - cond_entropy(sig))
            bound = bounds_mod.afw_bound(eps, dA)
        elif theorem_id in ("renyi_lt1", "renyi_gt1"):
            lhs = abs(renyi_down(rho, alpha) - renyi_down(sig, alpha))
            bound = bounds_mod.renyi_down_bound(alpha, dA, eps)
        elif theorem_id in ("tsallis_lt1", "tsallis_gt1"):
            lhs = abs(tsallis_down_sandwiched(rho, alpha) - tsallis_down_sandwiched(sig, alpha))
            bound = bounds_mod.tsallis_down_bound(alpha, dA, eps)
        elif theorem_id == "marwah_up":
            opt = opt or OptimizerConfig(seed=seed)
            lhs = abs(renyi_up(rho, alpha, opt)[0] - renyi_up(sig, alpha, opt)[0])
            bound = bounds_mod.marwah_up_bound(alpha, dA, eps)
        else:
            raise ValidationError(f"unknown theorem id {theorem_id!r}")
    except (ValidationError, ConvergenceError) as exc:
        return _error_report(theorem_id, seed, alpha, dims, method, exc, t0)
    return _finish(theorem_id, seed, alpha, dims, method, eps, lhs, bound, t0,
                   tol_abs=tol_abs, tol_rel=tol_rel)


def verify_conditional_continuity(theorem_id: str, alphas, dims_grid, trials_per_cell: int,
                                  seed: int, method: str = "local-channel",
                                  tol_abs: float = TOL_ABS, tol_rel: float = TOL_REL) -> list[TrialReport]:
    """Run one continuity theorem over an alpha x dims grid of cells."""
    if theorem_id not in CONDITIONAL_IDS:
        raise ValidationError(f"unknown theorem id {theorem_id!r}")
    if theorem_id == "afw":
        cell_alphas = [None]
    else:
        in_range = THEOREM_ALPHA_RANGES[theorem_id]
        cell_alphas = [a for a in alphas if in_range(a)]
        if not cell_alphas:
            raise ValidationError(f"no alpha in the valid range for {theorem_id}")
    reports = []
    for ci, alpha in enumerate(cell_alphas):
        for di, dims in enumerate(dims_grid):
            cell = ci * 1000 + di
            for k in range(trials_per_cell):
                trial_seed = _trial_seed(seed, cell, k)
                reports.append(_conditional_trial(theorem_id, alpha, tuple(dims),
                                                  trial_seed, method,
                                                  tol_abs=tol_abs, tol_rel=tol_rel))
    return reports


# ---------------------------------------------------------------------------
# Proof-step inequalities on the actual proof objects
# ---------------------------------------------------------------------------

_LT1_GRID = (0.5, 0.6, 0.75, 0.9)
_GT1_GRID = (1.1, 1.5, 1.9, 2.0, 3.0)


def _proof_step_trial(step_id: str, alpha: float, dims: tuple[int, int],
                      seed: int) -> TrialReport:
    t0 = time.perf_counter()
    dA, dB = dims
    rng = np.random.default_rng(seed)
    method = "local-channel"
    try:
        if step_id in ("mccarthy_lt1", "mccarthy_gt1"):
            d = dA * dB
            X = _random_psd(d, rng)
            Y = _random_psd(d, rng)
            tx = _trace_power(X, alpha)
            ty = _trace_power(Y, alpha)
            txy = _trace_power(X + Y, alpha)
            if step_id == "mccarthy_lt1":
                lhs, bound = txy, tx + ty
            else:
                lhs, bound = tx + ty, txy
            return _finish(step_id, seed, alpha, dims, "psd-pair", 0.0, lhs, bound, t0)

        strength = float(rng.uniform(0.05, 1.0))
        rho, sig = equal_marginal_pair(dA, dB, method=method, strength=strength, seed=rng)
        eps = trace_distance(rho.state, sig.state)
        if eps <= 1e-14:
            return _skip(step_id, seed, alpha, dims, method,
                         "delta undefined at epsilon zero", t0)
        bundle = build_delta(rho, sig)
        eps = bundle.eps
        omega = np.kron(np.eye(dA), _marginal_b_np(rho.matrix, dA, dB))
        k_delta = trace_functional(bundle.delta.matrix, omega, alpha)
        k_rho = trace_functional(rho.matrix, omega, alpha)
        k_sig = trace_functional(sig.matrix, omega, alpha)

        if step_id == "eq_upper":
            lhs = k_delta
            bound = k_rho / (1 + eps) ** alpha + eps ** alpha / (1 + eps) ** alpha * dA ** (1 - alpha)
        elif step_id == "eq_lower":
            lhs = k_sig / (1 + eps)
            bound = k_delta
        elif step_id == "eq_upper_gt1":
            lhs = k_rho / (1 + eps) ** alpha
            bound = k_delta
        elif step_id == "eq_lower_gt1":
            lhs = k_delta
            bound = k_sig / (1 + eps) + eps / (1 + eps) * dA ** (1 - alpha)
        elif step_id == "max_exp_rho":
            lhs = abs(k_rho - 2.0 ** ((1 - alpha) * renyi_down(rho, alpha)))
            bound = 0.0
        elif step_id == "up_exp":
            delta_state = bundle.q if seed % 2 == 0 else bundle.p
            which = "Q" if seed % 2 == 0 else "P"
            k_obj = trace_functional(delta_state.matrix, omega, alpha)
            up_value, _ = renyi_up(delta_state, alpha, OptimizerConfig(seed=seed))
            lhs = k_obj
            bound = 2.0 ** ((1 - alpha) * up_value)
            return _finish(step_id, seed, alpha, dims, method, eps, lhs, bound, t0,
                           note=f"delta={which}")
        else:
            raise ValidationError(f"unknown proof step {step_id!r}")
        return _finish(step_id, seed, alpha, dims, method, eps, lhs, bound, t0)
    except (ValidationError, ConvergenceError) as exc:
        return _error_report(step_id, seed, alpha, dims, method, exc, t0)


def _random_psd(d: int, rng) -> np.ndarray:
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return G @ G.conj().T / d


def _trace_power(M: np.ndarray, alpha: float) -> float:
    w = np.clip(np.linalg.eigvalsh(hermitize(M)), 0.0, None)
    support = w > 1e-12 * (w.max() if w.size else 0.0)
    return float(np.sum(w[support] ** alpha))


def _marginal_b_np(matrix: np.ndarray, dA: int, dB: int) -> np.ndarray:
    return np.einsum("aiaj->ij", matrix.reshape(dA, dB, dA, dB))


def verify_proof_steps(trials: int, seed: int, step_ids=PROOF_STEP_IDS,
                       dims: tuple[int, int] = (2, 2)) -> list[TrialReport]:
    """Check every chained inequality of the continuity proofs on sampled
    proof objects (omega, Delta, P, Q), one report per instance."""
    reports = []
    for si, step_id in enumerate(step_ids):
        if step_id not in PROOF_STEP_IDS:
            raise ValidationError(f"unknown proof step {step_id!r}")
        grid = _GT1_GRID if step_id.endswith("gt1") else _LT1_GRID
        if step_id == "max_exp_rho":
            grid = _LT1_GRID + _GT1_GRID
        for k in range(trials):
            alpha = grid[k % len(grid)]
            trial_seed = _trial_seed(seed, 5000 + si, k)
            reports.append(_proof_step_trial(step_id, alpha, dims, trial_seed))
    return reports


# ---------------------------------------------------------------------------
# Channel-entropy continuity
# ---------------------------------------------------------------------------


def _channel_continuity_trial(kind_id: str, alpha: float | None, dims: tuple[int, int],
                              seed: int, restarts: int, bracket_tol: float) -> TrialReport:
    t0 = time.perf_counter()
    dA, dB = dims
    rng = np.random.default_rng(seed)
    p = float(rng.uniform(0.05, 0.95))
    first = random_channel(dA, dB, rng)
    kick = random_channel(dA, dB, rng)
    second = mix_channels([first, kick], [1.0 - p, p])
    bracket = diamond_distance(first, second, tol=bracket_tol, restarts=restarts, seed=seed)
    opt = OptimizerConfig(restarts=restarts, seed=seed)
    kind = {"channel_vn": "von_neumann", "channel_renyi": "renyi", "channel_tsallis": "tsallis"}[kind_id]
    e1 = channel_entropy(first, kind, alpha, opt)
    e2 = channel_entropy(second, kind, alpha, opt)
    lhs = abs(e1.value - e2.value)

    def family_bound(eps):
        if kind == "von_neumann":
            return bounds_mod.afw_bound(eps, dB)
        if kind == "renyi":
            return bounds_mod.renyi_down_bound(alpha, dB, eps)
        return bounds_mod.tsallis_down_bound(alpha, dB, eps)

    bound_strict = family_bound(min(bracket.lower, 1.0))
    bound_lenient = family_bound(min(bracket.upper, 1.0))
    note = (
        f"eps_upper={bracket.upper:.12g};bound_lenient={bound_lenient:.12g};"
        f"lenient_pass={lhs <= bound_lenient + TOL_ABS + TOL_REL * bound_lenient}"
    )
    report = _finish(kind_id, seed, alpha, dims, "interpolated", bracket.lower,
                     lhs, bound_strict, t0, note=note)
    if not bracket.converged:
        report = replace(report, status="inconclusive", passed=True,
                         note=report.note + ";bracket_unconverged")
    return report


def verify_channel_continuity(kind_id: str, alphas, trials: int, seed: int,
                              dims: tuple[int, int] = (2, 2), restarts: int = 32,
                              bracket_tol: float = 1e-3) -> list[TrialReport]:
    """Continuity of the three channel entropies on interpolated channel
    pairs, using the strict bracket-end convention for epsilon."""
    if kind_id not in CHANNEL_IDS:
        raise ValidationError(f"unknown channel kind {kind_id!r}")
    if kind_id == "channel_vn":
        cell_alphas = [None]
    elif kind_id == "channel_renyi":
        cell_alphas = [a for a in alphas if a >= 0.5 and a != 1.0]
    else:
        cell_alphas = [a for a in alphas if 0.5 <= a < 2.0 and a != 1.0]
    if not cell_alphas:
        raise ValidationError(f"no alpha in the valid range for {kind_id}")
    reports = []
    for ci, alpha in enumerate(cell_alphas):
        for k in range(trials):
            trial_seed = _trial_seed(seed, 9000 + ci, k)
            reports.append(
                _channel_continuity_trial(kind_id, alpha, dims, trial_seed, restarts, bracket_tol)
            )
    return reports


# ---------------------------------------------------------------------------
# Identities: duality, scaling, DPI, limits, additivity, state-entropy bounds
# ---------------------------------------------------------------------------

_DUALITY_GRID = (0.25, 0.5, 0.75, 1.25, 1.5, 1.75)
_DPI_GRID = (0.5, 0.75, 1.5, 3.0)


def _tsallis_state_entropy(matrix: np.ndarray, alpha: float) -> float:
    return (_trace_power(matrix, alpha) - 1.0) / (1.0 - alpha)


def _identity_trial(identity_id: str, seed: int, dims: tuple[int, int],
                    alpha_cycle: int) -> TrialReport:
    t0 = time.perf_counter()
    dA, dB = dims
    rng = np.random.default_rng(seed)
    method = "random"
    try:
        if identity_id == "duality":
            alpha = _DUALITY_GRID[alpha_cycle % len(_DUALITY_GRID)]
            rho_ab = random_density(dA * dB, rng.integers(1, dA * dB + 1), rng)
            pure = purify(rho_ab)
            tri = density(pure.matrix, (dA, dB, dA * dB))
            gap = abs(duality_gap(tri, alpha))
            return _finish(identity_id, seed, alpha, dims, "purified", 0.0, gap, 0.0,
                           t0, tol_abs=1e-8, note="tol_abs=1e-8")

        if identity_id in ("scaling_renyi", "scaling_tsallis"):
            alpha = (_LT1_GRID + _GT1_GRID)[alpha_cycle % 9]
            rho = random_density(dA, dA, rng)
            sig = random_density(dA, dA, rng)
            c = (0.5, 2.0, float(dB))[alpha_cycle % 3]
            if identity_id == "scaling_renyi":
                expected = sandwiched_renyi(rho, sig, alpha) - np.log2(c)
                scaled = sandwiched_renyi(rho, c * sig.matrix, alpha)
            else:
                base = sandwiched_tsallis(rho, sig, alpha)
                expected = (c ** (1 - alpha) - 1.0) / (alpha - 1.0) + c ** (1 - alpha) * base
                scaled = sandwiched_tsallis(rho, c * sig.matrix, alpha)
            # power-form values are unbounded (the kernel reaches ~1e8 at
            # alpha = 3 for ill-conditioned references), so exactness is
            # relative to the magnitude
            lhs = abs(scaled - expected) / max(1.0, abs(expected))
            return _finish(identity_id, seed, alpha, dims, method, 0.0, lhs, 0.0, t0,
                           tol_abs=1e-10, note=f"c={c};relative;tol_abs=1e-10")

        if identity_id in ("dpi_renyi", "dpi_tsallis"):
            alpha = _DPI_GRID[alpha_cycle % len(_DPI_GRID)]
            rho = random_density(dA, dA, rng)
            sig = random_density(dA, dA, rng)
            channel = random_channel(dA, dB, rng)
            mapped_rho = channel(rho)
            mapped_sig = channel(sig)
            f = sandwiched_renyi if identity_id == "dpi_renyi" else sandwiched_tsallis
            before = f(rho, sig, alpha)
            after = f(mapped_rho, mapped_sig, alpha)
            if not np.isfinite(before):
                return _skip(identity_id, seed, alpha, dims, method,
                             "divergence infinite before processing", t0)
            return _finish(identity_id, seed, alpha, dims, method, 0.0, after, before,
                           t0, tol_abs=1e-8, note="tol_abs=1e-8")

        if identity_id == "alpha_limit":
            rho = BipartiteState(density(random_density(dA * dB, dA * dB, rng).matrix, (dA, dB)))
            h = cond_entropy(rho)
            worst = 0.0
            for a in (1 - 1e-4, 1 + 1e-4):
                worst = max(worst, abs(renyi_down(rho, a) - h))
                worst = max(worst, abs(tsallis_down_sandwiched(rho, a) - h * np.log(2.0)))
            sig = random_density(dA, dA, rng)
            tau = random_density(dA, dA, rng)
            d_exact = relative_entropy(sig, tau)
            for a in (1 - 1e-4, 1 + 1e-4):
                worst = max(worst, abs(sandwiched_renyi(sig, tau, a) - d_exact))
            return _finish(identity_id, seed, None, dims, method, 0.0, worst, 0.0, t0,
                           tol_abs=1e-2, note="tol_abs=1e-2;tsallis compared in nats")

        if identity_id == "entropy_rel_tsallis":
            alpha = _DUALITY_GRID[alpha_cycle % len(_DUALITY_GRID)]
            d = dA * dB
            rho = random_density(d, rng.integers(1, d + 1), rng)
            s_t = _tsallis_state_entropy(rho.matrix, alpha)
            dvg = sandwiched_tsallis(rho, np.eye(d) / d, alpha)
            affine = (d ** (1 - alpha) - 1.0) / (1.0 - alpha) - d ** (1 - alpha) * dvg
            lhs = abs(s_t - affine)
            return _finish(identity_id, seed, alpha, dims, method, 0.0, lhs, 0.0, t0,
                           tol_abs=1e-10, note="tol_abs=1e-10")

        if identity_id == "tsallis_bounds":
            alpha = _DUALITY_GRID[alpha_cycle % len(_DUALITY_GRID)]
            d = dA * dB
            rho = random_density(d, rng.integers(1, d + 1), rng)
            s_t = _tsallis_state_entropy(rho.matrix, alpha)
            upper = (d ** (1 - alpha) - 1.0) / (1.0 - alpha)
            violation = max(0.0 - s_t, s_t - upper)
            state = BipartiteState(density(random_density(dA * dB, dA * dB, rng).matrix, (dA, dB)))
            t_down = tsallis_down_sandwiched(state, alpha)
            t_plain = tsallis_down_plain(state, alpha)
            up_a = (dA ** (1 - alpha) - 1.0) / (1.0 - alpha)
            low_a = -(dA ** (alpha - 1.0) - 1.0) / (alpha - 1.0)
            violation = max(violation, t_down - up_a, low_a - t_down,
                            t_plain - up_a, low_a - t_plain, t_plain - t_down)
            return _finish(identity_id, seed, alpha, dims, method, 0.0, violation, 0.0,
                           t0, tol_abs=1e-9, note="max violation over state+conditional bounds")

        if identity_id in ("renyi_entropy_chain", "tsallis_entropy_chain"):
            alpha = (_LT1_GRID + (1.5, 1.9))[alpha_cycle % 6]
            channel = random_channel(dA, dB, rng)
            psi = random_density(dA * dA, 1, rng)
            out = extend_apply(channel, density(psi.matrix, (dA, dA)))
            rho_r = _marginal_b_np(psi.matrix, dA, dA)
            full = np.kron(np.eye(dB), rho_r)
            scaled = np.kron(np.eye(dB) / dB, rho_r)
            if identity_id == "renyi_entropy_chain":
                path1 = np.log2(dB) - sandwiched_renyi(out.matrix, scaled, alpha)
                path2 = -sandwiched_renyi(out.matrix, full, alpha)
            else:
                dvg = sandwiched_tsallis(out.matrix, scaled, alpha)
                path1 = (dB ** (1 - alpha) - 1.0) / (1.0 - alpha) - dB ** (1 - alpha) * dvg
                path2 = -sandwiched_tsallis(out.matrix, full, alpha)
            lhs = abs(path1 - path2)
            return _finish(identity_id, seed, alpha, dims, method, 0.0, lhs, 0.0, t0,
                           tol_abs=1e-10, note="tol_abs=1e-10")

        if identity_id in ("additivity_renyi", "additivity_tsallis"):
            alpha = (0.5, 1.5)[alpha_cycle % 2]
            sig1 = random_density(dB, dB, rng)
            sig2 = random_density(dB, dB, rng)
            opt = OptimizerConfig(restarts=8, seed=seed)
            pick = alpha_cycle % 3
            if pick == 0:
                first, second = replacer(sig1, dA), replacer(sig2, dA)
                kind_note = "replacer-pair"
            elif pick == 1:
                first, second = randomizing(dA, dB), randomizing(dA, dB)
                kind_note = "randomizing-pair"
            else:
                first, second = replacer(sig1, dA), randomizing(dA, dB)
                kind_note = "replacer+randomizing"
            if identity_id == "additivity_renyi":
                gap = renyi_additivity_gap(first, second, alpha, opt)
            else:
                gap = pseudo_additivity_gap(first, second, alpha, opt)
            return _finish(identity_id, seed, alpha, dims, method, 0.0, abs(gap), 0.0,
                           t0, tol_abs=1e-8, note=kind_note + ";tol_abs=1e-8")

        raise ValidationError(f"unknown identity {identity_id!r}")
    except (ValidationError, ConvergenceError) as exc:
        return _error_report(identity_id, seed, None, dims, method, exc, t0)


def verify_identities(trials: int, seed: int, identity_ids=IDENTITY_IDS,
                      dims: tuple[int, int] = (2, 2)) -> list[TrialReport]:
    """Batch the exact identities and inequality families over random inputs."""
    reports = []
    for ii, identity_id in enumerate(identity_ids):
        if identity_id not in IDENTITY_IDS:
            raise ValidationError(f"unknown identity {identity_id!r}")
        for k in range(trials):
            trial_seed = _trial_seed(seed, 20000 + ii, k)
            reports.append(_identity_trial(identity_id, trial_seed, dims, k))
    return reports


# ---------------------------------------------------------------------------
# Campaign driver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CampaignConfig:
    theorem_ids: tuple[str, ...]
    alpha_grid: tuple[float, ...] = (0.5, 0.6, 0.75, 0.9, 1.1, 1.5, 1.9, 2.0, 3.0)
    dims_grid: tuple[tuple[int, int], ...] = ((2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4))
    trials: int = 1000
    seed: int = 7
    tol_abs: float = TOL_ABS
    tol_rel: float = TOL_REL
    method: str = "local-channel"

    def __post_init__(self):
        for tid in self.theorem_ids:
            if tid not in ALL_IDS:
                raise ValidationError(f"unknown theorem id {tid!r}; known ids: {ALL_IDS}")
        needs_alpha = [t for t in self.theorem_ids if t not in ("afw", "channel_vn")]
        if needs_alpha and any(a == 1.0 for a in self.alpha_grid):
            raise ValidationError(
                f"alpha = 1 violates the order range of {needs_alpha[0]}; "
                "the alpha grid must avoid 1"
            )


def config_from_dict(payload: dict) -> CampaignConfig:
    try:
        tol = payload.get("tolerances", {})
        return CampaignConfig(
            theorem_ids=tuple(payload["theorem_ids"]),
            alpha_grid=tuple(float(a) for a in payload.get("alpha_grid", CampaignConfig.alpha_grid)),
            dims_grid=tuple(tuple(int(x) for x in d) for d in payload.get("dims_grid", CampaignConfig.dims_grid)),
            trials=int(payload.get("trials", 1000)),
            seed=int(payload.get("seed", 7)),
            tol_abs=float(tol.get("abs", TOL_ABS)),
            tol_rel=float(tol.get("rel", TOL_REL)),
            method=str(payload.get("method", "local-channel")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed campaign config: {exc}") from exc


def _run_group(args):
    config, tid = args
    if tid in CONDITIONAL_IDS:
        return verify_conditional_continuity(tid, config.alpha_grid, config.dims_grid,
                                             config.trials, config.seed, config.method,
                                             tol_abs=config.tol_abs, tol_rel=config.tol_rel)
    if tid in PROOF_STEP_IDS:
        return verify_proof_steps(config.trials, config.seed, step_ids=(tid,))
    if tid in CHANNEL_IDS:
        dims = min(config.dims_grid, key=lambda d: d[0] * d[1])
        return verify_channel_continuity(tid, config.alpha_grid, config.trials,
                                         config.seed, dims=dims)
    return verify_identities(config.trials, config.seed, identity_ids=(tid,))


def worker_count() -> int:
    value = os.environ.get("ENTROVERIFY_THREADS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def run_campaign(config: CampaignConfig) -> list[TrialReport]:
    """Run every requested theorem group; reports come back in config order."""
    jobs = [(config, tid) for tid in config.theorem_ids]
    workers = worker_count()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_group, jobs))
    else:
        chunks = [_run_group(job) for job in jobs]
    return [report for chunk in chunks for report in chunk]


def summarize(reports: list[TrialReport]) -> dict:
    summary: dict = {}
    for report in reports:
        row = summary.setdefault(report.theorem_id, {
            "trials": 0, "passed": 0, "failed": 0, "skipped": 0,
            "inconclusive": 0, "max_tightness": 0.0,
        })
        row["trials"] += 1
        if report.status == "pass":
            row["passed"] += 1
        elif report.status == "fail":
            row["failed"] += 1
        elif report.status == "skip":
            row["skipped"] += 1
        else:
            row["inconclusive"] += 1
        row["max_tightness"] = max(row["max_tightness"], report.tightness)
    return summary


def _report_row(report: TrialReport) -> list[str]:
    return [
        report.theorem_id,
        str(report.seed),
        "" if report.alpha is None else format_float(report.alpha).strip('"'),
        str(report.dims[0]),
        str(report.dims[1]),
        report.method,
        format_float(report.eps).strip('"'),
        format_float(report.lhs_gap).strip('"'),
        format_float(report.bound).strip('"'),
        format_float(report.tightness).strip('"'),
        str(report.passed).lower(),
        report.status,
        report.note.replace(",", ";"),
        format_float(report.elapsed).strip('"'),
    ]


def write_csv(reports: list[TrialReport], path) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for report in reports:
            fh.write(",".join(_report_row(report)) + "\n")


def write_jsonl(reports: list[TrialReport], path) -> None:
    with open(path, "w") as fh:
        for report in reports:
            payload = {
                "theorem_id": report.theorem_id,
                "seed": report.seed,
                "alpha": report.alpha,
                "d_a": report.dims[0],
                "d_b": report.dims[1],
                "method": report.method,
                "eps": report.eps,
                "lhs_gap": report.lhs_gap,
                "bound": report.bound,
                "tightness": report.tightness,
                "passed": report.passed,
                "status": report.status,
                "note": report.note,
                "elapsed_s": report.elapsed,
            }
            fh.write(dumps_17(payload) + "\n")
