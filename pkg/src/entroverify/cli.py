"""Command-line front end: divergences, channel entropies, bounds, and
verification campaigns on user-supplied JSON files.

Exit codes: 0 success, 1 I/O error, 2 validation error, 3 verification run
with failed trials. All numeric output is JSON with 17-significant-digit
floats; infinities print as the string "inf".
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import harness
from .channel_entropy import channel_entropy
from .divergences import (
    relative_entropy,
    sandwiched_renyi,
    sandwiched_tsallis,
    tsallis_relative,
)
from .bounds import FAMILIES, BoundSpec, bound_value
from .operator_core import ValidationError
from .optim import OptimizerConfig
from .serialization import dumps_17, load_channel, load_state, state_to_dict

LN2 = float(np.log(2.0))

_DIVERGENCES = {
    "umegaki": ("log", lambda rho, sigma, alpha: relative_entropy(rho, sigma)),
    "renyi": ("log", sandwiched_renyi),
    "tsallis-sandwiched": ("power", sandwiched_tsallis),
    "tsallis": ("power", tsallis_relative),
}


def _rescale(value: float, scale_kind: str, log_base: str) -> float:
    # Power-form (Tsallis) quantities are base independent.
    if log_base == "e" and scale_kind == "log":
        return value * LN2
    return value


def _print(payload: dict) -> None:
    sys.stdout.write(dumps_17(payload) + "\n")


def cmd_divergence(args) -> int:
    kind = args.kind
    scale_kind, fn = _DIVERGENCES[kind]
    rho = load_state(args.rho)
    sigma = load_state(args.sigma)
    if kind == "umegaki":
        value = fn(rho, sigma, None)
    else:
        if args.alpha is None:
            raise ValidationError(f"--alpha is required for kind {kind!r}")
        value = fn(rho, sigma, args.alpha)
    _print({
        "kind": kind,
        "alpha": args.alpha,
        "value": _rescale(value, scale_kind, args.log_base),
    })
    return 0


def cmd_channel_entropy(args) -> int:
    channel = load_channel(args.channel)
    kind = {"vn": "von_neumann", "renyi": "renyi", "tsallis": "tsallis"}[args.kind]
    opt = OptimizerConfig(restarts=args.restarts, seed=args.seed)
    result = channel_entropy(channel, kind, args.alpha, opt)
    scale_kind = "power" if kind == "tsallis" else "log"
    _print({
        "value": _rescale(result.value, scale_kind, args.log_base),
        "argmin_input": state_to_dict(result.argmin_input),
        "converged": result.converged,
        "restarts": args.restarts,
    })
    return 0


def cmd_bound(args) -> int:
    spec = BoundSpec(family=args.family, alpha=args.alpha if args.alpha is not None else 0.0,
                     d=args.dim, eps=args.eps)
    value = bound_value(spec)
    scale_kind = "power" if args.family == "tsallis_down" else "log"
    _print({
        "family": args.family,
        "alpha": args.alpha,
        "d": args.dim,
        "eps": args.eps,
        "value": _rescale(value, scale_kind, args.log_base),
    })
    return 0


def cmd_verify(args) -> int:
    try:
        with open(args.config) as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"malformed config: {exc}\n")
        return 2
    config = harness.config_from_dict(payload)
    if args.trials is not None:
        from dataclasses import replace

        config = replace(config, trials=args.trials)
    os.makedirs(args.out, exist_ok=True)
    reports = harness.run_campaign(config)
    harness.write_csv(reports, os.path.join(args.out, "reports.csv"))
    harness.write_jsonl(reports, os.path.join(args.out, "reports.jsonl"))
    summary = harness.summarize(reports)
    with open(os.path.join(args.out, "summary.json"), "w") as fh:
        fh.write(dumps_17(summary, indent=1) + "\n")
    failed = 0
    for tid, row in summary.items():
        line = (
            f"{tid}: {row['passed']}/{row['trials']} pass, {row['failed']} fail, "
            f"{row['skipped']} skip, {row['inconclusive']} inconclusive, "
            f"max tightness {row['max_tightness']:.6g}"
        )
        sys.stdout.write(line + "\n")
        failed += row["failed"]
    return 3 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entroverify",
        description="Sandwiched Renyi/Tsallis entropies and continuity-bound verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("divergence", help="divergence between two state files")
    p.add_argument("--kind", required=True, choices=sorted(_DIVERGENCES))
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--log-base", choices=("2", "e"), default="2",
                   help="rescale logarithmic outputs; power-form values are unaffected")
    p.set_defaults(fn=cmd_divergence)

    p = sub.add_parser("channel-entropy", help="entropy of a channel file")
    p.add_argument("--channel", required=True)
    p.add_argument("--kind", required=True, choices=("vn", "renyi", "tsallis"))
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--log-base", choices=("2", "e"), default="2")
    p.set_defaults(fn=cmd_channel_entropy)

    p = sub.add_parser("bound", help="evaluate a closed-form continuity bound")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--log-base", choices=("2", "e"), default="2")
    p.set_defaults(fn=cmd_bound)

    p = sub.add_parser("verify", help="run a verification campaign from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--trials", type=int, default=None,
                   help="override the config's per-cell trial count")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ValidationError as exc:
        sys.stderr.write(f"validation error: {exc}\n")
        return 2
    except (FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return 1
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"malformed input file: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
