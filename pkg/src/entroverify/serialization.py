"""JSON file formats for states, channels, and campaign configs.

Floats are written with 17 significant digits so a load/store round trip is
lossless; infinities are serialized as the strings "inf" / "-inf" to keep
every output valid JSON.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .channels import QuantumChannel
from .operator_core import DensityOperator, ValidationError, density, hermitize


def format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(float(x), ".17g")


def dumps_17(obj: Any, indent: int | None = None) -> str:
    """JSON encoding with 17-significant-digit floats."""

    def encode(x, depth):
        pad = "" if indent is None else "\n" + " " * (indent * depth)
        pad_close = "" if indent is None else "\n" + " " * (indent * (depth - 1))
        sep = "," if indent is None else ","
        if isinstance(x, bool):
            return "true" if x else "false"
        if x is None:
            return "null"
        if isinstance(x, (int, np.integer)):
            return str(int(x))
        if isinstance(x, (float, np.floating)):
            return format_float(float(x))
        if isinstance(x, str):
            return json.dumps(x)
        if isinstance(x, dict):
            items = [f"{pad}{json.dumps(str(k))}: {encode(v, depth + 1)}" for k, v in x.items()]
            return "{" + sep.join(items) + pad_close + "}" if items else "{}"
        if isinstance(x, (list, tuple, np.ndarray)):
            seq = list(x)
            items = [f"{pad}{encode(v, depth + 1)}" for v in seq]
            return "[" + sep.join(items) + pad_close + "]" if items else "[]"
        raise TypeError(f"cannot serialize {type(x)!r}")

    return encode(obj, 1)


def state_to_dict(state: DensityOperator) -> dict:
    return {
        "dims": list(state.dims),
        "matrix_real": state.matrix.real.tolist(),
        "matrix_imag": state.matrix.imag.tolist(),
    }


def state_from_dict(payload: dict) -> DensityOperator:
    try:
        dims = tuple(int(d) for d in payload["dims"])
        matrix = np.asarray(payload["matrix_real"], dtype=float) + 1j * np.asarray(
            payload["matrix_imag"], dtype=float
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed state payload: {exc}") from exc
    return density(matrix, dims)


def save_state(state: DensityOperator, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_17(state_to_dict(state), indent=1))
        fh.write("\n")


def load_state(path) -> DensityOperator:
    with open(path) as fh:
        return state_from_dict(json.load(fh))


def channel_to_dict(channel: QuantumChannel) -> dict:
    return {
        "dimIn": channel.dim_in,
        "dimOut": channel.dim_out,
        "kraus": [
            {"real": K.real.tolist(), "imag": K.imag.tolist()} for K in channel.kraus
        ],
    }


def channel_from_dict(payload: dict) -> QuantumChannel:
    try:
        dim_in = int(payload["dimIn"])
        dim_out = int(payload["dimOut"])
        kraus = tuple(
            np.asarray(item["real"], dtype=float) + 1j * np.asarray(item["imag"], dtype=float)
            for item in payload["kraus"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed channel payload: {exc}") from exc
    # File tolerance is looser than the constructor's: repair tiny trace
    # preservation defects before validation rejects honest round trips.
    tp = sum(K.conj().T @ K for K in kraus)
    err = float(np.abs(tp - np.eye(dim_in)).max())
    if err > 1e-8:
        raise ValidationError(f"channel file violates trace preservation by {err:.3e}")
    if err > 1e-10:
        correction = np.linalg.inv(hermitize(tp))
        root = _psd_sqrt(correction)
        kraus = tuple(K @ root for K in kraus)
    return QuantumChannel(kraus, dim_in, dim_out)


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(hermitize(matrix))
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


def save_channel(channel: QuantumChannel, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_17(channel_to_dict(channel), indent=1))
        fh.write("\n")


def load_channel(path) -> QuantumChannel:
    with open(path) as fh:
        return channel_from_dict(json.load(fh))
