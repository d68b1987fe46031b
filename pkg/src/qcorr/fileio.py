"""JSON state, channel and findings files.

Complex entries are written as ``[re, im]`` pairs in row-major nested lists.
Floats are serialized with ``repr`` precision so a write/read cycle is exact.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channel import KrausChannel
from .qmat import BipartiteState

MAX_DIM = 64


class FileFormatError(ValueError):
    pass


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data, shape=None) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"matrix entries must be [re, im] pairs: {exc}") from None
    if arr.ndim < 2 or arr.shape[-1] != 2:
        raise FileFormatError("matrix entries must be [re, im] pairs")
    m = arr[..., 0] + 1j * arr[..., 1]
    if shape is not None:
        if m.size != shape[0] * shape[1]:
            raise FileFormatError(f"expected {shape[0] * shape[1]} entries, found {m.size}")
        m = m.reshape(shape)
    return m


def state_to_dict(s: BipartiteState, **meta) -> dict:
    out = {"dims": [s.dim_a, s.dim_b], "matrix": encode_matrix(s.rho)}
    if s.separable:
        out["separable"] = True
    out.update(meta)
    return out


def state_from_dict(data: dict) -> BipartiteState:
    """Parse a state record; raises ``FileFormatError`` or ``InvalidStateError``."""
    try:
        d_a, d_b = (int(x) for x in data["dims"])
    except (KeyError, TypeError, ValueError):
        raise FileFormatError("'dims' must be a pair of positive integers") from None
    if d_a < 1 or d_b < 1:
        raise FileFormatError("'dims' must be a pair of positive integers")
    n = d_a * d_b
    if n > MAX_DIM:
        raise FileFormatError(f"total dimension {n} exceeds the cap of {MAX_DIM}")
    if "matrix" not in data:
        raise FileFormatError("missing 'matrix'")
    rho = decode_matrix(data["matrix"], (n, n))
    return BipartiteState(rho, d_a, d_b, separable=bool(data.get("separable", False)))


def channel_to_dict(ch: KrausChannel) -> dict:
    return {"dim_in": ch.dim_in, "dim_out": ch.dim_out, "kraus": [encode_matrix(m) for m in ch.kraus]}


def channel_from_dict(data: dict) -> KrausChannel:
    try:
        d_in, d_out = int(data["dim_in"]), int(data["dim_out"])
        ops = [decode_matrix(m, (d_out, d_in)) for m in data["kraus"]]
    except (KeyError, TypeError):
        raise FileFormatError("channel file needs 'dim_in', 'dim_out' and 'kraus'") from None
    if not ops:
        raise FileFormatError("channel file has no Kraus operators")
    return KrausChannel(np.stack(ops))


def _read(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: not valid JSON ({exc})") from None


def _write(path, data):
    text = json.dumps(data, indent=1) + "\n"
    if path is None or str(path) == "-":
        return text
    Path(path).write_text(text)
    return text


def read_state(path) -> BipartiteState:
    return state_from_dict(_read(path))


def write_state(s: BipartiteState, path=None, **meta) -> str:
    return _write(path, state_to_dict(s, **meta))


def read_channel(path) -> KrausChannel:
    return channel_from_dict(_read(path))


def write_channel(ch: KrausChannel, path=None) -> str:
    return _write(path, channel_to_dict(ch))


def findings_to_dict(findings, **meta) -> dict:
    return {
        **meta,
        "findings": [
            state_to_dict(
                f.state,
                q_hat=f.q_hat,
                s_a=f.s_a,
                margin=f.margin,
                escalation_level=f.escalation_level,
                **f.digest,
            )
            for f in findings
        ],
    }


def read_findings(path) -> list[tuple[BipartiteState, dict]]:
    data = _read(path)
    return [(state_from_dict(rec), rec) for rec in data.get("findings", [])]
