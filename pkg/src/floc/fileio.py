"""Embedding file format and deterministic result serialization.

Embedding files are little-endian binary: magic "FLOC", version u16,
flags u16, n u64, d u64, then n*d IEEE-754 binary32 values row-major
(24-byte header, 24 + 4*n*d bytes total).  Round-trips are bit-exact.

Result records are JSON with insertion-ordered keys and floats printed
at 17 significant digits, so identical runs produce identical bytes.
"""

from __future__ import annotations

import math
import struct
from pathlib import Path

import numpy as np

from .embeddings import TokenMatrix
from .errors import MalformedFile

MAGIC = b"FLOC"
VERSION = 1
_HEADER = struct.Struct("<4sHHQQ")


def write_embeddings(path, tokens: TokenMatrix):
    data = np.ascontiguousarray(tokens.data, dtype="<f4")
    header = _HEADER.pack(MAGIC, VERSION, 0, tokens.n, tokens.d)
    Path(path).write_bytes(header + data.tobytes())


def read_embeddings(path) -> TokenMatrix:
    blob = Path(path).read_bytes()
    if len(blob) < _HEADER.size:
        raise MalformedFile(f"{path}: shorter than the {_HEADER.size}-byte header")
    magic, version, flags, n, d = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise MalformedFile(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise MalformedFile(f"{path}: unsupported version {version}")
    if flags != 0:
        raise MalformedFile(f"{path}: nonzero flags {flags}")
    expected = _HEADER.size + 4 * n * d
    if len(blob) != expected:
        raise MalformedFile(f"{path}: length {len(blob)} != header-implied {expected}")
    if d < 1:
        raise MalformedFile(f"{path}: embedding dimension {d} must be >= 1")
    data = np.frombuffer(blob, dtype="<f4", offset=_HEADER.size).reshape(n, d)
    if not np.all(np.isfinite(data)):
        raise MalformedFile(f"{path}: payload contains non-finite values")
    return TokenMatrix(np.ascontiguousarray(data))


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"records must hold finite numbers, got {x}")
    return format(x, ".17g")


def dumps_record(obj, indent: int = 0) -> str:
    """Deterministic JSON: insertion-ordered keys, floats at 17 digits."""
    pad = " " * indent
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        out = out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
        return f'"{out}"'
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f'{pad}  {dumps_record(k)}: {dumps_record(v, indent + 2)}' for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = [dumps_record(v, indent) for v in obj]
        return "[" + ", ".join(items) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_record(path, record: dict):
    Path(path).write_text(dumps_record(record) + "\n")
