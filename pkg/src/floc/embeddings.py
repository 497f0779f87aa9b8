"""Token ground set and cosine-similarity construction.

Tokens are stored as float32 rows (one embedding per row, temporal
order); similarity values are stored as float32 while every dot product
and reduction that feeds a comparison accumulates in float64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroNormRow

RAW = "raw-cosine"
SHIFTED = "shifted"

_ZERO_NORM = 1e-12


@dataclass(frozen=True)
class TokenMatrix:
    """Ground set of n d-dimensional embedding rows (float32, row-major)."""

    data: np.ndarray

    def __post_init__(self):
        if self.data.ndim != 2:
            raise ValueError("token matrix must be 2-dimensional")
        if self.data.shape[1] < 1:
            raise ValueError("embedding dimension must be >= 1")
        if not np.all(np.isfinite(self.data)):
            raise ValueError("token matrix contains non-finite values")

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


def as_tokens(array) -> TokenMatrix:
    """Coerce an array-like to a float32 TokenMatrix without changing row order."""
    data = np.ascontiguousarray(array, dtype=np.float32)
    if data.ndim == 1:
        data = data.reshape(1, -1)
    return TokenMatrix(data)


@dataclass(frozen=True)
class SimilarityMatrix:
    """Pairwise cosine similarities; `shifted` means every entry is raw + 1."""

    values: np.ndarray
    kind: str

    @property
    def n(self) -> int:
        return self.values.shape[0]


def normalize_rows(tokens: TokenMatrix, allow_zero_rows: bool = False) -> TokenMatrix:
    """Scale every row to unit Euclidean norm (norms taken in float64).

    Raises ZeroNormRow for degenerate rows unless allow_zero_rows is set,
    in which case such rows become the canonical basis vector e_1.
    """
    data = tokens.data.astype(np.float64)
    norms = np.linalg.norm(data, axis=1)
    bad = np.flatnonzero(norms < _ZERO_NORM)
    if bad.size:
        if not allow_zero_rows:
            raise ZeroNormRow(int(bad[0]))
        data[bad] = 0.0
        data[bad, 0] = 1.0
        norms[bad] = 1.0
    return TokenMatrix((data / norms[:, None]).astype(np.float32))


def cosine_similarity(a, b) -> float:
    """Cosine of the angle between two embedding rows."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na < _ZERO_NORM:
        raise ZeroNormRow(0)
    if nb < _ZERO_NORM:
        raise ZeroNormRow(1)
    return float(np.dot(a, b) / (na * nb))


def similarity_matrix(
    tokens: TokenMatrix, kind: str = SHIFTED, allow_zero_rows: bool = False
) -> SimilarityMatrix:
    """All-pairs cosine matrix, clipped to [-1, 1], optionally shifted by +1.

    The shift makes every entry nonnegative so the facility-location
    objective is monotone; shifted values equal raw values + 1 exactly in
    float32.
    """
    if kind not in (RAW, SHIFTED):
        raise ValueError(f"unknown similarity kind: {kind!r}")
    if tokens.n < 1:
        raise ValueError("similarity matrix requires at least one token")
    unit = normalize_rows(tokens, allow_zero_rows=allow_zero_rows).data.astype(np.float64)
    gram = unit @ unit.T
    np.clip(gram, -1.0, 1.0, out=gram)
    values = gram.astype(np.float32)
    if kind == SHIFTED:
        values = values + np.float32(1.0)
    return SimilarityMatrix(values, kind)


def shifted_similarity_fast(unit_rows: np.ndarray) -> np.ndarray:
    """Shifted similarity block built with float32 matmul.

    Single-precision accumulation (instead of the float64 path above)
    keeps large selection runs memory- and time-bounded; callers must
    read candidate similarities by row so rounding asymmetry is never
    observed.
    """
    gram = unit_rows @ unit_rows.T
    np.clip(gram, -1.0, 1.0, out=gram)
    gram += np.float32(1.0)
    return gram
