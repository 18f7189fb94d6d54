"""Kronecker-product helpers: dense products, factorized application, axis projectors.

Throughout, product spaces are indexed in Yates order: the first tensor factor
owns the most significant mixed-radix digit, matching ``numpy.kron``.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import ResourceLimitError

#: Largest entry count for a dense Kronecker product (covers 4096 x 4096 tables).
DENSE_KRON_CAP = 2**24


class FactorKind(Enum):
    """Per-coordinate factor of an axis projector.

    P projects onto the first coordinate axis (single 1 at position (0, 0)),
    Q = I - P onto its complement, I is the identity.
    """

    P = "P"
    Q = "Q"
    I = "I"  # noqa: E741 - the conventional name


def kron(a: np.ndarray, b: np.ndarray, *, max_entries: int = DENSE_KRON_CAP) -> np.ndarray:
    """Dense Kronecker product with a size guard."""
    a = np.asarray(a)
    b = np.asarray(b)
    entries = a.size * b.size
    if entries > max_entries:
        raise ResourceLimitError(
            f"kron result with {entries} entries exceeds the cap {max_entries}"
        )
    return np.kron(a, b)


def kron_all(factors: Sequence[np.ndarray], *, max_entries: int = DENSE_KRON_CAP) -> np.ndarray:
    """Kronecker product of a sequence of matrices (empty product is [[1]])."""
    result = np.ones((1, 1), dtype=np.complex128)
    for f in factors:
        result = kron(result, f, max_entries=max_entries)
    return result


def factored_apply(factors: Sequence[np.ndarray], v: Sequence[complex]) -> np.ndarray:
    """Apply ``kron(factors...) @ v`` without materializing the product.

    Each factor must be square; ``v`` has length equal to the product of the
    factor sizes.  The factors are contracted one axis at a time, which costs
    O(s * sum_i s_i) arithmetic and O(s) extra space instead of the O(s^2) of
    the dense product.
    """
    mats = [np.asarray(f, dtype=np.complex128) for f in factors]
    sizes = []
    for f in mats:
        if f.ndim != 2 or f.shape[0] != f.shape[1]:
            raise ValueError(f"factors must be square matrices, got shape {f.shape}")
        sizes.append(f.shape[0])
    v = np.asarray(v, dtype=np.complex128)
    total = math.prod(sizes)
    if v.shape != (total,):
        raise ValueError(f"vector has shape {v.shape}, expected ({total},)")
    w = v.reshape(sizes)
    for axis, f in enumerate(mats):
        w = np.moveaxis(np.tensordot(f, w, axes=([1], [axis])), 0, axis)
    return w.reshape(-1)


def projector_factors(
    kinds: Sequence[FactorKind | str], sizes: Sequence[int]
) -> list[np.ndarray]:
    """The per-coordinate matrices of an axis projector (testing aid)."""
    if len(kinds) != len(sizes):
        raise ValueError("one kind per coordinate required")
    factors = []
    for kind, size in zip(kinds, sizes):
        kind = FactorKind(kind) if not isinstance(kind, FactorKind) else kind
        if size < 1:
            raise ValueError(f"coordinate size must be positive, got {size}")
        if kind is FactorKind.I:
            factors.append(np.eye(size, dtype=np.complex128))
        else:
            p = np.zeros((size, size), dtype=np.complex128)
            p[0, 0] = 1.0
            factors.append(p if kind is FactorKind.P else np.eye(size) - p)
    return factors


def build_projector(
    kinds: Sequence[FactorKind | str],
    sizes: Sequence[int],
    *,
    max_entries: int = DENSE_KRON_CAP,
) -> np.ndarray:
    """Dense Kronecker product of P/Q/I coordinate factors (testing aid only)."""
    return kron_all(projector_factors(kinds, sizes), max_entries=max_entries)
