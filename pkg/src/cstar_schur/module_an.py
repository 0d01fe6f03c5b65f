"""The standard Hilbert C*-module A^n over a finite-dimensional C*-algebra.

Vectors are n-tuples of algebra elements with the A-valued inner product

    <x, y> = sum_j x_j y_j^*,

linear in the first slot. The induced scalar norm is ||<x,x>||^(1/2).
Internally a vector stores one (n, k_b, k_b) array per block.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraShape, Element, _lock
from .errors import StructureError


class AVector:
    """An element of A^n, stored blockwise as (n, k, k) arrays."""

    __slots__ = ("shape", "n", "blocks")

    def __init__(self, shape: AlgebraShape, blocks):
        if len(blocks) != len(shape.blocks):
            raise StructureError(f"expected {len(shape.blocks)} blocks")
        n = None
        mats = []
        for k, raw in zip(shape.blocks, blocks):
            arr = np.array(raw, dtype=np.complex128)
            if arr.ndim != 3 or arr.shape[1:] != (k, k):
                raise StructureError(f"block array must be (n, {k}, {k}), got {arr.shape}")
            if n is None:
                n = arr.shape[0]
            elif arr.shape[0] != n:
                raise StructureError("blocks disagree on vector length")
            mats.append(_lock(arr))
        if n is None or n < 1:
            raise StructureError("vectors need length >= 1")
        self.shape = shape
        self.n = n
        self.blocks = tuple(mats)

    @classmethod
    def _wrap(cls, shape: AlgebraShape, n: int, blocks) -> "AVector":
        obj = object.__new__(cls)
        obj.shape = shape
        obj.n = n
        obj.blocks = tuple(_lock(b) for b in blocks)
        return obj

    @classmethod
    def from_elements(cls, entries) -> "AVector":
        entries = list(entries)
        if not entries:
            raise StructureError("vectors need length >= 1")
        shape = entries[0].shape
        for e in entries:
            if e.shape != shape:
                raise StructureError("entries live in different algebras")
        blocks = tuple(
            np.stack([e.blocks[b] for e in entries])
            for b in range(len(shape.blocks))
        )
        return cls._wrap(shape, len(entries), blocks)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, j: int) -> Element:
        return Element._wrap(self.shape, tuple(b[j].copy() for b in self.blocks))

    def _require_same(self, other: "AVector") -> None:
        if self.shape != other.shape or self.n != other.n:
            raise StructureError("vectors live in different modules")

    def __add__(self, other):
        if not isinstance(other, AVector):
            return NotImplemented
        self._require_same(other)
        return AVector._wrap(
            self.shape, self.n, tuple(a + b for a, b in zip(self.blocks, other.blocks))
        )

    def __sub__(self, other):
        if not isinstance(other, AVector):
            return NotImplemented
        self._require_same(other)
        return AVector._wrap(
            self.shape, self.n, tuple(a - b for a, b in zip(self.blocks, other.blocks))
        )

    def entrywise_adjoint(self) -> "AVector":
        """The vector (x_1^*, ..., x_n^*)."""
        return AVector._wrap(
            self.shape, self.n, tuple(b.conj().transpose(0, 2, 1) for b in self.blocks)
        )

    def to_json(self) -> dict:
        return {"entries": [self[j].to_json() for j in range(self.n)]}

    @classmethod
    def from_json(cls, shape: AlgebraShape, data: dict) -> "AVector":
        return cls.from_elements(
            Element.from_json(shape, entry) for entry in data["entries"]
        )

    def __repr__(self):
        return f"AVector(n={self.n}, shape={self.shape.blocks})"


def left_mul(a: Element, x: AVector) -> AVector:
    """The module action (a x)_j = a x_j."""
    if a.shape != x.shape:
        raise StructureError("algebra shapes differ")
    return AVector._wrap(
        x.shape,
        x.n,
        tuple(np.einsum("ab,jbc->jac", ab, xb) for ab, xb in zip(a.blocks, x.blocks)),
    )


def inner_product(x: AVector, y: AVector) -> Element:
    """<x, y> = sum_j x_j y_j^*."""
    x._require_same(y)
    return Element._wrap(
        x.shape,
        tuple(
            np.einsum("jab,jcb->ac", xb, yb.conj())
            for xb, yb in zip(x.blocks, y.blocks)
        ),
    )


def vector_norm(x: AVector) -> float:
    """||x|| = ||<x, x>||^(1/2)."""
    return float(np.sqrt(inner_product(x, x).norm()))


def cauchy_schwarz_gap(x: AVector, y: AVector) -> Element:
    """The element ||<y,y>|| <x,x> - <x,y><y,x>, positive for every x, y."""
    x._require_same(y)
    yy = inner_product(y, y)
    xy = inner_product(x, y)
    yx = inner_product(y, x)
    return yy.norm() * inner_product(x, x) - xy * yx


def ones_vector(shape: AlgebraShape, n: int) -> AVector:
    """e_n = (1, 1, ..., 1), the all-units vector."""
    if n < 1:
        raise StructureError("vectors need length >= 1")
    blocks = tuple(
        np.broadcast_to(np.eye(k, dtype=np.complex128), (n, k, k)).copy()
        for k in shape.blocks
    )
    return AVector._wrap(shape, n, blocks)


def zero_vector(shape: AlgebraShape, n: int) -> AVector:
    if n < 1:
        raise StructureError("vectors need length >= 1")
    blocks = tuple(np.zeros((n, k, k), dtype=np.complex128) for k in shape.blocks)
    return AVector._wrap(shape, n, blocks)
