"""Vectorized matrix arithmetic for the enumeration oracles.

Matrices are int64 arrays of field codes with shape ``(..., n, n)``.  Prime
fields use plain integer matmul followed by ``% p``; extension fields go
through lookup tables.  Keys use the same row-major base-q encoding as
``Matrix.key``.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations

import numpy as np

from .field import FieldSpec
from .matrix import Matrix


class Kernel:
    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.q = spec.q
        self.p = spec.p
        self.prime = spec.k == 1
        if not self.prime:
            q = spec.q
            self.add_t = np.array([[spec.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
            self.mul_t = np.array([[spec.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
        self.neg_t = np.array([spec.neg(a) for a in range(spec.q)], dtype=np.int64)

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.prime:
            return np.matmul(A, B) % self.p
        prod = self.mul_t[A[..., :, :, None], B[..., None, :, :]]
        if self.p == 2:
            # addition in GF(2^k) is XOR of the coefficient bits
            return np.bitwise_xor.reduce(prod, axis=-2)
        acc = prod[..., 0, :]
        for k in range(1, prod.shape[-2]):
            acc = self.add_t[acc, prod[..., k, :]]
        return acc

    def neg(self, A: np.ndarray) -> np.ndarray:
        return self.neg_t[A]

    def det(self, X: np.ndarray) -> np.ndarray:
        """Leibniz-formula determinants of a stack ``(..., n, n)``; meant for n <= 4."""
        n = X.shape[-1]
        acc = np.zeros(X.shape[:-2], dtype=np.int64)
        for perm in permutations(range(n)):
            term = np.ones(X.shape[:-2], dtype=np.int64)
            for i, j in enumerate(perm):
                term = (term * X[..., i, j]) % self.p if self.prime else self.mul_t[term, X[..., i, j]]
            inversions = sum(perm[a] > perm[b] for a in range(n) for b in range(a + 1, n))
            if inversions % 2:
                term = self.neg_t[term]
            acc = (acc + term) % self.p if self.prime else self.add_t[acc, term]
        return acc

    def powers(self, n: int) -> np.ndarray:
        return self.q ** np.arange(n * n, dtype=np.int64)

    def encode(self, X: np.ndarray) -> np.ndarray:
        n = X.shape[-1]
        flat = X.reshape(X.shape[:-2] + (n * n,))
        return flat @ self.powers(n)

    def decode(self, keys: np.ndarray, n: int) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        digits = (keys[..., None] // self.powers(n)) % self.q
        return digits.reshape(keys.shape + (n, n))

    def all_matrices(self, n: int) -> np.ndarray:
        return self.decode(np.arange(self.q ** (n * n), dtype=np.int64), n)


@lru_cache(maxsize=None)
def kernel(spec: FieldSpec) -> Kernel:
    return Kernel(spec)


def stack(mats) -> np.ndarray:
    return np.array([m.rows for m in mats], dtype=np.int64)


class ProductSet:
    """An exact finite set of n x n matrices, stored as sorted keys."""

    def __init__(self, spec: FieldSpec, n: int, keys: np.ndarray):
        self.spec = spec
        self.n = n
        self.keys = np.unique(np.asarray(keys, dtype=np.int64))

    @classmethod
    def from_matrices(cls, spec: FieldSpec, n: int, mats) -> "ProductSet":
        return cls(spec, n, np.array([m.key() for m in mats], dtype=np.int64))

    def __len__(self):
        return len(self.keys)

    def contains_keys(self, keys: np.ndarray) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        if len(self.keys) == 0:
            return np.zeros(keys.shape, dtype=bool)
        idx = np.searchsorted(self.keys, keys)
        idx = np.minimum(idx, len(self.keys) - 1)
        return self.keys[idx] == keys

    def __contains__(self, A: Matrix) -> bool:
        if A.spec != self.spec or A.n != self.n:
            return False
        return bool(self.contains_keys(np.array([A.key()]))[0])

    def stack(self) -> np.ndarray:
        return kernel(self.spec).decode(self.keys, self.n)

    def __iter__(self):
        for k in self.keys:
            yield Matrix.from_key(self.spec, self.n, int(k))

    def __eq__(self, other):
        if not isinstance(other, ProductSet):
            return NotImplemented
        return (self.spec == other.spec and self.n == other.n
                and np.array_equal(self.keys, other.keys))

    def __le__(self, other: "ProductSet") -> bool:
        return bool(other.contains_keys(self.keys).all())

    def __lt__(self, other: "ProductSet") -> bool:
        return self <= other and len(self) < len(other)

    def __repr__(self):
        return f"ProductSet({self.spec}, n={self.n}, size={len(self)})"


def left_products(spec: FieldSpec, left: np.ndarray, right: np.ndarray,
                  budget: int = 4_000_000) -> np.ndarray:
    """Keys of all products ``L @ R`` for ``L`` in ``left``, ``R`` in ``right``."""
    K = kernel(spec)
    n = left.shape[-1]
    chunk = max(1, budget // max(1, len(right) * n * n * (1 if K.prime else n)))
    out = []
    for start in range(0, len(left), chunk):
        L = left[start:start + chunk]
        prods = K.matmul(L[:, None], right[None, :])
        out.append(np.unique(K.encode(prods)))
    return np.unique(np.concatenate(out)) if out else np.empty(0, dtype=np.int64)
