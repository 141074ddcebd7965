"""Exact permanent computation.

``permanent_naive`` is the permutation-sum reference (factorial time, the
ground truth every other routine is tested against). ``permanent_ryser`` and
``permanent_glynn_exact`` run in O(2^n n) using binary-reflected Gray-code
enumeration: the low coordinates are handled by a precomputed block table,
the high coordinates by a Gray sweep whose single flip per step updates the
row-sum vector in O(n). The alternating outer sum is cancellation-heavy, so
cross-block accumulation is Kahan-compensated (within a block numpy's
pairwise summation is at least as accurate).
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import SizeLimitError
from .estimators import enumerate_phase_space, gengly_batch, phase_space_size
from .matrices import MultiplicitySpec, as_matrix

__all__ = [
    "GRAY_LIMIT",
    "NAIVE_LIMIT",
    "PHASE_SPACE_LIMIT",
    "permanent_gengly_exact",
    "permanent_glynn_exact",
    "permanent_naive",
    "permanent_ryser",
]

NAIVE_LIMIT = 10
GRAY_LIMIT = 30
PHASE_SPACE_LIMIT = 1 << 24

_BLOCK_BITS = 16


def _square(a) -> np.ndarray:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got {a.shape}")
    return a


def permanent_naive(a) -> complex:
    """Sum over all n! permutations of products of matched entries."""
    a = _square(a)
    n = a.shape[0]
    if n > NAIVE_LIMIT:
        raise SizeLimitError(f"permanent_naive is capped at n <= {NAIVE_LIMIT}")
    rows = [[complex(v) for v in row] for row in a]
    total = 0j
    for perm in itertools.permutations(range(n)):
        p = 1 + 0j
        for i, j in enumerate(perm):
            p *= rows[i][j]
        total += p
    return total


def _ctz(x: int) -> int:
    return (x & -x).bit_length() - 1


class _Kahan:
    __slots__ = ("total", "comp")

    def __init__(self):
        self.total = 0j
        self.comp = 0j

    def add(self, term: complex) -> None:
        y = term - self.comp
        t = self.total + y
        self.comp = (t - self.total) - y
        self.total = t


def permanent_ryser(a, block_bits: int = _BLOCK_BITS) -> complex:
    """Ryser's inclusion-exclusion over column subsets in Gray-code order.

    Per(A) = (-1)^n sum_{S subseteq [n]} (-1)^{|S|} prod_i sum_{j in S} a_ij.
    """
    a = _square(a)
    n = a.shape[0]
    if n > GRAY_LIMIT:
        raise SizeLimitError(f"permanent_ryser is capped at n <= {GRAY_LIMIT}")
    low = min(n, block_bits)
    high = n - low
    t = np.arange(1 << low, dtype=np.int64)
    bits = ((t[:, None] >> np.arange(low)) & 1).astype(np.float64)
    low_parity = 1.0 - 2.0 * (np.bitwise_count(t) & 1).astype(np.float64)
    low_sums = bits @ a[:, :low].T  # (2^low, n)
    base = np.zeros(n, dtype=np.complex128)
    member = np.zeros(high, dtype=np.int64)
    high_parity = 1.0
    acc = _Kahan()
    for step in range(1 << high):
        vals = np.prod(low_sums + base[None, :], axis=1)
        acc.add(high_parity * complex(low_parity @ vals))
        nxt = step + 1
        if nxt < (1 << high):
            j = _ctz(nxt)
            if member[j]:
                member[j] = 0
                base = base - a[:, low + j]
            else:
                member[j] = 1
                base = base + a[:, low + j]
            high_parity = -high_parity
    return ((-1) ** n) * acc.total


def permanent_glynn_exact(a, block_bits: int = _BLOCK_BITS) -> complex:
    """Exact average of the Glynn estimator over all 2^n sign vectors.

    The estimator is invariant under a global sign flip, so the first
    coordinate is fixed to +1 and the average runs over the remaining
    2^(n-1) vectors.
    """
    a = _square(a)
    n = a.shape[0]
    if n > GRAY_LIMIT:
        raise SizeLimitError(f"permanent_glynn_exact is capped at n <= {GRAY_LIMIT}")
    if n == 1:
        return complex(a[0, 0])
    free = n - 1
    low = min(free, block_bits)
    high = free - low
    t = np.arange(1 << low, dtype=np.int64)
    low_signs = (1.0 - 2.0 * ((t[:, None] >> np.arange(low)) & 1)).astype(np.float64)
    low_parity = np.prod(low_signs, axis=1)
    low_sums = low_signs @ a[:, 1 : 1 + low].T  # (2^low, n)
    base = a[:, 0] + a[:, 1 + low :].sum(axis=1)
    high_sign = np.ones(high, dtype=np.float64)
    high_parity = 1.0
    acc = _Kahan()
    for step in range(1 << high):
        vals = np.prod(low_sums + base[None, :], axis=1)
        acc.add(high_parity * complex(low_parity @ vals))
        nxt = step + 1
        if nxt < (1 << high):
            j = _ctz(nxt)
            high_sign[j] = -high_sign[j]
            base = base + 2.0 * high_sign[j] * a[:, 1 + low + j]
            high_parity = -high_parity
    return acc.total / (1 << (n - 1))


def permanent_gengly_exact(spec: MultiplicitySpec) -> complex:
    """Exact average of the generalized estimator over the whole phase grid.

    Equals the permanent of the expanded matrix.
    """
    moduli = [s + 1 for s in spec.mults]
    size = phase_space_size(moduli)
    if size > PHASE_SPACE_LIMIT:
        raise SizeLimitError(
            f"phase space has {size} points, cap is {PHASE_SPACE_LIMIT}"
        )
    acc = _Kahan()
    for block in enumerate_phase_space(moduli):
        acc.add(complex(np.sum(gengly_batch(spec, block))))
    return acc.total / size
