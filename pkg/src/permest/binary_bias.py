"""Small-bias sample spaces over {0,1}^n, exposed as enumerable seed maps.

Construction: field powering. A seed is a pair (r, f) of GF(2^m) elements
with m chosen so that 2^m * eps >= n; output bit i is the GF(2) inner
product of the bit vectors of r and f^i. For any nonzero test vector a the
character sum collapses to Pr_f[p_a(f) = 0] where p_a(x) = XOR_i a_i x^i is
a nonzero polynomial of degree < n, so the bias is at most (n-1)/2^m <= eps
while the seed is only 2m bits.

The audit computes every character sum exactly by histogramming the support
over the 2^n cells and applying a Walsh-Hadamard transform.
"""

from __future__ import annotations

import numpy as np

from .errors import CapacityError, DescriptorError
from .estimators import PhaseVector

__all__ = [
    "SampleSpace",
    "build_binary_space",
    "exhaustive_binary_space",
    "measure_bias",
    "space_from_descriptor",
]

MAX_SEED_BITS = 40
MAX_EXHAUSTIVE_N = 24
AUDIT_OP_LIMIT = 1 << 32

# Irreducible polynomials over GF(2), degree m plus the x^m term, m = 1..20.
# Verified by brute-force trial division in the test suite.
IRREDUCIBLE = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
    17: 0x20009,
    18: 0x40081,
    19: 0x80027,
    20: 0x100009,
}
MAX_FIELD_BITS = max(IRREDUCIBLE)


def gf2_mul(x: int, y: int, m: int) -> int:
    """Carry-less product of x and y reduced modulo the degree-m polynomial."""
    poly = IRREDUCIBLE[m]
    r = 0
    while y:
        if y & 1:
            r ^= x
        y >>= 1
        x <<= 1
        if (x >> m) & 1:
            x ^= poly
    return r


def _parity_u32(v: np.ndarray) -> np.ndarray:
    """Bitwise parity of each element of a uint32 array."""
    v = v.copy()
    v ^= v >> np.uint32(16)
    v ^= v >> np.uint32(8)
    v ^= v >> np.uint32(4)
    return (np.uint32(0x6996) >> (v & np.uint32(0xF))) & np.uint32(1)


def _walsh_spectrum(p: np.ndarray) -> np.ndarray:
    """All 2^n character sums sum_x p[x] (-1)^{popcount(a & x)}."""
    a = np.array(p, dtype=np.float64)
    size = a.shape[0]
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        top = a[:, 0, :] + a[:, 1, :]
        bot = a[:, 0, :] - a[:, 1, :]
        a = np.stack((top, bot), axis=1)
        h *= 2
    return a.reshape(size)


class SampleSpace:
    """A finite distribution over {0,1}^n given by a seed -> vector map.

    Enumerating all ``2**seed_bits`` seeds yields the full support. The
    declared bias bound is certified by construction (or zero for the
    uniform space) and can be re-measured exhaustively with
    :func:`measure_bias`.
    """

    def __init__(
        self, n: int, field_bits: int, epsilon: float, exhaustive: bool = False
    ):
        self.n = n
        self.moduli = (2,) * n
        self.field_bits = field_bits
        self.poly = IRREDUCIBLE[field_bits] if field_bits else 0
        self.declared_epsilon = float(epsilon)
        self.exhaustive = exhaustive
        self.seed_bits = n if exhaustive else 2 * field_bits
        self._hist: np.ndarray | None = None

    @property
    def seed_count(self) -> int:
        return 1 << self.seed_bits

    @property
    def construction_bound(self) -> float:
        """The bias bound the powering argument certifies: (n-1)/2^m."""
        if self.exhaustive:
            return 0.0
        return (self.n - 1) / (1 << self.field_bits)

    def generator(self, seed: int) -> PhaseVector:
        if not (0 <= seed < self.seed_count):
            raise ValueError(f"seed must lie in [0, {self.seed_count})")
        if self.exhaustive:
            phases = tuple((seed >> i) & 1 for i in range(self.n))
        else:
            m = self.field_bits
            r = seed & ((1 << m) - 1)
            f = seed >> m
            phases = []
            power = 1
            for _ in range(self.n):
                phases.append(int(r & power).bit_count() & 1)
                power = gf2_mul(power, f, m)
            phases = tuple(phases)
        return PhaseVector(self.moduli, phases)

    def support_histogram(self) -> np.ndarray:
        """Probability of each of the 2^n cells, cell index = phase bits."""
        if self._hist is not None:
            return self._hist
        if self.n > MAX_EXHAUSTIVE_N:
            raise CapacityError(f"histogram capped at n <= {MAX_EXHAUSTIVE_N}")
        if self.exhaustive:
            hist = np.full(1 << self.n, 1.0 / (1 << self.n))
        else:
            m = self.field_bits
            counts = np.zeros(1 << self.n, dtype=np.int64)
            r = np.arange(1 << m, dtype=np.uint32)
            for f in range(1 << m):
                power = 1
                masks = np.zeros(1 << m, dtype=np.uint32)
                for i in range(self.n):
                    masks |= _parity_u32(r & np.uint32(power)) << np.uint32(i)
                    power = gf2_mul(power, f, m)
                counts += np.bincount(masks, minlength=1 << self.n)
            hist = counts / float(self.seed_count)
        self._hist = hist
        return hist

    def support_cells(self) -> tuple[np.ndarray, np.ndarray]:
        """Occupied cells as an (M, n) 0/1 phase array plus probabilities."""
        hist = self.support_histogram()
        idx = np.nonzero(hist)[0]
        cells = ((idx[:, None] >> np.arange(self.n)) & 1).astype(np.int8)
        return cells, hist[idx]

    def descriptor(self) -> str:
        text = (
            f"binary n={self.n} m={self.field_bits} poly={self.poly:#x} "
            f"eps={self.declared_epsilon:.17g}"
        )
        if self.exhaustive:
            text += " mode=exhaustive"
        return text


def build_binary_space(n: int, epsilon: float) -> SampleSpace:
    """An eps-biased space over {0,1}^n with 2*ceil(log2(n/eps)) seed bits."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    m = 1
    while (1 << m) * epsilon < n:
        m += 1
        if m > MAX_FIELD_BITS or 2 * m > MAX_SEED_BITS:
            raise CapacityError(
                f"n={n}, eps={epsilon} needs more than {MAX_SEED_BITS} seed bits"
            )
    return SampleSpace(n, m, epsilon)


def exhaustive_binary_space(n: int) -> SampleSpace:
    """The uniform (0-biased) space, n seed bits."""
    if not (1 <= n <= MAX_EXHAUSTIVE_N):
        raise CapacityError(f"exhaustive space capped at n <= {MAX_EXHAUSTIVE_N}")
    return SampleSpace(n, 0, 0.0, exhaustive=True)


def measure_bias(space: SampleSpace) -> float:
    """max over nonzero a of |E[(-1)^{a.x}]|, every character enumerated."""
    if space.seed_count * (1 << space.n) > AUDIT_OP_LIMIT:
        raise CapacityError("audit cost exceeds the 2^32 operation cap")
    spectrum = _walsh_spectrum(space.support_histogram())
    spectrum[0] = 0.0
    return float(np.max(np.abs(spectrum)))


def space_from_descriptor(text: str) -> SampleSpace:
    """Rebuild a binary space from its descriptor line."""
    tokens = text.split()
    if not tokens or tokens[0] != "binary":
        raise DescriptorError(f"not a binary space descriptor: {text!r}")
    fields = {}
    for tok in tokens[1:]:
        if "=" not in tok:
            raise DescriptorError(f"malformed descriptor token {tok!r}")
        key, val = tok.split("=", 1)
        fields[key] = val
    try:
        n = int(fields["n"])
        m = int(fields["m"])
        eps = float(fields["eps"])
    except (KeyError, ValueError) as exc:
        raise DescriptorError(f"bad descriptor fields in {text!r}: {exc}") from None
    if fields.get("mode") == "exhaustive":
        return exhaustive_binary_space(n)
    if m not in IRREDUCIBLE:
        raise DescriptorError(f"unsupported field size m={m}")
    if "poly" in fields and int(fields["poly"], 16) != IRREDUCIBLE[m]:
        raise DescriptorError("descriptor polynomial does not match the table")
    return SampleSpace(n, m, eps)
