"""Small-bias distributions over products of roots of unity.

The target domain is X = R[m_1] x ... x R[m_k] where R[m] is the m-th roots
of unity and m_i = s_i + 1. A distribution is complex-eps-biased when every
nontrivial monomial test |E[x_1^e_1 ... x_k^e_k]| is at most eps. Samples are
stored as integer exponent tuples f with x_i = exp(2*pi*i*f_i/m_i).

Pipeline, bottom to top:

* ``CwiseGenerator``: c-wise independent nearly-uniform tuples, by evaluating
  a random polynomial over F_p at k fixed points and reducing mod m_i.
* ``strong_product_sample``: mixes c-wise independent values, pairwise
  independent sparsifier bits at dyadic densities, and per-level mixing bits
  so that for every nontrivial character the product lands in the pi/8-strong
  arc with probability at least 1/16.
* ``amplify``: a walk on an 8-regular Margulis-Gabber-Galil expander turns
  one base seed into many correlated ones while adding only 3 bits per step.
* ``build_complex_space``: combines L amplified exponent tuples with L
  selector bits; sample = sum_j d_j f^(j) mod m, coordinate-wise.

Every guarantee is re-checked by exhaustive audit (``strong_fraction``,
``measure_complex_bias``); construction parameters at full theoretical
strength exceed the enumerability cap by design, so certified spaces are
either the exhaustive fallback or explicitly sized small assemblies whose
audit passes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DescriptorError, DomainError
from .estimators import PhaseVector, enumerate_phase_space, phase_space_size

__all__ = [
    "AmplifierParams",
    "BETA",
    "C_WISE",
    "ComplexSampleSpace",
    "CwiseGenerator",
    "ExponentVector",
    "GROUP_SIZE",
    "P_FRACTION",
    "Q_EXPONENT",
    "STRONG_FLOOR",
    "StrongProductParams",
    "amplify",
    "build_complex_space",
    "choose_prime",
    "complex_space_from_descriptor",
    "cwise_batch",
    "cwise_tuple",
    "exhaustive_complex_space",
    "measure_complex_bias",
    "strong_fraction",
    "strong_product_sample",
    "theory_ell",
    "theory_seed_bits",
    "theta_strong",
    "walk_batch",
    "walk_failure_fraction",
]

C_WISE = 7
THETA_STRONG = math.pi / 8
THETA_INTERMEDIATE = math.pi / 4
STRONG_FLOOR = 1.0 / 16.0
BETA = 0.5 * abs(1.0 + cmath.exp(1j * math.pi / 8))

# smallest group size t with (1 - 1/16)^t <= 1/3, so that a group of t
# independent draws contains a strong element with probability >= 2/3
GROUP_SIZE = math.ceil(math.log(1.0 / 3.0) / math.log(15.0 / 16.0))
P_FRACTION = 1.0 / (2.0 * GROUP_SIZE)
# the tail exponent is not pinned down numerically by the analysis; surfaced
# in descriptors, conservatively matched to the strong fraction
Q_EXPONENT = P_FRACTION

MAX_SEED_BITS = 40
FALLBACK_LIMIT = 1 << 20
AUDIT_SUPPORT_LIMIT = 1 << 24
AUDIT_OP_LIMIT = 1 << 32
TABLE_LIMIT = 1 << 26

# mirrors the binary-module table; only tiny degrees are needed here
_GF_POLY = {1: 0x3, 2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x43}


def theta_strong(lam: complex, theta: float) -> bool:
    """Whether |arg lam| >= theta for a unit-norm lam (boundary inclusive)."""
    if abs(abs(lam) - 1.0) > 1e-9:
        raise DomainError(f"theta_strong needs a unit-norm input, got |{lam}|")
    return abs(cmath.phase(lam)) >= theta


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def choose_prime(k: int, moduli) -> int:
    """Smallest prime exceeding max(k, max moduli, 2c)."""
    p = max(k, max(moduli), 2 * C_WISE) + 1
    while not _is_prime(p):
        p += 1
    return p


@dataclass(frozen=True)
class ExponentVector:
    """A character index: integers e_i with 0 <= e_i <= s_i."""

    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))

    @property
    def is_zero(self) -> bool:
        return not any(self.entries)


@dataclass(frozen=True)
class CwiseGenerator:
    """c-wise independent tuples: a degree-(ncoeffs-1) polynomial over F_p
    evaluated at points 0..k-1, reduced mod m_i per coordinate.

    Each coordinate is within statistical distance m_i/p of uniform; any
    ``ncoeffs`` of the pre-reduction values are exactly independent.
    """

    prime: int
    moduli: tuple[int, ...]
    ncoeffs: int

    def __post_init__(self):
        moduli = tuple(int(m) for m in self.moduli)
        object.__setattr__(self, "moduli", moduli)
        if not _is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if self.prime <= len(moduli) or self.prime <= max(moduli):
            raise ValueError("prime must exceed both k and every modulus")
        if not (1 <= self.ncoeffs):
            raise ValueError("need at least one coefficient")

    @property
    def seed_count(self) -> int:
        return self.prime ** self.ncoeffs

    @property
    def degree(self) -> int:
        return self.ncoeffs - 1


def cwise_batch(gen: CwiseGenerator, seeds: np.ndarray) -> np.ndarray:
    """Vectorized tuple generation; seeds are base-p coefficient encodings."""
    seeds = np.asarray(seeds, dtype=np.int64)
    if np.any(seeds < 0) or np.any(seeds >= gen.seed_count):
        raise ValueError(f"seeds must lie in [0, {gen.seed_count})")
    p = gen.prime
    coeffs = []
    t = seeds.copy()
    for _ in range(gen.ncoeffs):
        coeffs.append(t % p)
        t //= p
    k = len(gen.moduli)
    out = np.empty((seeds.shape[0], k), dtype=np.int64)
    for i in range(k):
        acc = np.zeros_like(seeds)
        for c in reversed(coeffs):
            acc = (acc * i + c) % p
        out[:, i] = acc % gen.moduli[i]
    return out


def cwise_tuple(gen: CwiseGenerator, seed: int) -> tuple[int, ...]:
    return tuple(int(v) for v in cwise_batch(gen, np.array([seed]))[0])


@dataclass(frozen=True)
class StrongProductParams:
    """Constants of the strong-product construction."""

    c: int = C_WISE
    theta_strong: float = THETA_STRONG
    theta_intermediate: float = THETA_INTERMEDIATE
    success_floor: float = STRONG_FLOOR

    def membership_probability(self, h: int) -> float:
        return min(2.0 ** (1 - h), 1.0)


DEFAULT_STRONG_PARAMS = StrongProductParams()


def _gf_const_table(bits: int, point: int) -> np.ndarray:
    """Lookup table for multiplication by a constant in GF(2^bits)."""
    poly = _GF_POLY[bits]
    tab = np.zeros(1 << bits, dtype=np.int64)
    for v in range(1 << bits):
        a, b, r = v, point, 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if (a >> bits) & 1:
                a ^= poly
        tab[v] = r
    return tab


class StrongProductGenerator:
    """Seeded map producing exponent tuples whose induced character products
    are pi/8-strong with probability at least 1/16 for every nontrivial
    character.

    Seed layout (mixed radix): c-wise polynomial coefficients in F_p, then
    an affine pairwise-independent hash over GF(2^B) driving the dyadic
    sparsifier bits (shared across levels h, thresholded per level), then
    one mixing bit per level h = 0..floor(log2 k).
    """

    def __init__(self, moduli, params: StrongProductParams = DEFAULT_STRONG_PARAMS):
        moduli = tuple(int(m) for m in moduli)
        if any(m < 2 for m in moduli):
            raise ValueError("moduli must all be >= 2")
        self.moduli = moduli
        self.params = params
        k = len(moduli)
        self.k = k
        self.prime = choose_prime(k, moduli)
        # k <= c makes any-c-wise independence the same as full independence,
        # so k coefficients suffice and keep the seed space enumerable
        self.ncoeffs = min(params.c, k)
        self.cwise = CwiseGenerator(self.prime, moduli, self.ncoeffs)
        self.hmax = k.bit_length() - 1
        self.gf_bits = max((k - 1).bit_length(), self.hmax - 1, 1)
        self.n_u = self.cwise.seed_count
        self.n_v = 1 << (2 * self.gf_bits)
        self.n_b = 1 << (self.hmax + 1)
        self.seed_count = self.n_u * self.n_v * self.n_b
        self._tables = [_gf_const_table(self.gf_bits, i) for i in range(k)]
        self._exponents: np.ndarray | None = None

    def sample_batch(self, seeds: np.ndarray) -> np.ndarray:
        seeds = np.asarray(seeds, dtype=np.int64)
        if np.any(seeds < 0) or np.any(seeds >= self.seed_count):
            raise ValueError(f"seeds must lie in [0, {self.seed_count})")
        k = self.k
        u_seed = seeds % self.n_u
        rest = seeds // self.n_u
        v_seed = rest % self.n_v
        b_bits = rest // self.n_v
        # one shared draw backs every level h; the sparsifier bits only
        # zero coordinates, so reducing mod m_i up front is equivalent
        u = cwise_batch(self.cwise, u_seed)
        alpha = v_seed & ((1 << self.gf_bits) - 1)
        beta = v_seed >> self.gf_bits
        v = np.empty((seeds.shape[0], k), dtype=np.int64)
        for i in range(k):
            v[:, i] = alpha ^ self._tables[i][beta]
        f = np.zeros((seeds.shape[0], k), dtype=np.int64)
        for h in range(self.hmax + 1):
            if h <= 1:
                w = np.ones(v.shape, dtype=bool)
            else:
                w = v < (1 << (self.gf_bits - (h - 1)))
            bh = ((b_bits >> h) & 1)[:, None]
            f += bh * (u * w)
        for i in range(k):
            f[:, i] %= self.moduli[i]
        return f.astype(np.int8)

    def sample(self, seed: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.sample_batch(np.array([seed]))[0])

    def exponent_table(self) -> np.ndarray:
        """All seed outputs, (seed_count, k) int8, cached."""
        if self._exponents is None:
            if self.seed_count > TABLE_LIMIT:
                raise CapacityError(
                    f"{self.seed_count} seeds exceed the exponent-table cap"
                )
            chunks = []
            for lo in range(0, self.seed_count, 1 << 20):
                hi = min(lo + (1 << 20), self.seed_count)
                chunks.append(self.sample_batch(np.arange(lo, hi, dtype=np.int64)))
            self._exponents = np.concatenate(chunks, axis=0)
        return self._exponents


@lru_cache(maxsize=None)
def _strong_generator(
    moduli: tuple[int, ...], params: StrongProductParams
) -> StrongProductGenerator:
    return StrongProductGenerator(moduli, params)


def strong_product_sample(
    params: StrongProductParams, moduli, seed: int
) -> tuple[int, ...]:
    """One exponent tuple from the strong-product generator."""
    return _strong_generator(tuple(int(m) for m in moduli), params).sample(seed)


def strong_fraction(
    moduli,
    exponent,
    params: StrongProductParams = DEFAULT_STRONG_PARAMS,
    theta_ratio: tuple[int, int] = (1, 16),
) -> float:
    """Exhaustive fraction of seeds whose character product is theta-strong.

    theta_ratio is theta/(2*pi) as an exact fraction, so the arc test runs
    in integer arithmetic with no rounding at the boundary.
    """
    moduli = tuple(int(m) for m in moduli)
    entries = exponent.entries if isinstance(exponent, ExponentVector) else tuple(exponent)
    if len(entries) != len(moduli):
        raise ValueError("exponent length must match moduli")
    if not any(e % m for e, m in zip(entries, moduli)):
        raise ValueError("the zero exponent vector indexes the trivial character")
    gen = _strong_generator(moduli, params)
    table = gen.exponent_table()
    lcm = math.lcm(*moduli)
    weights = [(e * (lcm // m)) % lcm for e, m in zip(entries, moduli)]
    # phases stay tiny (< k * lcm * max modulus), so accumulate in int32
    num = np.zeros(table.shape[0], dtype=np.int32)
    for i, w in enumerate(weights):
        if w:
            num += table[:, i].astype(np.int32) * np.int32(w)
    num %= lcm
    a, b = theta_ratio
    strong = (b * num >= a * lcm) & (b * (lcm - num) >= a * lcm)
    return float(np.mean(strong))


@dataclass(frozen=True)
class AmplifierParams:
    """Expander-walk parameters: Margulis-Gabber-Galil graph on Z_m x Z_m
    with 2^vertex_bits vertices, 8-regular, 3 bits per step."""

    vertex_bits: int
    walk_length: int
    group_size: int = 1
    p_fraction: float = P_FRACTION
    q_exponent: float = Q_EXPONENT
    degree: int = 8

    def __post_init__(self):
        if self.vertex_bits < 2 or self.vertex_bits % 2:
            raise ValueError("vertex_bits must be even and >= 2")
        if self.walk_length < 1:
            raise ValueError("walk_length must be >= 1")

    @property
    def seed_bits(self) -> int:
        return self.vertex_bits + 3 * (self.walk_length - 1)


def walk_batch(params: AmplifierParams, seeds: np.ndarray) -> np.ndarray:
    """Vectorized walks: (N,) seeds -> (N, walk_length) vertex indices."""
    seeds = np.asarray(seeds, dtype=np.int64)
    r = params.vertex_bits
    half = r // 2
    mask = (1 << half) - 1
    v0 = seeds & ((1 << r) - 1)
    x = (v0 >> half) & mask
    y = v0 & mask
    out = np.empty((seeds.shape[0], params.walk_length), dtype=np.int64)
    out[:, 0] = (x << half) | y
    steps = seeds >> r
    for t in range(1, params.walk_length):
        c = (steps >> (3 * (t - 1))) & 7
        nx = np.where(c == 0, x + 2 * y,
             np.where(c == 1, x - 2 * y,
             np.where(c == 2, x + 2 * y + 1,
             np.where(c == 3, x - 2 * y - 1, x)))) & mask
        ny = np.where(c == 4, y + 2 * x,
             np.where(c == 5, y - 2 * x,
             np.where(c == 6, y + 2 * x + 1,
             np.where(c == 7, y - 2 * x - 1, y)))) & mask
        x, y = nx, ny
        out[:, t] = (x << half) | y
    return out


def amplify(params: AmplifierParams, walk_seed: int) -> list[int]:
    """The walk's vertex sequence for one seed (start vertex, then one
    8-way choice per step)."""
    if not (0 <= walk_seed < (1 << params.seed_bits)):
        raise ValueError(f"walk seed must lie in [0, 2^{params.seed_bits})")
    return [int(v) for v in walk_batch(params, np.array([walk_seed]))[0]]


def walk_failure_fraction(
    params: AmplifierParams,
    good: np.ndarray,
    sample_seeds: int | None = None,
    rng_seed: int = 0,
) -> float:
    """Fraction of walk seeds visiting ``good`` fewer than walk_length/2
    times. Exhaustive when the seed space fits, else seeded sampling."""
    if good.shape[0] != (1 << params.vertex_bits):
        raise ValueError("good-set mask must cover the vertex space")
    total_bits = params.seed_bits
    if sample_seeds is None:
        if total_bits > 26:
            raise CapacityError(
                f"2^{total_bits} walk seeds cannot be enumerated; pass sample_seeds"
            )
        seeds = np.arange(1 << total_bits, dtype=np.int64)
    else:
        rng = np.random.default_rng(rng_seed)
        seeds = rng.integers(0, 1 << total_bits, size=sample_seeds, dtype=np.int64)
    hits = good[walk_batch(params, seeds)].sum(axis=1)
    return float(np.mean(hits < params.walk_length / 2.0))


def theory_ell(
    epsilon: float, p_fraction: float = P_FRACTION, q_exponent: float = Q_EXPONENT
) -> int:
    """ceil(max(log_{1/2}(eps/2)/q, log_beta(eps/2)/p))."""
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    half = math.log(epsilon / 2.0)
    return int(
        math.ceil(
            max(half / math.log(0.5) / q_exponent, half / math.log(BETA) / p_fraction)
        )
    )


def _base_vertex_bits(seed_count: int) -> int:
    bits = max(2, (seed_count - 1).bit_length())
    return bits + (bits & 1)


def theory_seed_bits(moduli, epsilon) -> int:
    """Seed length of the full-strength construction (grows as
    O(log n + log 1/eps); far beyond the enumerability cap for any
    practical epsilon, which is why builds fall back or take an explicit
    walk length)."""
    gen = _strong_generator(tuple(int(m) for m in moduli), DEFAULT_STRONG_PARAMS)
    r0 = _base_vertex_bits(gen.seed_count)
    ell = theory_ell(epsilon)
    groups = math.ceil(ell / GROUP_SIZE)
    vertex_bits = GROUP_SIZE * r0 + (GROUP_SIZE * r0) % 2
    lam_count = groups * GROUP_SIZE
    return vertex_bits + 3 * (groups - 1) + lam_count


class ComplexSampleSpace:
    """Enumerable distribution over the roots-of-unity grid.

    ``exhaustive`` spaces cover the grid uniformly (bias exactly zero).
    Constructed spaces combine ``ell`` amplified strong-product tuples with
    ``ell`` selector bits; their declared bias is certified by exhaustive
    audit at build time.
    """

    def __init__(
        self,
        moduli,
        declared_epsilon: float,
        exhaustive: bool,
        base: StrongProductGenerator | None = None,
        amplifier: AmplifierParams | None = None,
    ):
        self.moduli = tuple(int(m) for m in moduli)
        self.declared_epsilon = float(declared_epsilon)
        self.exhaustive = exhaustive
        self.base = base
        self.amplifier = amplifier
        self.beta = BETA
        if exhaustive:
            self.ell = 0
            self.seed_count = phase_space_size(self.moduli)
            self.seed_bits = (self.seed_count - 1).bit_length()
        else:
            assert base is not None and amplifier is not None
            self.ell = amplifier.walk_length * amplifier.group_size
            self.seed_bits = amplifier.seed_bits + self.ell
            self.seed_count = 1 << self.seed_bits
        self._hist: np.ndarray | None = None

    def generator(self, seed: int) -> PhaseVector:
        if not (0 <= seed < self.seed_count):
            raise ValueError(f"seed must lie in [0, {self.seed_count})")
        k = len(self.moduli)
        if self.exhaustive:
            phases = []
            for m in reversed(self.moduli):
                phases.append(seed % m)
                seed //= m
            return PhaseVector(self.moduli, tuple(reversed(phases)))
        amp = self.amplifier
        walk_seed = seed & ((1 << amp.seed_bits) - 1)
        d_bits = seed >> amp.seed_bits
        r0 = _base_vertex_bits(self.base.seed_count) if amp.group_size > 1 else amp.vertex_bits
        per_seed_mask = (1 << r0) - 1
        total = [0] * k
        j = 0
        for vertex in amplify(amp, walk_seed):
            for g in range(amp.group_size):
                base_seed = ((vertex >> (g * r0)) & per_seed_mask) % self.base.seed_count
                if (d_bits >> j) & 1:
                    f = self.base.sample(base_seed)
                    for i in range(k):
                        total[i] += f[i]
                j += 1
        phases = tuple(t % m for t, m in zip(total, self.moduli))
        return PhaseVector(self.moduli, phases)

    def support_histogram(self) -> np.ndarray:
        """Probability array over the grid, shape = moduli."""
        if self._hist is not None:
            return self._hist
        cells = phase_space_size(self.moduli)
        if self.exhaustive:
            hist = np.full(self.moduli, 1.0 / cells)
        else:
            if self.seed_count > AUDIT_SUPPORT_LIMIT:
                raise CapacityError(
                    f"2^{self.seed_bits} seeds exceed the enumeration cap"
                )
            amp = self.amplifier
            assert amp.group_size == 1  # enumerable builds use singleton groups
            table = self.base.exponent_table().astype(np.int64)
            k = len(self.moduli)
            counts = np.zeros(cells, dtype=np.int64)
            radix = np.ones(k, dtype=np.int64)
            for i in range(k - 2, -1, -1):
                radix[i] = radix[i + 1] * self.moduli[i + 1]
            mods = np.array(self.moduli, dtype=np.int64)
            chunk = 1 << 18
            for lo in range(0, self.seed_count, chunk):
                hi = min(lo + chunk, self.seed_count)
                s = np.arange(lo, hi, dtype=np.int64)
                walk_seed = s & ((1 << amp.seed_bits) - 1)
                d_bits = s >> amp.seed_bits
                verts = walk_batch(amp, walk_seed) % self.base.seed_count
                f = table[verts]  # (C, L, k)
                sel = ((d_bits[:, None] >> np.arange(self.ell)) & 1)[:, :, None]
                sums = (f * sel).sum(axis=1) % mods[None, :]
                counts += np.bincount(sums @ radix, minlength=cells)
            hist = (counts / float(self.seed_count)).reshape(self.moduli)
        self._hist = hist
        return hist

    def support_cells(self) -> tuple[np.ndarray, np.ndarray]:
        """Occupied grid cells as an (M, k) phase array plus probabilities."""
        hist = self.support_histogram().reshape(-1)
        idx = np.nonzero(hist)[0]
        k = len(self.moduli)
        radix = np.ones(k, dtype=np.int64)
        for i in range(k - 2, -1, -1):
            radix[i] = radix[i + 1] * self.moduli[i + 1]
        cells = (idx[:, None] // radix[None, :]) % np.array(self.moduli, dtype=np.int64)
        return cells, hist[idx]

    def descriptor(self) -> str:
        s = ",".join(str(m - 1) for m in self.moduli)
        if self.exhaustive:
            p = choose_prime(len(self.moduli), self.moduli)
            return f"complex k={len(self.moduli)} s={s} p={p} c={C_WISE} r=0 l=0 eps=0 mode=exhaustive"
        amp = self.amplifier
        return (
            f"complex k={len(self.moduli)} s={s} p={self.base.prime} c={C_WISE} "
            f"r={amp.vertex_bits} l={self.ell} eps={self.declared_epsilon:.17g} "
            f"mode=constructed t={amp.group_size} "
            f"pfrac={amp.p_fraction:.17g} q={amp.q_exponent:.17g}"
        )


def exhaustive_complex_space(moduli) -> ComplexSampleSpace:
    """Uniform over the full grid; every nontrivial character sum is zero."""
    moduli = tuple(int(m) for m in moduli)
    if any(m < 2 for m in moduli):
        raise ValueError("moduli must all be >= 2")
    if phase_space_size(moduli) > FALLBACK_LIMIT:
        raise CapacityError(
            f"grid has {phase_space_size(moduli)} points, exhaustive cap is "
            f"{FALLBACK_LIMIT}"
        )
    return ComplexSampleSpace(moduli, 0.0, exhaustive=True)


def build_complex_space(
    moduli,
    epsilon: float,
    force_construction: bool = False,
    ell: int | None = None,
    max_seed_bits: int = MAX_SEED_BITS,
) -> ComplexSampleSpace:
    """A complex-eps-biased space over the given grid.

    When the grid itself is enumerable the exhaustive (0-biased) space is
    returned; ``force_construction`` disables that fallback to exercise the
    pipeline. The constructed path uses ``ell`` selector bits (defaulting to
    the full-strength walk length, which exceeds the seed cap for every
    practical epsilon) and certifies the requested bias by exhaustive audit
    before returning.
    """
    moduli = tuple(int(m) for m in moduli)
    if any(m < 2 for m in moduli):
        raise ValueError("moduli must all be >= 2")
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    if not force_construction and phase_space_size(moduli) <= FALLBACK_LIMIT:
        return exhaustive_complex_space(moduli)
    gen = _strong_generator(moduli, DEFAULT_STRONG_PARAMS)
    r0 = _base_vertex_bits(gen.seed_count)
    if ell is None:
        bits = theory_seed_bits(moduli, epsilon)
        if bits > max_seed_bits:
            raise CapacityError(
                f"full-strength construction needs {bits} seed bits "
                f"(cap {max_seed_bits}); pass an explicit ell for a small "
                "audited assembly"
            )
        groups = math.ceil(theory_ell(epsilon) / GROUP_SIZE)
        amp = AmplifierParams(
            GROUP_SIZE * r0 + (GROUP_SIZE * r0) % 2, groups, group_size=GROUP_SIZE
        )
    else:
        if ell < 1:
            raise ValueError("ell must be >= 1")
        amp = AmplifierParams(r0, ell, group_size=1)
        bits = amp.seed_bits + ell
        if bits > max_seed_bits:
            raise CapacityError(f"ell={ell} needs {bits} seed bits (cap {max_seed_bits})")
    space = ComplexSampleSpace(moduli, epsilon, exhaustive=False, base=gen, amplifier=amp)
    if space.seed_count > AUDIT_SUPPORT_LIMIT:
        raise CapacityError(
            "constructed space cannot be audit-certified: "
            f"2^{space.seed_bits} seeds exceed the enumeration cap"
        )
    measured = measure_complex_bias(space)
    if measured > epsilon:
        raise CapacityError(
            f"largest enumerable assembly has measured bias {measured:.4f} "
            f"> requested {epsilon}"
        )
    return space


def measure_complex_bias(space: ComplexSampleSpace) -> float:
    """max over nonzero exponent vectors of |E[x^e]|, via the full DFT of
    the support histogram (every character sum, computed exactly)."""
    cells = phase_space_size(space.moduli)
    if space.seed_count * cells > AUDIT_OP_LIMIT:
        raise CapacityError("audit cost exceeds the 2^32 operation cap")
    spectrum = np.abs(np.fft.fftn(space.support_histogram()))
    spectrum.flat[0] = 0.0
    return float(spectrum.max())


def complex_space_from_descriptor(text: str) -> ComplexSampleSpace:
    """Rebuild a complex space from its descriptor line."""
    tokens = text.split()
    if not tokens or tokens[0] != "complex":
        raise DescriptorError(f"not a complex space descriptor: {text!r}")
    fields = {}
    for tok in tokens[1:]:
        if "=" not in tok:
            raise DescriptorError(f"malformed descriptor token {tok!r}")
        key, val = tok.split("=", 1)
        fields[key] = val
    try:
        mults = tuple(int(v) for v in fields["s"].split(","))
        mode = fields.get("mode", "constructed")
        eps = float(fields["eps"])
    except (KeyError, ValueError) as exc:
        raise DescriptorError(f"bad descriptor fields in {text!r}: {exc}") from None
    moduli = tuple(s + 1 for s in mults)
    if mode == "exhaustive":
        return exhaustive_complex_space(moduli)
    try:
        ell = int(fields["l"])
    except (KeyError, ValueError):
        raise DescriptorError(f"constructed descriptor needs l=<ell>: {text!r}") from None
    space = build_complex_space(moduli, eps, force_construction=True, ell=ell)
    if "p" in fields and int(fields["p"]) != space.base.prime:
        raise DescriptorError("descriptor prime does not match the selection rule")
    return space
