"""Glynn-type permanent estimators and their averaging strategies.

``gly`` evaluates the signed row-sum product at one sign vector; its mean
over all of {-1,+1}^n is the permanent. ``gengly`` is the roots-of-unity
generalization for matrices given as a base matrix with repeated columns:
coordinate i ranges over the (s_i + 1)-th roots of unity and is scaled by
sqrt(s_i), which keeps the estimator unbiased while shrinking its worst-case
magnitude to ``s_1! ... s_k! / sqrt(s_1^s_1 ... s_k^s_k) * |B|^n``.

Averaging comes in three modes: ``random`` (independent uniform samples with
a Hoeffding-derived sample count), ``derandomized`` (full enumeration of a
small-bias sample space's seeds), and ``exhaustive`` (the full phase space).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import DomainError
from .matrices import MultiplicitySpec, as_matrix, spectral_norm

__all__ = [
    "Estimate",
    "GuaranteeReport",
    "PhaseVector",
    "enumerate_phase_space",
    "estimate_derandomized",
    "estimate_derandomized_multi",
    "estimate_random",
    "estimate_random_multi",
    "gengly",
    "gengly_batch",
    "gengly_scale",
    "gly",
    "gly_batch",
    "permanent_upper_bound",
    "phase_space_size",
    "roots_of_unity",
    "sample_count",
]

_CHUNK = 1 << 16

# exact values where the roots are representable without rounding
_EXACT_ROOTS = {
    1: np.array([1.0 + 0.0j]),
    2: np.array([1.0 + 0.0j, -1.0 + 0.0j]),
    4: np.array([1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j]),
}


def roots_of_unity(m: int) -> np.ndarray:
    """The m-th roots of unity, index j holding exp(2*pi*i*j/m)."""
    if m in _EXACT_ROOTS:
        return _EXACT_ROOTS[m]
    return np.exp(2j * np.pi * np.arange(m) / m)


@dataclass(frozen=True)
class PhaseVector:
    """One sample point: integer phase indices into per-coordinate root sets.

    ``moduli[i] == 2`` everywhere is the binary (sign vector) case, with
    phase e mapping to the sign (-1)**e.
    """

    moduli: tuple[int, ...]
    phases: tuple[int, ...]

    def __post_init__(self):
        moduli = tuple(int(m) for m in self.moduli)
        phases = tuple(int(p) for p in self.phases)
        if len(moduli) != len(phases):
            raise ValueError("moduli and phases must have equal length")
        if any(m < 1 for m in moduli):
            raise ValueError("moduli must be >= 1")
        if any(not (0 <= p < m) for p, m in zip(phases, moduli)):
            raise ValueError("phase index out of range")
        object.__setattr__(self, "moduli", moduli)
        object.__setattr__(self, "phases", phases)

    @classmethod
    def from_signs(cls, signs: Sequence[int]) -> "PhaseVector":
        phases = []
        for s in signs:
            if s == 1:
                phases.append(0)
            elif s == -1:
                phases.append(1)
            else:
                raise ValueError(f"sign entries must be +-1, got {s}")
        return cls((2,) * len(phases), tuple(phases))

    def to_complex(self) -> np.ndarray:
        return np.array(
            [roots_of_unity(m)[p] for m, p in zip(self.moduli, self.phases)]
        )


@dataclass(frozen=True)
class GuaranteeReport:
    """Absolute additive guarantee: epsilon times the estimator bound."""

    additive_error_bound: float
    confidence: float


@dataclass(frozen=True)
class Estimate:
    """An estimator average plus everything needed to state its guarantee.

    ``bound_term`` is the quantity the accuracy parameter multiplies
    (``|A|^n`` in the plain case, the scaled ``|B|^n`` bound in the
    multiplicity case).
    """

    value: complex
    bound_term: float
    epsilon: float
    samples_used: int
    mode: str
    confidence: float = 1.0

    def __post_init__(self):
        if self.mode not in ("random", "derandomized", "exhaustive"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.samples_used < 1:
            raise ValueError("samples_used must be >= 1")

    def guarantee(self) -> GuaranteeReport:
        return GuaranteeReport(self.epsilon * self.bound_term, self.confidence)


def gly(a, x: PhaseVector) -> complex:
    """x_1...x_n times the product of signed row sums of ``a`` at x."""
    a = as_matrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("matrix must be square")
    if len(x.phases) != n or any(m != 2 for m in x.moduli):
        raise ValueError("need a binary phase vector of length n")
    signs = 1.0 - 2.0 * np.array(x.phases, dtype=np.float64)
    return complex(np.prod(signs) * np.prod(a @ signs))


def gly_batch(a, signs: np.ndarray) -> np.ndarray:
    """Vectorized ``gly`` over rows of a (M, n) matrix of +-1 signs."""
    a = np.asarray(a, dtype=np.complex128)
    rowsums = signs @ a.T
    return np.prod(signs, axis=1) * np.prod(rowsums, axis=1)


def _log_gengly_scale(mults: Sequence[int]) -> float:
    return sum(math.lgamma(s + 1) - 0.5 * s * math.log(s) for s in mults)


def gengly_scale(mults: Sequence[int]) -> float:
    """s_1!...s_k! / sqrt(s_1^s_1 ... s_k^s_k), computed in log space."""
    return math.exp(_log_gengly_scale(mults))


def gengly(spec: MultiplicitySpec, x: PhaseVector) -> complex:
    """The generalized estimator at one point of the roots-of-unity grid."""
    moduli = tuple(s + 1 for s in spec.mults)
    if x.moduli != moduli:
        raise ValueError(f"phase vector moduli {x.moduli} != {moduli}")
    vals = gengly_batch(spec, np.array([x.phases], dtype=np.int64))
    return complex(vals[0])


def gengly_batch(spec: MultiplicitySpec, phases: np.ndarray) -> np.ndarray:
    """Vectorized ``gengly`` over rows of a (M, k) integer phase array."""
    mults = spec.mults
    k = spec.k
    phases = np.asarray(phases, dtype=np.int64)
    if phases.ndim != 2 or phases.shape[1] != k:
        raise ValueError(f"phase array must be (M, {k})")
    m_vals = np.empty((phases.shape[0], k), dtype=np.complex128)
    pow_vals = np.empty_like(m_vals)
    for i, s in enumerate(mults):
        roots = roots_of_unity(s + 1)
        m_vals[:, i] = roots[phases[:, i]]
        # z_i^{s_i} by index arithmetic keeps small moduli exact
        pow_vals[:, i] = roots[(phases[:, i] * s) % (s + 1)]
    y = np.sqrt(np.array(mults, dtype=np.float64)) * m_vals
    rowsums = y @ spec.base.T
    conj_pow = np.conj(np.prod(pow_vals, axis=1))
    return gengly_scale(mults) * conj_pow * np.prod(rowsums, axis=1)


def phase_space_size(moduli: Sequence[int]) -> int:
    return int(np.prod([int(m) for m in moduli], dtype=object))


def enumerate_phase_space(
    moduli: Sequence[int], chunk: int = _CHUNK
) -> Iterator[np.ndarray]:
    """Yield (M, k) phase-index blocks covering the full product space."""
    moduli = [int(m) for m in moduli]
    total = phase_space_size(moduli)
    radix = np.ones(len(moduli), dtype=np.int64)
    for i in range(len(moduli) - 2, -1, -1):
        radix[i] = radix[i + 1] * moduli[i + 1]
    mods = np.array(moduli, dtype=np.int64)
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        yield (idx[:, None] // radix[None, :]) % mods[None, :]


def sample_count(epsilon: float, delta: float) -> int:
    """Samples for the additive guarantee: ceil(4 ln(4/delta) / eps^2).

    Hoeffding on the real and imaginary parts of the normalized estimator
    (each in [-1, 1]), with the error split evenly and a union bound over
    the four tail events.
    """
    return int(math.ceil(4.0 * math.log(4.0 / delta) / (epsilon * epsilon)))


def _check_params(epsilon: float, delta: float) -> None:
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must lie in (0, 1)")


def estimate_random(
    a, epsilon: float, delta: float = 0.01, rng_seed: int = 0
) -> Estimate:
    """Mean of independent uniform sign-vector samples of ``gly``.

    Guarantee: within ``epsilon * |A|^n`` of the permanent with probability
    at least ``1 - delta``. Reproducible for a fixed ``rng_seed``.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("matrix must be square")
    _check_params(epsilon, delta)
    m = sample_count(epsilon, delta)
    rng = np.random.default_rng(rng_seed)
    total = 0j
    done = 0
    while done < m:
        c = min(_CHUNK, m - done)
        signs = 1.0 - 2.0 * rng.integers(0, 2, size=(c, n)).astype(np.float64)
        total += complex(np.sum(gly_batch(a, signs)))
        done += c
    bound = spectral_norm(a).value ** n
    return Estimate(total / m, bound, epsilon, m, "random", confidence=1.0 - delta)


def multi_bound_term(spec: MultiplicitySpec) -> float:
    """The gengly magnitude bound: gengly_scale(s) * |B|^n."""
    sigma = spectral_norm(spec.base).value
    if sigma == 0.0:
        return 0.0
    return math.exp(_log_gengly_scale(spec.mults) + spec.n * math.log(sigma))


def estimate_random_multi(
    spec: MultiplicitySpec, epsilon: float, delta: float = 0.01, rng_seed: int = 0
) -> Estimate:
    """Mean of uniform roots-of-unity samples of ``gengly``."""
    _check_params(epsilon, delta)
    moduli = [s + 1 for s in spec.mults]
    m = sample_count(epsilon, delta)
    rng = np.random.default_rng(rng_seed)
    total = 0j
    done = 0
    while done < m:
        c = min(_CHUNK, m - done)
        phases = np.column_stack([rng.integers(0, mod, size=c) for mod in moduli])
        total += complex(np.sum(gengly_batch(spec, phases)))
        done += c
    return Estimate(
        total / m, multi_bound_term(spec), epsilon, m, "random", confidence=1.0 - delta
    )


def _require_nonnegative(a: np.ndarray, what: str) -> None:
    # exact check: the certainty guarantee needs nonnegative reals
    if np.any(a.imag != 0.0) or np.any(a.real < 0.0):
        raise DomainError(
            f"derandomized estimation requires {what} with nonnegative real "
            "entries (imaginary parts exactly zero)"
        )


def _space_mode(space) -> str:
    return "exhaustive" if space.exhaustive else "derandomized"


def estimate_derandomized(a, space) -> Estimate:
    """Deterministic mean of ``gly`` over a binary sample space's support.

    Equals the seed-enumeration average exactly: equal sample points are
    grouped and weighted by their seed multiplicity.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("matrix must be square")
    _require_nonnegative(a, "a matrix")
    if len(space.moduli) != n or any(m != 2 for m in space.moduli):
        raise ValueError(
            f"need a binary space over {n} coordinates, got moduli {space.moduli}"
        )
    cells, probs = space.support_cells()
    signs = 1.0 - 2.0 * cells.astype(np.float64)
    value = complex(probs @ gly_batch(a, signs))
    bound = spectral_norm(a).value ** n
    return Estimate(
        value, bound, space.declared_epsilon, space.seed_count, _space_mode(space)
    )


def estimate_derandomized_multi(spec: MultiplicitySpec, space) -> Estimate:
    """Deterministic mean of ``gengly`` over a complex sample space."""
    _require_nonnegative(spec.base, "a base matrix")
    moduli = tuple(s + 1 for s in spec.mults)
    if tuple(space.moduli) != moduli:
        raise ValueError(f"space moduli {tuple(space.moduli)} != {moduli}")
    cells, probs = space.support_cells()
    value = complex(probs @ gengly_batch(spec, cells))
    return Estimate(
        value,
        multi_bound_term(spec),
        space.declared_epsilon,
        space.seed_count,
        _space_mode(space),
    )


def permanent_upper_bound(spec: MultiplicitySpec) -> float:
    """``s_1!...s_k!/sqrt(s_1^s_1...s_k^s_k) * |B|^n``, an upper bound on
    the magnitude of the expanded matrix's permanent."""
    return multi_bound_term(spec)
