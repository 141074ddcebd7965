"""Complex matrix storage, text format, multiplicity expansion and the
spectral norm.

Matrices are plain 2-D ``numpy`` arrays of ``complex128``. The text format is
line oriented: the first data line is ``rows cols``, each following line holds
one row as ``2*cols`` whitespace-separated decimals alternating real and
imaginary parts. Lines whose first non-blank character is ``#`` are comments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, MatrixParseError

__all__ = [
    "MultiplicitySpec",
    "SpectralNormResult",
    "as_matrix",
    "expand",
    "parse_matrix",
    "serialize_matrix",
    "spectral_norm",
]

_POWER_ITER_SEED = 0x5EEDED


def as_matrix(values) -> np.ndarray:
    """Coerce to a nonempty 2-D complex128 array with finite entries."""
    a = np.asarray(values, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected a nonempty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return a


@dataclass(frozen=True)
class MultiplicitySpec:
    """An n x k base matrix plus positive column multiplicities summing to n.

    ``expand`` turns this into the n x n matrix whose i-th base column is
    repeated ``mults[i]`` times.
    """

    base: np.ndarray
    mults: tuple[int, ...]

    def __post_init__(self):
        base = as_matrix(self.base)
        mults = tuple(int(s) for s in self.mults)
        if len(mults) != base.shape[1]:
            raise ValueError(
                f"{len(mults)} multiplicities for {base.shape[1]} columns"
            )
        if any(s < 1 for s in mults):
            raise ValueError("every multiplicity must be >= 1")
        if sum(mults) != base.shape[0]:
            raise ValueError(
                f"multiplicities sum to {sum(mults)}, need rows = {base.shape[0]}"
            )
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "mults", mults)

    @property
    def n(self) -> int:
        return self.base.shape[0]

    @property
    def k(self) -> int:
        return self.base.shape[1]


def expand(spec: MultiplicitySpec) -> np.ndarray:
    """The n x n matrix with column i of the base repeated mults[i] times."""
    return np.repeat(spec.base, spec.mults, axis=1)


def parse_matrix(text: str | bytes) -> np.ndarray:
    """Parse the documented text format into a complex matrix."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows = cols = None
    data: list[list[complex]] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if rows is None:
            if len(tokens) != 2:
                raise MatrixParseError(
                    f"header must be 'rows cols', got {len(tokens)} tokens", lineno
                )
            try:
                rows, cols = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise MatrixParseError("non-numeric dimension token", lineno) from None
            if rows < 1 or cols < 1:
                raise MatrixParseError("dimensions must be positive", lineno)
            continue
        if len(data) == rows:
            raise MatrixParseError(f"extra data after {rows} rows", lineno)
        if len(tokens) != 2 * cols:
            raise MatrixParseError(
                f"row {len(data) + 1} has {len(tokens)} values, expected {2 * cols}",
                lineno,
            )
        try:
            vals = [float(t) for t in tokens]
        except ValueError:
            raise MatrixParseError("non-numeric token", lineno) from None
        if not all(np.isfinite(vals)):
            raise MatrixParseError("non-finite value", lineno)
        data.append([complex(vals[2 * j], vals[2 * j + 1]) for j in range(cols)])
    if rows is None:
        raise MatrixParseError("empty input", max(last_line, 1))
    if len(data) < rows:
        raise MatrixParseError(f"row {len(data) + 1} missing", last_line + 1)
    return np.array(data, dtype=np.complex128)


def serialize_matrix(a) -> str:
    """Emit the text format with 17 significant digits (lossless for doubles)."""
    a = as_matrix(a)
    lines = [f"{a.shape[0]} {a.shape[1]}"]
    for row in a:
        parts = []
        for v in row:
            parts.append(f"{v.real:.17g}")
            parts.append(f"{v.imag:.17g}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SpectralNormResult:
    """Largest singular value plus the iteration count and final residual."""

    value: float
    iterations: int
    residual: float


def spectral_norm(a, tol: float = 1e-10, max_iter: int = 10_000) -> SpectralNormResult:
    """Largest singular value by power iteration on the Gram matrix.

    Deterministic: the start vector comes from a fixed-seed generator (an
    all-ones start can be exactly orthogonal to the dominant singular
    subspace, which would silently converge to a smaller singular value).
    Convergence is declared when the relative eigen-residual
    ``|G x - lam x| / lam`` drops below ``tol``; for Hermitian ``G`` this
    bounds the eigenvalue error, so ``value`` is within ``tol`` (relative)
    of the true norm.
    """
    a = as_matrix(a)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not np.any(a):
        return SpectralNormResult(0.0, 0, 0.0)
    # iterate on the smaller Gram matrix; both share nonzero spectrum
    if a.shape[1] <= a.shape[0]:
        g = a.conj().T @ a
    else:
        g = a @ a.conj().T
    d = g.shape[0]
    rng = np.random.default_rng(_POWER_ITER_SEED)
    x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    x /= np.linalg.norm(x)
    lam = 0.0
    res = np.inf
    for it in range(1, max_iter + 1):
        z = g @ x
        zn = np.linalg.norm(z)
        if zn == 0.0:
            # x landed in the kernel; deterministic restart
            x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            x /= np.linalg.norm(x)
            continue
        lam = float(np.real(np.vdot(x, z)))
        res = float(np.linalg.norm(z - lam * x))
        x = z / zn
        if res <= tol * max(lam, np.finfo(float).tiny):
            return SpectralNormResult(float(np.sqrt(max(lam, 0.0))), it, res / max(lam, 1e-300))
    best = float(np.sqrt(max(lam, 0.0)))
    rel = res / max(lam, 1e-300)
    raise ConvergenceError(
        f"power iteration did not reach tol={tol} in {max_iter} iterations "
        f"(best value {best}, residual {rel})",
        value=best,
        residual=rel,
        iterations=max_iter,
    )
