"""Field-generic dense linear algebra kernel.

Matrices are plain numpy arrays; the scalar field is carried explicitly by
the Field enum (real arrays are float64, complex arrays are complex128).
Vectors are 1-D arrays, column collections are (n, k) arrays.  All rank
decisions go through a single relative singular-value threshold so that
every "spans" question in the toolkit means the same thing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import FieldError
from .seeding import spawn_rng

_STREAM_COMPLEMENT = 1


class Field(enum.Enum):
    """Scalar field tag for vectors, frames, and projection families."""

    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.complex128) if self is Field.COMPLEX else np.dtype(np.float64)

    @classmethod
    def parse(cls, name: str) -> "Field":
        try:
            return cls(name.lower())
        except ValueError:
            raise FieldError(f"unknown scalar field {name!r}; expected 'real' or 'complex'") from None

    @classmethod
    def infer(cls, a: np.ndarray) -> "Field":
        return Field.COMPLEX if np.iscomplexobj(a) else Field.REAL


def as_field_array(a, field: Field, name: str = "matrix") -> np.ndarray:
    """Coerce to the field's dtype, rejecting complex data under a Real tag."""
    arr = np.asarray(a)
    if field is Field.REAL and np.iscomplexobj(arr):
        if np.max(np.abs(arr.imag), initial=0.0) != 0.0:
            raise FieldError(f"{name} has nonzero imaginary parts but is tagged real")
        arr = arr.real
    return np.ascontiguousarray(arr, dtype=field.dtype)


def ensure_finite(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(a)
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


@dataclass(frozen=True)
class Tolerances:
    """Numeric thresholds threaded through every rank / witness decision.

    rank_rtol   relative singular-value cutoff for rank counting
    proj_tol    max-entry bound for projector and orthonormality validation
    witness_tol bound on the measurement mismatch of a witness pair
    phase_tol   bound below which two vectors count as phase-equivalent
    """

    rank_rtol: float = 1e-10
    proj_tol: float = 1e-8
    witness_tol: float = 1e-9
    phase_tol: float = 1e-6

    def __post_init__(self):
        for name in ("rank_rtol", "proj_tol", "witness_tol", "phase_tol"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if not self.rank_rtol < 1.0:
            raise ValueError("rank_rtol must be < 1")


DEFAULT_TOL = Tolerances()


def numerical_rank(m, tol: Tolerances = DEFAULT_TOL) -> int:
    """Count singular values above rank_rtol * sigma_max * max(rows, cols).

    Returns 0 for an identically zero matrix.  Raises on empty or
    non-finite input.
    """
    arr = np.asarray(m)
    if arr.ndim != 2 or min(arr.shape) == 0:
        raise ValueError("numerical_rank needs a nonempty 2-D matrix")
    ensure_finite(arr, "matrix")
    s = np.linalg.svd(arr, compute_uv=False)
    smax = s[0]
    if smax == 0.0:
        return 0
    cutoff = tol.rank_rtol * smax * max(arr.shape)
    return int(np.count_nonzero(s > cutoff))


def min_singular_value(m) -> float:
    """Smallest of the min(rows, cols) singular values."""
    arr = np.asarray(m)
    if arr.ndim != 2 or min(arr.shape) == 0:
        raise ValueError("min_singular_value needs a nonempty 2-D matrix")
    ensure_finite(arr, "matrix")
    s = np.linalg.svd(arr, compute_uv=False)
    return float(s[-1])


def orthonormalize(vectors, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the column span, via SVD.

    The output Gram matrix is the identity to machine precision and the
    span equals the input span at the rank_rtol threshold.  Raises when
    the columns are all numerically zero.
    """
    arr = np.asarray(vectors)
    if arr.ndim != 2 or arr.shape[1] == 0:
        raise ValueError("orthonormalize needs at least one column")
    ensure_finite(arr, "vectors")
    u, s, _ = np.linalg.svd(arr, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        raise ValueError("columns span only the zero subspace")
    cutoff = tol.rank_rtol * s[0] * max(arr.shape)
    r = int(np.count_nonzero(s > cutoff))
    if r == 0:
        raise ValueError("columns span only the zero subspace")
    return u[:, :r]


def projector_from_basis(onb, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector B @ B* onto the span of orthonormal columns.

    The columns must already be orthonormal within proj_tol; the result is
    self-adjoint and idempotent to the same precision and has rank equal
    to the number of columns.
    """
    b = np.asarray(onb)
    if b.ndim != 2 or b.shape[1] == 0:
        raise ValueError("projector_from_basis needs at least one basis column")
    ensure_finite(b, "basis")
    gram = b.conj().T @ b
    resid = np.max(np.abs(gram - np.eye(b.shape[1])))
    if resid >= tol.proj_tol:
        raise ValueError(f"basis columns are not orthonormal (Gram residual {resid:.3e})")
    return b @ b.conj().T


def orthogonal_complement_point(
    vectors,
    tol: Tolerances = DEFAULT_TOL,
    seed: int = 0,
    field: Field | None = None,
    dim: int | None = None,
) -> np.ndarray:
    """Unit vector orthogonal to every input column.

    The input columns must span a proper subspace.  The result is produced
    by completing the columns with seeded random draws and orthogonalizing,
    so it is deterministic per seed.  `vectors` may have zero columns, in
    which case `dim` and `field` fix the ambient space.
    """
    arr = None if vectors is None else np.asarray(vectors)
    if arr is not None and arr.ndim == 1:
        arr = arr[:, None]
    if arr is not None and arr.size:
        ensure_finite(arr, "vectors")
    if arr is None or arr.shape[1] == 0 or np.max(np.abs(arr)) == 0.0:
        basis = None
        n = dim if dim is not None else (arr.shape[0] if arr is not None else None)
        if n is None:
            raise ValueError("empty input needs an explicit dim")
        fld = field if field is not None else (Field.infer(arr) if arr is not None else Field.REAL)
    else:
        basis = orthonormalize(arr, tol)
        n = arr.shape[0]
        fld = field if field is not None else Field.infer(arr)
        if basis.shape[1] >= n:
            raise ValueError("columns already span the whole space; no orthogonal complement")

    rng = spawn_rng(seed, _STREAM_COMPLEMENT)
    for _ in range(64):
        g = gaussian_matrix(rng, n, 1, fld)[:, 0]
        if basis is not None:
            g = g - basis @ (basis.conj().T @ g)
        norm = np.linalg.norm(g)
        if norm > 1e-8:
            y = g / norm
            if arr is not None and arr.shape[1]:
                worst = np.max(np.abs(arr.conj().T @ y))
                if worst >= tol.proj_tol:
                    continue
            return y
    raise ValueError("could not produce a complement direction; input may span the space")


def gaussian_matrix(rng: np.random.Generator, n: int, k: int, field: Field) -> np.ndarray:
    """Standard Gaussian (n, k) matrix over the given field."""
    if field is Field.COMPLEX:
        return rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    return rng.standard_normal((n, k))


def haar_rotation(rng: np.random.Generator, k: int, field: Field) -> np.ndarray:
    """Haar-distributed orthogonal (real) or unitary (complex) k x k matrix."""
    g = gaussian_matrix(rng, k, k, field)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r).copy()
    d = np.where(np.abs(d) == 0.0, 1.0, d)
    return q * (d / np.abs(d))


def max_abs(a) -> float:
    """Max-entry norm, the residual measure used for projector validation."""
    return float(np.max(np.abs(a))) if np.asarray(a).size else 0.0
