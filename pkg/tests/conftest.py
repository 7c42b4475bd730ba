"""Shared helpers and independent brute-force oracles.

The oracles here deliberately avoid the package's own rank/enumeration
machinery: partitions are enumerated as raw subsets and ranks come from
numpy.linalg.matrix_rank, so a bug in the library's bitmask walk or SVD
cutoff cannot hide behind itself.
"""

import itertools

import numpy as np
import pytest

from phaseret import Field


def brute_complement_property(vectors: np.ndarray) -> bool:
    """Check CP by enumerating every subset (2^m of them)."""
    n, m = vectors.shape
    for bits in range(2 ** m):
        side = [j for j in range(m) if bits & (1 << j)]
        other = [j for j in range(m) if not bits & (1 << j)]
        r_side = np.linalg.matrix_rank(vectors[:, side]) if side else 0
        r_other = np.linalg.matrix_rank(vectors[:, other]) if other else 0
        if r_side < n and r_other < n:
            return False
    return True


def brute_first_cp_failure(vectors: np.ndarray):
    """First failing bipartition in the library's documented order.

    Vector 0 stays on side I; bit j of the mask moves vector j+1 to the
    complement; masks ascend.  Reimplemented here from that sentence
    alone, as a cross-check on the vectorized walk.
    """
    n, m = vectors.shape
    for mask in range(2 ** (m - 1)):
        side_ic = tuple(j + 1 for j in range(m - 1) if mask & (1 << j))
        side_i = tuple(j for j in range(m) if j not in side_ic)
        r_i = np.linalg.matrix_rank(vectors[:, side_i]) if side_i else 0
        r_ic = np.linalg.matrix_rank(vectors[:, side_ic]) if side_ic else 0
        if r_i < n and r_ic < n:
            return side_i, side_ic, r_i, r_ic
    return None


def brute_full_spark(vectors: np.ndarray):
    """First lexicographic dependent n-subset, or None if full spark."""
    n, m = vectors.shape
    for combo in itertools.combinations(range(m), n):
        if np.linalg.matrix_rank(vectors[:, combo]) < n:
            return combo
    return None


def random_unit_columns(rng: np.random.Generator, n: int, m: int, field: Field) -> np.ndarray:
    cols = rng.standard_normal((n, m))
    if field is Field.COMPLEX:
        cols = cols + 1j * rng.standard_normal((n, m))
    return cols / np.linalg.norm(cols, axis=0)


def random_projection_stack(rng: np.random.Generator, n: int, ranks, field: Field) -> np.ndarray:
    """Independent projection builder: QR of a Gaussian, then B B*."""
    mats = []
    for k in ranks:
        g = rng.standard_normal((n, k))
        if field is Field.COMPLEX:
            g = g + 1j * rng.standard_normal((n, k))
        q, _ = np.linalg.qr(g)
        mats.append(q @ q.conj().T)
    return np.stack(mats)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
