"""Complex vector/matrix helpers shared by every other module.

Everything numeric in this package is a NumPy ``complex128`` array: vectors are
1-d, matrices 2-d.  The helpers here pin down the three things the rest of the
code relies on and that are easy to get subtly wrong:

* distances and inner products use the Hermitian inner product ``<x, y> =
  x^H y`` (conjugate on the left argument);
* all equality is tolerance-based, with a single library-wide default ``TOL``;
* JSON serialization writes a complex number as a ``[re, im]`` pair and a
  matrix in row-major order, so files are portable and diffable.
"""

from __future__ import annotations

import numpy as np

#: Library-wide default tolerance for distances, equality and tie detection.
#: Every public operation that compares floats accepts a ``tau`` override.
TOL = 1e-9


def as_vector(data) -> np.ndarray:
    """Coerce to a 1-d complex128 vector (copies only when needed)."""
    v = np.asarray(data, dtype=np.complex128)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {v.shape}")
    return v


def as_matrix(data) -> np.ndarray:
    """Coerce to a square 2-d complex128 matrix."""
    m = np.asarray(data, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def herm_inner(x: np.ndarray, y: np.ndarray) -> complex:
    """Hermitian inner product <x, y> = x^H y (conjugate-linear in x)."""
    return complex(np.vdot(x, y))


def dist(x: np.ndarray, y: np.ndarray) -> float:
    """Euclidean distance ||x - y|| under the Hermitian norm."""
    return float(np.linalg.norm(x - y))


def norm(x: np.ndarray) -> float:
    return float(np.linalg.norm(x))


def unit(x: np.ndarray) -> np.ndarray:
    """x scaled to unit norm; rejects (near-)zero input."""
    n = np.linalg.norm(x)
    if n < TOL:
        raise ValueError("cannot normalize a zero vector")
    return np.asarray(x, dtype=np.complex128) / n


def vec_eq(x: np.ndarray, y: np.ndarray, tau: float = TOL) -> bool:
    """Tolerance equality for vectors: ||x - y|| <= tau."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        return False
    return float(np.linalg.norm(x - y)) <= tau


def mat_eq(a: np.ndarray, b: np.ndarray, tau: float = TOL) -> bool:
    """Tolerance equality for matrices (Frobenius norm <= tau)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    return float(np.linalg.norm(a - b)) <= tau


def is_isometry(m: np.ndarray, tau: float = TOL) -> bool:
    """True when m^H m = I to within tau, i.e. m preserves Hermitian norms."""
    m = as_matrix(m)
    eye = np.eye(m.shape[0], dtype=np.complex128)
    return mat_eq(m.conj().T @ m, eye, tau)


# ---------------------------------------------------------------------------
# JSON encoding: a complex scalar is [re, im]; a vector is a list of pairs;
# a matrix is a row-major list of rows of pairs.
# ---------------------------------------------------------------------------

def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(pair) -> complex:
    re, im = pair
    return complex(float(re), float(im))


def vector_to_json(v: np.ndarray) -> list[list[float]]:
    return [complex_to_json(z) for z in as_vector(v)]


def vector_from_json(data) -> np.ndarray:
    return np.array([complex_from_json(p) for p in data], dtype=np.complex128)


def matrix_to_json(m: np.ndarray) -> list[list[list[float]]]:
    return [[complex_to_json(z) for z in row] for row in as_matrix(m)]


def matrix_from_json(data) -> np.ndarray:
    m = np.array(
        [[complex_from_json(p) for p in row] for row in data], dtype=np.complex128
    )
    return as_matrix(m)
