"""Structural matrix analysis: Z-matrices, irreducibility, Perron pairs,
M-matrix classification, and definiteness checks.

All functions operate on dense square float arrays. Grid sizes in this
package are small (a few hundred nodes at most), so dense eigensolvers are
the primary route; a power iteration on the shifted nonnegative matrix is
used above a size cutoff.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.sparse
import scipy.sparse.csgraph

from .errors import NoConvergence, NotIrreducible, NotSymmetric, NotZMatrix

# Dense eigensolve below this size; power iteration on the shifted
# nonnegative matrix beyond.
DENSE_EIG_CUTOFF = 64

POWER_ITERATION_CAP = 10_000
POWER_ITERATION_TOL = 1e-13


class MClass(enum.Enum):
    NOT_M = "not-M"
    SINGULAR_M = "singular-M"
    NONSINGULAR_M = "nonsingular-M"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class PerronData:
    """Perron root (eigenvalue of smallest real part) and the 1-norm
    normalized positive Perron vector of an irreducible Z-matrix."""

    root: float
    vector: np.ndarray


@dataclass(frozen=True)
class MatrixClass:
    is_z: bool
    is_irreducible: bool
    m_class: MClass


def _as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def default_m_tolerance(a: np.ndarray) -> float:
    """Default boundary tolerance for M-matrix classification.

    Scaled so that the singular-M boundary is numerically reachable by the
    continuation stopping rule.
    """
    return 1e-9 * (1.0 + float(np.linalg.norm(a, np.inf)))


def is_z_matrix(a, tol: float = 0.0) -> bool:
    """True iff all off-diagonal entries are <= tol (exact zero by default).

    Assembled Kirchhoff data is exactly Z by construction; computed Jacobians
    may need a caller tolerance via :func:`classify`.
    """
    a = _as_square(a)
    off = a - np.diag(np.diag(a))
    return bool(np.all(off <= tol))


def is_irreducible(a) -> bool:
    """True iff the directed graph of the nonzero off-diagonal pattern is
    strongly connected. A 1x1 matrix is irreducible."""
    a = _as_square(a)
    n = a.shape[0]
    if n == 1:
        return True
    pattern = (a != 0.0).astype(np.int8)
    np.fill_diagonal(pattern, 0)
    ncomp, _ = scipy.sparse.csgraph.connected_components(
        scipy.sparse.csr_matrix(pattern), directed=True, connection="strong"
    )
    return ncomp == 1


def min_real_eigenvalue(a) -> float:
    """Smallest real part over the spectrum of a square matrix.

    For a Z-matrix this is the (generalized) Perron root; no irreducibility
    is required here, so reducible Z-matrices classify correctly.
    """
    a = _as_square(a)
    if np.array_equal(a, a.T):
        return float(np.linalg.eigvalsh(a)[0])
    return float(np.min(np.real(np.linalg.eigvals(a))))


def _power_perron(b: np.ndarray, max_iter: int, tol: float) -> tuple[float, np.ndarray]:
    """Power iteration for the Perron pair of a nonnegative matrix with
    positive diagonal (primitive). Restart from the uniform vector on a
    stagnating direction; no deflation is attempted."""
    n = b.shape[0]
    v = np.full(n, 1.0 / n)
    rho = 0.0
    for k in range(max_iter):
        w = b @ v
        s = float(np.sum(np.abs(w)))
        if s == 0.0:
            # only possible for the zero matrix; restart perturbed
            v = np.full(n, 1.0 / n)
            continue
        w /= s
        if float(np.sum(np.abs(w - v))) < tol:
            rho = float(v @ (b @ v) / (v @ v))
            return rho, v
        v = w
    raise NoConvergence(
        f"power iteration did not converge within {max_iter} iterations"
    )


def perron(a, *, max_iter: int = POWER_ITERATION_CAP,
           tol: float = POWER_ITERATION_TOL,
           dense_cutoff: int = DENSE_EIG_CUTOFF) -> PerronData:
    """Perron root and positive Perron vector of an irreducible Z-matrix.

    Computed through the shift A = sI - B with B >= 0: the Perron root is
    s - rho(B) and the Perron vector is the Perron-Frobenius vector of B.
    Symmetric input goes through a symmetric eigensolve; nonsymmetric input
    uses a dense eigensolve up to ``dense_cutoff`` and power iteration
    beyond (the power shift adds a small diagonal offset so B is primitive).

    Raises NotZMatrix / NotIrreducible on invalid input and NoConvergence if
    the power iteration cap is hit.
    """
    a = _as_square(a)
    if not is_z_matrix(a):
        raise NotZMatrix("off-diagonal entries must be nonpositive")
    if not is_irreducible(a):
        raise NotIrreducible("matrix is reducible")
    n = a.shape[0]

    if np.array_equal(a, a.T):
        w, vecs = np.linalg.eigh(a)
        root = float(w[0])
        v = vecs[:, 0]
    elif n <= dense_cutoff:
        s = float(np.max(np.diag(a)))
        b = s * np.eye(n) - a
        w, vecs = np.linalg.eig(b)
        idx = int(np.argmax(np.real(w)))
        root = s - float(np.real(w[idx]))
        v = np.real(vecs[:, idx])
    else:
        # offset keeps the diagonal of B positive, hence B primitive, so the
        # power iteration cannot cycle
        s = float(np.max(np.diag(a))) + 0.01 * (1.0 + float(np.linalg.norm(a, np.inf)))
        b = s * np.eye(n) - a
        rho, v = _power_perron(b, max_iter, tol)
        root = s - rho

    if float(np.sum(v)) < 0.0:
        v = -v
    if np.any(v <= 0.0):
        raise NoConvergence("Perron vector has nonpositive entries; "
                            "matrix is numerically too close to reducible")
    v = v / float(np.sum(v))
    v.flags.writeable = False
    return PerronData(root=root, vector=v)


def classify(a, tol: float | None = None) -> MatrixClass:
    """Z/irreducibility flags plus M-matrix class from the smallest-real-part
    eigenvalue r: nonsingular-M if r > tol, singular-M if |r| <= tol,
    not-M if r < -tol. ``m_class`` is not-applicable for non-Z input.

    The Z test uses the same tolerance on off-diagonal entries so computed
    (floating-point) Jacobians classify sensibly; pass tol=0 for exact data.
    """
    a = _as_square(a)
    if tol is None:
        tol = default_m_tolerance(a)
    z = is_z_matrix(a, tol=tol)
    irr = is_irreducible(a)
    if not z:
        return MatrixClass(is_z=False, is_irreducible=irr, m_class=MClass.NOT_APPLICABLE)
    r = min_real_eigenvalue(a)
    if r > tol:
        m = MClass.NONSINGULAR_M
    elif r >= -tol:
        m = MClass.SINGULAR_M
    else:
        m = MClass.NOT_M
    return MatrixClass(is_z=True, is_irreducible=irr, m_class=m)


def _require_symmetric(a: np.ndarray) -> np.ndarray:
    scale = max(1.0, float(np.abs(a).max())) if a.size else 1.0
    if not np.all(np.abs(a - a.T) <= 1e-12 * scale):
        raise NotSymmetric("matrix is not symmetric within 1e-12 relative")
    return 0.5 * (a + a.T)


def is_positive_definite(a) -> bool:
    """PD test by Cholesky factorization success. Raises NotSymmetric."""
    a = _require_symmetric(_as_square(a))
    try:
        np.linalg.cholesky(a)
        return True
    except np.linalg.LinAlgError:
        return False


def is_positive_semidefinite(a, tol: float = 1e-12) -> bool:
    """PSD test: smallest eigenvalue >= -tol * ||A||_2. Raises NotSymmetric."""
    a = _require_symmetric(_as_square(a))
    w = np.linalg.eigvalsh(a)
    norm = float(np.max(np.abs(w))) if w.size else 0.0
    return bool(w[0] >= -tol * norm)
