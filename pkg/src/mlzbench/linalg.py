"""Dense matrix kernels: commutators, norms, Jacobi eigensolver, rank-revealing solves."""

from dataclasses import dataclass, field

import numpy as np
from numba import njit

SYM_TOL = 1e-12
JACOBI_TOL = 1e-14
RANK_TOL = 1e-10


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


def commutator(x, y):
    x = np.asarray(x)
    y = np.asarray(y)
    if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape != y.shape:
        raise ValueError(f"commutator needs equal square shapes, got {x.shape} and {y.shape}")
    return x @ y - y @ x


def frobenius_norm(x):
    a = np.abs(np.asarray(x)).ravel()
    total = 0.0
    for v in a:  # fixed summation order
        total += float(v) * float(v)
    return float(np.sqrt(total))


def is_symmetric(s, tol=SYM_TOL):
    s = np.asarray(s)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        return False
    scale = float(np.max(np.abs(s))) if s.size else 0.0
    return bool(np.max(np.abs(s - s.T), initial=0.0) <= tol * scale)


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        object.__setattr__(self, "vectors", _frozen(self.vectors))


@dataclass(frozen=True)
class LinearSolveResult:
    particular: np.ndarray
    nullspace: list = field(default_factory=list)
    residual: float = 0.0
    singular_values: np.ndarray = None
    rank: int = 0


@njit(cache=True)
def _jacobi_kernel(a, want_vectors):
    n = a.shape[0]
    v = np.eye(n)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j] * a[i, j]
    scale = np.sqrt(scale)
    thresh = JACOBI_TOL * scale
    for _sweep in range(100):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        if np.sqrt(off) <= thresh:
            return a, v, True
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                if want_vectors:
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = c * vkp - s * vkq
                        v[k, q] = s * vkp + c * vkq
    return a, v, False


def _check_symmetric(s):
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {s.shape}")
    if not is_symmetric(s):
        raise ValueError("matrix is not symmetric within tolerance")
    return s


def sym_eigen(s):
    """Cyclic Jacobi eigendecomposition of a real symmetric matrix.

    Eigenvalues come back ascending; each eigenvector is flipped so that its
    largest-magnitude component is positive.
    """
    s = _check_symmetric(s)
    a = 0.5 * (s + s.T)
    d, v, ok = _jacobi_kernel(a.copy(), True)
    if not ok:
        raise RuntimeError("Jacobi sweeps did not converge")
    values = np.diag(d).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    v = v[:, order]
    for k in range(v.shape[1]):
        col = v[:, k]
        if col[int(np.argmax(np.abs(col)))] < 0:
            v[:, k] = -col
    return EigenDecomposition(values, v)


def sym_eigvals(s):
    """Ascending eigenvalues only (same Jacobi kernel, rotations not accumulated)."""
    s = _check_symmetric(s)
    d, _, ok = _jacobi_kernel(0.5 * (s + s.T), False)
    if not ok:
        raise RuntimeError("Jacobi sweeps did not converge")
    return np.sort(np.diag(d))


def solve_linear(m, b, tol=RANK_TOL):
    """Least-squares solve of m @ x = b with an SVD-based nullspace.

    Singular values below tol * s_max are treated as zero. Infeasibility is
    reported through ``residual`` = ||m x - b||, never raised.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = np.atleast_2d(np.asarray(m, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    if m.shape[1] < 1:
        raise ValueError("matrix needs at least one column")
    if m.shape[0] != b.size:
        raise ValueError(f"row count {m.shape[0]} does not match rhs length {b.size}")
    u, sv, vt = np.linalg.svd(m, full_matrices=True)
    smax = sv[0] if sv.size else 0.0
    rank = int(np.sum(sv > tol * smax)) if smax > 0 else 0
    coeff = (u[:, :rank].T @ b) / sv[:rank]
    x = vt[:rank].T @ coeff
    nullspace = [vt[k].copy() for k in range(rank, m.shape[1])]
    residual = frobenius_norm(m @ x - b)
    return LinearSolveResult(_frozen(x), nullspace, residual, _frozen(sv), rank)
