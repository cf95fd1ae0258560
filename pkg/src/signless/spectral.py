"""Signless Laplacian Q = A + D: assembly, eigendecomposition, closed forms.

Eigenvalues are always reported in descending order q_1 >= ... >= q_n and
eigenvectors are stored as the columns of an ``(n, n)`` array aligned with
them.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError, NumericalFailureError
from .graph import Graph, build_family

__all__ = [
    "CLUSTER_TOL",
    "signless_laplacian",
    "format_matrix",
    "jacobi_eigh",
    "SpectralDecomposition",
    "eigendecompose",
    "decompose_graph",
    "smallest_eigenpair",
    "cluster_indices",
    "subspace_angle",
    "sum_zero_basis",
    "EigenBlock",
    "ClosedFormSpectrum",
    "closed_form_spectrum",
    "ClosedFormReport",
    "verify_closed_form",
]

# eigenvalues closer than this are treated as one eigenspace
CLUSTER_TOL = 1e-6
_SIGN_TIE_TOL = 1e-9


def signless_laplacian(g: Graph) -> np.ndarray:
    """Integer matrix Q = A + D of ``g``."""
    A = g.adjacency_matrix()
    return A + np.diag(A.sum(axis=1))


def format_matrix(M: np.ndarray) -> str:
    """Whitespace-separated dense text, one row per line."""
    return "\n".join(" ".join(f"{x:g}" for x in row) for row in np.asarray(M))


def jacobi_eigh(M, tol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic Jacobi eigensolver for a real symmetric matrix.

    Rotations visit pairs (p, q) in row-major order each sweep, so the
    result is a deterministic function of ``M``. Iterates until the
    off-diagonal Frobenius norm drops below ``tol * ||M||_F``.

    Returns
    -------
    w : ndarray
        Eigenvalues, unsorted (diagonal of the rotated matrix).
    V : ndarray
        Orthogonal matrix whose columns are the matching eigenvectors.

    Raises
    ------
    NumericalFailureError
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    A = np.array(M, dtype=np.float64, copy=True)
    n = A.shape[0]
    V = np.eye(n)
    scale = np.linalg.norm(A) or 1.0

    def off_norm():
        return float(np.linalg.norm(A - np.diag(np.diag(A))))

    for _ in range(max_sweeps):
        if off_norm() <= tol * scale:
            return np.diag(A).copy(), V
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300 + 1e-20 * scale:
                    A[p, q] = A[q, p] = 0.0
                    continue
                diff = A[q, q] - A[p, p]
                if abs(apq) < 1e-10 * abs(diff):
                    # theta**2 would overflow; first-order rotation is exact to rounding
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    achieved = off_norm() / scale
    if achieved <= tol:
        return np.diag(A).copy(), V
    raise NumericalFailureError(f"Jacobi did not converge in {max_sweeps} sweeps", residual=achieved)


def _fix_signs(V: np.ndarray) -> np.ndarray:
    # largest-magnitude entry positive; near-ties go to the lowest index
    V = V.copy()
    for j in range(V.shape[1]):
        col = np.abs(V[:, j])
        if col.size == 0:
            continue
        lead = int(np.argmax(col >= col.max() - _SIGN_TIE_TOL))
        if V[lead, j] < 0:
            V[:, j] = -V[:, j]
    return V


def cluster_indices(values, tol: float = CLUSTER_TOL) -> list[list[int]]:
    """Group indices of a sorted sequence into runs whose neighbours differ by <= tol."""
    groups: list[list[int]] = []
    for i, v in enumerate(values):
        if groups and abs(values[groups[-1][-1]] - v) <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


@dataclass(frozen=True)
class SpectralDecomposition:
    """Descending Q-eigenvalues with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def vector(self, i: int) -> np.ndarray:
        """Eigenvector of the i-th (0-based, descending) eigenvalue."""
        return self.eigenvectors[:, i]

    def clusters(self, tol: float = CLUSTER_TOL) -> list[list[int]]:
        return cluster_indices(self.eigenvalues, tol)

    def cluster_of(self, i: int, tol: float = CLUSTER_TOL) -> list[int]:
        for c in self.clusters(tol):
            if i in c:
                return c
        raise IndexError(i)

    def distinct_eigenvalues(self, tol: float = CLUSTER_TOL) -> np.ndarray:
        return np.array([self.eigenvalues[c].mean() for c in self.clusters(tol)])

    def to_dict(self) -> dict:
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "eigenvectors": self.eigenvectors.T.tolist(),
            "residual": float(self.residual),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "SpectralDecomposition":
        vecs = np.array(d["eigenvectors"], dtype=np.float64).reshape(len(d["eigenvalues"]), -1)
        return cls(np.array(d["eigenvalues"], dtype=np.float64), vecs.T, float(d["residual"]))


def eigendecompose(Q, tol: float = 1e-12, method: str = "lapack") -> SpectralDecomposition:
    """Full eigendecomposition of a symmetric matrix.

    ``method="lapack"`` uses ``numpy.linalg.eigh``; ``method="jacobi"`` uses
    :func:`jacobi_eigh` with ``tol`` as its stopping threshold. Either way
    the output is sorted descending, sign-normalized (largest-magnitude entry
    positive) and checked against ``residual <= 1e-8 * (1 + max|q|)``.
    """
    if tol <= 0:
        raise InvalidParameterError(f"tol must be positive, got {tol}")
    M = np.asarray(Q, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidParameterError(f"expected a square matrix, got shape {M.shape}")
    if not np.array_equal(M, M.T):
        raise InvalidParameterError("matrix is not symmetric")
    if method == "lapack":
        w, V = np.linalg.eigh(M)
    elif method == "jacobi":
        w, V = jacobi_eigh(M, tol=tol)
    else:
        raise InvalidParameterError(f"unknown eigensolver {method!r}")
    order = np.argsort(-w, kind="stable")
    w, V = w[order], _fix_signs(V[:, order])
    residual = float(np.max(np.linalg.norm(M @ V - V * w, axis=0))) if len(w) else 0.0
    bound = 1e-8 * (1.0 + (float(np.max(np.abs(w))) if len(w) else 0.0))
    if residual > bound:
        raise NumericalFailureError("eigendecomposition residual above bound", residual=residual)
    return SpectralDecomposition(w, V, residual)


def decompose_graph(g: Graph, tol: float = 1e-12, method: str = "lapack") -> SpectralDecomposition:
    return eigendecompose(signless_laplacian(g), tol=tol, method=method)


def smallest_eigenpair(dec: SpectralDecomposition) -> tuple[float, np.ndarray]:
    """(q_n, v(q_n)): the last entry of the descending decomposition."""
    if dec.n < 1:
        raise InvalidParameterError("empty decomposition")
    return float(dec.eigenvalues[-1]), dec.eigenvectors[:, -1]


def _orthonormal(B: np.ndarray) -> np.ndarray:
    if B.shape[1] == 0:
        return B
    q, _ = np.linalg.qr(B)
    return q


def subspace_angle(A: np.ndarray, B: np.ndarray) -> float:
    """Largest principal angle between the column spans of ``A`` and ``B``.

    Computed through the sine, which stays accurate for tiny angles.
    Spans of different dimension are reported as pi/2 apart.
    """
    Qa, Qb = _orthonormal(np.asarray(A, float)), _orthonormal(np.asarray(B, float))
    if Qa.shape[1] != Qb.shape[1]:
        return math.pi / 2
    if Qa.shape[1] == 0:
        return 0.0
    resid = Qb - Qa @ (Qa.T @ Qb)
    return math.asin(min(1.0, float(np.linalg.norm(resid, 2))))


# ---------------------------------------------------------------------------
# closed forms

def sum_zero_basis(k: int) -> np.ndarray:
    """Rows e_0 - e_j, j = 1..k-1: an (unnormalized) basis of the sum-zero subspace of R^k."""
    B = np.zeros((max(k - 1, 0), k))
    for j in range(1, k):
        B[j - 1, 0] = 1.0
        B[j - 1, j] = -1.0
    return B


@dataclass(frozen=True)
class EigenBlock:
    """One eigenvalue with multiplicity and unnormalized spanning vectors (rows)."""

    value: float
    multiplicity: int
    vectors: np.ndarray

    def normalized(self) -> np.ndarray:
        """Orthonormal basis of the block's span, as columns."""
        return _orthonormal(self.vectors.T)


@dataclass(frozen=True)
class ClosedFormSpectrum:
    family: str
    params: tuple
    blocks: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return sum(b.multiplicity for b in self.blocks)

    def eigenvalues(self) -> np.ndarray:
        """All eigenvalues, repeated by multiplicity, descending."""
        vals = [b.value for b in self.blocks for _ in range(b.multiplicity)]
        return np.array(sorted(vals, reverse=True))


def _blocks_complete(n):
    blocks = [EigenBlock(2.0 * n - 2, 1, np.ones((1, n)))]
    if n > 1:
        blocks.append(EigenBlock(float(n - 2), n - 1, sum_zero_basis(n)))
    return blocks


def _blocks_complete_bipartite(n, m):
    top = np.concatenate([np.full(n, 1.0 / n), np.full(m, 1.0 / m)])
    bottom = np.concatenate([np.ones(n), -np.ones(m)])
    blocks = [EigenBlock(float(n + m), 1, top[None, :])]
    # sum-zero vectors on the n-side see degree m, and vice versa
    if n > 1:
        blocks.append(EigenBlock(float(m), n - 1, np.hstack([sum_zero_basis(n), np.zeros((n - 1, m))])))
    if m > 1:
        blocks.append(EigenBlock(float(n), m - 1, np.hstack([np.zeros((m - 1, n)), sum_zero_basis(m)])))
    blocks.append(EigenBlock(0.0, 1, bottom[None, :]))
    return blocks


def _blocks_cycle(n):
    j = np.arange(n)
    blocks = [EigenBlock(4.0, 1, np.ones((1, n)))]
    for i in range(1, (n - 1) // 2 + 1):
        theta = 2 * math.pi * i / n
        vecs = np.vstack([np.cos(j * theta), np.sin(j * theta)])
        blocks.append(EigenBlock(2 + 2 * math.cos(theta), 2, vecs))
    if n % 2 == 0:
        blocks.append(EigenBlock(0.0, 1, ((-1.0) ** j)[None, :]))
    return blocks


def _blocks_path(n):
    # Q = S L S with S = diag((-1)^j) on a bipartite graph, so Q inherits the
    # Laplacian spectrum 2 - 2cos(pi i / n) with alternating-sign vectors.
    j = np.arange(n)
    sign = (-1.0) ** j
    blocks = []
    for i in range(n):
        theta = math.pi * i / n
        w = 2 * np.cos(j * theta) + 2 * np.cos((j + 1) * theta)
        blocks.append(EigenBlock(2 - 2 * math.cos(theta), 1, (sign * w)[None, :]))
    return blocks


def _blocks_star(n):
    if n == 1:
        return [EigenBlock(0.0, 1, np.ones((1, 1)))]
    top = np.concatenate([[n - 1.0], np.ones(n - 1)])
    bottom = np.concatenate([[-1.0], np.ones(n - 1)])
    blocks = [EigenBlock(float(n), 1, top[None, :])]
    if n > 2:
        blocks.append(EigenBlock(1.0, n - 2, np.hstack([np.zeros((n - 2, 1)), sum_zero_basis(n - 1)])))
    blocks.append(EigenBlock(0.0, 1, bottom[None, :]))
    return blocks


def closed_form_spectrum(family: str, n: int, m: int | None = None) -> ClosedFormSpectrum:
    """Analytic Q-spectrum of K_n, K_{n,m}, C_n, P_n or S_n.

    Vectors are returned unnormalized; see :meth:`EigenBlock.normalized`.
    """
    family = family.replace("-", "_")
    build_family(family, n, m)  # validates sizes
    if family == "complete":
        blocks, params = _blocks_complete(n), (n,)
    elif family == "complete_bipartite":
        blocks, params = _blocks_complete_bipartite(n, m), (n, m)
    elif family == "cycle":
        blocks, params = _blocks_cycle(n), (n,)
    elif family == "path":
        blocks, params = _blocks_path(n), (n,)
    else:
        blocks, params = _blocks_star(n), (n,)
    return ClosedFormSpectrum(family, params, blocks)


@dataclass(frozen=True)
class ClosedFormReport:
    family: str
    params: tuple
    max_eigenvalue_deviation: float
    max_subspace_angle: float


def verify_closed_form(family: str, n: int, m: int | None = None, tol: float = 1e-12,
                       method: str = "lapack") -> ClosedFormReport:
    """Compare the closed form against the numeric decomposition of the same graph.

    Eigenvalue deviation is taken over the two sorted lists. For each numeric
    eigenvalue cluster, the closed-form blocks whose value falls inside the
    cluster are stacked and their span compared with the numeric span.
    """
    cf = closed_form_spectrum(family, n, m)
    dec = decompose_graph(build_family(family, n, m), tol=tol, method=method)
    closed = cf.eigenvalues()
    deviation = float(np.max(np.abs(closed - dec.eigenvalues)))
    worst_angle = 0.0
    for idx in dec.clusters():
        lo = dec.eigenvalues[idx[-1]] - CLUSTER_TOL
        hi = dec.eigenvalues[idx[0]] + CLUSTER_TOL
        members = [b.normalized() for b in cf.blocks if lo <= b.value <= hi]
        span = np.hstack(members) if members else np.zeros((dec.n, 0))
        worst_angle = max(worst_angle, subspace_angle(span, dec.eigenvectors[:, idx]))
    return ClosedFormReport(cf.family, cf.params, deviation, worst_angle)
