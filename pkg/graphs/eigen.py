"""
Dense symmetric eigensolver (cyclic Jacobi, parallel ordering).

Each sweep visits every (p, q) pair once. Pairs are scheduled in
round-robin rounds of disjoint pairs, so one round is a single
orthogonal similarity transform built from independent Givens rotations.
"""
import numpy as np

from core.errors import DataError, NumericError
from core.models import EigenSystem

OFF_DIAGONAL_TOL = 1e-12
NEGATIVE_CLAMP = 1e-10
MAX_SWEEPS = 100


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Tournament schedule: n-1 (or n) rounds of disjoint index pairs."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        rounds.append((np.array([p for p, _ in pairs]), np.array([q for _, q in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def eigendecompose(L: np.ndarray, tol: float = OFF_DIAGONAL_TOL, max_sweeps: int = MAX_SWEEPS) -> EigenSystem:
    """
    Eigenpairs of a symmetric matrix.

    Args:
        L: Symmetric matrix (a Laplacian in practice)
        tol: Stop once the off-diagonal Frobenius norm is below tol * ||L||_F
        max_sweeps: Sweep budget before giving up

    Returns:
        EigenSystem with ascending eigenvalues; values in (-1e-10, 0) are
        clamped to 0
    """
    A = np.array(L, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DataError(f"eigendecompose needs a square matrix, got shape {A.shape}")
    if not np.allclose(A, A.T, rtol=1e-12, atol=1e-12):
        raise DataError("eigendecompose needs a symmetric matrix")
    n = A.shape[0]
    V = np.eye(n)

    scale = float(np.linalg.norm(A))
    threshold = tol * scale
    rounds = _round_robin(n) if n > 1 else []

    off = _off_norm(A)
    sweeps = 0
    while off > threshold:
        if sweeps >= max_sweeps:
            raise NumericError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps (off-diagonal residual {off:.3e})"
            )
        for p, q in rounds:
            apq = A[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            app, aqq = A[p, p], A[q, q]
            theta = np.divide(aqq - app, 2.0 * apq, out=np.zeros_like(apq), where=active)
            sign = np.where(theta >= 0.0, 1.0, -1.0)
            t = np.where(active, sign / (np.abs(theta) + np.hypot(1.0, theta)), 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c

            R = np.eye(n)
            R[p, p] = c
            R[q, q] = c
            R[p, q] = s
            R[q, p] = -s
            A = R.T @ A @ R
            A = 0.5 * (A + A.T)
            V = V @ R
        sweeps += 1
        off = _off_norm(A)

    values = np.diag(A).copy()
    values[(values < 0.0) & (values > -NEGATIVE_CLAMP)] = 0.0
    order = np.argsort(values, kind="stable")
    return EigenSystem(U=V[:, order], eigenvalues=values[order])
