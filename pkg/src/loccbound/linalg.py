"""Dense complex linear algebra for small multipartite systems.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Tensor factors
are ordered big-endian: party 1 is the most significant digit of a basis
index, so ``|001>`` on three qubits is basis vector 1 and party 3 is the last
Kronecker factor.  Party indices in every public function are 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import (
    ConvergenceError,
    LayoutError,
    ShapeError,
    SizeError,
    SymmetryError,
)

MAX_TOTAL_DIM = 4096
HERMITIAN_TOL = 1e-10
EIG_TOL = 1e-12
MAX_SWEEPS = 100


def as_matrix(m) -> np.ndarray:
    """Return `m` as a finite 2-D complex128 array, raising on anything else."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ShapeError("matrix has non-finite entries")
    return arr


@dataclass(frozen=True)
class SystemLayout:
    """Ordered subsystem dimensions ``d_1, ..., d_N``."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise LayoutError("layout needs at least one party")
        if any(d < 2 for d in dims):
            raise LayoutError(f"subsystem dimensions must be >= 2, got {dims}")
        if math.prod(dims) > MAX_TOTAL_DIM:
            raise SizeError(f"total dimension {math.prod(dims)} exceeds {MAX_TOTAL_DIM}")
        object.__setattr__(self, "dims", dims)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def dim_of(self, parties: Iterable[int]) -> int:
        return math.prod(self.dims[k - 1] for k in self.check_parties(parties))

    def check_parties(self, parties: Iterable[int]) -> tuple[int, ...]:
        """Validate 1-based party indices; return them sorted and deduplicated."""
        ks = sorted({int(k) for k in parties})
        if not ks:
            raise LayoutError("party set must be nonempty")
        for k in ks:
            if not 1 <= k <= self.n_parties:
                raise LayoutError(f"party index {k} out of range 1..{self.n_parties}")
        return tuple(ks)


def kron(a, b, max_dim: int = MAX_TOTAL_DIM) -> np.ndarray:
    """Kronecker product ``a ⊗ b`` with a guard on the resulting size."""
    a, b = as_matrix(a), as_matrix(b)
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if max(rows, cols) > max_dim:
        raise SizeError(f"kron result {rows}x{cols} exceeds maximum dimension {max_dim}")
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(rows, cols)


def _check_square(m: np.ndarray, layout: SystemLayout) -> None:
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got {m.shape}")
    if m.shape[0] != layout.total_dim:
        raise ShapeError(
            f"matrix dimension {m.shape[0]} does not match layout {layout.dims}"
        )


def partial_trace(m, layout: SystemLayout, keep: Iterable[int]) -> np.ndarray:
    """Trace out every party not in `keep`; kept parties stay in original order."""
    m = as_matrix(m)
    _check_square(m, layout)
    kept = layout.check_parties(keep)
    n = layout.n_parties
    t = m.reshape(layout.dims + layout.dims)
    row_labels = list(range(n))
    col_labels = [n + i if (i + 1) in kept else i for i in range(n)]
    out_labels = [i - 1 for i in kept] + [n + i - 1 for i in kept]
    red = np.einsum(t, row_labels + col_labels, out_labels)
    d = layout.dim_of(kept)
    return red.reshape(d, d)


def reduce_pure(vec, layout: SystemLayout, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix of the pure state `vec` on the kept parties."""
    vec = np.asarray(vec, dtype=np.complex128).reshape(-1)
    if vec.size != layout.total_dim:
        raise ShapeError(f"vector length {vec.size} does not match layout {layout.dims}")
    kept = layout.check_parties(keep)
    rest = [k for k in range(1, layout.n_parties + 1) if k not in kept]
    order = [k - 1 for k in kept] + [k - 1 for k in rest]
    psi = vec.reshape(layout.dims).transpose(order).reshape(layout.dim_of(kept), -1)
    return psi @ psi.conj().T


def embed_operator(op, layout: SystemLayout, parties: Iterable[int]) -> np.ndarray:
    """Lift `op`, acting on `parties` (in sorted order), to the full space.

    The result is ``op ⊗ I`` with the tensor factors permuted back into the
    layout's order.
    """
    op = as_matrix(op)
    ks = layout.check_parties(parties)
    d_op = layout.dim_of(ks)
    if op.shape != (d_op, d_op):
        raise ShapeError(f"operator shape {op.shape} does not act on parties {ks}")
    rest = [k for k in range(1, layout.n_parties + 1) if k not in ks]
    d_rest = math.prod(layout.dims[k - 1] for k in rest)
    full = kron(op, np.eye(d_rest))
    n = layout.n_parties
    perm_dims = [layout.dims[k - 1] for k in ks] + [layout.dims[k - 1] for k in rest]
    # axis j of the permuted tensor holds party perm[j]
    perm = [k - 1 for k in ks] + [k - 1 for k in rest]
    inv = np.argsort(perm)
    t = full.reshape(perm_dims + perm_dims)
    t = t.transpose(list(inv) + [n + i for i in inv])
    return t.reshape(layout.total_dim, layout.total_dim)


def hermitian_check(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return the exactly-Hermitian part of `m` after checking it is Hermitian."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got {m.shape}")
    asym = np.max(np.abs(m - m.conj().T))
    if asym > tol:
        raise SymmetryError(f"matrix is not Hermitian (max asymmetry {asym:.3g})")
    return 0.5 * (m + m.conj().T)


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Cyclic ordering of all index pairs, grouped into rounds of disjoint pairs.

    Rotations within a round touch disjoint rows/columns, so one round is
    applied as a single vectorized update.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [
            (min(players[i], players[m - 1 - i]), max(players[i], players[m - 1 - i]))
            for i in range(m // 2)
        ]
        pairs = [pq for pq in pairs if pq[1] < n]
        rounds.append(
            (np.array([p for p, _ in pairs], dtype=np.intp), np.array([q for _, q in pairs], dtype=np.intp))
        )
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def hermitian_eig(m, tol: float = EIG_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in round-robin order.

    Parameters
    ----------
    m : array_like
        Square matrix, Hermitian to within ``HERMITIAN_TOL``.
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm drops below
        ``tol * max(1, ||m||_F)``.
    max_sweeps : int
        Raise :class:`ConvergenceError` if not converged after this many sweeps.

    Returns
    -------
    w : ndarray
        Real eigenvalues in ascending order.
    v : ndarray
        Unitary matrix whose columns are the matching eigenvectors, so that
        ``m ≈ v @ diag(w) @ v.conj().T``.
    """
    a = hermitian_check(m).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))
    skip = 1e-3 * threshold / n

    for sweep in range(max_sweeps + 1):
        if _off_norm(a) < threshold:
            break
        if sweep == max_sweeps:
            raise ConvergenceError(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps"
            )
        for P, Q in _round_robin(n):
            apq = a[P, Q]
            r = np.abs(apq)
            live = r > skip
            if not live.any():
                continue
            P, Q, apq, r = P[live], Q[live], apq[live], r[live]
            u = apq / r
            zeta = (a[Q, Q].real - a[P, P].real) / (2.0 * r)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.hypot(1.0, zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            uc = u.conj()
            # block-diagonal R = [[c, s], [-conj(u) s, conj(u) c]] on each (p, q)
            rot = np.eye(n, dtype=np.complex128)
            rot[P, P] = c
            rot[P, Q] = s
            rot[Q, P] = -uc * s
            rot[Q, Q] = uc * c
            a = rot.conj().T @ a @ rot
            a[P, Q] = 0.0
            a[Q, P] = 0.0
            a[np.diag_indices(n)] = a.diagonal().real
            v = v @ rot

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def hermitian_eigenvalues(m, tol: float = EIG_TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix (Jacobi)."""
    m = as_matrix(m)
    if m.shape == (1, 1):
        hermitian_check(m)
        return np.array([m[0, 0].real])
    return hermitian_eig(m, tol=tol, max_sweeps=max_sweeps)[0]
