"""Entropic quantities, all in bits."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .ensembles import Ensemble, average_state
from .errors import DistributionError, POVMError, ShapeError, ValidationError
from .linalg import as_matrix, hermitian_eigenvalues

SPECTRUM_CUTOFF = 1e-12
NEG_TOL = 1e-12
SUM_TOL = 1e-9
STATE_TOL = 1e-9
POVM_TOL = 1e-9


def shannon_entropy(p) -> float:
    """``-sum p log2 p`` with ``0 log 0 = 0``.

    Entries down to ``-1e-12`` are clamped to zero; the sum must be 1 to
    within ``1e-9``.
    """
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0 or not np.all(np.isfinite(p)):
        raise DistributionError("distribution must be a nonempty finite vector")
    if p.min() < -NEG_TOL:
        raise DistributionError(f"negative probability {p.min():.3g}")
    total = math.fsum(p)
    if abs(total - 1.0) > SUM_TOL:
        raise DistributionError(f"probabilities sum to {total:.12g}, not 1")
    p = p[p > 0]
    h = float(-np.sum(p * np.log2(p)))
    return h if h > 0 else 0.0


def von_neumann_entropy(rho) -> float:
    """Entropy of the spectrum of `rho`; eigenvalues below 1e-12 count as zero."""
    w = hermitian_eigenvalues(rho)
    if w[0] < -STATE_TOL:
        raise ValidationError(f"not a density matrix: eigenvalue {w[0]:.3g}")
    w = np.where(w < SPECTRUM_CUTOFF, 0.0, w)
    return shannon_entropy(w)


def _state_entropy(state) -> float:
    return 0.0 if state.is_pure else von_neumann_entropy(state.matrix)


def average_state_entropy(e: Ensemble) -> float:
    """``S(sum_x p_x rho_x)``.

    For all-pure ensembles with fewer members than the Hilbert-space dimension
    the spectrum is taken from the weighted Gram matrix
    ``sqrt(p_x p_y) <psi_x|psi_y>``, which shares the nonzero eigenvalues of
    the average state.
    """
    if e.all_pure and len(e) < e.layout.total_dim:
        amp = np.array([math.sqrt(p) * s.vector for p, s in e.members])
        return von_neumann_entropy(amp.conj() @ amp.T)
    return von_neumann_entropy(average_state(e))


def holevo_chi(e: Ensemble) -> float:
    """``S(rho) - sum_x p_x S(rho_x)``, clamped at 0 against rounding."""
    chi = average_state_entropy(e) - math.fsum(p * _state_entropy(s) for p, s in e.members)
    if -STATE_TOL < chi <= 0:
        return 0.0
    return chi


def mutual_information(joint) -> float:
    """Classical mutual information (bits) of a joint distribution ``p[x, y]``."""
    joint = np.asarray(joint, dtype=float)
    if joint.ndim != 2:
        raise ShapeError("joint distribution must be a 2-D array")
    if joint.min() < -NEG_TOL or abs(math.fsum(joint.ravel()) - 1.0) > SUM_TOL:
        raise DistributionError("joint distribution is not normalized")
    joint = np.clip(joint, 0.0, None)
    px = joint.sum(axis=1, keepdims=True)
    py = joint.sum(axis=0, keepdims=True)
    mask = joint > 0
    ratio = joint[mask] / (px @ py)[mask]
    info = float(np.sum(joint[mask] * np.log2(ratio)))
    return info if info > 0 else 0.0


def check_kraus(kraus: Sequence, dim: int, tol: float = POVM_TOL) -> list[np.ndarray]:
    """Validate one Kraus operator per outcome: ``sum K^dag K = I``."""
    ops = [as_matrix(k) for k in kraus]
    if not ops:
        raise POVMError("measurement needs at least one outcome")
    for i, k in enumerate(ops):
        if k.shape != (dim, dim):
            raise POVMError(f"Kraus operator {i} has shape {k.shape}, expected {(dim, dim)}")
    total = sum(k.conj().T @ k for k in ops)
    err = np.max(np.abs(total - np.eye(dim)))
    if err > tol:
        raise POVMError(f"Kraus operators are not complete (deviation {err:.3g})")
    return ops


def outcome_joint(e: Ensemble, kraus: Sequence) -> np.ndarray:
    """``p(x, y) = p_x tr(K_y rho_x K_y^dag)`` for operators on the full space."""
    ops = check_kraus(kraus, e.layout.total_dim)
    joint = np.empty((len(e), len(ops)))
    for x, (p, s) in enumerate(e.members):
        for y, k in enumerate(ops):
            if s.is_pure:
                kv = k @ s.vector
                joint[x, y] = p * np.vdot(kv, kv).real
            else:
                joint[x, y] = p * np.trace(k @ s.matrix @ k.conj().T).real
    return joint


def outcome_mutual_information(e: Ensemble, kraus: Sequence) -> float:
    """Mutual information between member identity and measurement outcome."""
    return mutual_information(outcome_joint(e, kraus))
