"""Worked-example ensembles, parameter sweeps, and the E2 crossing finder."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, TextIO

import numpy as np

from .bounds import locc_bound
from .ensembles import Ensemble, make_pure
from .errors import DomainError, RootFindingError, ValidationError
from .linalg import SystemLayout
from .measures import holevo_chi

QUBITS3 = SystemLayout((2, 2, 2))
QUBITS4 = SystemLayout((2, 2, 2, 2))


def ket(layout: SystemLayout, terms: dict[str, float]) -> np.ndarray:
    """Amplitude vector from ``{"001": amp, ...}`` (big-endian bit strings)."""
    vec = np.zeros(layout.total_dim, dtype=np.complex128)
    for bits, amp in terms.items():
        vec[int(bits, 2)] += amp
    return vec


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value}")
    return value


def build_e1(a: float, c: float) -> Ensemble:
    """Three equiprobable states ``a|000> ± b|111>`` and ``c|001> + d|110>``."""
    a, c = _check_unit("a", a), _check_unit("c", c)
    b, d = math.sqrt(1.0 - a * a), math.sqrt(1.0 - c * c)
    states = [
        make_pure(QUBITS3, ket(QUBITS3, {"000": a, "111": b})),
        make_pure(QUBITS3, ket(QUBITS3, {"000": a, "111": -b})),
        make_pure(QUBITS3, ket(QUBITS3, {"001": c, "110": d})),
    ]
    return Ensemble.from_states(states)


def build_e2(a: float) -> Ensemble:
    """Six equiprobable GHZ-like states on three qubits."""
    a = _check_unit("a", a)
    b = math.sqrt(1.0 - a * a)
    states = []
    for lo, hi in (("000", "111"), ("001", "110"), ("010", "101")):
        for sign in (1.0, -1.0):
            states.append(make_pure(QUBITS3, ket(QUBITS3, {lo: a, hi: sign * b})))
    return Ensemble.from_states(states)


_E3_TERMS = [
    {"0000": 1, "0011": 1, "1100": 1, "1111": -1},
    {"0000": 1, "0011": -1, "1100": 1, "1111": 1},
    {"0001": 1, "0010": 1, "1101": 1, "1110": -1},
    {"0001": 1, "0010": -1, "1101": 1, "1110": 1},
    {"0101": 1, "0110": 1, "1001": 1, "1010": -1},
    {"0101": 1, "0110": -1, "1001": 1, "1010": 1},
    {"0111": 1, "0100": 1, "1011": 1, "1000": -1},
    {"0111": 1, "0100": -1, "1011": 1, "1000": 1},
    {"0000": 1, "0011": 1, "1100": -1, "1111": 1},
]


def build_e3() -> Ensemble:
    """Nine equiprobable, mutually orthogonal four-qubit states."""
    vecs = [ket(QUBITS4, {k: 0.5 * v for k, v in t.items()}) for t in _E3_TERMS]
    gram = np.array(vecs).conj() @ np.array(vecs).T
    off = np.max(np.abs(gram - np.eye(len(vecs))))
    if off >= 1e-12:
        raise ValidationError(f"E3 states are not orthonormal (deviation {off:.3g})")
    return Ensemble.from_states([make_pure(QUBITS4, v) for v in vecs])


def e2_closed_form(a: float) -> tuple[float, float]:
    """Hand-derived ``(bound, chi)`` for E2, independent of the toolkit path."""
    a2 = a * a

    def xlog(p):
        return p * math.log2(p) if p > 0 else 0.0

    bound = -(2.0 / 3.0) * (1 + a2) * math.log2((1 + a2) / 3) - (2.0 / 3.0) * (2 - a2) * math.log2(
        (2 - a2) / 3
    )
    # six eigenvalues: a^2/3 (x3) and (1-a^2)/3 (x3)
    chi = -3 * xlog(a2 / 3) - 3 * xlog((1 - a2) / 3)
    return bound, chi


@dataclass(frozen=True)
class SweepRow:
    a: float
    c: float | None
    bound_bits: float
    chi_bits: float


def grid(n: int) -> list[float]:
    if n < 2:
        raise DomainError(f"grid needs at least 2 points, got {n}")
    return [i / (n - 1) for i in range(n)]


def _row(e: Ensemble, a: float, c: float | None) -> SweepRow:
    return SweepRow(a, c, locc_bound(e).bound_bits, holevo_chi(e))


def sweep(example: str, grid_points: int) -> list[SweepRow]:
    """Evaluate bound and chi over a uniform grid; E1 is a full a-by-c grid."""
    example = example.lower()
    pts = grid(grid_points)
    if example == "e1":
        return [_row(build_e1(a, c), a, c) for a in pts for c in pts]
    if example == "e2":
        return [_row(build_e2(a), a, None) for a in pts]
    raise DomainError(f"unknown sweep example {example!r} (expected e1 or e2)")


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def write_sweep_csv(rows: list[SweepRow], out: TextIO) -> None:
    two_d = bool(rows) and rows[0].c is not None
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["a", "c", "bound_bits", "chi_bits"] if two_d else ["a", "bound_bits", "chi_bits"])
    for r in rows:
        head = [_fmt(r.a), _fmt(r.c)] if two_d else [_fmt(r.a)]
        w.writerow(head + [_fmt(r.bound_bits), _fmt(r.chi_bits)])


def sweep_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    return buf.getvalue()


def sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise RootFindingError(f"no sign change on [{lo}, {hi}]: f = {flo:.6g}, {fhi:.6g}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def e2_gap(a: float) -> float:
    """Toolkit ``bound - chi`` for E2; negative means LOCC-indistinguishable."""
    r = locc_bound(build_e2(a))
    return r.bound_bits - r.chi_bits


LOW_BRACKET = (0.1, 0.5)
HIGH_BRACKET = (0.9, 1.0)


def find_e2_crossings(tolerance: float = 1e-6) -> tuple[float, float]:
    """Both roots of the E2 gap by bisection, checked against a residual bound.

    The residual tolerance is ``|f'(root)| * tolerance`` (central difference)
    plus ``1e-12``; a root whose gap exceeds it raises :class:`RootFindingError`.
    """
    if not tolerance > 0:
        raise DomainError("tolerance must be positive")
    roots = []
    for lo, hi in (LOW_BRACKET, HIGH_BRACKET):
        root = bisect(e2_gap, lo, hi, tolerance)
        h = min(tolerance, root - lo, hi - root) or tolerance
        slope = (e2_gap(min(root + h, 1.0)) - e2_gap(root - h)) / (min(root + h, 1.0) - root + h)
        resid = abs(e2_gap(root))
        if resid > abs(slope) * tolerance + 1e-12:
            raise RootFindingError(f"root {root:.9g} has residual {resid:.3g}")
        roots.append(root)
    return roots[0], roots[1]
