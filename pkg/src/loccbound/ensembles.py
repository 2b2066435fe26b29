"""States, ensembles, and the JSON ensemble file format.

File format::

    {"dims": [2, 2, 2],
     "members": [{"p": 0.5, "pure": [[re, im], ...]},
                 {"p": 0.5, "mixed": [[[re, im], ...], ...]}]}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DistributionError,
    LayoutError,
    NormalizationError,
    ParseError,
    ShapeError,
    ValidationError,
)
from .linalg import (
    HERMITIAN_TOL,
    SystemLayout,
    as_matrix,
    hermitian_check,
    hermitian_eigenvalues,
    partial_trace,
    reduce_pure,
)

NORM_WINDOW = 1e-6
STATE_TOL = 1e-9
PROB_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class QuantumState:
    """A pure (amplitude vector) or mixed (density matrix) state on a layout.

    Construct through :func:`make_pure` or :func:`make_mixed`; direct
    construction runs the same validation.
    """

    layout: SystemLayout
    vector: np.ndarray | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if (self.vector is None) == (self.matrix is None):
            raise ValidationError("a state is either pure or mixed")
        d = self.layout.total_dim
        if self.vector is not None:
            vec = np.asarray(self.vector, dtype=np.complex128).reshape(-1).copy()
            if vec.size != d:
                raise ShapeError(
                    f"pure state needs {d} amplitudes for layout {list(self.layout.dims)}, got {vec.size}"
                )
            if not np.all(np.isfinite(vec)):
                raise ShapeError("amplitudes must be finite")
            norm = float(np.linalg.norm(vec))
            if abs(norm - 1.0) > NORM_WINDOW:
                raise NormalizationError(f"amplitude norm {norm:.9g} is not 1")
            vec /= norm
            vec.setflags(write=False)
            object.__setattr__(self, "vector", vec)
        else:
            rho = as_matrix(self.matrix)
            if rho.shape != (d, d):
                raise ShapeError(
                    f"density matrix must be {d}x{d} for layout {list(self.layout.dims)}, got {rho.shape}"
                )
            rho = hermitian_check(rho, HERMITIAN_TOL)
            tr = float(np.trace(rho).real)
            if abs(tr - 1.0) > STATE_TOL:
                raise NormalizationError(f"density matrix trace {tr:.12g} is not 1")
            lo = hermitian_eigenvalues(rho)[0]
            if lo < -STATE_TOL:
                raise ValidationError(f"density matrix has negative eigenvalue {lo:.3g}")
            rho = rho.copy()
            rho.setflags(write=False)
            object.__setattr__(self, "matrix", rho)

    @property
    def is_pure(self) -> bool:
        return self.vector is not None

    def density(self) -> np.ndarray:
        return density_of(self)

    def reduce(self, parties: Iterable[int]) -> np.ndarray:
        """Reduced density matrix on `parties` (1-based)."""
        if self.vector is not None:
            return reduce_pure(self.vector, self.layout, parties)
        return partial_trace(self.matrix, self.layout, parties)


def _layout(layout) -> SystemLayout:
    return layout if isinstance(layout, SystemLayout) else SystemLayout(tuple(layout))


def make_pure(layout, amplitudes) -> QuantumState:
    """Pure state from big-endian amplitudes; norm must already be 1 to within 1e-6."""
    return QuantumState(_layout(layout), vector=np.asarray(amplitudes, dtype=np.complex128))


def make_mixed(layout, rho) -> QuantumState:
    return QuantumState(_layout(layout), matrix=np.asarray(rho, dtype=np.complex128))


def density_of(s: QuantumState) -> np.ndarray:
    if s.vector is not None:
        return np.outer(s.vector, s.vector.conj())
    return np.array(s.matrix)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Probability-weighted states ``{p_x, rho_x}`` sharing one layout."""

    layout: SystemLayout
    members: tuple[tuple[float, QuantumState], ...] = field(default_factory=tuple)

    def __post_init__(self):
        members = tuple((float(p), s) for p, s in self.members)
        if not members:
            raise ValidationError("ensemble needs at least one member")
        for i, (p, s) in enumerate(members):
            if not isinstance(s, QuantumState):
                raise ValidationError(f"members[{i}] is not a QuantumState")
            if s.layout != self.layout:
                raise LayoutError(
                    f"members[{i}] layout {list(s.layout.dims)} differs from {list(self.layout.dims)}"
                )
            if not math.isfinite(p) or p < 0:
                raise DistributionError(f"members[{i}].p = {p} is not a probability")
        total = math.fsum(p for p, _ in members)
        if abs(total - 1.0) > PROB_TOL:
            raise DistributionError(f"probabilities sum to {total:.12g}, not 1")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_states(cls, states: Sequence[QuantumState], probs: Sequence[float] | None = None):
        if not states:
            raise ValidationError("ensemble needs at least one member")
        if probs is None:
            probs = [1.0 / len(states)] * len(states)
        if len(probs) != len(states):
            raise ValidationError("need one probability per state")
        return cls(states[0].layout, tuple(zip(probs, states)))

    def __len__(self):
        return len(self.members)

    @property
    def probs(self) -> np.ndarray:
        return np.array([p for p, _ in self.members])

    @property
    def states(self) -> list[QuantumState]:
        return [s for _, s in self.members]

    @property
    def all_pure(self) -> bool:
        return all(s.is_pure for _, s in self.members)


def average_state(e: Ensemble) -> np.ndarray:
    """``sum_x p_x rho_x``."""
    d = e.layout.total_dim
    rho = np.zeros((d, d), dtype=np.complex128)
    for p, s in e.members:
        if s.vector is not None:
            rho += p * np.outer(s.vector, s.vector.conj())
        else:
            rho += p * s.matrix
    return rho


def average_reduction(e: Ensemble, parties: Iterable[int]) -> np.ndarray:
    """Reduction of the average state, accumulated member by member."""
    parties = e.layout.check_parties(parties)
    acc = None
    for p, s in e.members:
        r = p * s.reduce(parties)
        acc = r if acc is None else acc + r
    return acc


def reduce_member(e: Ensemble, x: int, party: int) -> np.ndarray:
    """Single-party reduction of member `x` (0-based) onto `party` (1-based)."""
    if not 0 <= x < len(e.members):
        raise IndexError(f"member index {x} out of range 0..{len(e.members) - 1}")
    if not 1 <= party <= e.layout.n_parties:
        raise IndexError(f"party index {party} out of range 1..{e.layout.n_parties}")
    return e.members[x][1].reduce([party])


# -- file format -------------------------------------------------------------


def _cplx(v, where: str) -> complex:
    if (
        not isinstance(v, (list, tuple))
        or len(v) != 2
        or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in v)
    ):
        raise ParseError(f"{where}: complex numbers are written as [re, im], got {v!r}")
    return complex(float(v[0]), float(v[1]))


def parse_vector(raw, where: str) -> np.ndarray:
    if not isinstance(raw, list):
        raise ParseError(f"{where}: expected a list of [re, im] pairs")
    return np.array([_cplx(v, f"{where}[{i}]") for i, v in enumerate(raw)], dtype=np.complex128)


def parse_matrix(raw, where: str) -> np.ndarray:
    if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
        raise ParseError(f"{where}: expected a list of rows")
    rows = [parse_vector(r, f"{where}[{i}]") for i, r in enumerate(raw)]
    if len({len(r) for r in rows}) != 1:
        raise ShapeError(f"{where}: rows have unequal lengths")
    return np.array(rows)


def vector_to_json(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v).reshape(-1)]


def matrix_to_json(m) -> list:
    return [vector_to_json(row) for row in np.asarray(m)]


def parse_dims(raw, where: str = "dims") -> SystemLayout:
    if (
        not isinstance(raw, list)
        or not raw
        or not all(isinstance(d, int) and not isinstance(d, bool) for d in raw)
    ):
        raise ParseError(f"{where}: expected a nonempty list of integers")
    try:
        return SystemLayout(tuple(raw))
    except LayoutError as exc:
        raise LayoutError(f"{where}: {exc}") from None


def ensemble_from_dict(doc) -> Ensemble:
    if not isinstance(doc, dict):
        raise ParseError("ensemble document must be an object")
    for key in ("dims", "members"):
        if key not in doc:
            raise ParseError(f"missing field '{key}'")
    layout = parse_dims(doc["dims"])
    raw_members = doc["members"]
    if not isinstance(raw_members, list) or not raw_members:
        raise ParseError("members: expected a nonempty list")
    members = []
    for i, m in enumerate(raw_members):
        where = f"members[{i}]"
        if not isinstance(m, dict) or "p" not in m:
            raise ParseError(f"{where}: expected an object with field 'p'")
        p = m["p"]
        if not isinstance(p, (int, float)) or isinstance(p, bool):
            raise ParseError(f"{where}.p: expected a number")
        if ("pure" in m) == ("mixed" in m):
            raise ParseError(f"{where}: exactly one of 'pure' or 'mixed' is required")
        try:
            if "pure" in m:
                state = make_pure(layout, parse_vector(m["pure"], f"{where}.pure"))
            else:
                state = make_mixed(layout, parse_matrix(m["mixed"], f"{where}.mixed"))
        except ParseError:
            raise
        except ValidationError as exc:
            raise type(exc)(f"{where}: {exc}") from None
        members.append((float(p), state))
    return Ensemble(layout, tuple(members))


def ensemble_to_dict(e: Ensemble) -> dict:
    members = []
    for p, s in e.members:
        if s.is_pure:
            members.append({"p": p, "pure": vector_to_json(s.vector)})
        else:
            members.append({"p": p, "mixed": matrix_to_json(s.matrix)})
    return {"dims": list(e.layout.dims), "members": members}


def read_json(path) -> object:
    """Load a JSON document, turning syntax errors into :class:`ParseError`.

    Missing or unreadable files propagate as ``OSError``.
    """
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from None


def load_ensemble(path) -> Ensemble:
    return ensemble_from_dict(read_json(path))


def save_ensemble(e: Ensemble, path) -> None:
    # json writes floats with repr(), which round-trips exactly
    Path(path).write_text(json.dumps(ensemble_to_dict(e), indent=1) + "\n")
