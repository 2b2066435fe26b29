"""Seeded random ensembles, measurements and protocols for property checks.

The seed defaults to ``LOCCBOUND_SEED`` from the environment so a failing
property run can be replayed exactly.
"""

from __future__ import annotations

import os

import numpy as np

from .ensembles import Ensemble, make_mixed, make_pure
from .linalg import SystemLayout
from .sim import LocalMeasurement, ProtocolTree

DEFAULT_SEED = 20080417


def default_seed() -> int:
    return int(os.environ.get("LOCCBOUND_SEED", DEFAULT_SEED))


def rng(seed: int | None = None) -> np.random.Generator:
    return np.random.default_rng(default_seed() if seed is None else seed)


def random_pure_vector(d: int, gen: np.random.Generator) -> np.ndarray:
    v = gen.normal(size=d) + 1j * gen.normal(size=d)
    return v / np.linalg.norm(v)


def random_density(d: int, gen: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = d if rank is None else rank
    g = gen.normal(size=(d, rank)) + 1j * gen.normal(size=(d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(d: int, gen: np.random.Generator) -> np.ndarray:
    a = gen.normal(size=(d, d)) + 1j * gen.normal(size=(d, d))
    return a + a.conj().T


def random_unitary(d: int, gen: np.random.Generator) -> np.ndarray:
    z = gen.normal(size=(d, d)) + 1j * gen.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_ensemble(
    dims,
    gen: np.random.Generator,
    n_members: int | None = None,
    mixed_fraction: float = 0.3,
) -> Ensemble:
    """Members are pure with probability ``1 - mixed_fraction``, else random-rank mixed."""
    layout = SystemLayout(tuple(dims))
    n = int(gen.integers(1, 6)) if n_members is None else n_members
    d = layout.total_dim
    probs = gen.dirichlet(np.ones(n))
    members = []
    for p in probs:
        if gen.random() < mixed_fraction:
            state = make_mixed(layout, random_density(d, gen, int(gen.integers(1, d + 1))))
        else:
            state = make_pure(layout, random_pure_vector(d, gen))
        members.append((float(p), state))
    return Ensemble(layout, tuple(members))


def random_rank1_kraus(d: int, n_outcomes: int, gen: np.random.Generator) -> list[np.ndarray]:
    """Rank-one Kraus operators ``|u_y><v_y|`` from the first d columns of a random unitary.

    The rows ``v_y`` of an ``n_outcomes x d`` isometry satisfy
    ``sum_y v_y^dag v_y = I``; post-measurement vectors ``u_y`` are random.
    """
    if n_outcomes < d:
        raise ValueError(f"rank-one POVM on dimension {d} needs at least {d} outcomes")
    iso = random_unitary(n_outcomes, gen)[:, :d]
    ops = []
    for y in range(n_outcomes):
        u = random_pure_vector(d, gen)
        ops.append(np.outer(u, iso[y]))
    return ops


def random_local_measurement(layout: SystemLayout, gen: np.random.Generator) -> LocalMeasurement:
    party = int(gen.integers(1, layout.n_parties + 1))
    d = layout.dims[party - 1]
    n_out = int(gen.integers(d, d + 3)) if gen.random() < 0.5 else d
    if n_out == d and gen.random() < 0.5:
        u = random_unitary(d, gen)
        ops = [np.outer(u[:, i], u[:, i].conj()) for i in range(d)]
    else:
        ops = random_rank1_kraus(d, n_out, gen)
    return LocalMeasurement(party, tuple(ops))


def random_protocol(layout: SystemLayout, gen: np.random.Generator, max_depth: int) -> ProtocolTree | None:
    """Random adaptive tree; each child is a further measurement with probability 0.7."""
    if max_depth <= 0:
        return None
    m = random_local_measurement(layout, gen)
    children = tuple(
        random_protocol(layout, gen, max_depth - 1) if gen.random() < 0.7 else None
        for _ in range(m.n_outcomes)
    )
    return ProtocolTree(m, children)
