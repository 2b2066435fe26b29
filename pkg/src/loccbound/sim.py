"""Adaptive LOCC measurement protocols on ensembles.

A protocol is a finite tree.  Each node is a measurement on one party, given
by one Kraus operator per outcome; each outcome leads to a child protocol or
to ``None`` (stop).  Later measurements may depend on every earlier outcome,
which is exactly the classical communication allowed under LOCC.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .ensembles import (
    Ensemble,
    make_mixed,
    make_pure,
    matrix_to_json,
    parse_matrix,
    read_json,
)
from .errors import ParseError, POVMError, ProtocolError, ValidationError
from .linalg import SystemLayout, as_matrix, embed_operator
from .measures import check_kraus, holevo_chi, mutual_information

PRUNE = 1e-12
MEMBER_DROP = 1e-14
MAX_DEPTH = 8


@dataclass(frozen=True, eq=False)
class LocalMeasurement:
    """Measurement on one party (1-based): one Kraus operator per outcome."""

    party: int
    kraus_ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        if int(self.party) < 1:
            raise ProtocolError(f"party index must be >= 1, got {self.party}")
        ops = [as_matrix(k) for k in self.kraus_ops]
        if not ops:
            raise POVMError("measurement needs at least one outcome")
        ops = check_kraus(ops, ops[0].shape[0])
        object.__setattr__(self, "party", int(self.party))
        object.__setattr__(self, "kraus_ops", tuple(ops))

    @property
    def n_outcomes(self) -> int:
        return len(self.kraus_ops)

    def embedded(self, layout: SystemLayout) -> list[np.ndarray]:
        layout.check_parties([self.party])
        d = layout.dims[self.party - 1]
        if self.kraus_ops[0].shape[0] != d:
            raise POVMError(
                f"Kraus operators are {self.kraus_ops[0].shape[0]}-dimensional "
                f"but party {self.party} has dimension {d}"
            )
        return [embed_operator(k, layout, [self.party]) for k in self.kraus_ops]


@dataclass(frozen=True, eq=False)
class ProtocolTree:
    node: LocalMeasurement
    children: tuple["ProtocolTree | None", ...] = ()

    def __post_init__(self):
        children = tuple(self.children) or (None,) * self.node.n_outcomes
        if len(children) != self.node.n_outcomes:
            raise ProtocolError(
                f"node on party {self.node.party} has {self.node.n_outcomes} outcomes "
                f"but {len(children)} children"
            )
        object.__setattr__(self, "children", children)

    @property
    def depth(self) -> int:
        return 1 + max((c.depth for c in self.children if c is not None), default=0)


def tree_depth(tree: ProtocolTree | None) -> int:
    return 0 if tree is None else tree.depth


def _apply(state, op):
    """Unnormalized post-measurement state and its squared norm."""
    if isinstance(state, np.ndarray) and state.ndim == 1:
        v = op @ state
        return v, float(np.vdot(v, v).real)
    m = op @ state @ op.conj().T
    return m, float(np.trace(m).real)


def _raw(s):
    return s.vector if s.is_pure else s.matrix


def _normalized_member(layout, raw, weight):
    if raw.ndim == 1:
        return make_pure(layout, raw / math.sqrt(weight))
    return make_mixed(layout, raw / weight)


def apply_local_measurement(e: Ensemble, m: LocalMeasurement) -> list[tuple[float, Ensemble]]:
    """Outcome probabilities and post-measurement ensembles.

    Outcomes with probability below 1e-12 are dropped and the rest
    renormalized.
    """
    ops = m.embedded(e.layout)
    branches = []
    for op in ops:
        members = []
        for p, s in e.members:
            out, w = _apply(_raw(s), op)
            members.append((p * w, out, w))
        p_y = math.fsum(pw for pw, _, _ in members)
        if p_y < PRUNE:
            continue
        kept = [(pw, out, w) for pw, out, w in members if w > MEMBER_DROP]
        norm = math.fsum(pw for pw, _, _ in kept)
        post = Ensemble(
            e.layout,
            tuple((pw / norm, _normalized_member(e.layout, out, w)) for pw, out, w in kept),
        )
        branches.append((p_y, post))
    total = math.fsum(p for p, _ in branches)
    return [(p / total, post) for p, post in branches]


@dataclass(frozen=True)
class Lemma1Result:
    info_gained: float
    chi_before: float
    avg_chi_after: float
    slack: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _reduced_ensemble(e: Ensemble, party: int) -> Ensemble:
    layout = SystemLayout((e.layout.dims[party - 1],))
    return Ensemble(layout, tuple((p, make_mixed(layout, s.reduce([party]))) for p, s in e.members))


def lemma1_check(e: Ensemble, m: LocalMeasurement, local: bool = False) -> Lemma1Result:
    """Compare the information a measurement extracts with the drop in Holevo quantity.

    ``slack = chi_before - avg_chi_after - info_gained`` is non-negative for
    every measurement with one Kraus operator per outcome.  With
    ``local=True`` the Holevo quantities are those of the measured party's
    reduced ensemble rather than of the whole system.
    """
    if local:
        e.layout.check_parties([m.party])
        e = _reduced_ensemble(e, m.party)
        m = LocalMeasurement(1, m.kraus_ops)
    ops = m.embedded(e.layout)
    joint = np.empty((len(e), len(ops)))
    for x, (p, s) in enumerate(e.members):
        for y, op in enumerate(ops):
            joint[x, y] = p * _apply(_raw(s), op)[1]
    info = mutual_information(joint)
    chi_before = holevo_chi(e)
    avg_after = math.fsum(p_y * holevo_chi(post) for p_y, post in apply_local_measurement(e, m))
    return Lemma1Result(info, chi_before, avg_after, chi_before - avg_after - info)


@dataclass(frozen=True)
class TranscriptDistribution:
    """Rows ``(member index, outcome sequence, joint probability)``."""

    rows: tuple[tuple[int, tuple[int, ...], float], ...]

    def joint_matrix(self, n_members: int) -> tuple[np.ndarray, list[tuple[int, ...]]]:
        transcripts = sorted({t for _, t, _ in self.rows})
        col = {t: j for j, t in enumerate(transcripts)}
        joint = np.zeros((n_members, len(transcripts)))
        for x, t, p in self.rows:
            joint[x, col[t]] += p
        return joint, transcripts

    def to_dict(self) -> list[dict]:
        return [{"member": x, "transcript": list(t), "p": p} for x, t, p in self.rows]


@dataclass(frozen=True)
class ProtocolResult:
    transcripts: TranscriptDistribution
    extracted_info: float
    chain_rule_info: float


def run_protocol(e: Ensemble, tree: ProtocolTree | None, max_depth: int = MAX_DEPTH) -> ProtocolResult:
    """Run an adaptive protocol on every member and collect the transcript law.

    ``extracted_info`` is the mutual information between member identity and
    the full transcript; ``chain_rule_info`` re-derives it as the
    probability-weighted sum of the information gained at each node.
    """
    depth = tree_depth(tree)
    if depth > max_depth:
        raise ProtocolError(f"protocol depth {depth} exceeds maximum {max_depth}")
    rows: list[tuple[int, tuple[int, ...], float]] = []
    gains: list[float] = []
    embedded: dict[int, list[np.ndarray]] = {}

    def walk(node, prefix, branch):
        # branch: list of (x, joint weight, unnormalized state, squared norm)
        if node is None:
            rows.extend((x, prefix, w) for x, w, _, _ in branch)
            return
        ops = embedded.get(id(node))
        if ops is None:
            ops = embedded[id(node)] = node.node.embedded(e.layout)
        total = math.fsum(w for _, w, _, _ in branch)
        children = []
        joint = np.zeros((len(e), len(ops)))
        for y, op in enumerate(ops):
            child = []
            for x, w, st, nrm in branch:
                out, nrm_out = _apply(st, op)
                wy = w * nrm_out / nrm
                joint[x, y] += wy
                if nrm_out > MEMBER_DROP * nrm:
                    child.append((x, wy, out, nrm_out))
            children.append(child)
        gains.append(total * mutual_information(joint / joint.sum()))
        for y, (sub, child) in enumerate(zip(node.children, children)):
            if math.fsum(w for _, w, _, _ in child) >= PRUNE:
                walk(sub, prefix + (y,), child)

    start = [(x, p, _raw(s), 1.0) for x, (p, s) in enumerate(e.members) if p > 0]
    walk(tree, (), start)
    agg: dict[tuple[int, tuple[int, ...]], float] = defaultdict(float)
    for x, t, p in rows:
        agg[(x, t)] += p
    total = math.fsum(agg.values())
    dist = TranscriptDistribution(tuple((x, t, p / total) for (x, t), p in sorted(agg.items())))
    joint, _ = dist.joint_matrix(len(e))
    return ProtocolResult(dist, mutual_information(joint), math.fsum(gains))


# -- protocol file format ----------------------------------------------------


def protocol_from_dict(doc, where: str = "protocol", depth: int = 0) -> ProtocolTree | None:
    if doc is None:
        return None
    if depth >= 64:
        raise ParseError(f"{where}: protocol nesting too deep")
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected an object or null")
    for key in ("party", "kraus"):
        if key not in doc:
            raise ParseError(f"{where}: missing field '{key}'")
    party = doc["party"]
    if not isinstance(party, int) or isinstance(party, bool):
        raise ParseError(f"{where}.party: expected an integer")
    raw_kraus = doc["kraus"]
    if not isinstance(raw_kraus, list) or not raw_kraus:
        raise ParseError(f"{where}.kraus: expected a nonempty list of matrices")
    kraus = [parse_matrix(k, f"{where}.kraus[{i}]") for i, k in enumerate(raw_kraus)]
    raw_children = doc.get("children", [None] * len(kraus))
    if not isinstance(raw_children, list):
        raise ParseError(f"{where}.children: expected a list")
    children = tuple(
        protocol_from_dict(c, f"{where}.children[{i}]", depth + 1) for i, c in enumerate(raw_children)
    )
    try:
        return ProtocolTree(LocalMeasurement(party, tuple(kraus)), children)
    except ValidationError as exc:
        raise type(exc)(f"{where}: {exc}") from None


def protocol_to_dict(tree: ProtocolTree | None):
    if tree is None:
        return None
    return {
        "party": tree.node.party,
        "kraus": [matrix_to_json(k) for k in tree.node.kraus_ops],
        "children": [protocol_to_dict(c) for c in tree.children],
    }


def load_protocol(path) -> ProtocolTree | None:
    return protocol_from_dict(read_json(path))


def save_protocol(tree: ProtocolTree | None, path) -> None:
    Path(path).write_text(json.dumps(protocol_to_dict(tree), indent=1) + "\n")


def basis_measurement(party: int, d: int = 2) -> LocalMeasurement:
    """Projective measurement in the computational basis of one party."""
    ops = []
    for i in range(d):
        k = np.zeros((d, d), dtype=np.complex128)
        k[i, i] = 1.0
        ops.append(k)
    return LocalMeasurement(party, tuple(ops))


def sequential_basis_protocol(dims: Sequence[int], order: Sequence[int] | None = None) -> ProtocolTree | None:
    """Every party measures in its computational basis, one after another."""
    order = list(order) if order is not None else list(range(1, len(dims) + 1))
    tree = None
    for party in reversed(order):
        m = basis_measurement(party, dims[party - 1])
        tree = ProtocolTree(m, (tree,) * m.n_outcomes)
    return tree
