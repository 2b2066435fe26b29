"""Holevo-like upper bounds on locally accessible information for multipartite ensembles."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    Verdict,
    bipartite_bound,
    build_encoding_ensemble,
    complementarity_check,
    dense_coding_bound,
    locc_bound,
    pure_squashed_entanglement,
)
from .ensembles import (
    Ensemble,
    QuantumState,
    average_state,
    density_of,
    load_ensemble,
    make_mixed,
    make_pure,
    reduce_member,
    save_ensemble,
)
from .linalg import SystemLayout, hermitian_eigenvalues, kron, partial_trace
from .measures import holevo_chi, outcome_mutual_information, shannon_entropy, von_neumann_entropy
from .repro import build_e1, build_e2, build_e3, find_e2_crossings, sweep
from .sim import LocalMeasurement, ProtocolTree, apply_local_measurement, lemma1_check, run_protocol
