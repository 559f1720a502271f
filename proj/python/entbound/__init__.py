"""Certified bounds on bipartite entanglement measures.

Thin Python layer over the C++ core: dense state algebra, seeded
sampling, measure estimators with explicit bound semantics, monogamy
audits, antisymmetric chains, and batch experiments. Structured results
cross the boundary as JSON and are returned here as plain dicts.
"""

import json as _json

from ._core import (
    PureState,
    State,
    antisymmetric_state,
    concurrence_two_qubit,
    dimension_cap,
    ef_two_qubit,
    entropy_of_entanglement,
    evaluate_f,
    haar_pure,
    induced_bipartite,
    induced_state,
    partial_trace,
    purify,
    random_subspace,
    random_tripartite_induced,
    schmidt_spectrum,
    set_dimension_cap,
    state_from_json,
    tensor,
    trace_distance,
    verify_marginal_property,
    von_neumann_entropy,
)
from ._core import (
    audit_json as _audit_json,
)
from ._core import (
    chain_json as _chain_json,
)
from ._core import (
    estimate_measure_json as _estimate_measure_json,
)
from ._core import (
    max_product_overlap_json as _max_product_overlap_json,
)
from ._core import (
    run_experiment_json as _run_experiment_json,
)
from ._core import (
    state_to_json as _state_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "PureState",
    "State",
    "antisymmetric_state",
    "audit",
    "chain",
    "concurrence_two_qubit",
    "dimension_cap",
    "ef_two_qubit",
    "entropy_of_entanglement",
    "estimate_measure",
    "evaluate_f",
    "haar_pure",
    "induced_bipartite",
    "induced_state",
    "max_product_overlap",
    "partial_trace",
    "purify",
    "random_subspace",
    "random_tripartite_induced",
    "run_experiment",
    "schmidt_spectrum",
    "set_dimension_cap",
    "state_from_json",
    "state_to_dict",
    "tensor",
    "trace_distance",
    "verify_marginal_property",
    "von_neumann_entropy",
]


def estimate_measure(rho, cut="0|1", measure="er-bounds", restarts=32, seed=3):
    """Estimates a measure on a cut; returns the bound set as a dict."""
    return _json.loads(_estimate_measure_json(rho, cut, measure, restarts, seed))


def max_product_overlap(rho, cut="0|1", restarts=64, seed=5, brute_force_small=False):
    """Maximal product-state overlap of ``rho`` across ``cut``."""
    return _json.loads(
        _max_product_overlap_json(rho, cut, restarts, seed, brute_force_small)
    )


def audit(rho, cut="0|1|2", measure="tangle", f="sum", c=1.0, seed=3):
    """Audits a monogamy constraint on a tripartite state."""
    return _json.loads(_audit_json(rho, cut, measure, f, c, seed))


def chain(d, max_k=1, estimator="ee", seed=3):
    """Evaluates the antisymmetric chain for local dimension ``d``."""
    return _json.loads(_chain_json(d, max_k, estimator, seed))


def run_experiment(config):
    """Runs a batch experiment from a config dict; returns summary and records."""
    return _json.loads(_run_experiment_json(_json.dumps(config)))


def state_to_dict(rho):
    """Serializes a state to the JSON-compatible dict format."""
    return _json.loads(_state_to_json(rho))
