"""Python front end for the e-positivity workbench.

Graphs cross the boundary as graph6 strings.
"""

import json
import os

from ._core import (
    ValidationError,
    canonical_graph6,
    chromatic_count,
    connected_graphs,
    count_claws,
    csf_e,
    csf_m,
    feature_names,
    featurize,
    gen,
    independence_number,
    is_claw_contractible,
    is_e_positive,
    label,
    order,
)
from . import _core


def features(graph6):
    """Invariant values keyed by feature name."""
    return dict(zip(feature_names(), _core.features(graph6)))


def default_config():
    return json.loads(_core.default_config_json())


def run_all(config):
    """Runs every stage; `config` is a full config dict. Returns the manifest."""
    return json.loads(_core.run_all_json(json.dumps(config)))


def verify(path, condition, out, witness_family="both", jobs=1):
    return json.loads(_core.verify_json(os.fspath(path), condition, witness_family, os.fspath(out), jobs))


__all__ = [
    "ValidationError",
    "canonical_graph6",
    "chromatic_count",
    "connected_graphs",
    "count_claws",
    "csf_e",
    "csf_m",
    "default_config",
    "feature_names",
    "features",
    "featurize",
    "gen",
    "independence_number",
    "is_claw_contractible",
    "is_e_positive",
    "label",
    "order",
    "run_all",
    "verify",
]
