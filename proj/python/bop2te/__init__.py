"""Bayesian phase 2 design monitoring efficacy and toxicity jointly."""

import json

from . import _core
from ._core import ConflictError, NotFoundError, pava, pi_et_from_phi, posterior_tail

__all__ = [
    "ConflictError",
    "NotFoundError",
    "decide",
    "design",
    "oc",
    "pava",
    "pi_et_from_phi",
    "posterior_tail",
    "simulate_multidose",
]


def design(request):
    """Optimize a design. `request` is a spec dict or {"spec": ..., "global": ...}."""
    return json.loads(_core.design(json.dumps(request)))


def oc(spec, boundaries, phi_grid=None, mc=0, seed=None, truths=None):
    req = {"mc": mc}
    if phi_grid is not None:
        req["phi_grid"] = list(phi_grid)
    if seed is not None:
        req["seed"] = seed
    if truths is not None:
        req["truths"] = truths
    return json.loads(_core.oc(json.dumps(spec), json.dumps(boundaries), json.dumps(req)))


def decide(spec, boundaries, n, responses, toxicities):
    return json.loads(_core.decide(json.dumps(spec), json.dumps(boundaries), n, responses, toxicities))


def simulate_multidose(request):
    return json.loads(_core.simulate_multidose(json.dumps(request)))
