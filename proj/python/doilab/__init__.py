"""Python bindings for the doilab C++ core."""

import json as _json

from ._core import (
    __version__,
    cli,
    commutator_ratio,
    eval_K,
    eval_R,
    eval_m1j,
    eval_mj,
    eval_mj_quadrature,
    extremal_chain,
    joint_diagonalize,
    lipschitz_ratio,
    rearrangement_norms,
    schatten_norm,
    singular_values,
    transference_instance,
)
from ._core import constant_sweep as _constant_sweep


def constant_sweep(p_grid, dims, seeds, ensembles=("commuting", "pair", "extremal"), n=2, function="",
                   extremal_iterations=40):
    """Run a best-constant sweep and return its records as dictionaries."""
    records = _constant_sweep(list(p_grid), list(dims), list(seeds), list(ensembles), n, function,
                              extremal_iterations)
    return [_json.loads(r) for r in records]


__all__ = [
    "__version__",
    "cli",
    "commutator_ratio",
    "constant_sweep",
    "eval_K",
    "eval_R",
    "eval_m1j",
    "eval_mj",
    "eval_mj_quadrature",
    "extremal_chain",
    "joint_diagonalize",
    "lipschitz_ratio",
    "rearrangement_norms",
    "schatten_norm",
    "singular_values",
    "transference_instance",
]
