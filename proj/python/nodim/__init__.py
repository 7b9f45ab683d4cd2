"""Dimension-free Caratheodory, Tverberg, selection and weak epsilon-net tools."""

import json as _json

from ._core import (
    BoundMissError,
    CapacityError,
    CertificationError,
    Error,
    InputError,
    NormSpec,
    PreconditionError,
    TheoremViolationError,
    balanced_split,
    colored_caratheodory,
    colorful_tverberg,
    dist_to_hull,
    gamma_coefficient,
    maurey_sample,
    run_json,
    selection,
    uncolored_tverberg,
    weak_epsnet,
)


def run(subcommand, **flags):
    """Run a CLI subcommand in-process and return the parsed report."""
    return _json.loads(run_json(subcommand, flags))


__all__ = [
    "BoundMissError", "CapacityError", "CertificationError", "Error", "InputError",
    "NormSpec", "PreconditionError", "TheoremViolationError", "balanced_split",
    "colored_caratheodory", "colorful_tverberg", "dist_to_hull", "gamma_coefficient",
    "maurey_sample", "run", "run_json", "selection", "uncolored_tverberg", "weak_epsnet",
]
