"""Lie point symmetries of first-order ODEs dy/dx = h(x, y).

Typical use::

    from lieode import parse_ode, solve_pipeline
    report = solve_pipeline(parse_ode("dy/dx = y + exp(x)/y"))
"""

from .canonical import (
    CanonicalPair,
    PipelineOptions,
    Report,
    SolutionForm,
    back_substitute,
    canonical_coords,
    canonical_ode,
    solve_pipeline,
)
from .integrate import integrate_limited
from .parser import Ode, parse_expr, parse_ode
from .symmetry import AnsatzSpec, TangentField, solve_symmetries

__version__ = "0.1.0"

__all__ = [
    "AnsatzSpec", "CanonicalPair", "Ode", "PipelineOptions", "Report", "SolutionForm",
    "TangentField", "back_substitute", "canonical_coords", "canonical_ode",
    "integrate_limited", "parse_expr", "parse_ode", "solve_pipeline", "solve_symmetries",
]
