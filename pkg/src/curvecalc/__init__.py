"""Functional calculus for multivalued linear operators via Cauchy-type
integrals on Lipschitz curve systems."""

from curvecalc.backend import backend_name
from curvecalc.cauchy import (
    atom_limit,
    boundary_values,
    curve_log,
    curve_log_pv,
    eval_cauchy,
    jump_density,
    winding_number,
)
from curvecalc.curves import CurveSystem, LipschitzCurve, make_curve
from curvecalc.funcalc import (
    CalculusContext,
    evaluate,
    oracle,
    principal_power_op,
    u_s_continuation,
)
from curvecalc.linrel import LinearRelation, iterated_resolvent, resolvent_apply
from curvecalc.measures import (
    Atom,
    ChoiceFunction,
    CurveMeasure,
    additive_reduce,
    multiplicative_reduce,
    omega_measure,
    pushforward_moebius,
    xi_measure,
)
from curvecalc.moebius import MoebiusMap
from curvecalc.normalform import (
    Frame,
    NormalForm,
    build_named,
    curve_log_form,
    curve_power_form,
    multiply,
    principal_log_form,
    principal_power_form,
    to_simple,
    transport,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "CalculusContext",
    "ChoiceFunction",
    "CurveMeasure",
    "CurveSystem",
    "Frame",
    "LinearRelation",
    "LipschitzCurve",
    "MoebiusMap",
    "NormalForm",
    "additive_reduce",
    "atom_limit",
    "backend_name",
    "boundary_values",
    "build_named",
    "curve_log",
    "curve_log_form",
    "curve_log_pv",
    "curve_power_form",
    "eval_cauchy",
    "evaluate",
    "iterated_resolvent",
    "jump_density",
    "make_curve",
    "multiplicative_reduce",
    "multiply",
    "omega_measure",
    "oracle",
    "principal_log_form",
    "principal_power_form",
    "principal_power_op",
    "pushforward_moebius",
    "resolvent_apply",
    "to_simple",
    "transport",
    "u_s_continuation",
    "winding_number",
    "xi_measure",
]
