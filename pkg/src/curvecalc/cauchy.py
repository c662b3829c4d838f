"""Cauchy-type integrals on curve systems.

The curve logarithm is computed exactly by telescoping per-segment
principal logs; each segment ratio (v_{j+1}-z)/(v_j-z) stays off the
negative real axis for z off the segment, so the sum is the branch of
log((gamma(b)-z)/(gamma(a)-z)) vanishing at infinity without any branch
tracking.  Principal values at on-curve points drop the +-pi i ambiguity
and come out in closed form as well.

Boundary values, jump recovery and atom limits are obtained by
evaluating along geometric approach sequences and extrapolating
(Aitken); the estimated extrapolation error is reported, not assumed.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from curvecalc import backend
from curvecalc._quad import DEFAULT_RULE, QuadratureRule
from curvecalc.curves import LipschitzCurve, _seg_dist
from curvecalc.errors import (
    EndpointParameter,
    NonHoelderDensity,
    OnCurve,
    SectorViolation,
)
from curvecalc.measures import (
    CurveMeasure,
    TableDensity,
    identity_view,
    integrate_density,
)
from curvecalc.moebius import is_inf

__all__ = [
    "QuadratureRule",
    "curve_log",
    "curve_log_pv",
    "curve_log_pv_near",
    "eval_cauchy",
    "eval",
    "boundary_values",
    "jump_density",
    "atom_limit",
    "winding_number",
]

ON_CURVE_DIST = 1e-9


def curve_log(c: LipschitzCurve, z: complex) -> complex:
    dist, _ = c.distance_to(z)
    scale = max(1.0, float(np.max(np.abs(c.vertices))), abs(z))
    if dist <= ON_CURVE_DIST * scale:
        raise OnCurve(f"{z} lies on the curve; use curve_log_pv")
    return backend.polyline_log_sum(np.ascontiguousarray(c.vertices), complex(z))


def winding_number(c: LipschitzCurve, z: complex) -> int:
    """Winding of a closed curve around z."""
    return int(round((curve_log(c, z) / (2j * math.pi)).real))


def _pv_terms(c: LipschitzCurve, s: float):
    """Segments to skip and the flat-log endpoints around parameter s."""
    L = c.length
    if not (0.0 < s < L):
        raise EndpointParameter(f"principal value needs an interior parameter, got {s}")
    i = c.segment_index(s)
    if i > 0 and s == c.param[i]:
        # exactly at an interior vertex: both adjacent segments are radial
        return {i - 1, i}, c.param[i - 1], c.param[i + 1]
    return {i}, c.param[i], c.param[i + 1]


def curve_log_pv(c: LipschitzCurve, s: float) -> complex:
    """Principal value of the curve logarithm at z = gamma(s)."""
    skip, t_left, t_right = _pv_terms(c, float(s))
    z = c.point_at(float(s))
    out = complex(math.log((t_right - s) / (s - t_left)))
    v = c.vertices
    for j in range(c.nseg):
        if j not in skip:
            out += np.log((v[j + 1] - z) / (v[j] - z))
    return out


def curve_log_pv_array(c: LipschitzCurve, ts):
    return np.array([curve_log_pv(c, float(t)) for t in np.atleast_1d(ts)])


def curve_log_pv_near(c: LipschitzCurve, end: int, delta):
    """Principal value at distance delta from the curve start (end=0) or
    end (end=1), exact in delta below float resolution of the parameter."""
    delta = np.atleast_1d(np.asarray(delta, dtype=float))
    L = c.length
    v = c.vertices
    if end == 0:
        t_right = c.param[1]
        # z = v0 + delta * d0, kept symbolic so v_j - z stays exact in delta
        base, step = v[0], c.direction_at(0.0)
        flat = np.log((t_right - delta) / delta)
        skip = {0}
    else:
        t_left = c.param[-2]
        base, step = v[-1], -c.direction_at(L)
        flat = np.log(delta / (L - t_left - delta))
        skip = {c.nseg - 1}
    rest = np.zeros_like(delta, dtype=complex)
    for j in range(c.nseg):
        if j not in skip:
            rest += np.log(((v[j + 1] - base) - delta * step) / ((v[j] - base) - delta * step))
    return flat + rest


# ---------------------------------------------------------------------------
# evaluation


def _as_terms(terms):
    if isinstance(terms, CurveMeasure):
        return [(1, terms)]
    return list(terms)


def _system_of(terms):
    for _k, mu in terms:
        return mu.system
    raise ValueError("empty term list")


def _near_kernel_breaks(curve, zbase):
    """Foot-of-perpendicular parameters of segments passing near zbase."""
    out = []
    for i in range(curve.nseg):
        p, q = curve.vertices[i], curve.vertices[i + 1]
        seglen = curve.param[i + 1] - curve.param[i]
        dist, u = _seg_dist(p, q, zbase)
        if dist < 5.0 * seglen and 0.0 < u < 1.0:
            out.append(curve.param[i] + u * seglen)
    return out


def eval_cauchy(terms, z, view=None, rule=DEFAULT_RULE, const=0j):
    """Sum over levels k of  sum_atoms c/(zeta-z)^k + int d(t) dzeta/(zeta-z)^k."""
    terms = _as_terms(terms)
    system = _system_of(terms)
    view = view or identity_view(system)
    q = complex(z)
    total = complex(const)
    if is_inf(q):
        return total
    zbase = view.preimage(q)
    scale = max(system.scale, abs(q))
    if not is_inf(zbase):
        _ci, _t, dist = system.locate(zbase)
        if dist <= ON_CURVE_DIST * scale:
            raise OnCurve(f"evaluation point {z} lies on the carrier")
    for k, mu in terms:
        if mu.atoms:
            pos = np.array(
                [view.zeta_point(a.curve, a.t) for a in mu.atoms], dtype=complex
            )
            wts = np.array([a.weight for a in mu.atoms], dtype=complex)
            total += backend.cauchy_sum(pos, wts, q, int(k))
        for ci, d in mu.densities.items():
            breaks = (
                _near_kernel_breaks(system.curves[ci], zbase)
                if not is_inf(zbase)
                else ()
            )

            def kernel(zeta_vals, ts, k=k):
                return (zeta_vals - q) ** (-int(k))

            total += integrate_density(
                view, ci, d, weight_fn=kernel, rule=rule, extra_breaks=breaks
            )
    return total


eval = eval_cauchy


# ---------------------------------------------------------------------------
# limits by extrapolation


class Extrapolated(NamedTuple):
    value: complex
    error: float


def _aitken(seq):
    s = np.asarray(seq, dtype=complex)
    last_step = abs(s[-1] - s[-2]) if len(s) > 1 else math.inf
    while len(s) >= 3:
        d2 = s[2:] - 2 * s[1:-1] + s[:-2]
        safe = np.abs(d2) > 1e-300
        nxt = np.where(safe, s[2:] - (s[2:] - s[1:-1]) ** 2 / np.where(safe, d2, 1.0), s[2:])
        last_step = float(np.abs(nxt[-1] - s[-1]))
        s = nxt
    return Extrapolated(complex(s[-1]), last_step)


def _check_hoelder(terms, ci):
    for _k, mu in terms:
        d = mu.densities.get(ci)
        if isinstance(d, TableDensity) and not getattr(d, "hoelder", False):
            raise NonHoelderDensity(
                "table densities must be flagged hoelder=True for boundary limits"
            )


def boundary_values(terms, ci, s, side, rule=DEFAULT_RULE, eps0=None, levels=9):
    """One-sided limit of the evaluation at gamma(s) from the given side."""
    terms = _as_terms(terms)
    system = _system_of(terms)
    if isinstance(ci, LipschitzCurve):
        ci = system.curves.index(ci)
    _check_hoelder(terms, ci)
    curve = system.curves[ci]
    skip, t_left, t_right = _pv_terms(curve, float(s))
    d = curve.direction_at(float(s))
    xi = 1j * d if side in ("Left", "+", "left") else -1j * d
    base = curve.point_at(float(s))
    if eps0 is None:
        eps0 = 0.05 * min(t_right - s, s - t_left, 1.0)
    vals = []
    for k in range(levels):
        eps = eps0 * 0.5**k
        vals.append(eval_cauchy(terms, base + eps * xi, rule=rule))
    return _aitken(vals)


def jump_density(terms, ci, s, rule=DEFAULT_RULE, **kw):
    """(f+ - f-)/(2 pi i); recovers the first-level density at s."""
    plus = boundary_values(terms, ci, s, "Left", rule=rule, **kw)
    minus = boundary_values(terms, ci, s, "Right", rule=rule, **kw)
    return (plus.value - minus.value) / (2j * math.pi)


def atom_limit(terms, ci, s, xi, rule=DEFAULT_RULE, eta0=None, levels=10):
    """Point mass at parameter s, recovered from -eta f(gamma(s)+eta xi)."""
    terms = _as_terms(terms)
    system = _system_of(terms)
    if isinstance(ci, LipschitzCurve):
        ci = system.curves.index(ci)
    curve = system.curves[ci]
    xi = complex(xi) / abs(xi)
    for d in curve.directions_at_point(float(s)):
        gap = abs(np.angle(xi / d))
        if gap < 0.15:
            raise SectorViolation(
                f"approach direction within {gap:.3f} rad of a curve direction"
            )
    base = curve.point_at(float(s))
    if eta0 is None:
        eta0 = 0.1 * min(curve.length, 1.0)
    vals = []
    for k in range(levels):
        eta = eta0 * 0.5**k
        f = eval_cauchy(terms, base + eta * xi, rule=rule)
        vals.append(-eta * xi * f)
    return _aitken(vals)
