"""Adaptive composite Gauss-Legendre quadrature on parameter intervals.

Two special features beyond plain bisection:

* breakpoints split the interval into panels before any refinement, so
  piecewise-smooth integrands (indicator densities, pair superpositions)
  never straddle a kink;
* integrable endpoint singularities of known power type are handled by
  the substitution t = endpoint -/+ w e^{-tau}, which turns them into
  exponentially decaying smooth integrands on a half-line.  When the
  caller provides `near` evaluators the integrand is fed the distance to
  the endpoint directly, so the substitution is not limited by floating
  point resolution near the endpoint.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from curvecalc.errors import QuadratureWarning


@dataclass(frozen=True)
class QuadratureRule:
    order: int = 16
    tol: float = 1e-10
    max_depth: int = 30


DEFAULT_RULE = QuadratureRule()


@lru_cache(maxsize=64)
def gauss_xw(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _norm(v):
    if np.ndim(v) == 0:
        return abs(v)
    return float(np.max(np.abs(v)))


def _panel(f, a, b, x, w):
    ts = a + (b - a) * 0.5 * (x + 1.0)
    vals = np.asarray(f(ts))
    if vals.ndim == 1:
        return (b - a) * 0.5 * (w @ vals)
    return (b - a) * 0.5 * np.tensordot(w, vals, axes=(0, 0))


def _refine(f, a, b, whole, rule, scale, x, w, depth):
    m = 0.5 * (a + b)
    left = _panel(f, a, m, x, w)
    right = _panel(f, m, b, x, w)
    better = left + right
    err = _norm(whole - better)
    if err <= rule.tol * (scale + _norm(better)):
        return better
    if depth >= rule.max_depth:
        warnings.warn(
            f"refinement depth cap hit on [{a}, {b}]; residual {err:.2e}",
            QuadratureWarning,
            stacklevel=2,
        )
        return better
    return _refine(f, a, m, left, rule, scale, x, w, depth + 1) + _refine(
        f, m, b, right, rule, scale, x, w, depth + 1
    )


def adaptive(f, a, b, rule=DEFAULT_RULE, scale=1.0):
    if a == b:
        return 0.0
    x, w = gauss_xw(rule.order)
    whole = _panel(f, a, b, x, w)
    return _refine(f, a, b, whole, rule, scale, x, w, 0)


def _exp_end(f, near, a, b, at_start, expo, rule, scale):
    """Integrate over [a,b] with a power/log singularity at one endpoint."""
    w = b - a
    e = 0.0 if expo is None else float(expo)
    decay = max(1.0 - e, 0.05)
    tau_max = (math.log((scale + 1.0) / rule.tol) + 12.0) / decay
    if near is None:
        # without a distance-form evaluator we cannot resolve t below eps
        anchor = abs(a if at_start else b) + 1.0
        tau_max = min(tau_max, math.log(w / (np.finfo(float).eps * anchor)) - 1.0)
    x, gw = gauss_xw(rule.order)

    def g(taus):
        delta = w * np.exp(-taus)
        if near is not None:
            vals = np.asarray(near(delta))
        else:
            ts = a + delta if at_start else b - delta
            vals = np.asarray(f(ts))
        if vals.ndim == 1:
            return vals * delta
        return vals * delta[:, None]

    total = 0.0
    tau = 0.0
    quiet = 0
    step = 2.0
    while tau < tau_max and quiet < 2:
        hi = min(tau + step, tau_max)
        part = _refine(g, tau, hi, _panel(g, tau, hi, x, gw), rule, scale, x, gw, 0)
        total = total + part
        if _norm(part) <= 1e-3 * rule.tol * (scale + _norm(total)):
            quiet += 1
        else:
            quiet = 0
        tau = hi
    return total


def integrate(
    f,
    a,
    b,
    rule=DEFAULT_RULE,
    breakpoints=(),
    sing=(None, None),
    near_start=None,
    near_end=None,
    scale=1.0,
):
    """Integrate f over [a,b] (a<b) splitting at breakpoints.

    sing = (ea, eb) gives the real part of the blow-up exponent at either
    endpoint (None when regular); near_start/near_end evaluate the full
    integrand at a given positive distance from the endpoint.
    """
    if b <= a:
        return 0.0
    pts = sorted({float(t) for t in breakpoints if a < t < b})
    start_sing = sing[0] is not None or near_start is not None
    end_sing = sing[1] is not None or near_end is not None
    if not pts and start_sing and end_sing:
        pts = [0.5 * (a + b)]
    edges = [a] + pts + [b]
    total = 0.0
    for i, (pa, pb) in enumerate(zip(edges[:-1], edges[1:])):
        first = i == 0
        last = i == len(edges) - 2
        if first and (sing[0] is not None or near_start is not None):
            total = total + _exp_end(f, near_start, pa, pb, True, sing[0], rule, scale)
        elif last and (sing[1] is not None or near_end is not None):
            total = total + _exp_end(f, near_end, pa, pb, False, sing[1], rule, scale)
        else:
            total = total + adaptive(f, pa, pb, rule, scale)
    return total


def panel_nodes(a, b, breakpoints=(), order=16):
    """Plain per-panel Gauss nodes and weights on [a,b] (no refinement)."""
    x, w = gauss_xw(order)
    pts = sorted({float(t) for t in breakpoints if a < t < b})
    edges = [a] + pts + [b]
    ts = []
    ws = []
    for pa, pb in zip(edges[:-1], edges[1:]):
        ts.append(pa + (pb - pa) * 0.5 * (x + 1.0))
        ws.append((pb - pa) * 0.5 * w)
    return np.concatenate(ts), np.concatenate(ws)
