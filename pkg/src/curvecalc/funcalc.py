"""Evaluation of normal forms on multivalued linear operators.

f(A)u is the term-by-term evaluation of a normal form with the scalar
Cauchy kernels replaced by iterated resolvent applications; resolvent
powers are always iterated solves, an inverse matrix is never formed.
The fractional-power and logarithm operations use the explicit pencil
integrands; near the endpoint singularities the integrand is evaluated
as a function of the distance to the endpoint, with the affine pencil
rebuilt from that distance, so the exponential substitution is not
limited by float resolution.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from curvecalc._quad import DEFAULT_RULE, QuadratureRule, integrate
from curvecalc.curves import CurveSystem, LipschitzCurve
from curvecalc.errors import (
    DefectiveMatrix,
    GrowthViolation,
    MultiValued,
    NotInDomain,
    ResolventFailure,
)
from curvecalc.linrel import LinearRelation, as_relation, domain_check
from curvecalc.moebius import MoebiusMap
from curvecalc.normalform import (
    NormalForm,
    curve_log_form,
    curve_log_power_form,
    curve_power_form,
    multiply,
)


@dataclass
class CalculusContext:
    A: LinearRelation
    system: CurveSystem | None = None
    rule: QuadratureRule = DEFAULT_RULE
    domain_policy: bool = False
    domain_order: int = 2

    def __post_init__(self):
        self.A = as_relation(self.A)

    @property
    def dim(self):
        return self.A.dim


@dataclass
class GrowthReport:
    alpha: complex
    eps: float
    bound: float
    grid: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def bounded(self):
        return not self.failures and math.isfinite(self.bound)


def _apply_times(rel: LinearRelation, k: int, u, node):
    v = u
    try:
        for _ in range(k):
            v = rel.apply(v)
    except (NotInDomain, MultiValued) as exc:
        raise ResolventFailure(node, f"resolvent at {node} failed: {exc}") from exc
    return v


def _kernel_apply(hA: LinearRelation, zeta: complex, k: int, u):
    """(zeta - h(A))^{-k} u."""
    rel = LinearRelation(hA.X, zeta * hA.X - hA.Y)
    return _apply_times(rel, k, u, zeta)


def evaluate(ctx: CalculusContext, nf: NormalForm, u):
    u = np.asarray(u, dtype=complex).reshape(ctx.dim)
    hA = ctx.A.moebius_apply(nf.frame.arg_map)
    view = nf.view
    if ctx.domain_policy and ctx.system is not None:
        rep = domain_check(ctx.A, ctx.system, ctx.domain_order, u)
        if not rep["passed"]:
            raise ResolventFailure(rep["failures"][0][0], "sampled domain policy failed")
    out = nf.const * u
    for k, mu in nf.term_list():
        for a in mu.atoms:
            zeta = view.zeta_point(a.curve, a.t)
            out = out + a.weight * _kernel_apply(hA, zeta, k, u)
        for ci, d in mu.densities.items():
            curve = nf.system.curves[ci]
            L = curve.length

            def rows(ts, dens_vals, ci=ci, k=k):
                ts = np.asarray(ts, dtype=float)
                zs = view.zeta(ci, ts)
                dzs = view.dzeta(ci, ts)
                return np.stack(
                    [
                        dv * dz * _kernel_apply(hA, complex(z), k, u)
                        for dv, dz, z in zip(dens_vals, dzs, zs)
                    ]
                )

            def f(ts, d=d):
                return rows(ts, d(np.asarray(ts, dtype=float)))

            def make_near(end, d=d, ci=ci):
                def near(delta):
                    v = d.near(end, delta, L)
                    ts = np.asarray(delta, float) if end == 0 else L - np.asarray(delta, float)
                    ts = np.clip(ts, 0.0, L)
                    if v is None:
                        v = d(ts)
                    return rows(ts, v)

                return near

            breaks = set(curve.param[1:-1]) | set(d.breakpoints)
            out = out + integrate(
                f,
                0.0,
                L,
                rule=ctx.rule,
                breakpoints=breaks,
                sing=d.sing,
                near_start=make_near(0) if d.sing[0] is not None else None,
                near_end=make_near(1) if d.sing[1] is not None else None,
                scale=float(np.linalg.norm(u)) + 1.0,
            )
    return out


# ---------------------------------------------------------------------------
# eigendecomposition oracle


def oracle(ctx: CalculusContext, f, u, cond_max=1e8):
    """V f(Lambda) V^{-1} u for a diagonalizable matrix relation."""
    A = ctx.A
    if not A.is_operator() or A.r != A.dim:
        raise DefectiveMatrix("oracle needs an everywhere-defined matrix")
    M = A.Y @ np.linalg.inv(A.X)
    lam, V = np.linalg.eig(M)
    cond = np.linalg.cond(V)
    if cond > cond_max:
        raise DefectiveMatrix(f"eigenvector condition {cond:.2e} above {cond_max:.2e}")
    u = np.asarray(u, dtype=complex).reshape(ctx.dim)
    fv = np.array([f(complex(w)) for w in lam], dtype=complex)
    return V @ (fv * np.linalg.solve(V, u))


# ---------------------------------------------------------------------------
# reports


def multiply_check(ctx: CalculusContext, nf1, nf2, u, phi=None):
    v2 = evaluate(ctx, nf2, u)
    sequential = evaluate(ctx, nf1, v2)
    product = evaluate(ctx, multiply(nf1, nf2, phi), u)
    disc = float(np.linalg.norm(sequential - product))
    return {
        "sequential": sequential,
        "product": product,
        "discrepancy": disc,
        "relative": disc / (1.0 + float(np.linalg.norm(sequential))),
    }


def locality_check(ctx: CalculusContext, nf, u):
    val = evaluate(ctx, nf, u)
    nu = float(np.linalg.norm(np.asarray(u, dtype=complex)))
    return {
        "norm": float(np.linalg.norm(val)),
        "relative": float(np.linalg.norm(val)) / (nu if nu else 1.0),
        "value": val,
    }


# ---------------------------------------------------------------------------
# logarithms and fractional powers


def curve_log_op(ctx: CalculusContext, c: LipschitzCurve, u):
    return evaluate(ctx, curve_log_form(c), u)


def curve_log_power_op(ctx: CalculusContext, n: int, c: LipschitzCurve, u):
    """log(gamma, A)^(n+1) u via the bracket-density form."""
    return evaluate(ctx, curve_log_power_form(n, c), u)


def _pencil_integral(ctx, alpha, s, u):
    """int_{t=s}^1 (sin a pi/pi) ((t-s)/(1-t))^a (1-A)((1+t)+(1-t)A)^{-1} u dt."""
    alpha = complex(alpha)
    A = ctx.A
    u = np.asarray(u, dtype=complex).reshape(ctx.dim)
    coef = cmath.sin(alpha * math.pi) / math.pi
    if coef == 0 and alpha == 0:
        return np.zeros_like(u)
    width = 1.0 - s

    def pencil_apply(a_, b_, c_, d_, t_node):
        rel = A.moebius_apply(MoebiusMap(a_, b_, c_, d_))
        return _apply_times(rel, 1, u, t_node)

    def f(ts):
        ts = np.asarray(ts, dtype=float)
        vals = coef * np.exp(alpha * np.log((ts - s) / (1.0 - ts)))
        return np.stack(
            [
                v * pencil_apply(-1.0, 1.0, 1.0 - t, 1.0 + t, t)
                for v, t in zip(vals, ts)
            ]
        )

    def near_start(delta):
        # t = s + delta
        delta = np.atleast_1d(np.asarray(delta, dtype=float))
        vals = coef * np.exp(alpha * np.log(delta / (width - delta)))
        return np.stack(
            [
                v * pencil_apply(-1.0, 1.0, width - dl, 1.0 + s + dl, s + dl)
                for v, dl in zip(vals, delta)
            ]
        )

    def near_end(delta):
        # t = 1 - delta; the pencil (2-delta) + delta*A is exact in delta
        delta = np.atleast_1d(np.asarray(delta, dtype=float))
        vals = coef * np.exp(alpha * np.log((width - delta) / delta))
        return np.stack(
            [
                v * pencil_apply(-1.0, 1.0, dl, 2.0 - dl, 1.0 - dl)
                for v, dl in zip(vals, delta)
            ]
        )

    re = alpha.real
    try:
        return integrate(
            f,
            float(s),
            1.0,
            rule=ctx.rule,
            sing=(-re, re) if re != 0 or alpha.imag != 0 else (0.0, 0.0),
            near_start=near_start,
            near_end=near_end,
            scale=float(np.linalg.norm(u)) + 1.0,
        )
    except ResolventFailure:
        raise
    except (NotInDomain, MultiValued) as exc:
        raise GrowthViolation(str(exc)) from exc


def principal_power_op(ctx: CalculusContext, alpha, u):
    """A^alpha u by the pencil integral over (-1, 1), |Re alpha| < 1."""
    alpha = complex(alpha)
    if abs(alpha.real) >= 1:
        raise GrowthViolation(f"need |Re alpha| < 1, got {alpha}")
    u = np.asarray(u, dtype=complex).reshape(ctx.dim)
    if alpha == 0:
        return u.copy()
    return u - _pencil_integral(ctx, alpha, -1.0, u)


def u_s_continuation(ctx: CalculusContext, alpha, s, u):
    """u_s, the truncated-pencil continuation; equals the evaluation of
    ((1+s)/2 + ((1-s)/2) A)^alpha u for s in (-1, 1) and reduces to the
    full power integral at s = -1."""
    s = float(s)
    if not (-1.0 <= s <= 1.0):
        raise ValueError("s must lie in [-1, 1]")
    u = np.asarray(u, dtype=complex).reshape(ctx.dim)
    if s == 1.0:
        return u.copy()
    return u - _pencil_integral(ctx, alpha, s, u)


def power_domain(ctx: CalculusContext, alpha, eps, u):
    """Grid supremum of (1+t)^(Re alpha + 1 - eps) |(1-A)((1+t)+(1-t)A)^{-1} u|."""
    alpha = complex(alpha)
    if eps <= 0:
        raise ValueError("eps must be positive")
    u = np.asarray(u, dtype=complex).reshape(ctx.dim)
    ts = list(np.linspace(-0.9, 0.999, 40)) + [-1.0 + 2.0**-k for k in range(1, 45)]
    report = GrowthReport(alpha=alpha, eps=float(eps), bound=0.0)
    expo = alpha.real + 1.0 - eps
    for t in sorted(set(ts)):
        rel = ctx.A.moebius_apply(MoebiusMap(-1.0, 1.0, 1.0 - t, 1.0 + t))
        try:
            v = rel.apply(u)
        except (NotInDomain, MultiValued) as exc:
            report.failures.append((t, str(exc)))
            continue
        w = (1.0 + t) ** expo * float(np.linalg.norm(v))
        report.grid.append((t, w))
        report.bound = max(report.bound, w)
    return report


def local_group_check(ctx: CalculusContext, c: LipschitzCurve, alpha1, alpha2, u):
    """Compare the composed curve powers with the single power at the sum."""
    u = np.asarray(u, dtype=complex).reshape(ctx.dim)
    v = evaluate(ctx, curve_power_form(alpha2, c), u)
    lhs = evaluate(ctx, curve_power_form(alpha1, c), v)
    rhs = evaluate(ctx, curve_power_form(alpha1 + alpha2, c), u)
    disc = float(np.linalg.norm(lhs - rhs))
    return {
        "composed": lhs,
        "direct": rhs,
        "discrepancy": disc,
        "relative": disc / (1.0 + float(np.linalg.norm(rhs))),
    }
