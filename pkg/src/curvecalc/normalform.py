"""Normal forms of functions holomorphic off a curve system.

A normal form stores a carrier system, a frame of two Moebius maps and
measures mu_1..mu_n, and represents

    f(z) = const + sum_k int mu_k(t) / (phi(gamma(t)) - h(z))^k

where phi is the node-side map of the frame and h the argument-side map.
Keeping phi separate from the carrier lets the carrier stay a compact
polyline even when the natural support (a half line through infinity)
is unbounded: transport never has to push curves forward, it only
recomposes the maps and reweights the measures.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from curvecalc._quad import DEFAULT_RULE
from curvecalc.cauchy import (
    curve_log_pv_array,
    curve_log_pv_near,
    eval_cauchy,
    winding_number,
)
from curvecalc.curves import CurveSystem, LipschitzCurve, make_curve
from curvecalc.errors import (
    AlphaOutOfRange,
    BaseOffCarrier,
    PoleOnCarrier,
    SupportTouchesBoundary,
    ZInside,
)
from curvecalc.measures import (
    Atom,
    ChartView,
    ChoiceFunction,
    ConstDensity,
    CurveMeasure,
    FuncDensity,
    WeightedDensity,
    _locate_base,
    additive_reduce,
    as_system,
    multiplicative_reduce,
    total_mass,
)
from curvecalc.moebius import INF, MoebiusMap, is_inf


def _proportional(m1: MoebiusMap, m2: MoebiusMap, tol=1e-12):
    v1 = np.array([m1.a, m1.b, m1.c, m1.d])
    v2 = np.array([m2.a, m2.b, m2.c, m2.d])
    # all 2x2 minors of the stacked 2x4 matrix vanish iff proportional
    for i in range(4):
        for j in range(i + 1, 4):
            if abs(v1[i] * v2[j] - v1[j] * v2[i]) > tol * np.abs(v1).max() * np.abs(v2).max():
                return False
    return True


@dataclass(frozen=True)
class Frame:
    node_map: MoebiusMap
    arg_map: MoebiusMap

    @classmethod
    def identity(cls):
        return cls(MoebiusMap.identity(), MoebiusMap.identity())

    def same_as(self, other, tol=1e-12):
        return _proportional(self.node_map, other.node_map, tol) and _proportional(
            self.arg_map, other.arg_map, tol
        )


class NormalForm:
    def __init__(self, carrier, frame=None, const=0j, terms=(), degree=None):
        self.system = as_system(carrier)
        self.frame = frame or Frame.identity()
        self.const = complex(const)
        self.terms: dict[int, CurveMeasure] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for k, mu in items:
            if mu is None or mu.is_zero():
                continue
            k = int(k)
            self.terms[k] = self.terms[k] + mu if k in self.terms else mu
        witnessed = max(self.terms, default=0)
        self.degree = witnessed if degree is None else max(int(degree), witnessed)

    @property
    def view(self):
        return ChartView(self.system, self.frame.node_map)

    def term_list(self):
        return sorted(self.terms.items())

    def __call__(self, z, rule=DEFAULT_RULE):
        q = self.frame.arg_map(complex(z))
        if not self.terms:
            return self.const
        return eval_cauchy(self.term_list(), q, view=self.view, rule=rule, const=self.const)

    def scaled(self, c):
        return NormalForm(
            self.system,
            self.frame,
            c * self.const,
            {k: mu.scaled(c) for k, mu in self.terms.items()},
            degree=self.degree,
        )

    def plus(self, other: "NormalForm"):
        if other.system is not self.system or not self.frame.same_as(other.frame):
            raise ValueError("summands must share carrier and frame")
        terms = dict(self.terms)
        for k, mu in other.terms.items():
            terms[k] = terms[k] + mu if k in terms else mu
        return NormalForm(
            self.system,
            self.frame,
            self.const + other.const,
            terms,
            degree=max(self.degree, other.degree),
        )


def constant_form(carrier, value, frame=None):
    return NormalForm(carrier, frame=frame, const=value)


# ---------------------------------------------------------------------------
# simple normal forms


@dataclass
class SimpleNormalForm:
    system: CurveSystem
    frame: Frame
    const: complex
    bases: dict  # component -> (curve, t)
    coefficients: dict  # (component, level) -> complex
    top_level: int
    top_measure: CurveMeasure

    def as_normal_form(self):
        terms = {}
        for (comp, k), c in self.coefficients.items():
            if c == 0:
                continue
            ci, t = self.bases[comp]
            terms.setdefault(k, []).append(Atom(ci, t, c))
        out = {k: CurveMeasure(self.system, atoms=v) for k, v in terms.items()}
        if self.top_measure is not None and not self.top_measure.is_zero():
            if self.top_level in out:
                out[self.top_level] = out[self.top_level] + self.top_measure
            else:
                out[self.top_level] = self.top_measure
        return NormalForm(self.system, self.frame, self.const, out)

    def __call__(self, z, rule=DEFAULT_RULE):
        return self.as_normal_form()(z, rule=rule)


def to_simple(nf: NormalForm, bases, rule=DEFAULT_RULE) -> SimpleNormalForm:
    """Concentrate all poles at one base point per component, pushing the
    measures up to one level above the recorded degree."""
    system = nf.system
    view = nf.view
    base_by_comp = {}
    for b in bases:
        ci, t = _locate_base(system, b)
        base_by_comp[system.components[ci]] = (ci, t)
    present = set()
    for mu in nf.terms.values():
        present |= mu.components_present()
    if not present <= set(base_by_comp):
        raise BaseOffCarrier("need one base point per component carrying mass")

    n = max(nf.degree, max(nf.terms, default=0))
    work = dict(nf.terms)
    coeffs = {}
    for k in range(1, n + 1):
        mu = work.pop(k, None)
        if mu is None or mu.is_zero():
            continue
        for comp in sorted(mu.components_present()):
            sub = mu.restrict_component(comp)
            c_k, theta = additive_reduce(sub, k, base_by_comp[comp], view=view, rule=rule)
            coeffs[(comp, k)] = coeffs.get((comp, k), 0j) + c_k
            lifted = theta.scaled(k)
            work[k + 1] = work[k + 1] + lifted if k + 1 in work else lifted
    top = work.pop(n + 1, None)
    if work:
        raise AssertionError("levels above degree+1 left over")
    return SimpleNormalForm(
        system=system,
        frame=nf.frame,
        const=nf.const,
        bases=base_by_comp,
        coefficients=coeffs,
        top_level=n + 1,
        top_measure=top if top is not None else CurveMeasure(system),
    )


# ---------------------------------------------------------------------------
# transport and products


def _reweight(mu: CurveMeasure, view: ChartView, fn):
    atoms = [Atom(a.curve, a.t, a.weight * fn(view.zeta_point(a.curve, a.t))) for a in mu.atoms]
    dens = {}
    for ci, d in mu.densities.items():
        def weight(ts, ci=ci):
            return fn(view.zeta(ci, np.asarray(ts, dtype=float)))

        dens[ci] = WeightedDensity(d, weight)
    return CurveMeasure(mu.system, atoms=atoms, densities=dens)


def transport(nf: NormalForm, h2: MoebiusMap, rule=DEFAULT_RULE) -> NormalForm:
    """Change the argument-side chart to h2, keeping the same function.

    Uses the partial-fraction expansion of 1/(w-z)^n under a Moebius
    change of variable; the j=0 binomial term integrates out into the
    constant."""
    H = h2.compose(nf.frame.arg_map.inverse())
    new_node = H.compose(nf.frame.node_map)
    new_frame = Frame(new_node, h2)
    a, b, c, d = H.a, H.b, H.c, H.d
    det = H.det
    view_old = nf.view
    view_new = ChartView(nf.system, new_node)
    if c != 0:
        p = nf.frame.node_map.inverse()(H.pole)
        if not is_inf(p):
            _ci, _t, dist = nf.system.locate(p)
            if dist <= 1e-9 * nf.system.scale:
                raise PoleOnCarrier("chart change sends a carrier point to infinity")

    const = nf.const
    new_terms: dict[int, CurveMeasure] = {}
    for n, mu in nf.terms.items():
        for j in range(0, n + 1):
            cf = math.comb(n, j) * c ** (n - j) * det**j
            if cf == 0:
                continue
            if j == 0:
                contrib = _reweight(mu, view_old, lambda w, cf=cf, n=n: cf / (c * w + d) ** n)
                const += total_mass(contrib, view_old, rule)
                continue
            # atoms pick up the bare coefficient ...
            atoms = [
                Atom(
                    at.curve,
                    at.t,
                    at.weight * cf / (c * view_old.zeta_point(at.curve, at.t) + d) ** (n + j),
                )
                for at in mu.atoms
            ]
            # ... densities additionally trade d(zeta_old) for d(zeta_new)
            dens = {}
            for ci, dd in mu.densities.items():
                def weight(ts, ci=ci, cf=cf, n=n, j=j):
                    ts = np.asarray(ts, dtype=float)
                    w = view_old.zeta(ci, ts)
                    jac = view_old.dzeta(ci, ts) / view_new.dzeta(ci, ts)
                    return cf / (c * w + d) ** (n + j) * jac

                dens[ci] = WeightedDensity(dd, weight)
            piece = CurveMeasure(nf.system, atoms=atoms, densities=dens)
            new_terms[j] = new_terms[j] + piece if j in new_terms else piece
    return NormalForm(nf.system, new_frame, const, new_terms, degree=nf.degree)


def multiply(nf1: NormalForm, nf2: NormalForm, phi: ChoiceFunction | None = None,
             rule=DEFAULT_RULE, order=12) -> NormalForm:
    if nf1.system is not nf2.system or not nf1.frame.same_as(nf2.frame):
        raise ValueError("factors must share carrier and frame; transport first")
    system = nf1.system
    view = nf1.view
    phi = phi or ChoiceFunction.for_system(system)
    terms: dict[int, CurveMeasure] = {}

    def accumulate(k, mu):
        if mu is None or mu.is_zero():
            return
        terms[k] = terms[k] + mu if k in terms else mu

    for k, mu in nf1.terms.items():
        accumulate(k, mu.scaled(nf2.const))
    for k, mu in nf2.terms.items():
        accumulate(k, mu.scaled(nf1.const))
    for m, mu in nf1.terms.items():
        for n, nu in nf2.terms.items():
            for k, theta in multiplicative_reduce(
                mu, m - 1, nu, n - 1, phi, view, rule=rule, order=order
            ):
                accumulate(k, theta)
    return NormalForm(
        system,
        nf1.frame,
        nf1.const * nf2.const,
        terms,
        degree=nf1.degree + nf2.degree,
    )


# ---------------------------------------------------------------------------
# named forms


def _sin_coef(alpha):
    return cmath.sin(alpha * math.pi) / math.pi


def _check_alpha(alpha):
    if abs(complex(alpha).real) >= 1:
        raise AlphaOutOfRange(f"need |Re alpha| < 1, got {alpha}")


def _power_sing(alpha):
    re = complex(alpha).real
    return (re if re > 0 else None, -re if re < 0 else None)


def principal_power_form(alpha) -> NormalForm:
    """z^alpha cut along the closed negative half line.

    Obtained from the segment chart h(z) = 1/(1-z): the standard integral
    over t in (-1,1) maps to s in (0,1) with kernel 1/(s-h(z))."""
    _check_alpha(alpha)
    alpha = complex(alpha)
    seg = make_curve([0.0, 1.0])
    system = CurveSystem.of(seg)
    frame = Frame(MoebiusMap.identity(), MoebiusMap(0, 1, -1, 1))
    coef = _sin_coef(alpha)

    def fn(ts):
        return coef * np.exp(alpha * np.log((1.0 - ts) / ts))

    dens = FuncDensity(
        fn,
        sing=_power_sing(alpha),
        near_fns=(
            lambda delta: coef * np.exp(alpha * np.log((1.0 - delta) / delta)),
            lambda delta: coef * np.exp(alpha * np.log(delta / (1.0 - delta))),
        ),
    )
    mu = CurveMeasure(system, densities={0: dens})
    return NormalForm(system, frame, const=1.0, terms=[(1, mu)], degree=1)


def principal_log_form() -> NormalForm:
    """log z cut along the closed negative half line."""
    seg = make_curve([0.0, 1.0])
    system = CurveSystem.of(seg)
    frame = Frame(MoebiusMap.identity(), MoebiusMap(0, 1, -1, 1))
    mu = CurveMeasure(system, densities={0: ConstDensity(1.0)})
    return NormalForm(system, frame, const=0.0, terms=[(1, mu)], degree=1)


def curve_log_form(c: LipschitzCurve) -> NormalForm:
    """The curve logarithm itself: density 1 against d(gamma)."""
    system = as_system(c)
    mu = CurveMeasure(system, densities={0: ConstDensity(1.0)})
    return NormalForm(system, Frame.identity(), const=0.0, terms=[(1, mu)], degree=1)


def curve_power_form(alpha, c: LipschitzCurve) -> NormalForm:
    """exp(alpha log(gamma, z)), the curve power with |Re alpha| < 1."""
    _check_alpha(alpha)
    alpha = complex(alpha)
    system = as_system(c)
    curve = system.curves[0]
    coef = _sin_coef(alpha)

    def fn(ts):
        return coef * np.exp(alpha * curve_log_pv_array(curve, ts))

    def near(end):
        def go(delta):
            return coef * np.exp(alpha * curve_log_pv_near(curve, end, delta))

        return go

    dens = FuncDensity(fn, sing=_power_sing(alpha), near_fns=(near(0), near(1)))
    mu = CurveMeasure(system, densities={0: dens})
    return NormalForm(system, Frame.identity(), const=1.0, terms=[(1, mu)], degree=1)


def curve_log_power_form(n: int, c: LipschitzCurve) -> NormalForm:
    """log(gamma, z)^(n+1) as a level-1 form with the bracket density."""
    n = int(n)
    system = as_system(c)
    curve = system.curves[0]

    def bracket(L):
        return ((L + 1j * math.pi) ** (n + 1) - (L - 1j * math.pi) ** (n + 1)) / (2j * math.pi)

    def fn(ts):
        return bracket(curve_log_pv_array(curve, ts))

    def near(end):
        def go(delta):
            return bracket(curve_log_pv_near(curve, end, delta))

        return go

    # logarithmic endpoint blow-up; a small positive exponent routes the
    # quadrature through the exponential substitution
    dens = FuncDensity(fn, sing=(0.05, 0.05), near_fns=(near(0), near(1)))
    mu = CurveMeasure(system, densities={0: dens})
    return NormalForm(system, Frame.identity(), const=0.0, terms=[(1, mu)], degree=1)


def rational_form(poles) -> NormalForm:
    """Sum of c/(w-z)^k terms; poles is a list of (w, c, k)."""
    pts = [complex(w) for w, _c, _k in poles]
    gap = min(
        (abs(p - q) for i, p in enumerate(pts) for q in pts[:i]),
        default=2.0,
    )
    half = min(0.5, 0.25 * gap)
    curves = [make_curve([w - half, w + half]) for w in pts]
    system = CurveSystem.of(*curves)
    terms: dict[int, list] = {}
    for i, (_w, cw, k) in enumerate(poles):
        terms.setdefault(int(k), []).append(Atom(i, half, complex(cw)))
    return NormalForm(
        system,
        Frame.identity(),
        terms={k: CurveMeasure(system, atoms=v) for k, v in terms.items()},
    )


_NAMED = {
    "principal_power": lambda alpha=0.5, **kw: principal_power_form(alpha),
    "principal_log": lambda **kw: principal_log_form(),
    "curve_log": lambda curve=None, **kw: curve_log_form(curve),
    "curve_power": lambda alpha=0.5, curve=None, **kw: curve_power_form(alpha, curve),
    "curve_log_power": lambda n=1, curve=None, **kw: curve_log_power_form(n, curve),
    "rational": lambda poles=(), **kw: rational_form(poles),
}


def build_named(name, **kwargs) -> NormalForm:
    try:
        builder = _NAMED[name]
    except KeyError:
        raise ValueError(f"unknown named form {name!r}; choose from {sorted(_NAMED)}")
    return builder(**kwargs)


# ---------------------------------------------------------------------------
# cycles and interior-measure replacement


def vanishing_cycle_check(c: LipschitzCurve, poly_coeffs, n: int, z: complex,
                          rule=DEFAULT_RULE) -> complex:
    """int P(gamma(t)) d gamma(t)/(gamma(t)-z)^(n+1); zero for deg P <= n-1
    and z outside a closed curve."""
    system = as_system(c)
    curve = system.curves[0]
    if not curve.closed:
        raise ValueError("cycle check needs a closed curve")
    if winding_number(curve, z) != 0:
        raise ZInside(f"{z} lies inside the closed curve")
    coeffs = tuple(complex(a) for a in poly_coeffs)

    def fn(ts):
        g = curve.point_at(np.asarray(ts, dtype=float))
        out = np.zeros(np.shape(ts), dtype=complex)
        for a in reversed(coeffs):
            out = out * g + a
        return out

    mu = CurveMeasure(system, densities={0: FuncDensity(fn)})
    return eval_cauchy([(n + 1, mu)], z, rule=rule)


def _branch_log_at(curve: LipschitzCurve, w: complex, t0: float, ts):
    """Branch of log(gamma(t)-w) continuous on the closed curve except at
    the cut t0, for w strictly inside.

    Walking through every vertex keeps each increment's subtended angle
    below pi, so accumulating principal logs of successive ratios tracks
    the true continuation."""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    L = curve.length

    def circ(t):
        return (t - t0) % L

    events = sorted(
        set(float(p) for p in curve.param) | set(float(t) for t in ts) | {float(t0)},
        key=circ,
    )
    out = {}
    acc = cmath.log(curve.point_at(float(t0)) - w)
    prev = curve.point_at(float(t0))
    for t in events:
        zt = curve.point_at(t)
        acc += cmath.log((zt - w) / (prev - w)) if zt != prev else 0.0
        prev = zt
        out[t] = acc
    return np.array([out[float(t)] for t in ts])


def encircle_reduce(interior_atoms, boundary: LipschitzCurve, t0: float, n: int,
                    tol=1e-9) -> NormalForm:
    """Replace point masses inside a closed curve by a pole at gamma(t0)
    plus a boundary density with a cut-at-t0 logarithm kernel."""
    system = as_system(boundary)
    curve = system.curves[0]
    if not curve.closed:
        raise ValueError("boundary must be a closed curve")
    atoms = [(complex(w), complex(c)) for w, c in interior_atoms]
    scale = system.scale
    for w, _c in atoms:
        dist, _ = curve.distance_to(w)
        if dist <= tol * scale:
            raise SupportTouchesBoundary(f"mass at {w} touches the boundary")
        if winding_number(curve, w) == 0:
            raise SupportTouchesBoundary(f"mass at {w} lies outside the boundary")
    total = sum(c for _w, c in atoms)
    pole = CurveMeasure(system, atoms=[Atom(0, float(t0), total)])
    if not atoms:
        return NormalForm(system, terms=[(n, pole)]) if total != 0 else NormalForm(system)

    factor = n / (2j * math.pi)

    def fn(ts):
        out = np.zeros(np.shape(ts), dtype=complex)
        for w, c in atoms:
            out = out + c * _branch_log_at(curve, w, float(t0), ts)
        return factor * out

    dens = FuncDensity(fn, breakpoints=(float(t0),))
    return NormalForm(
        system,
        terms=[(n, pole), (n + 1, CurveMeasure(system, densities={0: dens}))],
        degree=n,
    )
