"""Finite Borel measures on curve systems and the superposition calculus.

A measure is a finite list of atoms plus, per curve, a density handle
interpreted against the complex line element d(zeta) of the curve viewed
through a chart (`ChartView`).  The default view is the identity, in
which case d(zeta) is the usual d(gamma) of the polyline.

The two reductions implemented here rewrite Cauchy-type integrals:

* additive: int mu/(z-q)^n  ->  pole at a base point + one level higher,
  with the new density a cumulative integral of mu;
* multiplicative: a product of two Cauchy integrals -> a sum of single
  integrals, with beta-type pair kernels inside one component and
  partial-fraction atoms across components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from curvecalc import backend
from curvecalc._quad import DEFAULT_RULE, integrate, panel_nodes
from curvecalc.curves import CurveSystem, LipschitzCurve
from curvecalc.errors import BaseOffCarrier, DisconnectedWithoutChoice, PoleOnCarrier
from curvecalc.moebius import MoebiusMap, is_inf


def as_system(carrier):
    if isinstance(carrier, LipschitzCurve):
        return CurveSystem.of(carrier)
    return carrier


# ---------------------------------------------------------------------------
# chart views


@dataclass(frozen=True)
class ChartView:
    """Curve system seen through a node-side Moebius map."""

    system: CurveSystem
    node_map: MoebiusMap = MoebiusMap.identity()

    @property
    def is_identity(self):
        return self.node_map.is_identity()

    def check_pole(self):
        p = self.node_map.pole
        if is_inf(p):
            return
        ci, t, dist = self.system.locate(p)
        if dist <= 1e-9 * self.system.scale:
            raise PoleOnCarrier(f"node map pole {p} lies on the carrier")

    def gamma(self, ci, ts):
        return self.system.curves[ci].point_at(ts)

    def zeta(self, ci, ts):
        g = self.system.curves[ci].point_at(ts)
        m = self.node_map
        return (m.a * g + m.b) / (m.c * g + m.d)

    def dzeta(self, ci, ts):
        c = self.system.curves[ci]
        g = c.point_at(ts)
        m = self.node_map
        den = m.c * g + m.d
        return (m.det / (den * den)) * c.direction_at(ts)

    def zeta_point(self, ci, t):
        out = self.zeta(ci, np.asarray([float(t)]))
        return complex(out[0])

    def preimage(self, q):
        """Pull an evaluation point back to base coordinates."""
        return self.node_map.inverse()(q)


def identity_view(carrier):
    return ChartView(system=as_system(carrier))


# ---------------------------------------------------------------------------
# densities


class Density:
    """Complex density d(t) on a curve, against d(zeta)."""

    breakpoints: tuple = ()
    sing: tuple = (None, None)

    def __call__(self, ts):  # pragma: no cover - abstract
        raise NotImplementedError

    def near(self, end, delta, L):
        """Values at distance `delta` from the start (end=0) or end (end=1).

        Returns None when the density has no better evaluation than
        calling it at t = delta or L - delta directly.
        """
        return None


class ConstDensity(Density):
    kind = "const"

    def __init__(self, value):
        self.value = complex(value)

    def __call__(self, ts):
        return np.full(np.shape(ts), self.value, dtype=complex)


class PolyDensity(Density):
    """Polynomial in the curve parameter, coefficients low-to-high."""

    kind = "poly"

    def __init__(self, coeffs):
        self.coeffs = tuple(complex(c) for c in coeffs)

    def __call__(self, ts):
        out = np.zeros(np.shape(ts), dtype=complex)
        for c in reversed(self.coeffs):
            out = out * np.asarray(ts) + c
        return out


class TableDensity(Density):
    """Piecewise-linear interpolation of sampled values."""

    kind = "table"

    def __init__(self, ts, values):
        self.ts = np.asarray(ts, dtype=float)
        self.values = np.asarray(values, dtype=complex)
        self.breakpoints = tuple(float(t) for t in self.ts)

    def __call__(self, ts):
        re = np.interp(ts, self.ts, self.values.real)
        im = np.interp(ts, self.ts, self.values.imag)
        return re + 1j * im


class IndicatorDensity(Density):
    """value on [lo, hi], zero elsewhere (endpoints included)."""

    def __init__(self, lo, hi, value=1.0):
        self.lo = float(lo)
        self.hi = float(hi)
        self.value = complex(value)
        self.breakpoints = (self.lo, self.hi)

    def __call__(self, ts):
        ts = np.asarray(ts)
        return np.where((ts >= self.lo) & (ts <= self.hi), self.value, 0.0).astype(complex)


class FuncDensity(Density):
    def __init__(self, fn, breakpoints=(), sing=(None, None), near_fns=(None, None)):
        self.fn = fn
        self.breakpoints = tuple(breakpoints)
        self.sing = sing
        self.near_fns = near_fns

    def __call__(self, ts):
        return np.asarray(self.fn(np.asarray(ts, dtype=float)), dtype=complex)

    def near(self, end, delta, L):
        f = self.near_fns[end]
        if f is None:
            return None
        return np.asarray(f(delta), dtype=complex)


class ScaledDensity(Density):
    def __init__(self, base, factor):
        self.base = base
        self.factor = complex(factor)
        self.breakpoints = base.breakpoints
        self.sing = base.sing

    def __call__(self, ts):
        return self.factor * self.base(ts)

    def near(self, end, delta, L):
        v = self.base.near(end, delta, L)
        return None if v is None else self.factor * v


class SumDensity(Density):
    def __init__(self, parts):
        flat = []
        for p in parts:
            if isinstance(p, SumDensity):
                flat.extend(p.parts)
            else:
                flat.append(p)
        self.parts = tuple(flat)
        self.breakpoints = tuple(sorted({b for p in flat for b in p.breakpoints}))
        s0 = [p.sing[0] for p in flat if p.sing[0] is not None]
        s1 = [p.sing[1] for p in flat if p.sing[1] is not None]
        self.sing = (max(s0) if s0 else None, max(s1) if s1 else None)

    def __call__(self, ts):
        out = np.zeros(np.shape(ts), dtype=complex)
        for p in self.parts:
            out = out + p(ts)
        return out

    def near(self, end, delta, L):
        out = np.zeros(np.shape(delta), dtype=complex)
        for p in self.parts:
            v = p.near(end, delta, L)
            if v is None:
                if p.sing[end] is not None:
                    return None
                ts = np.asarray(delta) if end == 0 else L - np.asarray(delta)
                v = p(ts)
            out = out + v
        return out


class WeightedDensity(Density):
    """base density multiplied by a smooth function of the parameter."""

    def __init__(self, base, weight_fn):
        self.base = base
        self.weight_fn = weight_fn
        self.breakpoints = base.breakpoints
        self.sing = base.sing

    def __call__(self, ts):
        return self.base(ts) * self.weight_fn(np.asarray(ts, dtype=float))

    def near(self, end, delta, L):
        v = self.base.near(end, delta, L)
        if v is None:
            return None
        ts = np.asarray(delta, dtype=float) if end == 0 else L - np.asarray(delta, dtype=float)
        return v * self.weight_fn(ts)


@lru_cache(maxsize=None)
def _binom_coef(n1, n2):
    return math.factorial(n1 + n2 + 1) / (math.factorial(n1) * math.factorial(n2))


class XiPairDensity(Density):
    """Superposition of oriented beta-type pair kernels on one curve.

    Entry p contributes, for t in [tlo, thi],
      sgn * w * C * (zeta(t)-z1)^n2 (z2-zeta(t))^n1 / (z2-z1)^(n1+n2+1)
    with C = (n1+n2+1)!/(n1! n2!).
    """

    def __init__(self, view, ci, tlo, thi, z1, z2, weights, sgn, n1, n2):
        self.view = view
        self.ci = ci
        self.tlo = np.asarray(tlo, dtype=float)
        self.thi = np.asarray(thi, dtype=float)
        self.z1 = np.asarray(z1, dtype=complex)
        self.z2 = np.asarray(z2, dtype=complex)
        self.weights = np.asarray(weights, dtype=complex)
        self.sgn = np.asarray(sgn, dtype=float)
        self.n1 = int(n1)
        self.n2 = int(n2)
        self.breakpoints = tuple(sorted(set(self.tlo) | set(self.thi)))

    def __call__(self, ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        zt = np.atleast_1d(self.view.zeta(self.ci, ts)).astype(complex)
        return backend.xi_pair_sum(
            ts,
            zt,
            self.z1,
            self.z2,
            self.weights,
            self.tlo,
            self.thi,
            self.sgn,
            self.n1,
            self.n2,
            _binom_coef(self.n1, self.n2),
        )


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True)
class Atom:
    curve: int
    t: float
    weight: complex


class CurveMeasure:
    def __init__(self, carrier, atoms=(), densities=None):
        self.system = as_system(carrier)
        self.atoms = tuple(
            a if isinstance(a, Atom) else Atom(int(a[0]), float(a[1]), complex(a[2]))
            for a in atoms
        )
        self.densities = dict(densities or {})

    def is_zero(self):
        return not self.atoms and not self.densities

    def scaled(self, factor):
        if factor == 1:
            return self
        return CurveMeasure(
            self.system,
            [Atom(a.curve, a.t, factor * a.weight) for a in self.atoms],
            {ci: ScaledDensity(d, factor) for ci, d in self.densities.items()},
        )

    def __add__(self, other):
        if other is None or (isinstance(other, CurveMeasure) and other.is_zero()):
            return self
        dens = dict(self.densities)
        for ci, d in other.densities.items():
            dens[ci] = SumDensity([dens[ci], d]) if ci in dens else d
        return CurveMeasure(self.system, self.atoms + other.atoms, dens)

    def restrict_component(self, comp):
        comps = self.system.components
        return CurveMeasure(
            self.system,
            [a for a in self.atoms if comps[a.curve] == comp],
            {ci: d for ci, d in self.densities.items() if comps[ci] == comp},
        )

    def components_present(self):
        comps = self.system.components
        out = {comps[a.curve] for a in self.atoms}
        out |= {comps[ci] for ci in self.densities}
        return out


def integrate_density(view, ci, dens, weight_fn=None, rule=DEFAULT_RULE, extra_breaks=(), scale=1.0):
    """Integral of dens(t) * weight(zeta(t), t) d zeta(t) over curve ci."""
    curve = view.system.curves[ci]
    L = curve.length

    def f(ts):
        vals = dens(ts) * view.dzeta(ci, ts)
        if weight_fn is not None:
            w = weight_fn(view.zeta(ci, ts), ts)
            vals = vals * w if np.ndim(w) <= 1 else vals[:, None] * w
        return vals

    def make_near(end):
        def near(delta):
            v = dens.near(end, delta, L)
            ts = np.asarray(delta, dtype=float) if end == 0 else L - np.asarray(delta, dtype=float)
            ts = np.clip(ts, 0.0, L)
            if v is None:
                v = dens(ts)
            vals = v * view.dzeta(ci, ts)
            if weight_fn is not None:
                w = weight_fn(view.zeta(ci, ts), ts)
                vals = vals * w if np.ndim(w) <= 1 else vals[:, None] * w
            return vals

        return near

    breaks = set(curve.param[1:-1]) | set(dens.breakpoints) | set(extra_breaks)
    return integrate(
        f,
        0.0,
        L,
        rule=rule,
        breakpoints=breaks,
        sing=dens.sing,
        near_start=make_near(0) if dens.sing[0] is not None else None,
        near_end=make_near(1) if dens.sing[1] is not None else None,
        scale=scale,
    )


def total_mass(mu, view=None, rule=DEFAULT_RULE):
    view = view or identity_view(mu.system)
    out = sum((a.weight for a in mu.atoms), 0j)
    for ci, d in mu.densities.items():
        out += integrate_density(view, ci, d, rule=rule)
    return out


def total_variation(mu, view=None, rule=DEFAULT_RULE):
    view = view or identity_view(mu.system)
    out = sum(abs(a.weight) for a in mu.atoms)
    for ci, d in mu.densities.items():
        curve = view.system.curves[ci]
        L = curve.length

        def f(ts, d=d, ci=ci):
            return np.abs(d(ts)) * np.abs(view.dzeta(ci, ts))

        breaks = set(curve.param[1:-1]) | set(d.breakpoints)
        out += float(
            np.real(integrate(f, 0.0, L, rule=rule, breakpoints=breaks, sing=d.sing))
        )
    return out


# ---------------------------------------------------------------------------
# named measures


def omega_measure(carrier, ci, a1=None, b1=None):
    """The signed indicator measure -chi_{a1,b1}(t) d zeta(t)."""
    if isinstance(carrier, LipschitzCurve) and b1 is None:
        carrier, ci, a1, b1 = CurveSystem.of(carrier), 0, ci, a1
    system = as_system(carrier)
    if a1 == b1:
        return CurveMeasure(system)
    value = -1.0 if a1 < b1 else 1.0
    lo, hi = min(a1, b1), max(a1, b1)
    return CurveMeasure(system, densities={ci: IndicatorDensity(lo, hi, value)})


def xi_measure(carrier, ci, a1=None, b1=None, n1=0, n2=0, view=None):
    """Beta-kernel pair measure; degenerate to a point mass when a1=b1."""
    if isinstance(carrier, LipschitzCurve) and not isinstance(ci, int):
        # called as xi_measure(curve, a1, b1, n1, n2)
        carrier, ci, a1, b1, n1, n2 = (
            CurveSystem.of(carrier),
            0,
            ci,
            a1,
            b1 if b1 is not None else 0,
            n1,
        )
    system = as_system(carrier)
    view = view or identity_view(system)
    if a1 == b1:
        return CurveMeasure(system, atoms=[Atom(ci, a1, 1.0)])
    z1 = view.zeta_point(ci, a1)
    z2 = view.zeta_point(ci, b1)
    dens = XiPairDensity(
        view,
        ci,
        [min(a1, b1)],
        [max(a1, b1)],
        [z1],
        [z2],
        [1.0],
        [1.0 if a1 < b1 else -1.0],
        n1,
        n2,
    )
    return CurveMeasure(system, densities={ci: dens})


# ---------------------------------------------------------------------------
# choice functions


@dataclass(frozen=True)
class ChoiceFunction:
    """Connecting paths in a spanning tree; None marks cross-component pairs."""

    system: CurveSystem

    @classmethod
    def for_system(cls, carrier):
        return cls(system=as_system(carrier))

    def pair_path(self, p1, p2):
        return self.system.path(p1, p2)

    def component_gap(self):
        """Smallest distance between distinct components (crude bound)."""
        sys = self.system
        best = math.inf
        for i, ci in enumerate(sys.curves):
            for j, cj in enumerate(sys.curves):
                if j <= i or sys.components[i] == sys.components[j]:
                    continue
                for v in ci.vertices:
                    d, _ = cj.distance_to(v)
                    best = min(best, d)
        return best


# ---------------------------------------------------------------------------
# cumulative densities for the additive reduction


class CumulativeMassDensity(Density):
    """p(t) = F(t) + offset + jump * [t > jump_at], F the cumulative mass."""

    def __init__(self, view, ci, atoms, dens, offset=0.0, jump_at=None, jump=0.0, rule=DEFAULT_RULE):
        self.view = view
        self.ci = ci
        self.atoms = tuple(atoms)
        self.dens = dens
        self.offset = complex(offset)
        self.jump_at = jump_at
        self.jump = complex(jump)
        self.rule = rule
        curve = view.system.curves[ci]
        brk = set(curve.param) | {a.t for a in atoms}
        if dens is not None:
            brk |= set(dens.breakpoints)
        if jump_at is not None:
            brk.add(float(jump_at))
        self.grid = np.array(sorted(brk))
        self.breakpoints = tuple(self.grid[1:-1]) + ((jump_at,) if jump_at is not None else ())
        self._F_grid = self._cumulative_at_grid()

    def _cumulative_at_grid(self):
        vals = [0j]
        acc = 0j
        for a, b in zip(self.grid[:-1], self.grid[1:]):
            if self.dens is not None:
                acc += self._piece(a, b)
            acc += sum(at.weight for at in self.atoms if a < at.t <= b)
            vals.append(acc)
        # atoms exactly at the start of the curve
        start_w = sum(at.weight for at in self.atoms if at.t <= self.grid[0])
        return np.array(vals) + start_w

    def _piece(self, a, b):
        L = self.view.system.curves[self.ci].length
        d = self.dens

        def f(ts):
            return d(ts) * self.view.dzeta(self.ci, ts)

        sing = (
            d.sing[0] if a == 0.0 else None,
            d.sing[1] if b == L else None,
        )

        def near(end):
            def go(delta):
                v = d.near(end, delta, L)
                ts = np.asarray(delta, float) if end == 0 else L - np.asarray(delta, float)
                if v is None:
                    v = d(np.clip(ts, 0.0, L))
                return v * self.view.dzeta(self.ci, np.clip(ts, 0.0, L))

            return go

        return integrate(
            f,
            a,
            b,
            rule=self.rule,
            sing=sing,
            near_start=near(0) if sing[0] is not None else None,
            near_end=near(1) if sing[1] is not None else None,
        )

    def __call__(self, ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        idx = np.clip(np.searchsorted(self.grid, ts, side="right") - 1, 0, len(self.grid) - 2)
        out = np.empty(ts.shape, dtype=complex)
        for k in np.unique(idx):
            mask = idx == k
            a = self.grid[k]
            base = self._F_grid[k]
            if self.dens is None:
                out[mask] = base
            else:
                x, w = np.polynomial.legendre.leggauss(24)
                for i in np.nonzero(mask)[0]:
                    t = ts[i]
                    if t <= a:
                        out[i] = base
                        continue
                    nodes = a + (t - a) * 0.5 * (x + 1.0)
                    vals = self.dens(nodes) * self.view.dzeta(self.ci, nodes)
                    out[i] = base + (t - a) * 0.5 * (w @ vals)
        out = out + self.offset
        if self.jump_at is not None:
            out = out + self.jump * (ts > self.jump_at)
        return out


# ---------------------------------------------------------------------------
# reductions


def _locate_base(system, base, tol=1e-6):
    if isinstance(base, tuple) and len(base) == 2 and isinstance(base[0], int):
        return base
    ci, t, dist = system.locate(complex(base))
    if dist > tol * system.scale:
        raise BaseOffCarrier(f"base point {base} at distance {dist} from carrier")
    return (ci, t)


def additive_reduce(mu, n, base, phi=None, view=None, rule=DEFAULT_RULE):
    """Rewrite int mu/(zeta-q)^n as a base-point pole plus one level up.

    Returns (c_n, theta) with c_n = int mu and the identity
        int mu/(zeta-q)^n = c_n/(zeta0-q)^n + int n*theta/(zeta-q)^(n+1).
    """
    system = mu.system
    view = view or identity_view(system)
    c0, t0 = _locate_base(system, base)
    comp = system.components[c0]
    if any(c != comp for c in mu.components_present()):
        raise DisconnectedWithoutChoice(
            "measure has mass outside the base component; reduce per component"
        )
    c_n = total_mass(mu, view, rule)
    if mu.is_zero():
        return 0j, CurveMeasure(system)

    roles, children, info = system.rooted_orientation((c0, t0))
    ends = info["ends"]

    per_curve_atoms = {ci: [a for a in mu.atoms if a.curve == ci] for ci in roles}
    per_curve_mass = {}
    for ci in roles:
        m = sum((a.weight for a in per_curve_atoms[ci]), 0j)
        d = mu.densities.get(ci)
        if d is not None:
            m += integrate_density(view, ci, d, rule=rule)
        per_curve_mass[ci] = m

    subtree = {}

    def subtree_mass(node):
        if node in subtree:
            return subtree[node]
        total = 0j
        for ci, child in children.get(node, []):
            total += per_curve_mass[ci] + subtree_mass(child)
        for ci, role in roles.items():
            if role[0] == "nontree" and role[1] == node:
                total += per_curve_mass[ci]
        subtree[node] = total
        return total

    densities = {}
    for ci, role in roles.items():
        atoms = per_curve_atoms[ci]
        d = mu.densities.get(ci)
        m = per_curve_mass[ci]
        if role[0] == "base":
            ns, ne = ends[ci]
            off = subtree_mass(ns)
            jump = -(m + subtree_mass(ne) + subtree_mass(ns))
            densities[ci] = CumulativeMassDensity(
                view, ci, atoms, d, offset=off, jump_at=t0, jump=jump, rule=rule
            )
        elif role[0] == "tree":
            travel, far = role
            travel = role[1]
            far = role[2]
            if travel > 0:
                off = -(m + subtree_mass(far))
            else:
                off = subtree_mass(far)
            densities[ci] = CumulativeMassDensity(view, ci, atoms, d, offset=off, rule=rule)
        else:  # nontree, anchored at the start node
            densities[ci] = CumulativeMassDensity(view, ci, atoms, d, offset=-m, rule=rule)

    theta = CurveMeasure(system, densities=densities)
    return c_n, theta


def discretize(mu, view=None, rule=DEFAULT_RULE, order=12):
    """Represent the measure by weighted point masses (its atoms plus
    per-panel Gauss nodes of the densities)."""
    view = view or identity_view(mu.system)
    out = [(a.curve, a.t, a.weight) for a in mu.atoms]
    for ci, d in mu.densities.items():
        curve = view.system.curves[ci]
        breaks = set(curve.param[1:-1]) | set(d.breakpoints)
        # geometric grading toward flagged singular endpoints
        L = curve.length
        for end, e in enumerate(d.sing):
            if e is None:
                continue
            w = L / 4
            for _ in range(40):
                breaks.add(w if end == 0 else L - w)
                w *= 0.5
        ts, ws = panel_nodes(0.0, L, breaks, order)
        vals = d(ts) * view.dzeta(ci, ts) * ws
        out.extend((ci, float(t), complex(v)) for t, v in zip(ts, vals) if v != 0)
    return out


def multiplicative_reduce(mu1, n1, mu2, n2, phi=None, view=None, rule=DEFAULT_RULE, order=12):
    """Reduce a product of Cauchy integrals to single integrals.

    Returns a list of (k, theta_k) such that
      (int mu1/(z-q)^(n1+1)) (int mu2/(z-q)^(n2+1)) = sum_k int theta_k/(z-q)^k.
    """
    system = mu1.system
    view = view or identity_view(system)
    phi = phi or ChoiceFunction.for_system(system)
    D1 = discretize(mu1, view, rule, order)
    D2 = discretize(mu2, view, rule, order)
    comps = system.components
    scale = system.scale
    tol = 1e-12 * scale

    top = n1 + n2 + 2
    atoms_by_level: dict[int, list[Atom]] = {}
    spans_by_curve: dict[int, list] = {}

    def add_atom(k, ci, t, w):
        atoms_by_level.setdefault(k, []).append(Atom(ci, t, w))

    for c1, t1, w1 in D1:
        z1 = view.zeta_point(c1, t1)
        for c2, t2, w2 in D2:
            w = w1 * w2
            z2 = view.zeta_point(c2, t2)
            if comps[c1] == comps[c2]:
                if abs(z1 - z2) <= tol:
                    add_atom(top, c1, t1, w)
                    continue
                path = phi.pair_path((c1, t1), (c2, t2))
                for ci, ta, tb in path:
                    spans_by_curve.setdefault(ci, []).append(
                        (min(ta, tb), max(ta, tb), z1, z2, w, 1.0 if tb > ta else -1.0)
                    )
            else:
                for j in range(n1 + 1):
                    coef = (-1) ** j * math.comb(n2 + j, j)
                    add_atom(n1 - j + 1, c1, t1, w * coef / (z2 - z1) ** (n2 + j + 1))
                for j in range(n2 + 1):
                    coef = (-1) ** j * math.comb(n1 + j, j)
                    add_atom(n2 - j + 1, c2, t2, w * coef / (z1 - z2) ** (n1 + j + 1))

    result = []
    for k in sorted(atoms_by_level):
        if k == top:
            continue
        result.append((k, CurveMeasure(system, atoms=atoms_by_level[k])))
    dens = {}
    for ci, entries in spans_by_curve.items():
        tlo, thi, z1, z2, w, sgn = (np.array(col) for col in zip(*entries))
        dens[ci] = XiPairDensity(view, ci, tlo, thi, z1, z2, w, sgn, n1, n2)
    if dens or top in atoms_by_level:
        result.append((top, CurveMeasure(system, atoms=atoms_by_level.get(top, ()), densities=dens)))
    return result


# ---------------------------------------------------------------------------
# pushforward


def pushforward_moebius(mu, h, subdiv=16):
    """Pushforward of a measure under a Moebius map.

    The image of each polyline segment is a circular arc; it is
    approximated by its polyline through `subdiv` mapped points per
    segment (exact for affine maps, which need no subdivision).
    """
    from curvecalc.curves import make_curve

    system = mu.system
    if h.c == 0:
        subdiv = 1
    pole = h.pole
    new_curves = []
    maps = []  # per curve: (orig params at subdivided vertices, image params)
    for c in system.curves:
        ts = [0.0]
        for i in range(c.nseg):
            a, b = c.param[i], c.param[i + 1]
            for k in range(1, subdiv + 1):
                ts.append(a + (b - a) * k / subdiv)
        ts = np.array(ts)
        pts = c.point_at(ts)
        if not is_inf(pole):
            d, _ = c.distance_to(pole)
            if d <= 1e-9 * system.scale:
                raise PoleOnCarrier("map pole lies on the carrier")
        img = np.array([h(p) for p in pts])
        newc = make_curve(img)
        new_curves.append(newc)
        maps.append((ts, newc.param.copy()))
    new_system = CurveSystem.of(*new_curves)

    atoms = []
    for a in mu.atoms:
        ts, tn = maps[a.curve]
        t_new = float(np.interp(a.t, ts, tn))
        atoms.append(Atom(a.curve, t_new, a.weight))

    densities = {}
    for ci, d in mu.densities.items():
        ts, tn = maps[ci]
        curve = system.curves[ci]

        def make(d=d, ts=ts, tn=tn, curve=curve, ci=ci):
            slopes = np.diff(ts) / np.diff(tn)

            def fn(tnew):
                tnew = np.asarray(tnew, dtype=float)
                told = np.interp(tnew, tn, ts)
                idx = np.clip(np.searchsorted(tn, tnew, side="right") - 1, 0, len(slopes) - 1)
                dir_old = curve.direction_at(told)
                dir_new = new_system.curves[ci].direction_at(tnew)
                return d(told) * dir_old * slopes[idx] / dir_new

            brk = tuple(np.interp(list(d.breakpoints), ts, tn))
            return FuncDensity(fn, breakpoints=brk + tuple(tn[1:-1]), sing=d.sing)

        densities[ci] = make()
    return CurveMeasure(new_system, atoms=atoms, densities=densities)
