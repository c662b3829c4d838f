"""Polyline Lipschitz curves and curve systems on the complex plane.

Curves are chord-length parametrized polylines, so the upper bi-Lipschitz
constant is exactly 1 and the lower constant C1 is computed over vertex
pairs.  Curve systems glue curves at shared endpoints and expose the
topology (components, spanning tree, paths) that the measure reductions
need.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from curvecalc.errors import (
    AmbiguousProjection,
    DegenerateSegment,
    SelfIntersection,
    ZeroDirection,
)

ON_CURVE_TOL = 1e-12


def _seg_dist(p, q, z):
    """Distance from z to the segment [p, q] and the foot parameter in [0,1]."""
    d = q - p
    L2 = abs(d) ** 2
    if L2 == 0.0:
        return abs(z - p), 0.0
    u = ((z - p).real * d.real + (z - p).imag * d.imag) / L2
    u = min(1.0, max(0.0, u))
    return abs(z - (p + u * d)), u


def _segments_cross(p1, q1, p2, q2, tol):
    """True if the closed segments intersect (beyond a shared endpoint)."""
    d1 = q1 - p1
    d2 = q2 - p2

    def cross(a, b):
        return a.real * b.imag - a.imag * b.real

    denom = cross(d1, d2)
    scale = max(abs(d1), abs(d2), 1.0)
    if abs(denom) > tol * scale * scale:
        s = cross(p2 - p1, d2) / denom
        t = cross(p2 - p1, d1) / denom
        eps = tol / scale
        return -eps <= s <= 1 + eps and -eps <= t <= 1 + eps
    # parallel: check proximity of endpoints to the other segment
    for z in (p2, q2):
        dist, _ = _seg_dist(p1, q1, z)
        if dist <= tol * scale:
            return True
    for z in (p1, q1):
        dist, _ = _seg_dist(p2, q2, z)
        if dist <= tol * scale:
            return True
    return False


@dataclass(frozen=True)
class DirectionCone:
    """Angular hull [lo, hi] of a set of unit directions.

    The hull is the minimal arc containing all angles; `valid` is False
    when the arc is too wide for a short Lipschitz curve (semi-angle
    >= pi/2).
    """

    lo: float
    hi: float

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def semi_angle(self):
        return 0.5 * (self.hi - self.lo)

    @property
    def axis(self):
        return 0.5 * (self.hi + self.lo)

    @property
    def valid(self):
        return self.semi_angle < math.pi / 2

    def contains(self, angle, slack=0.0):
        a = (angle - self.lo) % (2 * math.pi)
        return a <= self.width + slack

    def angular_distance(self, angle):
        """Distance from the ray `angle` to the hull arc (0 if inside)."""
        a = (angle - self.lo) % (2 * math.pi)
        if a <= self.width:
            return 0.0
        return min(a - self.width, 2 * math.pi - a)


def hull_of_angles(angles):
    """Minimal arc containing all given angles (radians)."""
    if len(angles) == 0:
        raise ZeroDirection("empty direction set")
    ang = np.sort(np.mod(np.asarray(angles, dtype=float), 2 * math.pi))
    gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * math.pi]]))
    i = int(np.argmax(gaps))
    lo = ang[(i + 1) % len(ang)]
    width = 2 * math.pi - gaps[i]
    return DirectionCone(lo=float(lo), hi=float(lo + width))


@dataclass(frozen=True)
class LipschitzCurve:
    vertices: np.ndarray  # complex128, shape (nv,)
    param: np.ndarray  # float64 cumulative chord length, shape (nv,)
    closed: bool
    C1: float

    @property
    def length(self):
        return float(self.param[-1])

    @property
    def a(self):
        return 0.0

    @property
    def b(self):
        return self.length

    @property
    def start(self):
        return complex(self.vertices[0])

    @property
    def end(self):
        return complex(self.vertices[-1])

    @property
    def nseg(self):
        return len(self.vertices) - 1

    def segment_index(self, t):
        i = int(np.searchsorted(self.param, t, side="right")) - 1
        return min(max(i, 0), self.nseg - 1)

    def point_at(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self.param, t, side="right") - 1, 0, self.nseg - 1)
        p = self.vertices[idx]
        d = self.vertices[idx + 1] - self.vertices[idx]
        seglen = self.param[idx + 1] - self.param[idx]
        out = p + (t - self.param[idx]) / seglen * d
        return out if out.ndim else complex(out)

    def direction_at(self, t):
        """Unit tangent of the segment containing t (right-continuous)."""
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self.param, t, side="right") - 1, 0, self.nseg - 1)
        d = self.vertices[idx + 1] - self.vertices[idx]
        out = d / np.abs(d)
        return out if out.ndim else complex(out)

    def directions_at_point(self, t):
        """Local curve directions (both orientations) at parameter t."""
        dirs = []
        i = self.segment_index(t)
        d = self.vertices[i + 1] - self.vertices[i]
        dirs.extend([d / abs(d), -d / abs(d)])
        # at a vertex the previous segment contributes as well
        if abs(t - self.param[i]) <= 1e-12 * max(self.length, 1.0) and i > 0:
            d0 = self.vertices[i] - self.vertices[i - 1]
            dirs.extend([d0 / abs(d0), -d0 / abs(d0)])
        return dirs

    def reversed(self):
        return LipschitzCurve(
            vertices=self.vertices[::-1].copy(),
            param=(self.length - self.param[::-1]).copy(),
            closed=self.closed,
            C1=self.C1,
        )

    def distance_to(self, z):
        """Distance from z to the polyline and the parameter of the foot."""
        best = (math.inf, 0.0)
        for i in range(self.nseg):
            dist, u = _seg_dist(self.vertices[i], self.vertices[i + 1], z)
            if dist < best[0]:
                best = (dist, self.param[i] + u * (self.param[i + 1] - self.param[i]))
        return best


def make_curve(points, tol=1e-12):
    """Build a chord-length parametrized polyline curve.

    A closed curve is recognized by its last point coinciding with the
    first; the self-intersection test then ignores that shared endpoint.
    """
    verts = np.asarray([complex(p[0], p[1]) if isinstance(p, (tuple, list)) else complex(p) for p in points])
    if len(verts) < 2:
        raise DegenerateSegment("need at least two points")
    scale = max(1.0, float(np.max(np.abs(verts))))
    closed = bool(abs(verts[0] - verts[-1]) <= tol * scale) and len(verts) > 2
    seglens = np.abs(np.diff(verts))
    if np.any(seglens <= tol * scale):
        raise DegenerateSegment("consecutive vertices coincide")
    param = np.concatenate([[0.0], np.cumsum(seglens)])

    nseg = len(verts) - 1
    for i in range(nseg):
        for j in range(i + 1, nseg):
            adjacent = j == i + 1 or (closed and i == 0 and j == nseg - 1)
            if adjacent:
                # only the shared endpoint may coincide
                p1, q1 = verts[i], verts[i + 1]
                p2, q2 = verts[j], verts[j + 1]
                shared = q1 if j == i + 1 else p1
                other1 = p1 if j == i + 1 else q1
                free2 = (p2, q2) if j == i + 1 else (p2, q2)
                d, _ = _seg_dist(p2, q2, other1)
                if d <= tol * scale:
                    raise SelfIntersection(f"segments {i} and {j} overlap")
                for z in free2:
                    if abs(z - shared) > tol * scale:
                        d, _ = _seg_dist(p1, q1, z)
                        if d <= tol * scale:
                            raise SelfIntersection(f"segments {i} and {j} overlap")
                continue
            if _segments_cross(verts[i], verts[i + 1], verts[j], verts[j + 1], tol):
                raise SelfIntersection(f"segments {i} and {j} intersect")

    C1 = _lower_lipschitz(verts, param, closed)
    return LipschitzCurve(vertices=verts, param=param, closed=closed, C1=C1)


def _lower_lipschitz(verts, param, closed):
    n = len(verts)
    L = param[-1]
    c1 = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            dt = param[j] - param[i]
            if closed:
                dt = min(dt, L - dt)
            if dt <= 0:
                continue
            c1 = min(c1, abs(verts[j] - verts[i]) / dt)
    return c1


def forward_cone(c: LipschitzCurve) -> DirectionCone:
    """Angular hull of chord directions (t2 > t1) over vertex pairs."""
    angles = []
    n = len(c.vertices)
    for i in range(n):
        for j in range(i + 1, n):
            d = c.vertices[j] - c.vertices[i]
            if d != 0:
                angles.append(cmath.phase(d))
    return hull_of_angles(angles)


def transversal_angle(c: LipschitzCurve, xi: complex) -> float:
    """Smallest angle between the line of xi and any vertex chord."""
    if xi == 0:
        raise ZeroDirection("xi must be nonzero")
    axi = cmath.phase(xi)
    best = math.pi / 2
    n = len(c.vertices)
    for i in range(n):
        for j in range(i + 1, n):
            d = c.vertices[j] - c.vertices[i]
            if d == 0:
                continue
            ang = abs((cmath.phase(d) - axi + math.pi / 2) % math.pi - math.pi / 2)
            best = min(best, ang)
    return best


def side_of(c: LipschitzCurve, z: complex, tol=ON_CURVE_TOL):
    """'Left', 'Right' or 'On' relative to the oriented curve."""
    dists = []
    for i in range(c.nseg):
        dist, u = _seg_dist(c.vertices[i], c.vertices[i + 1], z)
        dists.append((dist, i, u))
    dists.sort()
    dmin, imin, umin = dists[0]
    if dmin < tol:
        return "On"
    # a tie between non-adjacent segments with conflicting sides is ambiguous
    sides = set()
    for dist, i, u in dists:
        if dist > dmin * (1 + 1e-9) + 1e-15:
            break
        d = c.vertices[i + 1] - c.vertices[i]
        p = c.vertices[i] + u * d
        crossp = d.real * (z - p).imag - d.imag * (z - p).real
        sides.add("Left" if crossp > 0 else "Right")
    if len(sides) > 1:
        raise AmbiguousProjection(f"point {z} equidistant from segments with conflicting sides")
    return sides.pop()


@dataclass(frozen=True)
class CurveSystem:
    curves: tuple[LipschitzCurve, ...]
    node_tol: float = 1e-9

    @classmethod
    def of(cls, *curves, node_tol=1e-9):
        return cls(curves=tuple(curves), node_tol=node_tol)

    @property
    def scale(self):
        return max(1.0, max(float(np.max(np.abs(c.vertices))) for c in self.curves))

    @cached_property
    def nodes(self):
        """Merged endpoint positions; returns (positions, ends) where
        ends[i] = (start_node, end_node) of curve i."""
        positions: list[complex] = []
        ends = []
        tol = self.node_tol * self.scale
        for c in self.curves:
            ids = []
            for p in (c.start, c.end):
                for k, q in enumerate(positions):
                    if abs(p - q) <= tol:
                        ids.append(k)
                        break
                else:
                    positions.append(p)
                    ids.append(len(positions) - 1)
            ends.append(tuple(ids))
        return tuple(positions), tuple(ends)

    @cached_property
    def components(self):
        """component id per curve, via union-find on nodes."""
        _, ends = self.nodes
        nnode = 1 + max((max(e) for e in ends), default=-1)
        parent = list(range(nnode))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s, e in ends:
            parent[find(s)] = find(e)
        comp_of_node = [find(x) for x in range(nnode)]
        remap = {}
        out = []
        for s, _e in ends:
            c = comp_of_node[s]
            out.append(remap.setdefault(c, len(remap)))
        return tuple(out)

    @property
    def n_components(self):
        return 1 + max(self.components, default=-1)

    @cached_property
    def spanning_tree(self):
        """BFS spanning tree over nodes: (parent_node, via_curve) per node,
        plus the set of tree curves."""
        _, ends = self.nodes
        nnode = 1 + max((max(e) for e in ends), default=-1)
        adj: list[list[tuple[int, int]]] = [[] for _ in range(nnode)]
        for ci, (s, e) in enumerate(ends):
            adj[s].append((e, ci))
            adj[e].append((s, ci))
        parent = [None] * nnode
        seen = [False] * nnode
        tree = set()
        for root in range(nnode):
            if seen[root]:
                continue
            seen[root] = True
            queue = [root]
            while queue:
                u = queue.pop(0)
                for v, ci in adj[u]:
                    if not seen[v]:
                        seen[v] = True
                        parent[v] = (u, ci)
                        tree.add(ci)
                        queue.append(v)
        return parent, frozenset(tree)

    def node_path(self, u, v):
        """Node sequence and curve edges from u to v in the spanning tree."""
        parent, _ = self.spanning_tree
        up = []
        x = u
        while True:
            up.append(x)
            if parent[x] is None:
                break
            x = parent[x][0]
        vp = []
        x = v
        while True:
            vp.append(x)
            if parent[x] is None:
                break
            x = parent[x][0]
        set_up = {n: i for i, n in enumerate(up)}
        for j, n in enumerate(vp):
            if n in set_up:
                i = set_up[n]
                nodes = up[: i + 1] + vp[:j][::-1]
                edges = []
                for a, b in zip(nodes[:-1], nodes[1:]):
                    if parent[b] is not None and parent[b][0] == a:
                        edges.append(parent[b][1])
                    else:
                        edges.append(parent[a][1])
                return nodes, edges
        return None, None

    def component_curves(self, comp):
        return [ci for ci in range(len(self.curves)) if self.components[ci] == comp]

    def locate(self, z, tol=1e-9):
        """Nearest point of the system: (curve index, parameter, distance)."""
        best = (math.inf, -1, 0.0)
        for ci, c in enumerate(self.curves):
            dist, t = c.distance_to(z)
            if dist < best[0]:
                best = (dist, ci, t)
        return best[1], best[2], best[0]

    def path(self, p1, p2):
        """A simple polyline path from point p1=(curve,t) to p2=(curve,t).

        Returns a list of spans (curve index, t_from, t_to) traversed in
        order, or None when the points lie in different components.
        """
        c1, t1 = p1
        c2, t2 = p2
        if c1 == c2:
            return [(c1, t1, t2)]
        if self.components[c1] != self.components[c2]:
            return None
        _, ends = self.nodes
        best = None
        for e1 in (0, 1):
            for e2 in (0, 1):
                u = ends[c1][e1]
                v = ends[c2][e2]
                nodes, edges = self.node_path(u, v)
                if nodes is None:
                    continue
                cost = len(edges)
                if best is None or cost < best[0]:
                    best = (cost, e1, e2, nodes, edges)
        _, e1, e2, nodes, edges = best
        spans = []
        tu = 0.0 if e1 == 0 else self.curves[c1].length
        spans.append((c1, t1, tu))
        cur = nodes[0]
        for ci, nxt in zip(edges, nodes[1:]):
            s, e = ends[ci]
            if s == cur and e == nxt:
                spans.append((ci, 0.0, self.curves[ci].length))
            else:
                spans.append((ci, self.curves[ci].length, 0.0))
            cur = nxt
        tv = 0.0 if e2 == 0 else self.curves[c2].length
        spans.append((c2, tv, t2))
        return [s for s in spans if abs(s[1] - s[2]) > 0]

    def rooted_orientation(self, base):
        """Root the component of `base` at the base point.

        Returns a dict curve -> ('base', t0) | ('tree', travel, far_node)
        | ('nontree', anchor_node), and children lists per node, where
        `travel` is +1 when away-from-base traversal increases t.
        """
        c0, t0 = base
        _, ends = self.nodes
        comp = self.components[c0]
        member = [ci for ci in range(len(self.curves)) if self.components[ci] == comp]
        adj: dict[int, list[tuple[int, int]]] = {}
        for ci in member:
            s, e = ends[ci]
            adj.setdefault(s, []).append((e, ci))
            adj.setdefault(e, []).append((s, ci))
        roles: dict[int, tuple] = {c0: ("base", t0)}
        children: dict[int, list[tuple[int, int]]] = {n: [] for n in adj}
        seen = set(ends[c0])
        queue = list(ends[c0])
        while queue:
            u = queue.pop(0)
            for v, ci in adj[u]:
                if ci in roles:
                    continue
                if v in seen:
                    continue
                seen.add(v)
                s, e = ends[ci]
                travel = 1 if s == u else -1
                roles[ci] = ("tree", travel, v)
                children[u].append((ci, v))
                queue.append(v)
        for ci in member:
            if ci not in roles:
                roles[ci] = ("nontree", ends[ci][0])
        return roles, children, dict(ends=ends)
