"""Finite-dimensional multivalued linear operators (linear relations).

A relation is a subspace of C^d x C^d presented by generator matrices
(Y, X): the pairs {(Yc, Xc)}.  The Moebius action (aA+b)/(cA+d) is a
matrix action on the generators, so resolvents of relations that are not
operators (or not everywhere defined) stay first-class objects; applying
a relation to a vector is a least-squares solve with explicit residual
and uniqueness checks rather than a factorization that could fail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from curvecalc.errors import MultiValued, NotInDomain
from curvecalc.moebius import MoebiusMap

RANK_TOL = 1e-10


def _rank(M, tol_scale=None):
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    ref = s[0] if tol_scale is None else tol_scale
    if ref == 0:
        return 0
    return int(np.sum(s > RANK_TOL * ref))


class LinearRelation:
    """Subspace {(Yc, Xc) : c in C^r} of C^d x C^d."""

    def __init__(self, Y, X):
        Y = np.atleast_2d(np.asarray(Y, dtype=complex))
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        if Y.shape != X.shape:
            raise ValueError("generator matrices must have equal shapes")
        d = Y.shape[0]
        stack = np.vstack([Y, X])
        if stack.size:
            U, s, _ = np.linalg.svd(stack, full_matrices=False)
            r = int(np.sum(s > RANK_TOL * s[0])) if s.size and s[0] > 0 else 0
            basis = U[:, :r] * s[:r]
        else:
            basis = stack
        self.Y = np.ascontiguousarray(basis[:d])
        self.X = np.ascontiguousarray(basis[d:])
        self.dim = d

    @classmethod
    def from_matrix(cls, M):
        M = np.atleast_2d(np.asarray(M, dtype=complex))
        return cls(M, np.eye(M.shape[0]))

    @property
    def r(self):
        return self.Y.shape[1]

    def stack(self):
        return np.vstack([self.Y, self.X])

    def scale(self):
        s = np.linalg.svd(self.stack(), compute_uv=False)
        return float(s[0]) if s.size else 0.0

    def equals(self, other: "LinearRelation", tol=None) -> bool:
        """Subspace equality of the two presentations."""
        if self.dim != other.dim:
            return False
        s1, s2 = self.stack(), other.stack()
        r1 = _rank(s1)
        r2 = _rank(s2)
        if r1 != r2:
            return False
        return _rank(np.hstack([s1, s2])) == r1

    def moebius_apply(self, h: MoebiusMap) -> "LinearRelation":
        return LinearRelation(h.a * self.Y + h.b * self.X, h.c * self.Y + h.d * self.X)

    def inverse(self):
        return LinearRelation(self.X, self.Y)

    def is_operator(self) -> bool:
        # null(X) = 0 on the reduced presentation, since [Y;X] has full
        # column rank: any X-null vector with nonzero Y-image witnesses
        # multivaluedness
        return _rank(self.X, tol_scale=self.scale()) == self.r

    def apply(self, u):
        u = np.asarray(u, dtype=complex).reshape(self.dim)
        scale = self.scale()
        c, *_ = np.linalg.lstsq(self.X, u, rcond=None)
        resid = np.linalg.norm(self.X @ c - u)
        if resid > RANK_TOL * max(scale, 1.0) * (1.0 + np.linalg.norm(u)):
            raise NotInDomain(f"vector outside the relation domain (residual {resid:.2e})")
        if self.r:
            _U, s, Vh = np.linalg.svd(self.X)
            ns = s[s > RANK_TOL * max(scale, 1e-300)]
            null = Vh[len(ns):].conj().T
            if null.shape[1]:
                spread = np.linalg.norm(self.Y @ null)
                if spread > RANK_TOL * max(scale, 1.0):
                    raise MultiValued("image fiber is an affine subspace, not a point")
        return self.Y @ c


@dataclass(frozen=True)
class OperatorMatrix:
    M: np.ndarray

    def relation(self) -> LinearRelation:
        return LinearRelation.from_matrix(self.M)


def as_relation(A):
    if isinstance(A, LinearRelation):
        return A
    if isinstance(A, OperatorMatrix):
        return A.relation()
    return LinearRelation.from_matrix(A)


def moebius_apply(A, h: MoebiusMap) -> LinearRelation:
    return as_relation(A).moebius_apply(h)


def is_operator(A) -> bool:
    return as_relation(A).is_operator()


def apply(A, u):
    return as_relation(A).apply(u)


def resolvent_apply(A, w: complex, u):
    """(w - A)^{-1} u via the generator swap (X, wX - Y)."""
    A = as_relation(A)
    return LinearRelation(A.X, w * A.X - A.Y).apply(u)


def iterated_resolvent(A, ws, u):
    """(z_1-A)^{-1} ... (z_m-A)^{-1} u, rightmost factor applied first."""
    A = as_relation(A)
    out = np.asarray(u, dtype=complex)
    for w in reversed(list(ws)):
        out = resolvent_apply(A, w, out)
    return out


def domain_check(A, system, n, u, sampler=None, seed=0, grid=33, tuples=40, near_diag=8):
    """Sampled surrogate for u being in the order-n resolvent domain on
    the system: evaluates iterated resolvents on random node tuples
    (plus near-diagonal ones) and reports the worst norm and failures."""
    A = as_relation(A)
    u = np.asarray(u, dtype=complex)
    rng = np.random.default_rng(seed)
    pool = []
    for c in system.curves:
        ts = np.linspace(0.0, c.length, grid)
        pool.extend(complex(z) for z in c.point_at(ts))
    if sampler is not None:
        pool = list(sampler())
    report = {"n": int(n), "max_norm": float(np.linalg.norm(u)), "failures": []}
    for m in range(1, int(n) + 1):
        picks = [tuple(rng.choice(len(pool), size=m)) for _ in range(tuples)]
        for _ in range(near_diag):
            i = int(rng.integers(len(pool)))
            base = pool[i]
            picks.append(tuple([i] * m))
            jitter = [base + 1e-3 * (rng.standard_normal() + 1j * rng.standard_normal())
                      for _ in range(m)]
            try:
                v = iterated_resolvent(A, jitter, u)
                report["max_norm"] = max(report["max_norm"], float(np.linalg.norm(v)))
            except (NotInDomain, MultiValued) as exc:
                report["failures"].append((tuple(jitter), str(exc)))
        for idx in picks:
            ws = [pool[i] for i in idx]
            try:
                v = iterated_resolvent(A, ws, u)
                report["max_norm"] = max(report["max_norm"], float(np.linalg.norm(v)))
            except (NotInDomain, MultiValued) as exc:
                report["failures"].append((tuple(ws), str(exc)))
    report["passed"] = not report["failures"]
    return report
