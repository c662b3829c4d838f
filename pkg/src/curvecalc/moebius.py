"""Moebius maps h(z) = (az+b)/(cz+d) on the Riemann sphere."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

INF = complex(math.inf, 0.0)


def is_inf(z):
    return cmath.isinf(z)


@dataclass(frozen=True)
class MoebiusMap:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if self.a * self.d - self.b * self.c == 0:
            raise ValueError("degenerate map: ad - bc = 0")

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def affine(cls, a, b):
        return cls(a, b, 0, 1)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def pole(self):
        """Point sent to infinity."""
        if self.c == 0:
            return INF
        return -self.d / self.c

    def __call__(self, z):
        if is_inf(z):
            return self.a / self.c if self.c != 0 else INF
        den = self.c * z + self.d
        if den == 0:
            return INF
        return (self.a * z + self.b) / den

    def derivative(self, z):
        den = self.c * z + self.d
        return self.det / (den * den)

    def inverse(self):
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MoebiusMap"):
        """self after other: (self.compose(other))(z) = self(other(z))."""
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def normalized(self):
        s = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        return MoebiusMap(self.a / s, self.b / s, self.c / s, self.d / s)

    def is_identity(self, tol=1e-14):
        n = self.normalized()
        # proportional to the identity matrix
        return (
            abs(n.b) <= tol
            and abs(n.c) <= tol
            and abs(n.a - n.d) <= tol
        )
