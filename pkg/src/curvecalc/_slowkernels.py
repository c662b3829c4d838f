"""Numpy implementations of the hot evaluation kernels.

These mirror the signatures of the compiled module `_fastkernels`; the
backend module picks whichever is available at import time.
"""

import numpy as np

BACKEND = "numpy"


def cauchy_sum(w, coeff, z, k):
    """Sum of coeff / (w - z)**k over all entries."""
    return complex(np.sum(coeff / (w - z) ** k))


def node_values(zeta, dzeta, dens, q, k):
    """Integrand values dens * dzeta / (zeta - q)**k at quadrature nodes."""
    return dens * dzeta / (zeta - q) ** k


def polyline_log_sum(vertices, z):
    """Telescoped per-segment principal logs of (v[j+1]-z)/(v[j]-z)."""
    ratios = (vertices[1:] - z) / (vertices[:-1] - z)
    return complex(np.sum(np.log(ratios)))


def xi_pair_sum(ts, zt, z1, z2, wt, tlo, thi, sgn, n1, n2, coef):
    """Superposed beta-kernel density at parameters ts / positions zt.

    Each entry p describes one oriented pair kernel supported on
    [tlo[p], thi[p]]; sgn flips entries traversed against the curve
    orientation.
    """
    active = (ts[:, None] >= tlo[None, :]) & (ts[:, None] <= thi[None, :])
    kern = (
        (zt[:, None] - z1[None, :]) ** n2
        * (z2[None, :] - zt[:, None]) ** n1
        / (z2[None, :] - z1[None, :]) ** (n1 + n2 + 1)
    )
    contrib = np.where(active, kern, 0.0) * (wt * sgn)[None, :]
    return coef * contrib.sum(axis=1)
