"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; setting
CURVECALC_BACKEND=py forces the numpy fallback (useful for benchmarking
and as an escape hatch on platforms without a C compiler).
"""

import os

from curvecalc import _slowkernels

if os.environ.get("CURVECALC_BACKEND", "auto") == "py":
    _impl = _slowkernels
else:
    try:
        from curvecalc import _fastkernels as _impl
    except ImportError:
        _impl = _slowkernels

BACKEND = _impl.BACKEND
cauchy_sum = _impl.cauchy_sum
node_values = _impl.node_values
polyline_log_sum = _impl.polyline_log_sum
xi_pair_sum = _impl.xi_pair_sum


def backend_name():
    return BACKEND
