"""Kernel selection.

The compiled ``_kernels`` extension is used when it was built; otherwise the
pure-Python ``_kernels_py`` module is used.  Setting the environment variable
``INITIAL_INTEGRALS_PURE=1`` forces the fallback.
"""

import os

from initial_integrals import _kernels_py

if os.environ.get("INITIAL_INTEGRALS_PURE", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from initial_integrals import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

IMPLEMENTATION = _impl.IMPLEMENTATION

dot = _impl.dot
prefix_sums = _impl.prefix_sums
repeat_each = _impl.repeat_each
pairs_equal = _impl.pairs_equal
max_abs = _impl.max_abs
sum_abs = _impl.sum_abs
power_sum = _impl.power_sum
power_sum_complex = _impl.power_sum_complex
lincomb = _impl.lincomb

__all__ = [
    "IMPLEMENTATION",
    "dot",
    "prefix_sums",
    "repeat_each",
    "pairs_equal",
    "max_abs",
    "sum_abs",
    "power_sum",
    "power_sum_complex",
    "lincomb",
]
