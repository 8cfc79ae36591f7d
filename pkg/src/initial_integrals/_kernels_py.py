"""Pure-Python integer kernels.

Every function takes sequences of Python ints (the numerators of an exact
rational vector over a shared denominator) and returns Python ints, tuples
of ints, or floats.  ``_kernels.pyx`` implements the same functions with
machine integers and falls back here when a value leaves the int64 range.
"""

import math
from itertools import chain, repeat
from operator import add, mul

IMPLEMENTATION = "python"


def dot(a, b):
    """Exact sum of ``a[i] * b[i]``."""
    return sum(map(mul, a, b))


def prefix_sums(a):
    """Running sums starting at 0; the result has ``len(a) + 1`` entries."""
    out = [0]
    total = 0
    for x in a:
        total += x
        out.append(total)
    return tuple(out)


def repeat_each(a, k):
    """Repeat every entry ``k`` times in place: (1, 2), 2 -> (1, 1, 2, 2)."""
    if k == 1:
        return tuple(a)
    return tuple(chain.from_iterable(zip(*([a] * k))))


def pairs_equal(a):
    """True when ``a[2i] == a[2i + 1]`` for every i (``len(a)`` even)."""
    return a[0::2] == a[1::2]


def max_abs(a):
    return max(map(abs, a), default=0)


def sum_abs(a):
    return sum(map(abs, a))


def power_sum(a, p):
    """Return ``(M, S)`` with ``M = max|a_i|`` and ``S = sum((|a_i|/M)**p)``.

    Scaling by the largest entry keeps the float sum in range for
    arbitrarily large integers.  ``S`` is 0.0 when ``M`` is 0.
    """
    m = max_abs(a)
    if m == 0:
        return 0, 0.0
    return m, math.fsum((abs(x) / m) ** p for x in a)


def power_sum_complex(re, im, p):
    """Like :func:`power_sum` for moduli ``|re_i + i im_i|``; ``M`` is a float."""
    mods = [math.hypot(x, y) for x, y in zip(re, im)]
    m = max(mods, default=0.0)
    if m == 0.0:
        return 0.0, 0.0
    return m, math.fsum((x / m) ** p for x in mods)


def lincomb(terms, n):
    """Exact ``sum(c * v for c, v in terms)`` for length-``n`` vectors."""
    out = [0] * n
    for c, v in terms:
        if c == 0:
            continue
        if c == 1:
            out = list(map(add, out, v))
        else:
            out = list(map(add, out, map(mul, repeat(c), v)))
    return tuple(out)
