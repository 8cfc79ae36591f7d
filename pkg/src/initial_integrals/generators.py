"""Seeded random inputs for the property checks.

All generators take a ``numpy.random.Generator`` so a single seed fixes a
whole verification run.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from initial_integrals.dyadic import DyadicStep, refine
from initial_integrals.exact import make_scalar


def rng_for(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_step(
    rng: np.random.Generator,
    max_level: int,
    *,
    min_level: int = 0,
    magnitude: int = 50,
    max_den: int = 16,
    complex_: bool = False,
    reducible: float = 0.1,
) -> DyadicStep:
    """Random step with level uniform in ``[min_level, max_level]``.

    Numerators are uniform in ``[-magnitude, magnitude]`` over a random
    denominator ``<= max_den``.  With probability ``reducible`` the step is
    drawn at a lower level and refined, so canonical forms get exercised.
    """
    level = int(rng.integers(min_level, max_level + 1))
    drawn = level
    if level > 0 and rng.random() < reducible:
        drawn = int(rng.integers(0, level))
    size = 1 << drawn
    den = int(rng.integers(1, max_den + 1))
    nums = rng.integers(-magnitude, magnitude + 1, size=size).tolist()
    imag = rng.integers(-magnitude, magnitude + 1, size=size).tolist() if complex_ else None
    f = DyadicStep.from_integers(nums, den, imag=imag)
    return refine(f, level) if drawn != level else f


def random_scalar(rng: np.random.Generator, magnitude: int = 20, max_den: int = 8, complex_: bool = False):
    den = int(rng.integers(1, max_den + 1))
    re = Fraction(int(rng.integers(-magnitude, magnitude + 1)), den)
    if not complex_:
        return re
    return make_scalar(re, Fraction(int(rng.integers(-magnitude, magnitude + 1)), den))


def random_vector(rng: np.random.Generator, n: int, magnitude: int = 20, max_den: int = 8, complex_: bool = False):
    return tuple(random_scalar(rng, magnitude, max_den, complex_) for _ in range(n))
