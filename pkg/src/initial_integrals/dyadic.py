"""Dyadic step functions on [0, 1].

A :class:`DyadicStep` at level ``n`` holds ``2**n`` exact coefficients, the
values on the open intervals ``((i-1)/2**n, i/2**n)``.  Two steps are equal
when they define the same function, i.e. when their canonical (minimal
level) forms agree.  Values at the breakpoints are never used; there is no
point-evaluation API.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from initial_integrals.exact import (
    INF,
    QVec,
    as_scalar,
    format_exponent,
    parse_exponent,
    scalar_to_json,
)

DEFAULT_MAX_LEVEL = 24


def max_level() -> int:
    """Level cap; ``INITIAL_INTEGRALS_MAX_LEVEL`` overrides the default of 24."""
    env = os.environ.get("INITIAL_INTEGRALS_MAX_LEVEL")
    if env:
        return int(env)
    return DEFAULT_MAX_LEVEL


class LevelError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DyadicStep:
    level: int
    values: QVec

    def __post_init__(self):
        if self.level < 0:
            raise LevelError(f"negative level {self.level}")
        if self.level > max_level():
            raise LevelError(f"level {self.level} exceeds the cap {max_level()}")
        if len(self.values) != 1 << self.level:
            raise ValueError(
                f"level {self.level} needs {1 << self.level} coefficients, got {len(self.values)}"
            )

    # -- construction ------------------------------------------------------

    @classmethod
    def from_coeffs(cls, coeffs, level: int | None = None) -> "DyadicStep":
        values = QVec.from_scalars(coeffs)
        return cls(_level_for(len(values), level), values)

    @classmethod
    def from_integers(cls, nums, den: int = 1, level: int | None = None, imag=None) -> "DyadicStep":
        values = QVec.make(nums, den, imag)
        return cls(_level_for(len(values), level), values)

    @classmethod
    def constant(cls, c) -> "DyadicStep":
        return cls(0, QVec.from_scalars([c]))

    @classmethod
    def unit(cls) -> "DyadicStep":
        """The constant function 1."""
        return cls(0, QVec((1,), 1))

    @classmethod
    def zero(cls) -> "DyadicStep":
        return cls(0, QVec((0,), 1))

    # -- views -------------------------------------------------------------

    @property
    def coeffs(self) -> tuple:
        return self.values.scalars()

    @property
    def is_real(self) -> bool:
        return self.values.is_real

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, DyadicStep):
            return NotImplemented
        a, b = canonicalize(self), canonicalize(other)
        return a.level == b.level and a.values == b.values

    def __hash__(self):
        c = canonicalize(self)
        return hash((c.level, c.values))

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"DyadicStep(level={self.level}, coeffs=[{shown}{more}])"

    def same_representative(self, other: "DyadicStep") -> bool:
        """Equality of the stored data, not just of the functions."""
        return self.level == other.level and self.values == other.values

    # -- operator sugar ----------------------------------------------------

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1, other))

    def __neg__(self):
        return DyadicStep(self.level, -self.values)

    def __mul__(self, other):
        if isinstance(other, DyadicStep):
            return pointwise_mul(self, other)
        return scale(other, self)

    __rmul__ = __mul__

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> dict:
        return {"level": self.level, "coeffs": [scalar_to_json(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "DyadicStep":
        if "coeffs" not in data:
            raise KeyError("coeffs")
        return cls.from_coeffs(data["coeffs"], data.get("level"))


def _level_for(n: int, level: int | None) -> int:
    if n == 0 or n & (n - 1):
        raise ValueError(f"coefficient count {n} is not a power of two")
    found = n.bit_length() - 1
    if level is not None and level != found:
        raise ValueError(f"level {level} does not match {n} coefficients")
    return found


# ---------------------------------------------------------------------------
# chain E_0 -> E_1 -> ...


def refine(f: DyadicStep, m: int) -> DyadicStep:
    """Represent ``f`` at level ``m >= f.level``."""
    if m < f.level:
        raise LevelError("cannot coarsen by refine")
    if m == f.level:
        return f
    if m > max_level():
        raise LevelError(f"level {m} exceeds the cap {max_level()}")
    return DyadicStep(m, f.values.repeat_each(1 << (m - f.level)))


def canonicalize(f: DyadicStep) -> DyadicStep:
    """Minimal-level representative of the same function."""
    level, values = f.level, f.values
    while level > 0 and values.pairs_equal():
        values = values[::2]
        level -= 1
    if level == f.level:
        return f
    return DyadicStep(level, values)


def common_level(*steps: DyadicStep) -> list[DyadicStep]:
    m = max(s.level for s in steps)
    return [refine(s, m) for s in steps]


def juxtapose(f: DyadicStep, g: DyadicStep) -> DyadicStep:
    """``f`` squeezed onto [0, 1/2] next to ``g`` squeezed onto [1/2, 1]."""
    a, b = common_level(f, g)
    return DyadicStep(a.level + 1, a.values.concat(b.values))


def split(f: DyadicStep) -> tuple[DyadicStep, DyadicStep]:
    """Inverse of :func:`juxtapose`."""
    if f.level == 0:
        f = refine(f, 1)
    half = 1 << (f.level - 1)
    return (
        DyadicStep(f.level - 1, f.values[:half]),
        DyadicStep(f.level - 1, f.values[half:]),
    )


# ---------------------------------------------------------------------------
# vector space and algebra structure


def add(f: DyadicStep, g: DyadicStep) -> DyadicStep:
    a, b = common_level(f, g)
    return DyadicStep(a.level, a.values + b.values)


def scale(c, f: DyadicStep) -> DyadicStep:
    return DyadicStep(f.level, f.values.scale(as_scalar(c)))


def pointwise_mul(f: DyadicStep, g: DyadicStep) -> DyadicStep:
    a, b = common_level(f, g)
    return DyadicStep(a.level, a.values.hadamard(b.values))


def integrate_exact(f: DyadicStep):
    """Exact integral over [0, 1]: ``sum(c_i) / 2**n``."""
    return f.values.total() / (1 << f.level)


# ---------------------------------------------------------------------------
# norms


@dataclass(frozen=True)
class PNormValue:
    """A norm value tagged with its exponent.

    ``value`` is an exact ``Fraction`` when it could be computed exactly
    (p in {1, inf} on real data) and a float otherwise.
    """

    p: Union[Fraction, float]
    value: Union[Fraction, float]

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def __float__(self):
        return float(self.value)

    def to_json(self) -> dict:
        v = self.value
        return {"p": format_exponent(self.p), "value": str(v) if isinstance(v, Fraction) else format(v, ".17g")}


def p_norm(f: DyadicStep, p) -> PNormValue:
    """``(sum |c_i|^p / 2**n) ** (1/p)``, or ``max |c_i|`` for p = inf."""
    p = parse_exponent(p)
    if p == INF:
        return PNormValue(p, f.values.max_abs())
    if p == 1:
        return PNormValue(p, f.values.abs_sum() / (1 << f.level))
    return PNormValue(p, f.values.weighted_root_mean(p, Fraction(1, 1 << f.level)))


def _norm_value(x, p):
    if isinstance(x, PNormValue):
        if x.p != p:
            raise ValueError(f"mismatched exponents {format_exponent(x.p)} and {format_exponent(p)}")
        return x.value
    return x if isinstance(x, float) else Fraction(x)


def direct_sum_norm(a, b, p, weighted: bool = True) -> PNormValue:
    """Norm of a pair from the norms of its parts.

    ``weighted`` gives the power mean ``(1/2 (a^p + b^p)) ** (1/p)`` used by
    the juxtaposition; otherwise ``(a^p + b^p) ** (1/p)``.  For p = inf both
    variants are ``max(a, b)``.
    """
    p = parse_exponent(p)
    x, y = _norm_value(a, p), _norm_value(b, p)
    if p == INF:
        return PNormValue(p, max(x, y))
    if weighted and x == y:
        return PNormValue(p, x)
    if p == 1:
        s = x + y
        return PNormValue(p, s / 2 if weighted else s)
    big = max(float(x), float(y))
    if big == 0.0:
        return PNormValue(p, 0.0)
    pf = float(p)
    s = (float(x) / big) ** pf + (float(y) / big) ** pf
    if weighted:
        s /= 2.0
    return PNormValue(p, big * s ** (1.0 / pf))


__all__ = [
    "DEFAULT_MAX_LEVEL",
    "DyadicStep",
    "LevelError",
    "PNormValue",
    "add",
    "canonicalize",
    "common_level",
    "direct_sum_norm",
    "integrate_exact",
    "juxtapose",
    "max_level",
    "p_norm",
    "pointwise_mul",
    "refine",
    "scale",
    "split",
]
