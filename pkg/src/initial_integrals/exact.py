"""Exact scalars and exact rational vectors.

Real scalars are :class:`fractions.Fraction`.  Complex scalars are
:class:`GaussianRational`, a pair of fractions; arithmetic that lands back on
the real line returns a plain ``Fraction`` so real inputs never leak into
complex mode.

:class:`QVec` stores a vector of such scalars as integer numerators over one
positive common denominator, which is the layout the integer kernels work on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

from initial_integrals import kernels

INF = math.inf


class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _parts(x):
        if isinstance(x, GaussianRational):
            return x.re, x.im
        if isinstance(x, (int, Fraction, Rational)):
            return Fraction(x), Fraction(0)
        return None

    def __add__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return make_scalar(self.re + o[0], self.im + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return make_scalar(self.re - o[0], self.im - o[1])

    def __rsub__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return make_scalar(o[0] - self.re, o[1] - self.im)

    def __mul__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = o
        return make_scalar(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        c, d = o
        n = c * c + d * d
        if n == 0:
            raise ZeroDivisionError("division by zero")
        a, b = self.re, self.im
        return make_scalar((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return GaussianRational(*o) / self

    def __neg__(self):
        return make_scalar(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        return make_scalar(self.re, -self.im)

    def __abs__(self):
        return math.hypot(self.re, self.im)

    def __eq__(self, other):
        o = self._parts(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o[0] and self.im == o[1]

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"


Scalar = Union[Fraction, GaussianRational]


def make_scalar(re, im=0) -> Scalar:
    """Build a scalar, collapsing to ``Fraction`` when the imaginary part is 0."""
    if im == 0:
        return Fraction(re)
    return GaussianRational(re, im)


def as_scalar(x) -> Scalar:
    """Coerce ints, fractions, strings ("p/q", "1.5") or {"re","im"} dicts."""
    if isinstance(x, GaussianRational):
        return make_scalar(x.re, x.im)
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite scalar {x!r}")
        return Fraction(x)
    if isinstance(x, complex):
        return make_scalar(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, dict):
        return make_scalar(as_scalar(x.get("re", 0)), as_scalar(x.get("im", 0)))
    if isinstance(x, Rational):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a scalar")


def is_complex(x) -> bool:
    return isinstance(x, GaussianRational)


def conj(x: Scalar) -> Scalar:
    return x.conjugate() if isinstance(x, GaussianRational) else x


def abs2(x: Scalar) -> Fraction:
    """Exact squared modulus."""
    if isinstance(x, GaussianRational):
        return x.re * x.re + x.im * x.im
    return Fraction(x) * Fraction(x)


def scalar_abs(x: Scalar):
    """|x|: exact ``Fraction`` for reals, float for genuinely complex values."""
    if isinstance(x, GaussianRational):
        return abs(x)
    return abs(Fraction(x))


def scalar_to_json(x: Scalar):
    if isinstance(x, GaussianRational):
        return {"re": str(x.re), "im": str(x.im)}
    return str(Fraction(x))


# ---------------------------------------------------------------------------
# exponents


def parse_exponent(p) -> Union[Fraction, float]:
    """Norm exponent in [1, inf]: returns a Fraction, or ``math.inf``."""
    if isinstance(p, str):
        s = p.strip().lower()
        if s in ("inf", "infinity", "∞", "+inf"):
            return INF
        p = Fraction(s)
    elif isinstance(p, float):
        if math.isinf(p) and p > 0:
            return INF
        p = Fraction(p)
    else:
        p = Fraction(p)
    if p < 1:
        raise ValueError(f"not a norm exponent: {p}")
    return p


def format_exponent(p) -> str:
    return "inf" if p == INF else str(Fraction(p))


def conjugate_exponent(p):
    """q with 1/p + 1/q = 1, exactly."""
    p = parse_exponent(p)
    if p == INF:
        return Fraction(1)
    if p == 1:
        return INF
    return p / (p - 1)


def format_float(x: float) -> str:
    return format(x, ".17g")


# ---------------------------------------------------------------------------
# exact vectors


def _gcd_all(den, *seqs):
    g = den
    for s in seqs:
        if s:
            g = math.gcd(g, *s)
            if g == 1:
                return 1
    return g


@dataclass(frozen=True)
class QVec:
    """Exact vector ``(re + i*im) / den`` with integer numerator tuples.

    Always normalised: ``den > 0``, the gcd of every numerator and ``den`` is
    1, and ``im`` is ``None`` for real vectors.  Two QVecs are therefore
    equal exactly when they hold the same scalars.
    """

    re: tuple
    den: int = 1
    im: tuple | None = None

    @classmethod
    def make(cls, re: Sequence[int], den: int = 1, im: Sequence[int] | None = None) -> "QVec":
        re = tuple(re)
        if im is not None:
            im = tuple(im)
            if len(im) != len(re):
                raise ValueError("real and imaginary parts differ in length")
            if not any(im):
                im = None
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            den = -den
            re = tuple(-x for x in re)
            if im is not None:
                im = tuple(-x for x in im)
        g = _gcd_all(den, re, im or ())
        if g != 1:
            re = tuple(x // g for x in re)
            if im is not None:
                im = tuple(x // g for x in im)
            den //= g
        return cls(re, den, im)

    @classmethod
    def from_scalars(cls, values: Iterable) -> "QVec":
        vals = [as_scalar(v) for v in values]
        dens = []
        for v in vals:
            if isinstance(v, GaussianRational):
                dens.append(v.re.denominator)
                dens.append(v.im.denominator)
            else:
                dens.append(v.denominator)
        den = math.lcm(*dens) if dens else 1
        re = []
        im = []
        for v in vals:
            if isinstance(v, GaussianRational):
                re.append(v.re.numerator * (den // v.re.denominator))
                im.append(v.im.numerator * (den // v.im.denominator))
            else:
                re.append(v.numerator * (den // v.denominator))
                im.append(0)
        return cls.make(re, den, im)

    @classmethod
    def zeros(cls, n: int) -> "QVec":
        return cls((0,) * n, 1, None)

    @classmethod
    def constant(cls, c, n: int) -> "QVec":
        return cls.from_scalars([c]).repeat_each(n)

    # -- access ------------------------------------------------------------

    def __len__(self):
        return len(self.re)

    @property
    def is_real(self) -> bool:
        return self.im is None

    def _im(self):
        return self.im if self.im is not None else (0,) * len(self.re)

    def __getitem__(self, i) -> Scalar:
        if isinstance(i, slice):
            return QVec.make(self.re[i], self.den, None if self.im is None else self.im[i])
        if self.im is None:
            return Fraction(self.re[i], self.den)
        return make_scalar(Fraction(self.re[i], self.den), Fraction(self.im[i], self.den))

    def scalars(self) -> tuple:
        if self.im is None:
            d = self.den
            return tuple(Fraction(x, d) for x in self.re)
        return tuple(self[i] for i in range(len(self)))

    def __iter__(self):
        return iter(self.scalars())

    def is_zero(self) -> bool:
        return not any(self.re) and self.im is None

    # -- structure ---------------------------------------------------------

    def rescaled(self, den: int):
        """Numerators over ``den`` (which must be a multiple of ``self.den``)."""
        k = den // self.den
        if k * self.den != den:
            raise ValueError("target denominator is not a multiple")
        if k == 1:
            return self.re, self._im()
        return tuple(x * k for x in self.re), tuple(x * k for x in self._im())

    def concat(self, other: "QVec") -> "QVec":
        den = math.lcm(self.den, other.den)
        ar, ai = self.rescaled(den)
        br, bi = other.rescaled(den)
        im = ai + bi if not (self.is_real and other.is_real) else None
        return QVec.make(ar + br, den, im)

    def repeat_each(self, k: int) -> "QVec":
        re = kernels.repeat_each(self.re, k)
        im = None if self.im is None else kernels.repeat_each(self.im, k)
        return QVec(re, self.den, im)

    def pairs_equal(self) -> bool:
        if not kernels.pairs_equal(self.re):
            return False
        return self.im is None or kernels.pairs_equal(self.im)

    def take(self, start: int, stop: int, step: int = 1) -> "QVec":
        return self[start:stop:step]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "QVec") -> "QVec":
        if len(self) != len(other):
            raise ValueError("length mismatch")
        return QVec.lincomb([(Fraction(1), self), (Fraction(1), other)])

    def __sub__(self, other: "QVec") -> "QVec":
        if len(self) != len(other):
            raise ValueError("length mismatch")
        return QVec.lincomb([(Fraction(1), self), (Fraction(-1), other)])

    def __neg__(self) -> "QVec":
        return QVec(tuple(-x for x in self.re), self.den,
                    None if self.im is None else tuple(-x for x in self.im))

    def scale(self, c) -> "QVec":
        c = as_scalar(c)
        if isinstance(c, GaussianRational):
            b = math.lcm(c.re.denominator, c.im.denominator)
            cr = c.re.numerator * (b // c.re.denominator)
            ci = c.im.numerator * (b // c.im.denominator)
            vi = self._im()
            re = tuple(cr * x - ci * y for x, y in zip(self.re, vi))
            im = tuple(cr * y + ci * x for x, y in zip(self.re, vi))
            return QVec.make(re, self.den * b, im)
        a, b = c.numerator, c.denominator
        if a == 0:
            return QVec.zeros(len(self))
        re = tuple(a * x for x in self.re) if a != 1 else self.re
        im = None
        if self.im is not None:
            im = tuple(a * x for x in self.im) if a != 1 else self.im
        return QVec.make(re, self.den * b, im)

    def hadamard(self, other: "QVec") -> "QVec":
        if len(self) != len(other):
            raise ValueError("length mismatch")
        den = self.den * other.den
        if self.is_real and other.is_real:
            return QVec.make(tuple(x * y for x, y in zip(self.re, other.re)), den)
        ar, ai = self.re, self._im()
        br, bi = other.re, other._im()
        re = tuple(a * c - b * d for a, b, c, d in zip(ar, ai, br, bi))
        im = tuple(a * d + b * c for a, b, c, d in zip(ar, ai, br, bi))
        return QVec.make(re, den, im)

    def dot(self, other: "QVec") -> Scalar:
        """Bilinear sum ``sum(self[i] * other[i])`` (no conjugation)."""
        if len(self) != len(other):
            raise ValueError("length mismatch")
        den = self.den * other.den
        if self.is_real and other.is_real:
            return Fraction(kernels.dot(self.re, other.re), den)
        ar, ai = self.re, self._im()
        br, bi = other.re, other._im()
        re = kernels.dot(ar, br) - kernels.dot(ai, bi)
        im = kernels.dot(ar, bi) + kernels.dot(ai, br)
        return make_scalar(Fraction(re, den), Fraction(im, den))

    def total(self) -> Scalar:
        re = Fraction(sum(self.re), self.den)
        if self.im is None:
            return re
        return make_scalar(re, Fraction(sum(self.im), self.den))

    def conj(self) -> "QVec":
        if self.im is None:
            return self
        return QVec(self.re, self.den, tuple(-x for x in self.im))

    def prefix_sums(self) -> "QVec":
        re = kernels.prefix_sums(self.re)
        im = None if self.im is None else kernels.prefix_sums(self.im)
        return QVec.make(re, self.den, im)

    @staticmethod
    def lincomb(terms: Sequence[tuple]) -> "QVec":
        """Exact ``sum(c * v)`` over ``(scalar, QVec)`` pairs of equal length."""
        terms = [(as_scalar(c), v) for c, v in terms]
        if not terms:
            raise ValueError("empty combination")
        n = len(terms[0][1])
        parts = []
        dens = []
        for c, v in terms:
            if len(v) != n:
                raise ValueError("length mismatch")
            if isinstance(c, GaussianRational):
                b = math.lcm(c.re.denominator, c.im.denominator)
                cr = c.re.numerator * (b // c.re.denominator)
                ci = c.im.numerator * (b // c.im.denominator)
            else:
                b, cr, ci = c.denominator, c.numerator, 0
            parts.append((cr, ci, v))
            dens.append(b * v.den)
        den = math.lcm(*dens)
        re_terms = []
        im_terms = []
        complex_out = False
        for (cr, ci, v), d in zip(parts, dens):
            k = den // d
            if cr:
                re_terms.append((k * cr, v.re))
                if v.im is not None:
                    im_terms.append((k * cr, v.im))
                    complex_out = True
            if ci:
                complex_out = True
                im_terms.append((k * ci, v.re))
                if v.im is not None:
                    re_terms.append((-k * ci, v.im))
        re = kernels.lincomb(re_terms, n)
        im = kernels.lincomb(im_terms, n) if complex_out else None
        return QVec.make(re, den, im)

    # -- magnitudes --------------------------------------------------------

    def max_abs2(self) -> Fraction:
        """Exact ``max |x_i|^2``."""
        if self.im is None:
            m = kernels.max_abs(self.re)
            return Fraction(m * m, self.den * self.den)
        m = max((x * x + y * y for x, y in zip(self.re, self.im)), default=0)
        return Fraction(m, self.den * self.den)

    def max_abs(self):
        """``max |x_i|``: exact for real vectors, float otherwise."""
        if self.im is None:
            return Fraction(kernels.max_abs(self.re), self.den)
        return math.sqrt(self.max_abs2())

    def abs_sum(self):
        """``sum |x_i|``: exact for real vectors, float otherwise."""
        if self.im is None:
            return Fraction(kernels.sum_abs(self.re), self.den)
        return math.fsum(math.hypot(x, y) for x, y in zip(self.re, self.im)) / self.den

    def weighted_root_mean(self, p, weight) -> float:
        """``(weight * sum |x_i|^p) ** (1/p)`` in floating point.

        ``weight`` may be an exact Fraction; it is applied after the entries
        are scaled by their maximum so large numerators cannot overflow.
        """
        p = float(p)
        if self.im is None:
            m, s = kernels.power_sum(self.re, p)
        else:
            m, s = kernels.power_sum_complex(self.re, self.im, p)
        if s == 0.0:
            return 0.0
        return (float(Fraction(m) / self.den) if isinstance(m, int) else m / self.den) * (
            s * float(weight)
        ) ** (1.0 / p)
