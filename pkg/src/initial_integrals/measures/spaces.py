"""Finite measure spaces, measure-preserving partial maps, simple functions.

Every subset of a finite space is measurable.  Functions are stored as
tuples aligned with ``space.points``; equality almost everywhere means
equality at the points of positive weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from initial_integrals.dyadic import PNormValue
from initial_integrals.exact import (
    INF,
    QVec,
    abs2,
    as_scalar,
    conj,
    parse_exponent,
    scalar_abs,
    scalar_to_json,
)


@dataclass(frozen=True)
class FiniteMeasureSpace:
    points: tuple = ()
    weights: tuple = ()

    def __post_init__(self):
        pts = tuple(str(p) for p in self.points)
        ws = tuple(Fraction(w) for w in self.weights)
        if len(pts) != len(ws):
            raise ValueError("points and weights differ in length")
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate point ids")
        if any(w < 0 for w in ws):
            raise ValueError("weights must be non-negative")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", ws)

    @classmethod
    def from_weights(cls, weights: Mapping) -> "FiniteMeasureSpace":
        return cls(tuple(weights), tuple(as_scalar(w) for w in weights.values()))

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def __len__(self):
        return len(self.points)

    def index(self, point) -> int:
        return self.points.index(point)

    def weight(self, point) -> Fraction:
        return self.weights[self.index(point)]

    def measure(self, subset: Iterable) -> Fraction:
        s = set(subset)
        return sum((w for p, w in zip(self.points, self.weights) if p in s), Fraction(0))

    def subspace(self, subset: Iterable) -> "FiniteMeasureSpace":
        """Restriction to ``subset`` (kept in the order of ``points``)."""
        s = set(subset)
        unknown = s - set(self.points)
        if unknown:
            raise ValueError(f"points {sorted(unknown)} are not in the space")
        pw = [(p, w) for p, w in zip(self.points, self.weights) if p in s]
        return FiniteMeasureSpace(tuple(p for p, _ in pw), tuple(w for _, w in pw))

    def positive(self) -> tuple:
        return tuple(w > 0 for w in self.weights)

    def to_json(self) -> dict:
        return {"points": list(self.points), "weights": {p: str(w) for p, w in zip(self.points, self.weights)}}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteMeasureSpace":
        if "points" not in data:
            raise KeyError("points")
        if "weights" not in data:
            raise KeyError("weights")
        pts = [str(p) for p in data["points"]]
        w = data["weights"]
        return cls(tuple(pts), tuple(as_scalar(w[p]) for p in pts))


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class PartialMap:
    """``(A, s): X -> Y`` with ``A`` a subset of ``X`` and ``s: A -> Y``.

    ``pairs`` lists ``(a, s(a))`` in the order of ``source.points``.
    Construction checks measure preservation unless ``check=False`` is
    passed to :meth:`make`.
    """

    source: FiniteMeasureSpace
    target: FiniteMeasureSpace
    pairs: tuple

    @classmethod
    def make(cls, source, target, mapping: Mapping, check: bool = True) -> "PartialMap":
        src = set(source.points)
        tgt = set(target.points)
        for a, y in mapping.items():
            if a not in src:
                raise ValueError(f"domain point {a!r} not in source")
            if y not in tgt:
                raise ValueError(f"image point {y!r} not in target")
        pairs = tuple((a, mapping[a]) for a in source.points if a in mapping)
        f = cls(source, target, pairs)
        if check and not f.is_measure_preserving():
            raise ValueError("map is not measure-preserving")
        return f

    @classmethod
    def identity(cls, space) -> "PartialMap":
        return cls(space, space, tuple((p, p) for p in space.points))

    @property
    def domain(self) -> tuple:
        return tuple(a for a, _ in self.pairs)

    @property
    def mapping(self) -> dict:
        return dict(self.pairs)

    @property
    def is_total(self) -> bool:
        return len(self.pairs) == len(self.source)

    def fibre_weights(self) -> dict:
        out = {y: Fraction(0) for y in self.target.points}
        w = dict(zip(self.source.points, self.source.weights))
        for a, y in self.pairs:
            out[y] += w[a]
        return out

    def is_measure_preserving(self) -> bool:
        fw = self.fibre_weights()
        return all(fw[y] == w for y, w in zip(self.target.points, self.target.weights))

    def preimage(self, subset: Iterable) -> tuple:
        s = set(subset)
        return tuple(a for a, y in self.pairs if y in s)

    def to_json(self) -> dict:
        return {"domain": list(self.domain), "map": dict(self.pairs)}

    @classmethod
    def from_json(cls, data: dict, source, target) -> "PartialMap":
        if "map" not in data:
            raise KeyError("map")
        m = {str(k): str(v) for k, v in data["map"].items()}
        if "domain" in data and set(map(str, data["domain"])) != set(m):
            raise ValueError("domain does not match map keys")
        return cls.make(source, target, m)


def compose_partial(f: PartialMap, g: PartialMap) -> PartialMap:
    """``g o f``: domain is the ``f``-preimage of ``g``'s domain."""
    if f.target != g.source:
        raise ValueError("space mismatch: f.target != g.source")
    gm = g.mapping
    return PartialMap(f.source, g.target, tuple((a, gm[y]) for a, y in f.pairs if y in gm))


def is_embedding(f: PartialMap) -> bool:
    """Whether ``f`` is the partial-map form ``(iY, i^-1)`` of an embedding.

    That is, ``f`` maps its domain bijectively onto the target with equal
    weights at corresponding points.
    """
    ys = [y for _, y in f.pairs]
    if len(set(ys)) != len(ys) or set(ys) != set(f.target.points):
        return False
    ws = dict(zip(f.source.points, f.source.weights))
    wt = dict(zip(f.target.points, f.target.weights))
    return all(ws[a] == wt[y] for a, y in f.pairs)


@dataclass(frozen=True)
class Embedding:
    """Injective, weight-preserving total map ``i: Y -> X``."""

    source: FiniteMeasureSpace
    target: FiniteMeasureSpace
    pairs: tuple

    @classmethod
    def make(cls, source, target, mapping: Mapping) -> "Embedding":
        if set(mapping) != set(source.points):
            raise ValueError("an embedding must be total")
        imgs = list(mapping.values())
        if len(set(imgs)) != len(imgs):
            raise ValueError("an embedding must be injective")
        for y, x in mapping.items():
            if source.weight(y) != target.weight(x):
                raise ValueError(f"weight mismatch at {y!r}")
        return cls(source, target, tuple((y, mapping[y]) for y in source.points))

    @classmethod
    def inclusion(cls, space, subset) -> "Embedding":
        sub = space.subspace(subset)
        return cls(sub, space, tuple((p, p) for p in sub.points))

    @property
    def mapping(self) -> dict:
        return dict(self.pairs)

    @property
    def image(self) -> tuple:
        return tuple(x for _, x in self.pairs)

    def as_partial(self) -> PartialMap:
        """The morphism ``(iY, i^-1): X -> Y`` of the partial-map category."""
        inv = {x: y for y, x in self.pairs}
        return PartialMap(self.target, self.source, tuple((x, inv[x]) for x in self.target.points if x in inv))

    def then(self, outer: "Embedding") -> "Embedding":
        """``outer o self``."""
        if self.target != outer.source:
            raise ValueError("space mismatch")
        om = outer.mapping
        return Embedding(self.source, outer.target, tuple((y, om[x]) for y, x in self.pairs))


def restrict_to_domain(f: PartialMap) -> tuple:
    """``(A, s) = F(i_A) o F(s_A)``: returns the inclusion ``A -> X`` and total ``s_A``."""
    incl = Embedding.inclusion(f.source, f.domain)
    s_a = PartialMap(incl.source, f.target, f.pairs)
    return incl, s_a


# ---------------------------------------------------------------------------
# simple functions and measures


@dataclass(frozen=True)
class SimpleFn:
    space: FiniteMeasureSpace
    values: tuple

    def __post_init__(self):
        vals = tuple(as_scalar(v) for v in self.values)
        if len(vals) != len(self.space):
            raise ValueError("one value per point is required")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_map(cls, space, values: Mapping) -> "SimpleFn":
        missing = [p for p in space.points if p not in values]
        if missing:
            raise ValueError(f"no value for points {missing}")
        return cls(space, tuple(values[p] for p in space.points))

    @classmethod
    def constant(cls, space, c=1) -> "SimpleFn":
        return cls(space, (as_scalar(c),) * len(space))

    @classmethod
    def indicator(cls, space, subset) -> "SimpleFn":
        s = set(subset)
        return cls(space, tuple(Fraction(1 if p in s else 0) for p in space.points))

    def __add__(self, other):
        _same_space(self, other)
        return SimpleFn(self.space, tuple(a + b for a, b in zip(self.values, other.values)))

    def scale(self, c) -> "SimpleFn":
        c = as_scalar(c)
        return SimpleFn(self.space, tuple(c * v for v in self.values))

    def fibres(self) -> dict:
        """``c -> f^{-1}(c)`` in order of first appearance."""
        out: dict = {}
        for p, v in zip(self.space.points, self.values):
            out.setdefault(v, []).append(p)
        return {c: tuple(ps) for c, ps in out.items()}

    def ae_equal(self, other) -> bool:
        _same_space(self, other)
        return all(a == b for a, b, w in zip(self.values, other.values, self.space.weights) if w > 0)

    def to_json(self) -> dict:
        return {"space": self.space.to_json(),
                "values": {p: scalar_to_json(v) for p, v in zip(self.space.points, self.values)}}

    @classmethod
    def from_json(cls, data: dict) -> "SimpleFn":
        if "space" not in data:
            raise KeyError("space")
        if "values" not in data:
            raise KeyError("values")
        space = FiniteMeasureSpace.from_json(data["space"])
        vals = data["values"]
        if isinstance(vals, list):
            return cls(space, tuple(vals))
        return cls.from_map(space, vals)


@dataclass(frozen=True)
class SignedMeasure:
    """Atom masses on a finite space (complex masses allowed)."""

    space: FiniteMeasureSpace
    mass: tuple

    def tv_norm(self):
        return _abs_total(self.mass)

    def to_json(self) -> dict:
        return {"space": self.space.to_json(),
                "mass": {p: scalar_to_json(m) for p, m in zip(self.space.points, self.mass)},
                "total_variation": str(self.tv_norm()) if isinstance(self.tv_norm(), Fraction)
                else format(self.tv_norm(), ".17g")}


def _same_space(f, g):
    if f.space != g.space:
        raise ValueError("space mismatch")


def _abs_total(values):
    if not values:
        return Fraction(0)
    return QVec.from_scalars(values).abs_sum()


def lp_pullback(f: PartialMap, g: SimpleFn) -> SimpleFn:
    """``g o s`` on the domain ``A``, extended by zero to the rest of ``X``."""
    if g.space != f.target:
        raise ValueError("g does not live on the target of f")
    gv = dict(zip(g.space.points, g.values))
    m = f.mapping
    return SimpleFn(f.source, tuple(gv[m[x]] if x in m else Fraction(0) for x in f.source.points))


def extend_by_zero(i: Embedding, g: SimpleFn) -> SimpleFn:
    """``g^X`` for ``i: Y -> X``."""
    return lp_pullback(i.as_partial(), g)


def sp_norm(f: SimpleFn, p) -> PNormValue:
    """``(sum |f(x)|^p w(x))^(1/p)``; for p = inf the max over positive-weight points."""
    p = parse_exponent(p)
    pts = [(v, w) for v, w in zip(f.values, f.space.weights) if w > 0]
    if p == INF:
        return PNormValue(p, max((scalar_abs(v) for v, _ in pts), default=Fraction(0)))
    if p == 1:
        if all(isinstance(v, Fraction) for v, _ in pts):
            return PNormValue(p, sum((abs(v) * w for v, w in pts), Fraction(0)))
        return PNormValue(p, math.fsum(abs(complex(v)) * float(w) for v, w in pts))
    if p == 2:
        return PNormValue(p, math.sqrt(sp_norm_sq(f)))
    pf = float(p)
    big = max((abs(complex(v)) for v, _ in pts), default=0.0)
    if big == 0.0:
        return PNormValue(p, 0.0)
    return PNormValue(p, big * math.fsum(float(w) * (abs(complex(v)) / big) ** pf for v, w in pts) ** (1 / pf))


def sp_norm_sq(f: SimpleFn) -> Fraction:
    """``||f||_2^2`` exactly."""
    return sum((abs2(v) * w for v, w in zip(f.values, f.space.weights)), Fraction(0))


def integrate_measure(f: SimpleFn):
    """``sum f(x) w(x)``."""
    return sum((v * w for v, w in zip(f.values, f.space.weights)), Fraction(0))


def density_measure(f: SimpleFn) -> SignedMeasure:
    """``f mu``: mass ``f(x) w(x)`` at ``x``."""
    return SignedMeasure(f.space, tuple(v * w for v, w in zip(f.values, f.space.weights)))


def inner_product(f: SimpleFn, g: SimpleFn):
    """``sum f(x) conj(g(x)) w(x)``."""
    _same_space(f, g)
    return sum((a * conj(b) * w for a, b, w in zip(f.values, g.values, f.space.weights)), Fraction(0))


__all__ = [
    "Embedding",
    "FiniteMeasureSpace",
    "PartialMap",
    "SignedMeasure",
    "SimpleFn",
    "compose_partial",
    "density_measure",
    "extend_by_zero",
    "inner_product",
    "integrate_measure",
    "is_embedding",
    "lp_pullback",
    "restrict_to_domain",
    "sp_norm",
    "sp_norm_sq",
]
