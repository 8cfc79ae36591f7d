"""Named targets and the maps they induce.

* integration: the unique map into ``(F, 1, (x + y)/2)``
* indefinite integral: the unique map into pointed continuous functions,
  computed both directly and through a finite-resolution node target
* inclusions ``L^r -> L^p``, the Hoelder pairing, and the block operator
  ``Gamma`` on operator spaces
* the p = inf world on Cantor space: cylinder functions and ``f o pi_n``
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from initial_integrals.dyadic import (
    DyadicStep,
    PNormValue,
    common_level,
    direct_sum_norm,
    integrate_exact,
    p_norm,
    pointwise_mul,
    split,
)
from initial_integrals.exact import (
    INF,
    QVec,
    as_scalar,
    parse_exponent,
    scalar_to_json,
)
from initial_integrals.generators import rng_for
from initial_integrals.universal import (
    AlgebraTarget,
    MorphismTable,
    NormSpec,
    apply_universal,
    compile_theta,
    make_target_sparse,
    mean_target,
)

# ---------------------------------------------------------------------------
# integration

_MEAN_CACHE: dict = {}


def mean_table(level: int) -> MorphismTable:
    """Compiled table for the mean target, grown on demand and cached."""
    table = _MEAN_CACHE.get("table")
    if table is None or table.max_level < level:
        table = compile_theta(mean_target(), max(level, 12))
        _MEAN_CACHE["table"] = table
    return table


def integrate(f: DyadicStep):
    """Integral over [0, 1], obtained from the universal map."""
    (value,) = apply_universal(mean_table(f.level), f)
    return value


def functional_equation_holds(table: MorphismTable, f: DyadicStep) -> bool:
    """``theta(f) = (theta(f_left) + theta(f_right)) / 2`` for a 1-dim table.

    ``f_left`` and ``f_right`` are the two halves of ``f`` stretched back to
    [0, 1].  The integral satisfies this; other functionals generally do not.
    """
    a, b = split(f)
    need = max(f.level, a.level)
    if need > table.max_level:
        raise ValueError("table too shallow for this step")
    (lhs,) = apply_universal(table, f)
    (x,) = apply_universal(table, a)
    (y,) = apply_universal(table, b)
    return lhs == (x + y) / 2


# ---------------------------------------------------------------------------
# piecewise linear functions vanishing at 0


@dataclass(frozen=True, eq=False)
class PiecewiseLinear:
    """``F`` given by its values at ``i / 2**level``, linear in between, ``F(0) = 0``."""

    level: int
    values: QVec

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("negative level")
        if len(self.values) != (1 << self.level) + 1:
            raise ValueError(f"level {self.level} needs {(1 << self.level) + 1} node values")
        if self.values[0] != 0:
            raise ValueError("F(0) must be 0")

    @classmethod
    def from_values(cls, values, level: int | None = None) -> "PiecewiseLinear":
        v = QVec.from_scalars(values)
        n = len(v) - 1
        if n < 1 or n & (n - 1):
            raise ValueError(f"{len(v)} node values is not 2**n + 1")
        found = n.bit_length() - 1
        if level is not None and level != found:
            raise ValueError(f"level {level} does not match {len(v)} node values")
        return cls(found, v)

    @classmethod
    def identity(cls, level: int = 0) -> "PiecewiseLinear":
        m = 1 << level
        return cls(level, QVec.make(range(m + 1), m))

    @classmethod
    def zero(cls, level: int = 0) -> "PiecewiseLinear":
        return cls(level, QVec.zeros((1 << level) + 1))

    def refine(self, m: int) -> "PiecewiseLinear":
        if m < self.level:
            raise ValueError("cannot coarsen by refine")
        v = self.values
        for _ in range(m - self.level):
            mids = (v[:-1] + v[1:]).scale(Fraction(1, 2))
            den = math.lcm(v.den, mids.den)
            (vr, vi), (mr, mi) = v.rescaled(den), mids.rescaled(den)
            # interleave nodes and midpoints
            re = [0] * (2 * len(v) - 1)
            re[0::2], re[1::2] = vr, mr
            im = None
            if not (v.is_real and mids.is_real):
                im = [0] * len(re)
                im[0::2], im[1::2] = vi, mi
            v = QVec.make(re, den, im)
        return PiecewiseLinear(m, v)

    def canonical(self) -> "PiecewiseLinear":
        """Coarsest level on which the function is still piecewise linear."""
        f = self
        while f.level > 0:
            v = f.values
            even = v[0::2]
            mids = (even[:-1] + even[1:]).scale(Fraction(1, 2))
            if mids != v[1::2]:
                break
            f = PiecewiseLinear(f.level - 1, even)
        return f

    def __eq__(self, other):
        if not isinstance(other, PiecewiseLinear):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.level == b.level and a.values == b.values

    def __hash__(self):
        c = self.canonical()
        return hash((c.level, c.values))

    def __repr__(self):
        return f"PiecewiseLinear(level={self.level}, values={[str(x) for x in self.values.scalars()]})"

    def node(self, k: int, level: int):
        """``F(k / 2**level)`` for ``level <= self.level`` or by interpolation."""
        if level <= self.level:
            return self.values[k << (self.level - level)]
        return self.refine(level).values[k]

    def sup_norm(self):
        return self.values.max_abs()

    def to_json(self) -> dict:
        return {"level": self.level, "values": [scalar_to_json(c) for c in self.values.scalars()]}

    @classmethod
    def from_json(cls, data: dict) -> "PiecewiseLinear":
        if "values" not in data:
            raise KeyError("values")
        return cls.from_values(data["values"], data.get("level"))


def indefinite_integral(f: DyadicStep) -> PiecewiseLinear:
    """``x -> integral_0^x f`` by cumulative sums at the nodes ``i / 2**n``."""
    return PiecewiseLinear(f.level, f.values.prefix_sums().scale(Fraction(1, 1 << f.level)))


def recover_function(F: PiecewiseLinear) -> DyadicStep:
    """Slopes ``2**n (F_{i+1} - F_i)``: the inverse of :func:`indefinite_integral`."""
    v = F.values
    return DyadicStep(F.level, (v[1:] - v[:-1]).scale(1 << F.level))


def kappa(F: PiecewiseLinear, G: PiecewiseLinear) -> PiecewiseLinear:
    """``x -> F(2x)/2`` on [0, 1/2] and ``(F(1) + G(2x - 1))/2`` on [1/2, 1]."""
    n = max(F.level, G.level)
    fv = F.refine(n).values
    gv = G.refine(n).values
    half = Fraction(1, 2)
    left = fv.scale(half)
    end = fv[len(fv) - 1]
    right = (gv[1:] + QVec.constant(end, len(gv) - 1)).scale(half)
    return PiecewiseLinear(n + 1, left.concat(right))


def kappa_target(resolution: int) -> AlgebraTarget:
    """``kappa`` on functions sampled at ``k / 2**N``, ``k = 1 .. 2**N``.

    The value of ``kappa(F, G)`` at a level-``N`` node only involves ``F``
    and ``G`` at level-``N`` nodes, so ``kappa`` descends to these node
    vectors.  Basepoint is the identity ``x -> x``; the induced map sends a
    step of level ``<= N`` to its indefinite integral sampled at the nodes.
    """
    n = 1 << resolution
    h = Fraction(1, 2)
    left, right = [], []
    for k in range(1, n + 1):
        if 2 * k <= n:
            left.append(((2 * k - 1, h),))
            right.append(())
        else:
            left.append(((n - 1, h),))
            right.append(((2 * k - n - 1, h),))
    return make_target_sparse(QVec.make(range(1, n + 1), n), left, right, 1, NormSpec.sup(),
                              name=f"kappa-{resolution}")


def indefinite_via_universal(table: MorphismTable, f: DyadicStep) -> PiecewiseLinear:
    """Indefinite integral read off a compiled :func:`kappa_target` table."""
    nodes = apply_universal(table, f)
    return PiecewiseLinear.from_values((0,) + tuple(nodes))


# ---------------------------------------------------------------------------
# inclusions and pairing


class InclusionResult(NamedTuple):
    step: DyadicStep
    p_norm: PNormValue
    r_norm: PNormValue


def _norm_le(a: PNormValue, b: PNormValue, rel: float = 1e-12) -> bool:
    x, y = a.value, b.value
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x <= y
    return float(x) <= float(y) * (1 + rel) + rel


def inclusion_map(f: DyadicStep, r, p) -> InclusionResult:
    """Identity ``L^r -> L^p`` for ``p <= r``, with both norms certified."""
    r, p = parse_exponent(r), parse_exponent(p)
    if p > r:
        raise ValueError("wrong direction: inclusion goes r into p")
    np_, nr = p_norm(f, p), p_norm(f, r)
    if not _norm_le(np_, nr):
        raise ArithmeticError(f"power-mean inequality failed: {np_.value} > {nr.value}")
    return InclusionResult(f, np_, nr)


def conjugate_ok(p, q) -> bool:
    p, q = parse_exponent(p), parse_exponent(q)
    if p == INF or q == INF:
        return False
    return 1 / p + 1 / q == 1


def pairing(f: DyadicStep, g: DyadicStep, p, q):
    """``integral f g``; needs exact conjugate exponents ``1/p + 1/q = 1``."""
    if not conjugate_ok(p, q):
        raise ValueError("non-conjugate exponents")
    return integrate(pointwise_mul(f, g))


def holder_bound(f: DyadicStep, g: DyadicStep, p, q) -> float:
    return float(p_norm(f, p).value) * float(p_norm(g, q).value)


# ---------------------------------------------------------------------------
# operators E_n -> E_n


def _as_matrix(phi):
    rows = [tuple(as_scalar(c) for c in r) for r in phi]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("operator must be a non-empty square matrix")
    return rows


def gamma_hom(phi1, phi2, level: int) -> tuple:
    """``gamma o (phi1 (+) phi2) o gamma^-1``: the block diagonal matrix."""
    a, b = _as_matrix(phi1), _as_matrix(phi2)
    m = 1 << level
    if len(a) != m or len(b) != m:
        raise ValueError(f"operators at level {level} must be {m} x {m}")
    z = (Fraction(0),) * m
    top = tuple(r + z for r in a)
    bot = tuple(z + r for r in b)
    return top + bot


def apply_operator(phi, f: DyadicStep) -> DyadicStep:
    rows = _as_matrix(phi)
    if len(rows) != len(f):
        raise ValueError("operator and step have different levels")
    vals = f.coeffs
    return DyadicStep.from_coeffs([sum((a * b for a, b in zip(r, vals)), Fraction(0)) for r in rows])


def operator_norm_bound(phi, q) -> PNormValue:
    """Upper bound on ``||phi||`` from ``L^q`` to ``L^1`` (normalised level norms).

    Hoelder gives ``||phi g||_1 <= ||c||_p ||g||_q`` where ``c_j`` is the
    absolute sum of column ``j``.
    """
    rows = _as_matrix(phi)
    cols = [sum((abs(complex(r[j])) if not isinstance(r[j], Fraction) else abs(r[j]) for r in rows), Fraction(0))
            for j in range(len(rows))]
    q = parse_exponent(q)
    p = INF if q == 1 else (1 if q == INF else q / (q - 1))
    return p_norm(DyadicStep.from_coeffs(cols), p)


def operator_norm_estimate(phi, q, samples: int = 2000, seed=0) -> float:
    """Sampled lower estimate of ``||phi||_{q -> 1}``; includes the basis vectors."""
    M = np.array([[complex(c) for c in r] for r in _as_matrix(phi)])
    if not np.iscomplexobj(M) or not np.abs(M.imag).any():
        M = M.real
    m = M.shape[0]
    rng = rng_for(seed)
    G = np.concatenate([np.eye(m), rng.standard_normal((m, samples))], axis=1)
    q = parse_exponent(q)
    A = np.abs(G)
    gq = A.max(axis=0) if q == INF else ((A ** float(q)).mean(axis=0)) ** (1.0 / float(q))
    out = np.abs(M @ G).mean(axis=0)
    return float((out / gq).max())


def gamma_norm_chain(phi1, phi2, level: int, q, samples: int = 2000, seed=0) -> tuple:
    """``(estimate of ||Gamma||, bound from the inputs)``; the first must not exceed the second."""
    g = gamma_hom(phi1, phi2, level)
    est = operator_norm_estimate(g, q, samples, seed)
    q = parse_exponent(q)
    p = INF if q == 1 else (1 if q == INF else q / (q - 1))
    bound = direct_sum_norm(operator_norm_bound(phi1, q), operator_norm_bound(phi2, q), p)
    return est, float(bound.value)


# ---------------------------------------------------------------------------
# Cantor space


@dataclass(frozen=True)
class CylinderFunction:
    """Function of the first ``level`` bits of ``x in {0,1}^N``.

    Coefficient ``i`` is the value on the cylinder whose bits spell ``i`` in
    binary, most significant bit first.
    """

    level: int
    values: QVec

    def __post_init__(self):
        if self.level < 0 or len(self.values) != 1 << self.level:
            raise ValueError(f"level {self.level} needs {1 << max(self.level, 0)} values")

    @classmethod
    def from_coeffs(cls, coeffs) -> "CylinderFunction":
        s = DyadicStep.from_coeffs(coeffs)
        return cls(s.level, s.values)

    def sup_norm(self):
        return self.values.max_abs()

    def to_json(self) -> dict:
        return {"level": self.level, "coeffs": [scalar_to_json(c) for c in self.values.scalars()]}

    @classmethod
    def from_json(cls, data: dict) -> "CylinderFunction":
        s = DyadicStep.from_json(data)
        return cls(s.level, s.values)


def cantor_project(f: CylinderFunction, n: int) -> CylinderFunction:
    """``f o pi_n``: bits past position ``n`` are set to 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n >= f.level:
        return f
    block = 1 << (f.level - n)
    firsts = f.values[::block]
    return CylinderFunction(f.level, firsts.repeat_each(block))


def cantor_to_interval(f: CylinderFunction) -> DyadicStep:
    """Same coefficients read as a step function on [0, 1]."""
    return DyadicStep(f.level, f.values)


def sup_distance(f: CylinderFunction, g: CylinderFunction):
    a, b = common_level(DyadicStep(f.level, f.values), DyadicStep(g.level, g.values))
    return (a.values - b.values).max_abs()


def lipschitz_cylinder(rng, level: int, lipschitz, magnitude: int = 16) -> CylinderFunction:
    """Random cylinder function that is ``L``-Lipschitz for ``d(x, y) = 2**-k``.

    ``f = c + sum_k delta_k`` where ``delta_k`` depends on bits ``0..k``,
    vanishes when bit ``k`` is 0 and is bounded by ``L 2**-(k+2)``; hence
    ``|f - f o pi_n| <= L 2**-(n+1)``.
    """
    L = Fraction(lipschitz)
    m = 1 << level
    c = Fraction(int(rng.integers(-magnitude, magnitude + 1)), magnitude)
    vals = [c] * m
    for k in range(level):
        # one increment per prefix of length k+1 ending in bit 1
        u = rng.integers(-magnitude, magnitude + 1, size=1 << k).tolist()
        block = 1 << (level - k - 1)
        for prefix in range(1 << k):
            d = L * Fraction(u[prefix], magnitude) / (1 << (k + 2))
            start = (2 * prefix + 1) * block
            for i in range(start, start + block):
                vals[i] += d
    return CylinderFunction(level, QVec.from_scalars(vals))


__all__ = [
    "CylinderFunction",
    "InclusionResult",
    "PiecewiseLinear",
    "apply_operator",
    "cantor_project",
    "cantor_to_interval",
    "conjugate_ok",
    "functional_equation_holds",
    "gamma_hom",
    "gamma_norm_chain",
    "holder_bound",
    "inclusion_map",
    "indefinite_integral",
    "indefinite_via_universal",
    "integrate",
    "integrate_exact",
    "kappa",
    "kappa_target",
    "lipschitz_cylinder",
    "mean_table",
    "operator_norm_bound",
    "operator_norm_estimate",
    "pairing",
    "recover_function",
    "sup_distance",
]
