"""Finitely supported sequences and the prepend structure.

``gamma(c, a) = (c, a_0, a_1, ...)`` identifies ``F (+)~_p l^p`` with
``l^p`` under the unweighted norm ``(|c|^p + ||a||^p)^(1/p)``.  For a target
``delta: F (+)~_p V -> V`` the unique map satisfies

    theta(c, a_0, a_1, ...) = delta(c, theta(a_0, a_1, ...)),   theta(0) = 0.

Writing ``delta = [h | T]`` (head column ``h``, tail block ``T``) the map on
sequences of length ``n`` is the matrix ``Theta_n = [h | T Theta_{n-1}]``.
p = inf selects the c_0 case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from initial_integrals.dyadic import PNormValue
from initial_integrals.errors import AxiomViolation
from initial_integrals.exact import (
    INF,
    QVec,
    as_scalar,
    format_exponent,
    parse_exponent,
    scalar_abs,
    scalar_to_json,
)
from initial_integrals.generators import random_scalar, rng_for
from initial_integrals.universal import CONTRACTION_TOL, CheckReport, ContractionCertificate, NormSpec


@dataclass(frozen=True, eq=False)
class FiniteSeq:
    """``(a_0, ..., a_{n-1}, 0, 0, ...)``.

    Stored as given; equality and hashing use the canonical form with
    trailing zeros trimmed.
    """

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(as_scalar(c) for c in self.coeffs))

    def canonical(self) -> "FiniteSeq":
        c = self.coeffs
        k = len(c)
        while k and c[k - 1] == 0:
            k -= 1
        return self if k == len(c) else FiniteSeq(c[:k])

    def __eq__(self, other):
        if not isinstance(other, FiniteSeq):
            return NotImplemented
        return self.canonical().coeffs == other.canonical().coeffs

    def __hash__(self):
        return hash(self.canonical().coeffs)

    def __len__(self):
        return len(self.coeffs)

    def head(self):
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def tail(self) -> "FiniteSeq":
        return FiniteSeq(self.coeffs[1:])

    def to_json(self) -> dict:
        return {"coeffs": [scalar_to_json(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteSeq":
        if "coeffs" not in data:
            raise KeyError("coeffs")
        return cls(tuple(data["coeffs"]))


def seq_prepend(c, a: FiniteSeq) -> FiniteSeq:
    return FiniteSeq((as_scalar(c),) + a.coeffs)


def seq_norm(a: FiniteSeq, p) -> PNormValue:
    """Unweighted ``(sum |a_k|^p)^(1/p)``; ``max |a_k|`` for p = inf."""
    p = parse_exponent(p)
    if not a.coeffs:
        return PNormValue(p, Fraction(0))
    v = QVec.from_scalars(a.coeffs)
    if p == INF:
        return PNormValue(p, v.max_abs())
    if p == 1:
        return PNormValue(p, v.abs_sum())
    return PNormValue(p, v.weighted_root_mean(p, Fraction(1)))


# ---------------------------------------------------------------------------
# targets


@dataclass(frozen=True)
class SeqTarget:
    """``(V, delta)`` with ``V = F^dim`` and ``delta = [head | tail]``.

    ``head`` is a column of ``dim`` scalars, ``tail`` a ``dim x dim`` matrix.
    """

    dim: int
    p: Fraction | float
    head: tuple
    tail: tuple
    norm: NormSpec = NormSpec("sup")
    name: str = ""

    @property
    def delta(self) -> tuple:
        return tuple((self.head[i],) + tuple(self.tail[i]) for i in range(self.dim))

    def apply_delta(self, c, x: Sequence) -> tuple:
        c = as_scalar(c)
        return tuple(
            self.head[i] * c + sum((t * as_scalar(xj) for t, xj in zip(self.tail[i], x)), Fraction(0))
            for i in range(self.dim)
        )

    def vector_norm(self, x):
        return self.norm.norm(x if isinstance(x, QVec) else QVec.from_scalars(x))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "p": format_exponent(self.p),
            "delta": [[scalar_to_json(c) for c in row] for row in self.delta],
            "norm": self.norm.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict, *, check: bool = True) -> "SeqTarget":
        for key in ("p", "delta"):
            if key not in data:
                raise KeyError(key)
        t = make_seq_target(data["delta"], data["p"], NormSpec.from_json(data.get("norm", {"kind": "sup"})),
                            name=data.get("name", ""), check=check)
        if "dim" in data and int(data["dim"]) != t.dim:
            raise ValueError("dim does not match delta")
        return t


def make_seq_target(delta, p, norm: NormSpec | None = None, *, name: str = "", check: bool = True,
                    samples: int = 10_000, seed=0) -> SeqTarget:
    """Target from a dense ``dim x (1 + dim)`` matrix.  ``check`` enforces contractivity."""
    rows = [tuple(as_scalar(c) for c in r) for r in delta]
    d = len(rows)
    if d < 1 or any(len(r) != d + 1 for r in rows):
        raise ValueError(f"delta must be {d} x {d + 1}")
    t = SeqTarget(d, parse_exponent(p), tuple(r[0] for r in rows), tuple(r[1:] for r in rows),
                  norm or NormSpec.sup(), name)
    if check:
        cert = seq_contraction_certificate(t, samples=samples, seed=seed)
        if not cert.ok():
            raise AxiomViolation(
                "contraction",
                f"operator norm of delta is {cert.estimate} > 1 ({cert.method})",
                witness=cert.witness,
            )
    return t


def _dual_norm_pair(a, b, p):
    """``||(a, b)||_q`` with ``q`` conjugate to ``p``, exact for p in {1, inf}."""
    if p == 1:
        return max(a, b)
    if p == INF:
        return a + b
    pf = float(p)
    q = pf / (pf - 1.0)
    return (float(a) ** q + float(b) ** q) ** (1.0 / q)


def seq_contraction_certificate(target: SeqTarget, samples: int = 10_000, seed=0) -> ContractionCertificate:
    """Norm of ``delta`` on ``F (+)~_p V``.

    For scalar targets ``delta(c, x) = alpha c + beta x`` it is exactly
    ``||(alpha, beta)||_q``; with a sup norm on ``V`` the same holds row by
    row with ``beta`` replaced by the absolute row sum of the tail.  Other
    norms are sampled.
    """
    p = target.p
    if target.dim == 1 or target.norm.kind == "sup":
        best, row = None, 0
        for i in range(target.dim):
            a = scalar_abs(target.head[i])
            b = sum((scalar_abs(t) for t in target.tail[i]), Fraction(0))
            val = _dual_norm_pair(a, b, p)
            if best is None or val > best:
                best, row = val, i
        exact = isinstance(best, Fraction)
        return ContractionCertificate("exact" if exact else "closed-form", best, 0, (row,))
    rng = rng_for(seed)
    d = target.dim
    H = np.array([float(c) for c in target.head])
    T = np.array([[float(c) for c in r] for r in target.tail])
    C = rng.standard_normal(samples)
    X = rng.standard_normal((d, samples))
    nx = target.norm.norm_float(X)
    pf = float(p)
    den = np.maximum(np.abs(C), nx) if math.isinf(pf) else (np.abs(C) ** pf + nx**pf) ** (1.0 / pf)
    num = target.norm.norm_float(H[:, None] * C[None, :] + T @ X)
    ratio = num / den
    j = int(np.argmax(ratio))
    return ContractionCertificate("sampled", float(ratio[j]), samples, (float(C[j]), tuple(X[:, j].tolist())))


# ---------------------------------------------------------------------------
# the unique map


def compile_seq_theta(target: SeqTarget, length: int) -> tuple:
    """Rows of ``Theta_length``: ``dim`` exact vectors of ``length`` entries."""
    if length == 0:
        return tuple(() for _ in range(target.dim))
    cols = [tuple(target.head)]
    for _ in range(length - 1):
        prev = cols[-1]
        cols.append(tuple(
            sum((t * x for t, x in zip(target.tail[i], prev)), Fraction(0)) for i in range(target.dim)
        ))
    # column k of Theta_n is T^k h; Theta_n = [h | T Theta_{n-1}] is this list read left to right
    return tuple(tuple(col[i] for col in cols) for i in range(target.dim))


def seq_universal(target: SeqTarget, a: FiniteSeq) -> tuple:
    """``theta(a)`` for the unique map ``l^p -> V``; ``theta(empty) = 0``."""
    rows = compile_seq_theta(target, len(a))
    return tuple(sum((r * c for r, c in zip(row, a.coeffs)), Fraction(0)) for row in rows)


def fold_oracle(target: SeqTarget, a: FiniteSeq) -> tuple:
    """``delta(a_0, delta(a_1, ..., delta(a_n, 0)))`` evaluated directly."""
    x = (Fraction(0),) * target.dim
    for c in reversed(a.coeffs):
        x = target.apply_delta(c, x)
    return x


def verify_seq_target(target: SeqTarget, samples: int = 1000, seed=0, max_len: int = 12,
                      tol: float = CONTRACTION_TOL) -> CheckReport:
    """Square, fold agreement, zero padding and contraction on random sequences."""
    report = CheckReport(f"sequence:{target.name or 'target'}")
    rng = rng_for(seed)
    for _ in range(samples):
        n = int(rng.integers(0, max_len + 1))
        a = FiniteSeq(tuple(random_scalar(rng) for _ in range(n)))
        c = random_scalar(rng)
        th = seq_universal(target, a)
        lhs = seq_universal(target, seq_prepend(c, a))
        report.record("square", lhs == target.apply_delta(c, th), None if lhs == target.apply_delta(c, th)
                      else {"c": str(c), "a": a.to_json()})
        report.record("fold", th == fold_oracle(target, a), None)
        report.record("padding", seq_universal(target, FiniteSeq(a.coeffs + (0,))) == th, None)
        img = target.vector_norm(th) if th else Fraction(0)
        bound = seq_norm(a, target.p).value
        if isinstance(img, Fraction) and isinstance(bound, Fraction):
            ok = img <= bound
        else:
            ok = float(img) <= float(bound) + tol
        report.record("contraction", ok, None if ok else {"a": a.to_json()})
    return report


# ---------------------------------------------------------------------------
# shipped targets


def shipped_seq_targets() -> list:
    """The five scalar targets exercised by the test suite."""
    h = Fraction(1, 2)
    return [
        make_seq_target([[1, 0]], 2, name="head"),
        make_seq_target([[h, h]], 1, name="half-average-l1"),
        make_seq_target([[Fraction(3, 5), Fraction(4, 5)]], 2, name="pythagorean-l2"),
        make_seq_target([[h, h]], "inf", name="half-average-c0"),
        make_seq_target([[-1, 1]], 1, name="difference-l1"),
    ]


def shift_register_target() -> SeqTarget:
    """``delta(c, (x, y)) = (c, x)`` on ``F^2`` with sup norm (c_0 case)."""
    return make_seq_target([[1, 0, 0], [0, 1, 0]], "inf", name="shift-register")


__all__ = [
    "FiniteSeq",
    "SeqTarget",
    "compile_seq_theta",
    "fold_oracle",
    "make_seq_target",
    "seq_contraction_certificate",
    "seq_norm",
    "seq_prepend",
    "seq_universal",
    "shift_register_target",
    "shipped_seq_targets",
    "verify_seq_target",
]
