"""Compile the unique structure-preserving map out of the dyadic step space.

A target is a finite-dimensional normed space ``V`` with a basepoint ``v``
(``||v|| <= 1``) and a linear contraction ``delta: V (+)_p V -> V`` fixing
``(v, v)``.  The unique map ``theta`` from the step functions is built level
by level: ``theta_0(1) = v`` and

    theta_{n+1}(f) = delta(theta_n(left half of f), theta_n(right half of f)).

On level ``n`` the map is a ``dim x 2**n`` matrix whose rows are stored as
exact :class:`~initial_integrals.exact.QVec` objects.  Writing ``delta`` as
the block matrix ``[L | R]`` gives ``theta_{n+1} = [L theta_n | R theta_n]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from initial_integrals.dyadic import (
    DyadicStep,
    LevelError,
    direct_sum_norm,
    juxtapose,
    p_norm,
    refine,
    split,
)
from initial_integrals.errors import AxiomViolation
from initial_integrals.exact import (
    INF,
    GaussianRational,
    QVec,
    as_scalar,
    format_exponent,
    parse_exponent,
    scalar_abs,
    scalar_to_json,
)
from initial_integrals.generators import random_step, rng_for

CONTRACTION_TOL = 1e-9
DEFAULT_CERT_SAMPLES = 10_000


# ---------------------------------------------------------------------------
# norms on the target space


@dataclass(frozen=True)
class NormSpec:
    """Norm on ``F^d``.

    kinds: ``sup`` (max modulus), ``lp`` (``(sum w_i |x_i|^p)^(1/p)``, with
    optional weights), ``euclidean``, and ``table`` (``max_k |phi_k . x|``
    over a user table of functionals, i.e. sup over a sample set).
    """

    kind: str = "sup"
    p: Fraction | float | None = None
    weights: tuple | None = None
    functionals: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("sup", "lp", "euclidean", "table"):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "lp" and self.p is None:
            raise ValueError("lp norm needs an exponent")
        if self.kind == "table" and not self.functionals:
            raise ValueError("table norm needs functionals")

    @classmethod
    def sup(cls):
        return cls("sup")

    @classmethod
    def lp(cls, p, weights=None):
        w = None if weights is None else tuple(Fraction(x) for x in weights)
        return cls("lp", parse_exponent(p), w)

    @classmethod
    def table(cls, functionals):
        return cls("table", functionals=tuple(QVec.from_scalars(r) for r in functionals))

    def _exponent(self):
        if self.kind == "euclidean":
            return Fraction(2)
        if self.kind == "lp":
            return self.p
        return INF

    def norm(self, x: QVec):
        """Exact value where possible (real data, sup/table/l1), else float."""
        if self.kind == "table":
            vals = [abs(phi.dot(x)) for phi in self.functionals]
            return max(vals, default=Fraction(0))
        p = self._exponent()
        w = self.weights
        if p == INF:
            return x.max_abs()
        if p == 1 and w is None:
            return x.abs_sum()
        xs = x.scalars()
        if w is None:
            w = (1,) * len(xs)
        if p == 1:
            return sum(Fraction(wi) * scalar_abs(c) for wi, c in zip(w, xs))
        pf = float(p)
        return math.fsum(float(wi) * abs(complex(c)) ** pf for wi, c in zip(w, xs)) ** (1.0 / pf)

    def norm_float(self, X: np.ndarray) -> np.ndarray:
        """Column-wise norms of a float matrix (one vector per column)."""
        if self.kind == "table":
            F = np.array([[complex(c) for c in phi.scalars()] for phi in self.functionals])
            if not np.iscomplexobj(X):
                F = F.real
            return np.abs(F @ X).max(axis=0)
        p = self._exponent()
        A = np.abs(X)
        if p == INF:
            return A.max(axis=0)
        w = np.ones(X.shape[0]) if self.weights is None else np.array([float(x) for x in self.weights])
        pf = float(p)
        return (w[:, None] * A**pf).sum(axis=0) ** (1.0 / pf)

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "lp":
            out["p"] = format_exponent(self.p)
            if self.weights is not None:
                out["weights"] = [str(w) for w in self.weights]
        if self.kind == "table":
            out["functionals"] = [[scalar_to_json(c) for c in phi.scalars()] for phi in self.functionals]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "NormSpec":
        kind = data.get("kind", "sup")
        if kind == "lp":
            return cls.lp(data["p"], data.get("weights"))
        if kind == "table":
            return cls.table(data["functionals"])
        return cls(kind)


# ---------------------------------------------------------------------------
# targets


@dataclass(frozen=True)
class ContractionCertificate:
    """Operator-norm estimate for a structure map.

    ``method`` is ``"exact"`` (closed form in exact arithmetic),
    ``"closed-form"`` (closed form evaluated in floating point) or
    ``"sampled"`` (maximum ratio over random directions; a lower bound).
    """

    method: str
    estimate: Fraction | float
    samples: int = 0
    witness: tuple | None = None

    def ok(self, tol: float = CONTRACTION_TOL) -> bool:
        if isinstance(self.estimate, Fraction):
            return self.estimate <= 1
        return self.estimate <= 1 + tol


@dataclass(frozen=True)
class AlgebraTarget:
    """Object ``(V, v, delta)`` with ``V = F^dim``.

    ``left[i]`` and ``right[i]`` list the nonzero ``(column, coefficient)``
    entries of row ``i`` of the two blocks of ``delta``.
    """

    dim: int
    p: Fraction | float
    basepoint: QVec
    left: tuple
    right: tuple
    norm: NormSpec = field(default_factory=NormSpec.sup)
    name: str = ""
    bounded: bool = False
    certificate: ContractionCertificate | None = field(default=None, compare=False)

    @property
    def delta(self) -> tuple:
        """Dense ``dim x 2*dim`` matrix of ``delta``."""
        d = self.dim
        rows = []
        for i in range(d):
            row = [Fraction(0)] * (2 * d)
            for j, c in self.left[i]:
                row[j] = c
            for j, c in self.right[i]:
                row[d + j] = c
            rows.append(tuple(row))
        return tuple(rows)

    @property
    def is_real(self) -> bool:
        return self.basepoint.is_real and not any(
            isinstance(c, GaussianRational) for rows in (self.left, self.right) for r in rows for _, c in r
        )

    def apply_delta(self, x: Sequence, y: Sequence) -> tuple:
        """``delta(x, y)`` in exact arithmetic."""
        x = [as_scalar(c) for c in x]
        y = [as_scalar(c) for c in y]
        out = []
        for i in range(self.dim):
            s = Fraction(0)
            for j, c in self.left[i]:
                s = s + c * x[j]
            for j, c in self.right[i]:
                s = s + c * y[j]
            out.append(s)
        return tuple(out)

    def vector_norm(self, x):
        if not isinstance(x, QVec):
            x = QVec.from_scalars(x)
        return self.norm.norm(x)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "p": format_exponent(self.p),
            "basepoint": [scalar_to_json(c) for c in self.basepoint.scalars()],
            "delta": [[scalar_to_json(c) for c in row] for row in self.delta],
            "norm": self.norm.to_json(),
            "bounded": self.bounded,
        }

    @classmethod
    def from_json(cls, data: dict, *, check: bool = True, samples: int = DEFAULT_CERT_SAMPLES, seed=0):
        for key in ("dim", "p", "basepoint", "delta"):
            if key not in data:
                raise KeyError(key)
        return make_target(
            data["basepoint"],
            data["delta"],
            data["p"],
            NormSpec.from_json(data.get("norm", {"kind": "sup"})),
            name=data.get("name", ""),
            bounded=bool(data.get("bounded", False)),
            check=check,
            samples=samples,
            seed=seed,
        )


def _sparse_rows(rows, offset, width):
    out = []
    for row in rows:
        out.append(tuple((j, as_scalar(row[offset + j])) for j in range(width) if as_scalar(row[offset + j]) != 0))
    return tuple(out)


def make_target(
    basepoint,
    delta,
    p,
    norm: NormSpec | None = None,
    *,
    name: str = "",
    bounded: bool = False,
    check: bool = True,
    samples: int = DEFAULT_CERT_SAMPLES,
    seed=0,
) -> AlgebraTarget:
    """Build a target from a dense ``dim x 2*dim`` matrix ``delta``.

    With ``check`` (the default) the target axioms are enforced and a
    violation raises :class:`AxiomViolation`.
    """
    bp = QVec.from_scalars(basepoint)
    d = len(bp)
    delta = [list(r) for r in delta]
    if d < 1:
        raise ValueError("dim must be at least 1")
    if len(delta) != d or any(len(r) != 2 * d for r in delta):
        raise ValueError(f"delta must be {d} x {2 * d}")
    left = _sparse_rows(delta, 0, d)
    right = _sparse_rows(delta, d, d)
    return make_target_sparse(bp, left, right, p, norm, name=name, bounded=bounded, check=check,
                              samples=samples, seed=seed)


def make_target_sparse(
    basepoint,
    left,
    right,
    p,
    norm: NormSpec | None = None,
    *,
    name: str = "",
    bounded: bool = False,
    check: bool = True,
    samples: int = DEFAULT_CERT_SAMPLES,
    seed=0,
) -> AlgebraTarget:
    bp = basepoint if isinstance(basepoint, QVec) else QVec.from_scalars(basepoint)
    left = tuple(tuple((int(j), as_scalar(c)) for j, c in row if as_scalar(c) != 0) for row in left)
    right = tuple(tuple((int(j), as_scalar(c)) for j, c in row if as_scalar(c) != 0) for row in right)
    if len(left) != len(bp) or len(right) != len(bp):
        raise ValueError("delta rows do not match the dimension")
    t = AlgebraTarget(len(bp), parse_exponent(p), bp, left, right, norm or NormSpec.sup(), name, bounded)
    if check:
        cert = validate_target(t, samples=samples, seed=seed)
        t = AlgebraTarget(t.dim, t.p, t.basepoint, t.left, t.right, t.norm, t.name, t.bounded, cert)
    return t


def validate_target(target: AlgebraTarget, samples: int = DEFAULT_CERT_SAMPLES, seed=0) -> ContractionCertificate:
    """Enforce ``||v|| <= 1``, ``delta(v, v) = v`` and contractivity of ``delta``."""
    v = target.basepoint
    nv = target.vector_norm(v)
    if (nv > 1) if isinstance(nv, Fraction) else (nv > 1 + 1e-12):
        raise AxiomViolation("basepoint-norm", f"||v|| = {nv} > 1", witness=v.scalars())
    vv = target.apply_delta(v.scalars(), v.scalars())
    if QVec.from_scalars(vv) != v:
        raise AxiomViolation("fixed-basepoint", "delta(v, v) != v", witness=vv)
    cert = contraction_certificate(target, samples=samples, seed=seed)
    if not target.bounded and not cert.ok():
        raise AxiomViolation(
            "contraction",
            f"operator norm of delta is {cert.estimate} > 1 ({cert.method})",
            witness=cert.witness,
        )
    return cert


def _sign(c):
    if isinstance(c, GaussianRational):
        # unit-modulus phase, approximated exactly enough for a witness
        m = abs(c)
        return complex(c.re / Fraction(m), -c.im / Fraction(m)) if m else 0
    return 1 if c > 0 else (-1 if c < 0 else 0)


def contraction_certificate(target: AlgebraTarget, samples: int = DEFAULT_CERT_SAMPLES, seed=0) -> ContractionCertificate:
    """Operator norm of ``delta: V (+)_p V -> V``.

    For the sup norm (and for any norm when ``dim == 1``) row ``i`` reaches
    ``2^(1/p) ||(a_i, b_i)||_q`` with ``a_i, b_i`` the absolute row sums of
    the two blocks, which is evaluated exactly for p in {1, inf} on real
    data.  Other norms are estimated by sampling.
    """
    if target.norm.kind == "sup" or target.dim == 1:
        return _closed_form_certificate(target)
    return _sampled_certificate(target, samples, seed)


def _closed_form_certificate(target):
    p = target.p
    real = target.is_real
    best = None
    best_row = 0
    for i in range(target.dim):
        if real:
            a = sum((abs(c) for _, c in target.left[i]), Fraction(0))
            b = sum((abs(c) for _, c in target.right[i]), Fraction(0))
        else:
            a = math.fsum(abs(complex(c)) for _, c in target.left[i])
            b = math.fsum(abs(complex(c)) for _, c in target.right[i])
        if p == INF:
            val = a + b
        elif p == 1:
            val = 2 * max(a, b)
        else:
            pf = float(p)
            q = pf / (pf - 1.0)
            val = 2.0 ** (1.0 / pf) * (float(a) ** q + float(b) ** q) ** (1.0 / q)
        if best is None or val > best:
            best, best_row = val, i
    exact = real and p in (1, INF)
    witness = _row_witness(target, best_row)
    return ContractionCertificate("exact" if exact else "closed-form", best if exact else float(best), 0, witness)


def _row_witness(target, i):
    """Sparse input pair that attains the row-``i`` bound for p in {1, inf}."""
    d = target.dim
    x = [0] * d
    y = [0] * d
    a = sum(abs(complex(c)) for _, c in target.left[i])
    b = sum(abs(complex(c)) for _, c in target.right[i])
    if target.p == INF:
        for j, c in target.left[i]:
            x[j] = _sign(c)
        for j, c in target.right[i]:
            y[j] = _sign(c)
    elif a >= b:
        for j, c in target.left[i]:
            x[j] = 2 * _sign(c)
    else:
        for j, c in target.right[i]:
            y[j] = 2 * _sign(c)
    return (tuple(x), tuple(y))


def _float_blocks(target):
    d = target.dim
    dtype = float if target.is_real else complex
    L = np.zeros((d, d), dtype=dtype)
    R = np.zeros((d, d), dtype=dtype)
    for i in range(d):
        for j, c in target.left[i]:
            L[i, j] = complex(c) if dtype is complex else float(c)
        for j, c in target.right[i]:
            R[i, j] = complex(c) if dtype is complex else float(c)
    return L, R


def _sampled_certificate(target, samples, seed):
    rng = rng_for(seed)
    d = target.dim
    L, R = _float_blocks(target)
    pf = float(target.p)
    best, witness = 0.0, None
    chunk = max(1, min(samples, 2000))
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        X = rng.standard_normal((d, k))
        Y = rng.standard_normal((d, k))
        # sparse directions probe the extreme points of sup/l1-type balls
        mask = rng.random((2, d, k)) < 0.5
        X = np.where(mask[0], X, 0.0) if k > 1 else X
        Y = np.where(mask[1], Y, 0.0) if k > 1 else Y
        if not target.is_real:
            X = X + 1j * rng.standard_normal((d, k))
            Y = Y + 1j * rng.standard_normal((d, k))
        nx = target.norm.norm_float(X)
        ny = target.norm.norm_float(Y)
        if math.isinf(pf):
            den = np.maximum(nx, ny)
        else:
            den = (0.5 * (nx**pf + ny**pf)) ** (1.0 / pf)
        num = target.norm.norm_float(L @ X + R @ Y)
        ok = den > 0
        ratio = np.where(ok, num / np.where(ok, den, 1.0), 0.0)
        j = int(np.argmax(ratio))
        if ratio[j] > best:
            best = float(ratio[j])
            witness = (tuple(X[:, j].tolist()), tuple(Y[:, j].tolist()))
        done += k
    return ContractionCertificate("sampled", best, samples, witness)


# ---------------------------------------------------------------------------
# shipped targets


def mean_target() -> AlgebraTarget:
    """``(F, 1, m)`` with ``m(x, y) = (x + y)/2`` in the p = 1 category."""
    half = Fraction(1, 2)
    return make_target([1], [[half, half]], 1, NormSpec.sup(), name="mean")


def first_block_target(p="inf", *, bounded: bool = False) -> AlgebraTarget:
    """``(F, 1, proj_1)``: ``theta`` reads off the value on the first block.

    ``proj_1`` has norm ``2^(1/p)`` on ``F (+)_p F``, so it is a contraction
    only for p = inf; smaller p need ``bounded=True``.
    """
    return make_target([1], [[1, 0]], p, NormSpec.sup(), name="first-block", bounded=bounded)


def expectation_target(resolution: int, p) -> AlgebraTarget:
    """``E_N`` itself with ``delta = E[gamma(f, g) | level N]``.

    Juxtaposing lands in level ``N + 1``; averaging adjacent pairs projects
    back to level ``N``.  The induced ``theta`` is conditional expectation.
    """
    n = 1 << resolution
    half = Fraction(1, 2)
    left, right = [], []
    for i in range(n):
        # output cell i averages cells 2i, 2i+1 of gamma(f, g) at level N+1
        j = 2 * i
        pair = ((j % n, half), (j % n + 1, half))
        left.append(pair if j < n else ())
        right.append(() if j < n else pair)
    p = parse_exponent(p)
    norm = NormSpec.sup() if p == INF else NormSpec.lp(p, [Fraction(1, n)] * n)
    return make_target_sparse(QVec.constant(1, n), left, right, p, norm, name=f"expectation-{resolution}")


# ---------------------------------------------------------------------------
# the compiled map


@dataclass(frozen=True)
class MorphismTable:
    """Level matrices of ``theta``: ``levels[n]`` holds ``dim`` rows of length ``2**n``."""

    target: AlgebraTarget
    levels: tuple

    @property
    def max_level(self) -> int:
        return len(self.levels) - 1

    def matrix(self, n: int) -> tuple:
        return tuple(row.scalars() for row in self.levels[n])

    def to_json(self) -> dict:
        return {
            "target": self.target.to_json(),
            "levels": [[[scalar_to_json(c) for c in row.scalars()] for row in lvl] for lvl in self.levels],
        }

    @classmethod
    def from_json(cls, data: dict, *, check: bool = True) -> "MorphismTable":
        target = AlgebraTarget.from_json(data["target"], check=check)
        levels = tuple(tuple(QVec.from_scalars(r) for r in lvl) for lvl in data["levels"])
        for n, lvl in enumerate(levels):
            if len(lvl) != target.dim or any(len(r) != 1 << n for r in lvl):
                raise ValueError(f"level {n} has the wrong shape")
        return cls(target, levels)


def _require_valid(target: AlgebraTarget):
    if target.certificate is None:
        validate_target(target)


def compile_theta(target: AlgebraTarget, max_level: int) -> MorphismTable:
    """Level matrices ``theta_0 .. theta_max_level`` in exact arithmetic."""
    if max_level < 0:
        raise ValueError("max_level must be non-negative")
    _require_valid(target)
    current = tuple(QVec.from_scalars([c]) for c in target.basepoint.scalars())
    levels = [current]
    for n in range(max_level):
        width = 1 << n
        nxt = []
        for i in range(target.dim):
            lhs = _combine(target.left[i], current, width)
            rhs = _combine(target.right[i], current, width)
            nxt.append(lhs.concat(rhs))
        current = tuple(nxt)
        levels.append(current)
    return MorphismTable(target, tuple(levels))


def _combine(entries, rows, width) -> QVec:
    if not entries:
        return QVec.zeros(width)
    return QVec.lincomb([(c, rows[j]) for j, c in entries])


def compile_theta_columnwise(target: AlgebraTarget, max_level: int) -> MorphismTable:
    """Same table, built one column at a time by recursing through ``split``.

    Column ``j`` of level ``n`` is ``theta`` of the ``j``-th indicator step,
    obtained by splitting the step down to level 0 and reassembling with
    ``delta``.  Exponential in nothing but slow (``O(n 4^n)``); meant as an
    independent cross-check at small levels.
    """
    _require_valid(target)
    v = target.basepoint.scalars()
    zero = (Fraction(0),) * target.dim

    def theta(f: DyadicStep):
        if f.values.is_zero():
            return zero
        if f.level == 0:
            c = f.values[0]
            return tuple(c * x for x in v)
        a, b = split(f)
        return target.apply_delta(theta(a), theta(b))

    levels = []
    for n in range(max_level + 1):
        width = 1 << n
        cols = []
        for j in range(width):
            e = [0] * width
            e[j] = 1
            cols.append(theta(DyadicStep.from_integers(e)))
        rows = tuple(QVec.from_scalars(col[i] for col in cols) for i in range(target.dim))
        levels.append(rows)
    return MorphismTable(target, tuple(levels))


def apply_universal(table: MorphismTable, f: DyadicStep) -> tuple:
    """``theta(f) = levels[f.level] . coeffs(f)``."""
    if f.level > table.max_level:
        raise LevelError(
            f"step level {f.level} exceeds the table's max level {table.max_level}; "
            f"recompile with max_level >= {f.level}"
        )
    return tuple(row.dot(f.values) for row in table.levels[f.level])


def uniqueness_probe(target: AlgebraTarget, candidate: MorphismTable) -> bool:
    """True iff ``candidate`` agrees with :func:`compile_theta` on every level."""
    if candidate.max_level < 0:
        raise ValueError("empty candidate table")
    for n, lvl in enumerate(candidate.levels):
        if len(lvl) != target.dim or any(len(r) != 1 << n for r in lvl):
            raise ValueError(f"candidate level {n} has shape incompatible with dim {target.dim}")
    reference = compile_theta(target, candidate.max_level)
    return all(a == b for a, b in zip(reference.levels, candidate.levels))


# ---------------------------------------------------------------------------
# verification


@dataclass
class CheckReport:
    """Pass/fail tallies per named check, plus the first few counterexamples."""

    name: str
    passed: dict = field(default_factory=dict)
    failed: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)
    max_counterexamples: int = 5

    def record(self, check: str, ok: bool, witness=None):
        bucket = self.passed if ok else self.failed
        bucket[check] = bucket.get(check, 0) + 1
        self.passed.setdefault(check, 0)
        if not ok and len(self.counterexamples) < self.max_counterexamples:
            self.counterexamples.append({"check": check, "witness": witness})

    @property
    def ok(self) -> bool:
        return not any(self.failed.values())

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "passed": dict(sorted(self.passed.items())),
            "failed": dict(sorted(self.failed.items())),
            "counterexamples": self.counterexamples,
        }


def verify_morphism(table: MorphismTable, samples: int = 1000, seed=0, tol: float = CONTRACTION_TOL) -> CheckReport:
    """Randomised checks that the table is a map of targets.

    * ``basepoint``: ``theta(1) = v`` exactly
    * ``structure``: ``theta(gamma(f, g)) = delta(theta f, theta g)`` exactly
    * ``extension``: ``theta(refine(f)) = theta(f)`` exactly
    * ``contraction``: ``||theta f|| <= ||f||_p + tol``
    """
    target = table.target
    report = CheckReport(f"morphism:{target.name or 'target'}")
    rng = rng_for(seed)
    v = target.basepoint.scalars()
    report.record("basepoint", apply_universal(table, DyadicStep.unit()) == v)
    top = table.max_level
    for _ in range(samples):
        if top >= 1:
            f = random_step(rng, top - 1, complex_=not target.is_real)
            g = random_step(rng, top - 1, complex_=not target.is_real)
            lhs = apply_universal(table, juxtapose(f, g))
            rhs = target.apply_delta(apply_universal(table, f), apply_universal(table, g))
            report.record("structure", lhs == rhs, {"f": f.to_json(), "g": g.to_json()} if lhs != rhs else None)
            fine = apply_universal(table, refine(f, f.level + 1))
            report.record("extension", fine == apply_universal(table, f), None)
        h = random_step(rng, top, complex_=not target.is_real)
        img = target.vector_norm(apply_universal(table, h))
        bound = p_norm(h, target.p).value
        ok = img <= bound if isinstance(img, Fraction) and isinstance(bound, Fraction) else float(img) <= float(bound) + tol
        if target.bounded:
            ok = True
        report.record("contraction", ok, None if ok else {"f": h.to_json(), "image_norm": str(img), "bound": str(bound)})
    return report


# ---------------------------------------------------------------------------
# the Adamek chain


@dataclass
class ChainReport:
    kind: str
    p: Fraction | float
    dims: list
    checks: dict
    colimit_level: int

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "p": format_exponent(self.p),
            "dims": self.dims,
            "checks": self.checks,
            "colimit_level": self.colimit_level,
        }


def _identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _matmul(A, B):
    Bt = list(zip(*B)) if B else []
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def _block_diag(A, B):
    ca, cb = len(A[0]), len(B[0])
    top = tuple(tuple(r) + (0,) * cb for r in A)
    bot = tuple((0,) * ca + tuple(r) for r in B)
    return top + bot


def adamek_chain(kind: str, stages: int, p=1, samples: int = 50, seed=0) -> ChainReport:
    """Build ``Z -> T(Z) -> T^2(Z) -> ...`` and certify its structure maps.

    ``double_with_p_norm``: ``T(V, v) = (V (+)_p V, (v, v))`` from ``(F, 1)``,
    so stage ``n`` is ``E_n`` with the all-ones basepoint (dim ``2**n``).
    ``prepend_scalar``: ``T(V) = F (+)~_p V`` from the zero space; stage ``n``
    is ``T^(n+1)(0)``, sequences of length ``n + 1``.

    Connecting maps are refinement (resp. zero padding); the structure
    isomorphism is concatenation (resp. prepending).  Checks are exact matrix
    identities plus isometry on random vectors.
    """
    if stages < 0:
        raise ValueError("stages must be non-negative")
    p = parse_exponent(p)
    rng = rng_for(seed)
    checks = {}
    if kind == "double_with_p_norm":
        dims = [1 << n for n in range(stages + 1)]

        def connect(n):  # E_n -> E_{n+1}
            return tuple(tuple(1 if j == i // 2 else 0 for j in range(1 << n)) for i in range(1 << (n + 1)))

        def gamma_m(n):  # E_n (+) E_n -> E_{n+1}; coordinates concatenate
            return _identity(1 << (n + 1))

        basepoint_ok = True
        iso_ok = True
        square_ok = True
        isometry_ok = True
        for n in range(stages):
            C = connect(n)
            ones = [(1,)] * (1 << n)
            basepoint_ok &= _matmul(C, ones) == tuple((1,) for _ in range(1 << (n + 1)))
            G = gamma_m(n)
            iso_ok &= _matmul(G, G) == _identity(1 << (n + 1))  # gamma^{-1} is the same permutation
            if n >= 1:
                # T applied to the previous connecting map equals this one
                prev = connect(n - 1)
                square_ok &= _matmul(G, _block_diag(prev, prev)) == C
            for _ in range(samples):
                f = random_step(rng, n, min_level=n)
                isometry_ok &= _same_norm(p_norm(f, p), p_norm(refine(f, n + 1), p))
                g = random_step(rng, n, min_level=n)
                isometry_ok &= _same_norm(
                    p_norm(juxtapose(f, g), p), direct_sum_norm(p_norm(f, p), p_norm(g, p), p)
                )
        checks = {
            "basepoint_preserved": bool(basepoint_ok),
            "structure_map_invertible": bool(iso_ok),
            "connecting_map_is_T_of_previous": bool(square_ok),
            "isometric_structure_maps": bool(isometry_ok),
        }
    elif kind == "prepend_scalar":
        dims = [n + 1 for n in range(stages + 1)]
        from initial_integrals.sequences import FiniteSeq, seq_norm, seq_prepend

        def connect(n):  # length n+1 -> n+2, zero padding
            return tuple(tuple(1 if i == j else 0 for j in range(n + 1)) for i in range(n + 2))

        square_ok = True
        iso_ok = True
        isometry_ok = True
        for n in range(stages):
            C = connect(n)
            if n >= 1:
                # connect_n = gamma o (id (+) connect_{n-1}) o gamma^{-1}
                square_ok &= _block_diag(((1,),), connect(n - 1)) == C
            for _ in range(samples):
                a = FiniteSeq(tuple(Fraction(int(x)) for x in rng.integers(-9, 10, size=n + 1)))
                c = Fraction(int(rng.integers(-9, 10)))
                b = seq_prepend(c, a)
                iso_ok &= (b.head(), b.tail()) == (c, a)
                padded = FiniteSeq(a.coeffs + (Fraction(0),))
                isometry_ok &= _same_norm(seq_norm(a, p), seq_norm(padded, p))
                isometry_ok &= _same_norm(
                    seq_norm(b, p),
                    direct_sum_norm(abs(c), seq_norm(a, p).value, p, weighted=False),
                )
        checks = {
            "structure_map_invertible": bool(iso_ok),
            "connecting_map_is_T_of_previous": bool(square_ok),
            "isometric_structure_maps": bool(isometry_ok),
        }
    else:
        raise ValueError(f"unknown functor kind {kind!r}")
    return ChainReport(kind, p, dims, checks, stages)


def _same_norm(a, b, rel: float = 1e-12) -> bool:
    x = a.value if hasattr(a, "value") else a
    y = b.value if hasattr(b, "value") else b
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x == y
    x, y = float(x), float(y)
    return abs(x - y) <= rel * max(abs(x), abs(y), 1e-300)


# ---------------------------------------------------------------------------
# general functions via sampling


def step_from_sampler(func: Callable[[float], float], level: int, p=1) -> tuple:
    """Level-``level`` step from midpoint samples of ``func``.

    Returns ``(step, proxy)`` where ``proxy = ||f_level - f_{level+1}||_p`` is
    the distance to the next resolution, a computable stand-in for the
    truncation error.
    """

    def at(n):
        m = 1 << n
        return DyadicStep.from_coeffs([Fraction(func((i + 0.5) / m)) for i in range(m)])

    coarse = at(level)
    fine = at(level + 1)
    diff = fine - coarse
    return coarse, float(p_norm(diff, p).value)


__all__ = [
    "AlgebraTarget",
    "ChainReport",
    "CheckReport",
    "ContractionCertificate",
    "MorphismTable",
    "NormSpec",
    "adamek_chain",
    "apply_universal",
    "compile_theta",
    "compile_theta_columnwise",
    "contraction_certificate",
    "expectation_target",
    "first_block_target",
    "make_target",
    "make_target_sparse",
    "mean_target",
    "step_from_sampler",
    "uniqueness_probe",
    "validate_target",
    "verify_morphism",
]
