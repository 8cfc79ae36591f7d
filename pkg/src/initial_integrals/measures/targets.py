"""Functor targets ``(F, v)`` on finite measure spaces.

A target assigns to each space ``X`` a finite-dimensional normed space
``F(X) = F^dim(X)``, an element ``v_X`` and linear actions

* ``embed(i, u)``: ``F(i): F(Y) -> F(X)`` for an embedding ``i: Y -> X``
* ``pullback(s, u)``: ``F(s): F(Y) -> F(X)`` for a total measure-preserving
  ``s: X -> Y`` (``None`` for targets defined on embeddings only)

Vectors are tuples of exact scalars.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from fractions import Fraction

from initial_integrals.exact import abs2, conj, parse_exponent, scalar_abs
from initial_integrals.generators import random_scalar
from initial_integrals.measures.spaces import (
    Embedding,
    FiniteMeasureSpace,
    PartialMap,
    SimpleFn,
    restrict_to_domain,
    sp_norm,
    sp_norm_sq,
)


class FunctorTarget(ABC):
    """Base class; subclasses fix the carrier, actions, basepoints and norm."""

    name = "target"
    p = Fraction(1)
    full = True  # defines pullbacks along measure-preserving maps
    hilbert = False

    @abstractmethod
    def dim(self, X: FiniteMeasureSpace) -> int: ...

    @abstractmethod
    def v(self, X: FiniteMeasureSpace) -> tuple: ...

    @abstractmethod
    def embed(self, i: Embedding, u: tuple) -> tuple: ...

    def pullback(self, s: PartialMap, u: tuple):
        return None

    @abstractmethod
    def norm(self, X: FiniteMeasureSpace, u: tuple): ...

    def norm_sq(self, X: FiniteMeasureSpace, u: tuple):
        """Exact squared norm when available (Hilbert-type targets), else ``None``."""
        return None

    def inner(self, X: FiniteMeasureSpace, u: tuple, w: tuple):
        raise NotImplementedError(f"{self.name} has no inner product")

    def equal(self, X: FiniteMeasureSpace, u: tuple, w: tuple) -> bool:
        return tuple(u) == tuple(w)

    def zero(self, X) -> tuple:
        return (Fraction(0),) * self.dim(X)

    def basis(self, X) -> list:
        n = self.dim(X)
        return [tuple(Fraction(1 if k == j else 0) for k in range(n)) for j in range(n)]

    def random_vector(self, rng, X, complex_: bool = False) -> tuple:
        return tuple(random_scalar(rng, complex_=complex_) for _ in range(self.dim(X)))

    def act(self, f: PartialMap, u: tuple) -> tuple:
        """``F(A, s) = F(i_A) o F(s_A)``."""
        incl, s_a = restrict_to_domain(f)
        mid = self.pullback(s_a, u)
        if mid is None:
            raise NotImplementedError(f"{self.name} is defined on embeddings only")
        return self.embed(incl, mid)

    def add(self, u, w) -> tuple:
        return tuple(a + b for a, b in zip(u, w))

    def scale(self, c, u) -> tuple:
        return tuple(c * a for a in u)

    def describe(self) -> dict:
        from initial_integrals.exact import format_exponent

        return {"name": self.name, "p": format_exponent(self.p), "full": self.full, "hilbert": self.hilbert}


# ---------------------------------------------------------------------------
# function-valued carriers


class _PointwiseTarget(FunctorTarget):
    """``F(X)`` = functions ``X -> F^k``, stored point-major; actions move blocks."""

    k = 1

    def dim(self, X):
        return self.k * len(X)

    def embed(self, i, u):
        X = i.target
        out = [Fraction(0)] * self.dim(X)
        pos = {x: n for n, x in enumerate(X.points)}
        for n, (_, x) in enumerate(i.pairs):
            j = pos[x]
            out[j * self.k:(j + 1) * self.k] = u[n * self.k:(n + 1) * self.k]
        return tuple(out)

    def pullback(self, s, u):
        if not self.full:
            return None
        if not s.is_total:
            raise ValueError("pullback needs a total map")
        Y = s.target
        pos = {y: n for n, y in enumerate(Y.points)}
        out = []
        for _, y in s.pairs:
            j = pos[y]
            out.extend(u[j * self.k:(j + 1) * self.k])
        return tuple(out)

    def equal(self, X, u, w):
        # equality almost everywhere
        for n, wt in enumerate(X.weights):
            if wt > 0 and tuple(u[n * self.k:(n + 1) * self.k]) != tuple(w[n * self.k:(n + 1) * self.k]):
                return False
        return True


class SimpleFunctionTarget(_PointwiseTarget):
    """``(S^p, I)``: simple functions modulo null sets with the p-norm."""

    def __init__(self, p=1, full: bool = True):
        self.p = parse_exponent(p)
        self.full = full
        self.hilbert = self.p == 2
        self.name = "S^p"

    def v(self, X):
        return (Fraction(1),) * len(X)

    def norm(self, X, u):
        return sp_norm(SimpleFn(X, u), self.p).value

    def norm_sq(self, X, u):
        return sp_norm_sq(SimpleFn(X, u)) if self.p == 2 else None

    def inner(self, X, u, w):
        return sum((a * conj(b) * wt for a, b, wt in zip(u, w, X.weights)), Fraction(0))


class MeasureTarget(_PointwiseTarget):
    """``(M, mu)``: signed measures with total variation; embeddings only."""

    full = False
    name = "M"
    p = Fraction(1)

    def v(self, X):
        return tuple(X.weights)

    def norm(self, X, u):
        if all(isinstance(c, Fraction) for c in u):
            return sum((abs(c) for c in u), Fraction(0))
        return math.fsum(abs(complex(c)) for c in u)


class HilbertTarget(_PointwiseTarget):
    """``L^2(X; F^k)`` with inner product ``sum_x w(x) u(x)^T G conj(w'(x))``.

    ``G`` is a rational positive definite Gram matrix and
    ``v_X = I_X (x) e`` with ``e^T G e <= 1``.
    """

    full = True
    hilbert = True
    p = Fraction(2)

    def __init__(self, gram, e, name: str = "hilbert"):
        self.gram = tuple(tuple(Fraction(c) for c in r) for r in gram)
        self.e = tuple(Fraction(c) for c in e)
        self.k = len(self.e)
        self.name = name

    @classmethod
    def random(cls, rng, k: int = 2, magnitude: int = 4) -> "HilbertTarget":
        A = [[Fraction(int(rng.integers(-magnitude, magnitude + 1)), int(rng.integers(1, 5))) for _ in range(k)]
             for _ in range(k)]
        # G = A^T A + I is positive definite
        G = [[sum(A[r][a] * A[r][b] for r in range(k)) + (1 if a == b else 0) for b in range(k)] for a in range(k)]
        e = [Fraction(int(rng.integers(-magnitude, magnitude + 1)), 4) for _ in range(k)]
        s = _quad(G, e, e)
        m = 1
        while m * m < s:
            m += 1
        e = [c / m for c in e]
        return cls(G, e, name=f"hilbert-k{k}")

    def v(self, X):
        return self.e * len(X)

    def inner(self, X, u, w):
        k = self.k
        total = Fraction(0)
        for n, wt in enumerate(X.weights):
            if wt:
                total += wt * _quad(self.gram, u[n * k:(n + 1) * k], [conj(c) for c in w[n * k:(n + 1) * k]])
        return total

    def norm_sq(self, X, u):
        val = self.inner(X, u, u)
        return val.re if hasattr(val, "re") else val

    def norm(self, X, u):
        return math.sqrt(self.norm_sq(X, u))

    def describe(self):
        d = super().describe()
        d["gram"] = [[str(c) for c in r] for r in self.gram]
        d["e"] = [str(c) for c in self.e]
        return d


def _quad(G, x, y):
    return sum((x[a] * G[a][b] * y[b] for a in range(len(x)) for b in range(len(y))), Fraction(0))


# ---------------------------------------------------------------------------
# scalar carriers


class _ScalarTarget(FunctorTarget):
    """``F(X) = F`` with identity actions."""

    def dim(self, X):
        return 1

    def embed(self, i, u):
        return tuple(u)

    def pullback(self, s, u):
        return tuple(u)

    def norm(self, X, u):
        return scalar_abs(u[0])

    def norm_sq(self, X, u):
        return abs2(u[0]) if self.p == 2 else None


class ScalarTarget(_ScalarTarget):
    """``(F, t)`` with ``t_X = mu_X(X)``; the unique map out of ``S^1`` is integration."""

    name = "F,t"

    def __init__(self, p=1):
        self.p = parse_exponent(p)

    def v(self, X):
        return (X.total,)


# ---------------------------------------------------------------------------
# deliberately broken targets


class DoubledTarget(SimpleFunctionTarget):
    """``v_X = 2 I_X``: too long for the basepoint bound."""

    def __init__(self, p=1):
        super().__init__(p)
        self.name = "doubled-S^p"

    def v(self, X):
        return (Fraction(2),) * len(X)


class TruncatedMassTarget(_ScalarTarget):
    """``v_X = min(mu(X), 1)`` in ``F`` with p = 1.

    Satisfies (II)-(IV) but not (I): two disjoint pieces of mass 1 give
    ``1 + 1 != 1``.
    """

    name = "truncated-mass"
    p = Fraction(1)

    def v(self, X):
        return (min(X.total, Fraction(1)),)


def shipped_targets(rng, p=2) -> list:
    """The four well-formed targets exercised by the suites."""
    return [ScalarTarget(1), SimpleFunctionTarget(p), MeasureTarget(), HilbertTarget.random(rng)]


__all__ = [
    "DoubledTarget",
    "FunctorTarget",
    "HilbertTarget",
    "MeasureTarget",
    "TruncatedMassTarget",
    "ScalarTarget",
    "SimpleFunctionTarget",
    "shipped_targets",
]
