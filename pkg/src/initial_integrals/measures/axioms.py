"""The unique map ``psi`` and randomized checks of the target axioms.

Axioms, for complementary embeddings ``Y -i-> X <-j- Z``:

* (I)    ``F(i) v_Y + F(j) v_Z = v_X``
* (II)   ``F(s) v_Y = v_X`` for measure-preserving ``s: X -> Y``
* (III)  ``||v_X|| <= mu(X)^(1/p)`` (for p = inf: 0 if ``mu(X) = 0``, else 1)
* (IV)   ``||F(i) u + F(j) w|| <= (||u||^p + ||w||^p)^(1/p)`` (max for p = inf)
* (IV_H) ``<F(i) v_Y, F(j) v_Z> = 0`` for embeddings with disjoint images
"""

from __future__ import annotations

import math
from fractions import Fraction

from initial_integrals.errors import AxiomViolation
from initial_integrals.exact import INF, abs2
from initial_integrals.generators import random_scalar, rng_for
from initial_integrals.measures.spaces import (
    Embedding,
    FiniteMeasureSpace,
    PartialMap,
    SimpleFn,
    compose_partial,
    sp_norm,
    sp_norm_sq,
)
from initial_integrals.measures.targets import FunctorTarget
from initial_integrals.universal import CheckReport

TOL = 1e-9
MAX_POINTS = 8
MAX_DEN = 16


# ---------------------------------------------------------------------------
# random spaces and maps


def random_weight(rng, max_den: int = MAX_DEN, zero_prob: float = 0.15) -> Fraction:
    if rng.random() < zero_prob:
        return Fraction(0)
    den = int(rng.integers(1, max_den + 1))
    return Fraction(int(rng.integers(1, 2 * den + 1)), den)


def random_space(rng, max_points: int = MAX_POINTS, prefix: str = "x") -> FiniteMeasureSpace:
    """0..max_points points, weights with denominators up to 16, some zero."""
    n = int(rng.integers(0, max_points + 1))
    return FiniteMeasureSpace(tuple(f"{prefix}{k}" for k in range(n)), tuple(random_weight(rng) for _ in range(n)))


def split_weight(rng, w: Fraction, parts: int) -> list:
    """``parts`` non-negative rationals summing to ``w``."""
    if parts == 1:
        return [w]
    cuts = sorted(Fraction(int(rng.integers(0, 9)), 8) for _ in range(parts - 1))
    edges = [Fraction(0)] + cuts + [Fraction(1)]
    return [w * (b - a) for a, b in zip(edges, edges[1:])]


def random_refinement(rng, Y: FiniteMeasureSpace, prefix: str = "r", max_parts: int = 3):
    """A space ``X`` and a total measure-preserving ``s: X -> Y``."""
    pts, ws, mapping = [], [], {}
    for y, w in zip(Y.points, Y.weights):
        for piece in split_weight(rng, w, int(rng.integers(1, max_parts + 1))):
            name = f"{prefix}{len(pts)}"
            pts.append(name)
            ws.append(piece)
            mapping[name] = y
    X = FiniteMeasureSpace(tuple(pts), tuple(ws))
    return X, PartialMap.make(X, Y, mapping)


def random_coarsening(rng, X: FiniteMeasureSpace, prefix: str = "c"):
    """A space ``Y`` and a total measure-preserving ``s: X -> Y`` (blocks of ``X``)."""
    if not len(X):
        return X, PartialMap.identity(X)
    blocks = int(rng.integers(1, len(X) + 1))
    assign = [int(rng.integers(0, blocks)) for _ in X.points]
    used = sorted(set(assign))
    names = {b: f"{prefix}{k}" for k, b in enumerate(used)}
    ws = {names[b]: Fraction(0) for b in used}
    for a, w in zip(assign, X.weights):
        ws[names[a]] += w
    Y = FiniteMeasureSpace(tuple(names[b] for b in used), tuple(ws[names[b]] for b in used))
    return Y, PartialMap.make(X, Y, {x: names[a] for x, a in zip(X.points, assign)})


def random_subset(rng, X: FiniteMeasureSpace) -> tuple:
    return tuple(p for p in X.points if rng.random() < 0.5)


def renamed_inclusion(X: FiniteMeasureSpace, subset, prefix: str) -> Embedding:
    """Embedding of a fresh copy of ``X|subset`` into ``X``."""
    sub = X.subspace(subset)
    copy = FiniteMeasureSpace(tuple(f"{prefix}{k}" for k in range(len(sub))), sub.weights)
    return Embedding(copy, X, tuple(zip(copy.points, sub.points)))


def complementary_pair(rng, X: FiniteMeasureSpace, subset=None):
    B = random_subset(rng, X) if subset is None else tuple(subset)
    rest = tuple(p for p in X.points if p not in set(B))
    return renamed_inclusion(X, B, "y"), renamed_inclusion(X, rest, "z")


def random_partial_map(rng, Y: FiniteMeasureSpace, extra: int = 2):
    """A space ``X`` with a partial map ``(A, s): X -> Y``; ``X = A`` plus up to ``extra`` points."""
    A, s = random_refinement(rng, Y, prefix="a")
    pts = list(A.points)
    ws = list(A.weights)
    for k in range(int(rng.integers(0, extra + 1))):
        pts.append(f"o{k}")
        ws.append(random_weight(rng))
    X = FiniteMeasureSpace(tuple(pts), tuple(ws))
    return X, PartialMap.make(X, Y, dict(s.pairs))


def random_simple_fn(rng, X: FiniteMeasureSpace, complex_: bool = False, palette: int = 3) -> SimpleFn:
    """Values drawn from a small palette so fibres have several points."""
    colours = [random_scalar(rng, complex_=complex_) for _ in range(palette)]
    return SimpleFn(X, tuple(colours[int(rng.integers(0, palette))] for _ in X.points))


# ---------------------------------------------------------------------------
# comparisons


def _root_measure(mu: Fraction, p):
    """``mu^(1/p)`` with the p = inf convention."""
    if p == INF:
        return Fraction(0 if mu == 0 else 1)
    if p == 1:
        return mu
    return float(mu) ** (1.0 / float(p))


def _le(lhs, rhs, lhs_sq=None, rhs_sq=None, tol: float = TOL) -> bool:
    if lhs_sq is not None and rhs_sq is not None:
        return lhs_sq <= rhs_sq
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        return lhs <= rhs
    return float(lhs) <= float(rhs) + tol


def _eq_num(lhs, rhs, lhs_sq=None, rhs_sq=None, tol: float = TOL) -> bool:
    if lhs_sq is not None and rhs_sq is not None:
        return lhs_sq == rhs_sq
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        return lhs == rhs
    return abs(float(lhs) - float(rhs)) <= tol


# ---------------------------------------------------------------------------
# psi


def v_sub(target: FunctorTarget, X: FiniteMeasureSpace, subset) -> tuple:
    """``v^X_B = F(incl_B)(v_B)``."""
    i = Embedding.inclusion(X, subset)
    return target.embed(i, target.v(i.source))


def psi(target: FunctorTarget, f: SimpleFn, check: bool = True) -> tuple:
    """``psi_X(f) = sum_c c v^X_{f^-1(c)}``.

    With ``check`` the fibre partition is tested against (I) and the
    measure bound of (III) before summing; a failure raises
    :class:`AxiomViolation`.
    """
    X = f.space
    total = target.zero(X)
    parts = target.zero(X)
    for c, fibre in f.fibres().items():
        vb = v_sub(target, X, fibre)
        if check:
            sub = X.subspace(fibre)
            bound = _root_measure(sub.total, target.p)
            nsq = target.norm_sq(X, vb)
            bsq = sub.total if target.p == 2 else None
            if not _le(target.norm(X, vb), bound, nsq, bsq):
                raise AxiomViolation("(III)", f"||v^X_B|| exceeds mu(B)^(1/p) on fibre {list(fibre)}",
                                     witness={"space": X.to_json(), "fibre": list(fibre)})
            parts = target.add(parts, vb)
        if c != 0:
            total = target.add(total, target.scale(c, vb))
    if check and len(X) and not target.equal(X, parts, target.v(X)):
        raise AxiomViolation("(I)", "indicator pieces of the fibre partition do not sum to v_X",
                             witness={"space": X.to_json(), "values": [str(c) for c in f.values]})
    return total


def check_additivity(target: FunctorTarget, X: FiniteMeasureSpace, subsets) -> bool:
    """``v^X`` of a disjoint union equals the sum of the pieces; ``v^X_empty = 0``."""
    subsets = [tuple(s) for s in subsets]
    seen = set()
    for s in subsets:
        if seen & set(s):
            raise ValueError("subsets must be pairwise disjoint")
        seen |= set(s)
    union = tuple(p for p in X.points if p in seen)
    lhs = v_sub(target, X, union)
    rhs = target.zero(X)
    for s in subsets:
        rhs = target.add(rhs, v_sub(target, X, s))
    return target.equal(X, lhs, rhs)


def check_beck_chevalley(target: FunctorTarget, s: PartialMap, B) -> bool:
    """``F(i) o F(s') = F(s) o F(j)`` on a basis of ``F(B)``, for total ``s: X -> Y``."""
    if not s.is_total:
        raise ValueError("Beck-Chevalley needs a total measure-preserving map")
    if not target.full:
        raise ValueError(f"{target.name} defines no pullback action")
    X, Y = s.source, s.target
    B = tuple(B)
    pre = s.preimage(B)
    i = Embedding.inclusion(X, pre)
    j = Embedding.inclusion(Y, B)
    s_res = PartialMap(i.source, j.source, tuple((a, y) for a, y in s.pairs if a in set(pre)))
    for u in target.basis(j.source):
        lhs = target.embed(i, target.pullback(s_res, u))
        rhs = target.pullback(s, target.embed(j, u))
        if not target.equal(X, lhs, rhs):
            return False
    return True


# ---------------------------------------------------------------------------
# shrinking


def _simpler_weights(w: Fraction):
    for c in (Fraction(0), Fraction(1), Fraction(w.numerator // 2 or 1, w.denominator), Fraction(w.numerator, 1)):
        if c != w and c >= 0:
            yield c


def shrink_space(X: FiniteMeasureSpace, marked: tuple, fails, max_steps: int = 200):
    """Greedy shrink of ``(X, marked subset)`` while ``fails(X, marked)`` holds.

    Tries dropping points first, then simpler weights.
    """
    steps = 0
    improved = True
    while improved and steps < max_steps:
        improved = False
        for p in X.points:
            keep = [q for q in X.points if q != p]
            Y = X.subspace(keep)
            m = tuple(q for q in marked if q != p)
            steps += 1
            if fails(Y, m):
                X, marked, improved = Y, m, True
                break
        if improved:
            continue
        for n, w in enumerate(X.weights):
            for c in _simpler_weights(w):
                ws = list(X.weights)
                ws[n] = c
                Y = FiniteMeasureSpace(X.points, tuple(ws))
                steps += 1
                if fails(Y, marked):
                    X, improved = Y, True
                    break
            if improved:
                break
    return X, marked


def _shrink_vector(vec: tuple, fails) -> tuple:
    vec = list(vec)
    for k in range(len(vec)):
        for c in (Fraction(0), Fraction(1), Fraction(-1)):
            if vec[k] != c:
                trial = vec[:k] + [c] + vec[k + 1:]
                if fails(tuple(trial)):
                    vec = trial
                    break
    return tuple(vec)


# ---------------------------------------------------------------------------
# the axiom checker


def _fails_I(target):
    def fails(X, B):
        i, j = complementary_pair(None, X, B)
        lhs = target.add(target.embed(i, target.v(i.source)), target.embed(j, target.v(j.source)))
        return not target.equal(X, lhs, target.v(X))
    return fails


def _fails_III(target):
    def fails(X, _):
        v = target.v(X)
        rhs_sq = X.total if target.p == 2 else None
        return not _le(target.norm(X, v), _root_measure(X.total, target.p), target.norm_sq(X, v), rhs_sq)
    return fails


def _iv_rhs(target, Y, Z, u, w):
    nu, nw = target.norm(Y, u), target.norm(Z, w)
    p = target.p
    if p == INF:
        return max(nu, nw), None
    if p == 1:
        return nu + nw, None
    su, sw = target.norm_sq(Y, u), target.norm_sq(Z, w)
    if p == 2 and su is not None and sw is not None:
        return math.sqrt(su + sw), su + sw
    pf = float(p)
    return (float(nu) ** pf + float(nw) ** pf) ** (1 / pf), None


def verify_axioms(target: FunctorTarget, trials: int = 200, seed=0, strict: bool = False,
                  complex_: bool = False) -> CheckReport:
    """Randomized check of (I)-(IV), (IV_H), functoriality and contractivity.

    Exact checks: (I), (II), (IV_H), functoriality.  Tolerance ``1e-9``:
    (III), (IV), contractivity, unless exact values are available.  With
    ``strict`` the equality cases of (III) and (IV) are demanded as well.
    Failures of (I) and (III) come with a shrunk witness space.
    """
    rng = rng_for(seed)
    report = CheckReport(f"axioms:{target.name}")
    p = target.p
    for _ in range(trials):
        X = random_space(rng)
        # (III)
        v = target.v(X)
        rhs = _root_measure(X.total, p)
        rhs_sq = X.total if p == 2 else None
        ok = _le(target.norm(X, v), rhs, target.norm_sq(X, v), rhs_sq)
        witness = None
        if not ok:
            Xs, _ = shrink_space(X, (), _fails_III(target))
            witness = {"space": Xs.to_json(), "norm_v": str(target.norm(Xs, target.v(Xs)))}
        report.record("(III)", ok, witness)
        if strict:
            report.record("(III)-equality", _eq_num(target.norm(X, v), rhs, target.norm_sq(X, v), rhs_sq))

        # (I)
        B = random_subset(rng, X)
        i, j = complementary_pair(rng, X, B)
        lhs = target.add(target.embed(i, target.v(i.source)), target.embed(j, target.v(j.source)))
        ok = target.equal(X, lhs, v)
        witness = None
        if not ok:
            Xs, Bs = shrink_space(X, B, _fails_I(target))
            witness = {"space": Xs.to_json(), "Y": list(Bs)}
        report.record("(I)", ok, witness)

        # (IV)
        Y, Z = i.source, j.source
        u = target.random_vector(rng, Y, complex_)
        w = target.random_vector(rng, Z, complex_)
        img = target.add(target.embed(i, u), target.embed(j, w))
        bound, bound_sq = _iv_rhs(target, Y, Z, u, w)
        n_img, n_img_sq = target.norm(X, img), target.norm_sq(X, img)
        ok = _le(n_img, bound, n_img_sq, bound_sq)
        witness = None
        if not ok:
            def fails_u(uu):
                im = target.add(target.embed(i, uu), target.embed(j, w))
                b, bsq = _iv_rhs(target, Y, Z, uu, w)
                return not _le(target.norm(X, im), b, target.norm_sq(X, im), bsq)
            witness = {"space": X.to_json(), "u": [str(c) for c in _shrink_vector(u, fails_u)],
                       "w": [str(c) for c in w]}
        report.record("(IV)", ok, witness)
        if strict:
            report.record("(IV)-equality", _eq_num(n_img, bound, n_img_sq, bound_sq))

        # (IV_H): embeddings with disjoint (not necessarily covering) images
        if target.hilbert:
            C = tuple(q for q in X.points if q not in set(B) and rng.random() < 0.7)
            a = renamed_inclusion(X, B, "y")
            b = renamed_inclusion(X, C, "z")
            ip = target.inner(X, target.embed(a, target.v(a.source)), target.embed(b, target.v(b.source)))
            report.record("(IV_H)", ip == 0, None if ip == 0 else {"space": X.to_json(), "Y": list(B), "Z": list(C)})

        # functoriality and contractivity of embeddings
        ident = Embedding.inclusion(X, X.points)
        x = target.random_vector(rng, X, complex_)
        report.record("functor-identity", target.equal(X, target.embed(ident, x), x))
        inner_sub = random_subset(rng, Y)
        k = renamed_inclusion(Y, inner_sub, "k")
        t = target.random_vector(rng, k.source, complex_)
        report.record("functor-composition",
                      target.equal(X, target.embed(k.then(i), t), target.embed(i, target.embed(k, t))))
        report.record("contraction-embed", _le(target.norm(X, target.embed(i, u)), target.norm(Y, u),
                                                target.norm_sq(X, target.embed(i, u)), target.norm_sq(Y, u)))

        if target.full:
            # (II) along a refinement s: X' -> X
            Xr, s = random_refinement(rng, X)
            ok = target.equal(Xr, target.pullback(s, v), target.v(Xr))
            report.record("(II)", ok, None if ok else {"space": X.to_json(), "refinement": Xr.to_json(),
                                                       "map": dict(s.pairs)})
            Xrr, s2 = random_refinement(rng, Xr, prefix="q")
            comp = compose_partial(s2, s)
            report.record("functor-composition-pullback",
                          target.equal(Xrr, target.pullback(comp, x), target.pullback(s2, target.pullback(s, x))))
            px = target.pullback(s, x)
            report.record("contraction-pullback", _le(target.norm(Xr, px), target.norm(X, x),
                                                       target.norm_sq(Xr, px), target.norm_sq(X, x)))
    return report


# ---------------------------------------------------------------------------
# psi suite


def _psi_bound_ok(target, X, f, val) -> bool:
    p = target.p
    fnorm = sp_norm(f, p).value
    nsq = target.norm_sq(X, val)
    fsq = sp_norm_sq(f) if p == 2 else None
    return _le(target.norm(X, val), fnorm, nsq, fsq)


def psi_naturality_embedding(target, i: Embedding, g: SimpleFn) -> bool:
    """``F(i) psi_Y(g) = psi_X(g^X)``."""
    from initial_integrals.measures.spaces import extend_by_zero

    lhs = target.embed(i, psi(target, g))
    rhs = psi(target, extend_by_zero(i, g))
    return target.equal(i.target, lhs, rhs)


def psi_naturality_pullback(target, s: PartialMap, g: SimpleFn) -> bool:
    """``F(s) psi_Y(g) = psi_X(g o s)`` for total measure-preserving ``s``."""
    from initial_integrals.measures.spaces import lp_pullback

    lhs = target.pullback(s, psi(target, g))
    rhs = psi(target, lp_pullback(s, g))
    return target.equal(s.source, lhs, rhs)


def psi_suite(target: FunctorTarget, spaces: int = 100, maps: int = 100, seed=0,
              complex_: bool = False) -> CheckReport:
    """Linearity, naturality, norm bound, Beck-Chevalley and additivity for ``psi``."""
    rng = rng_for(seed)
    report = CheckReport(f"psi:{target.name}")
    for _ in range(spaces):
        X = random_space(rng)
        f = random_simple_fn(rng, X, complex_)
        g = random_simple_fn(rng, X, complex_)
        c = random_scalar(rng, complex_=complex_)
        pf, pg = psi(target, f), psi(target, g)
        report.record("linearity-sum", target.equal(X, psi(target, f + g), target.add(pf, pg)))
        report.record("linearity-scale", target.equal(X, psi(target, f.scale(c)), target.scale(c, pf)))
        report.record("unit", target.equal(X, psi(target, SimpleFn.constant(X)), target.v(X)))
        ok = _psi_bound_ok(target, X, f, pf)
        report.record("norm-bound", ok, None if ok else {"f": f.to_json()})
        parts = [random_subset(rng, X)]
        parts.append(tuple(q for q in X.points if q not in set(parts[0]) and rng.random() < 0.5))
        report.record("additivity", check_additivity(target, X, parts))
        report.record("additivity-empty", target.equal(X, v_sub(target, X, ()), target.zero(X)))
        report.record("additivity-singletons", check_additivity(target, X, [(q,) for q in X.points]))
    for _ in range(maps):
        X = random_space(rng)
        i, _ = complementary_pair(rng, X)
        g = random_simple_fn(rng, i.source, complex_)
        report.record("naturality-embedding", psi_naturality_embedding(target, i, g))
        if target.full:
            Y = random_space(rng)
            Xr, s = random_refinement(rng, Y)
            h = random_simple_fn(rng, Y, complex_)
            report.record("naturality-pullback", psi_naturality_pullback(target, s, h))
            report.record("beck-chevalley", check_beck_chevalley(target, s, random_subset(rng, Y)))
    return report


def pythagorean_gap(target: FunctorTarget, f: SimpleFn):
    """``||psi(f)||^2 - sum_c |c|^2 ||v^X_{f^-1(c)}||^2`` for Hilbert targets.

    The fibre contributions are orthogonal by (IV_H), so the gap is 0.
    """
    X = f.space
    total = target.norm_sq(X, psi(target, f))
    pieces = Fraction(0)
    for c, fibre in f.fibres().items():
        pieces += abs2(c) * target.norm_sq(X, v_sub(target, X, fibre))
    return total - pieces


def uniqueness_check(target: FunctorTarget, phi, trials: int = 100, seed=0) -> CheckReport:
    """A natural family ``phi(X, f)`` with ``phi(I_X) = v_X`` must agree with ``psi``."""
    rng = rng_for(seed)
    report = CheckReport(f"uniqueness:{target.name}")
    for _ in range(trials):
        X = random_space(rng)
        f = random_simple_fn(rng, X)
        report.record("unit", target.equal(X, tuple(phi(X, SimpleFn.constant(X))), target.v(X)))
        report.record("agrees-with-psi", target.equal(X, tuple(phi(X, f)), psi(target, f)))
    return report


__all__ = [
    "check_additivity",
    "check_beck_chevalley",
    "complementary_pair",
    "psi",
    "psi_naturality_embedding",
    "psi_naturality_pullback",
    "psi_suite",
    "pythagorean_gap",
    "random_coarsening",
    "random_partial_map",
    "random_refinement",
    "random_simple_fn",
    "random_space",
    "renamed_inclusion",
    "shrink_space",
    "uniqueness_check",
    "v_sub",
    "verify_axioms",
]
