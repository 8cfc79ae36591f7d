from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from initial_integrals.errors import AxiomViolation
from initial_integrals.measures import axioms as ax
from initial_integrals.measures import spaces as sp
from initial_integrals.measures import targets as tg

h = Fraction(1, 2)
seeds = st.integers(0, 2**32 - 1)


def space(**weights):
    return sp.FiniteMeasureSpace.from_weights(weights)


def fn(X, *values):
    return sp.SimpleFn(X, tuple(Fraction(v) for v in values))


def rng(seed):
    return np.random.default_rng(seed)


# ---------------------------------------------------------------------------
# spaces and maps


def test_space_validation_and_json():
    X = space(a=h, b=Fraction(1, 4), c=0)
    assert X.total == Fraction(3, 4)
    assert sp.FiniteMeasureSpace.from_json(X.to_json()) == X
    assert X.to_json() == {"points": ["a", "b", "c"], "weights": {"a": "1/2", "b": "1/4", "c": "0"}}
    with pytest.raises(ValueError):
        space(a=-1)


def test_compose_examples():
    X = space(a=h, b=h)
    Y = space(y=1)
    s = sp.PartialMap.make(X, Y, {"a": "y", "b": "y"})
    assert sp.compose_partial(s, sp.PartialMap.identity(Y)) == s
    assert sp.compose_partial(sp.PartialMap.identity(X), s) == s
    # g misses y2, so the composite forgets its preimage
    Y2 = space(y1=h, y2=h)
    f = sp.PartialMap.make(X, Y2, {"a": "y1", "b": "y2"})
    g = sp.PartialMap.make(Y2, space(z=h), {"y1": "z"})
    gf = sp.compose_partial(f, g)
    assert gf.domain == ("a",) and gf.is_measure_preserving()
    with pytest.raises(ValueError, match="space mismatch"):
        sp.compose_partial(g, f)
    with pytest.raises(ValueError, match="measure-preserving"):
        sp.PartialMap.make(X, Y, {"a": "y"})


def test_is_embedding_examples():
    X = space(a=h, b=Fraction(1, 3), c=1)
    assert sp.is_embedding(sp.Embedding.inclusion(X, ("a", "c")).as_partial())
    Y = space(y=1)
    const = sp.PartialMap.make(space(a=h, b=h), Y, {"a": "y", "b": "y"})
    assert not sp.is_embedding(const)
    bad = sp.PartialMap.make(space(a=h, b=h), space(y=h, z=h), {"a": "z", "b": "y"}, check=False)
    assert sp.is_embedding(bad)
    skew = sp.PartialMap(space(a=h, b=1), space(y=1, z=h), (("a", "y"), ("b", "z")))
    assert not sp.is_embedding(skew)
    with pytest.raises(ValueError, match="weight mismatch"):
        sp.Embedding.make(space(y=h), space(x=1), {"y": "x"})


def test_pullback_examples():
    Y = space(y=1)
    g = fn(Y, 7)
    assert sp.lp_pullback(sp.PartialMap.identity(Y), g) == g
    X = space(a=1, b=h)
    empty = sp.PartialMap.make(X, space(), {})
    assert sp.lp_pullback(empty, sp.SimpleFn(space(), ())).values == (0, 0)
    s = sp.PartialMap.make(X, Y, {"a": "y"})
    assert sp.lp_pullback(s, g).values == (7, 0)


def test_norm_examples():
    X = space(a=1, b=3)
    assert sp.sp_norm(fn(X, 1, 1), 1).value == 4
    assert sp.sp_norm(fn(X, 1, 1), "inf").value == 1
    Z = space(a=1, n=0)
    assert sp.sp_norm(fn(Z, 0, 9), "inf").value == 0
    assert fn(Z, 0, 9).ae_equal(fn(Z, 0, 0))


def test_integration_and_density_examples():
    X = space(a=Fraction(3, 2), b=Fraction(5, 2))
    assert sp.integrate_measure(sp.SimpleFn.constant(X)) == 4
    H = space(a=h, b=h)
    assert sp.integrate_measure(fn(H, 3, 5)) == 4
    assert sp.density_measure(sp.SimpleFn.constant(X)).mass == X.weights
    m = sp.density_measure(fn(H, 1, -1))
    assert m.mass == (h, -h) and m.tv_norm() == 1
    assert sp.density_measure(fn(space(a=0, b=1), 8, 1)).mass[0] == 0


def test_inner_product_examples():
    X = space(a=h, b=h, c=1)
    assert sp.inner_product(sp.SimpleFn.indicator(X, ("a",)), sp.SimpleFn.indicator(X, ("b", "c"))) == 0
    assert sp.inner_product(sp.SimpleFn.constant(X), sp.SimpleFn.constant(X)) == 2
    H = space(a=h, b=h)
    assert sp.inner_product(fn(H, 3, 5), fn(H, 1, 1)) == 4
    with pytest.raises(ValueError, match="space mismatch"):
        sp.inner_product(fn(H, 1, 1), fn(X, 1, 1, 1))


def test_simple_fn_json():
    f = fn(space(a=h, b=0), 3, Fraction(-1, 7))
    assert sp.SimpleFn.from_json(f.to_json()) == f


# ---------------------------------------------------------------------------
# psi and the axioms


def test_psi_examples():
    H = space(x1=h, x2=h)
    f = fn(H, 3, 5)
    assert ax.psi(tg.ScalarTarget(), f) == (4,)
    for t in tg.shipped_targets(rng(0)):
        assert t.equal(H, ax.psi(t, sp.SimpleFn.constant(H)), t.v(H))
    S2 = tg.SimpleFunctionTarget(2)
    assert ax.psi(S2, f) == f.values


def test_psi_rejects_bad_targets():
    X = space(a=1)
    with pytest.raises(AxiomViolation) as err:
        ax.psi(tg.DoubledTarget(1), fn(X, 1))
    assert err.value.axiom == "(III)"
    X2 = space(a=1, b=1)
    with pytest.raises(AxiomViolation) as err:
        ax.psi(tg.TruncatedMassTarget(), fn(X2, 1, 2))
    assert err.value.axiom == "(I)"


@pytest.mark.parametrize("target", [
    tg.ScalarTarget(1),
    tg.SimpleFunctionTarget(1),
    tg.SimpleFunctionTarget(2),
    tg.SimpleFunctionTarget(3),
    tg.SimpleFunctionTarget("inf"),
    tg.SimpleFunctionTarget(2, full=False),
    tg.MeasureTarget(),
    tg.HilbertTarget.random(np.random.default_rng(4)),
], ids=lambda t: f"{t.name}-{t.p}")
def test_axioms_hold(target):
    rep = ax.verify_axioms(target, trials=80, seed=2)
    assert rep.ok, rep.to_json()


@pytest.mark.parametrize("p", [1, 2, Fraction(3, 2), "inf"])
def test_simple_functions_attain_equality(p):
    rep = ax.verify_axioms(tg.SimpleFunctionTarget(p), trials=60, seed=1, strict=True)
    assert rep.ok, rep.to_json()


def test_complex_mode():
    rep = ax.verify_axioms(tg.SimpleFunctionTarget(2), trials=40, seed=3, complex_=True)
    assert rep.ok
    assert ax.psi_suite(tg.SimpleFunctionTarget(2), 30, 30, seed=3, complex_=True).ok


def test_doubled_target_shrinks():
    rep = ax.verify_axioms(tg.DoubledTarget(1), trials=50, seed=0)
    assert rep.failed["(III)"] > 0
    witness = next(c for c in rep.counterexamples if c["check"] == "(III)")["witness"]
    assert len(witness["space"]["points"]) == 1


def test_truncated_mass_shrinks():
    rep = ax.verify_axioms(tg.TruncatedMassTarget(), trials=100, seed=0)
    assert rep.failed.get("(I)", 0) > 0
    assert not rep.failed.get("(III)") and not rep.failed.get("(IV)")
    witness = next(c for c in rep.counterexamples if c["check"] == "(I)")["witness"]
    assert len(witness["space"]["points"]) <= 2


def test_additivity_examples():
    X = space(a=h, b=Fraction(1, 3), c=0)
    for t in tg.shipped_targets(rng(1)):
        assert t.equal(X, ax.v_sub(t, X, ()), t.zero(X))
        assert ax.check_additivity(t, X, [])
        assert ax.check_additivity(t, X, [(q,) for q in X.points])
        assert ax.check_additivity(t, X, [("a", "b")])


def test_beck_chevalley_examples():
    Y = space(y=1, z=h)
    X, s = ax.random_refinement(rng(0), Y)
    for t in (tg.SimpleFunctionTarget(2), tg.ScalarTarget(1)):
        assert ax.check_beck_chevalley(t, s, Y.points)
        assert ax.check_beck_chevalley(t, s, ())
        assert ax.check_beck_chevalley(t, s, ("y",))


@pytest.mark.parametrize("target", tg.shipped_targets(np.random.default_rng(9)), ids=lambda t: t.name)
def test_psi_suite(target):
    rep = ax.psi_suite(target, spaces=60, maps=60, seed=11)
    assert rep.ok, rep.to_json()


def test_uniqueness_against_integration():
    rep = ax.uniqueness_check(tg.ScalarTarget(1), lambda X, f: (sp.integrate_measure(f),), trials=100)
    assert rep.ok
    wrong = ax.uniqueness_check(tg.ScalarTarget(1), lambda X, f: (max(f.values, default=0) * X.total,), trials=100)
    assert not wrong.ok


# ---------------------------------------------------------------------------
# properties over generated spaces


@given(seeds)
def test_category_laws(seed):
    r = rng(seed)
    Z = ax.random_space(r)
    Y, g = ax.random_partial_map(r, Z)
    X, f = ax.random_partial_map(r, Y)
    W, e = ax.random_partial_map(r, X)
    left = sp.compose_partial(sp.compose_partial(e, f), g)
    right = sp.compose_partial(e, sp.compose_partial(f, g))
    assert left == right and left.is_measure_preserving()
    assert sp.compose_partial(sp.PartialMap.identity(W), e) == e
    assert sp.compose_partial(e, sp.PartialMap.identity(X)) == e
    assert set(sp.compose_partial(f, g).domain) == set(f.preimage(g.domain))


@given(seeds)
def test_change_of_variables(seed):
    r = rng(seed)
    Y = ax.random_space(r)
    X, s = ax.random_refinement(r, Y)
    g = ax.random_simple_fn(r, Y)
    assert sp.integrate_measure(sp.lp_pullback(s, g)) == sp.integrate_measure(g)
    i, _ = ax.complementary_pair(r, Y)
    h = ax.random_simple_fn(r, i.source)
    assert sp.integrate_measure(sp.extend_by_zero(i, h)) == sp.integrate_measure(h)
    assert sp.integrate_measure(g) == ax.psi(tg.ScalarTarget(), g)[0]


@given(seeds, st.booleans())
def test_density_isometry(seed, complex_):
    r = rng(seed)
    X = ax.random_space(r)
    f = ax.random_simple_fn(r, X, complex_=complex_)
    nu = sp.density_measure(f)
    if complex_:
        # moduli of Gaussian rationals are irrational in general
        assert abs(nu.tv_norm() - sp.sp_norm(f, 1).value) <= 1e-12 * max(1.0, nu.tv_norm())
    else:
        assert nu.tv_norm() == sp.sp_norm(f, 1).value
    i, _ = ax.complementary_pair(r, X)
    g = ax.random_simple_fn(r, i.source, complex_=complex_)
    # extension by zero commutes with taking densities
    lhs = sp.density_measure(sp.extend_by_zero(i, g)).mass
    assert lhs == tg.MeasureTarget().embed(i, sp.density_measure(g).mass)


@given(seeds)
def test_lemma_bound_on_subsets(seed):
    r = rng(seed)
    X = ax.random_space(r)
    B = ax.random_subset(r, X)
    mu = X.measure(B)
    for t in tg.shipped_targets(r):
        v = ax.v_sub(t, X, B)
        if mu == 0:
            assert t.equal(X, v, t.zero(X))
        if t.p == 1:
            assert t.norm(X, v) <= mu
        else:
            assert t.norm_sq(X, v) <= mu


@given(seeds)
def test_hilbert_orthogonality(seed):
    r = rng(seed)
    X = ax.random_space(r)
    B = ax.random_subset(r, X)
    C = tuple(q for q in X.points if q not in B)
    assert sp.inner_product(sp.SimpleFn.indicator(X, B), sp.SimpleFn.indicator(X, C)) == 0
    H = tg.HilbertTarget.random(r)
    f = ax.random_simple_fn(r, X)
    assert ax.pythagorean_gap(H, f) == 0
    assert ax.pythagorean_gap(tg.SimpleFunctionTarget(2), f) == 0
