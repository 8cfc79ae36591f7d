import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import fractions, step_pairs, steps
from initial_integrals import instances as ins
from initial_integrals import universal as uni
from initial_integrals.dyadic import DyadicStep, integrate_exact, juxtapose, p_norm, pointwise_mul, refine

S = DyadicStep.from_coeffs
I = DyadicStep.unit()
PL = ins.PiecewiseLinear.from_values
C = ins.CylinderFunction.from_coeffs


def test_integrate_examples():
    assert ins.integrate(S([1, 0, 2, 5])) == 2
    assert ins.integrate(I) == 1
    f, g = S([1, 3]), S([7, 0, 0, 1])
    assert ins.integrate(juxtapose(f, g)) == (ins.integrate(f) + ins.integrate(g)) / 2


def test_indefinite_examples():
    for n in range(4):
        assert ins.indefinite_integral(refine(I, n)) == ins.PiecewiseLinear.identity(n)
    assert ins.indefinite_integral(S([2, -2])).values.scalars() == (0, 1, 0)
    assert ins.indefinite_integral(DyadicStep.zero()) == ins.PiecewiseLinear.zero()


def test_kappa_examples():
    i = ins.PiecewiseLinear.identity()
    assert ins.kappa(i, i) == i
    zero = ins.PiecewiseLinear.zero()
    assert ins.kappa(zero, zero) == zero
    tent = PL([0, 1, 0])
    out = ins.kappa(tent, zero)
    # left half is F(2x)/2, right half is (F(1) + 0)/2 = 0
    assert out.level == 2
    assert out.values.scalars() == (0, Fraction(1, 2), 0, 0, 0)


def test_recover_examples():
    assert ins.recover_function(ins.PiecewiseLinear.identity(3)) == I
    assert ins.recover_function(PL([0, 1, 0])) == S([2, -2])
    assert ins.recover_function(ins.PiecewiseLinear.zero(2)) == DyadicStep.zero()


def test_piecewise_linear_validation():
    with pytest.raises(ValueError):
        PL([1, 2])
    F = PL([0, 1, 0])
    assert ins.PiecewiseLinear.from_json(F.to_json()) == F
    assert F.refine(2).values.scalars() == (0, Fraction(1, 2), 1, Fraction(1, 2), 0)
    assert F.sup_norm() == 1


def test_kappa_target_two_paths():
    table = uni.compile_theta(ins.kappa_target(5), 5)
    rng = np.random.default_rng(3)
    from initial_integrals.generators import random_step

    for _ in range(200):
        f = random_step(rng, 5)
        assert ins.indefinite_via_universal(table, refine(f, 5)) == ins.indefinite_integral(f)
    assert ins.kappa_target(4).certificate.estimate == 1


def test_inclusion_examples():
    res = ins.inclusion_map(S([3, 4]), 2, 1)
    assert res.step == S([3, 4])
    assert res.p_norm.value == Fraction(7, 2)
    assert math.isclose(res.r_norm.value, math.sqrt(12.5))
    res = ins.inclusion_map(I, 4, 2)
    assert float(res.p_norm.value) == float(res.r_norm.value) == 1
    res = ins.inclusion_map(S([-5]), "inf", 1)
    assert res.p_norm.value == res.r_norm.value == 5
    with pytest.raises(ValueError, match="wrong direction: inclusion goes r into p"):
        ins.inclusion_map(I, 1, 2)


def test_pairing_examples():
    assert ins.pairing(S([1, 1]), S([1, -1]), 2, 2) == 0
    g = S([3, -1, 4, 1])
    assert ins.pairing(I, g, 3, Fraction(3, 2)) == integrate_exact(g)
    f = S([3, 4])
    assert ins.pairing(f, f, 2, 2) == Fraction(25, 2)
    assert math.isclose(ins.holder_bound(f, f, 2, 2), 12.5, rel_tol=1e-15)
    with pytest.raises(ValueError, match="non-conjugate exponents"):
        ins.pairing(f, f, 2, 3)
    assert not ins.conjugate_ok(1, "inf")


def test_gamma_examples():
    n = 2
    j = tuple(tuple(Fraction(int(a == b)) for b in range(4)) for a in range(4))
    eye8 = tuple(tuple(Fraction(int(a == b)) for b in range(8)) for a in range(8))
    assert ins.gamma_hom(j, j, n) == eye8
    zero = tuple((Fraction(0),) * 4 for _ in range(4))
    assert all(c == 0 for r in ins.gamma_hom(zero, zero, n) for c in r)
    phi = ((1, 2, 0, 0), (0, 1, 0, 0), (0, 0, 3, 0), (1, 1, 1, 1))
    g1, g2 = S([1, 2, 3, 4]), S([5, 6, 7, 8])
    out = ins.apply_operator(ins.gamma_hom(phi, zero, n), juxtapose(g1, g2))
    assert out == juxtapose(ins.apply_operator(phi, g1), DyadicStep.zero())
    with pytest.raises(ValueError):
        ins.gamma_hom(phi, zero, 3)


def test_gamma_norm_chain():
    rng = np.random.default_rng(0)
    for q in (1, 2, 3, "inf"):
        phi1 = rng.integers(-3, 4, size=(4, 4)).tolist()
        phi2 = rng.integers(-3, 4, size=(4, 4)).tolist()
        est, bound = ins.gamma_norm_chain(phi1, phi2, 2, q, samples=500)
        assert est <= bound + 1e-9


def test_cantor_examples():
    f = C([1, 2, 3, 4])
    assert ins.cantor_project(f, 5) == f
    assert ins.cantor_project(f, 1) == C([1, 1, 3, 3])
    assert ins.cantor_project(C([1]), 0) == C([1])
    with pytest.raises(ValueError):
        ins.cantor_project(f, -1)
    assert ins.cantor_to_interval(C([1])) == I
    g = ins.cantor_to_interval(C([1, 2]))
    assert p_norm(g, 1).value == Fraction(3, 2) <= p_norm(g, "inf").value == 2
    h = ins.cantor_to_interval(C([0, 1, 0, 0]))
    assert p_norm(h, 1).value == Fraction(1, 4)


@given(st.integers(0, 2**32), st.integers(1, 7), st.fractions(min_value=0, max_value=10, max_denominator=8))
def test_lipschitz_density(seed, level, L):
    f = ins.lipschitz_cylinder(np.random.default_rng(seed), level, L)
    for n in range(level + 1):
        assert ins.sup_distance(f, ins.cantor_project(f, n)) <= L / 2**n


@given(st.integers(0, 2**32), st.integers(1, 5))
def test_lipschitz_generator_is_lipschitz(seed, level):
    L = Fraction(3)
    f = ins.lipschitz_cylinder(np.random.default_rng(seed), level, L)
    vals = f.values.scalars()
    for x in range(len(vals)):
        for y in range(x + 1, len(vals)):
            first = level - (x ^ y).bit_length()
            assert abs(vals[x] - vals[y]) <= L / 2**first


@given(steps(6))
def test_integration_agrees(f):
    assert ins.integrate(f) == integrate_exact(f)
    assert ins.functional_equation_holds(ins.mean_table(7), f)


@given(steps(6))
def test_fundamental_theorem_roundtrip(f):
    F = ins.indefinite_integral(f)
    assert F.values[0] == 0
    assert ins.recover_function(F).same_representative(f)
    assert ins.recover_function(F.canonical()) == f


@given(steps(4), steps(4))
def test_kappa_is_contraction(f, g):
    F, G = ins.indefinite_integral(f), ins.indefinite_integral(g)
    out = ins.kappa(F, G)
    assert out.sup_norm() <= max(F.sup_norm(), G.sup_norm())
    assert ins.indefinite_integral(juxtapose(f, g)) == out


@given(step_pairs(), st.sampled_from([(2, 2), (3, Fraction(3, 2)), (Fraction(4, 3), 4)]))
def test_holder(pair, pq):
    f, g = pair
    p, q = pq
    assert abs(ins.pairing(f, g, p, q)) <= ins.holder_bound(f, g, p, q) + 1e-9


@given(steps(5))
def test_holder_equality(f):
    assert math.isclose(ins.pairing(f, f, 2, 2), ins.holder_bound(f, f, 2, 2), rel_tol=1e-12, abs_tol=1e-12)


@given(step_pairs(4), step_pairs(4))
def test_product_splits(fs, gs):
    (f1, f2), (g1, g2) = fs, gs
    lhs = pointwise_mul(juxtapose(f1, f2), juxtapose(g1, g2))
    assert lhs == juxtapose(pointwise_mul(f1, g1), pointwise_mul(f2, g2))


@given(steps(5), st.sampled_from([(1, 2), (2, 4), (1, "inf"), (Fraction(3, 2), 3)]))
def test_power_mean_inclusion(f, pr):
    p, r = pr
    res = ins.inclusion_map(f, r, p)
    assert float(res.p_norm.value) <= float(res.r_norm.value) * (1 + 1e-12) + 1e-12


@given(st.lists(fractions, min_size=4, max_size=4))
def test_cylinder_sup_dominates(coeffs):
    f = C(coeffs)
    step = ins.cantor_to_interval(f)
    for p in (1, 2, 3):
        assert float(p_norm(step, p).value) <= float(f.sup_norm()) * (1 + 1e-12)
