from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import steps
from initial_integrals import universal as uni
from initial_integrals.dyadic import DyadicStep, LevelError, integrate_exact, p_norm, refine, scale
from initial_integrals.errors import AxiomViolation
from initial_integrals.exact import QVec

half = Fraction(1, 2)
I = DyadicStep.unit()


@pytest.fixture(scope="module")
def mean6():
    return uni.compile_theta(uni.mean_target(), 6)


def test_mean_levels_are_uniform(mean6):
    for n in range(7):
        assert mean6.matrix(n) == ((Fraction(1, 2**n),) * 2**n,)


def test_first_block_levels():
    table = uni.compile_theta(uni.first_block_target(), 4)
    for n in range(5):
        assert table.matrix(n) == ((1,) + (0,) * (2**n - 1),)


def test_apply_examples(mean6):
    assert apply(mean6, [1, 0, 2, 5]) == (2,)
    assert apply(mean6, [1]) == (1,)
    assert uni.apply_universal(mean6, scale(3, I)) == (3,)
    with pytest.raises(LevelError, match="recompile"):
        uni.apply_universal(mean6, refine(I, 7))


def apply(table, coeffs):
    return uni.apply_universal(table, DyadicStep.from_coeffs(coeffs))


def test_basepoint_at_every_level():
    for target in (uni.mean_target(), uni.first_block_target(), uni.expectation_target(2, 2)):
        table = uni.compile_theta(target, 5)
        for n in range(6):
            assert uni.apply_universal(table, refine(I, n)) == target.basepoint.scalars()


def test_verify_mean_and_first_block():
    assert uni.verify_morphism(uni.compile_theta(uni.mean_target(), 8), samples=1000, seed=1).ok
    assert uni.verify_morphism(uni.compile_theta(uni.first_block_target(), 8), samples=1000, seed=1).ok


def test_first_block_rejected_below_inf():
    with pytest.raises(AxiomViolation) as err:
        uni.first_block_target(1)
    assert err.value.axiom == "contraction"
    t = uni.first_block_target(1, bounded=True)
    assert t.certificate.estimate == 2
    assert uni.verify_morphism(uni.compile_theta(t, 6), samples=200).passed["structure"] == 200


def test_construction_gates():
    with pytest.raises(AxiomViolation) as err:
        uni.make_target([0], [[2, 0]], 1)
    assert err.value.axiom == "contraction"
    assert err.value.witness is not None
    with pytest.raises(AxiomViolation) as err:
        uni.make_target([2], [[half, half]], 1)
    assert err.value.axiom == "basepoint-norm"
    with pytest.raises(AxiomViolation) as err:
        uni.make_target([1], [[half, 0]], "inf")
    assert err.value.axiom == "fixed-basepoint"
    with pytest.raises(ValueError, match="delta must be"):
        uni.make_target([1], [[1, 0, 0]], 1)


def test_certificates():
    assert uni.mean_target().certificate.method == "exact"
    assert uni.mean_target().certificate.estimate == 1
    # 2^(1/2) * ||(1/2, 1/2)||_2 = 1
    t = uni.make_target([1], [[half, half]], 2)
    assert t.certificate.method == "closed-form"
    assert abs(t.certificate.estimate - 1.0) < 1e-12
    est = uni.expectation_target(2, 2).certificate
    assert est.method == "sampled" and est.estimate <= 1 + 1e-9


def test_uniqueness_probe():
    target = uni.mean_target()
    assert uni.uniqueness_probe(target, uni.compile_theta(target, 5))
    assert uni.uniqueness_probe(target, uni.compile_theta_columnwise(target, 5))
    assert not uni.uniqueness_probe(target, uni.compile_theta(uni.first_block_target(), 5))
    bad = uni.MorphismTable(target, ((QVec.from_scalars([1]), QVec.from_scalars([0])),))
    with pytest.raises(ValueError, match="shape"):
        uni.uniqueness_probe(target, bad)


def test_columnwise_matches_for_shipped():
    for target in (uni.first_block_target(), uni.expectation_target(2, "inf"), uni.expectation_target(1, 1)):
        assert uni.uniqueness_probe(target, uni.compile_theta_columnwise(target, 4))


def test_adamek_examples():
    rep = uni.adamek_chain("double_with_p_norm", 5, p=1)
    assert rep.dims == [1, 2, 4, 8, 16, 32] and rep.ok
    rep = uni.adamek_chain("prepend_scalar", 3, p=2)
    assert rep.dims == [1, 2, 3, 4] and rep.ok
    assert uni.adamek_chain("double_with_p_norm", 0).dims == [1]
    for p in (2, "inf", Fraction(3, 2)):
        assert uni.adamek_chain("double_with_p_norm", 4, p=p).ok
    with pytest.raises(ValueError):
        uni.adamek_chain("double_with_p_norm", -1)


def test_table_json_roundtrip(mean6):
    back = uni.MorphismTable.from_json(mean6.to_json())
    assert back.levels == mean6.levels and back.target == mean6.target
    t = uni.expectation_target(2, 3)
    assert uni.AlgebraTarget.from_json(t.to_json()) == t


def test_step_from_sampler():
    f, proxy = uni.step_from_sampler(lambda x: x, 6)
    assert f.level == 6 and proxy == 2.0**-8
    table = uni.compile_theta(uni.mean_target(), 6)
    assert abs(float(uni.apply_universal(table, f)[0]) - 0.5) < 1e-12


# random stochastic targets on F^2 with the sup norm at p = inf
stoch_row = st.lists(st.integers(0, 6), min_size=4, max_size=4).filter(any)


@st.composite
def stochastic_targets(draw):
    rows = []
    for _ in range(2):
        r = draw(stoch_row)
        rows.append([Fraction(c, sum(r)) for c in r])
    return uni.make_target([1, 1], rows, "inf", name="stochastic")


@given(stochastic_targets(), st.integers(0, 4))
def test_extension_coherence(target, n):
    table = uni.compile_theta(target, n + 1)
    cur, nxt = table.levels[n], table.levels[n + 1]
    # composing level n+1 with refinement sums adjacent pairs
    for a, b in zip(cur, nxt):
        assert b.take(0, len(b), 2) + b.take(1, len(b), 2) == a


@given(stochastic_targets(), steps(4), steps(4))
def test_structure_and_contraction(target, f, g):
    from initial_integrals.dyadic import juxtapose

    table = uni.compile_theta(target, 5)
    lhs = uni.apply_universal(table, juxtapose(f, g))
    assert lhs == target.apply_delta(uni.apply_universal(table, f), uni.apply_universal(table, g))
    assert target.vector_norm(uni.apply_universal(table, f)) <= p_norm(f, "inf").value


@given(steps(6))
def test_mean_is_integration(f):
    table = uni.compile_theta(uni.mean_target(), 6)
    assert uni.apply_universal(table, f) == (integrate_exact(f),)
