import math
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import complexes, fractions
from initial_integrals import _kernels_py, kernels
from initial_integrals.exact import (
    GaussianRational,
    QVec,
    abs2,
    conj,
    conjugate_exponent,
    parse_exponent,
    scalar_to_json,
)

compiled = pytest.importorskip("initial_integrals._kernels")

small = st.integers(-1000, 1000)
huge = st.integers(-(10**40), 10**40)
ints = st.one_of(small, huge, st.sampled_from([2**63 - 1, -(2**63), 2**62, -(2**62) - 1]))


def test_backend_selected():
    assert kernels.IMPLEMENTATION == compiled.IMPLEMENTATION
    assert _kernels_py.IMPLEMENTATION == "python"


def test_pure_env_forces_fallback():
    out = subprocess.run(
        [sys.executable, "-c", "from initial_integrals import kernels; print(kernels.IMPLEMENTATION)"],
        env={"INITIAL_INTEGRALS_PURE": "1", "PATH": ""}, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@given(st.lists(ints, max_size=40), st.lists(ints, max_size=40))
def test_parity_binary(a, b):
    n = min(len(a), len(b))
    a, b = tuple(a[:n]), tuple(b[:n])
    assert compiled.dot(a, b) == _kernels_py.dot(a, b)
    assert compiled.lincomb([(3, a), (-2, b)], n) == _kernels_py.lincomb([(3, a), (-2, b)], n)


@given(st.lists(ints, max_size=40), st.integers(1, 4))
def test_parity_unary(a, k):
    a = tuple(a)
    assert compiled.prefix_sums(a) == _kernels_py.prefix_sums(a)
    assert compiled.repeat_each(a, k) == _kernels_py.repeat_each(a, k)
    assert compiled.max_abs(a) == _kernels_py.max_abs(a)
    assert compiled.sum_abs(a) == _kernels_py.sum_abs(a)
    even = a[: len(a) // 2 * 2]
    assert compiled.pairs_equal(even) == _kernels_py.pairs_equal(even)
    assert compiled.pairs_equal(_kernels_py.repeat_each(a, 2))


@given(st.lists(ints, max_size=40), st.sampled_from([1.5, 2.0, 3.0]))
def test_parity_power_sum(a, p):
    m1, s1 = compiled.power_sum(tuple(a), p)
    m2, s2 = _kernels_py.power_sum(tuple(a), p)
    assert m1 == m2
    assert math.isclose(s1, s2, rel_tol=1e-12)


@given(st.lists(st.tuples(small, small), max_size=30))
def test_parity_power_sum_complex(pairs):
    re = tuple(x for x, _ in pairs)
    im = tuple(y for _, y in pairs)
    m1, s1 = compiled.power_sum_complex(re, im, 2.0)
    m2, s2 = _kernels_py.power_sum_complex(re, im, 2.0)
    assert math.isclose(m1, m2, rel_tol=1e-15) and math.isclose(s1, s2, rel_tol=1e-12)


@given(st.lists(st.one_of(fractions, complexes), min_size=1, max_size=16))
def test_qvec_roundtrip_normalised(values):
    v = QVec.from_scalars(values)
    assert v.scalars() == tuple(values)
    assert v.den > 0
    assert math.gcd(v.den, *v.re, *(v.im or ())) == 1
    assert (v.im is None) == all(isinstance(x, Fraction) for x in v.scalars())


@given(st.lists(fractions, min_size=1, max_size=16), st.lists(fractions, min_size=1, max_size=16))
def test_qvec_arithmetic(a, b):
    n = min(len(a), len(b))
    a, b = a[:n], b[:n]
    va, vb = QVec.from_scalars(a), QVec.from_scalars(b)
    assert (va + vb).scalars() == tuple(x + y for x, y in zip(a, b))
    assert va.dot(vb) == sum(x * y for x, y in zip(a, b))
    assert va.total() == sum(a)
    assert va.max_abs() == max(map(abs, a))
    assert va.abs_sum() == sum(map(abs, a))


@given(complexes, complexes)
def test_gaussian_field(z, w):
    assert z * w == w * z
    assert (z + w) - w == z
    assert abs2(z) == z * conj(z)
    if w != 0:
        assert (z / w) * w == z


def test_scalar_json():
    assert scalar_to_json(Fraction(1, 2)) == "1/2"
    assert scalar_to_json(GaussianRational(1, Fraction(-2, 3))) == {"re": "1", "im": "-2/3"}


def test_exponents():
    assert parse_exponent("inf") == math.inf
    assert parse_exponent("3/2") == Fraction(3, 2)
    assert conjugate_exponent(Fraction(3, 2)) == 3
    assert conjugate_exponent(1) == math.inf
    with pytest.raises(ValueError, match="not a norm exponent"):
        parse_exponent("1/2")
