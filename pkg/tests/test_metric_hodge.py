from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grassmann_hodge.exterior_algebra import Multivector, all_blades, complement, wedge
from grassmann_hodge.metric_hodge import (
    Metric,
    double_star_sign,
    epsilon,
    hodge_star,
    lower_indices,
    minkowski_dual,
    pairing,
    pauli_dual,
    raise_indices,
)
from oracles import hodge_star_tensor, parity_by_cycles

fractions = st.fractions(min_value=-10, max_value=10, max_denominator=5)


@st.composite
def metric_and_form(draw, max_n=5, grade=None):
    n = draw(st.integers(1, max_n))
    sig = tuple(draw(st.lists(st.sampled_from((1, -1)), min_size=n, max_size=n)))
    g = Metric(sig, draw(st.sampled_from((1, -1))), draw(st.sampled_from((0, 1))))
    k = draw(st.integers(0, n)) if grade is None else grade
    blades = list(all_blades(n, g.base, k))
    chosen = draw(st.lists(st.sampled_from(blades), max_size=5, unique=True))
    return g, Multivector(n, {b: draw(fractions) for b in chosen}, base=g.base)


def test_metric_constructors():
    m = Metric.minkowski()
    assert (m.signature, m.base, m.det_sign) == ((1, -1, -1, -1), 0, -1)
    assert Metric.from_string("+---") == m
    assert Metric.from_string("+++").base == 1
    assert Metric.from_string("---").det_sign == -1
    assert str(Metric.euclidean(3)) == "+++"
    with pytest.raises(ValueError):
        Metric.from_string("+-+?")
    with pytest.raises(ValueError):
        Metric((1, 2))
    with pytest.raises(ValueError):
        Metric((1,), orientation=0)


def test_epsilon_examples():
    assert epsilon((1, 2, 3, 4), 4) == 1
    assert epsilon((2, 1, 3, 4), 4) == -1
    assert epsilon((1, 1, 3, 4), 4) == 0
    assert epsilon((1, 2, 3), 4) == 0
    with pytest.raises(ValueError):
        epsilon((1, 2, 3, 5), 4)


def test_epsilon_matches_cycle_oracle():
    from itertools import permutations

    for n in range(1, 6):
        for p in permutations(range(1, n + 1)):
            assert epsilon(p, n) == parity_by_cycles(p)


def test_star_examples():
    g3 = Metric.euclidean(3)
    assert hodge_star(Multivector.basis(3, 1), g3) == Multivector.parse("e2^e3", 3)
    assert hodge_star(Multivector.parse("e1^e2", 3), g3) == Multivector.basis(3, 3)
    m = Metric.minkowski()
    f = Multivector(4, {(0, 1): 1}, base=0)
    assert hodge_star(hodge_star(f, m), m) == -f
    assert double_star_sign(2, m) == -1


def test_raise_lower():
    m = Metric.minkowski()
    a = Multivector(4, {(0,): 1, (1,): 2, (0, 2): 3, (1, 3): 5}, base=0)
    r = raise_indices(a, m)
    assert r.coefficient((0,)) == 1
    assert r.coefficient((1,)) == -2
    assert r.coefficient((0, 2)) == -3
    assert r.coefficient((1, 3)) == 5
    assert lower_indices(r, m) == a
    with pytest.raises(ValueError, match="dimension mismatch"):
        raise_indices(Multivector.basis(3, 1), m)


def test_pairing_examples():
    g = Metric.euclidean(3)
    a = Multivector.basis(3, 1)
    assert pairing(a, hodge_star(a, g), g) == 1
    assert pairing(Multivector.basis(3, 1), Multivector.parse("e1^e3", 3)) == 0
    assert pairing(Multivector.basis(3, 2), Multivector.parse("e1^e3", 3)) == -1


def test_minkowski_dual_examples():
    f = Multivector(4, {(1, 2): 1})
    assert minkowski_dual(f) == Multivector(4, {(3, 4): 1})
    assert minkowski_dual(Multivector(4, {(1, 3): 1})) == Multivector(4, {(2, 4): -1})
    with pytest.raises(ValueError):
        minkowski_dual(Multivector(4, {(1,): 1}))
    with pytest.raises(ValueError):
        minkowski_dual(Multivector(3, {(1, 2): 1}))


def test_minkowski_dual_is_an_involution_on_six_vectors():
    for b in all_blades(4, 1, 2):
        f = Multivector(4, {b: 1})
        assert minkowski_dual(minkowski_dual(f)) == f


def test_pauli_dual_relation_to_star():
    # free indices first: agrees with * on 2-forms in dimension 4, sign (-1)^{p(n-p)} in general
    m = Metric.minkowski()
    for k in range(5):
        for b in all_blades(4, 0, k):
            xi = Multivector(4, {b: 1}, base=0)
            lhs = pauli_dual(raise_indices(xi, m), m)
            assert lhs == hodge_star(xi, m) * (-1) ** ((4 - k) * k)


@pytest.mark.parametrize("n", range(1, 6))
def test_star_matches_tensor_oracle_all_signatures(n):
    for sig in product((1, -1), repeat=n):
        for orientation in (1, -1):
            g = Metric(sig, orientation, 0)
            for b in all_blades(n, 0):
                got = hodge_star(Multivector(n, {b: 1}, base=0), g)
                want = hodge_star_tensor({b: Fraction(1)}, sig, orientation, base=0)
                assert dict(got.terms) == want


def test_euclidean_star_is_complement():
    for n in range(1, 7):
        g = Metric.euclidean(n)
        for b in all_blades(n):
            x = Multivector(n, {b: 1})
            assert hodge_star(x, g) == complement(x)


@given(metric_and_form())
def test_double_star_law(args):
    g, P = args
    for k, part in P.homogeneous_parts().items():
        assert hodge_star(hodge_star(part, g), g) == part * double_star_sign(k, g)


@given(metric_and_form())
def test_orientation_flips_star(args):
    g, P = args
    assert hodge_star(P, g.with_orientation(-g.orientation)) == -hodge_star(P, g)


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))), st.data())
def test_inner_product_identity(nk, data):
    # alpha ^ *beta = <alpha, beta> vol, with <e_I, e_I> = prod g^ii
    n, k = nk
    sig = tuple(data.draw(st.lists(st.sampled_from((1, -1)), min_size=n, max_size=n)))
    g = Metric(sig)
    blades = list(all_blades(n, 1, k))
    A = Multivector(n, {b: data.draw(fractions) for b in blades})
    B = Multivector(n, {b: data.draw(fractions) for b in blades})
    inner = sum((A.coefficient(b) * B.coefficient(b) * g.index_sign(b) for b in blades), Fraction(0))
    assert wedge(A, hodge_star(B, g)) == Multivector.volume(n) * inner
    assert pairing(A, hodge_star(B, g), g) == inner


def test_double_star_sign_range():
    with pytest.raises(ValueError):
        double_star_sign(5, Metric.minkowski())
