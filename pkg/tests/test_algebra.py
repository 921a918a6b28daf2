"""Downset algebra operations against definitional brute-force oracles.

The difference oracle minimizes over all downsets, the strong-order oracle
quantifies the defining implication, and irreducibility is tested by
scanning all joins and meets.  Frozen values for the bundled fixtures were
computed by hand from the two- and three-point diagrams.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coheyting.algebra import (
    Algebra,
    Element,
    MINUS_INFINITY,
    PLUS_INFINITY,
    check_dL_preserved,
    fiber_max,
    fiber_min,
    identity_morphism,
    make_morphism,
)
from coheyting.errors import (
    EmptyElement,
    InfiniteArithmetic,
    NotADownset,
    NotMonotone,
    NotOpen,
    OwnerMismatch,
)
from coheyting.fixtures import load_fixture
from coheyting.posets import build_poset, enumerate_posets


def algebra_of(name: str) -> Algebra:
    poset, _ = load_fixture(name)
    return Algebra(poset)


def oracle_diff(algebra: Algebra, a: Element, b: Element) -> Element:
    """Least c with a <= b | c, by scanning every element."""
    candidates = [
        c for c in algebra.elements() if a.pts & ~(b.pts | c.pts) == 0
    ]
    # the candidate set is meet-closed, so its meet is the least member
    total = algebra.top()
    for c in candidates:
        total = total & c
    assert total in candidates
    return total


def oracle_strongly_below(algebra: Algebra, b: Element, a: Element) -> bool:
    """b << a iff b <= a and every c with a <= b | c already has a <= c."""
    if not b <= a:
        return False
    for c in algebra.elements():
        if a.pts & ~(b.pts | c.pts) == 0 and not a <= c:
            return False
    return True


@pytest.fixture(scope="module")
def pool():
    out = []
    for poset in enumerate_posets(4):
        algebra = Algebra(poset)
        out.append((algebra, algebra.elements()))
    return out


def test_element_validation():
    algebra = algebra_of("c2")
    with pytest.raises(NotADownset):
        algebra.element(0b10)
    a2 = algebra_of("a2")
    with pytest.raises(OwnerMismatch):
        a2.element(algebra.top())


def test_difference_matches_minimization_oracle(pool):
    for algebra, elems in pool:
        for a in elems:
            for b in elems:
                assert (a - b) == oracle_diff(algebra, a, b)


def test_strong_order_matches_quantified_oracle(pool):
    for algebra, elems in pool:
        for a in elems:
            for b in elems:
                assert algebra.strongly_below(b, a) == oracle_strongly_below(
                    algebra, b, a
                )


def test_strong_order_zero_cases():
    algebra = algebra_of("c2")
    bottom, top = algebra.bottom(), algebra.top()
    assert algebra.strongly_below(bottom, bottom)
    assert algebra.strongly_below(bottom, top)
    assert not algebra.strongly_below(top, top)


def test_fixture_dimensions():
    c2 = algebra_of("c2")
    assert c2.size() == 3
    assert c2.dim_algebra() == 1
    a2 = algebra_of("a2")
    assert a2.size() == 4
    assert a2.dim_algebra() == 0
    v3 = algebra_of("v3")
    assert v3.size() == 5
    assert v3.dim_algebra() == 1


def test_codim_and_dim_values_on_v3():
    v3 = algebra_of("v3")
    spec = v3.spec
    full = v3.top()
    p0 = v3.element(spec.down_closure(1 << spec.names.index("p0")))
    p01 = v3.element(spec.down_closure(1 << spec.names.index("p1")))
    assert v3.codim(full) == 0
    assert v3.codim(p0) == 1
    assert v3.codim(p01) == 0
    assert v3.codim(v3.bottom()) == PLUS_INFINITY
    assert v3.dim_elt(full) == 1
    assert v3.dim_elt(p0) == 0
    assert v3.dim_elt(p01) == 1
    assert v3.dim_elt(v3.bottom()) == MINUS_INFINITY


def test_infinite_values_compare_but_do_not_add():
    assert MINUS_INFINITY < -10 ** 9 < 10 ** 9 < PLUS_INFINITY
    assert not PLUS_INFINITY < PLUS_INFINITY
    assert PLUS_INFINITY >= PLUS_INFINITY
    assert max(3, MINUS_INFINITY) == 3
    assert min(3, PLUS_INFINITY) == 3
    with pytest.raises(InfiniteArithmetic):
        PLUS_INFINITY + 1
    with pytest.raises(InfiniteArithmetic):
        1 - MINUS_INFINITY


def test_epsilon_chain_on_v3():
    v3 = algebra_of("v3")
    assert v3.epsilon(0) == v3.top()
    assert str(v3.epsilon(1)) == "{p0}"
    assert v3.epsilon(2) == v3.bottom()
    assert v3.epsilon(9) == v3.bottom()


def test_epsilon_is_largest_of_its_codimension(pool):
    for algebra, elems in pool:
        height = algebra.spec.height()
        for d in range(height + 2):
            eps = algebra.epsilon(d)
            for a in elems:
                if algebra.codim(a) >= d:
                    assert a <= eps


def test_irreducibles_definitional(pool):
    for algebra, elems in pool:
        joins = {
            a
            for a in elems
            if not a.is_bottom()
            and all((y | z) != a or y == a or z == a for y in elems for z in elems)
        }
        meets = {
            a
            for a in elems
            if a != algebra.top()
            and all((y & z) != a or y == a or z == a for y in elems for z in elems)
        }
        assert set(algebra.join_irreducibles()) == joins
        assert set(algebra.meet_irreducibles()) == meets


def test_irreducibles_on_v3():
    v3 = algebra_of("v3")
    assert sorted(str(x) for x in v3.join_irreducibles()) == [
        "{p0,p1}",
        "{p0,p2}",
        "{p0}",
    ]
    assert sorted(str(x) for x in v3.meet_irreducibles()) == [
        "{p0,p1}",
        "{p0,p2}",
        "{}",
    ]


def test_supports_and_conjugates_on_v3():
    v3 = algebra_of("v3")
    top = v3.top()
    assert sorted(str(x) for x in v3.jsupp(top)) == ["{p0,p1}", "{p0,p2}"]
    assert [str(x) for x in v3.msupp(v3.bottom())] == ["{}"]
    p0 = v3.element({"p0"})
    assert str(v3.conj_up(p0)) == "{}"
    assert str(v3.conj_down(v3.element(0))) == "{p0}"


def test_minimal_primes_and_omega():
    v3 = algebra_of("v3")
    top = v3.top()
    primes = v3.minimal_primes(top)
    assert v3.spec.format_points(primes) == "{p1,p2}"
    with pytest.raises(EmptyElement):
        v3.minimal_primes(v3.bottom())
    omega = v3.omega_ideal()
    assert omega.gen == v3.bottom()
    assert v3.ideal_dL(1).gen == v3.epsilon(1)
    assert v3.bottom() in omega
    assert top not in omega


def test_quotient_identifies_exactly_mod_epsilon(pool):
    for algebra, elems in pool:
        for d in range(algebra.spec.height() + 2):
            eps = algebra.epsilon(d)
            quotient, proj = algebra.quotient_by(eps)
            for a in elems:
                for b in elems:
                    assert (proj.apply(a) == proj.apply(b)) == ((a ^ b) <= eps)


def test_quotient_fibers_have_extrema():
    v3 = algebra_of("v3")
    eps = v3.epsilon(1)
    quotient, proj = v3.quotient_by(eps)
    assert quotient.size() == 4
    elems = v3.elements()
    for a in elems:
        image = proj.apply(a)
        fiber = [x for x in elems if proj.apply(x) == image]
        lo, hi = fiber_min(proj, a), fiber_max(proj, a)
        assert lo in fiber and hi in fiber
        assert all(lo <= x <= hi for x in fiber)
        assert lo == a - v3.element(proj.kernel().gen)
        assert hi == a | v3.element(proj.kernel().gen)


def test_kernel_of_epsilon_quotient_is_epsilon(pool):
    for algebra, _ in pool:
        for d in range(algebra.spec.height() + 2):
            eps = algebra.epsilon(d)
            _, proj = algebra.quotient_by(eps)
            assert proj.kernel().gen == eps
            report = check_dL_preserved(proj, d)
            assert report.contained and report.equal
            assert report.ok


def test_morphism_validation_errors():
    chain = algebra_of("c2")
    point = Algebra(build_poset(["q"], []))
    with pytest.raises(NotOpen):
        make_morphism(chain, point, (0,))
    phi = make_morphism(chain, point, (1,))
    assert phi.apply(chain.top()) == point.top()
    assert phi.apply(chain.element({"p0"})).is_bottom()
    antichain = algebra_of("a2")
    with pytest.raises(NotMonotone):
        make_morphism(antichain, chain, (0, 1))


def test_identity_and_composition():
    v3 = algebra_of("v3")
    ident = identity_morphism(v3)
    assert ident.apply(v3.top()) == v3.top()
    q1, proj1 = v3.quotient_by(v3.epsilon(1))
    q2, proj2 = q1.quotient_by(q1.epsilon(0))
    both = proj2.compose(proj1)
    for a in v3.elements():
        assert both.apply(a) == proj2.apply(proj1.apply(a))
    assert q2.size() == 1
    with pytest.raises(OwnerMismatch):
        proj1.compose(proj2)


def test_subalgebra_generated():
    v3 = algebra_of("v3")
    gen = v3.element({"p0", "p1"})
    closure = v3.subalgebra_generated([gen])
    assert set(closure) == {
        v3.bottom(),
        v3.top(),
        gen,
        v3.top() - gen,
        gen & (v3.top() - gen),
    }
    assert len(closure) == v3.size()
    c2 = algebra_of("c2")
    bounds_only = c2.subalgebra_generated([])
    assert set(bounds_only) == {c2.bottom(), c2.top()}


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_difference_identities_randomized(data):
    posets = list(enumerate_posets(4))
    poset = data.draw(st.sampled_from(posets))
    algebra = Algebra(poset)
    elems = algebra.elements()
    a = data.draw(st.sampled_from(elems))
    b = data.draw(st.sampled_from(elems))
    c = data.draw(st.sampled_from(elems))
    assert a == (a - b) | (a & b)
    assert (a | b) - c == (a - c) | (b - c)
    assert a - (b | c) == (a - b) - c
    assert a - (a - b) == (a & b) - (a - b)
    assert ((b <= a)) == ((b - a).is_bottom())
    assert (a ^ c) <= (a ^ b) | (b ^ c)


def test_element_str_and_points():
    c2 = algebra_of("c2")
    a = c2.element({"p0"})
    assert str(a) == "{p0}"
    assert a.points() == ("p0",)
    assert str(c2.bottom()) == "{}"
