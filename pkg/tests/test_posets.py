"""Poset foundation: construction, closure, enumeration, canonical codes.

The enumeration oracle here is independent of the library: labeled
partial orders are brute-forced as transitive antisymmetric relations and
isomorphism classes are counted via minimum-over-permutations codes.
"""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coheyting.errors import (
    CycleDetected,
    DuplicateName,
    FormatError,
    SizeCap,
)
from coheyting.posets import (
    Poset,
    bits,
    build_poset,
    canonical_form,
    enumerate_posets,
    mask_of,
    parse_point_list,
    parse_poset_text,
    poset_to_text,
)


def brute_labeled_posets(k: int) -> list[frozenset]:
    """All strict partial orders on range(k) as frozensets of pairs."""
    pairs = [(i, j) for i in range(k) for j in range(k) if i != j]
    found = []
    for sel in range(1 << len(pairs)):
        rel = {pairs[t] for t in range(len(pairs)) if sel >> t & 1}
        if any((j, i) in rel for (i, j) in rel):
            continue
        if any(
            (i, l) not in rel
            for (i, j) in rel
            for (j2, l) in rel
            if j2 == j and i != l
        ):
            continue
        found.append(frozenset(rel))
    return found


def iso_code(rel: frozenset, k: int) -> tuple:
    return min(
        tuple(sorted((perm[i], perm[j]) for (i, j) in rel))
        for perm in itertools.permutations(range(k))
    )


def automorphism_count(poset: Poset) -> int:
    strict = {
        (j, i)
        for i in range(poset.n)
        for j in bits(poset.down[i])
        if j != i
    }
    count = 0
    for perm in itertools.permutations(range(poset.n)):
        if {(perm[a], perm[b]) for (a, b) in strict} == strict:
            count += 1
    return count


# known labeled partial order counts, cross-checked by the brute force
LABELED = {1: 1, 2: 3, 3: 19, 4: 219}
CLASSES = {1: 1, 2: 2, 3: 5, 4: 16, 5: 63}


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_brute_force_labeled_counts(k):
    assert len(brute_labeled_posets(k)) == LABELED[k]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_enumeration_matches_brute_force_classes(k):
    rels = brute_labeled_posets(k)
    brute_classes = {iso_code(rel, k) for rel in rels}
    enumerated = [p for p in enumerate_posets(k) if p.n == k]
    assert len(enumerated) == len(brute_classes) == CLASSES[k]


@pytest.mark.parametrize("k", [2, 3, 4])
def test_orbit_stabilizer_cross_check(k):
    """Sum of k!/|Aut| over iso classes equals the labeled count."""
    total = 0
    fact = 1
    for i in range(1, k + 1):
        fact *= i
    for poset in enumerate_posets(k):
        if poset.n != k:
            continue
        aut = automorphism_count(poset)
        assert fact % aut == 0
        total += fact // aut
    assert total == LABELED[k]


def test_enumeration_sizes_up_to_five():
    seen = {}
    for p in enumerate_posets(5):
        seen[p.n] = seen.get(p.n, 0) + 1
    assert seen == CLASSES


def test_enumeration_is_deterministic():
    first = [canonical_form(p) for p in enumerate_posets(4)]
    second = [canonical_form(p) for p in enumerate_posets(4)]
    assert first == second
    assert len(set(first)) == len(first)


def test_enumeration_cap():
    with pytest.raises(SizeCap):
        list(enumerate_posets(40))


def test_build_poset_rejects_duplicates_and_cycles():
    with pytest.raises(DuplicateName):
        build_poset(["a", "a"], [])
    with pytest.raises(CycleDetected):
        build_poset(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(FormatError):
        build_poset(["a"], [("a", "zzz")])


def test_closure_and_rank_on_three_chain():
    p = build_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert p.leq(0, 2)
    assert not p.leq(2, 0)
    assert list(p.ranks) == [0, 1, 2]
    assert list(p.coranks) == [2, 1, 0]
    assert p.height() == 2
    assert p.down_closure(1 << 2) == 0b111
    assert p.up_closure(1 << 0) == 0b111
    assert p.is_downset(0b011)
    assert not p.is_downset(0b100)


def test_transitive_input_covers_are_reduced():
    """A redundant comparability must not appear among the covers."""
    p = build_poset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    assert (0, 2) not in p.covers
    assert p.leq(0, 2)
    assert len(p.covers) == 2


def test_antichain_count_on_antichain_poset():
    """Nonempty antichains: every nonempty subset of a 3-antichain, the
    singletons of a chain."""
    p = build_poset(["x", "y", "z"], [])
    assert len(p.antichains()) == 7
    chain = build_poset(["x", "y", "z"], [("x", "y"), ("y", "z")])
    assert len(chain.antichains()) == 3


def test_downsets_against_subset_brute_force():
    p = build_poset(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("c", "d")])
    brute = [
        s for s in range(1 << p.n) if p.is_downset(s)
    ]
    assert sorted(p.all_downsets()) == sorted(brute)
    assert p.count_downsets() == len(brute)


def test_dual_swaps_ranks():
    p = build_poset(["a", "b", "c"], [("a", "b"), ("a", "c")])
    d = p.dual()
    assert d.names == p.names
    assert list(d.ranks) == list(p.coranks)
    assert d.dual().covers == p.covers


def test_induced_keeps_names():
    p = build_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    sub = p.induced(0b101)
    assert sub.names == ("a", "c")
    assert sub.leq(0, 1)


def test_text_round_trip():
    text = "points: a b c\ncovers: a<b a<c\ncolors: a:{x} b:{} c:{x,y}\n"
    poset, colors = parse_poset_text(text)
    assert poset.n == 3
    assert colors["c"] == frozenset({"x", "y"})
    again, colors2 = parse_poset_text(poset_to_text(poset, colors))
    assert again.names == poset.names
    assert again.covers == poset.covers
    assert colors2 == colors


def test_parse_poset_text_errors():
    with pytest.raises(FormatError):
        parse_poset_text("points: a\ncovers: nonsense\n")
    with pytest.raises(FormatError):
        parse_poset_text("stray tokens\n")
    with pytest.raises(FormatError):
        parse_poset_text("points: a\ncolors: b:{x}\n")


def test_parse_point_list():
    p = build_poset(["a", "b"], [("a", "b")])
    assert parse_point_list("{a,b}", p) == 0b11
    assert parse_point_list("{}", p) == 0
    assert parse_point_list("{b}", p) == 0b10
    with pytest.raises(FormatError):
        parse_point_list("a,b", p)
    with pytest.raises(FormatError):
        parse_point_list("{zzz}", p)


def test_canonical_form_permutation_invariant():
    base = build_poset(["a", "b", "c", "d"], [("a", "c"), ("b", "c"), ("c", "d")])
    relabeled = build_poset(
        ["p", "q", "r", "s"], [("s", "q"), ("r", "q"), ("q", "p")]
    )
    assert canonical_form(base) == canonical_form(relabeled)
    other = build_poset(["a", "b", "c", "d"], [("a", "b"), ("c", "d")])
    assert canonical_form(base) != canonical_form(other)


def test_canonical_form_respects_labels():
    p = build_poset(["a", "b"], [])
    same = canonical_form(p, labels=["red", "red"])
    swapped = canonical_form(p, labels=["red", "blue"])
    assert same != swapped
    assert canonical_form(p, labels=["blue", "red"]) == swapped


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**5 - 1), st.data())
def test_down_closure_is_smallest_downset(mask, data):
    posets = [p for p in enumerate_posets(4) if p.n >= 2]
    poset = data.draw(st.sampled_from(posets))
    mask &= poset.full
    closed = poset.down_closure(mask)
    assert poset.is_downset(closed)
    assert closed & mask == mask
    for other in poset.all_downsets():
        if other & mask == mask:
            assert closed & other == closed


def test_mask_helpers():
    assert list(bits(0b1011)) == [0, 1, 3]
    assert mask_of([0, 1, 3]) == 0b1011
