"""Eventually periodic index sets: canonical form and Boolean algebra.

Everything is cross-checked against pointwise membership on an initial
segment long enough to cover prefix + two periods of both operands."""

from __future__ import annotations

from hypothesis import given, strategies as st

from ultragrade.indexset import IndexSet

index_sets = st.builds(
    IndexSet.make,
    st.lists(st.booleans(), max_size=6),
    st.lists(st.booleans(), min_size=1, max_size=4),
)


def _span(*sets: IndexSet) -> int:
    out = 1
    for s in sets:
        out = max(out, len(s.prefix) + 2 * len(s.period))
    return 2 * out + 4


@given(index_sets, index_sets)
def test_union_pointwise(a, b):
    u = a.union(b)
    for i in range(_span(a, b, u)):
        assert u.member(i) == (a.member(i) or b.member(i))


@given(index_sets, index_sets)
def test_intersection_pointwise(a, b):
    u = a.intersection(b)
    for i in range(_span(a, b, u)):
        assert u.member(i) == (a.member(i) and b.member(i))


@given(index_sets, index_sets)
def test_difference_pointwise(a, b):
    u = a.difference(b)
    for i in range(_span(a, b, u)):
        assert u.member(i) == (a.member(i) and not b.member(i))


@given(index_sets)
def test_complement_involution(a):
    assert a.complement().complement() == a


@given(index_sets, index_sets)
def test_equality_is_extensional(a, b):
    same = all(a.member(i) == b.member(i) for i in range(_span(a, b)))
    assert (a == b) == same


def test_progression():
    s = IndexSet.progression(2, 0)  # even numbers
    assert [s.member(i) for i in range(6)] == [True, False, True, False, True, False]
    t = IndexSet.progression(3, 1, n0=2)  # {7, 10, 13, ...}
    assert not t.member(4)
    assert t.member(7) and t.member(10) and not t.member(8)


def test_finite_helpers():
    s = IndexSet.from_indices([0, 3])
    assert s.is_finite() and s.cardinality() == 2 and s.elements() == [0, 3]
    assert IndexSet.empty().is_empty()
    assert IndexSet.full().is_cofinite()
    assert IndexSet.from_indices([]).is_empty()


@given(index_sets)
def test_subset_reflexive_and_via_difference(a):
    assert a.subset_of(a)
    assert a.difference(a).is_empty()
