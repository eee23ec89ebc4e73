import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divdim.base import DomainError, PreconditionError, ResourceLimitError
from divdim.multisets import (
    DownsetFamily,
    Multiset,
    Permutation,
    colex_extension,
    decompose,
    min_suitable,
    random_downset,
    suitable_to_realiser,
    support_family,
    verify_suitable,
)
from divdim.posets import exact_dimension, is_realiser, product_order, verify_embedding

G12 = (1, 2)
G235 = (2, 3, 5)


def ms(ground, *items):
    counts = [0] * len(ground)
    for x in items:
        counts[ground.index(x)] += 1
    return Multiset(ground, tuple(counts))


def all_subsets_family(ground):
    members = [
        Multiset(ground, bits)
        for bits in itertools.product((0, 1), repeat=len(ground))
    ]
    return DownsetFamily.build(ground, members)


def squarefree_30_family():
    members = [
        ms(G235, *s)
        for r in range(4)
        for s in itertools.combinations(G235, r)
    ]
    return DownsetFamily.build(G235, members)


# --- multisets and downsets -------------------------------------------------


def test_multiset_basics():
    a = ms(G12, 1, 1, 2)
    assert a.nu(1) == 2 and a.nu(2) == 1
    assert a.support() == {1, 2}
    assert ms(G12, 1).le(a)
    assert not a.le(ms(G12, 1))


def test_multiset_validation():
    with pytest.raises(DomainError):
        Multiset(G12, (1,))
    with pytest.raises(DomainError):
        Multiset(G12, (-1, 0))


def test_downset_closure_check():
    with pytest.raises(DomainError):
        DownsetFamily.build(G12, [ms(G12, 1)])
    fam = DownsetFamily.build(G12, [ms(G12, 1)], close=True)
    assert len(fam) == 2


def test_support_family_collapses_multiplicity():
    fam = DownsetFamily.build(("x",), [Multiset(("x",), (2,))], close=True)
    sup = support_family(fam)
    assert {m.counts for m in sup.members} == {(0,), (1,)}


def test_support_family_idempotent_on_set_families():
    fam = all_subsets_family(G12)
    sup = support_family(fam)
    assert sup.members == fam.members
    assert support_family(sup).members == sup.members


def test_support_family_mixed_example():
    g = ("x", "y")
    members = [
        Multiset(g, (0, 0)),
        Multiset(g, (1, 0)),
        Multiset(g, (0, 1)),
        Multiset(g, (1, 1)),
        Multiset(g, (2, 1)),
    ]
    fam = DownsetFamily.build(g, members, close=True)
    sup = support_family(fam)
    assert {m.counts for m in sup.members} == {(0, 0), (1, 0), (0, 1), (1, 1)}


# --- verify_suitable --------------------------------------------------------


def test_verify_suitable_identity_fails():
    verdict = verify_suitable([Permutation(G12, (1, 2))], [{1}, {2}], G12)
    assert not verdict
    assert verdict.witness == ({2}, 1)


def test_verify_suitable_both_orders():
    perms = [Permutation(G12, (1, 2)), Permutation(G12, (2, 1))]
    assert verify_suitable(perms, [{1}, {2}], G12)


def test_verify_suitable_rotations_cover_30():
    rotations = [
        Permutation(G235, (2, 3, 5)),
        Permutation(G235, (3, 5, 2)),
        Permutation(G235, (5, 2, 3)),
    ]
    assert verify_suitable(rotations, support_family(squarefree_30_family()))


def test_verify_suitable_ground_mismatch():
    with pytest.raises(DomainError):
        verify_suitable([Permutation(G12, (1, 2))], [{1}], (1, 2, 3))


def test_full_ground_member_vacuous():
    assert verify_suitable([Permutation(G12, (1, 2))], [{1, 2}], G12)


# --- min_suitable -----------------------------------------------------------


def test_min_suitable_vacuous_constraints():
    m, sol = min_suitable([{"x"}], ("x",))
    assert m == 1 and len(sol.perms) == 1


def test_min_suitable_two_singletons():
    m, sol = min_suitable([{1}, {2}], G12)
    assert m == 2
    assert verify_suitable(sol.perms, [{1}, {2}], G12)


def test_min_suitable_30_needs_three():
    fam = support_family(squarefree_30_family())
    m, sol = min_suitable(fam)
    assert m == 3
    assert verify_suitable(sol.perms, fam)


def test_min_suitable_empty_family():
    m, _ = min_suitable([], G12)
    assert m == 1


def test_min_suitable_inactive_elements_on_top():
    g = (1, 2, 3)
    m, sol = min_suitable([{1}, {2}], g)
    assert m == 2
    assert verify_suitable(sol.perms, [{1}, {2}], g)
    for perm in sol.perms:
        assert perm.order[-1] == 3


def test_min_suitable_guard():
    with pytest.raises(ResourceLimitError):
        min_suitable([], tuple(range(9)))


# --- colex_extension --------------------------------------------------------


def test_colex_identity_counts_in_binary():
    fam = all_subsets_family(G12)
    ext = colex_extension(Permutation(G12, (1, 2)), fam)
    assert [m.counts for m in ext.order] == [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_colex_swap_order():
    fam = all_subsets_family(G12)
    ext = colex_extension(Permutation(G12, (2, 1)), fam)
    assert [m.counts for m in ext.order] == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_colex_multiplicity_chain():
    fam = DownsetFamily.build(("x",), [Multiset(("x",), (2,))], close=True)
    for order in [("x",)]:
        ext = colex_extension(Permutation(("x",), order), fam)
        assert [m.counts for m in ext.order] == [(0,), (1,), (2,)]


def test_colex_extends_containment():
    fam = random_downset((1, 2, 3), seed=11)
    perm = Permutation((1, 2, 3), (3, 1, 2))
    ext = colex_extension(perm, fam)
    pos = {m: i for i, m in enumerate(ext.order)}
    for a in fam.members:
        for b in fam.members:
            if a.le(b):
                assert pos[a] <= pos[b]


def test_colex_ground_mismatch():
    fam = all_subsets_family(G12)
    with pytest.raises(DomainError):
        colex_extension(Permutation((1, 2, 3), (1, 2, 3)), fam)


# --- suitable_to_realiser ---------------------------------------------------


def test_realiser_for_subsets_of_two():
    fam = all_subsets_family(G12)
    perms = [Permutation(G12, (1, 2)), Permutation(G12, (2, 1))]
    realiser = suitable_to_realiser(perms, fam)
    assert len(realiser.extensions) == 2
    assert is_realiser(fam.poset(), realiser.extensions)


def test_realiser_for_chain_single_permutation():
    fam = DownsetFamily.build(("x",), [Multiset(("x",), (3,))], close=True)
    realiser = suitable_to_realiser([Permutation(("x",), ("x",))], fam)
    assert len(realiser.extensions) == 1
    assert is_realiser(fam.poset(), realiser.extensions)


def test_realiser_for_30_rotations():
    fam = squarefree_30_family()
    rotations = [
        Permutation(G235, (2, 3, 5)),
        Permutation(G235, (3, 5, 2)),
        Permutation(G235, (5, 2, 3)),
    ]
    realiser = suitable_to_realiser(rotations, fam)
    assert len(realiser.extensions) == 3
    assert is_realiser(fam.poset(), realiser.extensions)


def test_unsuitable_permutations_rejected_with_witness():
    fam = all_subsets_family(G12)
    with pytest.raises(PreconditionError):
        suitable_to_realiser([Permutation(G12, (1, 2))], fam)


# --- decompose --------------------------------------------------------------


def test_decompose_singleton_partition_is_identity():
    fam = all_subsets_family(G12)
    dec = decompose(fam, [G12])
    assert dec.factors[0].members == fam.members
    prod = product_order([f.poset() for f in dec.factors])
    assert verify_embedding(fam.poset(), prod, dec.mapping)


def test_decompose_two_blocks():
    fam = all_subsets_family(G12)
    dec = decompose(fam, [(1,), (2,)])
    assert all(len(f) == 2 for f in dec.factors)
    prod = product_order([f.poset() for f in dec.factors])
    assert verify_embedding(fam.poset(), prod, dec.mapping)


def test_decompose_30_downset():
    fam = squarefree_30_family()
    dec = decompose(fam, [(2,), (3, 5)])
    prod = product_order([f.poset() for f in dec.factors])
    assert verify_embedding(fam.poset(), prod, dec.mapping)


def test_decompose_bad_partitions():
    fam = all_subsets_family(G12)
    with pytest.raises(DomainError):
        decompose(fam, [(1,), (1, 2)])
    with pytest.raises(DomainError):
        decompose(fam, [(1,)])


@given(st.integers(min_value=0, max_value=400))
@settings(max_examples=25, deadline=None)
def test_decompose_random_downsets(seed):
    fam = random_downset((1, 2, 3), seed, max_members=12)
    dec = decompose(fam, [(1, 3), (2,)])
    prod = product_order([f.poset() for f in dec.factors])
    assert verify_embedding(fam.poset(), prod, dec.mapping)


# --- the dimension equalities ----------------------------------------------


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=30, deadline=None)
def test_downset_dimension_equals_min_suitable(seed):
    fam = random_downset((1, 2, 3), seed, max_members=16)
    supports = support_family(fam)
    dim_full = exact_dimension(fam.poset()).dimension
    dim_supports = exact_dimension(supports.poset()).dimension
    m, witness = min_suitable(supports)
    assert dim_full == dim_supports == m
    assert verify_suitable(witness.perms, supports)


def test_random_downset_is_deterministic():
    a = random_downset((1, 2, 3, 4), seed=5)
    b = random_downset((1, 2, 3, 4), seed=5)
    assert a.members == b.members


def _colex_less(perm, a, b):
    """Definition-direct comparison at the permutation-greatest difference."""
    for x in reversed(perm.order):
        if a.nu(x) != b.nu(x):
            return a.nu(x) < b.nu(x)
    return False


@given(st.integers(min_value=0, max_value=300), st.permutations([1, 2, 3]))
@settings(max_examples=40, deadline=None)
def test_colex_matches_pairwise_definition(seed, order):
    fam = random_downset((1, 2, 3), seed, max_members=14)
    perm = Permutation((1, 2, 3), tuple(order))
    ext = colex_extension(perm, fam)
    for i, a in enumerate(ext.order):
        for b in ext.order[i + 1 :]:
            assert _colex_less(perm, a, b)
            assert not _colex_less(perm, b, a)


def _naive_min_suitable(sets, ground):
    """Independent oracle: try every permutation subset by size."""
    perms = [Permutation(ground, p) for p in itertools.permutations(ground)]
    for size in range(1, len(perms) + 1):
        for combo in itertools.combinations(perms, size):
            if verify_suitable(combo, sets, ground):
                return size
    return None


@given(st.lists(st.sets(st.sampled_from([1, 2, 3])), max_size=6))
@settings(max_examples=40, deadline=None)
def test_min_suitable_matches_naive_subset_search(raw):
    ground = (1, 2, 3)
    sets = []
    for s in raw:
        f = frozenset(s)
        if f not in sets:
            sets.append(f)
    got, witness = min_suitable(sets, ground)
    assert got == _naive_min_suitable(sets, ground)
    assert verify_suitable(witness.perms, sets, ground)
