import itertools
import logging

import numpy as np
import pytest
from sympy.combinatorics import Permutation as SympyPermutation
from sympy.combinatorics import PermutationGroup as SympyGroup

from app.core.errors import CapExceededError, DegreeMismatchError, NotMemberError, NotNormalError
from app.services.catalog import catalog_groups, make_group, parse_cycles
from app.services.permutations import (
    CosetSpace,
    Permutation,
    Subgroup,
    all_subgroups,
    closure,
    compose,
    conjugate_subgroup,
    generates_over,
    intersect,
    is_normal,
    left_coset_space,
    min_generators,
    normal_core,
    normal_subgroups,
    product_set_size,
    quotient,
)

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def cyc(text, degree):
    return parse_cycles(text, degree)


def setup_module(module):
    module.S3 = make_group("symmetric", 3)
    module.D4 = closure(4, [cyc("(1 2 3 4)", 4), cyc("(2 4)", 4)])
    module.H_S3 = Subgroup.generated(module.S3, [cyc("(1 2)", 3)])
    module.H_D4 = Subgroup.generated(module.D4, [cyc("(2 4)", 4)])
    module.N_D4 = Subgroup.generated(module.D4, [cyc("(2 4)", 4), cyc("(1 3)", 4)])
    logger.info("[setup] Built S3 and D4 fixtures")


def test_compose_follows_right_to_left_convention():
    t = cyc("(1 2)", 3)
    assert compose(t, t).is_identity()
    assert compose(cyc("(1 2 3)", 3), t) == cyc("(1 3)", 3)
    p = cyc("(1 3 2)", 3)
    assert compose(p, Permutation.identity(3)) == p
    assert cyc("(1 2 3)", 3) * t == cyc("(1 3)", 3)


def test_compose_rejects_degree_mismatch():
    with pytest.raises(DegreeMismatchError):
        compose(cyc("(1 2)", 2), cyc("(1 2)", 3))


def test_permutation_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


def test_inverse_and_order():
    p = cyc("(1 2 3)(4 5)", 5)
    assert compose(p, p.inverse()).is_identity()
    assert p.order() == 6
    assert Permutation.identity(4).order() == 1


def test_closure_orders():
    assert S3.order == 6
    assert D4.order == 8
    trivial = closure(5, [])
    assert trivial.order == 1
    assert trivial.identity.is_identity()


def test_closure_identity_first_and_sorted():
    assert D4.elements[0].is_identity()
    assert list(D4.elements) == sorted(D4.elements)


def test_closure_matches_sympy_on_random_generators():
    rng = np.random.default_rng(7)
    for _ in range(20):
        degree = int(rng.integers(2, 7))
        gens = [Permutation(tuple(int(x) for x in rng.permutation(degree))) for _ in range(int(rng.integers(1, 3)))]
        G = closure(degree, gens)
        oracle = SympyGroup([SympyPermutation(list(g.images)) for g in gens])
        assert G.order == oracle.order(), f"closure {G.order} vs sympy {oracle.order()} for {gens}"


def test_closure_cap():
    with pytest.raises(CapExceededError):
        closure(5, [cyc("(1 2 3 4 5)", 5), cyc("(1 2)", 5)], cap=50)


def test_left_coset_space():
    assert left_coset_space(S3, H_S3).size == 3
    assert left_coset_space(S3, Subgroup.whole(S3)).size == 1
    regular = left_coset_space(S3, Subgroup.trivial(S3))
    assert regular.size == 6
    # regular action: only the identity fixes a coset
    for g in S3.elements[1:]:
        assert all(regular.act(g, slot) != slot for slot in range(6))


def test_coset_action_is_a_homomorphism():
    cs = CosetSpace(D4, H_D4)
    for a in D4.elements:
        for b in D4.elements:
            assert cs.permutation_of(compose(a, b)) == compose(cs.permutation_of(a), cs.permutation_of(b))


def test_coset_of_non_member():
    cs = CosetSpace(S3, H_S3)
    with pytest.raises(NotMemberError):
        cs.coset_of(cyc("(1 2)", 4))


def test_conjugate_subgroup():
    conj = conjugate_subgroup(H_D4, cyc("(1 2 3 4)", 4))
    assert conj.members == {Permutation.identity(4), cyc("(1 3)", 4)}
    assert conjugate_subgroup(H_D4, cyc("(2 4)", 4)) == H_D4
    assert conjugate_subgroup(N_D4, cyc("(1 2 3 4)", 4)) == N_D4


def test_intersect():
    K = Subgroup.generated(S3, [cyc("(2 3)", 3)])
    assert intersect(H_S3, K).is_trivial()
    assert intersect(H_S3, H_S3) == H_S3
    assert intersect(H_S3, Subgroup.whole(S3)) == H_S3


def test_normal_core():
    assert normal_core(S3, H_S3).is_trivial()
    assert normal_core(D4, N_D4) == N_D4
    assert normal_core(S3, Subgroup.trivial(S3)).is_trivial()


def test_product_set_size():
    K = Subgroup.generated(S3, [cyc("(2 3)", 3)])
    assert product_set_size(H_S3, K) == 4
    assert product_set_size(H_S3, H_S3) == 2
    assert product_set_size(H_S3, Subgroup.trivial(S3)) == 2


def test_quotient():
    assert quotient(D4, N_D4).order == 2
    assert quotient(D4, Subgroup.whole(D4)).order == 1
    assert quotient(D4, Subgroup.trivial(D4)).order == 8
    with pytest.raises(NotNormalError):
        quotient(D4, H_D4)


def test_min_generators():
    assert min_generators(make_group("cyclic", 6))[0] == 1
    klein = make_group("elementary_abelian", 2, 2)
    r, witness = min_generators(klein)
    assert r == 2
    assert closure(4, list(witness)).order == 4
    S4 = make_group("symmetric", 4)
    r, witness = min_generators(S4)
    assert r == 2
    assert closure(4, list(witness)).order == 24
    assert min_generators(closure(3, []))[0] == 0


def test_generates_over():
    assert generates_over(S3, H_S3, [cyc("(1 2 3)", 3)])
    assert not generates_over(S3, H_S3, [])
    assert not generates_over(S3, H_S3, [cyc("(1 2)", 3)])


def test_subgroup_lattice_counts():
    # S4 has 30 subgroups, 4 of them normal
    S4 = make_group("symmetric", 4)
    assert len(all_subgroups(S4)) == 30
    assert len(normal_subgroups(S4)) == 4
    assert len(all_subgroups(D4)) == 10
    assert is_normal(D4, N_D4)
    assert not is_normal(D4, H_D4)


def test_conjugation_ignores_right_translation_by_h():
    S4 = make_group("symmetric", 4)
    for H in all_subgroups(S4):
        for g in S4.elements:
            conj = conjugate_subgroup(H, g)
            assert all(conjugate_subgroup(H, compose(g, h)) == conj for h in H.elements)


@pytest.mark.parametrize("kind, args", [("symmetric", (4,)), ("dihedral", (6,)), ("elementary_abelian", (2, 3))])
def test_normal_core_is_the_largest_normal_subgroup_inside(kind, args):
    G = make_group(kind, *args)
    normals = normal_subgroups(G)
    for H in all_subgroups(G):
        core = normal_core(G, H)
        inside = [N for N in normals if N.members <= H.members]
        assert core in inside
        assert all(N.members <= core.members for N in inside)


def test_product_formula_on_all_subgroup_pairs():
    for label, G in catalog_groups(16):
        subgroups = all_subgroups(G)
        for H, K in itertools.combinations_with_replacement(subgroups, 2):
            size = product_set_size(H, K)
            assert size * intersect(H, K).order == H.order * K.order, label
