import logging

import pytest

from app.core.errors import (
    CapExceededError,
    ConditionIIError,
    CoreNotTrivialError,
    CsaHypothesisError,
    GenerationError,
    NoAdmissibleTupleError,
    PglDomainError,
)
from app.services.bounds import (
    THM_RANK_NOTE,
    compare_bounds,
    compare_table,
    csa_bound,
    csa_field_bound,
    normal_weak_bound,
    optimal_thm_h_bound,
    pgl_bound,
    section5_bound,
    stabilizer_index,
    thm_h_bound,
)
from app.services.catalog import make_group, parse_cycles
from app.services.permutations import Subgroup, closure, compose

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def cyc(text, degree):
    return parse_cycles(text, degree)


def setup_module(module):
    module.S3 = make_group("symmetric", 3)
    module.H_S3 = Subgroup.generated(module.S3, [cyc("(1 2)", 3)])
    module.KLEIN = closure(4, [cyc("(1 2)", 4), cyc("(3 4)", 4)])
    module.D4 = closure(4, [cyc("(1 2 3 4)", 4), cyc("(2 4)", 4)])
    module.H_D4 = Subgroup.generated(module.D4, [cyc("(2 4)", 4)])
    module.N_D4 = Subgroup.generated(module.D4, [cyc("(2 4)", 4), cyc("(1 3)", 4)])
    logger.info("[setup] Built S3, Klein four and D4 instances")


def test_stabilizer_index():
    term = stabilizer_index(S3, H_S3, cyc("(1 2 3)", 3))
    assert term.index == 6
    assert term.product_size == 4
    assert term.identity_check
    assert stabilizer_index(S3, H_S3, cyc("(1 2)", 3)).index == 3
    trivial = Subgroup.trivial(S3)
    assert all(stabilizer_index(S3, trivial, g).index == 6 for g in S3.elements)


def test_thm_h_bound_s3():
    report = thm_h_bound(S3, H_S3, [cyc("(1 2 3)", 3)])
    assert report.bound == 4
    assert report.rank_M == 4
    assert report.stabilizer_indices == (6,)
    assert report.index_G_H == 3
    assert report.faithful and report.valid
    assert report.note == THM_RANK_NOTE
    assert report.provenance == "thm-h"


def test_thm_h_bound_klein():
    report = thm_h_bound(KLEIN, Subgroup.trivial(KLEIN), [cyc("(1 2)", 4), cyc("(3 4)", 4)])
    assert report.bound == 5
    assert report.rank_M == 5
    assert report.stabilizer_indices == (4, 4)


def test_thm_h_bound_drops_elements_of_h():
    report = thm_h_bound(S3, H_S3, [cyc("(1 2)", 3), cyc("(1 2 3)", 3)])
    assert report.bound == 4
    assert report.dropped == (cyc("(1 2)", 3),)
    assert report.generating_tuple == (cyc("(1 2 3)", 3),)


def test_thm_h_bound_hypotheses():
    C3 = make_group("cyclic", 3)
    with pytest.raises(ConditionIIError):
        thm_h_bound(C3, Subgroup.trivial(C3), [cyc("(1 2 3)", 3)])
    C4 = make_group("cyclic", 4)
    # a non-generating tuple still reports condition (ii) first
    with pytest.raises(ConditionIIError):
        thm_h_bound(C4, Subgroup.trivial(C4), [cyc("(1 3)(2 4)", 4)])
    with pytest.raises(GenerationError):
        thm_h_bound(KLEIN, Subgroup.trivial(KLEIN), [cyc("(1 2)", 4)])
    with pytest.raises(CoreNotTrivialError):
        thm_h_bound(D4, N_D4, [cyc("(1 2 3 4)", 4)])


def test_optimal_thm_h_bound():
    report = optimal_thm_h_bound(S3, H_S3, 1)
    assert report.bound == 4
    assert report.provenance == "optimal"

    report = optimal_thm_h_bound(KLEIN, Subgroup.trivial(KLEIN), 2)
    assert report.bound == 5
    assert len(report.generating_tuple) == 2

    with pytest.raises(NoAdmissibleTupleError):
        optimal_thm_h_bound(KLEIN, Subgroup.trivial(KLEIN), 1)
    C4 = make_group("cyclic", 4)
    with pytest.raises(ConditionIIError):
        optimal_thm_h_bound(C4, Subgroup.trivial(C4), 2)


def test_optimal_is_no_worse_than_any_given_tuple():
    S4 = make_group("symmetric", 4)
    H = Subgroup.generated(S4, [cyc("(1 2)", 4)])
    best = optimal_thm_h_bound(S4, H, 2)
    given = thm_h_bound(S4, H, list(S4.generators))
    assert best.bound <= given.bound
    assert best.bound == best.rank_M


def test_optimal_search_cap():
    S4 = make_group("symmetric", 4)
    with pytest.raises(CapExceededError):
        optimal_thm_h_bound(S4, Subgroup.trivial(S4), 3, cap=2)


def test_csa_bound():
    assert csa_bound(D4, H_D4, N_D4) == 5
    # H = N reduces to r[G:H] - [G:H] + 1
    assert csa_bound(KLEIN, Subgroup.trivial(KLEIN), Subgroup.trivial(KLEIN)) == 2 * 4 - 4 + 1
    C4 = make_group("cyclic", 4)
    with pytest.raises(CsaHypothesisError):
        csa_bound(C4, Subgroup.trivial(C4), Subgroup.trivial(C4))


def test_section5_bound_d4():
    report = section5_bound(D4, H_D4, N_D4)
    assert report.bound == 5
    assert report.csa_bound == 5
    assert report.provenance == "section5"
    details = report.section5
    assert details.H_prime_order == 4
    assert details.m == 1
    assert len(report.generating_tuple) == 1
    assert report.generating_tuple[0] not in N_D4


def test_section5_bound_never_exceeds_csa():
    S4 = make_group("symmetric", 4)
    H = Subgroup.generated(S4, [cyc("(1 2)(3 4)", 4)])
    V4 = Subgroup.generated(S4, [cyc("(1 2)(3 4)", 4), cyc("(1 3)(2 4)", 4)])
    report = section5_bound(S4, H, V4)
    assert report.csa_bound == 2 * 12 * 2 - 12 + 1
    assert report.bound <= report.csa_bound
    assert report.bound == report.rank_M


def test_normal_weak_bound():
    gens = [cyc("(1 2 3 4)", 4)]
    weak = normal_weak_bound(D4, H_D4, N_D4, gens)
    assert weak == 1 * 4 * 2 - 4 + 1
    assert weak >= thm_h_bound(D4, H_D4, gens).bound


def test_csa_field_bound():
    # n = 4 with a biquadratic subfield: 2 * 16 / 4 - 4 + 1
    assert csa_field_bound(4, 4, 2) == 5
    assert csa_field_bound(8, 4, 1) == 16 - 8 + 1
    with pytest.raises(CsaHypothesisError):
        csa_field_bound(6, 4, 2)
    with pytest.raises(CsaHypothesisError):
        csa_field_bound(4, 4, 1)


def test_pgl_bound_values():
    assert pgl_bound(2, 2) == 5
    assert pgl_bound(3, 2) == 10
    assert pgl_bound(2, 3) == 25
    for p in (2, 3, 5, 7):
        assert pgl_bound(p, 2) == p * p + 1
        for s in (2, 3, 4):
            n = p ** s
            assert pgl_bound(p, s) == 2 * n * n // (p * p) - n + 1


def test_pgl_bound_domain():
    with pytest.raises(PglDomainError):
        pgl_bound(4, 2)
    with pytest.raises(PglDomainError):
        pgl_bound(3, 1)


def test_compare_bounds_n27():
    row = compare_bounds(3, 3)
    assert row.n == 27
    assert (row.eq1_odd_n, row.eq1_all_n, row.prior_mr) == (325, 649, 217)
    assert row.new == 136
    assert row.new < row.min_prior
    assert row.procesi == 729


def test_compare_bounds_ties_for_p2():
    row = compare_bounds(2, 2)
    assert row.eq1_all_n == 5 and row.new == 5
    assert row.eq1_odd_n is None
    for s in (2, 3, 4, 5):
        row = compare_bounds(2, s)
        assert row.new == row.prior_mr


def test_compare_table():
    rows = compare_table(3, 4)
    assert [row.s for row in rows] == [2, 3, 4]
    with pytest.raises(PglDomainError):
        compare_table(3, 1)


def test_thm_h_bound_ignores_right_translation_by_h():
    S4 = make_group("symmetric", 4)
    H = Subgroup.generated(S4, [cyc("(1 2)", 4), cyc("(3 4)", 4)])
    gens = [cyc("(1 2 3)", 4), cyc("(1 3)(2 4)", 4)]
    base = thm_h_bound(S4, H, gens)
    for h in H.elements:
        for k in H.elements:
            shifted = thm_h_bound(S4, H, [compose(gens[0], h), compose(gens[1], k)])
            assert shifted.bound == base.bound
            assert shifted.stabilizer_indices == base.stabilizer_indices


def test_thm_h_bound_keeps_its_lattice():
    report = thm_h_bound(D4, H_D4, [cyc("(1 2 3 4)", 4)])
    assert report.module.rank == report.rank_M
    assert report.module.verify()
