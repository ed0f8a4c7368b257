"""
Exhaustive and randomized self-checks run by `edbounds verify`

Each suite walks the catalog groups up to an order limit, recomputes a
claimed identity along two independent paths and records every disagreement.
A suite never stops at the first failure; the CLI turns a non-empty failure
list into exit code 1.
"""

import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np
from sympy.combinatorics import Permutation as SympyPermutation
from sympy.combinatorics import PermutationGroup as SympyGroup

from app.core.config import settings
from app.core.errors import ConditionIIError, CsaHypothesisError, InvariantViolation, ParseError
from app.services.bounds import THM_RANK_NOTE, section5_bound, stabilizer_index, thm_h_bound
from app.services.catalog import catalog_groups, format_cycles, make_group, parse_cycles
from app.services.glattice import (
    GLattice,
    action_kernel,
    coset_difference,
    coset_omega,
    g_v_subgroup,
    kernel_module,
    phi_matrix,
    zg_submodule,
)
from app.services.lattice import (
    IntMatrix,
    elementary_divisors,
    hermite_normal_form,
    kernel_basis,
    rank,
    smith_normal_form,
)
from app.services.permutations import (
    CosetSpace,
    PermGroup,
    Subgroup,
    all_subgroups,
    compose,
    conjugate_subgroup,
    generates_over,
    intersect,
    normal_core,
    normal_subgroups,
    product_set_size,
    quotient,
)

logger = logging.getLogger(__name__)

SUITES = ("group", "lattice", "lemma32", "lemma43", "remark42", "section5")

# subgroup arithmetic is checked on a wider corpus than the lattice suites
_DEFAULT_MAX_ORDER = {"group": 48, "remark42": 48}


@dataclass
class SuiteResult:
    name: str
    max_order: int
    checked: int = 0
    failures: List[str] = field(default_factory=list)
    counts: Dict[str, int] = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def tally(self, key: str, amount: int = 1):
        self.counts[key] = self.counts.get(key, 0) + amount

    def check(self, condition: bool, message: str):
        self.checked += 1
        if not condition:
            logger.error(f"[{self.name}] {message}")
            self.failures.append(message)


def _core_trivial_subgroups(G: PermGroup) -> Iterator[Subgroup]:
    for H in all_subgroups(G):
        if normal_core(G, H).is_trivial():
            yield H


def _tuples(cs: CosetSpace, max_size: int) -> Iterator[Tuple]:
    reps = cs.transversal[1:]
    for size in range(1, max_size + 1):
        yield from itertools.combinations(reps, size)


def _is_hermite(H: IntMatrix) -> bool:
    last_pivot = -1
    seen_zero = False
    for i, row in enumerate(H):
        pivot = next((j for j, x in enumerate(row) if x), None)
        if pivot is None:
            seen_zero = True
            continue
        if seen_zero or pivot <= last_pivot or row[pivot] <= 0:
            return False
        if any(not 0 <= H[k, pivot] < row[pivot] for k in range(i)):
            return False
        last_pivot = pivot
    return True


def _is_smith(S: IntMatrix) -> bool:
    diagonal = [S[i, i] for i in range(min(S.rows, S.cols))]
    off = any(S[i, j] for i in range(S.rows) for j in range(S.cols) if i != j)
    if off or any(d < 0 for d in diagonal):
        return False
    nonzero = [d for d in diagonal if d]
    if diagonal[: len(nonzero)] != nonzero:
        return False
    return all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


def _random_matrix(rng: np.random.Generator) -> IntMatrix:
    rows = int(rng.integers(1, 13))
    cols = int(rng.integers(1, 13))
    bound = 10 ** int(rng.integers(1, 7))
    data = rng.integers(-bound, bound + 1, size=(rows, cols))
    if rows > 1 and rng.random() < 0.3:
        # force a rank drop so the kernel is nontrivial
        k = int(rng.integers(0, rows))
        mix = rng.integers(-3, 4, size=rows)
        mix[k] = 0
        data[k] = mix @ data
    return IntMatrix([[int(x) for x in row] for row in data], cols=cols)


def suite_group(result: SuiteResult, rng: np.random.Generator):
    for label, G in catalog_groups(result.max_order):
        oracle = SympyGroup([SympyPermutation(list(g.images)) for g in G.generators] or [SympyPermutation(G.degree - 1)])
        result.check(oracle.order() == G.order, f"{label}: closure order {G.order}, sympy {oracle.order()}")
        normals = set(normal_subgroups(G))
        subgroups = all_subgroups(G)
        for H in subgroups:
            result.tally("subgroups")
            cs = CosetSpace(G, H)
            core = normal_core(G, H)
            result.check(core.members <= H.members, f"{label}: core of {H!r} not inside H")
            result.check(core in normals, f"{label}: core of {H!r} is not normal")
            inside = [N for N in normals if N.members <= H.members]
            result.check(
                all(N.members <= core.members for N in inside),
                f"{label}: a normal subgroup inside {H!r} escapes its core",
            )
            kernel = {g for g in G.elements if cs.permutation_of(g).is_identity()}
            result.check(kernel == core.members, f"{label}: coset action kernel differs from the core of {H!r}")
            conj_equal = all(conjugate_subgroup(H, s) == H for s in G.generators)
            result.check(conj_equal == (H in normals), f"{label}: normality tests disagree on {H!r}")
            for t in cs.transversal:
                conj = conjugate_subgroup(H, t)
                result.check(
                    all(conjugate_subgroup(H, compose(t, h)) == conj for h in H.generators),
                    f"{label}: conjugating {H!r} depends on the representative of {format_cycles(t)}H",
                )

        # product formula on every unordered pair of subgroups
        for H, K in itertools.combinations_with_replacement(subgroups, 2):
            result.tally("pairs")
            try:
                product_set_size(H, K)
                result.checked += 1
            except InvariantViolation as e:
                result.check(False, f"{label}: {e.detail}")
        for N in normals:
            Q = quotient(G, N)
            result.check(Q.order == G.order // N.order, f"{label}: |G/N| = {Q.order} for |N| = {N.order}")


def suite_lattice(result: SuiteResult, rng: np.random.Generator):
    for sample in range(settings.LATTICE_SAMPLES):
        A = _random_matrix(rng)
        result.tally("matrices")
        H, U = hermite_normal_form(A)
        result.check(U @ A == H, f"sample {sample}: U.A != H")
        result.check(U.is_unimodular(), f"sample {sample}: HNF transform not unimodular")
        result.check(_is_hermite(H), f"sample {sample}: HNF not in Hermite form")

        S, U2, V = smith_normal_form(A)
        result.check(U2 @ A @ V == S, f"sample {sample}: U.A.V != S")
        result.check(U2.is_unimodular() and V.is_unimodular(), f"sample {sample}: SNF transforms not unimodular")
        result.check(_is_smith(S), f"sample {sample}: SNF not diagonal with divisibility")

        K = kernel_basis(A)
        r = rank(A)
        result.check(K.rows == A.rows - r, f"sample {sample}: kernel rank {K.rows} != {A.rows} - {r}")
        if K.rows:
            result.check(not any((K @ A).entries), f"sample {sample}: K.A != 0")
            result.check(all(d == 1 for d in elementary_divisors(K)), f"sample {sample}: kernel is not saturated")


def _check_lattice(result: SuiteResult, label: str, L: GLattice, what: str):
    try:
        # invertibility follows once T is a homomorphism, so the determinants are skipped
        L.verify(check_unimodular=False)
    except InvariantViolation as e:
        result.check(False, f"{label}: {what}: {e.detail}")
        return
    result.checked += 1


def _check_translation(result: SuiteResult, label: str, G: PermGroup, H: Subgroup, report):
    """Replacing each g_i by g_i.h leaves the indices and generation over H unchanged."""
    h = H.elements[-1]
    shifted = [compose(g, h) for g in report.generating_tuple]
    indices = tuple(stabilizer_index(G, H, g).index for g in shifted)
    result.check(
        indices == report.stabilizer_indices and generates_over(G, H, shifted),
        f"{label}: translating {[format_cycles(g) for g in report.generating_tuple]} by "
        f"{format_cycles(h)} changes the bound over {H!r}",
    )


def suite_lemma32(result: SuiteResult, rng: np.random.Generator):
    for label, G in catalog_groups(result.max_order):
        for H in _core_trivial_subgroups(G):
            cs, omega = coset_omega(G, H)
            _check_lattice(result, label, omega, f"omega over {H!r}")
            condition_ii = not (G.is_cyclic and H.is_trivial())
            for gens in _tuples(cs, 2):
                if not generates_over(G, H, gens):
                    continue
                result.tally("tuples")
                names = [format_cycles(g) for g in gens]
                unfaithful = len(gens) == 1 and intersect(H, conjugate_subgroup(H, gens[0])) == H
                if unfaithful or not condition_ii:
                    P, phi, _ = phi_matrix(G, H, gens)
                    M = kernel_module(P, phi)
                else:
                    try:
                        report = thm_h_bound(G, H, gens, label=label)
                    except InvariantViolation as e:
                        result.check(False, f"{label}: {names}: {e.detail}")
                        continue
                    result.tally("reports")
                    M = report.module
                    result.check(report.bound == M.rank == report.rank_M, f"{label}: {names}: bound {report.bound} vs rank {M.rank}")
                    result.check(report.note == THM_RANK_NOTE and report.valid, f"{label}: {names}: report incomplete")
                    if not H.is_trivial():
                        _check_translation(result, label, G, H, report)

                _check_lattice(result, label, M, f"M for {names} over {H!r}")
                kernel = action_kernel(M)
                if unfaithful:
                    result.check(kernel.order == G.order, f"{label}: {names} over {H!r} should act trivially")
                    result.check(M.rank == 1, f"{label}: {names} over {H!r} gives rank {M.rank}, expected 1")
                else:
                    result.check(kernel.is_trivial(), f"{label}: {names} over {H!r} has kernel of order {kernel.order}")


def _check_g_v(result: SuiteResult, label: str, cs: CosetSpace, V: IntMatrix):
    try:
        G_V = g_v_subgroup(cs, V)
    except InvariantViolation as e:
        result.check(False, f"{label}: {e.detail}")
        return
    result.check(cs.subgroup.members <= G_V.members, f"{label}: G_V misses H")


def suite_lemma43(result: SuiteResult, rng: np.random.Generator):
    corpus = []
    for label, G in catalog_groups(result.max_order):
        for H in all_subgroups(G):
            if H.order == G.order:
                continue
            cs, omega = coset_omega(G, H)
            corpus.append((label, cs, omega))
            identity = G.identity
            full = IntMatrix.identity(omega.rank)

            # single-orbit submodules
            for g in cs.transversal[1:]:
                V = zg_submodule(omega, [coset_difference(cs, g, identity)])
                result.tally("single_orbit")
                _check_g_v(result, label, cs, V)

            # Z[G]-span of {g_i.H - H} is all of omega iff the g_i generate G over H
            for gens in _tuples(cs, 2):
                V = zg_submodule(omega, [coset_difference(cs, g, identity) for g in gens])
                result.tally("generation")
                spans = V == full
                generates = generates_over(G, H, gens)
                result.check(
                    spans == generates,
                    f"{label}: {[format_cycles(g) for g in gens]} over {H!r}: spans={spans}, generates={generates}",
                )

    if not corpus:
        return
    for _ in range(settings.RANDOM_SAMPLES):
        label, cs, omega = corpus[int(rng.integers(0, len(corpus)))]
        count = int(rng.integers(1, 4))
        vectors = []
        while len(vectors) < count:
            v = tuple(int(x) for x in rng.integers(-3, 4, size=omega.rank))
            if any(v):
                vectors.append(v)
        V = zg_submodule(omega, vectors)
        result.tally("random")
        result.check(omega.is_stable(V), f"{label}: generated span is not G-stable")
        _check_g_v(result, label, cs, V)


def suite_remark42(result: SuiteResult, rng: np.random.Generator):
    for label, G in catalog_groups(result.max_order):
        for H in all_subgroups(G):
            if H.order < G.order:
                _check_lattice(result, label, coset_omega(G, H)[1], f"omega over {H!r}")
            for g in G.elements:
                try:
                    term = stabilizer_index(G, H, g)
                except InvariantViolation as e:
                    result.check(False, f"{label}: {e.detail}")
                    continue
                result.tally("pairs")
                result.check(
                    term.identity_check,
                    f"{label}: index identity fails for {H!r}, {format_cycles(g)}: "
                    f"index {term.index}, |H.H^g| = {term.product_size}",
                )


def _d4_instance() -> Tuple[PermGroup, Subgroup, Subgroup]:
    G = make_group("dihedral", 4)
    H = Subgroup.generated(G, [parse_cycles("(2 4)", 4)])
    N = Subgroup.generated(G, [parse_cycles("(2 4)", 4), parse_cycles("(1 3)", 4)])
    return G, H, N


def _check_section5(result: SuiteResult, label: str, G: PermGroup, H: Subgroup, N: Subgroup) -> Optional[int]:
    try:
        report = section5_bound(G, H, N, label=label)
    except (CsaHypothesisError, ConditionIIError):
        result.tally("skipped")
        return None
    except InvariantViolation as e:
        result.check(False, f"{label}: {e.detail}")
        return None
    result.tally("triples")
    result.check(report.bound <= report.csa_bound, f"{label}: {report.bound} > {report.csa_bound}")
    result.check(report.bound == report.rank_M, f"{label}: bound {report.bound} vs rank {report.rank_M}")
    result.check(report.note == THM_RANK_NOTE, f"{label}: report lacks the rank note")
    _check_lattice(result, label, report.module, f"M for the section5 tuple over {H!r}")
    return report.bound


def suite_section5(result: SuiteResult, rng: np.random.Generator):
    G, H, N = _d4_instance()
    bound = _check_section5(result, "D4", G, H, N)
    result.check(bound == 5, f"D4 instance gives {bound}, expected 5")

    for label, G in catalog_groups(result.max_order):
        normals = normal_subgroups(G)
        for H in _core_trivial_subgroups(G):
            for N in normals:
                if H.members <= N.members:
                    _check_section5(result, label, G, H, N)


_RUNNERS: Dict[str, Callable[[SuiteResult, np.random.Generator], None]] = {
    "group": suite_group,
    "lattice": suite_lattice,
    "lemma32": suite_lemma32,
    "lemma43": suite_lemma43,
    "remark42": suite_remark42,
    "section5": suite_section5,
}


def run_suite(name: str, max_order: Optional[int] = None, seed: Optional[int] = None) -> SuiteResult:
    if name not in _RUNNERS:
        raise ParseError(f"Unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if max_order is None:
        max_order = _DEFAULT_MAX_ORDER.get(name, settings.VERIFY_MAX_ORDER)
    rng = np.random.default_rng(settings.RANDOM_SEED if seed is None else seed)
    result = SuiteResult(name=name, max_order=max_order)

    logger.info(f"Running suite {name} up to order {max_order}")
    start = time.perf_counter()
    _RUNNERS[name](result, rng)
    result.elapsed = time.perf_counter() - start
    logger.info(
        f"Suite {name}: {result.checked} checks, {len(result.failures)} failures in {result.elapsed:.1f}s"
    )
    return result
