"""
Upper bounds on the essential dimension of G/H-crossed products

- thm_h_bound: sum_i [G : H n H^{g_i}] - [G:H] + 1 for a tuple generating G
  over H, certified end to end by building the lattice sequence
  0 -> M -> (+)_i Z[G/S_i] -> omega(G/H) -> 0 and checking G acts
  faithfully on M
- csa_bound / section5_bound: r [G:H][N:H] - [G:H] + 1 for H <= N normal,
  G/N generated by r elements, and the explicit tuple that realizes it
- pgl_bound / compare_bounds: the closed forms for degree n = p^s
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

import sympy

from app.core.config import settings
from app.core.errors import (
    CapExceededError,
    ConditionIIError,
    CoreNotTrivialError,
    CsaHypothesisError,
    GenerationError,
    HypothesisError,
    InvariantViolation,
    NoAdmissibleTupleError,
    NotMemberError,
    NotNormalError,
    NotSubgroupError,
    PglDomainError,
)
from app.services.catalog import format_cycles
from app.services.glattice import GLattice, action_kernel, kernel_module, phi_matrix
from app.services.permutations import (
    CosetSpace,
    PermGroup,
    Permutation,
    QuotientGroup,
    Subgroup,
    closure,
    compose,
    conjugate_subgroup,
    generates_over,
    intersect,
    is_normal,
    min_generators,
    normal_core,
    product_set_size,
    quotient,
)

logger = logging.getLogger(__name__)

THM_RANK_NOTE = (
    "Transcription note: the permutation-lattice criterion is stated as ed(A) <= rank(M) - n + 1, "
    "while the generating-tuple formula sum_i [G:S_i] - [G:H] + 1 equals rank(M) exactly. "
    "The formula value is reported as the bound with rank(M) alongside; the n - 1 difference is left unresolved."
)


class StabilizerTerm(NamedTuple):
    index: int
    identity_check: bool
    product_size: int


@dataclass(frozen=True)
class Preconditions:
    core_trivial: bool
    condition_ii: bool
    generates_over_H: bool


@dataclass
class Section5Details:
    quotient_generators: Tuple[Permutation, ...]
    representatives: Tuple[Permutation, ...]
    H_prime_order: int
    m: int
    transversal: Tuple[Permutation, ...]


@dataclass
class BoundReport:
    bound: int
    generating_tuple: Tuple[Permutation, ...]
    stabilizer_indices: Tuple[int, ...]
    rank_M: int
    faithful: bool
    preconditions: Preconditions
    provenance: str
    index_G_H: int
    dropped: Tuple[Permutation, ...] = ()
    label: str = ""
    csa_bound: Optional[int] = None
    section5: Optional[Section5Details] = None
    note: str = THM_RANK_NOTE
    # the kernel lattice M the bound was certified on
    module: Optional[GLattice] = field(default=None, repr=False, compare=False)

    @property
    def valid(self) -> bool:
        p = self.preconditions
        return (
            self.faithful
            and self.bound == self.rank_M
            and p.core_trivial
            and p.condition_ii
            and p.generates_over_H
        )


@dataclass
class CompareRow:
    p: int
    s: int
    n: int
    procesi: int
    eq1_all_n: int
    eq1_odd_n: Optional[int]
    prior_mr: int
    new: int
    min_prior: int = field(init=False)
    minimum: int = field(init=False)

    def __post_init__(self):
        prior = [b for b in (self.eq1_all_n, self.eq1_odd_n, self.prior_mr) if b is not None]
        self.min_prior = min(prior)
        self.minimum = min(self.min_prior, self.new)


def _require_subgroup(G: PermGroup, H: PermGroup, name: str = "H"):
    if H.degree != G.degree or not H.members <= G.members:
        raise NotSubgroupError(f"{name} is not a subgroup of G")


def _require_core_trivial(G: PermGroup, H: Subgroup):
    core = normal_core(G, H)
    if not core.is_trivial():
        logger.error(f"Core of H has order {core.order}")
        raise CoreNotTrivialError(f"H contains a normal subgroup of G of order {core.order}")


def stabilizer_index(G: PermGroup, H: Subgroup, g: Permutation) -> StabilizerTerm:
    """[G : H n H^g], with the check [G:H] * |H.H^g| / |H| giving the same number."""
    if g not in G:
        raise NotMemberError(f"{format_cycles(g)} is not an element of G")
    _require_subgroup(G, H)
    conj = conjugate_subgroup(H, g)
    index = G.order // intersect(H, conj).order
    product = product_set_size(H, conj)
    identity_check = product % H.order == 0 and index == (G.order // H.order) * (product // H.order)
    return StabilizerTerm(index, identity_check, product)


def thm_h_bound(
    G: PermGroup,
    H: Subgroup,
    gens: Sequence[Permutation],
    label: str = "",
    provenance: str = "thm-h",
) -> BoundReport:
    _require_subgroup(G, H)
    for g in gens:
        if g not in G:
            raise NotMemberError(f"{format_cycles(g)} is not an element of G")
    _require_core_trivial(G, H)

    kept = tuple(g for g in gens if g not in H)
    dropped = tuple(g for g in gens if g in H)
    if dropped:
        logger.warning(f"Dropped elements of H from the tuple: {[format_cycles(g) for g in dropped]}")

    if G.is_cyclic and H.is_trivial():
        logger.error("Condition (ii) fails: G is cyclic and H is trivial")
        raise ConditionIIError("G is cyclic and H is trivial")
    if not generates_over(G, H, kept):
        logger.error(f"Tuple {[format_cycles(g) for g in kept]} does not generate G over H")
        raise GenerationError("The tuple does not generate G over H")

    terms = [stabilizer_index(G, H, g) for g in kept]
    for g, term in zip(kept, terms):
        if not term.identity_check:
            raise InvariantViolation(f"Index factorization fails for {format_cycles(g)}")
    index_G_H = G.order // H.order
    bound = sum(t.index for t in terms) - index_G_H + 1

    P, phi, stabilizers = phi_matrix(G, H, kept)
    if [G.order // S.order for S in stabilizers] != [t.index for t in terms]:
        raise InvariantViolation("Stabilizer orders disagree with the index terms")
    M = kernel_module(P, phi)
    kernel = action_kernel(M)
    faithful = kernel.is_trivial()
    if not faithful:
        logger.error(f"G acts on M with a kernel of order {kernel.order}")
        raise InvariantViolation(f"G does not act faithfully on M (kernel of order {kernel.order})")
    if M.rank != bound:
        raise InvariantViolation(f"rank(M) = {M.rank} differs from the bound {bound}")

    logger.info(f"{provenance} bound {bound} for tuple {[format_cycles(g) for g in kept]}")
    return BoundReport(
        bound=bound,
        generating_tuple=kept,
        stabilizer_indices=tuple(t.index for t in terms),
        rank_M=M.rank,
        faithful=faithful,
        preconditions=Preconditions(core_trivial=True, condition_ii=True, generates_over_H=True),
        provenance=provenance,
        index_G_H=index_G_H,
        dropped=dropped,
        module=M,
        label=label,
    )


def optimal_thm_h_bound(
    G: PermGroup,
    H: Subgroup,
    max_s: int,
    label: str = "",
    cap: Optional[int] = None,
) -> BoundReport:
    """
    Minimum of the generating-tuple bound over tuples of size <= max_s

    Both the terms and generation over H only see g through the coset gH,
    so candidates are the least representatives of the nontrivial cosets.
    Tuples are visited in lexicographic order; the first minimum wins.
    """
    cap = settings.SEARCH_CAP if cap is None else cap
    if max_s < 1:
        raise HypothesisError(f"max_s must be at least 1, got {max_s}")
    _require_subgroup(G, H)
    _require_core_trivial(G, H)
    if G.is_cyclic and H.is_trivial():
        raise ConditionIIError("G is cyclic and H is trivial; no tuple is admissible")

    candidates = CosetSpace(G, H).transversal[1:]
    terms = {g: stabilizer_index(G, H, g).index for g in candidates}
    best_sum: Optional[int] = None
    best_tuple: Tuple[Permutation, ...] = ()
    examined = 0

    def search(start: int, chosen: List[Permutation], partial: int):
        nonlocal best_sum, best_tuple, examined
        for i in range(start, len(candidates)):
            g = candidates[i]
            total = partial + terms[g]
            # every term is positive, so extensions only grow the sum
            if best_sum is not None and total >= best_sum:
                continue
            examined += 1
            if examined > cap:
                logger.error(f"Tuple search exceeded {cap} candidates")
                raise CapExceededError(f"Tuple search exceeded the cap of {cap} candidates")
            tuple_ = chosen + [g]
            if generates_over(G, H, tuple_):
                best_sum, best_tuple = total, tuple(tuple_)
            elif len(tuple_) < max_s:
                search(i + 1, tuple_, total)

    search(0, [], 0)
    logger.debug(f"optimal_thm_h_bound: examined {examined} tuples")
    if best_sum is None:
        raise NoAdmissibleTupleError(f"No tuple of size <= {max_s} generates G over H")
    return thm_h_bound(G, H, best_tuple, label=label, provenance="optimal")


class CsaSetup(NamedTuple):
    quotient: QuotientGroup
    r: int
    witness: Tuple[Permutation, ...]
    bound: int


def csa_setup(G: PermGroup, H: Subgroup, N: Subgroup) -> CsaSetup:
    _require_subgroup(G, H)
    _require_subgroup(G, N, "N")
    if not H.members <= N.members:
        raise CsaHypothesisError("H is not contained in N")
    if not is_normal(G, N):
        raise NotNormalError("N is not normal in G")
    _require_core_trivial(G, H)
    Q = quotient(G, N)
    r, witness = min_generators(Q)
    if r == 0:
        # the trivial quotient is generated by its identity
        r, witness = 1, (Q.identity,)
    if H.is_trivial() and r < 2:
        logger.error("Hypothesis fails: H is trivial and G/N is cyclic")
        raise CsaHypothesisError("H is trivial and G/N is generated by a single element")
    index_G_H = G.order // H.order
    bound = r * index_G_H * (N.order // H.order) - index_G_H + 1
    return CsaSetup(Q, r, witness, bound)


def csa_bound(G: PermGroup, H: Subgroup, N: Subgroup) -> int:
    """r [G:H][N:H] - [G:H] + 1 with r the minimal number of generators of G/N."""
    return csa_setup(G, H, N).bound


def section5_bound(
    G: PermGroup,
    H: Subgroup,
    N: Subgroup,
    label: str = "",
    cap: Optional[int] = None,
) -> BoundReport:
    """
    Realize the normal-subgroup bound by an explicit generating tuple

    Representatives g_i of fixed generators of G/N are chosen to maximize
    H' = <H, H^{g_1}, ..., H^{g_r}>; with a transversal 1 = n_1, ..., n_m of
    H' in N the tuple {g_i n_j} generates G over H and its generating-tuple
    bound is at most the normal-subgroup bound.
    """
    cap = settings.SEARCH_CAP if cap is None else cap
    setup = csa_setup(G, H, N)
    Q = setup.quotient
    cosets = [Q.cosets.members(Q.coset_slot(t)) for t in setup.witness]
    candidates = math.prod(len(c) for c in cosets)
    if candidates > cap:
        raise CapExceededError(f"{candidates} representative choices exceed the cap of {cap}")

    best_order = 0
    best_reps: Tuple[Permutation, ...] = ()
    for reps in itertools.product(*cosets):
        gens = list(H.generators)
        for g in reps:
            gens.extend(conjugate_subgroup(H, g).generators)
        order = closure(G.degree, gens).order
        if order > best_order:
            best_order, best_reps = order, reps

    gens = list(H.generators)
    for g in best_reps:
        gens.extend(conjugate_subgroup(H, g).generators)
    H_prime = Subgroup.generated(G, gens)
    if not H_prime.members <= N.members:
        raise InvariantViolation("H' is not contained in N")
    m = N.order // H_prime.order
    transversal = CosetSpace(N, H_prime).transversal

    # m <= [N : H^{g_i g} H] for every i and every g in N
    for g_i in best_reps:
        for g in N.elements:
            size = product_set_size(conjugate_subgroup(H, compose(g_i, g)), H)
            if m * size > N.order:
                raise InvariantViolation(
                    f"Maximality inequality fails at {format_cycles(g_i)} * {format_cycles(g)}: m={m}, |H^g H|={size}"
                )

    tuple_ = [compose(g_i, n_j) for g_i in best_reps for n_j in transversal]
    if not generates_over(G, H, tuple_):
        raise InvariantViolation("The elements g_i n_j do not generate G over H")

    report = thm_h_bound(G, H, tuple_, label=label, provenance="section5")
    if report.bound > setup.bound:
        raise InvariantViolation(f"Tuple bound {report.bound} exceeds the normal-subgroup bound {setup.bound}")
    report.csa_bound = setup.bound
    report.section5 = Section5Details(
        quotient_generators=setup.witness,
        representatives=tuple(best_reps),
        H_prime_order=H_prime.order,
        m=m,
        transversal=transversal,
    )
    return report


def normal_weak_bound(G: PermGroup, H: Subgroup, N: Subgroup, gens: Sequence[Permutation]) -> int:
    """s [G:H][N:H] - [G:H] + 1, every tuple term bounded by [G:H][N:H]."""
    _require_subgroup(G, H)
    _require_subgroup(G, N, "N")
    if not H.members <= N.members:
        raise CsaHypothesisError("H is not contained in N")
    if not is_normal(G, N):
        raise NotNormalError("N is not normal in G")
    s = sum(1 for g in gens if g not in H)
    index_G_H = G.order // H.order
    return s * index_G_H * (N.order // H.order) - index_G_H + 1


def csa_field_bound(n: int, galois_degree: int, r: int) -> int:
    """r n^2 / [F:K] - n + 1 for a degree-n algebra containing a Galois subfield F."""
    if n < 1 or galois_degree < 1 or n % galois_degree:
        raise CsaHypothesisError(f"[F:K] = {galois_degree} must divide the degree n = {n}")
    if r < 1:
        raise CsaHypothesisError(f"r must be at least 1, got {r}")
    if galois_degree == n and r < 2:
        raise CsaHypothesisError("[F:K] = n requires r >= 2")
    return r * n * n // galois_degree - n + 1


def _require_prime_power(p: int, s: int):
    if not sympy.isprime(p):
        raise PglDomainError(f"p = {p} is not prime")
    if s < 2:
        raise PglDomainError(f"s = {s}; the bound needs s >= 2")


def pgl_bound(p: int, s: int) -> int:
    """2 n^2 / p^2 - n + 1 for n = p^s."""
    _require_prime_power(p, s)
    n = p ** s
    return 2 * n * n // (p * p) - n + 1


def compare_bounds(p: int, s: int) -> CompareRow:
    _require_prime_power(p, s)
    n = p ** s
    return CompareRow(
        p=p,
        s=s,
        n=n,
        procesi=n * n,
        eq1_all_n=n * n - 3 * n + 1,
        eq1_odd_n=(n - 1) * (n - 2) // 2 if n % 2 and n >= 5 else None,
        prior_mr=p ** (2 * s - 1) - n + 1,
        new=pgl_bound(p, s),
    )


def compare_table(p: int, s_max: int) -> List[CompareRow]:
    if s_max < 2:
        raise PglDomainError(f"s_max = {s_max}; the table starts at s = 2")
    return [compare_bounds(p, s) for s in range(2, s_max + 1)]
