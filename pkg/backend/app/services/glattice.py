"""
G-lattices: permutation lattices Z[G/H], the augmentation kernel omega(G/H),
the map phi of the generating-tuple sequence and its kernel M

Action matrices act on column coordinate vectors, so T(gh) = T(g).T(h).
Sublattices are stored by a row basis in the coordinates of their ambient.
"""

import logging
from functools import cached_property, lru_cache
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from app.core.errors import (
    CoreNotTrivialError,
    DimensionMismatchError,
    ElementInSubgroupError,
    InvariantViolation,
    NotMemberError,
    NotStableError,
    NotSubgroupError,
    NotSurjectiveError,
)
from app.services.catalog import format_cycles
from app.services.lattice import (
    IntMatrix,
    RowLattice,
    Vector,
    block_diagonal,
    hermite_basis,
    kernel_basis,
    mat_vec,
    vec_mat,
)
from app.services.permutations import (
    CosetSpace,
    PermGroup,
    Permutation,
    Subgroup,
    compose,
    conjugate_subgroup,
    intersect,
    left_coset_space,
    normal_core,
)

logger = logging.getLogger(__name__)


class GLattice:
    """A Z-lattice of finite rank with G acting by integer matrices."""

    def __init__(
        self,
        group: PermGroup,
        rank: int,
        basis_labels: Sequence[str],
        action: Dict[Permutation, IntMatrix],
        ambient: Optional["GLattice"] = None,
        sublattice_basis: Optional[IntMatrix] = None,
    ):
        self.group = group
        self.rank = rank
        self.basis_labels = tuple(basis_labels)
        self.action = dict(action)
        self.ambient = ambient
        self.sublattice_basis = sublattice_basis

    @cached_property
    def element_matrices(self) -> Dict[Permutation, IntMatrix]:
        identity = self.group.identity
        table = {identity: IntMatrix.identity(self.rank)}
        tree = set()
        frontier = [identity]
        while frontier:
            new_frontier = []
            for x in frontier:
                for s in self.group.generators:
                    y = compose(s, x)
                    if y not in table:
                        table[y] = self.action[s] @ table[x]
                        tree.add((s, x))
                        new_frontier.append(y)
            frontier = new_frontier
        if len(table) != self.group.order:
            raise InvariantViolation(f"Action table covers {len(table)} of {self.group.order} elements")
        self._tree_edges = frozenset(tree)
        return table

    def matrix(self, g: Permutation) -> IntMatrix:
        try:
            return self.element_matrices[g]
        except KeyError:
            raise NotMemberError(f"{g} is not an element of the acting group")

    def act(self, g: Permutation, v: Sequence[int]) -> Vector:
        return mat_vec(self.matrix(g), v)

    def is_stable(self, basis: IntMatrix) -> bool:
        """True iff the row span of basis is carried into itself by every generator."""
        if basis.cols != self.rank:
            raise DimensionMismatchError(f"Basis in Z^{basis.cols} for a lattice of rank {self.rank}")
        span = RowLattice(basis)
        return all(mat_vec(self.action[s], row) in span for s in self.group.generators for row in basis)

    def verify(self, check_unimodular: bool = True) -> bool:
        """Check the lattice invariants, raising InvariantViolation on the first failure."""
        if check_unimodular:
            for s, T in self.action.items():
                if not T.is_unimodular():
                    raise InvariantViolation(f"Action matrix of {s} is not unimodular")
        table = self.element_matrices
        # T(s.x) = T(s).T(x) for generators s and all x makes T a homomorphism on all of G;
        # the edges the table was built along hold by construction
        for s in self.group.generators:
            for x in self.group.elements:
                if (s, x) in self._tree_edges:
                    continue
                if self.action[s] @ table[x] != table[compose(s, x)]:
                    raise InvariantViolation(f"Action is not multiplicative at {s} * {x}")
        if self.ambient is not None and self.sublattice_basis is not None:
            if not self.ambient.is_stable(self.sublattice_basis):
                raise InvariantViolation("Sublattice basis does not span a G-stable sublattice")
        return True

    def __repr__(self):
        return f"GLattice(rank={self.rank}, group_order={self.group.order})"


class PhiMap(NamedTuple):
    P: GLattice
    phi: IntMatrix
    stabilizers: List[Subgroup]


def _permutation_matrix(perm: Permutation) -> IntMatrix:
    n = perm.degree
    data = [[0] * n for _ in range(n)]
    for i in range(n):
        data[perm(i)][i] = 1
    return IntMatrix(data, cols=n)


def _restricted_action(ambient: GLattice, basis: IntMatrix) -> Dict[Permutation, IntMatrix]:
    """Matrices of the generators on the sublattice spanned by the (independent) rows of basis."""
    span = RowLattice(basis)
    action = {}
    for s in ambient.group.generators:
        columns = []
        for row in basis:
            coords = span.coordinates(mat_vec(ambient.action[s], row))
            if coords is None:
                raise NotStableError(f"Sublattice is not stable under {s}")
            columns.append(coords)
        action[s] = IntMatrix(columns, cols=basis.rows).transpose()
    return action


def direct_sum(lattices: Sequence[GLattice]) -> GLattice:
    group = lattices[0].group
    labels = [f"{i + 1}:{label}" for i, L in enumerate(lattices) for label in L.basis_labels]
    action = {s: block_diagonal([L.action[s] for L in lattices]) for s in group.generators}
    return GLattice(group, sum(L.rank for L in lattices), labels, action)


def perm_lattice(cs: CosetSpace) -> GLattice:
    """Z[G/H] with the coset action as 0/1 permutation matrices."""
    labels = [format_cycles(t) + "H" for t in cs.transversal]
    action = {s: _permutation_matrix(perm) for s, perm in cs.action.items()}
    return GLattice(cs.parent, cs.size, labels, action)


def coset_difference(cs: CosetSpace, a: Permutation, b: Permutation) -> Vector:
    """Coordinates of a.H - b.H in the omega basis {coset_i - coset_0}."""
    coords = [0] * (cs.size - 1)
    i, j = cs.coset_of(a), cs.coset_of(b)
    if i:
        coords[i - 1] += 1
    if j:
        coords[j - 1] -= 1
    return tuple(coords)


def omega_lattice(cs: CosetSpace) -> GLattice:
    """Kernel of the augmentation Z[G/H] -> Z, in the basis coset_i - coset_0."""
    ambient = perm_lattice(cs)
    n = cs.size
    basis = IntMatrix(
        [[1 if j == i else (-1 if j == 0 else 0) for j in range(n)] for i in range(1, n)],
        cols=n,
    )
    labels = [f"{ambient.basis_labels[i]} - {ambient.basis_labels[0]}" for i in range(1, n)]
    return GLattice(cs.parent, n - 1, labels, _restricted_action(ambient, basis), ambient, basis)


@lru_cache(maxsize=256)
def coset_omega(G: PermGroup, H: Subgroup) -> Tuple[CosetSpace, GLattice]:
    """G/H and omega(G/H), shared by every tuple built over the same pair."""
    cs = left_coset_space(G, H)
    return cs, omega_lattice(cs)


def phi_matrix(G: PermGroup, H: Subgroup, gens: Sequence[Permutation]) -> PhiMap:
    """
    The equivariant map P = (+)_i Z[G/S_i] -> omega(G/H) sending the
    generator of the i-th summand to g_i.H - H, with S_i = H n H^{g_i}
    """
    if not normal_core(G, H).is_trivial():
        raise CoreNotTrivialError(f"{H!r} contains a nontrivial normal subgroup of G")
    for g in gens:
        if g not in G:
            raise NotMemberError(f"{format_cycles(g)} is not an element of G")
        if g in H:
            raise ElementInSubgroupError(f"{format_cycles(g)} lies in H and must be dropped first")

    cs, omega = coset_omega(G, H)
    identity = G.identity

    stabilizers = []
    blocks = []
    rows: List[Vector] = []
    for g in gens:
        S = intersect(H, conjugate_subgroup(H, g))
        target = coset_difference(cs, g, identity)
        fixing = frozenset(x for x in G.elements if omega.act(x, target) == target)
        if fixing != S.members:
            raise InvariantViolation(
                f"Stabilizer of {format_cycles(g)}H - H has order {len(fixing)}, H n H^g has order {S.order}"
            )
        stabilizers.append(S)
        block_cosets = CosetSpace(G, S)
        blocks.append(perm_lattice(block_cosets))
        for x in block_cosets.transversal:
            rows.append(coset_difference(cs, compose(x, g), x))

    P = direct_sum(blocks) if blocks else GLattice(G, 0, [], {s: IntMatrix([], cols=0) for s in G.generators})
    phi = IntMatrix(rows, cols=omega.rank)

    for s in G.generators:
        T_P = P.action[s]
        T_omega = omega.action[s]
        for k in range(P.rank):
            moved = vec_mat([T_P[i, k] for i in range(P.rank)], phi)
            if moved != mat_vec(T_omega, phi.row(k)):
                raise InvariantViolation(f"phi is not equivariant for generator {format_cycles(s)}")

    logger.debug(f"phi_matrix: P of rank {P.rank}, omega of rank {omega.rank}, stabilizer orders {[S.order for S in stabilizers]}")
    return PhiMap(P, phi, stabilizers)


def kernel_module(P: GLattice, phi: IntMatrix) -> GLattice:
    """M = ker(phi) with the induced action; phi must map onto omega."""
    if phi.rows != P.rank:
        raise DimensionMismatchError(f"phi has {phi.rows} rows for P of rank {P.rank}")
    if hermite_basis(phi) != IntMatrix.identity(phi.cols):
        raise NotSurjectiveError("phi does not map onto omega(G/H); the tuple does not generate G over H")
    K = kernel_basis(phi)
    if K.rows != P.rank - phi.cols:
        raise InvariantViolation(f"Kernel rank {K.rows} != {P.rank} - {phi.cols}")
    labels = [f"m{i + 1}" for i in range(K.rows)]
    return GLattice(P.group, K.rows, labels, _restricted_action(P, K), P, K)


def action_kernel(L: GLattice) -> Subgroup:
    """Elements acting as the identity on L; trivial iff the action is faithful."""
    members = [g for g in L.group.elements if L.matrix(g).is_identity()]
    return Subgroup.from_elements(L.group, members, check=False)


def zg_submodule(amb: GLattice, vectors: Sequence[Sequence[int]]) -> IntMatrix:
    """Hermite basis of the Z[G]-submodule generated by vectors."""
    for v in vectors:
        if len(v) != amb.rank:
            raise DimensionMismatchError(f"Vector of length {len(v)} in a lattice of rank {amb.rank}")
    basis = hermite_basis(IntMatrix([tuple(v) for v in vectors], cols=amb.rank))
    for _ in range(amb.group.order + 1):
        images = [mat_vec(amb.action[s], row) for s in amb.group.generators for row in basis]
        grown = hermite_basis(basis.stack(IntMatrix(images, cols=amb.rank)))
        if grown == basis:
            return basis
        basis = grown
    raise InvariantViolation(f"Span did not stabilize within {amb.group.order} rounds")


def g_v_subgroup(cs: CosetSpace, V: IntMatrix) -> Subgroup:
    """G_V = {g : g.H - H in V} for a G-stable sublattice V of omega(G/H)."""
    omega = omega_lattice(cs)
    if not omega.is_stable(V):
        raise NotStableError("V is not a G-stable sublattice of omega(G/H)")
    span = RowLattice(V)
    identity = cs.parent.identity
    members = [g for g in cs.parent.elements if coset_difference(cs, g, identity) in span]
    try:
        G_V = Subgroup.from_elements(cs.parent, members)
    except NotSubgroupError as e:
        raise InvariantViolation(f"G_V is not a subgroup: {e.detail}")
    if not cs.subgroup.members <= G_V.members:
        raise InvariantViolation("G_V does not contain H")
    return G_V
