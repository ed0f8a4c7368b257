"""
Exact finite permutation groups, fully enumerated

Conventions used throughout the services:
- points are 0-based internally (1-based only in cycle notation, see catalog)
- composition is right-to-left, (p * q)(x) = p(q(x))
- cosets are left cosets gH and G acts on them by g.(xH) = (gx)H
- element lists are sorted lexicographically on image tuples, so the
  identity always comes first
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from app.core.config import settings
from app.core.errors import (
    CapExceededError,
    DegreeMismatchError,
    InvariantViolation,
    NotMemberError,
    NotNormalError,
    NotSubgroupError,
    ParentMismatchError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Permutation:
    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"Not a bijection on 0..{len(images) - 1}: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def _trusted(cls, images: Tuple[int, ...]) -> "Permutation":
        perm = object.__new__(cls)
        object.__setattr__(perm, "images", images)
        return perm

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._trusted(tuple(range(degree)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for point, image in enumerate(self.images):
            inv[image] = point
        return Permutation._trusted(tuple(inv))

    def is_identity(self) -> bool:
        return all(point == image for point, image in enumerate(self.images))

    def cycles(self) -> List[Tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point."""
        seen = set()
        cycles = []
        for start in range(len(self.images)):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            point = self.images[start]
            while point != start:
                cycle.append(point)
                seen.add(point)
                point = self.images[point]
            if len(cycle) > 1:
                cycles.append(tuple(cycle))
        return cycles

    def order(self) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def __repr__(self):
        body = "".join("(" + " ".join(str(p + 1) for p in c) + ")" for c in self.cycles())
        return f"Permutation({body or '()'})"


def compose(p: Permutation, q: Permutation) -> Permutation:
    if p.degree != q.degree:
        raise DegreeMismatchError(f"Cannot compose degree {p.degree} with degree {q.degree}")
    p_images = p.images
    return Permutation._trusted(tuple(p_images[x] for x in q.images))


def _close(degree: int, gens: Iterable[Permutation], cap: Optional[int] = None) -> Set[Permutation]:
    """Element set of the group generated by gens (orbit of the identity)."""
    cap = settings.ORDER_CAP if cap is None else cap
    gens = list(gens)
    for g in gens:
        if g.degree != degree:
            raise DegreeMismatchError(f"Generator {g} does not have degree {degree}")
    identity = Permutation.identity(degree)
    seen = {identity}
    frontier = [identity]
    while frontier:
        new_frontier = []
        for x in frontier:
            for g in gens:
                y = compose(g, x)
                if y not in seen:
                    seen.add(y)
                    new_frontier.append(y)
                    if len(seen) > cap:
                        logger.error(f"Closure exceeded order cap {cap}")
                        raise CapExceededError(f"Group order exceeds the cap of {cap}")
        frontier = new_frontier
    return seen


class PermGroup:
    """A permutation group stored as its sorted element list."""

    def __init__(self, degree: int, generators: Sequence[Permutation], elements: Iterable[Permutation]):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(sorted(elements))
        self._members = frozenset(self.elements)

    @property
    def members(self) -> FrozenSet[Permutation]:
        return self._members

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Permutation:
        return self.elements[0]

    def __contains__(self, g) -> bool:
        return g in self._members

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.degree == other.degree and self._members == other._members

    def __hash__(self):
        return hash((self.degree, self._members))

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    @cached_property
    def is_cyclic(self) -> bool:
        return any(g.order() == self.order for g in self.elements)

    @cached_property
    def position(self) -> Dict[Permutation, int]:
        return {g: i for i, g in enumerate(self.elements)}

    def __repr__(self):
        return f"{type(self).__name__}(degree={self.degree}, order={self.order})"


class Subgroup(PermGroup):
    """A subgroup remembering the group it was taken in."""

    def __init__(self, parent: PermGroup, generators: Sequence[Permutation], elements: Iterable[Permutation]):
        super().__init__(parent.degree, generators, elements)
        self.parent = parent
        if parent.order % self.order:
            raise InvariantViolation(f"Subgroup order {self.order} does not divide {parent.order}")

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    @classmethod
    def generated(cls, parent: PermGroup, gens: Sequence[Permutation], cap: Optional[int] = None) -> "Subgroup":
        for g in gens:
            if g not in parent:
                raise NotMemberError(f"{g} is not an element of the parent group")
        return cls(parent, gens, _close(parent.degree, gens, cap))

    @classmethod
    def from_elements(cls, parent: PermGroup, elements: Iterable[Permutation], check: bool = True) -> "Subgroup":
        members = frozenset(elements)
        if not members <= parent.members:
            raise NotMemberError("Element set is not contained in the parent group")
        if check:
            if parent.identity not in members:
                raise NotSubgroupError("Element set does not contain the identity")
            for a in members:
                for b in members:
                    if compose(a, b) not in members:
                        raise NotSubgroupError(f"Element set is not closed: {a} * {b}")
        gens: List[Permutation] = []
        span = {parent.identity}
        for g in sorted(members):
            if g not in span:
                gens.append(g)
                span = _close(parent.degree, gens)
        return cls(parent, gens, members)

    @classmethod
    def trivial(cls, parent: PermGroup) -> "Subgroup":
        return cls(parent, (), (parent.identity,))

    @classmethod
    def whole(cls, parent: PermGroup) -> "Subgroup":
        return cls(parent, parent.generators, parent.elements)


class CosetSpace:
    """Indexed left cosets G/H with the induced action of G on indices."""

    def __init__(self, parent: PermGroup, subgroup: Subgroup):
        self.parent = parent
        self.subgroup = subgroup
        transversal: List[Permutation] = []
        index: Dict[Permutation, int] = {}
        # Elements are sorted, so each representative is the least element of its coset
        for g in parent.elements:
            if g in index:
                continue
            slot = len(transversal)
            transversal.append(g)
            for h in subgroup.elements:
                index[compose(g, h)] = slot
        self.transversal = tuple(transversal)
        self._index = index
        self.action = {s: self.permutation_of(s) for s in parent.generators}

    @property
    def size(self) -> int:
        return len(self.transversal)

    def coset_of(self, g: Permutation) -> int:
        try:
            return self._index[g]
        except KeyError:
            raise NotMemberError(f"{g} is not an element of the parent group")

    def act(self, g: Permutation, slot: int) -> int:
        return self.coset_of(compose(g, self.transversal[slot]))

    def permutation_of(self, g: Permutation) -> Permutation:
        return Permutation._trusted(tuple(self.act(g, slot) for slot in range(self.size)))

    def members(self, slot: int) -> Tuple[Permutation, ...]:
        rep = self.transversal[slot]
        return tuple(sorted(compose(rep, h) for h in self.subgroup.elements))


class QuotientGroup(PermGroup):
    """G/N realized as the image of G acting on the cosets of N."""

    def __init__(self, cosets: CosetSpace, generators, elements):
        super().__init__(cosets.size, generators, elements)
        self.cosets = cosets

    def coset_slot(self, t: Permutation) -> int:
        # t sends the coset N (slot 0) to the coset gN of any preimage g
        return t(0)


def _require_subgroup(G: PermGroup, H: PermGroup):
    if H.degree != G.degree or not H.members <= G.members:
        raise NotSubgroupError(f"{H!r} is not a subgroup of {G!r}")


def _require_same_parent(H: Subgroup, K: Subgroup):
    if H.parent != K.parent:
        raise ParentMismatchError(f"{H!r} and {K!r} live in different groups")


def closure(degree: int, gens: Sequence[Permutation], cap: Optional[int] = None) -> PermGroup:
    return PermGroup(degree, gens, _close(degree, gens, cap))


def left_coset_space(G: PermGroup, H: Subgroup) -> CosetSpace:
    _require_subgroup(G, H)
    return CosetSpace(G, H)


def conjugate_subgroup(H: Subgroup, g: Permutation) -> Subgroup:
    """H^g = g H g^-1."""
    if g not in H.parent:
        raise NotMemberError(f"{g} is not in the parent group of {H!r}")
    g_inv = g.inverse()
    elements = [compose(compose(g, h), g_inv) for h in H.elements]
    gens = [compose(compose(g, s), g_inv) for s in H.generators]
    return Subgroup(H.parent, gens, elements)


def intersect(H: Subgroup, K: Subgroup) -> Subgroup:
    _require_same_parent(H, K)
    return Subgroup.from_elements(H.parent, H.members & K.members, check=False)


def normal_core(G: PermGroup, H: Subgroup) -> Subgroup:
    _require_subgroup(G, H)
    core = set(H.members)
    # H^{th} = H^t, so one conjugate per left coset suffices
    for t in CosetSpace(G, H).transversal:
        t_inv = t.inverse()
        core &= {compose(compose(t, h), t_inv) for h in H.elements}
    return Subgroup.from_elements(G, core, check=False)


def product_set_size(H: Subgroup, K: Subgroup) -> int:
    """|H.K| by explicit enumeration, cross-checked against |H||K| / |H n K|."""
    _require_same_parent(H, K)
    products = {compose(h, k) for h in H.elements for k in K.elements}
    common = len(H.members & K.members)
    if len(products) * common != H.order * K.order:
        raise InvariantViolation(
            f"Product formula failed: |HK|={len(products)}, |H n K|={common}, |H|={H.order}, |K|={K.order}"
        )
    return len(products)


def is_normal(G: PermGroup, N: PermGroup) -> bool:
    _require_subgroup(G, N)
    for s in G.generators:
        s_inv = s.inverse()
        for n in N.generators or N.elements:
            if compose(compose(s, n), s_inv) not in N:
                return False
    return True


def quotient(G: PermGroup, N: Subgroup, cap: Optional[int] = None) -> QuotientGroup:
    if not is_normal(G, N):
        raise NotNormalError(f"{N!r} is not normal in {G!r}")
    cosets = CosetSpace(G, N)
    images = [cosets.action[s] for s in G.generators]
    image = _close(cosets.size, images, cap)
    if len(image) != cosets.size:
        raise InvariantViolation(f"Quotient has order {len(image)}, expected index {cosets.size}")
    return QuotientGroup(cosets, images, image)


def _cyclic_members(g: Permutation) -> FrozenSet[Permutation]:
    members = [g]
    x = g
    while not x.is_identity():
        x = compose(g, x)
        members.append(x)
    return frozenset(members)


def _cyclic_representatives(G: PermGroup) -> List[Permutation]:
    """The least element generating each cyclic subgroup, in element order."""
    seen = set()
    reps = []
    for g in G.elements[1:]:
        members = _cyclic_members(g)
        if members not in seen:
            seen.add(members)
            reps.append(g)
    return reps


def min_generators(G: PermGroup, cap: Optional[int] = None) -> Tuple[int, Tuple[Permutation, ...]]:
    """
    Smallest r such that some r elements generate G, with a witness

    Candidates are restricted to one generator per cyclic subgroup, and a
    candidate already inside the span of the chosen prefix is skipped.
    """
    cap = settings.SEARCH_CAP if cap is None else cap
    if G.order == 1:
        return 0, ()
    reps = _cyclic_representatives(G)
    for g in reps:
        if g.order() == G.order:
            return 1, (g,)

    examined = 0

    def search(prefix: List[Permutation], span: Set[Permutation], start: int, depth: int):
        nonlocal examined
        for i in range(start, len(reps)):
            candidate = reps[i]
            if candidate in span:
                continue
            examined += 1
            if examined > cap:
                logger.error(f"Generator search exceeded {cap} candidates for {G!r}")
                raise CapExceededError(f"Generator search exceeded the cap of {cap} candidates")
            tuple_ = prefix + [candidate]
            new_span = _close(G.degree, tuple_)
            if depth == 1:
                if len(new_span) == G.order:
                    return tuple(tuple_)
                continue
            if len(new_span) == G.order:
                # a shorter tuple would already have been found
                continue
            found = search(tuple_, new_span, i + 1, depth - 1)
            if found:
                return found
        return None

    r = 2
    while True:
        witness = search([], {G.identity}, 0, r)
        if witness:
            logger.debug(f"min_generators: r={r} after {examined} candidates")
            return r, witness
        r += 1


def generates_over(G: PermGroup, H: Subgroup, gens: Sequence[Permutation]) -> bool:
    """True iff G = <gens, H>."""
    _require_subgroup(G, H)
    for g in gens:
        if g not in G:
            raise NotMemberError(f"{g} is not an element of {G!r}")
    return len(_close(G.degree, list(gens) + list(H.generators))) == G.order


@lru_cache(maxsize=64)
def all_subgroups(G: PermGroup) -> Tuple[Subgroup, ...]:
    """Every subgroup of G, as joins of cyclic subgroups, ordered by (order, elements)."""
    cyclic = [(_cyclic_members(g), g) for g in _cyclic_representatives(G)]
    found: Dict[FrozenSet[Permutation], Tuple[Permutation, ...]] = {frozenset([G.identity]): ()}
    for members, g in cyclic:
        found.setdefault(members, (g,))
    worklist = list(found)
    while worklist:
        members = worklist.pop()
        gens = found[members]
        for cyc, g in cyclic:
            if cyc <= members:
                continue
            joined = frozenset(_close(G.degree, gens + (g,)))
            if joined not in found:
                found[joined] = gens + (g,)
                worklist.append(joined)
    ordered = sorted(found.items(), key=lambda item: (len(item[0]), sorted(item[0])))
    logger.debug(f"all_subgroups: {len(ordered)} subgroups of {G!r}")
    return tuple(Subgroup(G, gens, members) for members, gens in ordered)


def normal_subgroups(G: PermGroup) -> Tuple[Subgroup, ...]:
    return tuple(N for N in all_subgroups(G) if is_normal(G, N))
