"""
Group constructors and cycle notation

External text always uses 1-based points, e.g. "(1 2 3)(4 5)"; "()" is the
identity.
"""

import logging
import re
from typing import List, Optional, Tuple

from app.core.errors import InvariantViolation, ParseError
from app.services.permutations import PermGroup, Permutation, closure

logger = logging.getLogger(__name__)

_CYCLE = re.compile(r"\(([^()]*)\)")
_POINT = re.compile(r"[0-9]+")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse disjoint cycles of 1-based points into a permutation of the given degree."""
    stripped = text.strip()
    if not stripped:
        raise ParseError("Empty cycle string; use () for the identity")
    leftover = _CYCLE.sub("", stripped)
    if leftover.strip():
        raise ParseError(f"Malformed cycle notation: {text!r}")

    images = list(range(degree))
    used = set()
    for match in _CYCLE.finditer(stripped):
        tokens = match.group(1).split()
        points = []
        for token in tokens:
            if not _POINT.fullmatch(token):
                raise ParseError(f"Not a point: {token!r} in {text!r}")
            point = int(token)
            if not 1 <= point <= degree:
                raise ParseError(f"Point {point} out of range 1..{degree} in {text!r}")
            if point in used:
                raise ParseError(f"Repeated point {point} in {text!r}")
            used.add(point)
            points.append(point - 1)
        for k, point in enumerate(points):
            images[point] = points[(k + 1) % len(points)]
    return Permutation(tuple(images))


def format_cycles(p: Permutation) -> str:
    cycles = p.cycles()
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(x + 1) for x in cycle) + ")" for cycle in cycles)


def _cycle_on(points: List[int], degree: int) -> Permutation:
    images = list(range(degree))
    for k, point in enumerate(points):
        images[point] = points[(k + 1) % len(points)]
    return Permutation(tuple(images))


def make_group(kind: str, *params, cap: Optional[int] = None) -> PermGroup:
    """
    Standard permutation realizations

    cyclic n / dihedral n / symmetric n / alternating n act on n points,
    elementary_abelian p k on p*k points as k disjoint p-cycles, and
    direct_product G1 G2 on disjoint point sets.
    """
    if kind == "cyclic":
        (n,) = params
        gens = [_cycle_on(list(range(n)), n)] if n > 1 else []
        return closure(n, gens, cap)
    if kind == "dihedral":
        (n,) = params
        if n < 3:
            raise ParseError(f"Dihedral groups need n >= 3, got {n}")
        reflection = Permutation(tuple((-i) % n for i in range(n)))
        return closure(n, [_cycle_on(list(range(n)), n), reflection], cap)
    if kind == "symmetric":
        (n,) = params
        gens = [_cycle_on(list(range(n)), n), _cycle_on([0, 1], n)] if n > 1 else []
        return closure(n, gens, cap)
    if kind == "alternating":
        (n,) = params
        gens = [_cycle_on([0, 1, k], n) for k in range(2, n)]
        return closure(n, gens, cap)
    if kind == "elementary_abelian":
        p, k = params
        degree = p * k
        gens = [_cycle_on(list(range(b * p, (b + 1) * p)), degree) for b in range(k)]
        return closure(degree, gens, cap)
    if kind == "direct_product":
        first, second = params
        degree = first.degree + second.degree
        shift = first.degree
        gens = [Permutation(g.images + tuple(range(shift, degree))) for g in first.generators]
        gens += [Permutation(tuple(range(shift)) + tuple(x + shift for x in g.images)) for g in second.generators]
        return closure(degree, gens, cap)
    raise ParseError(f"Unsupported group kind: {kind!r}")


# label, order, constructor arguments; products refer to earlier labels
_CATALOG: List[Tuple[str, int, tuple]] = (
    [(f"C{n}", n, ("cyclic", n)) for n in range(2, 13)]
    + [(f"D{n}", 2 * n, ("dihedral", n)) for n in range(3, 25)]
    + [
        ("S3", 6, ("symmetric", 3)),
        ("S4", 24, ("symmetric", 4)),
        ("A4", 12, ("alternating", 4)),
        ("E(2^2)", 4, ("elementary_abelian", 2, 2)),
        ("E(2^3)", 8, ("elementary_abelian", 2, 3)),
        ("E(3^2)", 9, ("elementary_abelian", 3, 2)),
        ("E(2^4)", 16, ("elementary_abelian", 2, 4)),
        ("C4xC2", 8, ("direct_product", "C4", "C2")),
        ("C4xC4", 16, ("direct_product", "C4", "C4")),
        ("C2xS3", 12, ("direct_product", "C2", "S3")),
        ("C3xS3", 18, ("direct_product", "C3", "S3")),
        ("C2xD4", 16, ("direct_product", "C2", "D4")),
        ("C2xA4", 24, ("direct_product", "C2", "A4")),
        ("S3xS3", 36, ("direct_product", "S3", "S3")),
        ("C2xS4", 48, ("direct_product", "C2", "S4")),
    ]
)


def catalog_groups(max_order: int) -> List[Tuple[str, PermGroup]]:
    """The fixed test corpus, restricted to groups of order <= max_order."""
    built = {}

    def build(label: str) -> PermGroup:
        if label not in built:
            kind, *args = next(spec for name, _, spec in _CATALOG if name == label)
            if kind == "direct_product":
                args = [build(a) for a in args]
            built[label] = make_group(kind, *args)
        return built[label]

    groups = [(label, build(label)) for label, order, _ in _CATALOG if order <= max_order]
    for label, G in groups:
        advertised = next(order for name, order, _ in _CATALOG if name == label)
        if G.order != advertised:
            raise InvariantViolation(f"Catalog group {label} has order {G.order}, expected {advertised}")
    logger.info(f"Catalog: {len(groups)} groups of order <= {max_order}")
    return groups
