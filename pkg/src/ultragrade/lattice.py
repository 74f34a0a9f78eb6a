"""The lattice of generalized vertices and its membership decision.

A subset A of the vertices is a generalized vertex iff it can be written
as F ∪ I_1 ∪ ... ∪ I_k with F finite and each I_j a nonempty intersection
of ranges of individually specified edges.  This normal form follows from
closure under finite unions and nonempty finite intersections: edge-family
ranges are finite per member, so all the infinite content comes from the
individually specified ranges.  The finite-closure enumeration below acts
as an independent oracle on finite instances.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotFinite, TooManyIntersections
from .model import UltragraphPresentation, VertexRef, VertexSet

INTERSECTION_CAP = 2**20


@dataclass(frozen=True)
class GeneralizedVertex:
    """Witness decomposition: a finite remainder plus range intersections."""

    underlying: VertexSet
    finite_part: tuple[VertexRef, ...]
    intersections: tuple[tuple[str, ...], ...]  # each a set of edge ids

    def reevaluate(self, pres: UltragraphPresentation) -> VertexSet:
        out = VertexSet.of(*self.finite_part)
        for ids in self.intersections:
            cur = pres.edges[ids[0]].range
            for eid in ids[1:]:
                cur = cur.intersection(pres.edges[eid].range)
            out = out.union(cur)
        return out


def _range_intersections(pres: UltragraphPresentation) -> dict[tuple[str, ...], VertexSet]:
    """All distinct nonempty intersections of individually specified ranges,
    keyed by a representative edge-id set, computed by worklist closure."""
    out: dict[tuple[VertexSet, ...], None] = {}
    found: dict = {}
    by_set: dict = {}
    for eid, e in sorted(pres.edges.items()):
        key = (eid,)
        if e.range.key() not in by_set:
            by_set[e.range.key()] = key
            found[key] = e.range
    changed = True
    while changed:
        changed = False
        for key, vs in list(found.items()):
            for eid, e in sorted(pres.edges.items()):
                if eid in key:
                    continue
                inter = vs.intersection(e.range)
                if inter.is_empty() or inter.key() in by_set:
                    continue
                new_key = tuple(sorted(set(key) | {eid}))
                by_set[inter.key()] = new_key
                found[new_key] = inter
                changed = True
                if len(found) > INTERSECTION_CAP:
                    raise TooManyIntersections(len(found))
    return found


def g0_contains(
    pres: UltragraphPresentation, a: VertexSet
) -> tuple[bool, GeneralizedVertex | None]:
    """Decide A ∈ 𝒢⁰, with a witness decomposition on success."""
    if a.is_empty():
        return False, None
    covered = VertexSet.empty()
    used: list[tuple[str, ...]] = []
    for key, inter in _range_intersections(pres).items():
        if inter.subset_of(a):
            covered = covered.union(inter)
            used.append(key)
    rest = a.difference(covered)
    if not rest.is_finite():
        return False, None
    witness = GeneralizedVertex(a, tuple(rest.vertices()), tuple(sorted(used)))
    return True, witness


def g0_closure_finite(pres: UltragraphPresentation) -> set:
    """Full closure of singletons and ranges under finite unions and
    nonempty intersections, for finite vertex sets.  Brute-force oracle."""
    if any(c is None for c in pres.vertex_families.values()):
        raise NotFinite("G0 is infinite")
    vertices = pres.all_vertices() if pres.is_finite else [
        VertexRef(fam, i)
        for fam, card in pres.vertex_families.items()
        for i in range(card)
    ]
    sets: set[frozenset[VertexRef]] = {frozenset([v]) for v in vertices}
    for e in pres.edges.values():
        sets.add(frozenset(e.range.vertices()))
    for fam in pres.edge_families.values():
        # finite G0 forces constant templates; ranges repeat from n0 on
        sets.add(frozenset(fam.member_range(fam.n0).vertices()))
    changed = True
    while changed:
        changed = False
        current = list(sets)
        for i, s in enumerate(current):
            for t in current[i + 1 :]:
                for new in (s | t, s & t):
                    if new and new not in sets:
                        sets.add(new)
                        changed = True
    return sets


def is_unital(pres: UltragraphPresentation) -> bool:
    """The algebra is unital iff the whole vertex set is a generalized vertex."""
    ok, _ = g0_contains(pres, pres.g0_universe())
    return ok
