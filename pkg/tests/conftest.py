"""Shared fixtures and random-instance generators."""

from __future__ import annotations

import random
from pathlib import Path

from ultragrade.model import (
    Edge,
    EdgeInst,
    UltragraphPresentation,
    VertexRef,
    VertexSet,
    parse_presentation,
)

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

FINITE_CORPUS = [
    "single_loop.ug",
    "one_edge.ug",
    "ef.ug",
    "two_cycle.ug",
    "two_range.ug",
]

INFINITE_CORPUS = ["ex2.ug", "infinite_range.ug"]


def load(name: str) -> UltragraphPresentation:
    return parse_presentation((CORPUS / name).read_text())


def random_presentation(
    rng: random.Random,
    max_vertices: int = 6,
    max_edges: int = 8,
    sinkless: bool = False,
) -> UltragraphPresentation:
    """A random finite ultragraph over a single vertex family.

    With sinkless=True every vertex gets at least one outgoing edge (so
    max_edges must be >= max_vertices for the count to stay honest)."""
    nv = rng.randint(1, max_vertices)
    if sinkless:
        extra = rng.randint(0, max(0, max_edges - nv))
        sources = list(range(nv)) + [rng.randrange(nv) for _ in range(extra)]
    else:
        sources = [rng.randrange(nv) for _ in range(rng.randint(1, max_edges))]
    pres = UltragraphPresentation("rnd", {"v": nv})
    for i, src in enumerate(sources[:max_edges]):
        members = rng.sample(range(nv), rng.randint(1, min(3, nv)))
        pres.edges[f"e{i}"] = Edge(
            f"e{i}",
            VertexRef("v", src),
            VertexSet.of(*(VertexRef("v", j) for j in members)),
        )
    pres.validate()
    return pres


def random_path(
    rng: random.Random, pres: UltragraphPresentation, max_len: int = 3
) -> tuple[EdgeInst, ...]:
    """A random composable path (possibly empty)."""
    insts = pres.all_edge_insts()
    if not insts:
        return ()
    path: list[EdgeInst] = []
    e = rng.choice(insts)
    for _ in range(rng.randint(0, max_len)):
        if path and not pres.edge_range(path[-1]).member(pres.edge_source(e)):
            break
        path.append(e)
        nxt = [f for f in insts if pres.edge_range(e).member(pres.edge_source(f))]
        if not nxt:
            break
        e = rng.choice(nxt)
    return tuple(path)


def random_vertex_set(rng: random.Random, pres: UltragraphPresentation) -> VertexSet:
    verts = pres.all_vertices()
    picked = [v for v in verts if rng.random() < 0.5]
    return VertexSet.of(*picked) if picked else VertexSet.of(rng.choice(verts))


def random_element(rng: random.Random, pres: UltragraphPresentation, terms: int = 3):
    """A random algebra element: a small sum of random monomials."""
    from fractions import Fraction

    from ultragrade.algebra import AlgebraElement

    out = AlgebraElement.zero(pres)
    for _ in range(rng.randint(1, terms)):
        alpha = random_path(rng, pres)
        beta = random_path(rng, pres)
        mid = random_vertex_set(rng, pres)
        coeff = rng.choice([1, -1, 2, 3, Fraction(1, 2), Fraction(-2, 3)])
        out = out + AlgebraElement.monomial(pres, alpha, mid, beta, coeff)
    return out
