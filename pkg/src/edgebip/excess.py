"""Low-excess extensions of one side of a partial separation.

An extension of the A side is any superset of it avoiding the B side; its
excess is the growth of the cut.  Extensions of excess at most two carry all
the structure the branching engine exploits, and the inclusion-maximal
compact ones can be enumerated by a queue of bounded min-cut computations.
The same machinery serves both sides through a role swap, never through
mirrored code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .flow import EXCEEDED, min_cut
from .multigraph import MultiGraph
from .relaxation import InstanceError, TermSepInstance


@dataclass
class SideView:
    """One side of an instance with accessors that hide which side it is."""
    inst: TermSepInstance
    side: str  # "A" or "B"

    @property
    def base(self) -> set[int]:
        return self.inst.a0 if self.side == "A" else self.inst.b0

    @property
    def other(self) -> set[int]:
        return self.inst.b0 if self.side == "A" else self.inst.a0

    def d(self, xs: Iterable[int]) -> int:
        return self.inst.g.cut_size(xs)

    def excess(self, xs: Iterable[int]) -> int:
        return self.d(xs) - self.d(self.base)

    def check_extension(self, xs: set[int]) -> None:
        if not xs >= self.base:
            raise InstanceError("set does not extend the side's base")
        if xs & self.other:
            raise InstanceError("extension touches the opposite side")


def side_view(inst: TermSepInstance, side: str) -> SideView:
    if side not in ("A", "B"):
        raise InstanceError(f"side must be 'A' or 'B', got {side!r}")
    return SideView(inst, side)


def excess(inst: TermSepInstance, xs: Iterable[int], side: str) -> int:
    """Cut growth of an extension of the chosen side's base set."""
    view = side_view(inst, side)
    xs = set(xs)
    view.check_extension(xs)
    return view.excess(xs)


@dataclass
class CompactExtension:
    vertices: frozenset[int]
    excess: int


def enumerate_compact_extensions(inst: TermSepInstance, r: int, side: str
                                 ) -> list[CompactExtension]:
    """Inclusion-wise maximal compact terminal-free extensions of excess <= r.

    Queue process: starting from the base set, repeatedly grow through a
    neighbor v by taking the maximal min-cut side separating base+v from
    the opposite side and every terminal outside the base; sets for which no
    neighbor admits a cut within the excess bound are maximal and reported.
    The base set itself is never reported.
    """
    view = side_view(inst, side)
    g = inst.g
    base = frozenset(view.base)
    sinks = set(view.other) | {t for t in inst.terminals() if t not in base}
    if not sinks:
        return []
    bound = view.d(base) + r
    seen: set[frozenset[int]] = {base}
    queue: list[frozenset[int]] = [base]
    out: list[CompactExtension] = []
    while queue:
        current = queue.pop()
        grew = False
        for v in _neighborhood(g, current):
            if v in sinks or v in current:
                continue
            value, net = min_cut(g, current | {v}, sinks, r_max=bound)
            if value is EXCEEDED or value > bound:
                continue
            grown = frozenset(net.source_side("max"))
            grew = True
            if grown not in seen:
                seen.add(grown)
                queue.append(grown)
        if not grew and current != base:
            out.append(CompactExtension(current, view.d(current) - view.d(base)))
    out.sort(key=lambda ce: sorted(ce.vertices))
    return [ce for ce in out if _is_compact(g, ce.vertices, base)]


def _neighborhood(g: MultiGraph, xs: frozenset[int]) -> list[int]:
    nb: set[int] = set()
    for v in xs:
        nb.update(g.neighbors(v))
    return sorted(nb - xs)


def _is_compact(g: MultiGraph, xs: frozenset[int], base: frozenset[int]) -> bool:
    extra = set(xs) - base
    if not extra:
        return False
    if base and g.edges_between(extra, base) == 0:
        return False
    seen = {min(extra)}
    queue = [min(extra)]
    while queue:
        v = queue.pop()
        for u in g.neighbors(v):
            if u in extra and u not in seen:
                seen.add(u)
                queue.append(u)
    return seen == extra


@dataclass
class ExcessDecomposition:
    """Structure of an excess-2 extension once every reduction is spent:
    at most one heavy vertex d, plus pairwise nonadjacent vertices c_i each
    forming an excess-1 extension on its own, with counted edge patterns."""
    d_vertex: Optional[int]
    c_vertices: list[int]
    p: list[int]      # multiplicity of d--c_i edges (0s when d is absent)
    x: list[int]      # c_i has x_i+1 edges leaving the extension
    side: str
    sigma: Optional[int] = None  # boundary deletions forced by flipping d


def decompose_excess2(inst: TermSepInstance, vertices: Iterable[int], side: str
                      ) -> ExcessDecomposition:
    """Split an excess-2 extension minus its base into its heavy vertex and
    its excess-1 singletons, recovering all edge counts.

    Callers must have exhausted the reduction rules; the structural
    guarantees (single heavy vertex, nonadjacent singletons, edge balance)
    are asserted and a violation signals a bug upstream.
    """
    view = side_view(inst, side)
    xs = set(vertices)
    view.check_extension(xs)
    if view.excess(xs) != 2:
        raise InstanceError("decomposition requires an extension of excess exactly 2")
    base = view.base
    extra = sorted(xs - base)
    if not extra:
        raise InstanceError("extension equals its base")
    g = inst.g
    cs: list[int] = []
    ds: list[int] = []
    for v in extra:
        if view.excess(base | {v}) == 1:
            cs.append(v)
        else:
            ds.append(v)
    if len(ds) > 1:
        raise InstanceError("multiple heavy vertices: excess-2 reduction not exhausted")
    d_vertex = ds[0] if ds else None
    if d_vertex is None and len(cs) != 2:
        raise InstanceError("an excess-2 set without a heavy vertex splits into two singletons")
    for i, ci in enumerate(cs):
        for cj in cs[i + 1:]:
            if g.multiplicity(ci, cj) != 0:
                raise InstanceError("excess-1 singletons must be pairwise nonadjacent")
    p, x = [], []
    outside = g.vertex_set() - xs - view.other
    for ci in cs:
        pi = g.multiplicity(ci, d_vertex) if d_vertex is not None else 0
        leaving = g.edges_between({ci}, outside)
        if leaving < 1:
            raise InstanceError("singleton with no edge leaving the extension")
        xi = leaving - 1
        if g.edges_between({ci}, base) != pi + xi:
            raise InstanceError("singleton edge counts out of balance")
        if d_vertex is not None and pi < 1:
            raise InstanceError("singleton not adjacent to the heavy vertex")
        p.append(pi)
        x.append(xi)
    sigma = None
    if d_vertex is not None:
        sigma = g.edges_between({d_vertex}, base) + sum(p)
    return ExcessDecomposition(d_vertex, cs, p, x, side, sigma)


def sigma_b_side(inst: TermSepInstance, dec: ExcessDecomposition
                 ) -> tuple[int, Optional[int]]:
    """Boundary deletions forced inside the extension when its heavy vertex
    lands on the opposite side, with the shape class when only one fires:
    1 = lone degree-4 heavy vertex, 2 = heavy vertex plus one balanced
    singleton."""
    if dec.d_vertex is None:
        raise InstanceError("sigma requires the heavy vertex")
    sigma = dec.sigma
    assert sigma is not None and sigma >= 1
    if sigma != 1:
        return sigma, None
    g = inst.g
    if not dec.c_vertices:
        case = 1 if g.degree(dec.d_vertex) == 4 else None
    elif len(dec.c_vertices) == 1 and dec.p[0] == 1 and g.degree(dec.d_vertex) == 3:
        case = 2
    else:
        case = None
    return sigma, case
