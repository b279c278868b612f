"""Walls (hyperplanes) of the cube complex of a RAAG, named canonically so
equality is O(1), plus separation, transversality, strong separation, gates,
and ball enumeration over the Cayley 1-skeleton.

A wall is determined by an edge: the edge from p to p·g is dual to the wall
[p·⟨lk(g)⟩, g], and two edges are dual to the same wall exactly when their
left cosets of ⟨lk(g)⟩ agree. The canonical name stores the minimal coset
representative, obtained by stripping the maximal ⟨lk(g)⟩ suffix.

Everything here reduces to coset arithmetic on normal forms:

  - membership of t in ⟨S1⟩·⟨S2⟩ holds iff left-stripping S1 then
    right-stripping S2 empties t (one round suffices);
  - the gate of x on r·⟨S⟩ is r times the stripped-off prefix of nf(r^-1 x),
    and the strip remainder length is the distance to the coset.

Transversality of two walls is coset intersection of their carriers, so it
is decided exactly, with no search. The number of walls transverse to two
disjoint walls is likewise decided exactly: it is zero precisely when no
generator of lk(g1) ∩ lk(g2) commutes with the whole separator between the
carriers, and infinite otherwise, which is why crossing_count only ever
certifies the zero answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from .raag import (
    DefiningGraph,
    GroupElement,
    Letter,
    Word,
    WordError,
    _strip_left,
    _strip_right,
)

# a Vertex of the complex is exactly a group element
Vertex = GroupElement

DEFAULT_BALL_CAP = 12
DEFAULT_SLACK = 4


class WallsCross(ValueError):
    """crossing_count was asked about a transverse pair."""


class InvalidPair(ValueError):
    """Operation needs two distinct walls."""


class BallCapExceeded(ValueError):
    """Requested radius above the configured cap."""


class NoExtension(ValueError):
    """No admissible extension edge exists (or is unique when required)."""


class InvalidPath(ValueError):
    """Input path violates a documented precondition."""


@dataclass(frozen=True)
class Wall:
    """Canonical wall name: minimal representative of the carrier coset.

    The constructor canonicalizes, so Wall(p, g) == Wall(q, g) iff the edges
    at p and q in direction g are dual to the same wall.
    """

    base: GroupElement
    gen: int

    def __post_init__(self) -> None:
        graph = self.base.graph
        if not 0 <= self.gen < len(graph.generators):
            raise WordError(f"generator index out of range: {self.gen}")
        kept, removed = _strip_right(
            graph, self.base.syllables, graph.adj_mask[self.gen]
        )
        if removed:
            object.__setattr__(self, "base", GroupElement(graph, kept))

    @property
    def graph(self) -> DefiningGraph:
        return self.base.graph

    @cached_property
    def plus_rep(self) -> GroupElement:
        # representative of the + side coset of the carrier
        return self.base.append_letter(self.gen, 1)

    def carrier_reps(self) -> tuple[GroupElement, GroupElement]:
        return (self.base, self.plus_rep)

    def gen_name(self) -> str:
        return self.graph.generators[self.gen]

    def text(self) -> str:
        return f"{self.base.text() or '1'}@{self.gen_name()}"

    def __repr__(self) -> str:
        return f"Wall({self.text()})"


@dataclass(frozen=True)
class Halfspace:
    wall: Wall
    sign: int

    def __post_init__(self) -> None:
        if self.sign not in (-1, 1):
            raise WordError(f"halfspace sign must be +-1, got {self.sign}")

    def __repr__(self) -> str:
        return f"Halfspace({self.wall.text()}, {'+' if self.sign > 0 else '-'})"


@dataclass(frozen=True, eq=False)
class Ultrafilter:
    """A finite restriction of a vertex ultrafilter: wall -> chosen side."""

    assignments: dict

    def side_of(self, wall: Wall) -> int:
        return self.assignments[wall]

    def halfspaces(self) -> tuple[Halfspace, ...]:
        return tuple(Halfspace(w, s) for w, s in self.assignments.items())

    def __len__(self) -> int:
        return len(self.assignments)


# --- coset arithmetic --------------------------------------------------------


def coset_gate_and_distance(
    rep: GroupElement, gens_mask: int, x: GroupElement
) -> tuple[GroupElement, int]:
    """Nearest point of rep·⟨gens⟩ to x and the distance to it.

    The gate is rep times the maximal prefix of nf(rep^-1 x) lying in the
    subgroup; the remainder length is the distance (gate property of convex
    parabolic cosets).
    """
    t = rep.inverse() * x
    removed, kept = _strip_left(rep.graph, t.syllables, gens_mask)
    gate_el = rep * GroupElement(rep.graph, removed)
    return gate_el, sum(abs(e) for _, e in kept)


def wall_gate_and_distance(x: GroupElement, h: Wall) -> tuple[GroupElement, int, int]:
    """(gate vertex, distance, side) of x relative to the carrier of h.

    side is which carrier coset the gate lies in: -1 for the base side,
    +1 for the base·gen side. The two coset distances always differ by
    exactly one, so the nearer coset is also the side of x.
    """
    mask = h.graph.adj_mask[h.gen]
    gate_minus, d_minus = coset_gate_and_distance(h.base, mask, x)
    gate_plus, d_plus = coset_gate_and_distance(h.plus_rep, mask, x)
    assert abs(d_minus - d_plus) == 1, "wall does not separate its sides"
    if d_minus < d_plus:
        return gate_minus, d_minus, -1
    return gate_plus, d_plus, 1


# --- operations --------------------------------------------------------------


def wall_of_edge(v: Vertex, letter: Letter) -> Wall:
    """The wall dual to the edge from v in the given letter direction."""
    g, s = letter
    p = v if s > 0 else v.append_letter(g, -1)
    return Wall(p, g)


def walls_between(x: Vertex, y: Vertex) -> tuple[Wall, ...]:
    """Walls separating x from y, in crossing order along the normal-form
    geodesic from x to y. Geodesics cross each separating wall once, so the
    result has distance(x,y) entries and no duplicates."""
    w = x.inverse() * y
    out = []
    p = x
    for g, e in w.syllables:
        s = 1 if e > 0 else -1
        for _ in range(abs(e)):
            out.append(wall_of_edge(p, Letter(g, s)))
            p = p.append_letter(g, s)
    return tuple(out)


def side(h: Wall, x: Vertex) -> int:
    """-1 on the base side of h, +1 on the base·gen side."""
    _, _, s = wall_gate_and_distance(x, h)
    return s


def crosses(h1: Wall, h2: Wall) -> bool:
    """Transversality: the generators commute and the carrier cosets meet.

    Coset intersection b1⟨lk g1⟩ ∩ b2⟨lk g2⟩ is nonempty iff nf(b1^-1 b2)
    lies in ⟨lk g1⟩·⟨lk g2⟩, decided by the double strip.
    """
    if h1 == h2:
        return False
    graph = h1.graph
    if not graph.adjacent(h1.gen, h2.gen):
        return False
    t = h1.base.inverse() * h2.base
    _, kept = _strip_left(graph, t.syllables, graph.adj_mask[h1.gen])
    kept, _ = _strip_right(graph, kept, graph.adj_mask[h2.gen])
    return not kept


def _separator_support(h1: Wall, h2: Wall) -> frozenset[int]:
    """Generators of the stripped middle of nf(b1^-1 b2): what remains
    between the two carriers after pulling off everything either carrier
    coset can absorb."""
    graph = h1.graph
    t = h1.base.inverse() * h2.base
    _, kept = _strip_left(graph, t.syllables, graph.adj_mask[h1.gen])
    kept, _ = _strip_right(graph, kept, graph.adj_mask[h2.gen])
    return frozenset(g for g, _ in kept)


def common_transversal_directions(h1: Wall, h2: Wall) -> frozenset[int]:
    """Generators h such that some (equivalently, infinitely many) walls with
    generator h cross both h1 and h2.

    A wall crossing both needs its generator adjacent to both g1 and g2, and
    its carrier coset must meet both carriers; that forces the generator to
    commute with the whole separator between the carriers, and conversely
    any such generator yields an infinite transversal family (translate a
    witness wall along its own generator axis).
    """
    graph = h1.graph
    sep = _separator_support(h1, h2)
    out = set()
    for g in graph.link(h1.gen) & graph.link(h2.gen):
        if all(graph.adjacent(g, s) for s in sep):
            out.add(g)
    return frozenset(out)


def strongly_separated(h1: Wall, h2: Wall) -> bool:
    """No wall crosses both (0-separation). Exact, no search."""
    if crosses(h1, h2):
        return False
    return not common_transversal_directions(h1, h2)


def crossing_count(
    h1: Wall, h2: Wall, slack: int = DEFAULT_SLACK, cap: int = DEFAULT_BALL_CAP
) -> tuple[int, bool]:
    """How many walls cross both h1 and h2.

    The true count is zero or infinite: certified (0, True) when no
    common transversal direction exists. Otherwise the count is the finite
    number of transversals dual to edges near the gate pair (radius =
    carrier distance + slack), reported with certified=False because the
    full family is infinite.
    """
    if h1 == h2:
        raise InvalidPair("crossing_count needs two distinct walls")
    if crosses(h1, h2):
        raise WallsCross("walls are transverse; no separation to measure")
    if not common_transversal_directions(h1, h2):
        return 0, True

    graph = h1.graph
    mask1 = graph.adj_mask[h1.gen]
    mask2 = graph.adj_mask[h2.gen]
    best = None
    for r1 in h1.carrier_reps():
        for r2 in h2.carrier_reps():
            w = r1.inverse() * r2
            removed_u, kept = _strip_left(graph, w.syllables, mask1)
            t, _ = _strip_right(graph, kept, mask2)
            d = sum(abs(e) for _, e in t)
            if best is None or d < best[0]:
                gate_a = r1 * GroupElement(graph, removed_u)
                best = (d, gate_a, gate_a * GroupElement(graph, t))
    d, gate_a, gate_b = best
    radius = d + slack
    if radius > cap:
        raise BallCapExceeded(f"radius {radius} above cap {cap}")
    found = set()
    for center in (gate_a, gate_b):
        for v in ball(center, radius, cap=cap):
            for g in range(len(graph.generators)):
                w = Wall(v, g)
                if w in found or w == h1 or w == h2:
                    continue
                if crosses(w, h1) and crosses(w, h2):
                    found.add(w)
    return len(found), False


def gate(x: Vertex, h: Wall) -> Vertex:
    """The unique vertex of the carrier of h nearest to x."""
    gate_el, _, _ = wall_gate_and_distance(x, h)
    return gate_el


def wall_distance(o: Vertex, k: Wall) -> int:
    """d(o, carrier(k)): how many walls separate o from the whole carrier."""
    _, d, _ = wall_gate_and_distance(o, k)
    return d


def walls_separating_point_from_wall(o: Vertex, k: Wall) -> tuple[Wall, ...]:
    """Walls separating o from the entire carrier of k, in crossing order.

    These are the walls between o and its gate; the geodesic to the gate
    never runs parallel to k or crosses anything transverse to k, so the
    two filters below cannot fire, but they state the definition.
    """
    g = gate(o, k)
    out = tuple(
        h for h in walls_between(o, g) if h != k and not crosses(h, k)
    )
    assert len(out) == wall_distance(o, k), "gate geodesic crossed a stray wall"
    return out


def ball(o: Vertex, r: int, cap: int = DEFAULT_BALL_CAP) -> tuple[Vertex, ...]:
    """All vertices within distance r of o, sorted deterministically."""
    if r < 0:
        raise WordError("radius must be nonnegative")
    if r > cap:
        raise BallCapExceeded(f"radius {r} above cap {cap}")
    graph = o.graph
    moves = [(g, s) for g in range(len(graph.generators)) for s in (1, -1)]
    seen = {o}
    frontier = [o]
    for _ in range(r):
        nxt = []
        for v in frontier:
            for g, s in moves:
                child = v.append_letter(g, s)
                if child not in seen:
                    seen.add(child)
                    nxt.append(child)
        frontier = nxt
    return tuple(sorted(seen, key=lambda v: (v.length, v.syllables)))


def extend_path(
    p: Word,
    steps: int,
    flat: Optional[tuple] = None,
    origin: Optional[Vertex] = None,
) -> Word:
    """Extend a path so every new edge's wall is disjoint from all previous.

    Without flat: the path's walls must already be pairwise disjoint; each
    step picks deterministically among admissible edges, preferring
    generators that do not commute with (and differ from) the last letter,
    then least (generator, sign) with + before -.

    With flat = (g, h), a pair of adjacent generators: the path must lie in
    the flat through the origin, and each step takes the unique in-flat edge
    whose wall is disjoint from all previous ones.
    """
    if steps < 0:
        raise WordError("steps must be nonnegative")
    graph = p.graph
    if origin is None:
        origin = GroupElement.identity(graph)

    flat_gens: Optional[tuple[int, int]] = None
    if flat is not None:
        f1, f2 = flat
        f1 = graph.gen_index(f1) if isinstance(f1, str) else f1
        f2 = graph.gen_index(f2) if isinstance(f2, str) else f2
        if not graph.adjacent(f1, f2):
            raise InvalidPath("flat generators must commute")
        flat_gens = (f1, f2)
        for g, _ in p.letters.runs:
            if g not in flat_gens:
                raise InvalidPath("path leaves the requested flat")

    vertex = origin
    walls: list[Wall] = []
    for letter in p:
        walls.append(wall_of_edge(vertex, letter))
        vertex = vertex.append_letter(letter.gen, letter.sign)
    if flat_gens is None:
        for i in range(len(walls)):
            for j in range(i + 1, len(walls)):
                if walls[i] == walls[j] or crosses(walls[i], walls[j]):
                    raise InvalidPath("path walls must be pairwise disjoint")

    new_letters = list(p.letters.runs)
    last_gen = p.letters.runs[-1][0] if p.letters.runs else None

    def admissible(g: int, s: int) -> Optional[Wall]:
        w = wall_of_edge(vertex, Letter(g, s))
        for prev in walls:
            if w == prev or crosses(w, prev):
                return None
        return w

    for _ in range(steps):
        if flat_gens is not None:
            options = [
                (g, s) for g in flat_gens for s in (1, -1)
            ]
            hits = [(g, s, admissible(g, s)) for g, s in options]
            hits = [(g, s, w) for g, s, w in hits if w is not None]
            if not hits:
                raise NoExtension("no in-flat edge extends the path")
            if len(hits) > 1:
                raise NoExtension("in-flat extension is not unique")
            g, s, w = hits[0]
        else:
            first = [
                g
                for g in range(len(graph.generators))
                if last_gen is not None
                and g != last_gen
                and not graph.adjacent(g, last_gen)
            ]
            rest = [g for g in range(len(graph.generators)) if g not in first]
            choice = None
            for g in first + rest:
                for s in (1, -1):
                    w = admissible(g, s)
                    if w is not None:
                        choice = (g, s, w)
                        break
                if choice:
                    break
            if choice is None:
                raise NoExtension("no disjoint-wall extension exists")
            g, s, w = choice
        walls.append(w)
        vertex = vertex.append_letter(g, s)
        new_letters.append((g, s))
        last_gen = g
    return Word(graph, new_letters)


def sigma(y: Vertex, walls: Iterable[Wall]) -> Ultrafilter:
    """The restriction of the vertex ultrafilter of y to the given walls."""
    return Ultrafilter({w: side(w, y) for w in walls})
