"""Boundary points as eventually periodic rays, and the wall-counting
products between them.

A ray is a pair of words (prefix, period) naming the limit of the geodesic
words prefix·period^K read from the identity, together with a base vertex o.
All products are computed along the geodesic representative from o, obtained
by normalizing o⁻¹·prefix·period^J for J large enough that the first `depth`
letters stabilize.

Finite truncation cannot see the whole ray, so every product carries a
certification flag. The tail bound is combinatorial: if a geodesic has
crossed j pairwise strongly separated walls, any wall it crosses later is
separated from the base by at least j-1 of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence

from .raag import (
    DefiningGraph,
    GroupElement,
    LetterSeq,
    Word,
    distance,
    normal_form,
    parse_word,
)
from .walls import (
    Wall,
    strongly_separated,
    crossing_count,
    wall_distance,
    wall_of_edge,
    walls_separating_point_from_wall,
    WallsCross,
    crosses,
)

DEFAULT_DEPTH = 40


class InvalidRay(ValueError):
    """Ray fails geodesy or its representative does not stabilize."""


class UncertifiedDepth(ValueError):
    """The truncation depth cannot settle the query either way."""


class ChainExhausted(ValueError):
    """The detected separated chain ends before a suitable wall."""


class MismatchedBase(ValueError):
    """Products require all rays anchored at the same base vertex."""


@dataclass(frozen=True)
class BoundaryRay:
    """Eventually periodic ray: the boundary point of prefix·period^∞,
    anchored at base for product computations."""

    base: GroupElement
    prefix: Word
    period: Word

    def __post_init__(self) -> None:
        if len(self.period) == 0:
            raise InvalidRay("period must be a nonempty word")
        if self.prefix.graph is not self.base.graph and self.prefix.graph != self.base.graph:
            raise InvalidRay("prefix and base use different defining graphs")
        if self.period.graph is not self.base.graph and self.period.graph != self.base.graph:
            raise InvalidRay("period and base use different defining graphs")

    @property
    def graph(self) -> DefiningGraph:
        return self.base.graph

    @classmethod
    def from_text(
        cls,
        graph: DefiningGraph,
        text: str,
        base: Optional[GroupElement] = None,
    ) -> "BoundaryRay":
        """Parse "PREFIX|PERIOD"; the prefix may be empty."""
        if "|" not in text:
            raise InvalidRay(f"ray text needs a | separator: {text!r}")
        left, right = text.split("|", 1)
        if base is None:
            base = GroupElement.identity(graph)
        return cls(base, parse_word(left, graph), parse_word(right, graph))

    def text(self) -> str:
        return f"{self.prefix.text()}|{self.period.text()}"

    def point_element(self, copies: int) -> GroupElement:
        """The group element prefix·period^copies, read from the identity."""
        return normal_form(self.prefix) * normal_form(self.period) ** copies

    def same_point_structurally(self, other: "BoundaryRay") -> bool:
        return (
            self.base == other.base
            and normal_form(self.prefix) == normal_form(other.prefix)
            and normal_form(self.period) == normal_form(other.period)
        )

    def __hash__(self) -> int:
        return hash((self.base, self.prefix.letters, self.period.letters))


@dataclass(frozen=True)
class ProductValue:
    """A wall-counting product at finite truncation.

    value is a nonnegative integer or math.inf; certified means the value
    cannot change at any larger depth; depth_used echoes the truncation.
    """

    value: object
    certified: bool
    depth_used: int


@dataclass(frozen=True)
class SeparatedChain:
    """Walls crossed by a ray, consecutive pairs certified n-separated and
    crossing points less than r apart."""

    walls: tuple[Wall, ...]
    gaps: tuple[int, ...]
    n: int
    r: int

    def __len__(self) -> int:
        return len(self.walls)


def validate_ray(ray: BoundaryRay, depth: int) -> bool:
    """True iff prefix·period^K stays geodesic up to the depth and the last
    two period copies append without any cancellation, merge or reorder."""
    if depth < 1:
        raise ValueError("depth must be positive")
    p = normal_form(ray.prefix)
    if p.length != len(ray.prefix):
        return False
    per = normal_form(ray.period)
    if per.is_identity:
        return False
    if per.length != len(ray.period):
        return False
    copies = max(2, -(-depth // per.length) + 2)
    acc = p
    clean_tail = 0
    for _ in range(copies):
        nxt = acc * per
        if nxt.length != acc.length + per.length:
            return False
        # clean: the normal form extends letter by letter, no reorder/merge
        # across the seam beyond plain run concatenation
        extended = LetterSeq(acc.syllables + per.syllables)
        if LetterSeq(nxt.syllables) == extended:
            clean_tail += 1
        else:
            clean_tail = 0
        acc = nxt
    return clean_tail >= 2


def _literal_letters(ray: BoundaryRay, depth: int):
    """Letters of prefix·period^K exactly as written, provided the ray is
    based at the identity and the written word is itself geodesic past
    `depth`; None otherwise.

    Keeping the written order matters for chain detection: shortlex
    normalization may pull a commuting letter across a period seam, moving
    the wall it crosses away from its geometric position along the ray and
    stretching the index gaps a separated chain has to fit under."""
    if not ray.base.is_identity:
        return None
    step = len(ray.period)
    copies = -(-(depth + 2 * step) // step)
    runs = list(ray.prefix.letters.runs) + list(ray.period.letters.runs) * copies
    word = Word(ray.graph, LetterSeq(runs))
    if normal_form(word).length != len(word):
        return None
    return list(word[:depth])


def _representative_letters(ray: BoundaryRay, depth: int):
    """First `depth` letters of the geodesic representative of the ray's
    boundary point based at ray.base, certified stable under lengthening.

    Prefers the literal written word when it is already geodesic from the
    identity; falls back to the shortlex representative otherwise."""
    per = normal_form(ray.period)
    if per.is_identity:
        raise InvalidRay("period reduces to the identity")
    literal = _literal_letters(ray, depth)
    if literal is not None:
        return literal
    inv_base = ray.base.inverse()
    step = max(1, per.length)
    copies = max(2, -(-(depth + 2 * step + ray.base.length) // step))
    for _ in range(8):
        cur = (inv_base * ray.point_element(copies)).normal
        nxt = (inv_base * ray.point_element(copies + 1)).normal
        if len(cur) >= depth and cur[:depth] == nxt[:depth]:
            return list(cur[:depth])
        copies *= 2
    raise InvalidRay("representative does not stabilize at this depth")


@lru_cache(maxsize=4096)
def _ray_walls_cached(ray: BoundaryRay, depth: int) -> tuple[Wall, ...]:
    letters = _representative_letters(ray, depth)
    out = []
    v = ray.base
    for letter in letters:
        out.append(wall_of_edge(v, letter))
        v = v.append_letter(letter.gen, letter.sign)
    walls = tuple(out)
    assert len(set(walls)) == len(walls), "geodesic crossed a wall twice"
    return walls


def ray_walls(ray: BoundaryRay, depth: int) -> tuple[Wall, ...]:
    """Walls dual to the first `depth` edges of the representative from
    ray.base, in crossing order."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth == 0:
        return ()
    return _ray_walls_cached(ray, depth)


def _chain_indices(walls: Sequence[Wall], n: int, r: Optional[int]) -> list[int]:
    """Greedy longest chain of wall indices with consecutive pairs certified
    n-separated and index gaps < r (r None = unbounded). Crossing points of
    walls i and j on a geodesic are |i-j| apart."""
    best: list[int] = []
    for start in range(len(walls)):
        chain = [start]
        for t in range(start + 1, len(walls)):
            if r is not None and t - chain[-1] >= r:
                continue
            a, b = walls[chain[-1]], walls[t]
            if n == 0:
                ok = strongly_separated(a, b)
            else:
                try:
                    count, certified = crossing_count(a, b)
                except WallsCross:
                    continue
                ok = certified and count <= n
            if ok:
                chain.append(t)
        if len(chain) > len(best):
            best = chain
    return best


@lru_cache(maxsize=4096)
def _tail_bound(walls: tuple[Wall, ...]) -> int:
    """Any wall crossed after these has at least this many walls between it
    and the base: pairwise strongly separated chain walls can share no
    crossing wall, so a later wall crosses at most one of them."""
    chain = _chain_indices(walls, 0, None)
    return max(0, len(chain) - 1)


def _check_same_base(x: BoundaryRay, e: BoundaryRay) -> None:
    if x.base != e.base:
        raise MismatchedBase("rays are anchored at different base vertices")
    if x.graph is not e.graph and x.graph != e.graph:
        raise MismatchedBase("rays live over different defining graphs")


def bracket_product(xi: BoundaryRay, eta: BoundaryRay, depth: int) -> ProductValue:
    """[ξ|η]_o: the least number of walls between o and a wall separating
    the two rays; +inf when no wall separates them.

    Certified when the minimum is strictly below both rays' tail bounds, so
    no unseen wall can beat it and the minimizing wall cannot be secretly
    common. The L(t) = t - #{earlier walls crossing wall t} bound prunes
    exact wall-distance computations.
    """
    _check_same_base(xi, eta)
    wx = ray_walls(xi, depth)
    we = ray_walls(eta, depth)
    sx, se = set(wx), set(we)
    o = xi.base
    sym: list[tuple[int, Wall]] = []
    for t, w in enumerate(wx):
        if w not in se:
            sym.append((t, w))
    for t, w in enumerate(we):
        if w not in sx:
            sym.append((t, w))
    if not sym:
        return ProductValue(math.inf, xi.same_point_structurally(eta), depth)

    best = None
    for t, w in sym:
        owner = wx if w in sx else we
        lower = sum(1 for s in range(t) if not crosses(owner[s], w))
        if best is not None and lower >= best:
            continue
        d = wall_distance(o, w)
        if best is None or d < best:
            best = d
    tail = min(_tail_bound(wx), _tail_bound(we))
    return ProductValue(best, best < tail, depth)


def gromov_product(xi: BoundaryRay, eta: BoundaryRay, depth: int) -> ProductValue:
    """(ξ|η)_o: the number of walls both rays cross.

    Certified via barrier pairs: on each ray, after its last common wall, a
    consecutive strongly separated pair of walls the other ray does not
    cross. A common wall beyond depth would have to cross or be separated by
    each barrier, forcing the other ray through a wall it provably avoids.
    """
    _check_same_base(xi, eta)
    wx = ray_walls(xi, depth)
    we = ray_walls(eta, depth)
    sx, se = set(wx), set(we)
    common = sx & se
    value = len(common)

    def barrier_after(own: Sequence[Wall], other_set) -> bool:
        last = -1
        for t, w in enumerate(own):
            if w in common:
                last = t
        prev = None
        for t in range(last + 1, len(own)):
            if own[t] in other_set:
                return False  # unexpected late common wall; stay uncertified
            if prev is not None and strongly_separated(own[prev], own[t]):
                return True
            prev = t
        return False

    certified = barrier_after(wx, se) and barrier_after(we, sx)
    return ProductValue(value, certified, depth)


def metric_d(xi: BoundaryRay, eta: BoundaryRay, depth: int) -> ProductValue:
    """The metric d_o(ξ,η) = exp(-[ξ|η]_o), kept exact as the integer
    exponent; +inf exponent means distance 0."""
    return bracket_product(xi, eta, depth)


class InfiniteTerm(ValueError):
    """A cross ratio summand is +inf because two arguments coincide."""


def _finite(p: ProductValue) -> int:
    if p.value == math.inf:
        raise InfiniteTerm("cross ratio undefined: a summand is infinite")
    return p.value


def cross_ratio_cr(
    w: BoundaryRay, x: BoundaryRay, y: BoundaryRay, z: BoundaryRay, depth: int
) -> tuple[int, bool]:
    """cr_o(w,x,y,z) = [w|x] + [y|z] - [w|y] - [x|z], with joint flag."""
    terms = (
        bracket_product(w, x, depth),
        bracket_product(y, z, depth),
        bracket_product(w, y, depth),
        bracket_product(x, z, depth),
    )
    value = _finite(terms[0]) + _finite(terms[1]) - _finite(terms[2]) - _finite(terms[3])
    return value, all(t.certified for t in terms)


def cross_ratio_bfm(
    w: BoundaryRay, x: BoundaryRay, y: BoundaryRay, z: BoundaryRay, depth: int
) -> tuple[int, bool]:
    """[w,x,y,z] = (w|x) + (y|z) - (w|y) - (x|z), with joint flag."""
    terms = (
        gromov_product(w, x, depth),
        gromov_product(y, z, depth),
        gromov_product(w, y, depth),
        gromov_product(x, z, depth),
    )
    value = _finite(terms[0]) + _finite(terms[1]) - _finite(terms[2]) - _finite(terms[3])
    return value, all(t.certified for t in terms)


def hyp_member(xi: BoundaryRay, walls: Iterable[Wall], depth: int) -> bool:
    """Whether the ray crosses every listed wall.

    A wall absent from the truncation is certifiably uncrossed only when its
    distance from the base is below the ray's tail bound; otherwise the
    depth cannot decide and UncertifiedDepth is raised.
    """
    ordered = ray_walls(xi, depth)
    wset = set(ordered)
    missing = [w for w in walls if w not in wset]
    if not missing:
        return True
    tail = _tail_bound(ordered)
    o = xi.base
    for w in missing:
        if wall_distance(o, w) >= tail:
            raise UncertifiedDepth(
                "wall not crossed within depth and tail bound too weak"
            )
    return False


def find_separated_chain(
    xi: BoundaryRay, n: int, r: int, depth: int
) -> SeparatedChain:
    """Greedy longest chain among the ray's walls with consecutive pairs
    certified n-separated and crossing points less than r apart. A chain
    needs at least two walls; otherwise the empty chain is returned."""
    walls = ray_walls(xi, depth)
    idx = _chain_indices(walls, n, r)
    if len(idx) < 2:
        return SeparatedChain((), (), n, r)
    gaps = tuple(idx[k + 1] - idx[k] for k in range(len(idx) - 1))
    return SeparatedChain(tuple(walls[k] for k in idx), gaps, n, r)


def refine_to_single_wall(
    xi: BoundaryRay,
    walls: Iterable[Wall],
    chain: SeparatedChain,
    depth: int = DEFAULT_DEPTH,
) -> Wall:
    """The first chain wall crossed after all input walls such that every
    input wall separates the base from it; then any ray through it crosses
    all the inputs."""
    ray = ray_walls(xi, depth)
    pos = {w: t for t, w in enumerate(ray)}
    inputs = list(walls)
    for w in inputs:
        if w not in pos:
            raise ValueError("input wall is not crossed by the ray at this depth")
    after = max((pos[w] for w in inputs), default=-1)
    o = xi.base
    for k in chain.walls:
        if pos.get(k, -1) <= after:
            continue
        sep = set(walls_separating_point_from_wall(o, k))
        if all(w in sep for w in inputs):
            return k
    raise ChainExhausted("no chain wall past the inputs separates as required")


def fellow_travel_radius(
    alpha: Sequence,
    beta: Sequence,
    J: int,
    o,
    dist: Optional[Callable] = None,
) -> int:
    """Largest R such that some point of alpha outside the R-ball around o
    is within distance J of beta; 0 when no point of alpha is that close."""
    if dist is None:
        dist = distance
    best = None
    for a in alpha:
        if min(dist(a, b) for b in beta) <= J:
            d = dist(o, a)
            if best is None or d > best:
                best = d
    return 0 if best is None else best
