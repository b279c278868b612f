"""Right-angled Artin groups: words, exact normal forms, group operations.

The canonical representative of a group element is its shortlex-minimal
geodesic word, with letters ordered by (generator index, sign) and +1 before
-1. Elements store that word as syllables (generator, nonzero exponent), so
a run of a billion equal letters costs one syllable and all arithmetic stays
exact on plain ints.

Two independent algorithms live here. The syllable engine (_append_syllable
and friends) is the production path. The piling invariant (_pile_key) plus
bfs_oracle_distance is a second, deliberately different decision procedure
used as the test oracle.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple


class WordError(ValueError):
    """Malformed word, generator, or defining-graph input."""


class UnknownGenerator(WordError):
    pass


class MalformedExponent(WordError):
    pass


class ZeroExponent(WordError):
    pass


class MixedGraphs(WordError):
    """Two values built over different defining graphs met in one operation."""


class NotInBall(ValueError):
    """BFS oracle ran out of radius before reaching the target."""


_NAME_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
_INT_RE = re.compile(r"[+-]?[0-9]+\Z")


@dataclass(frozen=True)
class DefiningGraph:
    """Finite simplicial graph; vertices are generator names, edges are
    commutation relations. Generator order is file order and is total."""

    generators: tuple[str, ...]
    edges: frozenset[tuple[int, int]]

    @classmethod
    def from_data(cls, data: dict) -> "DefiningGraph":
        if not isinstance(data, dict):
            raise WordError("defining graph must be a JSON object")
        gens = data.get("generators")
        if not isinstance(gens, list) or not gens:
            raise WordError("defining graph needs a nonempty generator list")
        seen: dict[str, int] = {}
        for name in gens:
            if not isinstance(name, str) or not _NAME_RE.match(name):
                raise WordError(f"bad generator name: {name!r}")
            if name in seen:
                raise WordError(f"duplicate generator name: {name!r}")
            seen[name] = len(seen)
        edges = set()
        for pair in data.get("edges", []):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise WordError(f"bad edge: {pair!r}")
            u, v = pair
            if u not in seen or v not in seen:
                raise UnknownGenerator(f"edge references unknown generator: {pair!r}")
            if u == v:
                raise WordError(f"self-loop on {u!r}")
            i, j = sorted((seen[u], seen[v]))
            edges.add((i, j))
        return cls(generators=tuple(gens), edges=frozenset(edges))

    @classmethod
    def from_json(cls, path: str) -> "DefiningGraph":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_data(json.load(fh))

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.generators)}

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in self.generators]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return tuple(frozenset(s) for s in adj)

    @cached_property
    def adj_mask(self) -> tuple[int, ...]:
        return tuple(sum(1 << j for j in link) for link in self.adjacency)

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self.generators)) - 1

    @cached_property
    def nonstar_mask(self) -> tuple[int, ...]:
        # generators that neither commute with g nor equal g
        return tuple(
            self.full_mask & ~self.adj_mask[g] & ~(1 << g)
            for g in range(len(self.generators))
        )

    def gen_index(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator: {name!r}") from None

    def adjacent(self, g: int, h: int) -> bool:
        return (self.adj_mask[g] >> h) & 1 == 1

    def link(self, g: int) -> frozenset[int]:
        return self.adjacency[g]

    def mask_of(self, gens: Iterable[int]) -> int:
        m = 0
        for g in gens:
            m |= 1 << g
        return m

    def __len__(self) -> int:
        return len(self.generators)


class Letter(NamedTuple):
    gen: int
    sign: int


class LetterSeq:
    """Immutable letter sequence stored as maximal runs (gen, exp).

    A run (g, -3) stands for the three letters g^-1 g^-1 g^-1. Length,
    equality, hashing, and slicing cost O(runs), so words with
    astronomically long runs stay cheap. Iterating yields one Letter per
    letter; do that only on short words.
    """

    __slots__ = ("runs", "_length")

    def __init__(self, runs: Iterable[tuple[int, int]] = ()):
        merged: list[tuple[int, int]] = []
        for g, e in runs:
            if e == 0:
                raise ZeroExponent("zero-length run")
            if merged and merged[-1][0] == g and (merged[-1][1] > 0) == (e > 0):
                merged[-1] = (g, merged[-1][1] + e)
            else:
                merged.append((g, e))
        self.runs: tuple[tuple[int, int], ...] = tuple(merged)
        self._length: int = sum(abs(e) for _, e in self.runs)

    def __len__(self) -> int:
        return self._length

    def __bool__(self) -> bool:
        return self._length > 0

    def __iter__(self) -> Iterator[Letter]:
        for g, e in self.runs:
            s = 1 if e > 0 else -1
            for _ in range(abs(e)):
                yield Letter(g, s)

    def __getitem__(self, index):
        if isinstance(index, slice):
            start, stop, step = index.indices(self._length)
            if step != 1:
                raise WordError("letter slices must have step 1")
            return self._slice(start, max(stop, start))
        i = index + self._length if index < 0 else index
        if not 0 <= i < self._length:
            raise IndexError(index)
        for g, e in self.runs:
            k = abs(e)
            if i < k:
                return Letter(g, 1 if e > 0 else -1)
            i -= k
        raise IndexError(index)

    def _slice(self, start: int, stop: int) -> "LetterSeq":
        out: list[tuple[int, int]] = []
        pos = 0
        for g, e in self.runs:
            k = abs(e)
            s = 1 if e > 0 else -1
            lo = max(start, pos)
            hi = min(stop, pos + k)
            if lo < hi:
                out.append((g, s * (hi - lo)))
            pos += k
            if pos >= stop:
                break
        return LetterSeq(out)

    def __eq__(self, other) -> bool:
        if isinstance(other, LetterSeq):
            return self.runs == other.runs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.runs)

    def __repr__(self) -> str:
        return f"LetterSeq({self.runs!r})"


@dataclass(frozen=True)
class Word:
    """A literal letter sequence; may be non-reduced.

    letters accepts a LetterSeq, or any iterable of (gen, exp) runs; plain
    Letter tuples are the special case of length-one runs.
    """

    graph: DefiningGraph
    letters: LetterSeq

    def __post_init__(self) -> None:
        if not isinstance(self.letters, LetterSeq):
            object.__setattr__(self, "letters", LetterSeq(self.letters))
        n = len(self.graph.generators)
        for g, _ in self.letters.runs:
            if not 0 <= g < n:
                raise WordError(f"letter out of range: generator index {g}")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, index):
        got = self.letters[index]
        if isinstance(got, LetterSeq):
            return Word(self.graph, got)
        return got

    def text(self) -> str:
        return _runs_to_text(self.graph, self.letters.runs)

    def __str__(self) -> str:
        return self.text()


def _runs_to_text(graph: DefiningGraph, runs) -> str:
    out: list[str] = []
    for g, e in runs:
        name = graph.generators[g]
        out.append(name if e == 1 else f"{name}^{e}")
    return " ".join(out)


def parse_word(text: str, graph: DefiningGraph) -> Word:
    """Literal reading of the word grammar; performs no reduction.

    Grammar: space-separated tokens, each NAME or NAME^INT with INT a
    nonzero signed decimal. The empty string is the identity.
    """
    runs: list[tuple[int, int]] = []
    for token in text.split():
        name, caret, exp_text = token.partition("^")
        if not _NAME_RE.match(name):
            raise UnknownGenerator(f"bad token {token!r}: not a generator name")
        g = graph.gen_index(name)
        if caret:
            if not _INT_RE.match(exp_text):
                raise MalformedExponent(f"bad exponent in token {token!r}")
            e = int(exp_text)
            if e == 0:
                raise ZeroExponent(f"zero exponent in token {token!r}")
        else:
            e = 1
        runs.append((g, e))
    return Word(graph, LetterSeq(runs))


# --- syllable engine ---------------------------------------------------------
#
# A canonical syllable list is the shortlex normal form with maximal runs of
# one letter merged into (gen, exp) pairs. _append_syllable keeps the list
# canonical under right multiplication by gen**exp:
#
#   scan right to left through syllables commuting with gen;
#   - same generator reached: merge exponents (cancel on zero, and if the
#     cancellation makes the two neighbours same-generator, merge them too;
#     their signs must then agree or the original word was not geodesic);
#   - non-commuting generator reached: the new syllable belongs after it,
#     slid left past any commuting syllables with larger letter key.


def _letter_key(gen: int, exp: int) -> tuple[int, int]:
    return (gen, 0 if exp > 0 else 1)


def _append_syllable(graph: DefiningGraph, out: list, gen: int, exp: int) -> None:
    adj = graph.adj_mask[gen]
    i = len(out) - 1
    while i >= 0:
        g2, e2 = out[i]
        if g2 == gen:
            merged = e2 + exp
            if merged == 0:
                del out[i]
                if 0 < i < len(out) and out[i - 1][0] == out[i][0]:
                    ga, ea = out[i - 1]
                    eb = out[i][1]
                    assert (ea > 0) == (eb > 0), "cancellation broke geodesy"
                    out[i - 1] = (ga, ea + eb)
                    del out[i]
            else:
                out[i] = (gen, merged)
            return
        if not (adj >> g2) & 1:
            break
        i -= 1
    key = _letter_key(gen, exp)
    j = i + 1
    while j < len(out) and _letter_key(*out[j]) < key:
        j += 1
    out.insert(j, (gen, exp))


def _fold(graph: DefiningGraph, items: Iterable[tuple[int, int]]) -> tuple:
    out: list = []
    for gen, exp in items:
        if exp:
            _append_syllable(graph, out, gen, exp)
    return tuple(out)


def _strip_right(graph: DefiningGraph, syllables, gens_mask: int):
    """Split off the maximal removable suffix whose generators lie in
    gens_mask. Returns (kept, removed), both canonical, with
    element == kept * removed and kept the minimal representative of the
    left coset element*<gens>."""
    kept_rev: list = []
    removed_rev: list = []
    kept_mask = 0
    full = graph.full_mask
    for gen, exp in reversed(syllables):
        blockers = full & ~graph.adj_mask[gen]  # includes gen itself
        if (gens_mask >> gen) & 1 and not (kept_mask & blockers):
            removed_rev.append((gen, exp))
        else:
            kept_rev.append((gen, exp))
            kept_mask |= 1 << gen
    return tuple(reversed(kept_rev)), tuple(reversed(removed_rev))


def _strip_left(graph: DefiningGraph, syllables, gens_mask: int):
    """Mirror of _strip_right: (removed, kept) with element == removed * kept."""
    kept: list = []
    removed: list = []
    kept_mask = 0
    full = graph.full_mask
    for gen, exp in syllables:
        blockers = full & ~graph.adj_mask[gen]
        if (gens_mask >> gen) & 1 and not (kept_mask & blockers):
            removed.append((gen, exp))
        else:
            kept.append((gen, exp))
            kept_mask |= 1 << gen
    return tuple(removed), tuple(kept)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A RAAG element in canonical form. Do not call the constructor with
    non-canonical syllables; use normal_form, multiply, or the methods."""

    graph: DefiningGraph
    syllables: tuple[tuple[int, int], ...]

    # hot path: elements live in large sets during ball enumeration, so
    # equality short-circuits on syllables and the hash is cached (colliding
    # across graphs is fine; mixing graphs in one container is not done)
    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.syllables == other.syllables and (
            self.graph is other.graph or self.graph == other.graph
        )

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.syllables)
            object.__setattr__(self, "_hash", h)
        return h

    @classmethod
    def identity(cls, graph: DefiningGraph) -> "GroupElement":
        return cls(graph, ())

    @classmethod
    def from_text(cls, graph: DefiningGraph, text: str) -> "GroupElement":
        return normal_form(parse_word(text, graph), graph)

    @cached_property
    def length(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    @cached_property
    def support(self) -> frozenset[int]:
        return frozenset(g for g, _ in self.syllables)

    def gen_exponent_sum(self, gen: int) -> int:
        # abelianized exponent; representative-independent
        return sum(e for g, e in self.syllables if g == gen)

    def letters(self) -> Iterator[Letter]:
        for g, e in self.syllables:
            s = 1 if e > 0 else -1
            for _ in range(abs(e)):
                yield Letter(g, s)

    @property
    def normal(self) -> Word:
        return Word(self.graph, LetterSeq(self.syllables))

    def text(self) -> str:
        out = []
        for g, e in self.syllables:
            name = self.graph.generators[g]
            out.append(name if e == 1 else f"{name}^{e}")
        return " ".join(out)

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"<{self.text() or '1'}>"

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.graph is not other.graph and self.graph != other.graph:
            raise MixedGraphs("cannot multiply over different defining graphs")
        out = list(self.syllables)
        for gen, exp in other.syllables:
            _append_syllable(self.graph, out, gen, exp)
        return GroupElement(self.graph, tuple(out))

    def inverse(self) -> "GroupElement":
        return GroupElement(
            self.graph,
            _fold(self.graph, ((g, -e) for g, e in reversed(self.syllables))),
        )

    def __pow__(self, n: int) -> "GroupElement":
        if n == 0:
            return GroupElement.identity(self.graph)
        base = self if n > 0 else self.inverse()
        if len(base.syllables) == 1:
            g, e = base.syllables[0]
            return GroupElement(base.graph, ((g, e * abs(n)),))
        acc = base
        for _ in range(abs(n) - 1):
            acc = acc * base
        return acc

    def append_letter(self, gen: int, sign: int) -> "GroupElement":
        return self.append_run(gen, sign)

    def append_run(self, gen: int, exp: int) -> "GroupElement":
        if exp == 0:
            return self
        out = list(self.syllables)
        _append_syllable(self.graph, out, gen, exp)
        return GroupElement(self.graph, tuple(out))


def normal_form(w, graph: DefiningGraph | None = None) -> GroupElement:
    """Unique shortlex-minimal geodesic representative."""
    if isinstance(w, GroupElement):
        return w
    if isinstance(w, str):
        if graph is None:
            raise WordError("normal_form of a string needs a graph")
        w = parse_word(w, graph)
    graph = w.graph
    return GroupElement(graph, _fold(graph, w.letters.runs))


def multiply(x: GroupElement, y: GroupElement) -> GroupElement:
    return x * y


def invert(x: GroupElement) -> GroupElement:
    return x.inverse()


def is_geodesic(w: Word, graph: DefiningGraph | None = None) -> bool:
    if isinstance(w, str):
        if graph is None:
            raise WordError("is_geodesic of a string needs a graph")
        w = parse_word(w, graph)
    return len(w) == normal_form(w).length


def distance(x: GroupElement, y: GroupElement) -> int:
    """Graph distance in the Cayley 1-skeleton."""
    if x.graph is not y.graph and x.graph != y.graph:
        raise MixedGraphs("cannot measure distance across defining graphs")
    return (x.inverse() * y).length


# --- independent oracle ------------------------------------------------------


def _pile_key(graph: DefiningGraph, letters) -> tuple:
    """The piling of a word: per generator column, the sequence of beads a
    left-to-right reading drops there (+1/-1 on the letter's own column, 0 on
    every non-commuting column). A letter cancels the previous letter of its
    own generator exactly when that letter's bead is still on top of the
    column; its sync beads are then necessarily topped only by other sync
    beads, so popping one 0 from each blocked column keeps the pile faithful.

    Two words represent the same group element iff their piles are equal,
    which makes the pile a canonical state key that shares no code with the
    syllable engine. The number of nonzero beads is the geodesic length.
    """
    n = len(graph.generators)
    cols: list[list[int]] = [[] for _ in range(n)]
    blockers = [
        [h for h in range(n) if h != g and not graph.adjacent(g, h)]
        for g in range(n)
    ]
    for gen, sign in letters:
        if cols[gen] and cols[gen][-1] == -sign:
            cols[gen].pop()
            for h in blockers[gen]:
                popped = cols[h].pop()
                assert popped == 0, "piling invariant broken"
        else:
            cols[gen].append(sign)
            for h in blockers[gen]:
                cols[h].append(0)
    return tuple(tuple(col) for col in cols)


def _pile_append(graph: DefiningGraph, pile: tuple, gen: int, sign: int) -> tuple:
    """One-letter extension of a pile; same rules as _pile_key."""
    cols = list(pile)
    if cols[gen] and cols[gen][-1] == -sign:
        cols[gen] = cols[gen][:-1]
        for h in range(len(cols)):
            if h != gen and not graph.adjacent(gen, h):
                assert cols[h][-1] == 0, "piling invariant broken"
                cols[h] = cols[h][:-1]
    else:
        cols[gen] = cols[gen] + (sign,)
        for h in range(len(cols)):
            if h != gen and not graph.adjacent(gen, h):
                cols[h] = cols[h] + (0,)
    return tuple(cols)


def _raw_letters(value, graph: DefiningGraph) -> list:
    """Letters of a word-like value without invoking the syllable engine.

    Accepts 1 (the identity), a string, a Word, or a GroupElement.
    """
    if isinstance(value, int):
        if value != 1:
            raise WordError("only the integer 1 (identity) names a group element")
        return []
    if isinstance(value, str):
        value = parse_word(value, graph)
    if isinstance(value, Word):
        if value.graph is not graph and value.graph != graph:
            raise MixedGraphs("word belongs to a different defining graph")
        return list(value.letters)
    if isinstance(value, GroupElement):
        if value.graph is not graph and value.graph != graph:
            raise MixedGraphs("element belongs to a different defining graph")
        return list(value.letters())
    raise WordError(f"cannot interpret {value!r} as a word")


def bfs_oracle_distance(x, y, radius: int, graph: DefiningGraph | None = None) -> int:
    """Exact distance by breadth-first search over literal letter moves,
    deduplicated with the piling invariant (never the syllable engine).

    Raises NotInBall when the distance exceeds radius.
    """
    if graph is None:
        graph = getattr(x, "graph", None) or getattr(y, "graph", None)
    if graph is None:
        raise WordError("bfs_oracle_distance needs a defining graph")
    start = _pile_key(graph, _raw_letters(x, graph))
    target = _pile_key(graph, _raw_letters(y, graph))
    if start == target:
        return 0
    n = len(graph.generators)
    moves = [(g, s) for g in range(n) for s in (1, -1)]
    # Bidirectional level-synchronized BFS. Expanding one full level of the
    # smaller frontier and scanning every generated child against the other
    # side's depth map finds the minimum meet at the first level any meet
    # exists, so the sum below is the exact distance.
    seen_a = {start: 0}
    seen_b = {target: 0}
    front_a, front_b = [start], [target]
    depth_a = depth_b = 0
    while depth_a + depth_b < radius:
        if len(front_a) <= len(front_b):
            front, seen, other, depth_a = front_a, seen_a, seen_b, depth_a + 1
            depth = depth_a
        else:
            front, seen, other, depth_b = front_b, seen_b, seen_a, depth_b + 1
            depth = depth_b
        nxt = []
        best = None
        for pile in front:
            for g, s in moves:
                child = _pile_append(graph, pile, g, s)
                met = other.get(child)
                if met is not None and (best is None or depth + met < best):
                    best = depth + met
                if child not in seen:
                    seen[child] = depth
                    nxt.append(child)
        if best is not None:
            return best
        if not nxt:
            raise NotInBall(f"distance exceeds radius {radius}")
        if front is front_a:
            front_a = nxt
        else:
            front_b = nxt
    raise NotInBall(f"distance exceeds radius {radius}")
