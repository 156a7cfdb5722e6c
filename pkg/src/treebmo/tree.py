"""Geometry of the infinite homogeneous tree with a fixed doubly-infinite geodesic.

Every vertex of the (m+1)-regular tree is addressed by a pair
``(anchor, word)``: ``anchor`` is the index of a geodesic vertex and
``word`` is the sequence of child choices (digits in ``0..m-1``) taken
while descending from it.  Digit 0 at a geodesic vertex continues the
geodesic one level down, so ``(n, 0w)`` and ``(n-1, w)`` address the same
vertex; the canonical form drops leading zeros.  Under this encoding

* ``level(v) = anchor - len(word)``,
* ancestry is word-prefixing, which makes equality, the father map and
  distances O(len(word)).

All measure arithmetic is exact: the weight of a vertex at level ``l``
is the rational ``m**l``.  Vertices and trees are immutable values and
every operation is a pure function, so everything here can be shared
freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple


class InvalidVertexError(ValueError):
    """Raised when a vertex description is malformed for the given tree."""


class Vertex(NamedTuple):
    anchor: int
    word: tuple[int, ...]

    def __str__(self) -> str:
        return format_vertex(self)


ORIGIN = Vertex(0, ())


@dataclass(frozen=True)
class Tree:
    """Parameters of the homogeneous tree: each vertex has m children and one father."""

    m: int

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError(f"branching factor must be >= 2, got {self.m}")

    # -- construction -------------------------------------------------------

    def canonicalize(self, anchor: int, word) -> Vertex:
        """Return the canonical vertex for (anchor, word).

        Leading zeros are absorbed into the anchor: (n, 0w) == (n-1, w).
        Raises InvalidVertexError on digits outside 0..m-1.
        """
        digits = tuple(word)
        for d in digits:
            if not isinstance(d, int) or d < 0 or d >= self.m:
                raise InvalidVertexError(f"digit {d!r} out of range 0..{self.m - 1}")
        i = 0
        n = anchor
        while i < len(digits) and digits[i] == 0:
            i += 1
            n -= 1
        return Vertex(n, digits[i:])

    def vertex(self, anchor: int, word=()) -> Vertex:
        return self.canonicalize(anchor, word)

    def is_canonical(self, v: Vertex) -> bool:
        return (not v.word or v.word[0] != 0) and all(
            0 <= d < self.m for d in v.word
        )

    # -- local structure ----------------------------------------------------

    def children(self, v: Vertex) -> list[Vertex]:
        """The m children of v (one level down), in digit order."""
        out = []
        for d in range(self.m):
            if d == 0 and not v.word:
                out.append(Vertex(v.anchor - 1, ()))
            else:
                out.append(Vertex(v.anchor, v.word + (d,)))
        return out

    def child(self, v: Vertex, digit: int) -> Vertex:
        if digit < 0 or digit >= self.m:
            raise InvalidVertexError(f"digit {digit} out of range 0..{self.m - 1}")
        if digit == 0 and not v.word:
            return Vertex(v.anchor - 1, ())
        return Vertex(v.anchor, v.word + (digit,))

    def descendants_at_depth(self, v: Vertex, depth: int) -> Iterator[Vertex]:
        """All m**depth vertices exactly `depth` levels below v."""
        if depth == 0:
            yield v
            return
        for c in self.children(v):
            yield from self.descendants_at_depth(c, depth - 1)

    # -- measure ------------------------------------------------------------

    def weight(self, v: Vertex) -> Fraction:
        """mu({v}) = m**level(v), exact (a unit fraction for negative levels)."""
        return Fraction(self.m) ** level(v)

    def level_weight(self, lvl: int) -> Fraction:
        return Fraction(self.m) ** lvl

    def ball(self, v: Vertex, r: int) -> list[Vertex]:
        """All vertices at distance <= r from v (closed ball), by BFS."""
        if r < 0:
            raise ValueError("radius must be >= 0")
        seen = {v}
        frontier = [v]
        for _ in range(r):
            nxt = []
            for u in frontier:
                for w in [father(u), *self.children(u)]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return sorted(seen, key=vertex_sort_key)

    def ball_measure_closed(self, v: Vertex, r: int) -> Fraction:
        """mu(B(v, r)) in closed form: m**level(v) * (m**(r+1) + m**r - 2) / (m - 1).

        Asserted against enumeration only for r >= 1; for r = 0 the ball is
        the single vertex and its weight is returned directly.
        """
        if r < 0:
            raise ValueError("radius must be >= 0")
        if r == 0:
            return self.weight(v)
        m = self.m
        return self.weight(v) * Fraction(m ** (r + 1) + m**r - 2, m - 1)

    def ball_measure_enumerated(self, v: Vertex, r: int) -> Fraction:
        return sum((self.weight(u) for u in self.ball(v, r)), Fraction(0))


# ---------------------------------------------------------------------------
# m-independent vertex operations
# ---------------------------------------------------------------------------


def level(v: Vertex) -> int:
    return v.anchor - len(v.word)


def father(v: Vertex) -> Vertex:
    if not v.word:
        return Vertex(v.anchor + 1, ())
    return Vertex(v.anchor, v.word[:-1])


def ancestor(v: Vertex, height: int) -> Vertex:
    """The vertex `height` levels above v along the father chain."""
    if height < 0:
        raise ValueError("height must be >= 0")
    if height <= len(v.word):
        return Vertex(v.anchor, v.word[: len(v.word) - height])
    return Vertex(v.anchor + height - len(v.word), ())


def _lifted_digit(v: Vertex, common_anchor: int, i: int) -> int:
    # digit i of v's word once lifted to common_anchor by prepending zeros
    pad = common_anchor - v.anchor
    return 0 if i < pad else v.word[i - pad]


def lies_below(x: Vertex, y: Vertex) -> bool:
    """True iff the upward path from x passes through y (x == y counts)."""
    dx, dy = level(x), level(y)
    if dx > dy:
        return False
    return ancestor(x, dy - dx) == y


def distance(x: Vertex, y: Vertex) -> int:
    """Graph distance: depth of x plus depth of y below their lowest common ancestor."""
    a = max(x.anchor, y.anchor)
    lx = a - level(x)
    ly = a - level(y)
    common = 0
    for i in range(min(lx, ly)):
        if _lifted_digit(x, a, i) != _lifted_digit(y, a, i):
            break
        common += 1
    return (lx - common) + (ly - common)


def join(x: Vertex, y: Vertex) -> Vertex:
    """Lowest common ancestor of x and y."""
    a = max(x.anchor, y.anchor)
    lx = a - level(x)
    ly = a - level(y)
    common = []
    for i in range(min(lx, ly)):
        d = _lifted_digit(x, a, i)
        if d != _lifted_digit(y, a, i):
            break
        common.append(d)
    i = 0
    n = a
    while i < len(common) and common[i] == 0:
        i += 1
        n -= 1
    return Vertex(n, tuple(common[i:]))


def depth_below(x: Vertex, root: Vertex) -> int | None:
    """level(root) - level(x) if x lies below root, else None."""
    d = level(root) - level(x)
    if d < 0 or ancestor(x, d) != root:
        return None
    return d


def vertex_sort_key(v: Vertex):
    return (-level(v), v.anchor, v.word)


@dataclass(frozen=True)
class Window:
    """The finite slab of vertices lying at depth 0..depth below root."""

    root: Vertex
    depth: int

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise ValueError("window depth must be >= 0")

    def contains(self, v: Vertex) -> bool:
        d = depth_below(v, self.root)
        return d is not None and d <= self.depth

    def members(self, tree: Tree) -> list[Vertex]:
        out: list[Vertex] = []
        for d in range(self.depth + 1):
            out.extend(tree.descendants_at_depth(self.root, d))
        return out

    def __str__(self) -> str:
        return f"root={format_vertex(self.root)},depth={self.depth}"


def parse_window(tree: Tree, text: str) -> Window:
    """Parse "root=<vertex>,depth=<int>"."""
    parts = dict(
        item.split("=", 1) for item in text.strip().split(",") if "=" in item
    )
    if set(parts) != {"root", "depth"}:
        raise ValueError(f"window text {text!r} must be 'root=<vertex>,depth=<int>'")
    return Window(parse_vertex(tree, parts["root"]), int(parts["depth"]))


# ---------------------------------------------------------------------------
# text format: "<anchor>:<digits>", e.g. "0:", "0:1", "-1:", "2:102"
# ---------------------------------------------------------------------------


def format_vertex(v: Vertex) -> str:
    return f"{v.anchor}:{''.join(str(d) for d in v.word)}"


def parse_vertex(tree: Tree, text: str) -> Vertex:
    """Parse "n:w" and canonicalize.  Digits must be valid for tree.m."""
    s = text.strip()
    if ":" not in s:
        raise InvalidVertexError(f"vertex text {text!r} lacks ':' separator")
    head, _, tail = s.partition(":")
    try:
        anchor = int(head)
    except ValueError as e:
        raise InvalidVertexError(f"bad anchor in vertex text {text!r}") from e
    if not all(ch.isdigit() for ch in tail):
        raise InvalidVertexError(f"bad digits in vertex text {text!r}")
    return tree.canonicalize(anchor, tuple(int(ch) for ch in tail))
