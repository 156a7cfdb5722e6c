"""Trapezoid families: general and admissible trapezoids, their envelopes
(Calderon-Zygmund sets), enlargements, and the nested covering of the tree.

A trapezoid collects the vertices below a root whose depth falls in a
half-open band.  Admissible trapezoids use the band [h, 2h) and have the
exact measure h * m**level(root); their envelopes widen the band to
[h/2, 4h) and form the family over which every oscillation, maximal
function and atom in this package is defined.  Closed-form measures are
used everywhere and are cross-checked against enumeration in the tests.

Depth bands are kept in integer form: "depth >= h/2" for integer depth
is "depth >= ceil(h/2)", and "depth < 4h" is "depth <= 4h - 1".  This
avoids any rounding policy downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .tree import (
    Tree,
    Vertex,
    ancestor,
    depth_below,
    father,
    format_vertex,
    join,
    level,
)


class EnumerationError(ValueError):
    """Raised when a requested enumeration cannot be completed as asked."""


@dataclass(frozen=True)
class GeneralTrapezoid:
    """Vertices below `root` with a <= depth < b (a, b need not be integers)."""

    root: Vertex
    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        a, b = Fraction(self.a), Fraction(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a < 0 or b <= a:
            raise ValueError("need 0 <= a < b")

    def depth_range(self) -> tuple[int, int]:
        """Inclusive integer depth band [lo, hi] (hi < lo means empty)."""
        lo = -((-self.a) // 1)  # ceil(a)
        hi = -((-self.b) // 1) - 1  # largest integer < b
        return int(lo), int(hi)

    def contains(self, v: Vertex) -> bool:
        d = depth_below(v, self.root)
        if d is None:
            return False
        lo, hi = self.depth_range()
        return lo <= d <= hi


@dataclass(frozen=True)
class AdmissibleTrapezoid:
    """Either the single vertex {root} (degenerate, h = 1) or the band [h, 2h)."""

    root: Vertex
    h: int = 1
    degenerate: bool = False

    def __post_init__(self) -> None:
        if self.degenerate and self.h != 1:
            raise ValueError("degenerate trapezoids have h = 1")
        if self.h < 1:
            raise ValueError("height must be >= 1")

    def depth_range(self) -> tuple[int, int]:
        if self.degenerate:
            return 0, 0
        return self.h, 2 * self.h - 1

    def contains(self, v: Vertex) -> bool:
        if self.degenerate:
            return v == self.root
        d = depth_below(v, self.root)
        return d is not None and self.h <= d < 2 * self.h

    def __str__(self) -> str:
        deg = " deg" if self.degenerate else ""
        return f"trapezoid root={format_vertex(self.root)} h={self.h}{deg}"


@dataclass(frozen=True)
class CZSet:
    """A Calderon-Zygmund set: {root} if degenerate, else depths ceil(h/2) .. 4h-1."""

    root: Vertex
    h: int = 1
    degenerate: bool = False

    def __post_init__(self) -> None:
        if self.degenerate and self.h != 1:
            raise ValueError("degenerate CZ sets have h = 1")
        if self.h < 1:
            raise ValueError("height must be >= 1")

    def depth_range(self) -> tuple[int, int]:
        if self.degenerate:
            return 0, 0
        return (self.h + 1) // 2, 4 * self.h - 1

    def contains(self, v: Vertex) -> bool:
        if self.degenerate:
            return v == self.root
        d = depth_below(v, self.root)
        if d is None:
            return False
        lo, hi = self.depth_range()
        return lo <= d <= hi

    def __str__(self) -> str:
        deg = " deg" if self.degenerate else ""
        return f"cz root={format_vertex(self.root)} h={self.h}{deg}"


TrapezoidLike = GeneralTrapezoid | AdmissibleTrapezoid | CZSet


# ---------------------------------------------------------------------------
# membership enumeration and exact measures
# ---------------------------------------------------------------------------


def members(tree: Tree, s: TrapezoidLike) -> Iterator[Vertex]:
    lo, hi = s.depth_range()
    for d in range(lo, hi + 1):
        yield from tree.descendants_at_depth(s.root, d)


def member_count(tree: Tree, s: TrapezoidLike) -> int:
    lo, hi = s.depth_range()
    return sum(tree.m**d for d in range(lo, hi + 1))


def trapezoid_members(tree: Tree, t: GeneralTrapezoid, cap: int) -> list[Vertex]:
    """Members of a general trapezoid; `cap` must dominate b so nothing is cut."""
    if Fraction(cap) < t.b:
        raise EnumerationError(
            f"depth cap {cap} is below the trapezoid bound b={t.b}; enumeration would be incomplete"
        )
    return list(members(tree, t))


def set_measure(tree: Tree, s: TrapezoidLike) -> Fraction:
    """Exact measure: each fully populated level below the root carries m**level(root)."""
    lo, hi = s.depth_range()
    if hi < lo:
        return Fraction(0)
    return (hi - lo + 1) * tree.weight(s.root)


def admissible_measure(tree: Tree, r: AdmissibleTrapezoid) -> Fraction:
    """mu(R) = h * m**level(root); holds in the degenerate case too (h = 1)."""
    return r.h * tree.weight(r.root)


def cz_measure(tree: Tree, s: CZSet) -> Fraction:
    """mu of a CZ set: (4h - ceil(h/2)) * m**level(root), or the root weight if degenerate."""
    return set_measure(tree, s)


def envelope(r: AdmissibleTrapezoid) -> CZSet:
    """The CZ set with the same root and height; degenerate maps to degenerate."""
    return CZSet(r.root, r.h, r.degenerate)


def width(tree: Tree, r: AdmissibleTrapezoid) -> Fraction:
    return tree.weight(r.root)


# ---------------------------------------------------------------------------
# enlargement: vertices within distance < h/4 of a CZ set
# ---------------------------------------------------------------------------


def enlargement_reach(s: CZSet) -> int:
    """Largest integer distance strictly below h/4."""
    return (s.h - 1) // 4


def enlargement_depth_range(s: CZSet) -> tuple[int, int]:
    """The enlargement is again a depth band below the same root.

    Every vertex within distance < h/4 of the set stays below the root:
    the band's top depth is ceil(h/2), walking up d < h/4 steps keeps the
    depth >= ceil(h/2) - (h-1)//4 >= 1, and any path leaving the subtree
    must first climb past the root, which costs more than h/4.  Walking
    down extends the band symmetrically.  The brute-force distance scan
    in the test suite confirms this band on explicit windows.
    """
    lo, hi = s.depth_range()
    if s.degenerate:
        return lo, hi
    reach = enlargement_reach(s)
    return lo - reach, hi + reach


def enlargement_contains(s: CZSet, v: Vertex) -> bool:
    d = depth_below(v, s.root)
    if d is None:
        return False
    lo, hi = enlargement_depth_range(s)
    return lo <= d <= hi


def enlargement_members(tree: Tree, s: CZSet) -> list[Vertex]:
    lo, hi = enlargement_depth_range(s)
    out: list[Vertex] = []
    for d in range(lo, hi + 1):
        out.extend(tree.descendants_at_depth(s.root, d))
    return out


def enlargement_measure(tree: Tree, s: CZSet) -> Fraction:
    lo, hi = enlargement_depth_range(s)
    return (hi - lo + 1) * tree.weight(s.root)


# ---------------------------------------------------------------------------
# the increasing covering family and the constructive index bound
# ---------------------------------------------------------------------------


def covering_family(n: int) -> CZSet:
    """The n-th set of the nested covering: root at geodesic level n, height n+1."""
    if n < 0:
        raise ValueError("covering index must be >= 0")
    return CZSet(Vertex(n, ()), n + 1)


def covering_index(x: Vertex) -> int:
    """Smallest n with x in the n-th covering set; membership is verified.

    The scan starts at the first family root lying above x and is bounded:
    with k that root's index and d its level gap to x, any
    n >= max(k, 1 + 2(k - d), floor((d - k - 4)/3) + 1) is a member, so
    termination is guaranteed.
    """
    k = max(x.anchor, 0)
    d = k - level(x)
    bound = max(k, 1 + 2 * (k - d), (d - k - 4) // 3 + 1, 0)
    n = k
    while True:
        if covering_family(n).contains(x):
            return n
        n += 1
        if n > bound:
            raise AssertionError(
                f"covering index scan passed its guaranteed bound {bound} for {x}"
            )


# ---------------------------------------------------------------------------
# the superset stream: every CZ set meeting a finite support, up to a measure cap
# ---------------------------------------------------------------------------


def feasible_heights(depth: int) -> range:
    """Heights h for which a vertex at this depth below the root is a member."""
    if depth < 1:
        return range(0)
    return range((depth + 4) // 4, 2 * depth + 1)  # ceil((depth+1)/4) .. 2*depth


MIN_CZ_LEVELS = 3  # a non-degenerate CZ set spans at least 4*1 - 1 = 3 levels


def cz_supersets(
    tree: Tree, support: Iterable[Vertex], max_measure: Fraction
) -> Iterator[CZSet]:
    """Every CZ set containing at least one support vertex, with measure <= max_measure.

    Degenerate sets at the support vertices come first; then roots climb
    the father chains in waves of increasing height.  A chain stops once
    even the smallest set rooted at that height exceeds the cap, which is
    what certifies completeness: any qualifying set rooted above contains
    some support vertex u at height t with 3 * m**(level(u) + t) > cap.
    Each set is yielded exactly once.
    """
    supp = sorted(set(support), key=lambda v: (-level(v), v.anchor, v.word))
    if not supp:
        raise ValueError("support must be nonempty")
    cap = Fraction(max_measure)
    for u in supp:
        if tree.weight(u) <= cap:
            yield CZSet(u, 1, degenerate=True)
    seen: set[tuple[Vertex, int]] = set()
    alive = list(supp)
    t = 0
    while alive:
        t += 1
        still = []
        for u in alive:
            if MIN_CZ_LEVELS * tree.level_weight(level(u) + t) > cap:
                continue
            still.append(u)
            root = ancestor(u, t)
            root_weight = tree.weight(root)
            for h in feasible_heights(t):
                if (root, h) in seen:
                    continue
                if (4 * h - (h + 1) // 2) * root_weight > cap:
                    continue
                seen.add((root, h))
                yield CZSet(root, h)
        alive = still


def witness_key(tree: Tree, s: TrapezoidLike):
    """Deterministic tie-break order: smaller measure, lower root level, lex word."""
    h = getattr(s, "h", 0)
    deg = getattr(s, "degenerate", False)
    return (
        set_measure(tree, s),
        level(s.root),
        s.root.word,
        s.root.anchor,
        h,
        deg,
    )


def smallest_enclosing_cz(tree: Tree, vertices: Iterable[Vertex]) -> CZSet:
    """The CZ set of least measure containing every given vertex."""
    pts = list(vertices)
    if not pts:
        raise ValueError("need at least one vertex")
    root = pts[0]
    for p in pts[1:]:
        root = join(root, p)
    best: CZSet | None = None
    best_measure: Fraction | None = None
    while True:
        depths = [depth_below(p, root) for p in pts]
        if all(d is not None for d in depths):
            dmin, dmax = min(depths), max(depths)
            if dmin >= 1:
                h_lo = (dmax + 4) // 4
                if h_lo <= 2 * dmin:
                    cand = CZSet(root, h_lo)
                    meas = cz_measure(tree, cand)
                    if best_measure is None or meas < best_measure:
                        best, best_measure = cand, meas
        if best_measure is not None and MIN_CZ_LEVELS * tree.weight(father(root)) > best_measure:
            return best
        root = father(root)
