"""Atomic Hardy-space machinery: atom validation, good/bad splits at
threshold 2**j, telescoping atomic decompositions, and two-sided norm
estimation (an exact LP gauge from above, a duality quotient from below).

The good/bad split materializes the level set of the maximal function as
an exact vertex set, covers it with inclusion-maximal disjoint admissible
trapezoids, and peels one zero-integral piece per trapezoid envelope.  Any
construction satisfying the four split contracts is acceptable; the
contracts themselves are re-verified on every run:

  (b1) the trapezoids sit inside the level set and their envelopes cover it,
  (b2) the function is exactly the good part plus the bad pieces, each
       piece supported in its envelope,
  (b3) the good part is uniformly small at the 2**j scale (reported ratio),
  (b4) every bad piece has zero integral and controlled Lq size (reported
       ratio).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .funcs import (
    Exponent,
    FinFunc,
    integral,
    lp_norm,
    lp_power,
    pairing,
)
from .maximal import CutoffCertificate, hl_maximal, maximal_level_set
from .sets import (
    AdmissibleTrapezoid,
    CZSet,
    cz_measure,
    envelope,
    members,
    set_measure,
    smallest_enclosing_cz,
    witness_key,
)
from .simplex import InfeasibleError, solve_lp
from .tree import Tree, Vertex, ancestor, level, lies_below


# ---------------------------------------------------------------------------
# atoms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    function: FinFunc
    set: CZSet
    p: Exponent


def is_atom(tree: Tree, f: FinFunc, s: CZSet, p) -> tuple[bool, str | None]:
    """Validate the three atom clauses: support in the set, zero integral,
    and Lp norm at most measure**(1/p - 1).  Exact for p in {1, 2, inf};
    the first violated clause is named in the diagnostic."""
    p = Exponent.of(p)
    for v in f.support():
        if not s.contains(v):
            return False, f"support vertex {v} is outside {s}"
    if integral(tree, f) != 0:
        return False, f"integral is {integral(tree, f)}, not zero"
    mu = cz_measure(tree, s)
    if p.is_inf:
        if f.max_abs() > 1 / mu:
            return False, f"sup norm {f.max_abs()} exceeds 1/measure = {1 / mu}"
        return True, None
    if p.value == 1:
        if lp_power(tree, f, 1) > 1:
            return False, "L1 norm exceeds 1"
        return True, None
    if p.value == 2:
        if lp_power(tree, f, 2) > 1 / mu:
            return False, "squared L2 norm exceeds 1/measure"
        return True, None
    bound = float(mu) ** (1.0 / float(p.value) - 1.0)
    if lp_norm(tree, f, p).as_float() > bound * (1 + 1e-12):
        return False, f"Lp norm exceeds measure**(1/p - 1) ~ {bound}"
    return True, None


def normalize_to_atom(tree: Tree, g: FinFunc, s: CZSet) -> tuple[Atom, Fraction]:
    """Scale a zero-integral function supported in s to a (1, inf)-atom.

    Returns (a, lam) with g = lam * a and lam = measure(s) * sup|g|; the
    resulting atom meets its size bound with equality.
    """
    if not g:
        raise ValueError("cannot normalize the zero function")
    for v in g.support():
        if not s.contains(v):
            raise ValueError(f"support vertex {v} escapes {s}")
    if integral(tree, g) != 0:
        raise ValueError(f"integral is {integral(tree, g)}, not zero")
    lam = cz_measure(tree, s) * g.max_abs()
    atom = Atom(g.scaled(1 / lam), s, Exponent.of(None))
    return atom, lam


# ---------------------------------------------------------------------------
# good/bad split at scale 2**j
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GoodBadSplit:
    level_j: int
    q: int
    good: FinFunc
    bad_parts: tuple[tuple[FinFunc, AdmissibleTrapezoid], ...]
    omega: frozenset[Vertex]
    certificate: CutoffCertificate
    c_good: Fraction  # max |good| / 2**j
    c_bad_qpow: Fraction  # max ||b||_q^q / (2**(jq) * measure(envelope))

    @property
    def c_bad(self) -> float:
        return float(self.c_bad_qpow) ** (1.0 / self.q)


def _trapezoid_subset(a: AdmissibleTrapezoid, b: AdmissibleTrapezoid) -> bool:
    if a.degenerate:
        return b.contains(a.root)
    if b.degenerate:
        return False
    gap = level(b.root) - level(a.root)
    if gap < 0 or not lies_below(a.root, b.root):
        return False
    return b.h <= a.h + gap and 2 * a.h + gap <= 2 * b.h


def _trapezoids_overlap(a: AdmissibleTrapezoid, b: AdmissibleTrapezoid) -> bool:
    if lies_below(a.root, b.root):
        lower, upper = a, b
    elif lies_below(b.root, a.root):
        lower, upper = b, a
    else:
        return False  # incomparable roots span disjoint subtrees
    gap = level(upper.root) - level(lower.root)
    lo1, hi1 = lower.depth_range()
    lo2, hi2 = upper.depth_range()
    return lo1 + gap <= hi2 and lo2 <= hi1 + gap


def admissible_trapezoids_within(
    tree: Tree, omega: frozenset[Vertex]
) -> list[AdmissibleTrapezoid]:
    """Every admissible trapezoid all of whose members lie in omega.

    A depth-h band needs m**h vertices per level, which caps the heights to
    scan; completeness of a level below a candidate root is decided by
    counting omega vertices against m**depth.
    """
    if not omega:
        return []
    cands = [AdmissibleTrapezoid(w, 1, degenerate=True) for w in omega]
    h_max = 0
    while tree.m ** (h_max + 1) <= len(omega):
        h_max += 1
    if h_max == 0:
        return cands
    counts: dict[tuple[Vertex, int], int] = {}
    for w in omega:
        for t in range(1, 2 * h_max):
            r = ancestor(w, t)
            counts[(r, t)] = counts.get((r, t), 0) + 1
    complete: dict[Vertex, set[int]] = {}
    for (r, t), cnt in counts.items():
        if cnt == tree.m**t:
            complete.setdefault(r, set()).add(t)
    for r, depths in complete.items():
        for h in range(1, h_max + 1):
            if all(d in depths for d in range(h, 2 * h)):
                cands.append(AdmissibleTrapezoid(r, h))
    return cands


def select_maximal_disjoint(
    tree: Tree, candidates: list[AdmissibleTrapezoid]
) -> list[AdmissibleTrapezoid]:
    """Inclusion-maximal candidates, made disjoint by a top-down greedy sweep.

    Roots are processed from the highest level down; a maximal candidate
    rejected for overlapping an earlier pick is wholly inside that pick's
    envelope (two overlapping trapezoids have comparable roots, and the
    lower one's depth band maps into the upper one's envelope band), which
    is what makes the envelopes of the selection cover the original set.
    """
    maximal = [
        r
        for r in candidates
        if not any(s != r and _trapezoid_subset(r, s) for s in candidates)
    ]
    maximal.sort(key=lambda r: (-level(r.root), witness_key(tree, r)))
    selected: list[AdmissibleTrapezoid] = []
    for r in maximal:
        if all(not _trapezoids_overlap(r, s) for s in selected):
            selected.append(r)
    return selected


def good_bad_split(
    tree: Tree, g: FinFunc, q, j: int, max_level_set: int = 100_000
) -> GoodBadSplit:
    """Split g at threshold 2**j against the maximal function of |g|**q.

    q must be an integer >= 2 so that |g|**q and the level-set threshold
    2**(jq) stay rational and the whole construction is exact.  A level
    set larger than `max_level_set` vertices raises EnumerationError
    rather than truncating silently.
    """
    q = Exponent.of(q)
    qi = q.integer()
    if qi is None or qi < 2:
        raise ValueError("good/bad splits require an integer exponent q >= 2")
    phi = FinFunc({v: abs(val) ** qi for v, val in g.items()})
    lam = Fraction(2) ** (j * qi)
    scale = Fraction(2) ** j
    omega, certificate = maximal_level_set(tree, phi, lam, max_vertices=max_level_set)
    selected = select_maximal_disjoint(
        tree, admissible_trapezoids_within(tree, omega)
    )
    envelopes = [envelope(r) for r in selected]
    bad_parts: list[tuple[FinFunc, AdmissibleTrapezoid]] = []
    assigned: set[Vertex] = set()
    for r, env in zip(selected, envelopes):
        region = [
            (v, val)
            for v, val in g.items()
            if v not in assigned and env.contains(v)
        ]
        assigned.update(v for v, _ in region)
        mass = sum((val * tree.weight(v) for v, val in region), Fraction(0))
        balance = mass / set_measure(tree, r)
        piece = FinFunc(region) - FinFunc(
            {v: balance for v in members(tree, r)} if balance else {}
        )
        bad_parts.append((piece, r))
    good = g
    for piece, _ in bad_parts:
        good = good - piece

    _verify_split_contracts(tree, g, good, bad_parts, envelopes, omega)

    c_good = good.max_abs() / scale
    c_bad_qpow = Fraction(0)
    for (piece, r), env in zip(bad_parts, envelopes):
        if piece:
            ratio = lp_power(tree, piece, qi) / (lam * cz_measure(tree, env))
            c_bad_qpow = max(c_bad_qpow, ratio)
    return GoodBadSplit(
        j,
        qi,
        good,
        tuple(bad_parts),
        omega,
        certificate,
        c_good,
        c_bad_qpow,
    )


def _verify_split_contracts(tree, g, good, bad_parts, envelopes, omega) -> None:
    traps = [r for _, r in bad_parts]
    for i, r in enumerate(traps):
        for s in traps[i + 1 :]:
            if _trapezoids_overlap(r, s):
                raise AssertionError(f"selected trapezoids {r} and {s} overlap")
    for piece, r in bad_parts:
        for v in members(tree, r):
            if v not in omega:
                raise AssertionError(f"selected trapezoid {r} leaves the level set")
        if integral(tree, piece) != 0:
            raise AssertionError("bad piece has nonzero integral")
    for (piece, r), env in zip(bad_parts, envelopes):
        for v in piece.support():
            if not env.contains(v):
                raise AssertionError("bad piece escapes its envelope")
    for w in omega:
        if not any(env.contains(w) for env in envelopes):
            raise AssertionError(f"level-set vertex {w} is not covered by an envelope")
    total = good
    for piece, _ in bad_parts:
        total = total + piece
    if total != g:
        raise AssertionError("good + bad does not reconstruct the function")


# ---------------------------------------------------------------------------
# telescoping upper bound for the atomic norm
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TelescopingResult:
    upper: Fraction
    pieces: tuple[tuple[Fraction, Atom], ...]
    j_min: int
    j_max: int
    c_good_max: Fraction
    c_bad_qpow_max: Fraction


def telescoping_h1_upper(
    tree: Tree, g: FinFunc, q, max_level_set: int = 100_000
) -> TelescopingResult:
    """An explicit validated atomic decomposition of g, hence an upper bound
    for its atomic norm.

    Splits run over the finite range of thresholds between 2**j_max (above
    the sup of the maximal function, where the level set is empty) and
    2**j_min (below the maximal function everywhere on the support, so the
    level set swallows the support).  The decomposition is assembled from
    the bottom split: one normalized atom per bad piece, plus one atom for
    the leftover good part on its smallest enclosing CZ set.  The pieces
    sum to g exactly.
    """
    q = Exponent.of(q)
    qi = q.integer()
    if qi is None or qi < 2:
        raise ValueError("telescoping requires an integer exponent q >= 2")
    if integral(tree, g) != 0:
        raise ValueError("only zero-integral functions admit atomic decompositions")
    if not g:
        return TelescopingResult(Fraction(0), (), 0, 0, Fraction(0), Fraction(0))
    phi = FinFunc({v: abs(val) ** qi for v, val in g.items()})
    j_max = _ceil_log2(g.max_abs())
    min_m = min(
        hl_maximal(tree, phi, u).value.as_fraction() for u in g.support()
    )
    j_min = j_max
    while Fraction(2) ** (j_min * qi) >= min_m:
        j_min -= 1
    splits = [
        good_bad_split(tree, g, qi, j, max_level_set) for j in range(j_min, j_max)
    ]
    base = splits[0]
    pieces: list[tuple[Fraction, Atom]] = []
    for piece, r in base.bad_parts:
        if piece:
            atom, lam = normalize_to_atom(tree, piece, envelope(r))
            pieces.append((lam, atom))
    if base.good:
        holder = smallest_enclosing_cz(tree, base.good.support())
        atom, lam = normalize_to_atom(tree, base.good, holder)
        pieces.append((lam, atom))
    recombined = FinFunc()
    for lam, atom in pieces:
        ok, why = is_atom(tree, atom.function, atom.set, atom.p)
        if not ok:
            raise AssertionError(f"emitted piece fails atom validation: {why}")
        recombined = recombined + atom.function.scaled(lam)
    if recombined != g:
        raise AssertionError("atomic pieces do not sum back to the function")
    return TelescopingResult(
        sum((lam for lam, _ in pieces), Fraction(0)),
        tuple(pieces),
        j_min,
        j_max,
        max(s.c_good for s in splits),
        max(s.c_bad_qpow for s in splits),
    )


def _ceil_log2(x: Fraction) -> int:
    """Smallest integer j with 2**j >= x, for x > 0."""
    j = x.numerator.bit_length() - x.denominator.bit_length() + 1
    while Fraction(2) ** j >= x:
        j -= 1
    return j + 1


# ---------------------------------------------------------------------------
# exact LP gauge: the atomic norm restricted to a finite CZ family
# ---------------------------------------------------------------------------


MAX_FAMILY = 64
MAX_UNIVERSE = 512


@dataclass(frozen=True)
class GaugeResult:
    value: Fraction
    pieces: tuple[tuple[Fraction, Atom], ...]
    family: tuple[CZSet, ...]


def h1_lp_gauge(tree: Tree, g: FinFunc, family: Sequence[CZSet]) -> GaugeResult:
    """min sum(t_S) over decompositions g = sum(b_S) with b_S supported in S,
    zero integral, and |b_S| <= t_S / measure(S): the (1, inf)-atomic gauge
    over the given family, solved by exact rational simplex.

    An upper bound for the atomic norm that can only decrease as the
    family grows.  Raises InfeasibleError when no decomposition exists
    (support not covered, nonzero integral, or no zero-integral routing).
    """
    fam = []
    seen = set()
    for s in family:
        key = (s.root, s.h, s.degenerate)
        if key not in seen:
            seen.add(key)
            fam.append(s)
    if not fam:
        raise ValueError("family must be nonempty")
    if len(fam) > MAX_FAMILY:
        raise ValueError(f"family size {len(fam)} exceeds the cap {MAX_FAMILY}")
    if integral(tree, g) != 0:
        raise InfeasibleError("nonzero integral: no atomic decomposition exists")
    member_lists = [sorted(members(tree, s), key=lambda v: (v.anchor, v.word)) for s in fam]
    universe = sorted({v for lst in member_lists for v in lst}, key=lambda v: (v.anchor, v.word))
    if len(universe) > MAX_UNIVERSE:
        raise ValueError(f"{len(universe)} member vertices exceed the cap {MAX_UNIVERSE}")
    uidx = {v: i for i, v in enumerate(universe)}
    for v in g.support():
        if v not in uidx:
            raise InfeasibleError(f"support vertex {v} is covered by no family set")

    pairs = [(si, v) for si, lst in enumerate(member_lists) for v in lst]
    npairs = len(pairs)
    nvars = 3 * npairs + len(fam)  # p, n, slack per pair; t per set

    def p_var(k):
        return k

    def n_var(k):
        return npairs + k

    def s_var(k):
        return 2 * npairs + k

    def t_var(si):
        return 3 * npairs + si

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    zero = Fraction(0)
    # reconstruction per universe vertex
    by_vertex: dict[Vertex, list[int]] = {}
    for k, (si, v) in enumerate(pairs):
        by_vertex.setdefault(v, []).append(k)
    for v in universe:
        row = [zero] * nvars
        for k in by_vertex.get(v, []):
            row[p_var(k)] = Fraction(1)
            row[n_var(k)] = Fraction(-1)
        rows.append(row)
        rhs.append(g.at(v))
    # zero integral per set
    for si, lst in enumerate(member_lists):
        row = [zero] * nvars
        for k, (sj, v) in enumerate(pairs):
            if sj == si:
                w = tree.weight(v)
                row[p_var(k)] = w
                row[n_var(k)] = -w
        rows.append(row)
        rhs.append(zero)
    # sup-norm coupling per pair
    measures = [cz_measure(tree, s) for s in fam]
    for k, (si, v) in enumerate(pairs):
        row = [zero] * nvars
        row[p_var(k)] = measures[si]
        row[n_var(k)] = measures[si]
        row[s_var(k)] = Fraction(1)
        row[t_var(si)] = Fraction(-1)
        rows.append(row)
        rhs.append(zero)
    cost = [zero] * nvars
    for si in range(len(fam)):
        cost[t_var(si)] = Fraction(1)

    sol = solve_lp(rows, rhs, cost)
    pieces: list[tuple[Fraction, Atom]] = []
    for si, s in enumerate(fam):
        b = FinFunc(
            {
                v: sol.x[p_var(k)] - sol.x[n_var(k)]
                for k, (sj, v) in enumerate(pairs)
                if sj == si
            }
        )
        t = sol.x[t_var(si)]
        if b:
            atom = Atom(b.scaled(1 / t), s, Exponent.of(None)) if t else None
            if atom is not None:
                pieces.append((t, atom))
    return GaugeResult(sol.objective, tuple(pieces), tuple(fam))


# ---------------------------------------------------------------------------
# duality lower bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualityLower:
    value: Fraction
    witness: FinFunc | None
    skipped: int


@dataclass(frozen=True)
class H1Estimate:
    lower: DualityLower
    upper: GaugeResult

    @property
    def gap_ratio(self) -> float | None:
        if self.lower.value == 0:
            return None
        return float(self.upper.value / self.lower.value)


def h1_duality_lower(
    tree: Tree, g: FinFunc, candidates: Sequence[FinFunc]
) -> DualityLower:
    """max over candidates f of |integral(f g)| / BMO_1(f): every pairing is
    bounded by the atomic norm times the BMO norm, so this quotient bounds
    the atomic norm of g from below, constant-free."""
    from .bmo import bmo_norm

    if integral(tree, g) != 0:
        raise ValueError("duality lower bound needs a zero-integral function")
    best = Fraction(0)
    witness: FinFunc | None = None
    skipped = 0
    for f in candidates:
        norm = bmo_norm(tree, f, 1).value
        if norm.is_zero():
            skipped += 1
            continue
        ratio = abs(pairing(tree, f, g)) / norm.as_fraction()
        if ratio > best:
            best, witness = ratio, f
    return DualityLower(best, witness, skipped)


def h1_estimate(
    tree: Tree, g: FinFunc, family: Sequence[CZSet], candidates: Sequence[FinFunc]
) -> H1Estimate:
    lower = h1_duality_lower(tree, g, candidates)
    upper = h1_lp_gauge(tree, g, family)
    if lower.value > upper.value:
        raise AssertionError(
            f"duality lower bound {lower.value} exceeds the gauge {upper.value}"
        )
    return H1Estimate(lower, upper)
