"""Maximal operators with certified finite enumeration.

Two suprema over infinite families are computed here:

* the Hardy-Littlewood-type maximal function: suprema of plain averages
  over admissible trapezoids containing a point,
* the sharp maximal function: suprema of q-oscillations over CZ sets
  containing a point.

Both enumerate roots along the father chain of the point and stop once an
a-priori bound shows that any set rooted higher cannot beat the current
best.  The stopping rule is part of the public contract: every result
carries a certificate stating the measure threshold past which candidates
were discarded and the inequality that justifies it.  The test suite
replays these computations against brute-force oracles with no cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .funcs import (
    Exponent,
    FinFunc,
    NormValue,
    _frac_to_float,
    lp_power,
    oscillation,
    oscillation_bound_holds,
)
from .sets import (
    AdmissibleTrapezoid,
    CZSet,
    EnumerationError,
    feasible_heights,
    member_count,
    members,
    witness_key,
)
from .tree import Tree, Vertex, Window, ancestor, level


@dataclass(frozen=True)
class CutoffCertificate:
    """Why stopping the enumeration lost nothing.

    Every candidate set that was not evaluated has measure >= measure_bound,
    and by `rule` its value is at most bound_at_cutoff, which does not beat
    the reported value.  measure_bound None means the enumeration was
    trivially complete (zero function, empty family).
    """

    rule: str
    measure_bound: Fraction | None
    bound_at_cutoff: Fraction | float | None
    sets_evaluated: int


@dataclass(frozen=True)
class MaximalResult:
    value: NormValue
    witness: AdmissibleTrapezoid | CZSet | None
    certificate: CutoffCertificate


def _trivial_certificate(rule: str, n: int = 0) -> CutoffCertificate:
    return CutoffCertificate(rule, None, None, n)


# ---------------------------------------------------------------------------
# Hardy-Littlewood-type maximal function over admissible trapezoids
# ---------------------------------------------------------------------------


def hl_maximal(tree: Tree, phi: FinFunc, x: Vertex) -> MaximalResult:
    """Exact sup of averages of phi over admissible trapezoids containing x.

    phi must be nonnegative.  Roots climb the father chain of x; at height
    t the feasible heights are the integers in (t/2, t], and the chain
    stops once the smallest measure at that height already caps averages
    below the running best.
    """
    for _, val in phi.items():
        if val < 0:
            raise ValueError("hl_maximal requires a nonnegative function")
    if not phi:
        return MaximalResult(
            NormValue.zero(), None, _trivial_certificate("zero function")
        )
    l1 = lp_power(tree, phi, 1)
    best = phi.at(x)
    witness: AdmissibleTrapezoid | CZSet = AdmissibleTrapezoid(x, 1, degenerate=True)
    best_key = witness_key(tree, witness)
    evaluated = 1
    masses = [(val * tree.weight(v), v) for v, val in phi.items()]
    t = 0
    while True:
        t += 1
        h_min = t // 2 + 1
        mu_min = h_min * tree.level_weight(level(x) + t)
        if best > 0 and mu_min * best > l1:
            certificate = CutoffCertificate(
                "average <= total_mass / measure",
                mu_min,
                l1 / mu_min,
                evaluated,
            )
            return MaximalResult(NormValue.exact1(best), witness, certificate)
        root = ancestor(x, t)
        root_level = level(root)
        depths = []
        for mass, v in masses:
            d = root_level - level(v)
            if d >= 0 and ancestor(v, d) == root:
                depths.append((d, mass))
        for h in range(t // 2 + 1, t + 1):
            total = sum((m for d, m in depths if h <= d < 2 * h), Fraction(0))
            mu = h * tree.level_weight(root_level)
            avg = total / mu
            evaluated += 1
            cand = AdmissibleTrapezoid(root, h)
            if avg > best:
                best, witness = avg, cand
                best_key = witness_key(tree, cand)
            elif avg == best:
                key = witness_key(tree, cand)
                if key < best_key:
                    witness, best_key = cand, key


# ---------------------------------------------------------------------------
# level sets of the maximal function, as exact unions of trapezoids
# ---------------------------------------------------------------------------


def threshold_trapezoids(
    tree: Tree, phi: FinFunc, lam: Fraction
) -> list[AdmissibleTrapezoid]:
    """All non-degenerate admissible trapezoids whose phi-average exceeds lam.

    lam must be positive; any qualifying trapezoid meets the support of phi
    and has measure < total_mass / lam, so the family is finite and the
    support-anchored climb below is exhaustive.
    """
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("threshold must be positive")
    l1 = lp_power(tree, phi, 1)
    supp = phi.support()
    masses = [(val * tree.weight(v), v) for v, val in phi.items()]
    out: list[AdmissibleTrapezoid] = []
    seen: set[tuple[Vertex, int]] = set()
    for u in supp:
        t = 0
        while True:
            t += 1
            h_min = t // 2 + 1
            mu_min = h_min * tree.level_weight(level(u) + t)
            if mu_min * lam >= l1:
                break
            root = ancestor(u, t)
            root_level = level(root)
            depths = []
            for mass, v in masses:
                d = root_level - level(v)
                if d >= 0 and ancestor(v, d) == root:
                    depths.append((d, mass))
            for h in range(t // 2 + 1, t + 1):
                if (root, h) in seen:
                    continue
                seen.add((root, h))
                total = sum((m for d, m in depths if h <= d < 2 * h), Fraction(0))
                if total > lam * h * tree.level_weight(root_level):
                    out.append(AdmissibleTrapezoid(root, h))
    out.sort(key=lambda r: witness_key(tree, r))
    return out


def maximal_level_set(
    tree: Tree,
    phi: FinFunc,
    lam: Fraction,
    max_vertices: int = 2_000_000,
) -> tuple[frozenset[Vertex], CutoffCertificate]:
    """The exact set {x : hl maximal of phi at x > lam}, as explicit vertices.

    A point exceeds the threshold iff its own value does (degenerate
    trapezoid) or it belongs to some trapezoid whose average does, so the
    level set is the union of the threshold trapezoids plus the vertices
    where phi itself exceeds lam.
    """
    lam = Fraction(lam)
    traps = threshold_trapezoids(tree, phi, lam)
    predicted = sum(member_count(tree, r) for r in traps)
    if predicted > max_vertices:
        raise EnumerationError(
            f"level set spans about {predicted} vertices, over the budget {max_vertices}"
        )
    omega = {v for v, val in phi.items() if val > lam}
    for r in traps:
        omega.update(members(tree, r))
    l1 = lp_power(tree, phi, 1)
    certificate = CutoffCertificate(
        "average <= total_mass / measure",
        l1 / lam,
        lam,
        len(traps),
    )
    return frozenset(omega), certificate


# ---------------------------------------------------------------------------
# sharp maximal function over CZ sets
# ---------------------------------------------------------------------------


def _cz_mu_min(tree: Tree, x_level: int, t: int) -> Fraction:
    h0 = (t + 4) // 4
    return (4 * h0 - (h0 + 1) // 2) * tree.level_weight(x_level + t)


def _sup_over_cz(
    tree: Tree,
    f: FinFunc,
    q,
    x: Vertex,
    set_value: Callable[[CZSet], NormValue],
    rule: str,
) -> MaximalResult:
    q = Exponent.of(q)
    if q.is_inf:
        raise ValueError("sharp maximal requires a finite exponent")
    if not f:
        return MaximalResult(
            NormValue.zero(),
            CZSet(x, 1, degenerate=True),
            _trivial_certificate("zero function", 1),
        )
    best = NormValue.zero()
    witness: CZSet = CZSet(x, 1, degenerate=True)
    best_key = witness_key(tree, witness)
    evaluated = 1
    x_level = level(x)
    t = 0
    while True:
        t += 1
        mu_min = _cz_mu_min(tree, x_level, t)
        if not best.is_zero() and oscillation_bound_holds(tree, f, q, mu_min, best):
            certificate = CutoffCertificate(rule, mu_min, None, evaluated)
            return MaximalResult(best, witness, certificate)
        root = ancestor(x, t)
        for h in feasible_heights(t):
            cand = CZSet(root, h)
            val = set_value(cand)
            evaluated += 1
            if val > best:
                best, witness = val, cand
                best_key = witness_key(tree, cand)
            elif val.eq_value(best):
                key = witness_key(tree, cand)
                if key < best_key:
                    witness, best_key = cand, key


SHARP_RULE = "oscillation <= (||f||_q^q/measure)^(1/q) + ||f||_1/measure"


def sharp_maximal(tree: Tree, f: FinFunc, q, x: Vertex) -> MaximalResult:
    """Sup of q-oscillations of f over CZ sets containing x; exact for q in {1, 2}."""
    return _sup_over_cz(
        tree, f, q, x, lambda s: oscillation(tree, f, s, q), SHARP_RULE
    )


def centered_sharp_maximal(tree: Tree, f: FinFunc, q, x: Vertex) -> MaximalResult:
    """Same supremum with the mean replaced by the best constant on each set.

    The minimizing constant is the weighted median for q = 1 and the mean
    for q = 2 (both exact); other exponents use a golden-section search.
    Always between half of the sharp maximal function and the sharp
    maximal function itself.
    """
    return _sup_over_cz(
        tree,
        f,
        q,
        x,
        lambda s: best_constant_oscillation(tree, f, s, q),
        SHARP_RULE,
    )


def best_constant_oscillation(tree: Tree, f: FinFunc, s, q) -> NormValue:
    """inf over constants c of the Lq mean of |f - c| on s."""
    from .sets import set_measure

    q = Exponent.of(q)
    mu = set_measure(tree, s)
    inside = [(v, val) for v, val in f.items() if s.contains(v)]
    w_in = sum((tree.weight(v) for v, _ in inside), Fraction(0))
    if q.value == 2:
        return oscillation(tree, f, s, q)
    pairs = [(val, tree.weight(v)) for v, val in inside]
    if mu - w_in > 0:
        pairs.append((Fraction(0), mu - w_in))
    if q.value == 1:
        c = _weighted_median(pairs)
        num = sum((abs(val - c) * w for val, w in pairs), Fraction(0))
        return NormValue.exact1(num / mu)
    qf = float(q)
    vals = sorted(float(val) for val, _ in pairs)
    fpairs = [(_frac_to_float(val), _frac_to_float(w)) for val, w in pairs]

    def objective(c: float) -> float:
        return sum(abs(val - c) ** qf * w for val, w in fpairs)

    lo, hi = vals[0], vals[-1]
    golden = (5**0.5 - 1) / 2
    a, b = lo, hi
    c1 = b - golden * (b - a)
    c2 = a + golden * (b - a)
    f1, f2 = objective(c1), objective(c2)
    while b - a > 1e-10 * max(1.0, abs(lo), abs(hi)):
        if f1 <= f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - golden * (b - a)
            f1 = objective(c1)
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + golden * (b - a)
            f2 = objective(c2)
    return NormValue.approximate((objective((a + b) / 2) / _frac_to_float(mu)) ** (1.0 / qf))


def _weighted_median(pairs: list[tuple[Fraction, Fraction]]) -> Fraction:
    """A minimizer of sum w*|val - c|: the smallest value where the cumulative
    weight reaches half the total."""
    pairs = sorted(pairs)
    total = sum((w for _, w in pairs), Fraction(0))
    acc = Fraction(0)
    for val, w in pairs:
        acc += w
        if 2 * acc >= total:
            return val
    return pairs[-1][0]


def sharp_field(
    tree: Tree,
    f: FinFunc,
    q,
    where: Window | Iterable[Vertex],
    parallel: bool = False,
) -> dict[Vertex, MaximalResult]:
    """Pointwise sharp maximal function on a window or explicit vertex list.

    Points are independent, so evaluation order cannot matter; the parallel
    path exists to let the tests assert exactly that.
    """
    points = where.members(tree) if isinstance(where, Window) else list(where)
    if parallel:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=4) as pool:
            results = list(pool.map(lambda v: sharp_maximal(tree, f, q, v), points))
        return dict(zip(points, results))
    return {v: sharp_maximal(tree, f, q, v) for v in points}
