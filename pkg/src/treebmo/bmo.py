"""BMO norms over the CZ family, the duality pairing bound, and the
Hörmander constant of finitely supported kernels.

The BMO_q norm of a finitely supported function is an exact supremum: sets
disjoint from the support oscillate by zero, so candidates are streamed
along the father chains of the support vertices and each chain stops once
the a-priori oscillation bound at its minimal remaining measure cannot
beat the running best.  Functions represent their BMO class directly; the
quotient by constants shows up only as tested shift invariance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .funcs import (
    Exponent,
    FinFunc,
    NormValue,
    oscillation,
    oscillation_bound_holds,
    pairing,
)
from .maximal import CutoffCertificate, SHARP_RULE, _cz_mu_min
from .sets import (
    CZSet,
    enlargement_members,
    feasible_heights,
    member_count,
    members,
    witness_key,
)
from .tree import Tree, Vertex, Window, ancestor, level


@dataclass(frozen=True)
class BmoReport:
    value: NormValue
    q: Exponent
    witness: CZSet
    certificate: CutoffCertificate
    sets_evaluated: int


def bmo_norm(tree: Tree, f: FinFunc, q) -> BmoReport:
    """Exact supremum of q-oscillations of f over every CZ set.

    Exact for q in {1, 2}; other exponents run in approximate mode.  The
    certificate records the measure floor past which no set was evaluated
    together with the bound that makes the truncation lossless.
    """
    q = Exponent.of(q)
    if q.is_inf:
        raise ValueError("bmo_norm requires a finite exponent")
    if not f:
        witness = CZSet(Vertex(0, ()), 1, degenerate=True)
        return BmoReport(
            NormValue.zero(),
            q,
            witness,
            CutoffCertificate("zero function", None, None, 0),
            0,
        )
    supp = f.support()
    best = NormValue.zero()
    witness = CZSet(supp[0], 1, degenerate=True)
    best_key = witness_key(tree, witness)
    evaluated = 1
    seen: set[tuple[Vertex, int]] = set()
    alive = {u: None for u in supp}
    death_floor: Fraction | None = None
    t = 0
    while alive:
        t += 1
        for u in list(alive):
            mu_min = _cz_mu_min(tree, level(u), t)
            if not best.is_zero() and oscillation_bound_holds(tree, f, q, mu_min, best):
                death_floor = mu_min if death_floor is None else min(death_floor, mu_min)
                del alive[u]
                continue
            root = ancestor(u, t)
            for h in feasible_heights(t):
                if (root, h) in seen:
                    continue
                seen.add((root, h))
                cand = CZSet(root, h)
                val = oscillation(tree, f, cand, q)
                evaluated += 1
                if val > best:
                    best, witness = val, cand
                    best_key = witness_key(tree, cand)
                elif val.eq_value(best):
                    key = witness_key(tree, cand)
                    if key < best_key:
                        witness, best_key = cand, key
    certificate = CutoffCertificate(SHARP_RULE, death_floor, None, evaluated)
    return BmoReport(best, q, witness, certificate, evaluated)


def atom_pairing_bound_check(
    tree: Tree, f: FinFunc, a: FinFunc, s: CZSet
) -> tuple[bool, Fraction]:
    """Check |integral(f*a)| <= BMO_1 norm of f for a (1, inf)-atom a on s.

    Returns the truth value and the exact slack.  The atom is validated
    first; an invalid atom is an input error, not a counterexample.
    """
    from .hardy import is_atom

    ok, why = is_atom(tree, a, s, Exponent.of(None))
    if not ok:
        raise ValueError(f"not a (1,inf)-atom: {why}")
    lhs = abs(pairing(tree, f, a))
    norm = bmo_norm(tree, f, 1).value.as_fraction()
    return lhs <= norm, norm - lhs


# ---------------------------------------------------------------------------
# Hörmander condition for finitely supported kernels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelWindow:
    """A kernel K(y, x) with finite support, valid on a declared window."""

    entries: tuple[tuple[Vertex, Vertex, Fraction], ...]
    window: Window

    @classmethod
    def from_mapping(cls, mapping, window: Window) -> "KernelWindow":
        items = tuple(
            (y, x, Fraction(v)) for (y, x), v in sorted(mapping.items()) if v
        )
        return cls(items, window)

    def rows(self) -> dict[Vertex, dict[Vertex, Fraction]]:
        out: dict[Vertex, dict[Vertex, Fraction]] = {}
        for y, x, v in self.entries:
            out.setdefault(y, {})[x] = v
        return out

    def x_support(self) -> set[Vertex]:
        return {x for _, x, _ in self.entries}


class DomainError(ValueError):
    """Raised when a computation would need vertices beyond a declared window."""


@dataclass(frozen=True)
class HormanderResult:
    value: Fraction
    witness_set: CZSet | None
    witness_pair: tuple[Vertex, Vertex] | None
    sets_checked: int
    note: str = "complement restricted to the kernel's declared support"


def hormander_constant(
    tree: Tree, kernel: KernelWindow, family: Sequence[CZSet]
) -> HormanderResult:
    """max over the family of sup_{y,z in S} integral over the complement of
    the enlargement of |K(y, .) - K(z, .)|.

    Exact whenever the kernel is genuinely supported where declared: off
    the declared x-support the integrand vanishes, so the complement
    integral is a finite sum.  Every set, its enlargement, and the kernel
    support must fit the declared window.
    """
    win = kernel.window
    for x in kernel.x_support():
        if not win.contains(x):
            raise DomainError(f"kernel x-support vertex {x} escapes the window")
    rows = kernel.rows()
    best = Fraction(0)
    best_set: CZSet | None = None
    best_pair: tuple[Vertex, Vertex] | None = None
    for s in family:
        if member_count(tree, s) > 200_000:
            raise DomainError(f"{s} is too large to scan pairwise")
        mem = sorted(members(tree, s), key=lambda v: (v.anchor, v.word))
        for v in mem:
            if not win.contains(v):
                raise DomainError(f"{s} escapes the declared window at {v}")
        enlarged = set(enlargement_members(tree, s))
        for v in enlarged:
            if not win.contains(v):
                raise DomainError(f"enlargement of {s} escapes the declared window")
        for i, y in enumerate(mem):
            row_y = rows.get(y, {})
            for z in mem[i + 1 :]:
                row_z = rows.get(z, {})
                total = Fraction(0)
                for x in set(row_y) | set(row_z):
                    if x in enlarged:
                        continue
                    diff = row_y.get(x, Fraction(0)) - row_z.get(x, Fraction(0))
                    if diff:
                        total += abs(diff) * tree.weight(x)
                if total > best:
                    best, best_set, best_pair = total, s, (y, z)
    return HormanderResult(best, best_set, best_pair, len(family))
