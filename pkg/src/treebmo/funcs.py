"""Finitely supported rational functions on the tree and their exact integrals,
Lp norms, averages and oscillations.

Scalars are real rationals: every inequality this package checks is about
absolute values, so complex data would only obscure the exactness story.
Norms that are intrinsically algebraic stay exact:

* p = 1 and p = infinity are rational numbers,
* p = 2 is carried as its exact square and compared on squares,
* any other exponent goes through floats and is flagged approximate.

`NormValue` encapsulates that representation and makes comparisons between
exact values decidable (nonnegative quantities compare through their squares).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .sets import TrapezoidLike, set_measure
from .tree import Tree, Vertex


class ZeroMeasureError(ValueError):
    """Raised when averaging over a set of measure zero."""


# ---------------------------------------------------------------------------
# exponents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Exponent:
    """An exponent in [1, infinity]; value None encodes infinity."""

    value: Fraction | None

    def __post_init__(self) -> None:
        if self.value is not None:
            v = Fraction(self.value)
            object.__setattr__(self, "value", v)
            if v < 1:
                raise ValueError(f"exponent must be >= 1, got {v}")

    @classmethod
    def of(cls, p) -> "Exponent":
        if isinstance(p, Exponent):
            return p
        if p is None or p == math.inf or (isinstance(p, str) and p.lower() == "inf"):
            return cls(None)
        if isinstance(p, str):
            return cls(Fraction(p))
        return cls(Fraction(p))

    @property
    def is_inf(self) -> bool:
        return self.value is None

    @property
    def is_one(self) -> bool:
        return self.value == 1

    def integer(self) -> int | None:
        if self.value is not None and self.value.denominator == 1:
            return int(self.value)
        return None

    def conjugate(self) -> "Exponent":
        if self.is_inf:
            return Exponent(Fraction(1))
        if self.value == 1:
            return Exponent(None)
        return Exponent(self.value / (self.value - 1))

    def __float__(self) -> float:
        return math.inf if self.value is None else float(self.value)

    def __str__(self) -> str:
        return "inf" if self.value is None else str(self.value)


# ---------------------------------------------------------------------------
# norm values: exact rationals, exact square roots, or flagged floats
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormValue:
    """A nonnegative norm: radicand ** (1/degree), exact unless flagged."""

    radicand: Fraction
    degree: int = 1
    exact: bool = True
    approx: float = 0.0

    @classmethod
    def exact1(cls, v) -> "NormValue":
        v = Fraction(v)
        if v < 0:
            raise ValueError("norm values are nonnegative")
        return cls(v, 1, True)

    @classmethod
    def exact_sqrt(cls, sq) -> "NormValue":
        sq = Fraction(sq)
        if sq < 0:
            raise ValueError("squared norm must be nonnegative")
        return cls(sq, 2, True)

    @classmethod
    def approximate(cls, x: float) -> "NormValue":
        return cls(Fraction(0), 1, False, float(x))

    @classmethod
    def zero(cls) -> "NormValue":
        return cls.exact1(0)

    @property
    def sq(self) -> Fraction:
        """The exact square; comparisons between exact values go through this."""
        if not self.exact:
            raise ValueError("approximate norm has no exact square")
        return self.radicand if self.degree == 2 else self.radicand * self.radicand

    def as_fraction(self) -> Fraction:
        if not self.exact or self.degree != 1:
            raise ValueError("norm is not an exact rational")
        return self.radicand

    def as_float(self) -> float:
        if not self.exact:
            return self.approx
        x = _frac_to_float(self.radicand)
        return x if self.degree == 1 else math.sqrt(x)

    def is_zero(self) -> bool:
        return self.radicand == 0 if self.exact else self.approx == 0.0

    def scaled(self, c) -> "NormValue":
        c = Fraction(c)
        if c < 0:
            raise ValueError("scale must be nonnegative")
        if not self.exact:
            return NormValue.approximate(self.approx * float(c))
        if self.degree == 1:
            return NormValue.exact1(self.radicand * c)
        return NormValue.exact_sqrt(self.radicand * c * c)

    def _cmp(self, other: "NormValue") -> int:
        if self.exact and other.exact:
            a, b = self.sq, other.sq
        else:
            a, b = self.as_float(), other.as_float()
        return (a > b) - (a < b)

    def __lt__(self, other: "NormValue") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "NormValue") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "NormValue") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "NormValue") -> bool:
        return self._cmp(other) >= 0

    def eq_value(self, other: "NormValue") -> bool:
        return self._cmp(other) == 0

    def __str__(self) -> str:
        if not self.exact:
            return f"~{self.approx!r}"
        if self.degree == 1:
            return str(self.radicand)
        return f"sqrt({self.radicand})"


def _frac_to_float(x: Fraction) -> float:
    try:
        return float(x)
    except OverflowError:
        # fall back through a scaled quotient for extreme numerators
        return math.exp(
            math.log(x.numerator if x.numerator else 1) - math.log(x.denominator)
        )


def sqrt_plus_le(a: Fraction, s: Fraction, c: Fraction) -> bool:
    """Decide sqrt(a) + s <= sqrt(c) exactly, for rationals a, s, c >= 0."""
    rest = c - a - s * s
    if rest < 0:
        return False
    return 4 * s * s * a <= rest * rest


def sqrt_le_two_term(c: Fraction, alpha: Fraction, a: Fraction, beta: Fraction, b: Fraction) -> bool:
    """Decide sqrt(c) <= alpha*sqrt(a) + beta*sqrt(b) exactly (all inputs >= 0)."""
    rest = c - alpha * alpha * a - beta * beta * b
    if rest <= 0:
        return True
    return rest * rest <= 4 * alpha * alpha * beta * beta * a * b


def norm_le_sum(c: NormValue, terms: list[tuple[Fraction, NormValue]]) -> bool:
    """Decide c <= sum(coef * term); exact for up to two exact terms."""
    if c.exact and all(t.exact for _, t in terms):
        if len(terms) == 0:
            return c.sq == 0
        if len(terms) == 1:
            coef, t = terms[0]
            return c.sq <= coef * coef * t.sq
        if len(terms) == 2:
            (al, ta), (be, tb) = terms
            return sqrt_le_two_term(c.sq, Fraction(al), ta.sq, Fraction(be), tb.sq)
    return c.as_float() <= sum(float(k) * t.as_float() for k, t in terms) + 1e-9


# ---------------------------------------------------------------------------
# finitely supported functions
# ---------------------------------------------------------------------------


class FinFunc:
    """Finite association Vertex -> Fraction; zero entries are never stored."""

    __slots__ = ("_data",)

    def __init__(self, data: Mapping[Vertex, Fraction] | Iterable[tuple[Vertex, Fraction]] = ()):
        items = data.items() if isinstance(data, Mapping) else data
        d: dict[Vertex, Fraction] = {}
        for v, val in items:
            val = Fraction(val)
            if val:
                d[v] = d.get(v, Fraction(0)) + val
                if not d[v]:
                    del d[v]
        self._data = d

    @classmethod
    def indicator(cls, *vertices: Vertex) -> "FinFunc":
        return cls({v: Fraction(1) for v in vertices})

    @classmethod
    def zero(cls) -> "FinFunc":
        return cls()

    def at(self, v: Vertex) -> Fraction:
        return self._data.get(v, Fraction(0))

    def support(self) -> list[Vertex]:
        return sorted(self._data, key=lambda v: (v.anchor, v.word))

    def items(self):
        return self._data.items()

    def __len__(self) -> int:
        return len(self._data)

    def __bool__(self) -> bool:
        return bool(self._data)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinFunc) and self._data == other._data

    def __hash__(self):
        raise TypeError("FinFunc is not hashable")

    def __add__(self, other: "FinFunc") -> "FinFunc":
        d = dict(self._data)
        for v, val in other._data.items():
            s = d.get(v, Fraction(0)) + val
            if s:
                d[v] = s
            elif v in d:
                del d[v]
        out = FinFunc.__new__(FinFunc)
        out._data = d
        return out

    def __neg__(self) -> "FinFunc":
        out = FinFunc.__new__(FinFunc)
        out._data = {v: -val for v, val in self._data.items()}
        return out

    def __sub__(self, other: "FinFunc") -> "FinFunc":
        return self + (-other)

    def scaled(self, c) -> "FinFunc":
        c = Fraction(c)
        out = FinFunc.__new__(FinFunc)
        out._data = {} if not c else {v: c * val for v, val in self._data.items()}
        return out

    def __abs__(self) -> "FinFunc":
        out = FinFunc.__new__(FinFunc)
        out._data = {v: abs(val) for v, val in self._data.items()}
        return out

    def pointwise_max(self, other: "FinFunc") -> "FinFunc":
        keys = set(self._data) | set(other._data)
        return FinFunc({v: max(self.at(v), other.at(v)) for v in keys})

    def pointwise_min(self, other: "FinFunc") -> "FinFunc":
        keys = set(self._data) | set(other._data)
        return FinFunc({v: min(self.at(v), other.at(v)) for v in keys})

    def restrict(self, s) -> "FinFunc":
        contains = s.contains if hasattr(s, "contains") else s.__contains__
        return FinFunc({v: val for v, val in self._data.items() if contains(v)})

    def truncate(self, k) -> "FinFunc":
        """Clamp to [-k, k] keeping signs: values above k in modulus become k*sign."""
        k = Fraction(k)
        if k < 0:
            raise ValueError("truncation level must be >= 0")
        return FinFunc(
            {
                v: val if abs(val) <= k else (k if val > 0 else -k)
                for v, val in self._data.items()
            }
        )

    def max_abs(self) -> Fraction:
        return max((abs(v) for v in self._data.values()), default=Fraction(0))

    def __repr__(self) -> str:
        inside = ", ".join(f"{v}: {val}" for v, val in sorted(self._data.items()))
        return f"FinFunc({{{inside}}})"


# ---------------------------------------------------------------------------
# integrals, norms, averages, oscillations
# ---------------------------------------------------------------------------


def integral(tree: Tree, f: FinFunc) -> Fraction:
    """Exact integral against the weighted counting measure."""
    return sum((val * tree.weight(v) for v, val in f.items()), Fraction(0))


def pairing(tree: Tree, f: FinFunc, g: FinFunc) -> Fraction:
    """Exact integral of the product f*g."""
    total = Fraction(0)
    small, big = (f, g) if len(f) <= len(g) else (g, f)
    for v, val in small.items():
        other = big.at(v)
        if other:
            total += val * other * tree.weight(v)
    return total


def lp_power(tree: Tree, f: FinFunc, q: int) -> Fraction:
    """Exact sum of |f|**q against the measure, for integer q >= 1."""
    if q < 1:
        raise ValueError("q must be a positive integer")
    return sum((abs(val) ** q * tree.weight(v) for v, val in f.items()), Fraction(0))


def lp_norm(tree: Tree, f: FinFunc, p) -> NormValue:
    """Lp norm: exact for p in {1, 2, inf}; approximate (rel. err <= 1e-12) otherwise."""
    p = Exponent.of(p)
    if p.is_inf:
        return NormValue.exact1(f.max_abs())
    if p.value == 1:
        return NormValue.exact1(lp_power(tree, f, 1))
    if p.value == 2:
        return NormValue.exact_sqrt(lp_power(tree, f, 2))
    pf = float(p)
    total = sum(
        abs(_frac_to_float(val)) ** pf * _frac_to_float(tree.weight(v))
        for v, val in f.items()
    )
    return NormValue.approximate(total ** (1.0 / pf))


def integral_over(tree: Tree, f: FinFunc, s: TrapezoidLike) -> Fraction:
    return sum(
        (val * tree.weight(v) for v, val in f.items() if s.contains(v)), Fraction(0)
    )


def average(tree: Tree, f: FinFunc, s: TrapezoidLike) -> Fraction:
    """Exact average of f over the set; the set must have positive measure."""
    mu = set_measure(tree, s)
    if mu <= 0:
        raise ZeroMeasureError(f"cannot average over a set of measure {mu}")
    return integral_over(tree, f, s) / mu


def oscillation(tree: Tree, f: FinFunc, s: TrapezoidLike, q) -> NormValue:
    """q-oscillation of f over s: the Lq mean of |f - mean(f)| on s.

    Only the support of f is visited; the off-support members of s enter
    through their total measure, since f vanishes there.
    """
    q = Exponent.of(q)
    if q.is_inf:
        raise ValueError("oscillation requires a finite exponent")
    mu = set_measure(tree, s)
    if mu <= 0:
        raise ZeroMeasureError("oscillation over a set of measure zero")
    inside = [(v, val) for v, val in f.items() if s.contains(v)]
    w_in = sum((tree.weight(v) for v, _ in inside), Fraction(0))
    avg = sum((val * tree.weight(v) for v, val in inside), Fraction(0)) / mu
    if q.value == 1:
        num = sum((abs(val - avg) * tree.weight(v) for v, val in inside), Fraction(0))
        num += abs(avg) * (mu - w_in)
        return NormValue.exact1(num / mu)
    if q.value == 2:
        num = sum(
            ((val - avg) ** 2 * tree.weight(v) for v, val in inside), Fraction(0)
        )
        num += avg**2 * (mu - w_in)
        return NormValue.exact_sqrt(num / mu)
    qf = float(q)
    avg_f = _frac_to_float(avg)
    num = sum(
        abs(_frac_to_float(val) - avg_f) ** qf * _frac_to_float(tree.weight(v))
        for v, val in inside
    )
    num += abs(avg_f) ** qf * _frac_to_float(mu - w_in)
    return NormValue.approximate((num / _frac_to_float(mu)) ** (1.0 / qf))


def oscillation_bound_holds(
    tree: Tree, f: FinFunc, q, mu: Fraction, best: NormValue
) -> bool:
    """True if the a-priori bound on any q-oscillation over a set of measure
    >= mu already fails to exceed `best`:

        oscillation <= (||f||_q^q / mu)^(1/q) + ||f||_1 / mu

    (triangle inequality against the zero function plus the mean bound).
    Used to certify enumeration cutoffs; exact for q in {1, 2}.
    """
    q = Exponent.of(q)
    l1 = lp_power(tree, f, 1)
    if q.value == 1:
        if not best.exact:
            return float(2 * l1 / mu) <= best.as_float()
        return NormValue.exact1(2 * l1 / mu) <= best
    if q.value == 2 and best.exact:
        a = lp_power(tree, f, 2) / mu
        return sqrt_plus_le(a, l1 / mu, best.sq)
    qf = float(q)
    lq = sum(
        abs(_frac_to_float(val)) ** qf * _frac_to_float(tree.weight(v))
        for v, val in f.items()
    )
    bound = (lq / _frac_to_float(mu)) ** (1.0 / qf) + _frac_to_float(l1 / mu)
    return bound <= best.as_float()
