from fractions import Fraction

import pytest

import treebmo.bruteforce as bf
from treebmo.funcs import FinFunc, average, lp_power, oscillation
from treebmo.maximal import (
    best_constant_oscillation,
    centered_sharp_maximal,
    hl_maximal,
    maximal_level_set,
    sharp_field,
    sharp_maximal,
    threshold_trapezoids,
)
from treebmo.randgen import nonzero_function
from treebmo.sets import AdmissibleTrapezoid, CZSet, EnumerationError, members
from treebmo.tree import Tree, Vertex, Window

T2 = Tree(2)
O = Vertex(0, ())
U = Vertex(0, (1,))
V = Vertex(-1, ())
CHI_U = FinFunc.indicator(U)
WINDOW = Window(Vertex(2, ()), 4)


class TestHLMaximal:
    def test_at_support_vertex(self):
        r = hl_maximal(T2, CHI_U, U)
        assert r.value.as_fraction() == 1
        assert r.witness == AdmissibleTrapezoid(U, 1, degenerate=True)

    def test_at_origin(self):
        r = hl_maximal(T2, CHI_U, O)
        assert r.value.as_fraction() == Fraction(1, 16)
        assert r.witness == AdmissibleTrapezoid(Vertex(2, ()), 2)

    def test_zero_function(self):
        r = hl_maximal(T2, FinFunc(), O)
        assert r.value.is_zero() and r.witness is None

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            hl_maximal(T2, FinFunc({U: Fraction(-1)}), O)

    def test_certificate_is_sound(self):
        phi = FinFunc({U: Fraction(2), V: Fraction(1, 3)})
        r = hl_maximal(T2, phi, O)
        cert = r.certificate
        assert cert.measure_bound is not None
        # any set at or past the bound is dominated by mass/measure
        assert lp_power(T2, phi, 1) / cert.measure_bound < r.value.as_fraction()

    def test_dominates_averages(self):
        for i in range(10):
            phi = abs(nonzero_function(T2, WINDOW, 13, "sparse", i))
            for x in [U, O, Vertex(1, (1,))]:
                best = hl_maximal(T2, phi, x).value.as_fraction()
                for r in bf.trapezoids_containing(T2, x, Fraction(64)):
                    assert average(T2, phi, r) <= best

    def test_matches_oracle(self):
        for i in range(12):
            phi = abs(nonzero_function(T2, WINDOW, 17, "sparse", i))
            for x in [U, O, Vertex(2, (1, 0, 1)), Vertex(-2, ())]:
                assert (
                    hl_maximal(T2, phi, x).value.as_fraction()
                    == bf.hl_maximal_oracle(T2, phi, x)
                )


class TestLevelSet:
    def test_worked_example(self):
        omega, cert = maximal_level_set(T2, CHI_U, Fraction(1, 4))
        assert omega == frozenset({U, V})
        assert cert.measure_bound == lp_power(T2, CHI_U, 1) / Fraction(1, 4)

    def test_empty_above_sup(self):
        omega, _ = maximal_level_set(T2, CHI_U, Fraction(2))
        assert omega == frozenset()

    def test_threshold_must_be_positive(self):
        with pytest.raises(ValueError):
            maximal_level_set(T2, CHI_U, Fraction(0))

    def test_budget_guard(self):
        with pytest.raises(EnumerationError):
            maximal_level_set(T2, CHI_U, Fraction(1, 2**40), max_vertices=1000)

    @pytest.mark.parametrize("lam", [Fraction(1, 4), Fraction(1, 10), Fraction(3, 4)])
    def test_matches_pointwise_oracle(self, lam):
        phi = FinFunc({U: Fraction(1), Vertex(1, (1,)): Fraction(1, 2)})
        omega, _ = maximal_level_set(T2, phi, lam)
        for x in Window(Vertex(3, ()), 6).members(T2):
            assert (bf.hl_maximal_oracle(T2, phi, x) > lam) == (x in omega)
        # and every member of every threshold trapezoid is in the set
        for r in threshold_trapezoids(T2, phi, lam):
            assert average(T2, phi, r) > lam
            assert all(v in omega for v in members(T2, r))


class TestSharpMaximal:
    def test_worked_example_at_support(self):
        r = sharp_maximal(T2, CHI_U, 1, U)
        assert r.value.as_fraction() == Fraction(5, 18)
        assert r.witness == CZSet(O, 1)

    def test_same_value_at_sibling(self):
        r = sharp_maximal(T2, CHI_U, 1, V)
        assert r.value.as_fraction() == Fraction(5, 18)
        assert r.witness == CZSet(O, 1)

    def test_zero_function(self):
        assert sharp_maximal(T2, FinFunc(), 1, O).value.is_zero()

    def test_witness_attains_value(self):
        for i in range(8):
            f = nonzero_function(T2, WINDOW, 19, "sparse", i)
            for q in (1, 2):
                r = sharp_maximal(T2, f, q, U)
                assert oscillation(T2, f, r.witness, q).eq_value(r.value)

    def test_matches_oracle(self):
        for i in range(8):
            f = nonzero_function(T2, WINDOW, 23, "sparse", i)
            for x in [U, O, Vertex(2, (1, 1))]:
                for q in (1, 2):
                    got = sharp_maximal(T2, f, q, x).value
                    want = bf.sharp_maximal_oracle(T2, f, q, x)
                    assert got.eq_value(want)

    def test_approximate_exponent_close_to_exact_neighbours(self):
        f = FinFunc({U: Fraction(2), V: Fraction(-1)})
        v32 = sharp_maximal(T2, f, Fraction(3, 2), U).value
        v1 = sharp_maximal(T2, f, 1, U).value
        v2 = sharp_maximal(T2, f, 2, U).value
        assert not v32.exact
        assert v1.as_float() - 1e-9 <= v32.as_float() <= v2.as_float() + 1e-9


class TestCenteredSharp:
    def test_bracket(self):
        for i in range(8):
            f = nonzero_function(T2, WINDOW, 29, "sparse", i)
            for x in [U, O]:
                for q in (1, 2):
                    s = sharp_maximal(T2, f, q, x).value
                    c = centered_sharp_maximal(T2, f, q, x).value
                    assert s.scaled(Fraction(1, 2)) <= c
                    assert c <= s

    def test_q2_centered_equals_sharp(self):
        f = FinFunc({U: Fraction(3), V: Fraction(-1)})
        assert best_constant_oscillation(T2, f, CZSet(O, 1), 2).eq_value(
            oscillation(T2, f, CZSet(O, 1), 2)
        )

    def test_q1_median_beats_mean_sometimes(self):
        f = CHI_U
        s = CZSet(O, 1)
        med = best_constant_oscillation(T2, f, s, 1).as_fraction()
        mean = oscillation(T2, f, s, 1).as_fraction()
        assert med == Fraction(1, 6) < mean


class TestSharpField:
    def test_constant_zero_field(self):
        field = sharp_field(T2, FinFunc(), 1, WINDOW)
        assert all(r.value.is_zero() for r in field.values())

    def test_agrees_with_pointwise(self):
        f = nonzero_function(T2, WINDOW, 31, "sparse", 0)
        field = sharp_field(T2, f, 1, WINDOW)
        for x in list(field)[:5]:
            assert field[x].value.eq_value(sharp_maximal(T2, f, 1, x).value)

    def test_parallel_matches_sequential(self):
        f = nonzero_function(T2, WINDOW, 37, "sparse", 1)
        seq = sharp_field(T2, f, 1, WINDOW)
        par = sharp_field(T2, f, 1, WINDOW, parallel=True)
        assert set(seq) == set(par)
        for x in seq:
            assert seq[x].value.eq_value(par[x].value)
            assert seq[x].witness == par[x].witness

    def test_max_of_field_is_witness_oscillation(self):
        f = CHI_U
        field = sharp_field(T2, f, 1, [U, V, O])
        best = max(r.value for r in field.values())
        assert best.as_fraction() == Fraction(5, 18)
