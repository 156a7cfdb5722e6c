"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Everything exact is asserted with zero tolerance; the only floats
live in the q = 3/2 approximate path of criterion 12 and the three-term
comparison of criterion 6(iv) at q = 2, both at the stated 1e-9.
"""

import random
from fractions import Fraction

import pytest

import treebmo.bruteforce as bf
from treebmo.bmo import bmo_norm
from treebmo.funcs import (
    FinFunc,
    integral,
    lp_norm,
    lp_power,
    norm_le_sum,
    pairing,
)
from treebmo.hardy import (
    _ceil_log2,
    good_bad_split,
    h1_duality_lower,
    h1_lp_gauge,
    normalize_to_atom,
)
from treebmo.maximal import (
    centered_sharp_maximal,
    hl_maximal,
    sharp_field,
    sharp_maximal,
)
from treebmo.randgen import nonzero_function
from treebmo.sets import (
    AdmissibleTrapezoid,
    CZSet,
    admissible_measure,
    covering_family,
    covering_index,
    cz_measure,
    envelope,
    enlargement_depth_range,
    enlargement_measure,
    members,
    smallest_enclosing_cz,
)
from treebmo.tree import Tree, Vertex, Window, distance, level

T2 = Tree(2)
T3 = Tree(3)
O = Vertex(0, ())
U = Vertex(0, (1,))
V = Vertex(-1, ())


def report(num: int, text: str) -> None:
    print(f"criterion {num:2d} PASS: {text}")


_count_cache: dict[tuple[int, int], int] = {}


def level_count(tree: Tree, depth: int) -> int:
    """Enumerated count of canonical descendants at a depth; root-invariant
    (verified below), so it is cached per (m, depth)."""
    key = (tree.m, depth)
    if key not in _count_cache:
        _count_cache[key] = bf.descendant_count(tree, Vertex(1, ()), depth)
    return _count_cache[key]


def enumerated_mass(tree: Tree, s) -> Fraction:
    lo, hi = s.depth_range()
    root_level = level(s.root)
    return sum(
        (level_count(tree, d) * tree.level_weight(root_level - d) for d in range(lo, hi + 1)),
        Fraction(0),
    )


class TestCriterion1:
    def test_count_oracle_is_root_invariant_and_distinct(self):
        for tree in (T2, T3):
            for root in [O, tree.vertex(0, (1,)), Vertex(3, ()), tree.vertex(1, (1, 1))]:
                for d in range(6):
                    listed = list(tree.descendants_at_depth(root, d))
                    assert len(set(listed)) == len(listed)
                    assert bf.descendant_count(tree, root, d) == len(listed)
            for d in range(6, 8):
                listed = list(tree.descendants_at_depth(Vertex(1, ()), d))
                assert len(set(listed)) == len(listed) == level_count(tree, d)

    def test_trapezoid_measure_identity(self):
        checked = 0
        for tree in (T2, T3):
            for root in Window(Vertex(2, ()), 4).members(tree):
                for h in range(1, 9):
                    r = AdmissibleTrapezoid(root, h)
                    assert enumerated_mass(tree, r) == admissible_measure(tree, r)
                    checked += 1
            deg = AdmissibleTrapezoid(Vertex(2, ()), 1, degenerate=True)
            assert admissible_measure(tree, deg) == tree.weight(Vertex(2, ()))
        report(1, f"enumerated trapezoid mass = h * width exactly ({checked} trapezoids, m in {{2,3}}, h <= 8)")


class TestCriterion2:
    def test_ball_formula(self):
        checked = 0
        for tree in (T2, T3):
            centers = [O, tree.vertex(0, (1,)), Vertex(2, ()), tree.vertex(-1)]
            for v in centers:
                for r in range(1, 7):
                    assert tree.ball_measure_enumerated(v, r) == tree.ball_measure_closed(v, r)
                    checked += 1
        report(2, f"ball measure matches the closed form exactly ({checked} balls, r in 1..6)")


class TestCriterion3:
    def test_envelope_measure_bound_and_max_ratio(self):
        for tree in (T2, T3):
            for root in Window(Vertex(2, ()), 4).members(tree):
                for h in range(1, 9):
                    r = AdmissibleTrapezoid(root, h)
                    assert cz_measure(tree, envelope(r)) <= 4 * admissible_measure(tree, r)
        ratios = [Fraction(4 * h - (h + 1) // 2, h) for h in range(1, 65)]
        assert max(ratios) == Fraction(7, 2)
        assert all(r <= 4 for r in ratios)

    def test_envelope_inside_ball_of_every_member(self):
        # exhaustive in z for m = 2, h <= 4; the farthest member from z sits at
        # depth 4h-1 in a different branch of the root, so max_y d(y, z) is
        # depth(z) + 4h - 1, spot-verified against the metric below
        for h in range(1, 5):
            s = CZSet(O, h)
            lo, hi = s.depth_range()
            for d in range(lo, hi + 1):
                for z in T2.descendants_at_depth(O, d):
                    assert d + hi <= 8 * h
        for h in (1, 2):
            s = CZSet(O, h)
            mem = list(members(T2, s))
            for z in mem[:: max(1, len(mem) // 40)]:
                assert max(distance(y, z) for y in mem) == (level(O) - level(z)) + s.depth_range()[1]
        report(3, "envelope measure <= 4x trapezoid (max ratio 7/2 at h<=64); envelope inside B(z, 8h) for all z (m=2, h<=4)")


class TestCriterion4:
    def test_enlargement_oracle_then_frozen_ratio(self):
        # oracle first: the depth band equals the BFS distance scan wherever
        # the scan is materializable, plus boundary distances at reach 1
        for tree, hs in ((T2, (1, 2, 3, 4)), (T3, (1, 2))):
            for h in hs:
                s = CZSet(O, h)
                lo, hi = enlargement_depth_range(s)
                band = {
                    v
                    for d in range(lo, hi + 1)
                    for v in tree.descendants_at_depth(O, d)
                }
                assert band == bf.enlargement_by_bfs(tree, s)
        for tree, h in ((T2, 5), (T2, 8), (T3, 5)):
            s = CZSet(O, h)
            lo, hi = enlargement_depth_range(s)
            for v in tree.descendants_at_depth(O, lo):
                assert bf.distance_to_set(tree, v, s) == 1
            for v in tree.descendants_at_depth(O, lo - 1):
                assert bf.distance_to_set(tree, v, s) > 1
            cone = next(tree.descendants_at_depth(O, hi - 2))
            assert all(bf.distance_to_set(tree, v, s) == 1 for v in tree.descendants_at_depth(cone, 2))
            assert all(bf.distance_to_set(tree, v, s) > 1 for v in tree.descendants_at_depth(cone, 3))
        # then the frozen constant over the stated family
        for tree in (T2, T3):
            for h in range(1, 9):
                for root in (O, Vertex(2, ()), tree.vertex(0, (1,))):
                    s = CZSet(root, h)
                    assert enlargement_measure(tree, s) <= 2 * cz_measure(tree, s)
        report(4, "enlargement = distance scan (oracle range) and measure ratio <= 2 frozen (m in {2,3}, h <= 8)")


class TestCriterion5:
    def test_covering_nesting_and_index(self):
        for n in range(21):
            a, b = covering_family(n), covering_family(n + 1)
            lo_a, hi_a = a.depth_range()
            lo_b, hi_b = b.depth_range()
            # membership is below-ness plus the depth band; the root climbs one
            # level, so nesting is exactly this endpoint inclusion
            assert lo_b <= lo_a + 1 and hi_a + 1 <= hi_b
        for n in (0, 1, 2):
            big = covering_family(n + 1)
            assert all(big.contains(x) for x in members(T2, covering_family(n)))
        checked = 0
        for x in Window(Vertex(3, ()), 6).members(T2):
            n = covering_index(x)
            assert covering_family(n).contains(x)
            checked += 1
        report(5, f"covering family nested (n <= 20) and index verified on a depth-6 window ({checked} vertices)")


def _sharp_property_block(tree, window, q, seed, count):
    rng = random.Random(f"acc6:{tree.m}:{q}:{seed}")
    half = Fraction(1, 2)
    for i in range(count):
        f = nonzero_function(tree, window, seed, "sparse", 2 * i)
        g = nonzero_function(tree, window, seed, "rademacher", 2 * i + 1)
        x = rng.choice(window.members(tree))
        sf = sharp_maximal(tree, f, q, x).value
        cf = centered_sharp_maximal(tree, f, q, x).value
        assert sf.scaled(half) <= cf and cf <= sf  # (i)
        s_abs = sharp_maximal(tree, abs(f), q, x).value
        assert norm_le_sum(s_abs, [(Fraction(2), sf)])  # (ii)
        sg = sharp_maximal(tree, g, q, x).value
        s_sum = sharp_maximal(tree, f + g, q, x).value
        assert norm_le_sum(s_sum, [(Fraction(1), sf), (Fraction(1), sg)])  # (iii)
        s_diff = sharp_maximal(tree, f - g, q, x).value
        s_max = sharp_maximal(tree, f.pointwise_max(g), q, x).value
        s_min = sharp_maximal(tree, f.pointwise_min(g), q, x).value
        for s_lat in (s_max, s_min):  # (iv)
            assert norm_le_sum(
                s_lat, [(half, sf), (half, sg), (Fraction(1), s_diff)]
            )


class TestCriterion6:
    @pytest.mark.parametrize("m,q", [(2, 1), (2, 2), (3, 1), (3, 2)])
    def test_sharp_properties(self, m, q):
        tree = Tree(m)
        window = Window(Vertex(2, ()), 4 if m == 2 else 3)
        _sharp_property_block(tree, window, q, seed=200 + m, count=200)
        report(6, f"sharp-maximal properties (i)-(iv) on 200 functions (m={m}, q={q})")

    def test_sup_field_equals_bmo_norm(self):
        window = Window(Vertex(2, ()), 4)
        for i in range(12):
            f = nonzero_function(T2, window, 661, "sparse", i)
            r = bmo_norm(T2, f, 1)
            lo, _ = r.witness.depth_range()
            inside = next(T2.descendants_at_depth(r.witness.root, lo))
            pts = sorted(set(window.members(T2)) | {inside}, key=lambda v: (v.anchor, v.word))
            sup = max(x.value for x in sharp_field(T2, f, 1, pts).values())
            assert sup.eq_value(r.value)
        report(6, "sup of the sharp field equals the BMO_1 norm exactly (12 instances)")


class TestCriterion7:
    def test_worked_witness(self):
        r = bmo_norm(T2, FinFunc.indicator(U), 1)
        assert r.value.as_fraction() == Fraction(5, 18)
        assert r.witness == CZSet(O, 1)
        assert bf.bmo_norm_oracle(T2, FinFunc.indicator(U), 1).as_fraction() == Fraction(5, 18)
        report(7, "BMO_1 of the child indicator is exactly 5/18 with witness cz root=0: h=1")


class TestCriterion8:
    def test_norm_sandwich(self):
        worst = 0.0
        checked = 0
        for tree, seed in ((T2, 881), (T3, 883)):
            window = Window(Vertex(2, ()), 4 if tree.m == 2 else 3)
            for i in range(100):
                f = nonzero_function(tree, window, seed, "sparse", i)
                r1 = bmo_norm(tree, f, 1).value
                r2 = bmo_norm(tree, f, 2).value
                assert r1 <= r2
                checked += 1
                if not r1.is_zero():
                    worst = max(worst, r2.as_float() / r1.as_float())
        assert worst <= 3.0  # frozen regression bound for the reverse ratio
        report(8, f"BMO_1 <= BMO_2 exactly on {checked} functions; max reverse ratio {worst:.4f} <= 3.0")


class TestCriterion9:
    def test_duality_pairing(self):
        window = Window(Vertex(2, ()), 4)
        min_slack = None
        for i in range(500):
            g = nonzero_function(T2, window, 991, "atom-combo", i)
            holder = smallest_enclosing_cz(T2, g.support())
            atom, _ = normalize_to_atom(T2, g, holder)
            f = nonzero_function(T2, window, 997, "sparse", i)
            lhs = abs(pairing(T2, f, atom.function))
            rhs = bmo_norm(T2, f, 1).value.as_fraction()
            assert lhs <= rhs
            slack = rhs - lhs
            min_slack = slack if min_slack is None else min(min_slack, slack)
        report(9, f"|integral(f a)| <= BMO_1(f) exactly on 500 pairs; minimal slack {min_slack}")


class TestCriterion10:
    def test_good_bad_contract(self):
        rng = random.Random("acc10")
        done = 0
        for i in range(100):
            q = 2 if i % 3 else 3
            kind = "rademacher" if i % 2 else "atom-combo"
            g = nonzero_function(T2, Window(Vertex(2, ()), 4), 1009, kind, i)
            j = _ceil_log2(g.max_abs()) - rng.randint(1, 2)
            sp = good_bad_split(T2, g, q, j)
            lam = Fraction(2) ** (j * q)
            scale = Fraction(2) ** j
            envs = [envelope(r) for _, r in sp.bad_parts]
            for piece, r in sp.bad_parts:  # (b1) + (b4) integrals
                assert all(v in sp.omega for v in members(T2, r))
                assert integral(T2, piece) == 0
            for w in sp.omega:  # (b1) envelope cover
                assert any(e.contains(w) for e in envs)
            total = sp.good  # (b2)
            for piece, r in sp.bad_parts:
                total = total + piece
                assert all(envelope(r).contains(v) for v in piece.support())
            assert total == g
            assert sp.good.max_abs() <= sp.c_good * scale  # (b3)
            for v, val in g.items():
                if v not in sp.omega:
                    assert abs(val) <= scale
            for piece, r in sp.bad_parts:  # (b4) size
                if piece:
                    assert lp_power(T2, piece, q) <= sp.c_bad_qpow * lam * cz_measure(T2, envelope(r))
            done += 1
        report(10, f"good/bad bullets (b1)-(b4) hold exactly with zero residual on {done} (g, q, j) instances")


class TestCriterion11:
    def test_h1_sandwich(self):
        window = Window(Vertex(2, ()), 2)
        cand_window = Window(Vertex(2, ()), 4)
        for i in range(100):
            g = nonzero_function(T2, window, 1013, "atom-combo", i)
            holder = smallest_enclosing_cz(T2, g.support())
            cands = [
                nonzero_function(T2, cand_window, 1019, "sparse", 3 * i + k)
                for k in range(3)
            ]
            lower = h1_duality_lower(T2, g, cands)
            upper = h1_lp_gauge(T2, g, [holder])
            assert lower.value <= upper.value
        atom = FinFunc({U: Fraction(1, 3), V: Fraction(-1, 3)})
        gauge = h1_lp_gauge(T2, atom, [CZSet(O, 1)])
        assert gauge.value == 1
        lower = h1_duality_lower(T2, atom, [FinFunc.indicator(U)])
        assert lower.value == Fraction(3, 5)
        report(11, "duality lower <= LP gauge exactly on 100 functions; atom gauge = 1, lower = 3/5")


class TestCriterion12:
    def test_lp_sharp_ratio(self):
        window = Window(Vertex(2, ()), 3)
        pts = window.members(T2)
        p, p0 = Fraction(2), Fraction(3, 2)
        frozen = 6.0
        ratios = []
        for i in range(500):
            f = nonzero_function(T2, window, 1021, "sparse", i)
            num = lp_norm(T2, f, p).as_float()
            field = sharp_field(T2, f, p0, pts)
            den = sum(
                r.value.as_float() ** 2 * float(T2.weight(v)) for v, r in field.items()
            ) ** 0.5
            assert den > 0
            ratio = num / den
            assert ratio == ratio and ratio != float("inf")  # finite
            assert ratio <= frozen
            ratios.append(ratio)
        # reproducibility of the generated data and the computed ratio
        f_again = nonzero_function(T2, window, 1021, "sparse", 0)
        field = sharp_field(T2, f_again, p0, pts)
        den = sum(
            r.value.as_float() ** 2 * float(T2.weight(v)) for v, r in field.items()
        ) ** 0.5
        assert lp_norm(T2, f_again, p).as_float() / den == ratios[0]
        report(12, f"Lp/sharp ratio finite and <= {frozen} on 500 functions (max {max(ratios):.4f}); reproducible per seed")


class TestCriterion13:
    def test_oracle_equivalence(self):
        window = Window(Vertex(3, ()), 6)
        pts_pool = window.members(T2)
        rng = random.Random("acc13")
        for i in range(8):
            f = nonzero_function(T2, window, 1031, "sparse", i)
            phi = abs(f)
            for x in rng.sample(pts_pool, 4):
                assert (
                    hl_maximal(T2, phi, x).value.as_fraction()
                    == bf.hl_maximal_oracle(T2, phi, x)
                )
                for q in (1, 2):
                    assert sharp_maximal(T2, f, q, x).value.eq_value(
                        bf.sharp_maximal_oracle(T2, f, q, x)
                    )
            for q in (1, 2):
                assert bmo_norm(T2, f, q).value.eq_value(bf.bmo_norm_oracle(T2, f, q))
        report(13, "hl/sharp/bmo match the no-cutoff brute-force oracle exactly (m=2, depth-6 window)")
