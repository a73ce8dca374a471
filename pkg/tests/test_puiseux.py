import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from glscalc.errors import IndistinguishableAtTruncation, InputError
from glscalc.puiseux import (
    BranchGerm,
    FractionalSeries,
    branch_equation,
    branch_intersection,
    branch_invariants,
    conjugates_contact_profile,
    contact_order,
    exponents_from_sequence,
    intersection_by_equation,
    sequence_from_exponents,
)
from schemes import germ, smooth

x, y, t = sympy.symbols("x y t")


def fs(den, terms, trunc=None):
    return FractionalSeries.make(den, terms, trunc)


class TestContactOrder:
    def test_opposite_signs(self):
        assert contact_order(fs(2, {3: 1}), fs(2, {3: -1})) == mpq(3, 2)

    def test_agree_through_first_term(self):
        assert contact_order(fs(2, {3: 1}), fs(2, {3: 1, 4: 1})) == 2

    def test_cube_root_conjugates(self):
        prof = conjugates_contact_profile(germ(3, [(4, 1)]))
        assert prof == [mpq(4, 3)] * 6

    def test_indistinguishable(self):
        with pytest.raises(IndistinguishableAtTruncation):
            contact_order(fs(2, {3: 1}, 2), fs(2, {3: 1}, 2))

    def test_truncation_respected(self):
        # they differ at 5/2, but only terms below 2 are known for one of them
        with pytest.raises(IndistinguishableAtTruncation):
            contact_order(fs(2, {3: 1}, 2), fs(2, {3: 1, 5: 1}))


class TestProfile:
    def test_cusp(self):
        assert conjugates_contact_profile(germ(2, [(3, 1)])) == [mpq(3, 2), mpq(3, 2)]

    def test_smooth_is_empty(self):
        assert conjugates_contact_profile(smooth((2, 1))) == []

    def test_e6_sum_matches_polar_identity(self):
        g = germ(3, [(4, 1)])
        # sum over ordered pairs = 2 delta + m - r
        assert sum(conjugates_contact_profile(g)) == 2 * g.delta + 3 - 1 == 8

    @given(st.integers(2, 6), st.integers(1, 12))
    @settings(max_examples=60, deadline=None)
    def test_polar_identity(self, n, extra):
        k = n + extra
        terms = [(k, 1)]
        import math

        if math.gcd(n, k) != 1:
            terms.append((k + 1 if math.gcd(math.gcd(n, k), k + 1) == 1 else k + 2, 2))
        g = germ(n, terms)
        if g.series.denominator != n:
            return
        assert sum(conjugates_contact_profile(g)) == 2 * g.delta + n - 1


class TestInvariants:
    def test_cusp(self):
        assert branch_invariants(germ(2, [(3, 1)])) == {"m": 2, "delta": 1, "mult_sequence": [2, 1, 1], "characteristic_exponents": ["3/2"]}

    def test_smooth(self):
        inv = branch_invariants(smooth((1, 1)))
        assert inv["m"] == 1 and inv["delta"] == 0 and inv["mult_sequence"] == [1]

    def test_e6(self):
        g = germ(3, [(4, 1)])
        assert g.mult_sequence == [3, 1, 1, 1]
        assert g.delta == 3
        # Milnor number (3-1)(4-1) of the quasihomogeneous germ
        assert 2 * g.delta - 1 + 1 == 6

    def test_two_pair_branch(self):
        # y = x^{3/2} + x^{7/4}: exponents 6/4 and 7/4, sequence 4,2,2,1,1
        g = germ(4, [(6, 1), (7, 1)])
        assert [str(e) for e in g.characteristic_exponents] == ["3/2", "7/4"]
        assert g.mult_sequence == [4, 2, 2, 1, 1]
        assert g.delta == 6 + 1 + 1

    @given(st.integers(2, 7), st.integers(1, 20))
    @settings(max_examples=80, deadline=None)
    def test_sequence_round_trip(self, n, extra):
        import math

        k = n + extra
        if math.gcd(n, k) != 1:
            return
        seq = sequence_from_exponents(n, [mpq(k, n)])
        assert seq[0] == n and seq[-1] == 1
        assert all(a >= b for a, b in zip(seq, seq[1:]))
        assert exponents_from_sequence(seq) == (n, [mpq(k, n)])
        # delta of y^n = x^k is (n-1)(k-1)/2
        assert sum(m * (m - 1) // 2 for m in seq) == (n - 1) * (k - 1) // 2

    def test_invalid_series(self):
        with pytest.raises(InputError):
            BranchGerm(FractionalSeries(2, ((2, mpq(1)),)))  # not reduced
        with pytest.raises(InputError):
            germ(2, [(1, 1)])  # order below 1


def _sympy_equation(g):
    f = branch_equation(g)
    return sum(sympy.Rational(int(c.numerator), int(c.denominator)) * x**i * y**j for (i, j), c in f.items())


class TestEquation:
    def test_cusp(self):
        assert sympy.expand(_sympy_equation(germ(2, [(3, 1)])) - (y**2 - x**3)) == 0

    def test_e6(self):
        assert sympy.expand(_sympy_equation(germ(3, [(4, 1)])) - (y**3 - x**4)) == 0

    def test_vanishes_on_parametrization(self):
        g = germ(4, [(6, 1), (7, mpq(-1, 2)), (9, 3)])
        f = _sympy_equation(g)
        ys = t**6 - sympy.Rational(1, 2) * t**7 + 3 * t**9
        assert sympy.expand(f.subs({x: t**4, y: ys})) == 0


class TestIntersection:
    def test_axes(self):
        assert branch_intersection(smooth(), germ(1, [], transposed=True)) == 1

    def test_tangent_parabolas(self):
        assert branch_intersection(smooth((2, 1)), smooth((2, -1))) == 2

    def test_cusp_with_line(self):
        assert branch_intersection(germ(2, [(3, 1)]), smooth()) == 3

    def test_symmetric_and_matches_equation(self):
        pairs = [
            (germ(2, [(3, 1)]), germ(3, [(4, 1)])),
            (germ(2, [(3, 1), (4, 1)]), germ(2, [(3, 1), (5, 1)])),
            (smooth((1, 1), (3, 2)), germ(3, [(5, -1)])),
        ]
        for a, b in pairs:
            ab = branch_intersection(a, b)
            assert ab == branch_intersection(b, a)
            assert ab == intersection_by_equation(a, b) == intersection_by_equation(b, a)

    def test_against_sympy_order(self):
        # independent: order in t of (y^2 - x^3) along (t^3, t^4)
        val = sympy.expand((t**4) ** 2 - (t**3) ** 3)
        order = min(sympy.Poly(val, t).monoms())[0]
        assert branch_intersection(germ(2, [(3, 1)]), germ(3, [(4, 1)])) == order == 8
