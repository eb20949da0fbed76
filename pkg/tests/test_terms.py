"""Constraint language: terms, canonical atoms, DNF, evaluation."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import random_constraint
from hornitp.errors import CubeLimitExceeded, SortMismatch
from hornitp.terms import (
    EQ,
    FALSE,
    INT,
    LE,
    LT,
    NE,
    REAL,
    TRUE,
    CAtom,
    Cube,
    LinearTerm,
    Var,
    atom,
    cand,
    cnot,
    cor,
    eq,
    evaluate,
    free_vars,
    ge,
    le,
    lt,
    ne,
    substitute,
    to_dnf,
)

X = Var("x", INT)
Y = Var("y", INT)
RES = Var("res", INT)
TX = LinearTerm.of(X)
TY = LinearTerm.of(Y)


class TestLinearTerm:
    def test_no_zero_coefficients_stored(self):
        t = TX + TY - TX
        assert t.coeffs == ((Y, Fraction(1)),)

    def test_exact_rational_arithmetic(self):
        t = TX.scale(Fraction(1, 3)) + TX.scale(Fraction(2, 3))
        assert t == TX

    def test_evaluate(self):
        t = TX.scale(2) + TY.scale(-3) + 5
        assert t.evaluate({X: Fraction(1), Y: Fraction(2)}) == 1

    def test_substituted_real_into_int_rejected(self):
        r = Var("r", REAL)
        with pytest.raises(SortMismatch):
            (TX + 1).substituted({X: LinearTerm.of(r)})


class TestCanonicalAtoms:
    def test_equality_positive_leading_coefficient(self):
        a = eq(-TX + TY)
        b = eq(TX - TY)
        assert a == b

    def test_coprime_integer_coefficients(self):
        assert le(TX.scale(4) - TY.scale(6), 2) == le(TX.scale(2) - TY.scale(3), 1)

    def test_int_tightening_floor(self):
        # 2x <= 1 over Int means x <= 0
        assert le(TX.scale(2), 1) == le(TX, 0)

    def test_int_tightening_strict_to_nonstrict(self):
        # x < 1 over Int means x <= 0
        assert lt(TX, 1) == le(TX, 0)

    def test_ground_atoms_fold(self):
        assert le(LinearTerm.const(0), 1) is TRUE
        assert lt(LinearTerm.const(3), 1) is FALSE
        assert eq(TX - TX) is TRUE

    def test_nonintegral_int_equation_folds(self):
        assert eq(TX.scale(2), 1) is FALSE
        assert ne(TX.scale(2), 1) is TRUE


class TestFreeVarsSubstitute:
    def test_free_vars_of_clause_body(self):
        # body constraint of a guarded transition plus a frame condition
        xp = Var("x'", INT)
        c = cand(ge(LinearTerm.of(xp), 0), le(TX - LinearTerm.of(RES), 0))
        assert free_vars(c) == {xp, X, RES}

    def test_free_vars_trivial(self):
        assert free_vars(TRUE) == frozenset()
        assert free_vars(cand(ge(TX, 0), cnot(eq(TY - TX)))) == {X, Y}

    def test_substitute_constant_fold(self):
        c = eq(LinearTerm.of(RES) - TX - 1)
        assert substitute(c, {X: LinearTerm.const(0)}) == eq(LinearTerm.of(RES) - 1)

    def test_substitute_identity(self):
        c = cor(le(TX, 0), ne(TY, 1))
        assert substitute(c, {}) == c

    def test_substitute_renaming(self):
        rec, n, tmp = Var("rec", INT), Var("n", INT), Var("tmp", INT)
        c = eq(LinearTerm.of(rec) - LinearTerm.of(n) - 1)
        out = substitute(c, {n: LinearTerm.of(tmp)})
        assert out == eq(LinearTerm.of(rec) - LinearTerm.of(tmp) - 1)

    def test_substitute_composes(self):
        c = le(TX.scale(2) + TY, 3)
        s1 = {X: TY + 1}
        s2 = {Y: LinearTerm.const(2)}
        combined = {X: (TY + 1).substituted(s2), Y: LinearTerm.const(2)}
        assert substitute(substitute(c, s1), s2) == substitute(c, combined)


class TestToDnf:
    def test_single_atom(self):
        cubes = to_dnf(ge(TX, 0))
        assert len(cubes) == 1
        assert list(cubes[0].atoms) == [le(-TX, 0).atom]

    def test_disequality_split(self):
        cubes = to_dnf(ne(LinearTerm.of(RES) - TX - 1))
        assert len(cubes) == 2

    def test_distribution_count(self):
        a, b, c, d = (le(LinearTerm.of(Var(n, INT)), 0) for n in "abcd")
        cubes = to_dnf(cand(cor(a, b), cor(c, d)))
        assert len(cubes) == 4

    def test_no_ne_atoms_or_negations(self):
        rng = random.Random(5)
        pool = [X, Y, RES]
        for _ in range(100):
            c = random_constraint(rng, pool)
            for cube in to_dnf(c):
                assert all(a.rel in (LE, LT, EQ) for a in cube.atoms)

    def test_cube_limit(self):
        big = cand(*(cor(le(TX, i), le(TY, i)) for i in range(20)))
        with pytest.raises(CubeLimitExceeded):
            to_dnf(big, limit=100)

    def test_dnf_equivalent_on_sample_grid(self):
        rng = random.Random(11)
        pool = [X, Y]
        points = [{X: Fraction(i, d), Y: Fraction(j, d)}
                  for i in range(-3, 4) for j in range(-3, 4) for d in (1, 2)]
        for _ in range(60):
            c = random_constraint(rng, pool)
            cubes = to_dnf(c)
            for m in points:
                expected = evaluate(c, m)
                got = any(all(a.holds(m) for a in cube.atoms) for cube in cubes)
                # integer tightening may strengthen atoms at non-integer points
                if all(v.denominator == 1 for v in m.values()):
                    assert got == expected, (c, m)


@settings(max_examples=200, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 3), st.integers(-3, 3))
def test_atom_negation_is_complement(a, b, d, x):
    t = TX.scale(a) + Fraction(b, d)
    c = le(t, 0)
    if c in (TRUE, FALSE):
        return
    m = {X: Fraction(x)}
    assert evaluate(c, m) != evaluate(cnot(c), m)


@settings(max_examples=200, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5))
def test_evaluate_respects_structure(x, y):
    m = {X: Fraction(x), Y: Fraction(y)}
    c1, c2 = le(TX - TY, 0), ne(TX, 1)
    assert evaluate(cand(c1, c2), m) == (evaluate(c1, m) and evaluate(c2, m))
    assert evaluate(cor(c1, c2), m) == (evaluate(c1, m) or evaluate(c2, m))
    assert evaluate(cnot(c1), m) == (not evaluate(c1, m))
