"""Linear-arithmetic formula core.

Variables are Int- or Real-sorted, terms are exact rational linear
combinations, and constraints are and/or/not trees over atoms of the shape
``term rel 0``.  All arithmetic uses :class:`fractions.Fraction`; nothing in
this package touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import CubeLimitExceeded, SortMismatch

INT = "Int"
REAL = "Real"

DEFAULT_CUBE_LIMIT = 10_000

Rat = Fraction


def _rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True, order=True)
class Var:
    name: str
    sort: str = INT

    def __repr__(self):
        return self.name if self.sort == INT else f"{self.name}:{self.sort}"


@dataclass(frozen=True)
class LinearTerm:
    """coeffs * vars + constant, with no zero coefficients stored."""

    coeffs: tuple  # sorted tuple of (Var, Fraction)
    constant: Fraction

    @staticmethod
    def make(coeffs: Mapping[Var, Fraction] | Iterable = (), constant=0) -> "LinearTerm":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[Var, Fraction] = {}
        for v, c in items:
            c = _rat(c)
            if c == 0:
                continue
            acc[v] = acc.get(v, Fraction(0)) + c
        clean = tuple(sorted(((v, c) for v, c in acc.items() if c != 0)))
        return LinearTerm(clean, _rat(constant))

    @staticmethod
    def of(v: Var) -> "LinearTerm":
        return LinearTerm(((v, Fraction(1)),), Fraction(0))

    @staticmethod
    def const(x) -> "LinearTerm":
        return LinearTerm((), _rat(x))

    def coeff(self, v: Var) -> Fraction:
        for w, c in self.coeffs:
            if w == v:
                return c
        return Fraction(0)

    @property
    def vars(self) -> frozenset:
        return frozenset(v for v, _ in self.coeffs)

    def is_constant(self) -> bool:
        return not self.coeffs

    def all_int_sorted(self) -> bool:
        return all(v.sort == INT for v, _ in self.coeffs)

    def scale(self, k) -> "LinearTerm":
        k = _rat(k)
        if k == 0:
            return LinearTerm((), Fraction(0))
        return LinearTerm(tuple((v, c * k) for v, c in self.coeffs), self.constant * k)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LinearTerm.const(other)
        acc = dict(self.coeffs)
        for v, c in other.coeffs:
            acc[v] = acc.get(v, Fraction(0)) + c
        clean = tuple(sorted((v, c) for v, c in acc.items() if c != 0))
        return LinearTerm(clean, self.constant + other.constant)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LinearTerm.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        return self.scale(k)

    __rmul__ = __mul__

    def evaluate(self, model: Mapping[Var, Fraction]) -> Fraction:
        total = self.constant
        for v, c in self.coeffs:
            total += c * model[v]
        return total

    def substituted(self, sigma: Mapping[Var, "LinearTerm"]) -> "LinearTerm":
        out = LinearTerm.const(self.constant)
        for v, c in self.coeffs:
            repl = sigma.get(v)
            if repl is None:
                out = out + LinearTerm.of(v).scale(c)
            else:
                if v.sort == INT and any(w.sort != INT for w in repl.vars):
                    raise SortMismatch(f"cannot substitute Real-sorted term for Int variable {v.name}")
                out = out + repl.scale(c)
        return out

    def __repr__(self):
        if not self.coeffs:
            return str(self.constant)
        parts = []
        for v, c in self.coeffs:
            if c == 1:
                parts.append(v.name)
            elif c == -1:
                parts.append(f"-{v.name}")
            else:
                parts.append(f"{c}*{v.name}")
        s = " + ".join(parts).replace("+ -", "- ")
        if self.constant != 0:
            s += f" + {self.constant}" if self.constant > 0 else f" - {-self.constant}"
        return s


LE = "<="
LT = "<"
EQ = "="
NE = "!="

_NEGATED = {LE: LT, LT: LE, EQ: NE, NE: EQ}


@dataclass(frozen=True)
class LinearAtom:
    """Canonical atom ``term rel 0`` with at least one variable.

    Canonicalisation scales variable coefficients to coprime integers, gives
    = and != atoms a positive leading coefficient, and tightens all-Int
    inequalities to integral bounds (turning strict ones into non-strict).
    Ground atoms never survive construction; use :func:`atom` which folds
    them to TRUE/FALSE.
    """

    term: LinearTerm
    rel: str

    @property
    def vars(self):
        return self.term.vars

    def negated(self) -> "LinearAtom | bool":
        return _canonical_atom(-self.term if self.rel in (LE, LT) else self.term,
                               _NEGATED[self.rel])

    def holds(self, model) -> bool:
        val = self.term.evaluate(model)
        if self.rel == LE:
            return val <= 0
        if self.rel == LT:
            return val < 0
        if self.rel == EQ:
            return val == 0
        return val != 0

    def __repr__(self):
        return f"({self.term} {self.rel} 0)"


def _canonical_atom(term: LinearTerm, rel: str):
    """Return a canonical LinearAtom, or True/False for ground atoms."""
    if term.is_constant():
        c = term.constant
        return {LE: c <= 0, LT: c < 0, EQ: c == 0, NE: c != 0}[rel]
    denom_lcm = 1
    num_gcd = 0
    for _, c in term.coeffs:
        denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm, c.denominator)
        num_gcd = math.gcd(num_gcd, abs(c.numerator))
    term = term.scale(Fraction(denom_lcm, 1))
    g = 0
    for _, c in term.coeffs:
        g = math.gcd(g, int(c))
    if g > 1:
        term = term.scale(Fraction(1, g))
    if rel in (EQ, NE) and term.coeffs[0][1] < 0:
        term = -term
    if term.all_int_sorted():
        c = term.constant
        if rel == LE:
            term = LinearTerm(term.coeffs, Fraction(math.ceil(c)))
        elif rel == LT:
            term = LinearTerm(term.coeffs, Fraction(math.floor(c) + 1))
            rel = LE
        elif c.denominator != 1:
            return rel == NE  # no integer solutions: = is false, != is true
    return LinearAtom(term, rel)


# ---------------------------------------------------------------------------
# Constraints
# ---------------------------------------------------------------------------


class Constraint:
    __slots__ = ()


class _CTrue(Constraint):
    __slots__ = ()

    def __repr__(self):
        return "true"


class _CFalse(Constraint):
    __slots__ = ()

    def __repr__(self):
        return "false"


TRUE = _CTrue()
FALSE = _CFalse()


@dataclass(frozen=True)
class CAtom(Constraint):
    atom: LinearAtom

    def __repr__(self):
        return repr(self.atom)


@dataclass(frozen=True)
class CAnd(Constraint):
    args: tuple

    def __repr__(self):
        return "(and " + " ".join(map(repr, self.args)) + ")"


@dataclass(frozen=True)
class COr(Constraint):
    args: tuple

    def __repr__(self):
        return "(or " + " ".join(map(repr, self.args)) + ")"


@dataclass(frozen=True)
class CNot(Constraint):
    arg: Constraint

    def __repr__(self):
        return f"(not {self.arg!r})"


def atom(term: LinearTerm, rel: str) -> Constraint:
    a = _canonical_atom(term, rel)
    if a is True:
        return TRUE
    if a is False:
        return FALSE
    return CAtom(a)


def le(lhs, rhs=0) -> Constraint:
    return atom(_as_term(lhs) - _as_term(rhs), LE)


def lt(lhs, rhs=0) -> Constraint:
    return atom(_as_term(lhs) - _as_term(rhs), LT)


def ge(lhs, rhs=0) -> Constraint:
    return le(rhs, lhs)


def gt(lhs, rhs=0) -> Constraint:
    return lt(rhs, lhs)


def eq(lhs, rhs=0) -> Constraint:
    return atom(_as_term(lhs) - _as_term(rhs), EQ)


def ne(lhs, rhs=0) -> Constraint:
    return atom(_as_term(lhs) - _as_term(rhs), NE)


def _as_term(x) -> LinearTerm:
    if isinstance(x, LinearTerm):
        return x
    if isinstance(x, Var):
        return LinearTerm.of(x)
    if isinstance(x, (int, Fraction)):
        return LinearTerm.const(x)
    raise TypeError(f"cannot interpret {x!r} as a linear term")


def cand(*args) -> Constraint:
    flat = []
    for a in args:
        if a is TRUE:
            continue
        if a is FALSE:
            return FALSE
        if isinstance(a, CAnd):
            flat.extend(x for x in a.args if x not in flat)
        elif a not in flat:
            flat.append(a)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return CAnd(tuple(flat))


def cor(*args) -> Constraint:
    flat = []
    for a in args:
        if a is FALSE:
            continue
        if a is TRUE:
            return TRUE
        if isinstance(a, COr):
            flat.extend(x for x in a.args if x not in flat)
        elif a not in flat:
            flat.append(a)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return COr(tuple(flat))


def cnot(a: Constraint) -> Constraint:
    if a is TRUE:
        return FALSE
    if a is FALSE:
        return TRUE
    if isinstance(a, CNot):
        return a.arg
    return CNot(a)


def implies(lhs: Constraint, rhs: Constraint) -> Constraint:
    return cor(cnot(lhs), rhs)


def free_vars(c: Constraint) -> frozenset:
    if c is TRUE or c is FALSE:
        return frozenset()
    if isinstance(c, CAtom):
        return c.atom.vars
    if isinstance(c, CNot):
        return free_vars(c.arg)
    out: frozenset = frozenset()
    for a in c.args:
        out |= free_vars(a)
    return out


def substitute(c: Constraint, sigma: Mapping[Var, LinearTerm]) -> Constraint:
    """Simultaneous substitution of terms for variables."""
    if not sigma or c is TRUE or c is FALSE:
        return c
    if isinstance(c, CAtom):
        return atom(c.atom.term.substituted(sigma), c.atom.rel)
    if isinstance(c, CNot):
        return cnot(substitute(c.arg, sigma))
    parts = [substitute(a, sigma) for a in c.args]
    return cand(*parts) if isinstance(c, CAnd) else cor(*parts)


def rename_vars(c: Constraint, mapping: Mapping[Var, Var]) -> Constraint:
    return substitute(c, {v: LinearTerm.of(w) for v, w in mapping.items()})


def evaluate(c: Constraint, model: Mapping[Var, Fraction]) -> bool:
    if c is TRUE:
        return True
    if c is FALSE:
        return False
    if isinstance(c, CAtom):
        return c.atom.holds(model)
    if isinstance(c, CNot):
        return not evaluate(c.arg, model)
    if isinstance(c, CAnd):
        return all(evaluate(a, model) for a in c.args)
    return any(evaluate(a, model) for a in c.args)


# ---------------------------------------------------------------------------
# DNF conversion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cube:
    """Conjunction of atoms with rel in {<=, <, =}; DNF output has no =."""

    atoms: tuple

    @property
    def vars(self):
        out: frozenset = frozenset()
        for a in self.atoms:
            out |= a.vars
        return out

    def as_constraint(self) -> Constraint:
        return cand(*(CAtom(a) for a in self.atoms))

    def holds(self, model) -> bool:
        return all(a.holds(model) for a in self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)


def _nnf(c: Constraint, neg: bool) -> Constraint:
    if c is TRUE:
        return FALSE if neg else TRUE
    if c is FALSE:
        return TRUE if neg else FALSE
    if isinstance(c, CNot):
        return _nnf(c.arg, not neg)
    if isinstance(c, CAtom):
        if not neg:
            return c
        na = c.atom.negated()
        if na is True:
            return TRUE
        if na is False:
            return FALSE
        return CAtom(na)
    parts = [_nnf(a, neg) for a in c.args]
    if isinstance(c, CAnd):
        return cor(*parts) if neg else cand(*parts)
    return cand(*parts) if neg else cor(*parts)


def _atom_cubes(a: LinearAtom) -> list:
    """Atom as a list of alternative atom-lists (the != split happens here)."""
    if a.rel == NE:
        lo = _canonical_atom(a.term, LT)
        hi = _canonical_atom(-a.term, LT)
        out = []
        for alt in (lo, hi):
            if alt is True:
                return [[]]
            if alt is not False:
                out.append([alt])
        return out
    if a.rel == EQ:
        lo = _canonical_atom(a.term, LE)
        hi = _canonical_atom(-a.term, LE)
        cube = []
        for half in (lo, hi):
            if half is False:
                return []
            if half is not True:
                cube.append(half)
        return [cube]
    return [[a]]


def to_dnf(c: Constraint, limit: int = DEFAULT_CUBE_LIMIT) -> list:
    """Equivalent disjunction of cubes (over the Int/Real structure).

    Raises CubeLimitExceeded once more than ``limit`` cubes would be built.
    """
    nnf = _nnf(c, False)

    def go(c: Constraint) -> list:
        if c is TRUE:
            return [[]]
        if c is FALSE:
            return []
        if isinstance(c, CAtom):
            return _atom_cubes(c.atom)
        if isinstance(c, COr):
            out = []
            for a in c.args:
                out.extend(go(a))
                if len(out) > limit:
                    raise CubeLimitExceeded(limit)
            return out
        assert isinstance(c, CAnd)
        acc = [[]]
        for a in c.args:
            alts = go(a)
            if len(acc) * len(alts) > limit:
                raise CubeLimitExceeded(limit)
            acc = [x + y for x in acc for y in alts]
        return acc

    cubes = []
    for raw in go(nnf):
        seen = []
        for a in raw:
            if a not in seen:
                seen.append(a)
        cubes.append(Cube(tuple(seen)))
    return cubes
