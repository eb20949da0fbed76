#!/usr/bin/env python3
"""Binary and sequence interpolation over linear integer arithmetic.

An interpolant for an unsatisfiable pair (A, B) follows from A, contradicts
B, and mentions only shared variables.  Chaining the idea along a sequence
of formulas yields inductive labels between every pair of positions.
"""

from hornitp.engine import binary_interpolant, check_interpolant
from hornitp.problems import SequenceProblem, check_sequence
from hornitp.sexpr import constraint_str
from hornitp.solver import sequence_interpolants
from hornitp.terms import INT, LinearTerm, Var, ge, le, lt

x = Var("x", INT)
y = Var("y", INT)
tx, ty = LinearTerm.of(x), LinearTerm.of(y)

a = ge(tx, 0)
b = le(tx, -1)
itp = binary_interpolant(a, b)
print(f"A = {constraint_str(a)}")
print(f"B = {constraint_str(b)}")
print(f"interpolant = {constraint_str(itp.formula)}")
assert check_interpolant(a, b, itp.formula) == []
print("all three interpolant conditions verified\n")

sp = SequenceProblem((ge(tx, 0), le(tx - ty, 0), lt(ty, 0)))
labels = sequence_interpolants(sp)
print("sequence problem:", " | ".join(constraint_str(p) for p in sp.parts))
for i, lab in enumerate(labels):
    print(f"  label {i}: {constraint_str(lab)}")
assert check_sequence(sp, labels) == []
print("inductive sequence verified")
