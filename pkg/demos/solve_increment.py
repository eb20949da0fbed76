#!/usr/bin/env python3
"""Solve a tree-like clause set modeling a recursive increment procedure.

The set encodes the check that a procedure returning n+1 never returns a
value less than its argument.  Solving produces one constraint per relation
symbol; verification re-checks every clause with the decision procedure.
"""

import sys

sys.path.insert(0, "tests")

import worked_examples as PE
from hornitp import print_chc, print_solution, solve, verify_solution

hc = PE.treelike_clauses()
print("clause set:")
print(print_chc(hc))

result = solve(hc)
print("verdict: solvable")
print(print_solution(result.solution))

assert bool(verify_solution(result.solution, hc))
print("solution re-verified clause by clause")
