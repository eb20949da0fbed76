#!/usr/bin/env python3
"""Fragment classification and solving a shared-head unwinding.

A recursive clause set cannot be solved directly, but unwinding the
recursion bounded-depth produces a recursion-free set whose relation
symbols head several clauses.  Solving it combines the per-clause
interpolants disjunctively.
"""

import sys

sys.path.insert(0, "tests")

import worked_examples as PE
from hornitp import classify, solve, verify_solution
from hornitp.errors import RecursiveSystem

recursive = PE.recursive_clauses()
print("recursive set:")
print(classify(recursive).as_text())
try:
    solve(recursive)
except RecursiveSystem as exc:
    print(f"solve refused: {exc}\n")

unwound = PE.unwinding_clauses()
print(f"unwinding ({len(unwound.clauses)} clauses):")
print(classify(unwound).as_text())
result = solve(unwound)
assert bool(verify_solution(result.solution, unwound))
print("unwinding solved; solution verified")
