#!/usr/bin/env python3
"""Turn a propositional clause set into recursion-free Horn clauses.

A clause set with the termination property (no infinite linear resolution
sequence) admits a renaming: complementing all literals of a computed
variable set yields Horn clauses with an acyclic dependence relation.
"""

from hornitp.renaming import (
    compute_renaming,
    emit_dimacs,
    has_termination_property,
    is_horn,
    parse_dimacs,
    prop_dependence_acyclic,
    rename,
)

with open("tests/data/renaming_example.cnf") as fh:
    text = fh.read()
print("input:")
print(text)

cs = parse_dimacs(text)
result = has_termination_property(cs)
print(f"termination property: {bool(result)}")
print(f"literal order: {result.order}")

ren = compute_renaming(cs)
print(f"renaming set (complemented variables): {sorted(ren.variables)}")

renamed = rename(cs, ren)
assert is_horn(renamed) and prop_dependence_acyclic(renamed)
print("renamed set (recursion-free Horn):")
print(emit_dimacs(renamed))
