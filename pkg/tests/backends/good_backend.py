#!/usr/bin/env python3
"""Well-behaved test backend: answers with the built-in engine."""
import sys

from hornitp.engine import binary_interpolant
from hornitp.errors import NotUnsat
from hornitp.sexpr import constraint_str, model_str, parse_constraint, parse_one, parse_var_decls


def main():
    for line in sys.stdin:
        if not line.strip():
            continue
        node = parse_one(line)
        sections = {item.items[0].value: item for item in node.items[1:]}
        variables = parse_var_decls(
            type(node)(items=sections["vars"].items[1:], line=0, col=0))
        a = parse_constraint(sections["A"].items[1], variables)
        b = parse_constraint(sections["B"].items[1], variables)
        try:
            itp = binary_interpolant(a, b)
            print(f"(interpolant {constraint_str(itp.formula)})", flush=True)
        except NotUnsat as exc:
            print(f"(sat {model_str(exc.model)})", flush=True)


if __name__ == "__main__":
    main()
