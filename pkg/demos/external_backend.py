#!/usr/bin/env python3
"""Delegate interpolation queries to an external process.

Any executable speaking the line-oriented s-expression protocol can serve
as a backend.  Every reply is re-verified locally, so a faulty backend can
fail a run but never smuggle in a wrong answer.
"""

import shlex
import sys

from hornitp.backend import Backend
from hornitp.engine import check_interpolant
from hornitp.errors import VerificationFailed
from hornitp.sexpr import constraint_str
from hornitp.terms import INT, LinearTerm, Var, ge, le

x = Var("x", INT)
tx = LinearTerm.of(x)
a, b = ge(tx, 0), le(tx, -1)

good = f"{shlex.quote(sys.executable)} tests/backends/good_backend.py"
with Backend(good) as be:
    itp = be.interpolate(a, b)
print(f"backend interpolant: {constraint_str(itp.formula)}")
assert check_interpolant(a, b, itp.formula) == []
print("re-verified locally\n")

unsound = f"{shlex.quote(sys.executable)} tests/backends/unsound_backend.py"
with Backend(unsound) as be:
    try:
        be.interpolate(a, b)
    except VerificationFailed as exc:
        print(f"unsound backend rejected: {exc}")
