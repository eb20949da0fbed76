#!/usr/bin/env python3
"""Protocol-violating test backend: replies with unparsable text."""
import sys

for _ in sys.stdin:
    print("this is (not balanced", flush=True)
