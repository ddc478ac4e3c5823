"""Deterministic JSON helpers with exact rational serialization.

Rationals travel as "p/q" strings (integers as plain "p") so nothing is ever
rounded; all object keys are emitted sorted so identical inputs yield
byte-identical output.
"""

import json
from fractions import Fraction


def rat_str(x):
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def parse_rat(s):
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s)
    raise ValueError(f"expected an exact rational string, got {s!r}")


def key_str(key):
    """Stable string form for an arbitrary hashable basis key."""
    return repr(key)


def vector_json(vec):
    """Sparse vector as a sorted list of [key, coefficient] pairs."""
    return [[key_str(k), rat_str(c)] for k, c in
            sorted(vec.items(), key=lambda kv: key_str(kv[0]))]


def dumps(data):
    return json.dumps(data, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"
