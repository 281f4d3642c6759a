"""Seeded random generators for rules, families and functions.

Every generator takes a :class:`random.Random`, so a suite run is fully
determined by its seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .sequences import Affine, Arithmetic, Explicit, FunctionRule


def rand_rational(rng: random.Random, p_max: int = 50, q_max: int = 50) -> Fraction:
    return Fraction(rng.randint(1, p_max), rng.randint(1, q_max))


def arithmetic_rule(rng: random.Random, p_max: int = 50, q_max: int = 50) -> Arithmetic:
    return Arithmetic(rand_rational(rng, p_max, q_max))


def _explicit_from_gaps(start: Fraction, gaps: list[Fraction], tail_gap: Fraction) -> Explicit:
    prefix = [start]
    for d in gaps:
        prefix.append(prefix[-1] + d)
    n = len(prefix)
    # tail continues a_{n-1} with steps of tail_gap: a_k = a_{n-1} + (k - n + 1) * tail_gap
    offset = prefix[-1] - (n - 1) * tail_gap
    return Explicit(tuple(prefix), tail_gap, offset)


def condition2_rule(rng: random.Random, max_prefix: int = 8) -> Explicit:
    """Positive, non-increasing gaps; the tail repeats the smallest gap."""
    gaps = sorted((rand_rational(rng, 12, 8) for _ in range(rng.randint(0, max_prefix))), reverse=True)
    tail_gap = rand_rational(rng, 12, 8)
    if gaps:
        tail_gap = min(tail_gap, gaps[-1])
    start = Fraction(rng.randint(0, 24), rng.randint(1, 8))
    return _explicit_from_gaps(start, gaps, tail_gap)


def condition3_rule(rng: random.Random, max_prefix: int = 8) -> tuple[Explicit, Fraction]:
    """Gaps in any order but all at least r; returns the rule and r."""
    r = rand_rational(rng, 6, 12)
    gaps = [r + Fraction(rng.randint(0, 24), rng.randint(1, 8)) for _ in range(rng.randint(0, max_prefix))]
    tail_gap = r + Fraction(rng.randint(0, 12), rng.randint(1, 8))
    start = Fraction(rng.randint(0, 24), rng.randint(1, 8))
    return _explicit_from_gaps(start, gaps, tail_gap), r


def family(rng: random.Random, max_members: int = 10):
    """Arithmetic and explicit members with positive gaps."""
    out = []
    for _ in range(rng.randint(1, max_members)):
        kind = rng.choice(("arithmetic", "condition2", "condition3"))
        if kind == "arithmetic":
            out.append(arithmetic_rule(rng, 12, 12))
        elif kind == "condition2":
            out.append(condition2_rule(rng, 6))
        else:
            out.append(condition3_rule(rng, 6)[0])
    return out


def function_rule(rng: random.Random, max_table: int = 30, max_value: int = 60) -> FunctionRule:
    table = tuple(rng.randint(0, max_value) for _ in range(rng.randint(0, max_table)))
    if rng.random() < 0.5:
        tail = Affine(0, rng.randint(0, max_value))
    else:
        a = rng.randint(1, 5)
        tail = Affine(a, rng.randint(-a * len(table), max_value))
    return FunctionRule(table, tail)


def function_family(rng: random.Random, max_size: int = 20) -> list[FunctionRule]:
    return [function_rule(rng) for _ in range(rng.randint(1, max_size))]
