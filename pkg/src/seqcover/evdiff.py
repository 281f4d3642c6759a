"""Eventual dominance and eventually-different functions on finite truncations of omega^omega.

Tails are affine (``a*k + b``, constants included), so comparisons beyond
the tables are exact: the difference of two tails is itself affine and its
sign pattern is decided by the slopes and one threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .exact import ceil_q
from .sequences import Affine, FunctionRule


@dataclass(frozen=True)
class DominanceVerdict:
    """Result of comparing functions under eventual dominance.

    ``violations`` lists every index where the dominated side is larger when
    there are finitely many; ``infinite_from`` marks an infinite run of
    violations starting there.  ``pointwise`` is set by
    :func:`is_pointwise_bound`.
    """

    status: str  # "holds" | "fails" | "unknown-beyond-horizon"
    violations: tuple[int, ...] = ()
    infinite_from: int | None = None
    pointwise: bool | None = None

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    def to_json(self) -> dict:
        out = {"status": self.status, "violations": list(self.violations)}
        if self.infinite_from is not None:
            out["infinite_from"] = self.infinite_from
        if self.pointwise is not None:
            out["pointwise"] = self.pointwise
        return out


def _affine(tail: Affine) -> tuple[int, int]:
    return tail.a, tail.b


def leq_star(f: FunctionRule, g: FunctionRule) -> DominanceVerdict:
    """Decide ``f <=* g``: is ``{i : f(i) > g(i)}`` finite?"""
    if not (f.total and g.total):
        n = min(len(f.table), len(g.table))
        bad = tuple(i for i in range(n) if f(i) > g(i))
        return DominanceVerdict("unknown-beyond-horizon", bad)
    n = max(len(f.table), len(g.table))
    bad = [i for i in range(n) if f(i) > g(i)]
    # beyond n: f(k) - g(k) = da*k + db
    fa, fb = _affine(f.tail)
    ga, gb = _affine(g.tail)
    da, db = fa - ga, fb - gb
    if da > 0 or (da == 0 and db > 0):
        # positive for all large k; first index of the infinite run
        start = n if da == 0 else max(n, (-db) // da + 1)
        return DominanceVerdict("fails", tuple(bad), infinite_from=start)
    if da < 0:
        # positive only while k < db / (-da)
        last = ceil_q(Fraction(db, -da)) - 1
        bad.extend(k for k in range(n, last + 1))
    return DominanceVerdict("holds", tuple(bad))


def _max_tail_crossing(tails: list[Affine], start: int) -> tuple[Affine, int]:
    """The tail that is the pointwise max for all k >= returned index."""
    top = max(tails, key=lambda t: (t.a, t.b))
    cross = start
    for t in tails:
        if t.a < top.a:
            # t(k) > top(k) only while k < (t.b - top.b) / (top.a - t.a)
            cross = max(cross, ceil_q(Fraction(t.b - top.b, top.a - t.a)))
    return top, cross


def pointwise_max(fs: list[FunctionRule]) -> FunctionRule:
    """Exact pointwise maximum of total functions, as a table plus affine tail."""
    if not fs:
        raise PreconditionError("maximum of an empty family")
    if not all(f.total for f in fs):
        raise PreconditionError("pointwise maximum needs total functions")
    n = max(len(f.table) for f in fs)
    top, cross = _max_tail_crossing([f.tail for f in fs], n)
    table = tuple(max(f(k) for f in fs) for k in range(cross))
    return FunctionRule(table, top)


def eventually_different(fs: list[FunctionRule]) -> tuple[FunctionRule, int]:
    """A g with ``g(k) != f(k)`` for every member f and every k.

    g is one more than the pointwise maximum, so the stabilization index is 0.
    """
    if not fs:
        return FunctionRule.constant(0), 0
    top = pointwise_max(fs)
    g = FunctionRule(tuple(v + 1 for v in top.table), Affine(top.tail.a, top.tail.b + 1))
    return g, 0


def is_pointwise_bound(f: FunctionRule, gauges: list[FunctionRule]) -> DominanceVerdict:
    """Does f dominate every gauge everywhere?  Otherwise report eventual dominance."""
    verdicts = [leq_star(g, f) for g in gauges]
    if any(v.status == "unknown-beyond-horizon" for v in verdicts):
        bad = sorted({i for v in verdicts for i in v.violations})
        return DominanceVerdict("unknown-beyond-horizon", tuple(bad), pointwise=False)
    bad = sorted({i for v in verdicts for i in v.violations})
    failing = [v for v in verdicts if not v.holds]
    if failing:
        start = min(v.infinite_from for v in failing)
        return DominanceVerdict("fails", tuple(bad), infinite_from=start, pointwise=False)
    return DominanceVerdict("holds", tuple(bad), pointwise=not bad)
