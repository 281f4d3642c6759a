"""The covering gauge of a sequence, family bounds and the one-term horizon.

For a sequence diverging to infinity the gauge at ``i`` is the largest j >= 1
such that the radius-1/j neighbourhoods of the terms cover the ray
``(i, oo)``, or 0 when even j = 1 fails.

Coverage of a ray by equal-radius neighbourhoods of sorted points t_0 < t_1 < ...
reduces to two checks: the first point with ``t > i - r`` must also satisfy
``t - r <= i`` (left edge), and every gap from that point on must be
``< 2r`` (chain).  For eventually affine rules the tail gaps are the constant
slope, so only a finite sorted prefix needs to be looked at.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import Falsification, Indeterminate, PreconditionError
from .evdiff import leq_star, pointwise_max
from .exact import OpenInterval, ceil_q, fmt
from .sequences import (
    AffineTailRule,
    Affine,
    FunctionRule,
    LogShift,
    SequenceRule,
    check_condition2,
    check_condition3,
    make_rule,
    terms_in,
)


@dataclass(frozen=True)
class GaugeValue:
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError("gauge bounds out of order")

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class GaugeTable(FunctionRule):
    """Tabulated gauge; ``upper`` carries the hi bounds when some entry is not exact."""

    exact: bool = True
    upper: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        out = super().to_json()
        out["exact"] = self.exact
        if self.upper is not None:
            out["upper"] = list(self.upper)
        return out


@dataclass(frozen=True)
class SequenceFamily:
    members: tuple[SequenceRule, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(make_rule(m) for m in self.members))
        if not self.members:
            raise PreconditionError("a family needs at least one member")

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, idx: int) -> SequenceRule:
        return self.members[idx]

    def to_json(self) -> list[dict]:
        return [m.to_json() for m in self.members]

    @classmethod
    def from_json(cls, data) -> "SequenceFamily":
        if isinstance(data, dict):
            data = data["members"]
        return cls(tuple(make_rule(m) for m in data))


class UncertifiedBound(PreconditionError):
    """Raised when a family bound can only be given on a finite table."""

    def __init__(self, message: str, truncated: FunctionRule):
        super().__init__(message)
        self.truncated = truncated


# ---------------------------------------------------------------------------
# Eventually affine rules


def tail_cap(slope: Fraction) -> int:
    """Largest j with ``slope < 2/j`` (0 if none): the gauge on the tail."""
    return ceil_q(2 / slope) - 1


def stable_from(rule: AffineTailRule) -> int:
    """First i from which the gauge equals :func:`tail_cap`.

    For ``i - 1`` at or above every head term, the first point beyond
    ``i - r`` (r <= 1) is a tail point whose predecessor is too.
    """
    return max(0, math.floor(rule.head_max) + 1)


@dataclass(frozen=True)
class _Profile:
    points: tuple[Fraction, ...]  # sorted distinct terms; the last one is a tail term
    worst_gap: tuple[Fraction, ...]  # max gap from points[t] onward, tail included

    def covers(self, i: int, r: Fraction) -> bool:
        a = bisect.bisect_right(self.points, i - r)
        return self.points[a] - r <= i and self.worst_gap[a] < 2 * r


@lru_cache(maxsize=1024)
def _profile(rule: AffineTailRule, upto: int) -> _Profile:
    cutoff = max(Fraction(upto), rule.head_max) + 2
    n_cut = max(rule.tail_start + 1, rule.divergence_modulus(cutoff))
    pts = sorted({rule.term(n) for n in range(n_cut + 1)})
    worst = [rule.slope] * len(pts)
    for t in range(len(pts) - 2, -1, -1):
        worst[t] = max(pts[t + 1] - pts[t], worst[t + 1])
    return _Profile(tuple(pts), tuple(worst))


def _affine_gauge(rule: AffineTailRule, i: int) -> int:
    cap = tail_cap(rule.slope)
    if cap < 1:
        return 0
    if i >= stable_from(rule):
        return cap
    prof = _profile(rule, (i // 64 + 1) * 64)
    if not prof.covers(i, Fraction(1)):
        return 0
    lo, hi = 1, cap + 1  # covers(1/lo) holds, covers(1/hi) fails on the tail
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if prof.covers(i, Fraction(1, mid)):
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# Logarithmic rules


def _log_first_above(rule: LogShift, q: Fraction) -> int | None:
    """Index of the first term above ``q``, or None if undecided."""
    from .sequences import _log_boundary

    if rule.x > q:
        return 0
    b, unsure = _log_boundary(rule, q)
    if unsure:
        return None
    return b


def _log_covers(rule: LogShift, i: int, r: Fraction) -> bool | None:
    a = _log_first_above(rule, i - r)
    if a is None:
        return None
    edge = rule.term(a).compare(i + r)
    edge_ok = None if edge is None else edge <= 0
    # gaps are decreasing, so the chain condition is the gap at a
    g_lo, g_hi = rule.gap_bounds(a)
    if g_hi < 2 * r:
        chain_ok = True
    elif g_lo >= 2 * r:
        chain_ok = False
    else:
        c = (rule.term(a + 1) - rule.term(a)).compare(2 * r)
        chain_ok = None if c is None else c < 0
    if edge_ok is False or chain_ok is False:
        return False
    if edge_ok and chain_ok:
        return True
    return None


def _log_gauge(rule: LogShift, i: int) -> GaugeValue:
    # the first term above i - 1/j has index <= N(i) and gap > 1/(N(i)+2)
    ceiling = 2 * (rule.divergence_modulus(Fraction(i)) + 2)
    lo, hi = 0, ceiling
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _log_covers(rule, i, Fraction(1, mid)) is True:
            lo = mid
        else:
            hi = mid
    certain = lo
    lo, hi = 0, ceiling
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _log_covers(rule, i, Fraction(1, mid)) is False:
            hi = mid
        else:
            lo = mid
    return GaugeValue(certain, max(certain, lo))


# ---------------------------------------------------------------------------
# Public operations


def gauge(rule: SequenceRule, i: int) -> GaugeValue:
    """Value of the covering gauge at ``i`` (an interval only for log rules)."""
    if i < 0:
        raise ValueError("gauge is defined on natural numbers")
    if isinstance(rule, AffineTailRule):
        v = _affine_gauge(rule, i)
        return GaugeValue(v, v)
    if isinstance(rule, LogShift):
        return _log_gauge(rule, i)
    raise TypeError(f"unsupported rule {rule!r}")


def gauge_table(rule: SequenceRule, i_max: int) -> GaugeTable:
    """Gauge values for ``i = 0..i_max`` plus a certified tail where one exists.

    For exact rules the table is extended past ``i_max`` when needed, up to
    the point from which the gauge is provably constant.
    """
    if isinstance(rule, AffineTailRule):
        n = max(i_max + 1, stable_from(rule))
        table = tuple(_affine_gauge(rule, i) for i in range(n))
        if any(b < a for a, b in zip(table, table[1:])):
            raise Falsification(f"gauge of {rule.to_json()} decreases: {table}")
        return GaugeTable(table, Affine(0, tail_cap(rule.slope)))
    vals = [gauge(rule, i) for i in range(i_max + 1)]
    lo = tuple(v.lo for v in vals)
    if all(v.exact for v in vals):
        return GaugeTable(lo, None)
    return GaugeTable(lo, None, exact=False, upper=tuple(v.hi for v in vals))


def observation_check(rule: SequenceRule, k: int, j: int) -> bool:
    """Does ``(k, k + 1/j)`` hold two or more terms?

    When it does, the gauge at k must be at least j; a smaller gauge raises
    :class:`Falsification`.
    """
    if j < 1:
        raise ValueError("j must be a positive natural")
    verdict = check_condition2(rule)
    if not verdict.holds:
        raise PreconditionError(f"rule fails condition (2) at n={verdict.witness}")
    hits = terms_in(rule, OpenInterval(Fraction(k), k + Fraction(1, j)))
    if len(hits) < 2:
        return False
    g = gauge(rule, k)
    if g.lo < j:
        if g.hi >= j:
            raise Indeterminate(f"gauge at {k} is in [{g.lo}, {g.hi}], cannot confirm >= {j}")
        raise Falsification(f"two terms in ({k}, {k}+1/{j}) but gauge({k}) = {g.lo}")
    return True


def family_bound(family: SequenceFamily, i_max: int = 0) -> FunctionRule:
    """Pointwise maximum of the members' gauges; dominates each one everywhere."""
    tables = [gauge_table(m, i_max) for m in family]
    missing = [idx for idx, t in enumerate(tables) if not t.total]
    if missing:
        n = min(len(t.table) for t in tables)
        trunc = FunctionRule(tuple(max(t.table[k] for t in tables) for k in range(n)), None)
        raise UncertifiedBound(f"members {missing} have no certified gauge tail", trunc)
    return pointwise_max(tables)


def first_index_at_least(f: FunctionRule, value: int) -> int | None:
    """Least K with ``f(k) >= value`` for every k >= K, or None if there is none."""
    if f.tail is None:
        raise PreconditionError("function has no tail")
    a, b = f.tail.a, f.tail.b
    n = len(f.table)
    if a == 0:
        if b < value:
            return None
        k_tail = n
    else:
        k_tail = max(n, ceil_q(Fraction(value - b, a)))
    if k_tail > n:
        return k_tail
    bad = [k for k in range(n) if f(k) < value]
    return bad[-1] + 1 if bad else 0


def lemma_horizon(rule: SequenceRule, bound: FunctionRule) -> int:
    """An m such that ``(k, k + 1/(bound(k)+1))`` holds at most one term for all k >= m.

    Condition (2) rules: any k where bound dominates the gauge is safe (a
    second term would push the gauge above the bound), so m is one past the
    last dominance violation.  Condition (3) rules: windows above every head
    term only meet tail terms, spaced ``slope`` apart, so once the width is at
    most the slope they hold one term at most; earlier windows are scanned.
    """
    if not bound.total:
        raise PreconditionError("bound must be a total function")
    gt = gauge_table(rule, len(bound.table))
    dom = leq_star(gt, bound)
    if not dom.holds:
        raise PreconditionError(f"bound does not dominate the gauge ({dom.status})")
    if check_condition2(rule).holds:
        return max(dom.violations) + 1 if dom.violations else 0
    if check_condition3(rule) is None or not isinstance(rule, AffineTailRule):
        raise PreconditionError("rule satisfies neither condition (2) nor condition (3)")
    need = ceil_q(1 / rule.slope) - 1
    start = first_index_at_least(bound, need)
    if start is None:
        raise PreconditionError(
            f"bound never reaches {need}, window widths stay above the tail gap {fmt(rule.slope)}"
        )
    start = max(start, stable_from(rule))
    m = 0
    for k in range(start):
        w = Fraction(1, bound(k) + 1)
        if len(terms_in(rule, OpenInterval(Fraction(k), k + w))) >= 2:
            m = k + 1
    return m
