"""Continuous tent functions supported on U.

On each kept interval (c, d) the function rises linearly from 0 at c to 1 at
the midpoint and falls back to 0 at d; it is 0 everywhere else.  A member
sequence meets U only finitely often, so f(a_n) is eventually 0, while f
reaches 1 in every window and so has no limit 0 at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..exact import IntervalIndex, OpenInterval, Q, fmt
from .evasion import EvasionSet


def tent(iv: OpenInterval, x: Fraction) -> Fraction:
    if x not in iv:
        return Fraction(0)
    mid = iv.midpoint
    if x <= mid:
        return (x - iv.lo) / (mid - iv.lo)
    return (iv.hi - x) / (iv.hi - mid)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Linear interpolation through ``breakpoints``, 0 outside their span.

    With ``rule`` set, tents for the windows past the listed breakpoints are
    generated from the evasion set on demand.
    """

    breakpoints: tuple[tuple[Fraction, Fraction], ...]
    rule: EvasionSet | None = None

    def __post_init__(self) -> None:
        xs = [x for x, _ in self.breakpoints]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints must strictly increase")

    def _segments(self) -> IntervalIndex:
        idx = self.__dict__.get("_index")
        if idx is None:
            pts = self.breakpoints
            idx = IntervalIndex(OpenInterval(a[0], b[0]) for a, b in zip(pts, pts[1:]))
            self.__dict__["_index"] = idx
        return idx

    def _cut(self) -> Fraction | None:
        if "_start" not in self.__dict__:
            self.__dict__["_start"] = None if self.rule is None else self.rule.continuation_start
        return self.__dict__["_start"]

    def __call__(self, x: Fraction) -> Fraction:
        x = Q(x)
        cut = self._cut()
        # x >= cut, cross-multiplied (this path runs once per sequence term)
        if cut is not None and x.numerator * cut.denominator >= cut.numerator * x.denominator:
            scheme = self.rule.scheme
            k = scheme.locate(x)
            if k is None or not scheme.in_slot(k, self.rule.g(k), x):
                return Fraction(0)
            return tent(self.rule.interval(k), x)
        pts = self.breakpoints
        if not pts or x < pts[0][0] or x > pts[-1][0]:
            return Fraction(0)
        for i in self._segments().find(x):
            (x0, y0), (x1, y1) = pts[i], pts[i + 1]
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        return dict(pts)[x]  # x is a breakpoint

    def to_json(self) -> dict:
        return {"breakpoints": [[fmt(x), fmt(y)] for x, y in self.breakpoints]}

    @classmethod
    def from_json(cls, data) -> "PiecewiseLinear":
        pts = data["breakpoints"] if isinstance(data, dict) else data
        return cls(tuple((Q(x), Q(y)) for x, y in pts))


def build_bump(eset: EvasionSet, k_max: int) -> PiecewiseLinear:
    """Tents on U's intervals for windows 0..k_max, continued by ``eset`` beyond."""
    if k_max > eset.k_max:
        raise ValueError("k_max exceeds the evasion set's explicit range")
    pts: list[tuple[Fraction, Fraction]] = []
    for k in range(k_max + 1):
        iv = eset.interval(k)
        pts += [(iv.lo, Fraction(0)), (iv.midpoint, Fraction(1)), (iv.hi, Fraction(0))]
    cut = EvasionSet(eset.scheme, eset.g, k_max, eset.chosen[: k_max + 1])
    return PiecewiseLinear(tuple(pts), cut)


def eval_pwl(f: PiecewiseLinear, x: Fraction) -> Fraction:
    return f(x)
