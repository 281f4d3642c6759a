"""Window schemes with dyadic slot packing, and per-window slot readings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import Indeterminate, PreconditionError
from ..exact import OpenInterval, ceil_q, floor_q
from ..sequences import AffineTailRule, FunctionRule, SequenceRule, make_rule, terms_in

PACKING = "dyadic-v1"


def _floor_log2(v: Fraction) -> int:
    # only called with v > 1
    e = v.numerator.bit_length() - v.denominator.bit_length()
    if v.numerator < v.denominator << e:
        e -= 1
    return e


class DyadicPacking:
    """Windows ``(base(k), base(k) + width(k))``, each packed with slots

        slot(k, i) = (base + width * 2^-(i+2), base + width * 2^-(i+1)),

    which are disjoint, non-empty and fill the lower half of the window
    (minus the dyadic endpoints themselves).
    """

    def base(self, k: int) -> Fraction:
        raise NotImplementedError

    def width(self, k: int) -> Fraction:
        raise NotImplementedError

    def locate(self, x: Fraction) -> int | None:
        """The window containing ``x``, if any."""
        raise NotImplementedError

    def tail_region(self, rules: list[AffineTailRule]) -> int:
        """A K such that for k >= K every window holds only tail terms of the rules
        and its width is at most :meth:`tail_width`."""
        raise NotImplementedError

    def tail_width(self, k_from: int) -> Fraction:
        raise NotImplementedError

    def base_denominator(self) -> int:
        """Common denominator of ``base(k)`` for k in the tail region."""
        raise NotImplementedError

    def window(self, k: int) -> OpenInterval:
        b = self.base(k)
        return OpenInterval(b, b + self.width(k))

    def slot(self, k: int, i: int) -> OpenInterval:
        if i < 0:
            raise ValueError("slot index must be natural")
        b, w = self.base(k), self.width(k)
        return OpenInterval(b + w / (1 << (i + 2)), b + w / (1 << (i + 1)))

    def in_slot(self, k: int, i: int, t: Fraction) -> bool:
        return t in self.slot(k, i)

    def slot_of(self, k: int, t: Fraction) -> int | None:
        """Index of the slot of window k containing ``t``, or None when ``t`` is
        in the window but in no slot (upper half, or a dyadic endpoint)."""
        u = (t - self.base(k)) / self.width(k)
        if not 0 < u < 1:
            raise ValueError(f"{t} is not inside window {k}")
        if u >= Fraction(1, 2):
            return None
        v = 1 / u  # > 2
        e = _floor_log2(v)
        if v == (1 << e):
            return None
        return e - 1

    def continuation_slot(self, rules: list[AffineTailRule], k_from: int) -> int:
        """A slot index G >= 1 that no term of any rule can occupy in windows k > k_from.

        Beyond the tail region, ``t - base(k)`` is a positive multiple of 1/D
        (D the common lattice denominator), while slot G sits entirely below
        ``width * 2^-(G+1) <= 1/D``.
        """
        d = self.base_denominator()
        for r in rules:
            d = math.lcm(d, r.lattice_denominator)
        need = self.tail_width(k_from) * d
        g = 1
        while (1 << (g + 1)) < need:
            g += 1
        return g


@dataclass(frozen=True)
class WindowScheme(DyadicPacking):
    """Windows ``(k, k + 1/(f(k)+1))`` for a bound f."""

    bound: FunctionRule

    def __post_init__(self) -> None:
        if not self.bound.total:
            raise PreconditionError("window scheme needs a total bound")

    def base(self, k: int) -> Fraction:
        return Fraction(k)

    def width(self, k: int) -> Fraction:
        return Fraction(1, self.bound(k) + 1)

    def locate(self, x: Fraction) -> int | None:
        # integer test of 0 < x - k < 1/(f(k)+1) with k = floor(x)
        p, q = x.numerator, x.denominator
        k, rem = divmod(p, q)
        if k >= 0 and rem and rem * (self.bound(k) + 1) < q:
            return k
        return None

    def in_slot(self, k: int, i: int, t: Fraction) -> bool:
        # u = (t - k) * (f(k) + 1) must lie in (2^-(i+2), 2^-(i+1))
        p, q = t.numerator, t.denominator
        num = (p - k * q) * (self.bound(k) + 1)
        return q < num << (i + 2) and num << (i + 1) < q

    def tail_region(self, rules: list[AffineTailRule]) -> int:
        top = max((ceil_q(r.head_max) for r in rules), default=0)
        return max(0, top, len(self.bound.table))

    def tail_width(self, k_from: int) -> Fraction:
        # the tail is non-decreasing, so widths are largest at the first tail index
        return self.width(max(k_from + 1, len(self.bound.table)))

    def base_denominator(self) -> int:
        return 1

    def to_json(self) -> dict:
        return {"bound": self.bound.to_json()}


@dataclass(frozen=True)
class PeakWitness:
    """Interleaved ``x_0 < y_0 < x_1 < y_1 < ...`` given by two exact rules.

    Both tails must share their slope, with ``0 < y_offset - x_offset < slope``.
    """

    xs: AffineTailRule
    ys: AffineTailRule

    def __post_init__(self) -> None:
        object.__setattr__(self, "xs", make_rule(self.xs))
        object.__setattr__(self, "ys", make_rule(self.ys))
        if not (isinstance(self.xs, AffineTailRule) and isinstance(self.ys, AffineTailRule)):
            raise PreconditionError("peak sequences must be exact rules")
        if self.xs.slope != self.ys.slope:
            raise PreconditionError("peak sequences need equal tail slopes to stay interleaved")
        gap = self.ys.offset - self.xs.offset
        if not 0 < gap < self.xs.slope:
            raise PreconditionError("peak tails are not interleaved")
        for k in range(self.tail_start + 1):
            if not self.x(k) < self.y(k) < self.x(k + 1):
                raise PreconditionError(f"peaks not interleaved at k={k}")

    @classmethod
    def affine(cls, slope, x_offset, y_offset) -> "PeakWitness":
        from ..sequences import Explicit

        return cls(Explicit((), slope, x_offset), Explicit((), slope, y_offset))

    @property
    def tail_start(self) -> int:
        return max(self.xs.tail_start, self.ys.tail_start)

    def x(self, k: int) -> Fraction:
        return self.xs.term(k)

    def y(self, k: int) -> Fraction:
        return self.ys.term(k)

    def interval(self, k: int) -> OpenInterval:
        return OpenInterval(self.x(k), self.y(k))

    def to_json(self) -> dict:
        return {"x": self.xs.to_json(), "y": self.ys.to_json()}

    @classmethod
    def from_json(cls, data) -> "PeakWitness":
        return cls(make_rule(data["x"]), make_rule(data["y"]))


@dataclass(frozen=True)
class PeakScheme(DyadicPacking):
    """Windows ``(x_k, y_k)`` of a peak witness."""

    peaks: PeakWitness

    def base(self, k: int) -> Fraction:
        return self.peaks.x(k)

    def width(self, k: int) -> Fraction:
        return self.peaks.y(k) - self.peaks.x(k)

    def locate(self, x: Fraction) -> int | None:
        p = self.peaks
        r = p.tail_start
        for k in range(r):
            if x in p.interval(k):
                return k
        k = floor_q((x - p.xs.offset) / p.xs.slope)
        if k >= r and x in p.interval(k):
            return k
        return None

    def first_at_or_above(self, value: Fraction) -> int:
        """Least k in the tail with ``x_k >= value``."""
        p = self.peaks
        return max(p.tail_start, ceil_q((value - p.xs.offset) / p.xs.slope))

    def tail_region(self, rules: list[AffineTailRule]) -> int:
        top = max((r.head_max for r in rules), default=Fraction(0))
        return self.first_at_or_above(top)

    def tail_width(self, k_from: int) -> Fraction:
        return self.peaks.ys.offset - self.peaks.xs.offset

    def base_denominator(self) -> int:
        return self.peaks.xs.lattice_denominator

    def to_json(self) -> dict:
        return {"peaks": self.peaks.to_json()}


def scheme_from_json(data: dict) -> DyadicPacking:
    if "bound" in data:
        return WindowScheme(FunctionRule.from_json(data["bound"]))
    if "peaks" in data:
        return PeakScheme(PeakWitness.from_json(data["peaks"]))
    raise PreconditionError("evasion set names neither a bound nor peaks")


def window_scheme(bound_f: FunctionRule) -> WindowScheme:
    return WindowScheme(bound_f)


# ---------------------------------------------------------------------------
# Reading a window


@dataclass(frozen=True)
class WindowReading:
    k: int
    slotted: tuple[tuple[int, int], ...]  # (term index, slot index)
    unslotted: tuple[int, ...]  # in the window but in no slot

    @property
    def s(self) -> int:
        """Smallest occupied slot, or 0 when no slot holds a term."""
        return min((i for _, i in self.slotted), default=0)

    @property
    def in_slots(self) -> int:
        return len(self.slotted)


def read_window(rule: SequenceRule, k: int, scheme: DyadicPacking) -> WindowReading:
    hits = terms_in(rule, scheme.window(k))
    if hits.uncertain:
        raise Indeterminate(f"terms {list(hits.uncertain)} straddle the edge of window {k}")
    slotted, loose = [], []
    for n in hits:
        t = rule.term(n)
        if not isinstance(t, Fraction):
            raise Indeterminate("slot readings need exact terms")
        i = scheme.slot_of(k, t)
        if i is None:
            loose.append(n)
        else:
            slotted.append((n, i))
    return WindowReading(k, tuple(slotted), tuple(loose))


def slot_selector(rule: SequenceRule, k: int, scheme: DyadicPacking) -> int:
    """0 when no slot of window k holds a term, else the first occupied slot."""
    return read_window(rule, k, scheme).s


def mex(values) -> int:
    """Least natural number not in ``values``."""
    seen = set(values)
    n = 0
    while n in seen:
        n += 1
    return n
