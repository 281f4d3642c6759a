"""Exact rationals, open intervals and finite coverage predicates.

Every real quantity in the package is a :class:`fractions.Fraction`.  The only
irrational values in play (natural logarithms) are carried by
:class:`DyadicApprox`, a rational centre with an explicit error radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Union

from .errors import Indeterminate

Rational = Fraction
RationalLike = Union[Fraction, int, str]


def Q(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction, refusing floats.

    >>> Q("3/6")
    Fraction(1, 2)
    >>> Q(4)
    Fraction(4, 1)
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}; pass 'p/q' strings")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot read {value!r} as a rational")


def fmt(q: Fraction) -> str:
    """Canonical ``"p/q"`` text; the denominator is always written."""
    return f"{q.numerator}/{q.denominator}"


def floor_q(q: Fraction) -> int:
    return q.numerator // q.denominator


def ceil_q(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


@dataclass(frozen=True)
class OpenInterval:
    """The open set ``(lo, hi)`` with ``lo < hi``."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Q(self.lo))
        object.__setattr__(self, "hi", Q(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"empty open interval ({self.lo}, {self.hi})")

    def __contains__(self, x: Fraction) -> bool:
        return self.lo < x < self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def to_json(self) -> list[str]:
        return [fmt(self.lo), fmt(self.hi)]

    @classmethod
    def from_json(cls, data) -> "OpenInterval":
        lo, hi = data
        return cls(Q(lo), Q(hi))


@dataclass(frozen=True)
class IntervalList:
    items: tuple[OpenInterval, ...] = ()

    def __iter__(self) -> Iterator[OpenInterval]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, idx: int) -> OpenInterval:
        return self.items[idx]

    def __contains__(self, x: Fraction) -> bool:
        return any(x in iv for iv in self.items)

    def to_json(self) -> list[list[str]]:
        return [iv.to_json() for iv in self.items]


def normalize(items: Iterable[OpenInterval]) -> IntervalList:
    """Sort and merge overlapping open intervals.

    Intervals that merely touch, like ``(0, 1)`` and ``(1, 2)``, stay
    separate because the shared endpoint is not covered.
    """
    ivs = sorted(items, key=lambda iv: (iv.lo, iv.hi))
    merged: list[OpenInterval] = []
    for iv in ivs:
        if not iv.lo < iv.hi:
            raise ValueError(f"empty open interval ({iv.lo}, {iv.hi})")
        if merged and iv.lo < merged[-1].hi:
            last = merged[-1]
            if iv.hi > last.hi:
                merged[-1] = OpenInterval(last.lo, iv.hi)
        else:
            merged.append(iv)
    return IntervalList(tuple(merged))


def covers_interval(cover: Iterable[OpenInterval], target: OpenInterval) -> bool:
    """Decide whether the union of ``cover`` contains the open ``target``.

    Endpoint sweep: the first interval used must start at or before
    ``target.lo`` (that point is excluded), and every later interval must
    start strictly before the covered reach, since the reach point itself is
    not covered by an open interval ending there.
    """
    reach = target.lo
    started = False
    for iv in sorted(cover, key=lambda iv: iv.lo):
        if iv.hi <= reach:
            continue
        if iv.lo > reach or (started and iv.lo == reach):
            return False
        reach = iv.hi
        started = True
        if reach >= target.hi:
            return True
    return False


@dataclass(frozen=True)
class DyadicApprox:
    """An unknown real ``y`` with ``|y - value| <= error``."""

    value: Fraction
    error: Fraction = Fraction(0)

    @property
    def lower(self) -> Fraction:
        return self.value - self.error

    @property
    def upper(self) -> Fraction:
        return self.value + self.error

    @property
    def exact(self) -> bool:
        return self.error == 0

    def __add__(self, other: "DyadicApprox | Fraction | int") -> "DyadicApprox":
        if isinstance(other, DyadicApprox):
            return DyadicApprox(self.value + other.value, self.error + other.error)
        return DyadicApprox(self.value + other, self.error)

    __radd__ = __add__

    def __sub__(self, other: "DyadicApprox | Fraction | int") -> "DyadicApprox":
        if isinstance(other, DyadicApprox):
            return DyadicApprox(self.value - other.value, self.error + other.error)
        return DyadicApprox(self.value - other, self.error)

    def compare(self, q: Fraction) -> int | None:
        """Sign of ``y - q`` when certain, ``None`` when the error straddles ``q``."""
        if self.lower > q:
            return 1
        if self.upper < q:
            return -1
        if self.error == 0:
            return 0
        return None

    def must_compare(self, q: Fraction) -> int:
        c = self.compare(q)
        if c is None:
            raise Indeterminate(f"approximation {self.value}±{self.error} straddles {q}")
        return c

    def to_json(self) -> dict:
        return {"value": fmt(self.value), "error": fmt(self.error)}


def _atanh_partial(z: Fraction, tol: Fraction) -> Fraction:
    """Partial sum ``S`` of atanh(z) = sum z^(2k+1)/(2k+1) with ``0 <= atanh(z) - S <= tol``.

    Requires ``0 <= z < 1``.  The tail after K terms is bounded by
    ``z^(2K+1) / ((2K+1)(1 - z^2))``.
    """
    zz = z * z
    power = z
    total = Fraction(0)
    k = 0
    while True:
        total += power / (2 * k + 1)
        k += 1
        power *= zz
        if power / ((2 * k + 1) * (1 - zz)) <= tol:
            return total


@lru_cache(maxsize=64)
def _ln2_partial(tol_exp: int, scale: int) -> Fraction:
    # lower bound for ln 2 within 2^-tol_exp / scale
    return 2 * _atanh_partial(Fraction(1, 3), Fraction(1, 2 ** (tol_exp + 1) * scale))


def ln_approx(m: int, precision: int) -> DyadicApprox:
    """Natural logarithm of the positive integer ``m`` with error at most ``2**-precision``.

    The value is a dyadic rational with denominator ``2**(precision + 2)``.
    ``ln 1 = 0`` is returned exactly.
    """
    if m < 1:
        raise ValueError("logarithm needs a positive integer")
    if precision < 1:
        raise ValueError("precision must be positive")
    if m == 1:
        return DyadicApprox(Fraction(0), Fraction(0))
    e = m.bit_length() - 1
    y = Fraction(m, 1 << e)  # in [1, 2)
    z = (y - 1) / (y + 1)  # in [0, 1/3)
    tol_exp = precision + 3
    lower = Fraction(0)
    if z:
        lower += 2 * _atanh_partial(z, Fraction(1, 2 ** (tol_exp + 1)))
    if e:
        lower += e * _ln2_partial(tol_exp, e)
    # true value lies in [lower, lower + 2^-(precision+2)]
    grid = 1 << (precision + 2)
    value = Fraction(round(lower * grid), grid)
    return DyadicApprox(value, Fraction(1, 1 << (precision + 1)))


class IntervalIndex:
    """Point-location over a fixed list of intervals using unit-width integer buckets."""

    def __init__(self, intervals: Iterable[OpenInterval]):
        self.intervals = tuple(intervals)
        self._buckets: dict[int, list[int]] = {}
        for idx, iv in enumerate(self.intervals):
            for u in range(floor_q(iv.lo), ceil_q(iv.hi)):
                self._buckets.setdefault(u, []).append(idx)

    def find(self, x: Fraction) -> list[int]:
        """Indices of the intervals containing ``x``."""
        return [i for i in self._buckets.get(floor_q(x), ()) if x in self.intervals[i]]
