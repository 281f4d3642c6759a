"""Certified sequences converging to infinity, and functions omega -> omega.

A sequence is never a raw stream here.  Each rule knows, in closed form,
where it becomes strictly increasing (``monotone_index``), an index past
which all terms exceed a bound (``divergence_modulus``) and bounds on its
gaps (``gap_envelope``).  Those facts turn later coverage questions into
finite computations.

Exact kinds (arithmetic, explicit, jitter) are all *eventually affine*:
``a_n = slope * n + offset`` for ``n >= len(head)``, with a finite ``head``
of arbitrary terms before that.  The logarithmic kind is the only one with
irrational terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, ClassVar

from .errors import PreconditionError
from .exact import (
    DyadicApprox,
    OpenInterval,
    Q,
    ceil_q,
    floor_q,
    fmt,
    ln_approx,
)

# ---------------------------------------------------------------------------
# Functions omega -> omega


@dataclass(frozen=True)
class Affine:
    """Tail ``k -> a*k + b`` (a constant when ``a == 0``)."""

    a: int
    b: int

    def __call__(self, k: int) -> int:
        return self.a * k + self.b

    def to_json(self) -> dict:
        if self.a == 0:
            return {"constant": self.b}
        return {"affine": {"a": self.a, "b": self.b}}

    @classmethod
    def from_json(cls, data) -> "Affine | None":
        if data == "undefined" or data is None:
            return None
        if "constant" in data:
            return cls(0, int(data["constant"]))
        if "affine" in data:
            return cls(int(data["affine"]["a"]), int(data["affine"]["b"]))
        raise PreconditionError(f"unknown tail {data!r}")


@dataclass(frozen=True)
class FunctionRule:
    """A function omega -> omega: a finite table, then a closed-form tail.

    ``tail=None`` means the function is only known on its table.
    """

    table: tuple[int, ...] = ()
    tail: Affine | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if any(v < 0 for v in self.table):
            raise PreconditionError("function values must be natural numbers")
        if self.tail is not None:
            if self.tail.a < 0 or self.tail(len(self.table)) < 0:
                raise PreconditionError("tail must stay natural (a >= 0, a*len+b >= 0)")

    @classmethod
    def constant(cls, c: int) -> "FunctionRule":
        return cls((), Affine(0, c))

    @classmethod
    def affine(cls, a: int, b: int, table: tuple[int, ...] = ()) -> "FunctionRule":
        return cls(tuple(table), Affine(a, b))

    @property
    def total(self) -> bool:
        return self.tail is not None

    def __call__(self, k: int) -> int:
        if k < 0:
            raise ValueError("functions are defined on natural numbers only")
        if k < len(self.table):
            return self.table[k]
        if self.tail is None:
            raise PreconditionError(f"function undefined beyond its table (k={k})")
        return self.tail(k)

    def values(self, n: int) -> list[int]:
        return [self(k) for k in range(n)]

    def to_json(self) -> dict:
        return {
            "table": list(self.table),
            "tail": "undefined" if self.tail is None else self.tail.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "FunctionRule":
        return cls(tuple(data.get("table", ())), Affine.from_json(data.get("tail", "undefined")))


# ---------------------------------------------------------------------------
# psi : omega -> Q+


def calkin_wilf(n: int) -> Fraction:
    """The n-th term of the Calkin-Wilf enumeration of the positive rationals.

    Reads the binary expansion of ``n + 1`` below its leading bit: a 0 bit
    moves to the left child ``a/(a+b)``, a 1 bit to the right child
    ``(a+b)/b``.
    """
    if n < 0:
        raise ValueError("index must be natural")
    a, b = 1, 1
    for bit in bin(n + 1)[3:]:
        if bit == "0":
            b = a + b
        else:
            a = a + b
    return Fraction(a, b)


# ---------------------------------------------------------------------------
# Verdicts


@dataclass(frozen=True)
class ConditionVerdict:
    """Outcome of checking a condition on a sequence rule.

    ``horizon`` is ``math.inf`` when the verdict is certified for every index.
    """

    status: str  # "holds" | "fails" | "unknown-beyond-horizon"
    witness: int | Fraction | None = None
    horizon: float | int = math.inf
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    def to_json(self) -> dict:
        w = self.witness
        return {
            "status": self.status,
            "witness": fmt(w) if isinstance(w, Fraction) else w,
            "horizon": "inf" if self.horizon == math.inf else self.horizon,
            "note": self.note,
        }


POSITIVE_FIRST_GAP_NOTE = "all gaps required positive, including a_1 - a_0"


class WindowTerms(list):
    """Indices of terms inside a window.

    A plain list of certain indices, plus ``uncertain``: indices whose
    approximation straddles a window endpoint (logarithmic rules only).
    """

    def __init__(self, indices=(), uncertain=()):
        super().__init__(indices)
        self.uncertain = tuple(uncertain)


# ---------------------------------------------------------------------------
# Sequence rules


class SequenceRule:
    """Base class for certified sequences converging to infinity."""

    kind: ClassVar[str] = ""
    exact: ClassVar[bool] = True

    def term(self, n: int) -> Fraction | DyadicApprox:
        raise NotImplementedError

    @property
    def monotone_index(self) -> int:
        raise NotImplementedError

    def divergence_modulus(self, bound: Fraction) -> int:
        raise NotImplementedError

    def gap_envelope(self, m: int) -> tuple[Fraction, Fraction]:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


class AffineTailRule(SequenceRule):
    """Exact rules of the form ``head`` followed by ``slope*n + offset``."""

    head: tuple[Fraction, ...]
    slope: Fraction
    offset: Fraction

    def term(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("index must be natural")
        head = self.head
        if n < len(head):
            return head[n]
        a, b, d = self._tail_ints
        return Fraction(a * n + b, d)

    @cached_property
    def _tail_ints(self) -> tuple[int, int, int]:
        # slope * n + offset == (a*n + b) / d in integers
        d = self.lattice_denominator
        return int(self.slope * d), int(self.offset * d), d

    @property
    def tail_start(self) -> int:
        return len(self.head)

    @cached_property
    def head_max(self) -> Fraction:
        """Largest of ``a_0 .. a_R`` with R the tail start; every term above it is a tail term."""
        return max(self.term(n) for n in range(self.tail_start + 1))

    @cached_property
    def lattice_denominator(self) -> int:
        """D with ``D * a_n`` an integer for every tail index n."""
        return math.lcm(self.slope.denominator, self.offset.denominator)

    @cached_property
    def monotone_index(self) -> int:
        for n in range(self.tail_start - 1, -1, -1):
            if not self.term(n + 1) > self.term(n):
                return n + 1
        return 0

    def divergence_modulus(self, bound: Fraction) -> int:
        bound = Q(bound)
        return max(self.tail_start, floor_q((bound - self.offset) / self.slope) + 1)

    def gaps(self, upto: int) -> list[Fraction]:
        """Exact gaps ``a_{n+1} - a_n`` for ``n < upto``."""
        terms = [self.term(n) for n in range(upto + 1)]
        return [b - a for a, b in zip(terms, terms[1:])]

    def gap_envelope(self, m: int) -> tuple[Fraction, Fraction]:
        if m >= self.tail_start:
            return self.slope, self.slope
        gs = self.gaps(self.tail_start)[m:] + [self.slope]
        return min(gs), max(gs)


@dataclass(frozen=True)
class Arithmetic(AffineTailRule):
    """``a_n = (n + 1) * x``."""

    x: Fraction
    kind: ClassVar[str] = "arithmetic"

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", Q(self.x))
        if self.x <= 0:
            raise PreconditionError(f"arithmetic(x) converges to infinity only for x > 0 (got {self.x})")

    @property
    def head(self) -> tuple[Fraction, ...]:
        return ()

    @property
    def slope(self) -> Fraction:
        return self.x

    @property
    def offset(self) -> Fraction:
        return self.x

    def divergence_modulus(self, bound: Fraction) -> int:
        return max(0, ceil_q(Q(bound) / self.x))

    def to_json(self) -> dict:
        return {"kind": self.kind, "x": fmt(self.x)}


@dataclass(frozen=True)
class Explicit(AffineTailRule):
    """Listed prefix, then ``a_n = slope * n + offset`` for ``n >= len(prefix)``."""

    prefix: tuple[Fraction, ...]
    tail_slope: Fraction
    tail_offset: Fraction = Fraction(0)
    kind: ClassVar[str] = "explicit"

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(Q(v) for v in self.prefix))
        object.__setattr__(self, "tail_slope", Q(self.tail_slope))
        object.__setattr__(self, "tail_offset", Q(self.tail_offset))
        if self.tail_slope <= 0:
            raise PreconditionError("explicit tail slope must be positive")

    @property
    def head(self) -> tuple[Fraction, ...]:
        return self.prefix

    @property
    def slope(self) -> Fraction:
        return self.tail_slope

    @property
    def offset(self) -> Fraction:
        return self.tail_offset

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "prefix": [fmt(v) for v in self.prefix],
            "tail": {"slope": fmt(self.tail_slope), "offset": fmt(self.tail_offset)},
        }


@dataclass(frozen=True)
class Jitter(AffineTailRule):
    """``a_n = base_n + psi(slots(n))`` with psi the Calkin-Wilf enumeration.

    The perturbation is positive, so divergence is inherited from ``base``.
    ``slots`` must have a constant tail; the perturbation is then eventually
    constant and the rule stays eventually affine.
    """

    base: AffineTailRule
    slots: FunctionRule
    kind: ClassVar[str] = "jitter"

    def __post_init__(self) -> None:
        if not isinstance(self.base, AffineTailRule):
            raise PreconditionError("jitter base must be an exact (arithmetic/explicit/jitter) rule")
        if not self.slots.total:
            raise PreconditionError("jitter slots must be a total function")
        if self.slots.tail.a != 0:
            raise PreconditionError("jitter slots need a constant tail for certified gap metadata")

    @cached_property
    def head(self) -> tuple[Fraction, ...]:
        r = max(self.base.tail_start, len(self.slots.table))
        return tuple(self.base.term(n) + calkin_wilf(self.slots(n)) for n in range(r))

    @property
    def slope(self) -> Fraction:
        return self.base.slope

    @cached_property
    def offset(self) -> Fraction:
        return self.base.offset + calkin_wilf(self.slots.tail.b)

    def to_json(self) -> dict:
        return {"kind": self.kind, "base": self.base.to_json(), "slots": self.slots.to_json()}


@dataclass(frozen=True)
class LogShift(SequenceRule):
    """``a_n = x + ln(n + 1)``, evaluated to ``precision`` bits."""

    x: Fraction
    precision: int = 20
    kind: ClassVar[str] = "logshift"
    exact: ClassVar[bool] = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", Q(self.x))
        if self.precision < 1:
            raise PreconditionError("precision must be a positive integer")

    def term(self, n: int) -> DyadicApprox:
        if n < 0:
            raise ValueError("index must be natural")
        return ln_approx(n + 1, self.precision) + self.x

    @property
    def monotone_index(self) -> int:
        return 0

    def divergence_modulus(self, bound: Fraction) -> int:
        """Certified: the returned N has ``lower(a_N) > bound``; the rule is increasing."""
        bound = Q(bound)
        if bound < self.x:
            return 0
        hi = 1
        while not self.term(hi).lower > bound:
            hi *= 2
        lo = hi // 2  # lower(a_lo) <= bound or lo == 0
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.term(mid).lower > bound:
                hi = mid
            else:
                lo = mid
        return hi

    def gap_bounds(self, n: int) -> tuple[Fraction, Fraction]:
        """Strict bounds ``1/(n+2) < ln((n+2)/(n+1)) < 1/(n+1)`` on the n-th gap."""
        return Fraction(1, n + 2), Fraction(1, n + 1)

    def gap_envelope(self, m: int) -> tuple[Fraction, Fraction]:
        # gaps decrease to 0: the infimum over n >= m is 0, the supremum is the m-th gap
        return Fraction(0), Fraction(1, m + 1)

    def to_json(self) -> dict:
        return {"kind": self.kind, "x": fmt(self.x), "precision": self.precision}


# ---------------------------------------------------------------------------
# Construction


def make_rule(spec: dict[str, Any] | SequenceRule) -> SequenceRule:
    """Build a rule from its JSON-style description.

    >>> make_rule({"kind": "arithmetic", "x": "1/2"}).term(2)
    Fraction(3, 2)
    """
    if isinstance(spec, SequenceRule):
        return spec
    kind = spec.get("kind")
    if kind == "arithmetic":
        return Arithmetic(Q(spec["x"]))
    if kind == "logshift":
        return LogShift(Q(spec.get("x", 0)), int(spec.get("precision", 20)))
    if kind == "explicit":
        tail = spec.get("tail", {})
        if "slope" not in tail:
            raise PreconditionError("explicit rules need an affine tail with a slope")
        return Explicit(
            tuple(Q(v) for v in spec.get("prefix", ())),
            Q(tail["slope"]),
            Q(tail.get("offset", 0)),
        )
    if kind == "jitter":
        base = make_rule(spec["base"])
        return Jitter(base, FunctionRule.from_json(spec["slots"]))
    raise PreconditionError(f"unknown sequence kind {kind!r}")


def term(rule: SequenceRule, n: int) -> Fraction | DyadicApprox:
    return rule.term(n)


# ---------------------------------------------------------------------------
# Window scans


def terms_in(rule: SequenceRule, window: OpenInterval) -> WindowTerms:
    """All indices n with ``a_n`` in the open ``window``, in increasing order."""
    if isinstance(rule, AffineTailRule):
        return _affine_terms_in(rule, window)
    if isinstance(rule, LogShift):
        return _log_terms_in(rule, window)
    raise TypeError(f"unsupported rule {rule!r}")


def _affine_terms_in(rule: AffineTailRule, window: OpenInterval) -> WindowTerms:
    lo, hi = window.lo, window.hi
    out = [n for n, t in enumerate(rule.head) if lo < t < hi]
    s, o, r = rule.slope, rule.offset, rule.tail_start
    first = max(r, floor_q((lo - o) / s) + 1)
    last = ceil_q((hi - o) / s) - 1
    out.extend(range(first, last + 1))
    return WindowTerms(out)


def _log_boundary(rule: LogShift, q: Fraction) -> tuple[int, list[int]]:
    """Split indices n >= 1 around ``q``.

    Returns ``(b, unsure)``: for n >= 1 outside ``unsure``, ``a_n < q`` iff
    ``n < b``.  Terms with n >= 1 are irrational, so none equals ``q``.
    """
    n_hi = max(1, rule.divergence_modulus(q))
    lo, hi = 0, n_hi  # value(a_hi) > q is certain at n_hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if rule.term(mid).value > q:
            hi = mid
        else:
            lo = mid
    b = max(hi, 1)
    unsure = []
    n = b - 1
    while n >= 1 and rule.term(n).compare(q) is None:
        unsure.append(n)
        n -= 1
    below_ok = n < 1 or rule.term(n).compare(q) == -1
    n = b
    while rule.term(n).compare(q) is None:
        unsure.append(n)
        n += 1
    above_ok = rule.term(n).compare(q) == 1
    if not (below_ok and above_ok):
        # approximations out of order around q; fall back to a full scan
        unsure = []
        b = None
        for k in range(1, n_hi + 1):
            c = rule.term(k).compare(q)
            if c is None:
                unsure.append(k)
            elif c == 1 and b is None:
                b = k
        b = n_hi if b is None else b
        return b, unsure
    return b, sorted(unsure)


def _log_terms_in(rule: LogShift, window: OpenInterval) -> WindowTerms:
    out: list[int] = []
    if rule.x in window:
        out.append(0)
    b_lo, u_lo = _log_boundary(rule, window.lo)
    b_hi, u_hi = _log_boundary(rule, window.hi)
    unsure = set(u_lo) | set(u_hi)
    out.extend(n for n in range(max(b_lo, 1), b_hi) if n not in unsure)
    return WindowTerms(out, sorted(unsure))


# ---------------------------------------------------------------------------
# Conditions on gaps


def check_condition2(rule: SequenceRule) -> ConditionVerdict:
    """Gaps positive and non-increasing.

    Fails with the first n >= 1 where ``a_{n+1} - a_n > a_n - a_{n-1}``, or
    the first n whose gap is not positive (n = 0 included).
    """
    if isinstance(rule, LogShift):
        return ConditionVerdict("holds", note="log gaps are positive and strictly decreasing")
    gaps = rule.gaps(rule.tail_start + 1)
    for n, gap in enumerate(gaps):
        if gap <= 0:
            note = POSITIVE_FIRST_GAP_NOTE if n == 0 else "non-positive gap"
            return ConditionVerdict("fails", witness=n, note=note)
        if n >= 1 and gap > gaps[n - 1]:
            return ConditionVerdict("fails", witness=n, note="gap increased")
    return ConditionVerdict("holds", note=POSITIVE_FIRST_GAP_NOTE)


def check_condition3(rule: SequenceRule) -> Fraction | None:
    """A constant r > 0 below every gap (half the gap infimum), or None."""
    if isinstance(rule, LogShift):
        return None
    low, _ = rule.gap_envelope(0)
    if low <= 0:
        return None
    return low / 2
