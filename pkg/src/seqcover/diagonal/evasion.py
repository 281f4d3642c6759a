"""The diagonal open set U and certificates that each sequence meets it finitely often.

For every window k each member reads off the first slot holding one of its
terms (0 when none does).  The diagonal g(k) is the least slot index no
member read, and U is the union of slot(k, g(k)).  A member that has at most
one term in window k keeps that term out of slot(k, g(k)); only the finitely
many windows where a member crowds two or more terms can contribute hits, and
those are counted exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..covering import SequenceFamily, family_bound, lemma_horizon
from ..errors import PreconditionError
from ..exact import IntervalIndex, OpenInterval, fmt
from ..sequences import (
    Affine,
    AffineTailRule,
    FunctionRule,
    check_condition2,
    check_condition3,
    terms_in,
)
from .windows import (
    PACKING,
    DyadicPacking,
    PeakScheme,
    PeakWitness,
    WindowReading,
    WindowScheme,
    mex,
    read_window,
    scheme_from_json,
)


@dataclass(frozen=True)
class EvasionSet:
    """A k_max truncation of U plus the rule generating the rest.

    ``chosen[k]`` is the interval kept for window k <= k_max; beyond that the
    interval is ``slot(k, g(k))`` with g's constant tail.
    """

    scheme: DyadicPacking
    g: FunctionRule
    k_max: int
    chosen: tuple[OpenInterval, ...]

    def interval(self, k: int) -> OpenInterval:
        if k <= self.k_max:
            return self.chosen[k]
        return self.scheme.slot(k, self.g(k))

    @property
    def continuation_start(self) -> Fraction:
        return self.scheme.base(self.k_max + 1)

    def to_json(self) -> dict:
        out = self.scheme.to_json()
        out.update(
            {
                "g": self.g.to_json(),
                "k_max": self.k_max,
                "chosen": [iv.to_json() for iv in self.chosen],
                "packing": PACKING,
            }
        )
        return out

    @classmethod
    def from_json(cls, data: dict) -> "EvasionSet":
        if data.get("packing", PACKING) != PACKING:
            raise PreconditionError(f"unknown packing {data.get('packing')!r}")
        return cls(
            scheme_from_json(data),
            FunctionRule.from_json(data["g"]),
            int(data["k_max"]),
            tuple(OpenInterval.from_json(iv) for iv in data["chosen"]),
        )


@dataclass(frozen=True)
class FinitenessCertificate:
    """How many terms of one member can fall in U, over all indices.

    ``A``: windows where g agrees with the member's slot reading.
    ``B``: windows where the member has two or more terms in slots.
    Hits are possible only in windows before ``scan_limit``; those are
    counted exactly into ``term_bound``.
    """

    member: int
    A: tuple[int, ...]
    B: tuple[int, ...]
    term_bound: int
    last_hit_index: int | None
    scan_limit: int = 0
    unslotted: tuple[tuple[int, int], ...] = ()

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "A": list(self.A),
            "B": list(self.B),
            "term_bound": self.term_bound,
            "last_hit_index": self.last_hit_index,
            "scan_limit": self.scan_limit,
            "unslotted": [list(p) for p in self.unslotted],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FinitenessCertificate":
        return cls(
            int(data["member"]),
            tuple(data.get("A", ())),
            tuple(data.get("B", ())),
            int(data["term_bound"]),
            data.get("last_hit_index"),
            int(data.get("scan_limit", 0)),
            tuple(tuple(p) for p in data.get("unslotted", ())),
        )


def _exact_members(family: SequenceFamily) -> list[AffineTailRule]:
    for idx, rule in enumerate(family):
        if not isinstance(rule, AffineTailRule):
            raise PreconditionError(
                f"member {idx} ({rule.kind}) has no certified gauge tail; only exact rules are supported"
            )
    return list(family.members)


def _assemble(
    family: SequenceFamily,
    scheme: DyadicPacking,
    k_max: int,
    scan_limits: list[int],
    multi: list[tuple[int, ...] | None],
) -> tuple[EvasionSet, list[FinitenessCertificate]]:
    rules = _exact_members(family)
    k_top = max(k_max, scheme.tail_region(rules))
    readings: list[list[WindowReading]] = [
        [read_window(rule, k, scheme) for k in range(k_top + 1)] for rule in rules
    ]
    table = tuple(mex({rd[k].s for rd in readings}) for k in range(k_top + 1))
    g = FunctionRule(table, Affine(0, scheme.continuation_slot(rules, k_top)))
    chosen = tuple(scheme.slot(k, g(k)) for k in range(k_top + 1))
    eset = EvasionSet(scheme, g, k_top, chosen)

    certs = []
    for idx, rule in enumerate(rules):
        rd = readings[idx]
        agree = tuple(k for k in range(k_top + 1) if g(k) == rd[k].s)
        limit = max([scan_limits[idx]] + [k + 1 for k in agree])
        if multi[idx] is None:
            crowded = tuple(
                k for k in range(scan_limits[idx])
                if (rd[k] if k <= k_top else read_window(rule, k, scheme)).in_slots >= 2
            )
        else:
            crowded = tuple(sorted(multi[idx]))
        hits = []
        for k in range(limit):
            hits.extend(terms_in(rule, eset.interval(k)))
        loose = tuple((k, n) for k in range(k_top + 1) for n in rd[k].unslotted)
        certs.append(
            FinitenessCertificate(
                idx, agree, crowded, len(hits), max(hits) if hits else None, limit, loose
            )
        )
    return eset, certs


def build_evasion_set(
    family: SequenceFamily | list,
    k_max: int = 1000,
    bound: FunctionRule | None = None,
) -> tuple[EvasionSet, list[FinitenessCertificate]]:
    """Construct U for a finite family of condition-(2) or condition-(3) rules.

    ``bound`` defaults to the pointwise maximum of the members' gauges, in
    which case every member has at most one term per window and every
    ``term_bound`` is 0.
    """
    if not isinstance(family, SequenceFamily):
        family = SequenceFamily(tuple(family))
    rules = _exact_members(family)
    for idx, rule in enumerate(rules):
        c2 = check_condition2(rule)
        if not c2.holds and check_condition3(rule) is None:
            raise PreconditionError(
                f"member {idx} fails condition (2) at n={c2.witness} and has no condition (3) witness"
            )
    if bound is None:
        bound = family_bound(family)
    limits = []
    for idx, rule in enumerate(rules):
        try:
            limits.append(lemma_horizon(rule, bound))
        except PreconditionError as exc:
            raise PreconditionError(f"member {idx}: {exc}") from exc
    return _assemble(family, WindowScheme(bound), k_max, limits, [None] * len(rules))


def _peak_period(rule: AffineTailRule, peaks: PeakWitness) -> int:
    # x_{k+P} - x_k is a whole number of the rule's tail steps
    return (peaks.xs.slope / rule.slope).denominator


def build_windows_evasion(
    family: SequenceFamily | list,
    peaks: PeakWitness,
    one_term_certs: list[list[int]],
    k_max: int = 1000,
) -> tuple[EvasionSet, list[FinitenessCertificate]]:
    """Same construction with the windows replaced by the peak intervals (x_k, y_k).

    ``one_term_certs[m]`` lists the only windows allowed to hold two or more
    terms of member m.  The claim is checked exactly: past the region where
    windows meet head terms, window counts repeat with a computable period,
    so scanning one period beyond it covers every k.
    """
    if not isinstance(family, SequenceFamily):
        family = SequenceFamily(tuple(family))
    rules = _exact_members(family)
    if len(one_term_certs) != len(rules):
        raise PreconditionError("need one exception list per member")
    scheme = PeakScheme(peaks)
    limits = []
    for idx, rule in enumerate(rules):
        allowed = set(one_term_certs[idx])
        horizon = scheme.tail_region([rule]) + _peak_period(rule, peaks)
        for k in range(horizon):
            found = terms_in(rule, scheme.window(k))
            if len(found) >= 2 and k not in allowed:
                raise PreconditionError(
                    f"member {idx}: window {k} = ({fmt(peaks.x(k))}, {fmt(peaks.y(k))}) "
                    f"holds terms {list(found)}, not listed as an exception"
                )
        limits.append(max(allowed) + 1 if allowed else 0)
    return _assemble(family, scheme, k_max, limits, [tuple(c) for c in one_term_certs])


# ---------------------------------------------------------------------------
# Independent re-check


@dataclass
class EvasionReport:
    horizon: int
    disjoint: bool
    inside_windows: bool
    matches_g: bool
    diagonal: bool
    diagonal_checked: int
    counts: list[int] = field(default_factory=list)
    last_hits: list[int | None] = field(default_factory=list)
    falsifications: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.falsifications and self.disjoint and self.diagonal

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "horizon": self.horizon,
            "disjoint": self.disjoint,
            "inside_windows": self.inside_windows,
            "matches_g": self.matches_g,
            "diagonal": self.diagonal,
            "diagonal_checked": self.diagonal_checked,
            "counts": self.counts,
            "last_hits": self.last_hits,
            "falsifications": self.falsifications,
        }


def _brute_slot(scheme: DyadicPacking, k: int, t: Fraction) -> int | None:
    """Walk the slots of window k downward until one holds ``t`` or they pass below it."""
    i = 0
    while True:
        iv = scheme.slot(k, i)
        if t in iv:
            return i
        if t >= iv.hi:
            return None
        i += 1


def verify_evasion(
    family: SequenceFamily | list,
    eset: EvasionSet,
    certs: list[FinitenessCertificate],
    horizon: int = 10_000,
) -> EvasionReport:
    """Re-scan terms ``a_0 .. a_horizon`` of every member against U.

    Uses only the emitted intervals and a direct slot walk, not the
    construction code.  More hits than ``term_bound``, or a hit past
    ``last_hit_index``, is a falsification.
    """
    if not isinstance(family, SequenceFamily):
        family = SequenceFamily(tuple(family))
    scheme = eset.scheme
    chosen = eset.chosen
    ordered = sorted(chosen, key=lambda iv: iv.lo)
    disjoint = all(a.hi <= b.lo for a, b in zip(ordered, ordered[1:]))
    inside = all(
        scheme.window(k).lo <= iv.lo and iv.hi <= scheme.window(k).hi for k, iv in enumerate(chosen)
    )
    matches = all(iv == scheme.slot(k, eset.g(k)) for k, iv in enumerate(chosen))
    index = IntervalIndex(chosen)
    cont = eset.continuation_start

    report = EvasionReport(horizon, disjoint, inside, matches, True, 0)
    s_seen: dict[int, set[int]] = {}
    reach = eset.k_max
    for m, rule in enumerate(family):
        hits = []
        first_slot: dict[int, int] = {}
        for n in range(horizon + 1):
            t = rule.term(n)
            k = scheme.locate(t)
            if t < cont:
                if index.find(t):
                    hits.append(n)
            elif k is not None and t in eset.interval(k):
                hits.append(n)
            if k is not None and k <= eset.k_max:
                i = _brute_slot(scheme, k, t)
                if i is not None:
                    first_slot[k] = min(first_slot.get(k, i), i)
        for k in range(eset.k_max + 1):
            s_seen.setdefault(k, set()).add(first_slot.get(k, 0))
        reach = min(reach, _complete_windows(scheme, rule, horizon, eset.k_max))
        cert = next((c for c in certs if c.member == m), None)
        report.counts.append(len(hits))
        report.last_hits.append(hits[-1] if hits else None)
        if cert is None:
            report.falsifications.append(f"member {m}: no certificate")
            continue
        if len(hits) > cert.term_bound:
            report.falsifications.append(
                f"FALSIFICATION member {m}: {len(hits)} terms in U up to n={horizon}, "
                f"certificate allows {cert.term_bound}"
            )
        if hits and (cert.last_hit_index is None or hits[-1] > cert.last_hit_index):
            report.falsifications.append(
                f"FALSIFICATION member {m}: hit at n={hits[-1]} beyond last_hit_index {cert.last_hit_index}"
            )
    report.diagonal_checked = reach
    report.diagonal = all(eset.g(k) not in s_seen.get(k, {0}) for k in range(reach + 1))
    if not report.diagonal:
        report.falsifications.append("FALSIFICATION: g agrees with a member's slot reading")
    return report


def _complete_windows(scheme: DyadicPacking, rule, horizon: int, k_max: int) -> int:
    """Largest k whose window (and all earlier ones) no term past the horizon can reach."""
    k = k_max
    while k >= 0 and rule.divergence_modulus(scheme.window(k).hi) > horizon + 1:
        k -= 1
    return k
