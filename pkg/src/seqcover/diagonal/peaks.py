"""Counting terms in peak intervals: witness-relative evidence for (C_m)."""

from __future__ import annotations

from dataclasses import dataclass

from ..covering import SequenceFamily
from .windows import PeakWitness
from ..sequences import terms_in


@dataclass(frozen=True)
class CmReport:
    """Per-member term counts in ``(x_k, y_k)`` for k <= k_max.

    Verdicts are about this witness and this range of k only.
    """

    m: int
    k_max: int
    counts: tuple[tuple[int, ...], ...]
    uncertain: tuple[tuple[int, ...], ...]
    truncated: tuple[int | None, ...]  # first k affected by the index horizon, per member

    @property
    def max_count(self) -> int:
        return max(max(c) for c in self.counts)

    def windows_with_at_least(self, m: int) -> list[int]:
        """How many windows reach ``m`` terms, per member."""
        return [sum(1 for c in row if c >= m) for row in self.counts]

    @property
    def at_least_m(self) -> list[int]:
        return self.windows_with_at_least(self.m)

    def evidence(self, m: int | None = None) -> bool:
        """Some member reaches ``m`` terms in every window checked."""
        m = self.m if m is None else m
        return any(n == self.k_max + 1 for n in self.windows_with_at_least(m))

    @property
    def refuted(self) -> bool:
        """No window of any member holds m terms."""
        return self.max_count < self.m

    @property
    def verdict(self) -> str:
        if self.refuted:
            return "refuted"
        return "evidence" if self.evidence() else "partial"

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "k_max": self.k_max,
            "verdict": self.verdict,
            "max_count": self.max_count,
            "at_least_m": self.at_least_m,
            "counts": [list(c) for c in self.counts],
            "uncertain": [list(u) for u in self.uncertain],
            "truncated_from": list(self.truncated),
        }


def check_cm(
    family: SequenceFamily | list,
    peaks: PeakWitness,
    m: int,
    k_max: int,
    horizon: int | None = None,
) -> CmReport:
    """Exact number of terms of each member in each ``(x_k, y_k)``, k <= k_max.

    With ``horizon`` set, only indices n <= horizon are counted, and the first
    window that later terms could still reach is reported as truncated.
    """
    if m < 1:
        raise ValueError("m must be a positive natural")
    if not isinstance(family, SequenceFamily):
        family = SequenceFamily(tuple(family))
    counts, unsure, cut = [], [], []
    for rule in family:
        row, row_u = [], []
        first_cut = None
        for k in range(k_max + 1):
            window = peaks.interval(k)
            found = terms_in(rule, window)
            if horizon is not None:
                if first_cut is None and rule.divergence_modulus(window.hi) > horizon + 1:
                    first_cut = k
                found_n = [n for n in found if n <= horizon]
                row.append(len(found_n))
            else:
                row.append(len(found))
            row_u.append(len(found.uncertain))
        counts.append(tuple(row))
        unsure.append(tuple(row_u))
        cut.append(first_cut)
    return CmReport(m, k_max, tuple(counts), tuple(unsure), tuple(cut))
