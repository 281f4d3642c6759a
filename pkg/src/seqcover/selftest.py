"""Seeded property suites shared by ``seqcover selftest`` and the acceptance tests.

Each suite returns a list of failure messages (empty on success).  The gauge
oracle here deliberately avoids the sorted-profile shortcut used by
:mod:`seqcover.covering`: it materialises every neighbourhood, merges them
with :func:`normalize` and sweeps with :func:`covers_interval`.
"""

from __future__ import annotations

import bisect
import math
import random
from fractions import Fraction

from . import samplers
from .covering import gauge_table
from .diagonal import build_bump, build_evasion_set, verify_evasion
from .evdiff import eventually_different
from .exact import OpenInterval, covers_interval, normalize
from .sequences import AffineTailRule, calkin_wilf, check_condition2, check_condition3


def brute_gauge(rule: AffineTailRule, i_max: int) -> list[int]:
    """Gauge at i = 0..i_max from explicit interval sweeps.

    Past ``top`` every term is a tail term and consecutive ones sit ``slope``
    apart, so their neighbourhoods chain exactly when ``slope < 2r``; below
    ``top + 1`` the union of all neighbourhoods is swept directly.
    """
    top = max(Fraction(i_max), max(rule.head, default=Fraction(0)), rule.offset) + 2
    n_last = 0
    while rule.term(n_last) <= top + 2 or n_last < rule.tail_start:
        n_last += 1
    points = [rule.term(n) for n in range(n_last + 1)]
    best = [0] * (i_max + 1)
    j = 1
    while rule.slope < Fraction(2, j):  # otherwise the tail alone breaks coverage
        r = Fraction(1, j)
        union = normalize(OpenInterval(t - r, t + r) for t in points)
        for i in range(i_max + 1):
            if covers_interval(union, OpenInterval(Fraction(i), top + 1)):
                best[i] = max(best[i], j)
        j += 1
    return best


def suite_gauge_oracle(rng: random.Random, n_rules: int = 100, i_max: int = 20) -> list[str]:
    bad = []
    for _ in range(n_rules):
        rule = samplers.arithmetic_rule(rng)
        got = [gauge_table(rule, i_max)(i) for i in range(i_max + 1)]
        want = brute_gauge(rule, i_max)
        if got != want:
            bad.append(f"arithmetic({rule.x}): gauge {got} != oracle {want}")
    return bad


def _sorted_terms(rule: AffineTailRule, top: Fraction) -> list[Fraction]:
    # every term below top; past the divergence modulus all terms exceed it
    last = rule.divergence_modulus(top) + 1
    return sorted(rule.term(n) for n in range(last + 1))


def _count_terms(points: list[Fraction], lo: Fraction, hi: Fraction) -> int:
    return bisect.bisect_left(points, hi) - bisect.bisect_right(points, lo)


def suite_observation(rng: random.Random, n_rules: int = 200, k_max: int = 50, j_max: int = 32) -> list[str]:
    bad = []
    for _ in range(n_rules):
        rule = samplers.condition2_rule(rng)
        if not check_condition2(rule).holds:
            bad.append(f"sampler produced a non condition-(2) rule {rule.to_json()}")
            continue
        f = gauge_table(rule, k_max)
        points = _sorted_terms(rule, Fraction(k_max + 1))
        for k in range(k_max + 1):
            for j in range(1, j_max + 1):
                if _count_terms(points, Fraction(k), k + Fraction(1, j)) >= 2 and f(k) < j:
                    bad.append(f"{rule.to_json()}: two terms in ({k}, {k}+1/{j}) but gauge {f(k)}")
    return bad


def suite_remark4(rng: random.Random, n_rules: int = 100, i_max: int = 50) -> list[str]:
    bad = []
    for _ in range(n_rules):
        rule, r = samplers.condition3_rule(rng)
        if check_condition3(rule) is None or min(rule.gaps(rule.tail_start + 1)) < r:
            bad.append(f"sampler produced a rule without gap bound {r}: {rule.to_json()}")
            continue
        cap = math.ceil(2 / r)
        f = gauge_table(rule, i_max)
        over = [i for i in range(len(f.table)) if f(i) > cap]
        if over or f.tail.b > cap:
            bad.append(f"{rule.to_json()}, r={r}: gauge exceeds {cap} at {over or 'tail'}")
    return bad


def suite_evasion(
    rng: random.Random,
    n_families: int = 50,
    k_max: int = 1000,
    horizon: int = 10_000,
    bump_k: int = 100,
    with_bump: bool = True,
) -> list[str]:
    bad = []
    for f_idx in range(n_families):
        fam = samplers.family(rng)
        eset, certs = build_evasion_set(fam, k_max=k_max)
        report = verify_evasion(fam, eset, certs, horizon)
        tag = f"family {f_idx}"
        if not report.disjoint:
            bad.append(f"{tag}: chosen intervals overlap")
        if not report.diagonal:
            bad.append(f"{tag}: g agrees with a slot reading")
        bad += [f"{tag}: {msg}" for msg in report.falsifications]
        if any(c.term_bound for c in certs) or any(report.counts):
            bad.append(f"{tag}: default bound gave hits {report.counts}")
        if not with_bump:
            continue
        f = build_bump(eset, min(bump_k, eset.k_max))
        for m, rule in enumerate(fam):
            nz = sum(1 for n in range(horizon + 1) if f(rule.term(n)) != 0)
            if nz > certs[m].term_bound:
                bad.append(f"{tag} member {m}: bump nonzero at {nz} terms")
        for k in range(bump_k + 1):
            if f(eset.interval(k).midpoint) != 1:
                bad.append(f"{tag}: bump misses 1 in window {k}")
    return bad


def suite_evdiff(rng: random.Random, n_sets: int = 100, k_max: int = 10_000) -> list[str]:
    bad = []
    for s in range(n_sets):
        fs = samplers.function_family(rng)
        g, _ = eventually_different(fs)
        gv = g.values(k_max + 1)
        for idx, f in enumerate(fs):
            if any(a == b for a, b in zip(gv, f.values(k_max + 1))):
                bad.append(f"set {s}: g meets member {idx} below {k_max}")
            # tails: g - f is affine past both tables; it must have no natural zero
            n = max(len(g.table), len(f.table))
            da, db = g.tail.a - f.tail.a, g.tail.b - f.tail.b
            if (da == 0 and db == 0) or (da != 0 and -db % da == 0 and -db // da >= n):
                bad.append(f"set {s}: tails of g and member {idx} meet")
    return bad


def suite_calkin_wilf(n: int = 10_000, weight: int = 40) -> list[str]:
    vals = [calkin_wilf(k) for k in range(n)]
    bad = []
    if len(set(vals)) != n:
        bad.append("repeated values among the first enumerated rationals")
    seen = set(vals)
    missing = [
        Fraction(p, q)
        for p in range(1, weight)
        for q in range(1, weight - p + 1)
        if math.gcd(p, q) == 1 and Fraction(p, q) not in seen
    ]
    if missing:
        bad.append(f"missing {len(missing)} rationals, e.g. {missing[0]}")
    return bad


def run(seed: int = 0) -> dict:
    """Reduced-size versions of every suite; a few seconds in total."""
    rng = random.Random(seed)
    results = {
        "gauge_oracle": suite_gauge_oracle(rng, 20, 20),
        "observation": suite_observation(rng, 20, 20, 16),
        "remark4": suite_remark4(rng, 20),
        "evasion": suite_evasion(rng, 5, k_max=100, horizon=1000, bump_k=50),
        "evdiff": suite_evdiff(rng, 10, 1000),
        "calkin_wilf": suite_calkin_wilf(2000, 11),
    }
    return {
        "seed": seed,
        "ok": not any(results.values()),
        "suites": {name: {"ok": not errs, "failures": errs[:20]} for name, errs in results.items()},
    }
