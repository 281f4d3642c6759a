import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqcover.errors import PreconditionError
from seqcover.exact import OpenInterval
from seqcover.sequences import (
    Affine,
    Arithmetic,
    DyadicApprox,
    Explicit,
    FunctionRule,
    Jitter,
    LogShift,
    calkin_wilf,
    check_condition2,
    check_condition3,
    make_rule,
    term,
    terms_in,
)


def cw_recurrence(n):
    q = F(1)
    for _ in range(n):
        q = 1 / (2 * math.floor(q) - q + 1)
    return q


def test_arithmetic_terms_and_envelope():
    r = make_rule({"kind": "arithmetic", "x": "1/2"})
    assert [r.term(n) for n in range(3)] == [F(1, 2), F(1), F(3, 2)]
    assert r.gap_envelope(0) == (F(1, 2), F(1, 2))
    assert r.monotone_index == 0
    assert r.divergence_modulus(F(9, 4)) == 5


def test_arithmetic_rejects_nonpositive():
    with pytest.raises(PreconditionError):
        make_rule({"kind": "arithmetic", "x": "-1"})
    with pytest.raises(PreconditionError):
        make_rule({"kind": "arithmetic", "x": "0"})


def test_logshift_terms():
    r = make_rule({"kind": "logshift", "x": "0", "precision": 20})
    assert r.term(0) == DyadicApprox(F(0), F(0))
    a1 = r.term(1)
    assert a1.error <= F(1, 2**20)
    assert abs(a1.value - F(693147, 10**6)) < F(1, 10**5)


def test_explicit_and_jitter_terms():
    assert term(make_rule({"kind": "explicit", "prefix": ["1"], "tail": {"slope": "1", "offset": "1"}}), 3) == 4
    j = make_rule(
        {"kind": "jitter", "base": {"kind": "arithmetic", "x": "1"}, "slots": {"table": [], "tail": {"constant": 0}}}
    )
    assert term(j, 5) == 7


def test_jitter_with_table():
    base = Arithmetic(F(1))
    j = Jitter(base, FunctionRule((1, 2, 3), Affine(0, 4)))
    assert [j.term(n) for n in range(5)] == [1 + cw_recurrence(1), 2 + cw_recurrence(2), 3 + cw_recurrence(3), 4 + cw_recurrence(4), 5 + cw_recurrence(4)]
    with pytest.raises(PreconditionError):
        Jitter(base, FunctionRule((), Affine(1, 0)))


@pytest.mark.parametrize(
    "window, expected",
    [((2, F(9, 4)), []), ((F(7, 4), F(9, 4)), [3]), ((0, 100), list(range(99)))],
)
def test_terms_in_examples(window, expected):
    rule = Arithmetic(F(1, 2)) if window[1] != 100 else Arithmetic(F(1))
    assert list(terms_in(rule, OpenInterval(*window))) == expected


def test_terms_in_logshift_flags_straddles():
    coarse = LogShift(F(0), 4)  # error 1/32
    hits = terms_in(coarse, OpenInterval(F(0), F(7, 10)))
    assert list(hits) == [] and hits.uncertain == (1,)  # ln 2 = 0.693...
    hits = terms_in(coarse, OpenInterval(F(1, 2), F(3)))
    assert list(hits) == list(range(1, 19)) and hits.uncertain == (19, 20)
    fine = LogShift(F(0), 20)
    hits = terms_in(fine, OpenInterval(F(1, 2), F(3)))  # ln 20 < 3 < ln 21
    assert list(hits) == list(range(1, 20)) and hits.uncertain == ()


def test_condition2_examples():
    assert check_condition2(Arithmetic(F(1, 2))).holds
    assert check_condition2(LogShift(F(0))).holds
    v = check_condition2(Explicit((F(0), F(1), F(3)), F(1), F(1)))
    assert v.status == "fails" and v.witness == 1
    v = check_condition2(Explicit((F(2), F(1)), F(1), F(0)))
    assert v.status == "fails" and v.witness == 0  # first gap not positive


def test_condition3_examples():
    assert check_condition3(Arithmetic(F(1, 2))) == F(1, 4)
    assert check_condition3(LogShift(F(0))) is None
    assert check_condition3(Explicit((F(0), F(2), F(4)), F(2), F(0))) == F(1)


def test_calkin_wilf_examples():
    assert [calkin_wilf(n) for n in range(5)] == [F(1), F(1, 2), F(2), F(1, 3), F(3, 2)]


def test_calkin_wilf_matches_recurrence():
    q = F(1)
    for n in range(3000):
        assert calkin_wilf(n) == q
        q = 1 / (2 * math.floor(q) - q + 1)


def test_calkin_wilf_depth_of_unit_fractions():
    # 1/n and n/1 sit at depth n-1 of the tree: indices 2^(n-1) - 1 and 2^n - 2
    for n in range(1, 40):
        assert calkin_wilf(2 ** (n - 1) - 1) == F(1, n)
        assert calkin_wilf(2**n - 2) == F(n)


def test_calkin_wilf_first_10k_cover_weight_14_only():
    seen = {calkin_wilf(n) for n in range(10_000)}
    assert len(seen) == 10_000
    for w in range(2, 15):
        assert all(F(p, w - p) in seen for p in range(1, w))
    assert F(14) not in seen


exact_rules = st.one_of(
    st.builds(Arithmetic, st.fractions(min_value=F(1, 20), max_value=5, max_denominator=20)),
    st.builds(
        lambda start, gaps, slope: Explicit(
            tuple(start + sum(gaps[:i], F(0)) for i in range(len(gaps) + 1)),
            slope,
            start + sum(gaps, F(0)) - len(gaps) * slope,
        ),
        st.fractions(min_value=-3, max_value=5, max_denominator=8),
        st.lists(st.fractions(min_value=F(-1, 2), max_value=3, max_denominator=8), max_size=6),
        st.fractions(min_value=F(1, 8), max_value=3, max_denominator=8),
    ),
)


@settings(max_examples=150, deadline=None)
@given(exact_rules, st.fractions(min_value=-5, max_value=30, max_denominator=7))
def test_divergence_certificate(rule, bound):
    n0 = rule.divergence_modulus(bound)
    assert all(rule.term(n0 + t) > bound for t in range(101))


@settings(max_examples=150, deadline=None)
@given(exact_rules)
def test_monotone_and_gap_envelope(rule):
    m0 = rule.monotone_index
    for n in range(m0, m0 + 60):
        assert rule.term(n + 1) > rule.term(n)
    for m in range(0, rule.tail_start + 3):
        lo, hi = rule.gap_envelope(m)
        for n in range(m, m + 60):
            assert lo <= rule.term(n + 1) - rule.term(n) <= hi


@settings(max_examples=150, deadline=None)
@given(
    exact_rules,
    st.fractions(min_value=-4, max_value=20, max_denominator=9),
    st.fractions(min_value=F(1, 9), max_value=5, max_denominator=9),
)
def test_terms_in_complete(rule, lo, width):
    window = OpenInterval(lo, lo + width)
    last = rule.divergence_modulus(window.hi) + 5
    brute = [n for n in range(last) if lo < rule.term(n) < lo + width]
    assert list(terms_in(rule, window)) == brute


def test_logshift_gap_bounds_hold():
    r = LogShift(F(0), 40)
    for n in range(200):
        lo, hi = r.gap_bounds(n)
        gap = r.term(n + 1) - r.term(n)
        assert lo < gap.upper and gap.lower < hi


def test_logshift_divergence_modulus_is_certified():
    r = LogShift(F(1, 3), 20)
    for b in [F(0), F(1), F(5, 2), F(6)]:
        n = r.divergence_modulus(b)
        assert r.term(n).lower > b
        assert n == 0 or not r.term(n - 1).lower > b


def test_function_rule_json_roundtrip():
    for f in [FunctionRule.constant(3), FunctionRule.affine(2, -1, (4, 4)), FunctionRule((1, 2), None)]:
        assert FunctionRule.from_json(f.to_json()) == f
    assert FunctionRule((1,), None).to_json() == {"table": [1], "tail": "undefined"}
    with pytest.raises(PreconditionError):
        FunctionRule((1,), None)(3)
    with pytest.raises(PreconditionError):
        FunctionRule((-1,), None)


@pytest.mark.parametrize(
    "spec",
    [
        {"kind": "arithmetic", "x": "1/2"},
        {"kind": "logshift", "x": "0/1", "precision": 20},
        {"kind": "explicit", "prefix": ["0/1", "2/1"], "tail": {"slope": "2/1", "offset": "4/1"}},
        {"kind": "jitter", "base": {"kind": "arithmetic", "x": "1/1"}, "slots": {"table": [3], "tail": {"constant": 0}}},
    ],
)
def test_rule_json_roundtrip(spec):
    rule = make_rule(spec)
    assert make_rule(rule.to_json()) == rule
