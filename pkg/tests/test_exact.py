import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqcover.errors import Indeterminate
from seqcover.exact import (
    DyadicApprox,
    IntervalIndex,
    OpenInterval,
    Q,
    covers_interval,
    fmt,
    ln_approx,
    normalize,
)


def iv(a, b):
    return OpenInterval(F(a), F(b))


def test_q_refuses_floats():
    assert Q("6/4") == F(3, 2)
    with pytest.raises(TypeError):
        Q(0.5)
    with pytest.raises(TypeError):
        Q(True)


def test_fmt_is_canonical():
    assert fmt(F(-6, 8)) == "-3/4"
    assert fmt(F(5)) == "5/1"


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        iv(1, 1)
    with pytest.raises(ValueError):
        iv(2, 1)


@pytest.mark.parametrize(
    "items, expected",
    [
        ([(0, 1), (2, 3)], [(0, 1), (2, 3)]),
        ([(0, F(3, 2)), (1, 2)], [(0, 2)]),
        ([(0, 1), (1, 2)], [(0, 1), (1, 2)]),  # touching: the point 1 stays out
        ([(1, 2), (0, 5)], [(0, 5)]),
    ],
)
def test_normalize_examples(items, expected):
    out = normalize(iv(a, b) for a, b in items)
    assert [(x.lo, x.hi) for x in out] == [(F(a), F(b)) for a, b in expected]


@pytest.mark.parametrize(
    "cover, target, expected",
    [
        ([(0, 1), (1, 2)], (0, 2), False),
        ([(0, F(3, 2)), (1, 2)], (0, 2), True),
        ([(F(1, 2), F(3, 2))], (0, 1), False),
        ([(-1, 3)], (0, 2), True),
        ([], (0, 1), False),
    ],
)
def test_covers_examples(cover, target, expected):
    assert covers_interval(normalize(iv(a, b) for a, b in cover), iv(*target)) is expected


def _grid_uncovered(cover, target, p):
    """Some grid point k/2^p strictly inside target and outside every cover interval."""
    step = F(1, 2**p)
    lo = math.floor(target.lo / step) + 1
    hi = math.ceil(target.hi / step)
    return any(all(not (c.lo < k * step < c.hi) for c in cover) for k in range(lo, hi))


def test_covers_sweep_against_grid_1_64():
    cover = normalize([iv(0, F(3, 2)), iv(1, 2)])
    assert not _grid_uncovered(cover, iv(0, 2), 6)
    cover = normalize([iv(0, 1), iv(1, 2)])
    assert _grid_uncovered(cover, iv(0, 2), 6)


small = st.fractions(min_value=-4, max_value=4, max_denominator=16)


@st.composite
def intervals(draw):
    a = draw(small)
    w = draw(st.fractions(min_value=F(1, 16), max_value=3, max_denominator=16))
    return OpenInterval(a, a + w)


@settings(max_examples=200, deadline=None)
@given(st.lists(intervals(), max_size=8))
def test_normalize_idempotent_and_disjoint(items):
    once = normalize(items)
    assert normalize(once).items == once.items
    for a, b in zip(once, once.items[1:]):
        assert a.hi <= b.lo
    # same union on a grid (all endpoints are multiples of 1/16)
    for k in range(-4 * 64, 7 * 64):
        x = F(k, 64)
        assert (x in once) == any(x in i for i in items)


@settings(max_examples=200, deadline=None)
@given(st.lists(intervals(), max_size=6), intervals(), st.integers(min_value=1, max_value=10))
def test_grid_refuter_implies_not_covered(cover, target, p):
    cover = normalize(cover)
    if _grid_uncovered(cover, target, p):
        assert not covers_interval(cover, target)


@settings(max_examples=200, deadline=None)
@given(st.lists(intervals(), max_size=6), intervals(), small, small)
def test_covering_is_monotone_in_target(cover, target, da, db):
    cover = normalize(cover)
    lo = max(target.lo, target.lo + abs(da) / 8)
    hi = min(target.hi, target.hi - abs(db) / 8)
    if lo < hi and covers_interval(cover, target):
        assert covers_interval(cover, OpenInterval(lo, hi))


def test_dyadic_compare():
    d = DyadicApprox(F(1), F(1, 4))
    assert d.compare(F(1, 2)) == 1
    assert d.compare(F(2)) == -1
    assert d.compare(F(1)) is None
    with pytest.raises(Indeterminate):
        d.must_compare(F(9, 8))
    assert DyadicApprox(F(1)).compare(F(1)) == 0
    s = d + DyadicApprox(F(2), F(1, 8))
    assert (s.value, s.error) == (F(3), F(3, 8))


def _ln_squeeze(m, terms=60):
    """Independent enclosure of ln m from the Mercator series of ln(1 + 1/k), summed over k < m.

    The series alternates, so consecutive partial sums bracket the value.
    """
    lo = hi = F(0)
    for k in range(1, m):
        x = F(1, k)
        s, t = F(0), F(0)
        for n in range(1, terms + 1):
            s, t = s + (-1) ** (n + 1) * x**n / n, s
        lo += min(s, t)
        hi += max(s, t)
    return lo, hi


@pytest.mark.parametrize("m", [1, 2, 3, 5, 8, 13, 40])
def test_ln_approx_is_sound(m):
    d = ln_approx(m, 20)
    assert d.error <= F(1, 2**20)
    lo, hi = _ln_squeeze(m)
    # the true value is in [lo, hi] and in [value - error, value + error]
    assert d.lower <= hi and lo <= d.upper


@pytest.mark.parametrize("m", [2, 7, 100, 12345, 2**40 + 3])
@pytest.mark.parametrize("precision", [4, 20, 60])
def test_ln_approx_against_mpmath(m, precision):
    d = ln_approx(m, precision)
    mpmath.mp.prec = 200
    true = mpmath.log(m)
    assert mpmath.mpf(d.lower.numerator) / d.lower.denominator <= true
    assert true <= mpmath.mpf(d.upper.numerator) / d.upper.denominator
    assert d.value.denominator <= 2 ** (precision + 2)


def test_ln_one_is_exact():
    assert ln_approx(1, 20) == DyadicApprox(F(0), F(0))


def test_interval_index():
    idx = IntervalIndex([iv(0, F(1, 2)), iv(F(3, 4), F(5, 2)), iv(10, 11)])
    assert idx.find(F(1, 4)) == [0]
    assert idx.find(F(2)) == [1]
    assert idx.find(F(1, 2)) == []
    assert idx.find(F(21, 2)) == [2]
    assert idx.find(F(-1)) == []
