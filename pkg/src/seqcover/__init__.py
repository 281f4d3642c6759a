"""Executable combinatorics of sequences converging to infinity.

Gauges of covering by shrinking neighbourhoods, gap conditions, and the
diagonal construction of an open set unbounded above that each member of a
finite family meets only finitely often, all in exact rational arithmetic.
"""

from .covering import (
    GaugeTable,
    GaugeValue,
    SequenceFamily,
    family_bound,
    gauge,
    gauge_table,
    lemma_horizon,
    observation_check,
)
from .diagonal import (
    PeakWitness,
    PiecewiseLinear,
    build_bump,
    build_evasion_set,
    build_windows_evasion,
    check_cm,
    eval_pwl,
    mex,
    slot_selector,
    verify_evasion,
    window_scheme,
)
from .errors import Falsification, Indeterminate, PreconditionError
from .evdiff import DominanceVerdict, eventually_different, is_pointwise_bound, leq_star
from .exact import DyadicApprox, IntervalList, OpenInterval, Q, covers_interval, fmt, normalize
from .sequences import (
    ConditionVerdict,
    FunctionRule,
    SequenceRule,
    calkin_wilf,
    check_condition2,
    check_condition3,
    make_rule,
    term,
    terms_in,
)

__version__ = "0.1.0"
