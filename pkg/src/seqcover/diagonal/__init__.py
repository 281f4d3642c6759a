"""Diagonal construction of an open set that every family member meets finitely often."""

from .bump import PiecewiseLinear, build_bump, eval_pwl
from .evasion import (
    EvasionReport,
    EvasionSet,
    FinitenessCertificate,
    build_evasion_set,
    build_windows_evasion,
    verify_evasion,
)
from .peaks import CmReport, check_cm
from .windows import (
    DyadicPacking,
    PeakScheme,
    PeakWitness,
    WindowReading,
    WindowScheme,
    mex,
    read_window,
    slot_selector,
    window_scheme,
)

__all__ = [
    "CmReport",
    "DyadicPacking",
    "EvasionReport",
    "EvasionSet",
    "FinitenessCertificate",
    "PeakScheme",
    "PeakWitness",
    "PiecewiseLinear",
    "WindowReading",
    "WindowScheme",
    "build_bump",
    "build_evasion_set",
    "build_windows_evasion",
    "check_cm",
    "eval_pwl",
    "mex",
    "read_window",
    "slot_selector",
    "verify_evasion",
    "window_scheme",
]
