"""Deterministic number formatting for CSV and JSON outputs."""

from __future__ import annotations


def fmt_number(x) -> str:
    """Integers without a fraction, other floats as their shortest round-trip repr."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if x.is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def json_number(x):
    x = float(x)
    return int(x) if x.is_integer() and abs(x) < 2**53 else x
