"""Parsing and formatting of config values.

All internal lengths are meters.  Input text may attach a unit suffix
(nm, um, mm, m); a bare number is taken as meters already.
"""

from __future__ import annotations

import re

from .errors import ConfigError

# "µm" is accepted alongside the ASCII spelling.
_LENGTH_UNITS = {
    "nm": 1e-9,
    "um": 1e-6,
    "µm": 1e-6,
    "mm": 1e-3,
    "m": 1.0,
}

_VALUE_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*([a-zA-Zµ]*)\s*$")


def parse_length(text: str) -> float:
    """Parse a length like '360 um', '160mm' or '8.1e-7' into meters."""
    m = _VALUE_RE.match(text)
    if not m:
        raise ConfigError(f"cannot parse length value {text!r}")
    num, unit = m.groups()
    try:
        value = float(num)
    except ValueError:
        raise ConfigError(f"cannot parse number in {text!r}") from None
    if unit == "":
        return value
    try:
        return value * _LENGTH_UNITS[unit]
    except KeyError:
        raise ConfigError(
            f"unknown length unit {unit!r} (use nm, um, mm or m)"
        ) from None


def parse_float(text: str) -> float:
    """Parse a dimensionless value; unit suffixes are rejected."""
    m = _VALUE_RE.match(text)
    if not m or m.group(2) != "":
        raise ConfigError(f"cannot parse dimensionless value {text!r}")
    try:
        return float(m.group(1))
    except ValueError:
        raise ConfigError(f"cannot parse number in {text!r}") from None


def parse_int(text: str) -> int:
    """Parse an integer value; rejects fractions and unit suffixes."""
    value = parse_float(text)
    if value != int(value):
        raise ConfigError(f"expected an integer, got {text!r}")
    return int(value)


def fmt(value: float) -> str:
    """Data-column float format: 12 significant digits."""
    return format(float(value), ".12g")


def fmt_exact(value: float) -> str:
    """Config-echo float format: shortest string that parses back exactly."""
    return repr(float(value))
