"""Parse quantities like ``"2.5 N/m"`` or ``"75 mg"`` into SI floats.

Everything inside the package is SI. Unit strings only exist at the config
boundary, so this module is the single place where prefixes are resolved.
"""

import math
import re
from decimal import Decimal


class UnitError(ValueError):
    pass


# Each dimension maps unit spellings to the factor that converts to SI.
LENGTH = {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9}
MASS = {"kg": 1.0, "g": 1e-3, "mg": 1e-6, "ug": 1e-9, "µg": 1e-9}
FORCE = {"N": 1.0, "mN": 1e-3, "uN": 1e-6, "µN": 1e-6}
STIFFNESS = {"N/m": 1.0, "mN/mm": 1.0, "mN/m": 1e-3}
PRESSURE = {"Pa": 1.0, "kPa": 1e3, "MPa": 1e6, "GPa": 1e9}
DENSITY = {"kg/m^3": 1.0, "kg/m3": 1.0, "g/cm^3": 1e3, "g/cm3": 1e3}
ANGLE = {"rad": 1.0, "deg": math.pi / 180.0, "°": math.pi / 180.0}
RESISTANCE = {"ohm": 1.0, "Ohm": 1.0, "Ω": 1.0, "kohm": 1e3, "kOhm": 1e3}
RESISTIVITY = {"ohm*m": 1.0, "Ohm*m": 1.0, "Ω*m": 1.0}
FIELD = {"T": 1.0, "mT": 1e-3}
VOLTAGE = {"V": 1.0, "mV": 1e-3}
FREQUENCY = {"Hz": 1.0, "kHz": 1e3}
TIME = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "µs": 1e-6}
AREA = {"m^2": 1.0, "m2": 1.0, "mm^2": 1e-6, "mm2": 1e-6, "cm^2": 1e-4}
ACCEL = {"m/s^2": 1.0, "m/s2": 1.0}
TORQUE = {"N*m": 1.0, "Nm": 1.0, "mNm": 1e-3, "uNm": 1e-6, "µNm": 1e-6}
CURRENT = {"A": 1.0, "mA": 1e-3}
POWER = {"W": 1.0, "mW": 1e-3, "uW": 1e-6, "µW": 1e-6}
ENERGY = {"J": 1.0, "mJ": 1e-3, "uJ": 1e-6, "µJ": 1e-6}
DIMENSIONLESS = {"": 1.0}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)\s*$")


def parse_quantity(text, table):
    """Return the SI value of ``text`` using the unit spellings in ``table``.

    Bare numbers are accepted only for dimensionless tables.
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        if "" in table:
            return float(text)
        raise UnitError(f"missing unit on {text!r}; expected one of {sorted(table)}")
    match = _QUANTITY.match(str(text))
    if not match:
        raise UnitError(f"cannot read quantity {text!r}")
    value, unit = match.groups()
    if unit not in table:
        raise UnitError(f"unknown unit {unit!r} in {text!r}; expected one of {sorted(table)}")
    # Scale in decimal so "25.4 um" lands on the float nearest 2.54e-05.
    return float(Decimal(value) * Decimal(repr(table[unit])))


def format_quantity(value, unit, table):
    """Inverse of :func:`parse_quantity` for a chosen output unit.

    ``repr`` keeps the float round-trip exact whenever the unit factor is 1
    and, for scaled units, as close as float division allows.
    """
    scaled = value / table[unit]
    return f"{scaled!r} {unit}".strip() if unit else repr(scaled)
