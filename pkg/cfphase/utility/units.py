import math

from .exceptions import ConfigError

# unit -> (numerator, denominator) of the factor to SI
UNITS = {
    "length": {
        "m": (1.0, 1.0),
        "km": (1000.0, 1.0),
    },
    "speed": {
        "m/s": (1.0, 1.0),
        "km/h": (1.0, 3.6),
    },
    "time": {
        "s": (1.0, 1.0),
        "ms": (1.0, 1000.0),
        "min": (60.0, 1.0),
    },
    "acceleration": {
        "m/s^2": (1.0, 1.0),
        "m/s2": (1.0, 1.0),
    },
    "density": {
        "1/m": (1.0, 1.0),
        "veh/m": (1.0, 1.0),
        "veh/km": (1.0, 1000.0),
    },
}


def parse_quantity(value, dimension, key=None):
    if dimension not in UNITS:
        raise ConfigError("unknown dimension %s" % dimension, key)
    if not isinstance(value, str):
        raise ConfigError(
            "expected a quantity with unit (e.g. '%s')" %
            ("1 " + next(iter(UNITS[dimension]))), key)

    parts = value.strip().split()
    if len(parts) != 2:
        raise ConfigError("malformed quantity '%s'" % value, key)
    number, unit = parts
    if unit not in UNITS[dimension]:
        raise ConfigError("unit '%s' is not a %s unit (allowed: %s)" % (
            unit, dimension, ", ".join(UNITS[dimension])), key)
    try:
        number = float(number)
    except ValueError:
        raise ConfigError("malformed number '%s'" % number, key)
    if not math.isfinite(number):
        raise ConfigError("non-finite quantity '%s'" % value, key)

    num, den = UNITS[dimension][unit]
    if num == 1.0 and den == 1.0:
        return number
    if den == 1.0:
        return number * num
    return number * num / den


def parse_number(value, key=None):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError("expected a plain number", key)
    if not math.isfinite(value):
        raise ConfigError("non-finite number", key)
    return value
