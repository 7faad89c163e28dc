"""This module describes all tunable knobs and their defaults"""

import os
import json
import logging

import psutil

try:
    from chainmap import ChainMap
except ImportError:  # the backport defers to collections on newer Pythons
    from collections import ChainMap

log = logging.getLogger(__name__)

ENV_PREFIX = "PRKIT_"

# Maps knob name to (default value, meaning)
KNOBS = {
    "refine_depth": (
        60, "Bisection rounds before a refinement-driven decision "
            "(window certification, sign determination) is given up"),
    "solve_depth": (
        80, "Refinement rounds per candidate point in solve_system before "
            "a surviving candidate is reported as non-transverse"),
    "isolation_method": (
        "sturm", "Real root isolation: 'sturm' (Sturm sequences and "
                 "bisection) or 'sympy' (continued fractions)"),
    "max_poly_degree": (
        40, "Largest total degree accepted for an input polynomial"),
    "raster_resolution": (
        512, "Grid resolution of the raster oracle"),
    "fit_degree_schedule": (
        [2, 4, 6, 8, 10, 12], "Ascending total degrees tried by algebraize"),
    "fit_denominator_bound": (
        10 ** 6, "Denominator bound used when rounding fitted coefficients"),
    "fit_regularization": (
        1e-9, "Ridge term of the least-squares fit"),
    "fit_grid": (
        96, "Samples per axis of the signed field fitted by algebraize"),
    "jobs": (
        psutil.cpu_count(logical=True) or 1,
        "Worker threads for independent per-curve/per-slab tasks"),
    "seed": (
        0, "Seed for randomized suites and sampling"),
}

DEFAULTS = {name: value[0] for name, value in KNOBS.items()}


class SettingsError(ValueError):
    pass


class Settings(object):
    """
    Layered configuration: explicit overrides, then PRKIT_* environment
    variables, then DEFAULTS.
    """
    @staticmethod
    def parse_value(name, text):
        """
        :param name: knob name
        :param text: string form of the value
        :return: the value converted to the type of the knob's default
        :raises SettingsError for unknown knobs or unparsable values
        """
        if name not in DEFAULTS:
            raise SettingsError("Unknown setting: " + name)
        default = DEFAULTS[name]
        try:
            if isinstance(default, bool):
                return text.strip().lower() in ("1", "true", "yes")
            if isinstance(default, int):
                return int(text)
            if isinstance(default, float):
                return float(text)
            if isinstance(default, list):
                value = json.loads(text)
                if not isinstance(value, list):
                    raise ValueError("expected a JSON list")
                return value
            return text
        except ValueError as e:
            raise SettingsError("Bad value for " + name + ": " + str(e))

    @staticmethod
    def from_environ(environ=None):
        environ = os.environ if environ is None else environ
        found = {}
        for key, text in environ.items():
            if not key.startswith(ENV_PREFIX):
                continue
            name = key[len(ENV_PREFIX):].lower()
            if name in DEFAULTS:
                found[name] = Settings.parse_value(name, text)
        return found

    def __init__(self, overrides=None, environ=None):
        overrides = {k: v for k, v in (overrides or {}).items()
                     if v is not None}
        unknown = set(overrides) - set(DEFAULTS)
        if unknown:
            raise SettingsError("Unknown settings: " +
                                ", ".join(sorted(unknown)))
        self.values = ChainMap(overrides,
                               Settings.from_environ(environ),
                               DEFAULTS)

    def __getitem__(self, name):
        return self.values[name]

    def get(self, name, default=None):
        return self.values.get(name, default)

    def derive(self, **overrides):
        """:return: new Settings with extra overrides on top of these"""
        merged = dict(self.effective())
        merged.update({k: v for k, v in overrides.items() if v is not None})
        return Settings(merged, environ={})

    def effective(self):
        """:return: the merged settings as a plain dict"""
        return {name: self.values[name] for name in sorted(DEFAULTS)}
