"""Contains parsing, serialization, timing and worker-pool utilities"""
import os
import math
import json
import logging
import contextlib

from fractions import Fraction
from multiprocessing.pool import ThreadPool

from humanfriendly import Timer

log = logging.getLogger(__name__)

FORMAT_TAG = "prkit/1"


class PrkitError(Exception):
    """Base class of all errors raised by this package"""
    def __init__(self, expression, message):
        super(PrkitError, self).__init__(message)
        self.expression = expression
        self.message = message

    def __str__(self):
        return str(self.message)


class RationalParseError(PrkitError):
    pass


class Violation(object):
    """One failed check of a validator, with machine-readable witness data"""
    def __init__(self, tag, message, witness=None):
        self.tag = tag
        self.message = message
        self.witness = witness or {}

    def to_json(self):
        return {"tag": self.tag, "message": self.message,
                "witness": self.witness}

    def __repr__(self):
        return "Violation(%s: %s)" % (self.tag, self.message)


class ValidationReport(object):
    """
    Outcome of a validator. Violations are listed in ORDER of their tags,
    then by witness, so reports of equal inputs are identical.
    """
    ORDER = ()

    def __init__(self, violations=None, scope=None):
        self.violations = sorted(violations or [], key=self._sort_key)
        self.scope = scope or {}

    def _sort_key(self, violation):
        rank = self.ORDER.index(violation.tag) \
            if violation.tag in self.ORDER else len(self.ORDER)
        return rank, json.dumps(violation.witness, sort_keys=True)

    @property
    def ok(self):
        return not self.violations

    def tags(self):
        return [v.tag for v in self.violations]

    def to_json(self):
        doc = {"ok": self.ok,
               "violations": [v.to_json() for v in self.violations]}
        if self.scope:
            doc["scope"] = self.scope
        return doc


class Util(object):
    """
    Conversions between exact rationals and their JSON form, plus small
    helpers shared by every module.
    """
    @staticmethod
    def to_fraction(value):
        """
        :param value: an int, a Fraction, a sympy Rational, or a string
        such as "3/4", "-2" or "0.125"
        :return: the exact value as a Fraction
        :raises RationalParseError if the value cannot be read exactly
        """
        if isinstance(value, Fraction):
            return value
        if isinstance(value, bool):
            raise RationalParseError(value, "Booleans are not rationals")
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            num, slash, den = value.strip().partition("/")
            try:
                if slash and "/" not in den:
                    return Fraction(Fraction(num.strip()),
                                    Fraction(den.strip()))
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError) as e:
                raise RationalParseError(value, "Bad rational: " + str(e))
        # sympy Rational / Integer
        if hasattr(value, "p") and hasattr(value, "q"):
            return Fraction(int(value.p), int(value.q))
        if isinstance(value, float):
            return Fraction(value)
        raise RationalParseError(value, "Unsupported rational type: " +
                                 str(type(value)))

    @staticmethod
    def format_fraction(value):
        """
        :param value: a rational
        :return: "num/den" in lowest terms, denominator positive
        """
        q = Util.to_fraction(value)
        return "%d/%d" % (q.numerator, q.denominator)

    @staticmethod
    def midpoint(lo, hi):
        return (lo + hi) / 2

    @staticmethod
    def dyadic_between(lo, hi):
        """
        :return: a rational strictly between lo < hi with a small
        denominator, preferring powers of two
        """
        assert lo < hi, "Empty interval"
        width = hi - lo
        den = 1
        while Fraction(1, den) >= width:
            den *= 2
        den *= 2
        # smallest multiple of 1/den strictly above lo
        num = math.floor(lo * den) + 1
        candidate = Fraction(num, den)
        if candidate < hi:
            return candidate
        return Util.midpoint(lo, hi)

    @staticmethod
    def dump_json(doc, path=None):
        """
        Serializes a document deterministically (sorted keys, fixed
        indentation) so identical inputs give byte-identical outputs.
        :param doc: a JSON-compatible object
        :param path: output file path; if None, only the text is returned
        :return: the serialized text
        """
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
        if path is not None:
            with open(path, "w") as out:
                out.write(text)
            log.debug("Wrote " + path)
        return text

    @staticmethod
    def load_json(path):
        with open(path) as fp:
            return json.load(fp)

    @staticmethod
    def pool_map(func, items, jobs=1):
        """
        Maps func over items on a thread pool; results keep input order.
        :param jobs: worker count. Values below 2 run inline.
        """
        items = list(items)
        if jobs is None or jobs < 2 or len(items) < 2:
            return [func(item) for item in items]
        pool = ThreadPool(min(jobs, len(items)))
        try:
            return pool.map(func, items)
        finally:
            pool.close()
            pool.join()

    @staticmethod
    @contextlib.contextmanager
    def stage_timer(stage):
        """Logs the wall time spent in a named stage"""
        timer = Timer()
        log.debug("Starting " + stage)
        try:
            yield timer
        finally:
            log.info("%s took %s" % (stage, timer))


class TestUtil(object):
    """Helpers shared by the test suites"""
    RESOURCE_DIR = os.path.join(
        os.path.dirname(os.path.dirname(os.path.dirname(
            os.path.abspath(__file__)))), "test", "resources")

    @staticmethod
    @contextlib.contextmanager
    def modified_environ(*remove, **update):
        """
        Temporarily updates ``os.environ`` in place, restoring every
        touched variable on exit.

        :param remove: environment variables to remove.
        :param update: environment variables and values to add/update.
        """
        env = os.environ
        update = update or {}
        remove = remove or []

        stomped = (set(update.keys()) | set(remove)) & set(env.keys())
        update_after = {k: env[k] for k in stomped}
        remove_after = frozenset(k for k in update if k not in env)

        try:
            env.update(update)
            [env.pop(k, None) for k in remove]
            yield
        finally:
            env.update(update_after)
            [env.pop(k) for k in remove_after]

    @staticmethod
    def resource(name):
        return os.path.join(TestUtil.RESOURCE_DIR, name)
