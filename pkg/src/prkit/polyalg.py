"""
Exact polynomial arithmetic over the rationals: bivariate and univariate
polynomials, Sturm-based real root isolation, resultant elimination, a
certified two-equation solver, conic constructors and least-squares fitting.
"""
import math
import logging

from fractions import Fraction
from functools import reduce

import numpy as np
import sympy
from sympy import Poly, QQ

from prkit.util import PrkitError, Util

log = logging.getLogger(__name__)

X, Y = sympy.symbols("x y")
T = sympy.Symbol("t")

STURM = "sturm"
SYMPY = "sympy"
ISOLATION_METHODS = (STURM, SYMPY)
# Leading coefficients above this many bits skip the rational root check
EXACT_ROOT_BITS = 64
FLOAT_BITS = 60


class ZeroPolynomialError(PrkitError):
    pass


class PositiveDimensionalError(PrkitError):
    pass


class FitError(PrkitError):
    pass


class PolynomialParseError(PrkitError):
    pass


class BoxError(PrkitError):
    pass


class ConicError(PrkitError):
    pass


def _rational(value):
    q = Util.to_fraction(value)
    return sympy.Rational(q.numerator, q.denominator)


def _integer_coeffs(coeffs):
    """
    :param coeffs: rational coefficients, highest degree first
    :return: integer coefficients proportional to coeffs by a positive
    factor, with no common divisor
    """
    coeffs = [Util.to_fraction(c) for c in coeffs]
    den = reduce(lambda a, b: a * b // math.gcd(a, b),
                 [c.denominator for c in coeffs], 1)
    ints = [int(c * den) for c in coeffs]
    g = reduce(math.gcd, [abs(c) for c in ints], 0)
    if g > 1:
        ints = [c // g for c in ints]
    return ints


def _sign(value):
    return (value > 0) - (value < 0)


def _horner_sign(ints, value):
    """Sign of the integer polynomial (highest first) at a rational"""
    if not ints:
        return 0
    n, d = value.numerator, value.denominator
    acc = ints[0]
    dpow = d
    for c in ints[1:]:
        acc = acc * n + c * dpow
        dpow *= d
    return _sign(acc)


def _sign_changes(signs):
    nonzero = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)


class Interval(object):
    """Closed interval with exact rational endpoints"""
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Util.to_fraction(lo)
        hi = lo if hi is None else Util.to_fraction(hi)
        if lo > hi:
            raise ValueError("Empty interval [%s, %s]" % (lo, hi))
        self.lo = lo
        self.hi = hi

    @staticmethod
    def wrap(value):
        return value if isinstance(value, Interval) else Interval(value)

    def __add__(self, other):
        other = Interval.wrap(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-Interval.wrap(other))

    def __rsub__(self, other):
        return Interval.wrap(other) - self

    def __mul__(self, other):
        other = Interval.wrap(other)
        products = (self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n == 0:
            return Interval(1)
        lo_n, hi_n = self.lo ** n, self.hi ** n
        if n % 2 == 1:
            return Interval(lo_n, hi_n)
        if self.lo >= 0:
            return Interval(lo_n, hi_n)
        if self.hi <= 0:
            return Interval(hi_n, lo_n)
        return Interval(0, max(lo_n, hi_n))

    def __eq__(self, other):
        return isinstance(other, Interval) and \
            self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return "[%s, %s]" % (self.lo, self.hi)

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return Util.midpoint(self.lo, self.hi)

    def contains(self, value):
        return self.lo <= value <= self.hi

    def contains_zero(self):
        return self.lo <= 0 <= self.hi

    def is_subset(self, other):
        return other.lo <= self.lo and self.hi <= other.hi

    def intersect(self, other):
        """:return: the intersection, or None when empty"""
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)


class Box(object):
    """Closed axis-aligned rational rectangle [x0, x1] x [y0, y1]"""
    def __init__(self, x0, x1, y0, y1):
        self.x0, self.x1 = Util.to_fraction(x0), Util.to_fraction(x1)
        self.y0, self.y1 = Util.to_fraction(y0), Util.to_fraction(y1)
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise BoxError((x0, x1, y0, y1), "Box must have positive extent")

    @staticmethod
    def from_json(doc):
        try:
            (x0, x1), (y0, y1) = doc["x"], doc["y"]
        except (KeyError, TypeError, ValueError):
            raise BoxError(doc, 'Box must be {"x": [lo, hi], "y": [lo, hi]}')
        return Box(x0, x1, y0, y1)

    def to_json(self):
        f = Util.format_fraction
        return {"x": [f(self.x0), f(self.x1)], "y": [f(self.y0), f(self.y1)]}

    @property
    def x_interval(self):
        return Interval(self.x0, self.x1)

    @property
    def y_interval(self):
        return Interval(self.y0, self.y1)

    def contains(self, point):
        return self.x0 <= point[0] <= self.x1 and \
            self.y0 <= point[1] <= self.y1

    def contains_interior(self, point):
        return self.x0 < point[0] < self.x1 and \
            self.y0 < point[1] < self.y1

    def translate(self, dx, dy):
        return Box(self.x0 + dx, self.x1 + dx, self.y0 + dy, self.y1 + dy)

    def __eq__(self, other):
        return isinstance(other, Box) and \
            (self.x0, self.x1, self.y0, self.y1) == \
            (other.x0, other.x1, other.y0, other.y1)

    def __repr__(self):
        return "Box(%s..%s, %s..%s)" % (self.x0, self.x1, self.y0, self.y1)


class BivariatePolynomial(object):
    """
    Exact polynomial in (x, y) with rational coefficients. Instances are
    immutable; every operation returns a new polynomial.
    """
    def __init__(self, poly):
        if not isinstance(poly, Poly):
            poly = Poly(poly, X, Y, domain=QQ)
        elif poly.gens != (X, Y) or poly.domain != QQ:
            poly = Poly(poly.as_expr(), X, Y, domain=QQ)
        self.poly = poly
        self._terms = None

    @staticmethod
    def from_terms(terms):
        """
        :param terms: dict mapping (i, j) to the coefficient of x^i y^j
        """
        data = {}
        for (i, j), c in terms.items():
            if i < 0 or j < 0:
                raise PolynomialParseError((i, j), "Negative exponent")
            q = Util.to_fraction(c)
            if q != 0:
                data[(int(i), int(j))] = _rational(q)
        if not data:
            return BivariatePolynomial.zero()
        return BivariatePolynomial(Poly.from_dict(data, X, Y, domain=QQ))

    @staticmethod
    def zero():
        return BivariatePolynomial(Poly(0, X, Y, domain=QQ))

    @staticmethod
    def constant(c):
        return BivariatePolynomial.from_terms({(0, 0): c})

    @staticmethod
    def from_json(doc):
        if not isinstance(doc, dict) or "terms" not in doc or \
                not isinstance(doc["terms"], list):
            raise PolynomialParseError(
                doc, 'Polynomial must be {"terms": [...]}')
        terms = {}
        for k, term in enumerate(doc["terms"]):
            try:
                i, j, c = term["i"], term["j"], term["c"]
            except (KeyError, TypeError):
                raise PolynomialParseError(
                    k, "Term %d needs keys i, j and c" % k)
            if not isinstance(i, int) or not isinstance(j, int) \
                    or isinstance(i, bool) or isinstance(j, bool):
                raise PolynomialParseError(
                    k, "Exponents of term %d must be integers" % k)
            if (i, j) in terms:
                raise PolynomialParseError(
                    k, "Duplicate monomial x^%d y^%d" % (i, j))
            try:
                terms[(i, j)] = Util.to_fraction(c)
            except PrkitError as e:
                raise PolynomialParseError(k, e.message)
        return BivariatePolynomial.from_terms(terms)

    @staticmethod
    def from_text(text):
        """
        :param text: an expression in x and y such as "1 - x**2 - y**2"
        """
        try:
            expr = sympy.parse_expr(text, local_dict={"x": X, "y": Y})
            poly = Poly(expr, X, Y, domain=QQ)
        except Exception as e:
            raise PolynomialParseError(text, "Not a polynomial in x, y: " +
                                       str(e))
        return BivariatePolynomial(poly)

    @staticmethod
    def parse(doc):
        """Accepts either the JSON term form or a text expression"""
        if isinstance(doc, str):
            return BivariatePolynomial.from_text(doc)
        return BivariatePolynomial.from_json(doc)

    def to_json(self):
        return {"terms": [{"i": i, "j": j, "c": Util.format_fraction(c)}
                          for (i, j), c in sorted(self.terms.items())]}

    @property
    def terms(self):
        if self._terms is None:
            self._terms = {
                (int(i), int(j)): Util.to_fraction(c)
                for (i, j), c in self.poly.terms() if c != 0}
        return self._terms

    @property
    def degree(self):
        if not self.terms:
            return -1
        return max(i + j for i, j in self.terms)

    def degree_in(self, var):
        idx = 0 if var == "x" else 1
        if not self.terms:
            return -1
        return max(m[idx] for m in self.terms)

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_constant(self):
        return all(i == 0 and j == 0 for i, j in self.terms)

    def eval(self, point):
        x, y = Util.to_fraction(point[0]), Util.to_fraction(point[1])
        return sum((c * x ** i * y ** j for (i, j), c in self.terms.items()),
                   Fraction(0))

    def eval_float(self, x, y):
        """Floating point evaluation, accepting numpy arrays"""
        total = 0.0
        for (i, j), c in self.terms.items():
            total = total + float(c) * (x ** i) * (y ** j)
        return total

    def interval_eval(self, x_iv, y_iv):
        """:return: an Interval enclosing the range of p over the box"""
        x_iv, y_iv = Interval.wrap(x_iv), Interval.wrap(y_iv)
        x_pows, y_pows = {}, {}
        total = Interval(0)
        for (i, j), c in self.terms.items():
            if i not in x_pows:
                x_pows[i] = x_iv ** i
            if j not in y_pows:
                y_pows[j] = y_iv ** j
            total = total + c * (x_pows[i] * y_pows[j])
        return total

    def derive(self, var):
        return BivariatePolynomial(self.poly.diff(X if var == "x" else Y))

    def restrict_x(self, t):
        """:return: the univariate polynomial q(y) = p(t, y)"""
        t = Util.to_fraction(t)
        coeffs = [Fraction(0)] * (self.degree_in("y") + 1)
        for (i, j), c in self.terms.items():
            coeffs[j] += c * t ** i
        return UnivariatePolynomial.from_coefficients(coeffs)

    def restrict_y(self, s):
        """:return: the univariate polynomial q(x) = p(x, s)"""
        s = Util.to_fraction(s)
        coeffs = [Fraction(0)] * (self.degree_in("x") + 1)
        for (i, j), c in self.terms.items():
            coeffs[i] += c * s ** j
        return UnivariatePolynomial.from_coefficients(coeffs)

    def y_coefficients(self):
        """:return: [a_0(x), a_1(x), ...] with p = sum a_j(x) y^j"""
        grouped = {}
        for (i, j), c in self.terms.items():
            grouped.setdefault(j, {})[i] = c
        out = []
        for j in range(self.degree_in("y") + 1):
            row = grouped.get(j, {})
            coeffs = [row.get(i, Fraction(0))
                      for i in range(max(row) + 1 if row else 0)]
            out.append(UnivariatePolynomial.from_coefficients(coeffs))
        return out

    def swap(self):
        """:return: p(y, x)"""
        return BivariatePolynomial.from_terms(
            {(j, i): c for (i, j), c in self.terms.items()})

    def translate(self, dx, dy):
        """:return: q with q(x + dx, y + dy) = p(x, y)"""
        dx, dy = _rational(dx), _rational(dy)
        expr = self.poly.as_expr().subs({X: X - dx, Y: Y - dy},
                                        simultaneous=True)
        return BivariatePolynomial(Poly(sympy.expand(expr), X, Y, domain=QQ))

    def gcd(self, other):
        return BivariatePolynomial(self.poly.gcd(other.poly))

    def scale(self, c):
        return BivariatePolynomial(self.poly * _rational(c))

    def primitive_integer(self, gens):
        """Integer primitive representative with the given generator order"""
        p = Poly(self.poly.as_expr(), *gens, domain=QQ)
        _, p = p.clear_denoms(convert=True)
        _, p = p.primitive()
        return p

    def __add__(self, other):
        if not isinstance(other, BivariatePolynomial):
            other = BivariatePolynomial.constant(other)
        return BivariatePolynomial(self.poly + other.poly)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePolynomial(-self.poly)

    def __sub__(self, other):
        if not isinstance(other, BivariatePolynomial):
            other = BivariatePolynomial.constant(other)
        return BivariatePolynomial(self.poly - other.poly)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, BivariatePolynomial):
            return self.scale(other)
        return BivariatePolynomial(self.poly * other.poly)

    __rmul__ = __mul__

    def __pow__(self, n):
        return BivariatePolynomial(self.poly ** n)

    def __eq__(self, other):
        if not isinstance(other, BivariatePolynomial):
            return False
        return self.terms == other.terms

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __str__(self):
        return str(self.poly.as_expr())

    def __repr__(self):
        return "BivariatePolynomial(%s)" % self


class UnivariatePolynomial(object):
    """Exact polynomial in one variable with rational coefficients"""
    def __init__(self, poly):
        if not isinstance(poly, Poly):
            poly = Poly(poly, T, domain=QQ)
        elif poly.gens != (T,) or poly.domain != QQ:
            poly = Poly(poly.as_expr().subs(poly.gens[0], T), T, domain=QQ)
        self.poly = poly
        self._ints = None
        self._sturm = None
        self._sqf = None

    @staticmethod
    def from_coefficients(coeffs):
        """:param coeffs: coefficients indexed by exponent"""
        coeffs = [_rational(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            return UnivariatePolynomial(Poly(0, T, domain=QQ))
        return UnivariatePolynomial(
            Poly.from_list(list(reversed(coeffs)), T, domain=QQ))

    @staticmethod
    def from_json(doc):
        try:
            return UnivariatePolynomial.from_coefficients(
                [Util.to_fraction(c) for c in doc])
        except (PrkitError, TypeError) as e:
            raise PolynomialParseError(doc, "Bad coefficient list: " + str(e))

    def to_json(self):
        return [Util.format_fraction(c) for c in self.coefficients]

    @property
    def coefficients(self):
        if self.poly.is_zero:
            return []
        return [Util.to_fraction(c) for c in reversed(self.poly.all_coeffs())]

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def is_zero(self):
        return self.poly.is_zero

    @property
    def integer_coeffs(self):
        """Positive multiple with integer coefficients, highest first"""
        if self._ints is None:
            self._ints = [] if self.is_zero else \
                _integer_coeffs(self.poly.all_coeffs())
        return self._ints

    def eval(self, value):
        value = Util.to_fraction(value)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * value + c
        return acc

    def sign_at(self, value):
        return _horner_sign(self.integer_coeffs, Util.to_fraction(value))

    def interval_eval(self, iv):
        iv = Interval.wrap(iv)
        total = Interval(0)
        for k, c in enumerate(self.coefficients):
            if c != 0:
                total = total + c * iv ** k
        return total

    def gcd(self, other):
        return UnivariatePolynomial(self.poly.gcd(other.poly))

    def __mul__(self, other):
        return UnivariatePolynomial(self.poly * other.poly)

    def __eq__(self, other):
        return isinstance(other, UnivariatePolynomial) and \
            self.coefficients == other.coefficients

    def __hash__(self):
        return hash(tuple(self.coefficients))

    def __str__(self):
        return str(self.poly.as_expr())

    def __repr__(self):
        return "UnivariatePolynomial(%s)" % self

    def sqf_part(self):
        if self._sqf is None:
            self._sqf = self if self.degree < 1 else \
                UnivariatePolynomial(self.poly.sqf_part())
        return self._sqf

    def sqf_list(self):
        """:return: [(squarefree factor, multiplicity), ...]"""
        _, factors = self.poly.sqf_list()
        return [(UnivariatePolynomial(p), k) for p, k in factors]

    def sturm_sequence(self):
        """Sturm sequence of the squarefree part, integer coefficients"""
        if self._sturm is None:
            sqf = self.sqf_part()
            self._sturm = [_integer_coeffs(p.all_coeffs())
                           for p in sqf.poly.sturm() if not p.is_zero]
        return self._sturm

    def _variations(self, value):
        signs = [_horner_sign(s, value) for s in self.sturm_sequence()]
        return _sign_changes(signs)

    def count_roots(self, lo, hi, closed=True):
        """
        :return: number of distinct real roots in [lo, hi] (or (lo, hi)
        when closed is False)
        """
        if self.is_zero:
            raise ZeroPolynomialError(self, "Zero polynomial has every root")
        lo, hi = Util.to_fraction(lo), Util.to_fraction(hi)
        if lo > hi:
            return 0
        sqf = self.sqf_part()
        if lo == hi:
            return int(closed and sqf.sign_at(lo) == 0)
        count = self._variations(lo) - self._variations(hi)
        if closed and sqf.sign_at(lo) == 0:
            count += 1
        if not closed and sqf.sign_at(hi) == 0:
            count -= 1
        return count

    def cauchy_bound(self):
        """:return: a power of two strictly above every root's modulus"""
        ints = self.sqf_part().integer_coeffs
        lead = abs(ints[0])
        bound = 1 + max([Fraction(abs(c), lead) for c in ints[1:]] or [0])
        k = Fraction(1)
        while k <= bound:
            k *= 2
        return k

    def isolate(self, window=None, method=STURM):
        """
        :param window: optional closed Interval restricting the search
        :param method: "sturm" or "sympy"
        :return: list of IsolatedRoot, one per distinct real root, ascending
        :raises ZeroPolynomialError for the zero polynomial
        """
        if self.is_zero:
            raise ZeroPolynomialError(self, "Cannot isolate roots of 0")
        if self.degree < 1:
            return []
        if method == SYMPY:
            roots = self._isolate_sympy(window)
        elif method == STURM:
            roots = self._isolate_sturm(window)
        else:
            raise ValueError("Unknown isolation method: " + str(method))
        return [self._with_multiplicity(*self._snap_rational(lo, hi))
                for lo, hi in roots]

    def _snap_rational(self, lo, hi):
        """
        Shrink an isolating interval to a point when its root is rational.
        A rational root p/q of the integer polynomial has q dividing the
        leading coefficient, so one multiple of 1/lead is the only candidate.
        """
        if lo == hi:
            return lo, hi
        sqf = self.sqf_part()
        lead = abs(sqf.integer_coeffs[0])
        if lead.bit_length() > EXACT_ROOT_BITS:
            return lo, hi
        root = IsolatedRoot(sqf, lo, hi).refine(Fraction(1, 2 * lead))
        if root.is_exact:
            return root.lo, root.hi
        candidate = Fraction(math.ceil(root.lo * lead), lead)
        if candidate <= root.hi and sqf.sign_at(candidate) == 0:
            return candidate, candidate
        return lo, hi

    def _with_multiplicity(self, lo, hi):
        sqf = self.sqf_part()
        for factor, k in self.sqf_list():
            if factor.degree >= 1 and factor.count_roots(lo, hi) > 0:
                return IsolatedRoot(sqf, lo, hi, k)
        raise AssertionError("Root lost between factors in [%s, %s]" %
                             (lo, hi))

    def _isolate_sturm(self, window):
        sqf = self.sqf_part()
        if window is None:
            bound = self.cauchy_bound()
            lo, hi = -bound, bound
        else:
            lo, hi = window.lo, window.hi
        found = []
        if sqf.sign_at(lo) == 0:
            found.append((lo, lo))
        if lo == hi:
            return found
        tail = [(hi, hi)] if sqf.sign_at(hi) == 0 else []
        stack = [(lo, hi, self.count_roots(lo, hi, closed=False))]
        inner = []
        while stack:
            a, b, n = stack.pop()
            if n == 0:
                continue
            if n == 1 and sqf.sign_at(a) != 0 and sqf.sign_at(b) != 0:
                inner.append((a, b))
                continue
            m = Util.midpoint(a, b)
            if sqf.sign_at(m) == 0:
                inner.append((m, m))
            stack.append((a, m, self.count_roots(a, m, closed=False)))
            stack.append((m, b, self.count_roots(m, b, closed=False)))
        inner.sort()
        return found + inner + tail

    def _isolate_sympy(self, window):
        sqf = self.sqf_part()
        found = []
        for lo, hi in sqf.poly.intervals(sqf=True):
            lo, hi = Util.to_fraction(lo), Util.to_fraction(hi)
            if lo < hi:
                if sqf.sign_at(lo) == 0:
                    hi = lo
                elif sqf.sign_at(hi) == 0:
                    lo = hi
            if window is not None:
                root = IsolatedRoot(sqf, lo, hi, 1)
                if lo <= window.lo <= hi and sqf.sign_at(window.lo) == 0:
                    root = IsolatedRoot(sqf, window.lo, window.lo, 1)
                elif lo <= window.hi <= hi and sqf.sign_at(window.hi) == 0:
                    root = IsolatedRoot(sqf, window.hi, window.hi, 1)
                while root.lo < window.lo <= root.hi or \
                        root.lo <= window.hi < root.hi:
                    root = root.bisect()
                if not (window.lo <= root.lo and root.hi <= window.hi):
                    continue
                lo, hi = root.lo, root.hi
            found.append((lo, hi))
        found.sort()
        return found


class IsolatedRoot(object):
    """
    A real algebraic number: the unique root of a squarefree polynomial in a
    closed rational interval. Either lo == hi (an exact rational root) or
    neither endpoint is a root.
    """
    def __init__(self, poly, lo, hi, multiplicity=1):
        self.poly = poly
        self.lo = Util.to_fraction(lo)
        self.hi = Util.to_fraction(hi)
        self.multiplicity = multiplicity
        self._float = None

    @staticmethod
    def from_rational(value):
        value = Util.to_fraction(value)
        return IsolatedRoot(
            UnivariatePolynomial.from_coefficients([-value, 1]), value, value)

    @staticmethod
    def from_json(doc):
        try:
            poly = UnivariatePolynomial.from_json(doc["poly"])
            return IsolatedRoot(poly.sqf_part(), doc["lo"], doc["hi"],
                                doc.get("multiplicity", 1))
        except (KeyError, TypeError) as e:
            raise PolynomialParseError(doc, "Bad algebraic number: " + str(e))

    def to_json(self):
        return {"poly": self.poly.to_json(),
                "lo": Util.format_fraction(self.lo),
                "hi": Util.format_fraction(self.hi),
                "multiplicity": self.multiplicity,
                "approx": float(self)}

    @property
    def is_exact(self):
        return self.lo == self.hi

    @property
    def interval(self):
        return Interval(self.lo, self.hi)

    @property
    def width(self):
        return self.hi - self.lo

    def __float__(self):
        if self._float is None:
            scale = max(abs(self.lo), abs(self.hi), Fraction(1))
            root = self.refine(scale / 2 ** FLOAT_BITS)
            self._float = float(Util.midpoint(root.lo, root.hi))
        return self._float

    def __repr__(self):
        if self.is_exact:
            return "IsolatedRoot(%s)" % self.lo
        return "IsolatedRoot(%s in [%s, %s])" % (self.poly, self.lo, self.hi)

    def bisect(self):
        """:return: the root with its interval halved"""
        if self.is_exact:
            return self
        m = Util.midpoint(self.lo, self.hi)
        s = self.poly.sign_at(m)
        if s == 0:
            return IsolatedRoot(self.poly, m, m, self.multiplicity)
        if s == self.poly.sign_at(self.lo):
            return IsolatedRoot(self.poly, m, self.hi, self.multiplicity)
        return IsolatedRoot(self.poly, self.lo, m, self.multiplicity)

    def refine(self, width):
        """:return: the same root with an interval no wider than width"""
        root = self
        width = Util.to_fraction(width)
        while root.width > width:
            root = root.bisect()
        return root

    def rational_value(self):
        return self.lo if self.is_exact else None

    def compare(self, other):
        """
        Exact comparison of two real algebraic numbers.
        :return: -1, 0 or 1
        """
        a, b = self, other
        while True:
            if a.hi < b.lo:
                return -1
            if a.lo > b.hi:
                return 1
            if a.is_exact and b.is_exact:
                return _sign(a.lo - b.lo)
            if a.is_exact:
                if b.poly.sign_at(a.lo) == 0:
                    return 0
                b = b.bisect()
                continue
            if b.is_exact:
                if a.poly.sign_at(b.lo) == 0:
                    return 0
                a = a.bisect()
                continue
            common = a.poly.gcd(b.poly)
            if common.degree >= 1:
                lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
                if common.count_roots(lo, hi) > 0:
                    return 0
            a, b = a.bisect(), b.bisect()

    def __lt__(self, other):
        return self.compare(_as_root(other)) < 0

    def __eq__(self, other):
        if not isinstance(other, (IsolatedRoot, Fraction, int)):
            return False
        return self.compare(_as_root(other)) == 0

    def __hash__(self):
        if self.is_exact:
            return hash(self.lo)
        return hash(self.poly)


def _as_root(value):
    if isinstance(value, IsolatedRoot):
        return value
    return IsolatedRoot.from_rational(value)


class RealValue(object):
    """Helpers for values that are either rationals or IsolatedRoots"""
    @staticmethod
    def compare(a, b):
        if not isinstance(a, IsolatedRoot) and \
                not isinstance(b, IsolatedRoot):
            return _sign(Util.to_fraction(a) - Util.to_fraction(b))
        return _as_root(a).compare(_as_root(b))

    @staticmethod
    def to_json(value):
        if isinstance(value, IsolatedRoot):
            if value.is_exact:
                return Util.format_fraction(value.lo)
            return value.to_json()
        return Util.format_fraction(value)

    @staticmethod
    def from_json(doc):
        if isinstance(doc, dict):
            return IsolatedRoot.from_json(doc)
        return Util.to_fraction(doc)


def isolate_real_roots(q, window=None, method=STURM):
    """
    :param q: nonzero UnivariatePolynomial
    :param window: optional closed Interval
    :return: ascending list of IsolatedRoot
    """
    return q.isolate(window, method)


def _univariate_from_poly(p):
    """Converts a sympy Poly in one remaining generator"""
    if p.is_zero:
        return UnivariatePolynomial.from_coefficients([])
    return UnivariatePolynomial.from_coefficients(
        list(reversed(p.all_coeffs())))


def _resultant(f, g, eliminate, keep):
    fp = f.primitive_integer((eliminate, keep))
    gp = g.primitive_integer((eliminate, keep))
    m, n = fp.degree(eliminate), gp.degree(eliminate)
    if m <= 0 and n <= 0:
        return UnivariatePolynomial.from_coefficients([1])
    if m <= 0:
        return _univariate_from_poly(Poly((fp ** n).as_expr(), keep))
    if n <= 0:
        return _univariate_from_poly(Poly((gp ** m).as_expr(), keep))
    res = fp.resultant(gp)
    if not isinstance(res, Poly):
        res = Poly(res, keep)
    elif res.gens != (keep,):
        res = Poly(res.as_expr(), keep)
    return _univariate_from_poly(res)


def resultant_y(f, g):
    """
    Sylvester resultant eliminating y, up to a nonzero constant factor.
    :return: UnivariatePolynomial in x
    """
    return _resultant(f, g, Y, X)


def resultant_x(f, g):
    """Resultant eliminating x, up to a nonzero constant factor, in y"""
    return _resultant(f, g, X, Y)


class RootPair(object):
    """A point of the plane with refinable algebraic coordinates"""
    def __init__(self, x, y, transverse=True):
        self.x = x
        self.y = y
        self.transverse = transverse

    def refine(self, width):
        return RootPair(self.x.refine(width), self.y.refine(width),
                        self.transverse)

    def approx(self):
        return float(self.x), float(self.y)

    def to_json(self):
        return {"x": RealValue.to_json(self.x),
                "y": RealValue.to_json(self.y),
                "transverse": self.transverse,
                "approx": list(self.approx())}

    def same_point(self, other):
        return self.x.compare(other.x) == 0 and self.y.compare(other.y) == 0

    def __repr__(self):
        return "RootPair(%.6g, %.6g%s)" % (
            self.approx() + ("" if self.transverse else ", tangent",))


class _Candidate(object):
    """Refinement state of one (x-root, y-root) pair in solve_system"""
    def __init__(self, f, g, jac, rx, ry):
        self.f, self.g, self.jac = f, g, jac
        self.rx, self.ry = rx, ry

    def decide_exact_x(self):
        """:return: (exists, transverse) with x known exactly"""
        x = self.rx.lo
        common = self.f.restrict_x(x).gcd(self.g.restrict_x(x))
        return self._decide_on_line(common, self.jac["det"].restrict_x(x),
                                    self.ry)

    def decide_exact_y(self):
        y = self.ry.lo
        common = self.f.restrict_y(y).gcd(self.g.restrict_y(y))
        return self._decide_on_line(common, self.jac["det"].restrict_y(y),
                                    self.rx)

    @staticmethod
    def _decide_on_line(common, det, root):
        if common.is_zero:
            raise PositiveDimensionalError(
                root, "Both curves contain a common axis-parallel line")
        if common.degree < 1 or common.count_roots(root.lo, root.hi) == 0:
            return False, False
        if det.is_zero:
            return True, False
        meet = common.gcd(det)
        singular = meet.degree >= 1 and meet.count_roots(root.lo, root.hi) > 0
        return True, not singular

    def krawczyk(self):
        """
        :return: "none" if the box holds no solution, "unique" if it holds
        a transverse one, otherwise "unknown"
        """
        xi, yi = self.rx.interval, self.ry.interval
        mx, my = xi.mid, yi.mid
        m = (mx, my)
        jac = self.jac
        a, b = jac["fx"].eval(m), jac["fy"].eval(m)
        c, d = jac["gx"].eval(m), jac["gy"].eval(m)
        det = a * d - b * c
        if det == 0:
            return "unknown"
        y00, y01, y10, y11 = d / det, -b / det, -c / det, a / det
        f0, f1 = self.f.eval(m), self.g.eval(m)
        ja = jac["fx"].interval_eval(xi, yi)
        jb = jac["fy"].interval_eval(xi, yi)
        jc = jac["gx"].interval_eval(xi, yi)
        jd = jac["gy"].interval_eval(xi, yi)
        m00 = 1 - (y00 * ja + y01 * jc)
        m01 = -(y00 * jb + y01 * jd)
        m10 = -(y10 * ja + y11 * jc)
        m11 = 1 - (y10 * jb + y11 * jd)
        dx, dy = xi - mx, yi - my
        k0 = mx - (y00 * f0 + y01 * f1) + m00 * dx + m01 * dy
        k1 = my - (y10 * f0 + y11 * f1) + m10 * dx + m11 * dy
        if k0.intersect(xi) is None or k1.intersect(yi) is None:
            return "none"
        if k0.is_subset(xi) and k1.is_subset(yi):
            jdet = ja * jd - jb * jc
            if not jdet.contains_zero():
                return "unique"
        return "unknown"

    def excluded(self):
        xi, yi = self.rx.interval, self.ry.interval
        return not self.f.interval_eval(xi, yi).contains_zero() or \
            not self.g.interval_eval(xi, yi).contains_zero()

    def solve(self, depth):
        for level in range(depth + 1):
            if self.rx.is_exact or self.ry.is_exact:
                if self.rx.is_exact:
                    exists, transverse = self.decide_exact_x()
                else:
                    exists, transverse = self.decide_exact_y()
                return RootPair(self.rx, self.ry, transverse) \
                    if exists else None
            if self.excluded():
                return None
            verdict = self.krawczyk()
            if verdict == "none":
                return None
            if verdict == "unique":
                return RootPair(self.rx, self.ry, True)
            self.rx, self.ry = self.rx.bisect(), self.ry.bisect()
        log.debug("Candidate near (%.6g, %.6g) undecided after %d rounds; "
                  "reporting non-transverse" % (float(self.rx),
                                                float(self.ry), depth))
        return RootPair(self.rx, self.ry, False)


def jacobian(f, g):
    fx, fy, gx, gy = f.derive("x"), f.derive("y"), g.derive("x"), g.derive("y")
    return {"fx": fx, "fy": fy, "gx": gx, "gy": gy,
            "det": fx * gy - fy * gx}


def solve_system(f, g, box, depth=80, method=STURM, jobs=1):
    """
    All real common zeros of f and g in a closed box.
    :param f: BivariatePolynomial
    :param g: BivariatePolynomial
    :param box: Box
    :param depth: refinement rounds per candidate before an undecided
    candidate is reported as non-transverse
    :return: list of RootPair sorted by (x, y)
    :raises PositiveDimensionalError if f and g share a curve component
    """
    if f.is_zero or g.is_zero:
        raise PositiveDimensionalError((f, g), "Zero polynomial in system")
    res_y = resultant_y(f, g)
    res_x = resultant_x(f, g)
    if res_y.is_zero or res_x.is_zero:
        raise PositiveDimensionalError(
            str(f.gcd(g)), "Common factor %s: the solution set is not finite"
            % f.gcd(g))
    if res_y.degree < 1 or res_x.degree < 1:
        return []
    xs = res_y.isolate(box.x_interval, method)
    ys = res_x.isolate(box.y_interval, method)
    jac = jacobian(f, g)
    candidates = [_Candidate(f, g, jac, rx, ry) for rx in xs for ry in ys]
    log.debug("solve_system: %d x-roots, %d y-roots" % (len(xs), len(ys)))
    found = Util.pool_map(lambda cand: cand.solve(depth), candidates, jobs)
    return [p for p in found if p is not None]


class ConicSpec(object):
    INTERIOR = "interior-positive"
    EXTERIOR = "exterior-positive"

    def __init__(self, center, a1, a2, r, sign=INTERIOR):
        self.center = (Util.to_fraction(center[0]),
                       Util.to_fraction(center[1]))
        self.a1, self.a2 = Util.to_fraction(a1), Util.to_fraction(a2)
        self.r = Util.to_fraction(r)
        if not (self.a1 > 0 and self.a2 > 0 and self.r > 0):
            raise ConicError((a1, a2, r), "a1, a2 and r must be positive")
        if sign not in (ConicSpec.INTERIOR, ConicSpec.EXTERIOR):
            raise ConicError(sign, "Unknown conic sign " + str(sign))
        self.sign = sign

    def to_json(self):
        f = Util.format_fraction
        return {"center": [f(self.center[0]), f(self.center[1])],
                "a1": f(self.a1), "a2": f(self.a2), "r": f(self.r),
                "sign": self.sign}

    @staticmethod
    def from_json(doc):
        return ConicSpec(doc["center"], doc["a1"], doc["a2"], doc["r"],
                         doc.get("sign", ConicSpec.INTERIOR))

    def translate(self, dx, dy):
        return ConicSpec((self.center[0] + dx, self.center[1] + dy),
                         self.a1, self.a2, self.r, self.sign)


def conic(spec):
    """
    :return: r - a1 (x - c1)^2 - a2 (y - c2)^2, negated for
    exterior-positive conics
    """
    c1, c2 = spec.center
    dx = BivariatePolynomial.from_terms({(1, 0): 1, (0, 0): -c1})
    dy = BivariatePolynomial.from_terms({(0, 1): 1, (0, 0): -c2})
    p = spec.r - (dx * dx * spec.a1 + dy * dy * spec.a2)
    return p if spec.sign == ConicSpec.INTERIOR else -p


def monomials(degree):
    """(i, j) exponents with i + j <= degree, graded order"""
    return [(i, d - i) for d in range(degree + 1) for i in range(d, -1, -1)]


class FitResult(object):
    def __init__(self, poly, residual, rank, degree):
        self.poly = poly
        self.residual = residual
        self.rank = rank
        self.degree = degree

    def to_json(self):
        return {"degree": self.degree, "residual": self.residual,
                "rank": self.rank, "poly": self.poly.to_json()}


def _chebyshev_in(var, center, half_width, degree):
    """T_0..T_degree of (var - center) / half_width as exact polynomials"""
    u = BivariatePolynomial.from_terms(
        {(1, 0) if var == "x" else (0, 1): 1 / half_width,
         (0, 0): -center / half_width})
    one = BivariatePolynomial.constant(1)
    out = [one, u]
    while len(out) <= degree:
        out.append(u * out[-1] * 2 - out[-2])
    return out[:degree + 1]


def fit_polynomial(samples, degree, regularization=0.0,
                   denominator_bound=10 ** 6, weights=None):
    """
    Least-squares fit in a tensor Chebyshev basis scaled to the sample
    bounding box; coefficients are rounded to rationals before the exact
    conversion to monomials.
    :param samples: list of ((x, y), value) with rational x, y
    :param degree: total degree of the fit
    :param regularization: ridge weight, >= 0
    :param weights: optional positive multiplier per sample row; the fit
    minimizes the sum of squared weighted errors
    :return: FitResult
    :raises FitError if there are too few samples, or the system is rank
    deficient and regularization is 0
    """
    basis = monomials(degree)
    if len(samples) < len(basis):
        raise FitError(len(samples), "Need at least %d samples for degree %d"
                       % (len(basis), degree))
    if regularization < 0:
        raise FitError(regularization, "Regularization must be >= 0")
    xs = [Util.to_fraction(p[0]) for p, _ in samples]
    ys = [Util.to_fraction(p[1]) for p, _ in samples]
    cx, hx = Util.midpoint(min(xs), max(xs)), (max(xs) - min(xs)) / 2
    cy, hy = Util.midpoint(min(ys), max(ys)), (max(ys) - min(ys)) / 2
    hx, hy = hx or Fraction(1), hy or Fraction(1)
    u = np.array([float((x - cx) / hx) for x in xs])
    v = np.array([float((y - cy) / hy) for y in ys])
    values = np.array([float(val) for _, val in samples])
    vu = np.polynomial.chebyshev.chebvander(u, degree)
    vv = np.polynomial.chebyshev.chebvander(v, degree)
    design = np.column_stack([vu[:, i] * vv[:, j] for i, j in basis])
    if weights is not None:
        rows = np.asarray(weights, dtype=float)
        if rows.shape != values.shape or not np.all(rows > 0):
            raise FitError(len(rows), "Need one positive weight per sample")
        design = design * rows[:, None]
        values = values * rows
    rank = int(np.linalg.matrix_rank(design))
    if rank < len(basis) and regularization == 0:
        raise FitError(rank, "Rank-deficient fit (rank %d < %d); use "
                       "regularization > 0" % (rank, len(basis)))
    if regularization > 0:
        ridge = math.sqrt(regularization) * np.eye(len(basis))
        lhs = np.vstack([design, ridge])
        rhs = np.concatenate([values, np.zeros(len(basis))])
    else:
        lhs, rhs = design, values
    coef = np.linalg.lstsq(lhs, rhs, rcond=None)[0]
    rounded = [Fraction(float(c)).limit_denominator(denominator_bound)
               for c in coef]
    residual = float(np.linalg.norm(
        design.dot(np.array([float(c) for c in rounded])) - values))
    tx = _chebyshev_in("x", cx, hx, degree)
    ty = _chebyshev_in("y", cy, hy, degree)
    poly = BivariatePolynomial.zero()
    for (i, j), c in zip(basis, rounded):
        if c != 0:
            poly = poly + tx[i] * ty[j] * c
    log.debug("Fit degree %d: rank %d, residual %.3g" %
              (degree, rank, residual))
    return FitResult(poly, residual, rank, degree)


def interpolation_correction(p, points):
    """
    Minimal-norm polynomial L over the smallest monomial set for which the
    points impose independent conditions, with L(q) = p(q) at every point.
    :param p: BivariatePolynomial
    :param points: distinct rational points
    :return: BivariatePolynomial L; p - L vanishes at every point
    """
    points = [(Util.to_fraction(a), Util.to_fraction(b)) for a, b in points]
    if not points:
        return BivariatePolynomial.zero()
    if len(set(points)) != len(points):
        raise FitError(points, "Interpolation points must be distinct")
    values = sympy.Matrix([_rational(p.eval(q)) for q in points])
    degree = 0
    while True:
        basis = monomials(degree)
        rows = [[_rational(a ** i * b ** j) for i, j in basis]
                for a, b in points]
        mat = sympy.Matrix(rows)
        if mat.rank() == len(points):
            break
        degree += 1
    coef = mat.T * (mat * mat.T).inv() * values
    return BivariatePolynomial.from_terms(
        {m: Util.to_fraction(c) for m, c in zip(basis, coef)})
