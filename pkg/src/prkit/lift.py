"""
Higher-dimensional lift of a refined algebraic domain: per label a, the
hypersurface prod f_j(x) - sum y_{a,j}^2 = 0 over the curves labelled a.
"""
import logging

from collections import OrderedDict
from fractions import Fraction

from prkit.domain import compute_f_set
from prkit.polyalg import BivariatePolynomial
from prkit.util import FORMAT_TAG, PrkitError, Util, Violation, \
    ValidationReport

log = logging.getLogger(__name__)

LIFT_TAGS = ["unassigned_curve", "unknown_curve", "not_surjective",
             "same_label_crossing"]

HEADER = [
    "The projection to x1 restricted to the zero set is asserted to be a "
    "Morse-Bott function whose Reeb V-digraph is isomorphic to the "
    "Poincare-Reeb V-digraph of the domain; this is not machine-checked.",
    "Non-singularity of the zero set is asserted, not certified.",
]


class LiftError(PrkitError):
    """Malformed lift document; expression is the location"""
    @property
    def location(self):
        return self.expression


class LiftSpec(object):
    """
    A labelling of curves (surjective onto the labels) and a multiplicity
    m0(a) >= 0 per label; label a gets m0(a) + 1 extra variables.
    """
    def __init__(self, assignment, m0):
        self.assignment = OrderedDict(assignment)
        self.m0 = OrderedDict(sorted(m0.items()))
        for label, count in self.m0.items():
            if not isinstance(count, int) or isinstance(count, bool) or \
                    count < 0:
                raise LiftError("/m0/" + str(label),
                                "m0 must be a non-negative integer")
        for cid, label in self.assignment.items():
            if label not in self.m0:
                raise LiftError("/assignment/" + str(cid),
                                "Label %s has no m0 entry" % label)

    @property
    def labels(self):
        return list(self.m0)

    def curves_of(self, label, spec):
        """Curves of spec labelled label, in spec order"""
        return [c for c in spec.curves
                if self.assignment.get(c.id) == label]

    @staticmethod
    def from_json(doc):
        if not isinstance(doc, dict):
            raise LiftError("/", "Lift document must be an object")
        assignment, m0 = doc.get("assignment"), doc.get("m0")
        if not isinstance(assignment, dict) or not assignment:
            raise LiftError("/assignment", "assignment must map curve ids "
                            "to labels")
        if not isinstance(m0, dict) or not m0:
            raise LiftError("/m0", "m0 must map labels to integers")
        for cid, label in assignment.items():
            if not isinstance(label, str) or not label:
                raise LiftError("/assignment/" + cid,
                                "Labels must be non-empty strings")
        return LiftSpec(assignment, m0)

    def to_json(self):
        return {"format": FORMAT_TAG, "assignment": dict(self.assignment),
                "m0": dict(self.m0)}


class LiftReport(ValidationReport):
    ORDER = LIFT_TAGS


def validate_partition(spec, lift, settings=None, analysis=None):
    """
    Checks that every curve has a label, every label is used and no two
    curves crossing on the closure of the domain share a label.
    :param spec: RefinedDomainSpec that passed validate_domain
    :return: LiftReport
    """
    ids = [c.id for c in spec.curves]
    violations = []
    for cid in ids:
        if cid not in lift.assignment:
            violations.append(Violation(
                "unassigned_curve", "Curve %s has no label" % cid,
                {"curve": cid}))
    for cid in lift.assignment:
        if cid not in ids:
            violations.append(Violation(
                "unknown_curve", "Label given for unknown curve %s" % cid,
                {"curve": cid}))
    used = set(lift.assignment[c] for c in ids if c in lift.assignment)
    for label in lift.labels:
        if label not in used:
            violations.append(Violation(
                "not_surjective", "No curve carries label %s" % label,
                {"label": label}))
    for crossing in compute_f_set(spec, settings, analysis).crossings:
        a, b = crossing.curves
        label = lift.assignment.get(a)
        if label is not None and label == lift.assignment.get(b):
            violations.append(Violation(
                "same_label_crossing",
                "Curves %s and %s cross on the closure but share label %s"
                % (a, b, label), dict(crossing.to_json(), label=label)))
    return LiftReport(violations)


def _y_name(label, j):
    return "y_{%s,%d}" % (label, j)


def variables(lift):
    names = ["x1", "x2"]
    for label in lift.labels:
        names += [_y_name(label, j) for j in range(1, lift.m0[label] + 2)]
    return names


def _term_key(exponents):
    return sum(exponents), tuple(-e for e in exponents)


def _monomial_text(names, exponents):
    parts = []
    for name, e in zip(names, exponents):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append("%s**%d" % (name, e))
    return "*".join(parts)


def _coefficient_text(size):
    if size.denominator == 1:
        return str(size.numerator)
    return Util.format_fraction(size)


def format_terms(names, terms):
    """
    :param terms: list of (exponents, Fraction) in output order
    :return: the polynomial as text, e.g. "1 - x1**2 - y_{a,1}**2"
    """
    if not terms:
        return "0"
    out = []
    for k, (exponents, c) in enumerate(terms):
        mono = _monomial_text(names, exponents)
        size = abs(c)
        if mono and size == 1:
            body = mono
        elif mono:
            body = "%s*%s" % (_coefficient_text(size), mono)
        else:
            body = _coefficient_text(size)
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


def lift_terms(spec, lift, label, names):
    """
    :return: [(exponents over names, coefficient)] of
    prod f_j(x1, x2) - sum_j y_{label,j}^2, ordered by degree
    """
    product = BivariatePolynomial.constant(1)
    for curve in lift.curves_of(label, spec):
        product = product * curve.f
    width = len(names)
    terms = {}
    for (i, j), c in product.terms.items():
        terms[(i, j) + (0,) * (width - 2)] = Fraction(c)
    for k in range(1, lift.m0[label] + 2):
        exponents = [0] * width
        exponents[names.index(_y_name(label, k))] = 2
        terms[tuple(exponents)] = terms.get(tuple(exponents), 0) - 1
    return sorted(((e, c) for e, c in terms.items() if c != 0),
                  key=lambda t: _term_key(t[0]))


def emit_lift(spec, lift):
    """
    :return: JSON document with the variables, the ambient dimension, the
    projection and one equation per label, both as terms and as text
    """
    names = variables(lift)
    equations = []
    for label in lift.labels:
        terms = lift_terms(spec, lift, label, names)
        equations.append(OrderedDict([
            ("label", label),
            ("curves", [c.id for c in lift.curves_of(label, spec)]),
            ("terms", [{"exponents": list(e),
                        "coeff": Util.format_fraction(c)} for e, c in terms]),
            ("text", format_terms(names, terms) + " = 0")]))
    dimension = 2 + sum(m + 1 for m in lift.m0.values())
    log.debug("Lift of %d curves into R^%d" % (len(spec.curves), dimension))
    return OrderedDict([
        ("format", FORMAT_TAG),
        ("header", list(HEADER)),
        ("variables", names),
        ("ambient_dimension", dimension),
        ("projection", "x1"),
        ("equations", equations)])


def restrict_to_plane(document):
    """
    Sets every y variable of the emitted equations to 0.
    :return: label -> {(i, j): Fraction} over (x1, x2)
    """
    out = OrderedDict()
    for eq in document["equations"]:
        terms = {}
        for term in eq["terms"]:
            e = term["exponents"]
            if any(e[2:]):
                continue
            terms[(e[0], e[1])] = Util.to_fraction(term["coeff"])
        out[eq["label"]] = terms
    return out
