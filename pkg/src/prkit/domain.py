"""Refined algebraic domains: schema, exact validation and structural points"""
import logging

from prkit.arrangement import Arrangement, Component, RootOps
from prkit.polyalg import BivariatePolynomial, Box, PositiveDimensionalError, \
    RootPair, resultant_x, resultant_y, solve_system, BoxError, \
    PolynomialParseError, STURM
from prkit.util import PrkitError, Util, Violation, ValidationReport

log = logging.getLogger(__name__)

WITNESS_WIDTH = Util.to_fraction("1/1000000000000")

# Report order of violation tags
TAGS = ["singular_point", "singular_locus", "vertical_component",
        "curve_on_box_edge", "basepoint_outside_box",
        "basepoint_not_positive", "component_touches_box",
        "curve_disjoint_from_closure", "non_transverse_crossing",
        "triple_point"]


class DomainSchemaError(PrkitError):
    """Malformed domain document; expression holds a JSON-pointer location"""
    @property
    def location(self):
        return self.expression


class NonGenericError(PrkitError):
    pass


class CurveSpec(object):
    def __init__(self, cid, f):
        if not isinstance(cid, str) or not cid:
            raise DomainSchemaError("/id", "Curve id must be a string")
        if f.is_zero or f.is_constant:
            raise DomainSchemaError(
                "/f", "Curve %s must be nonconstant" % cid)
        self.id = cid
        self.f = f

    def to_json(self):
        return {"id": self.id, "f": self.f.to_json()}

    def __repr__(self):
        return "CurveSpec(%s: %s)" % (self.id, self.f)


class RefinedDomainSpec(object):
    """Curves f_j with the region f_j > 0, a basepoint and a working box"""
    def __init__(self, curves, basepoint, box):
        self.curves = list(curves)
        self.basepoint = (Util.to_fraction(basepoint[0]),
                          Util.to_fraction(basepoint[1]))
        self.box = box
        ids = [c.id for c in self.curves]
        if len(set(ids)) != len(ids):
            raise DomainSchemaError("/curves", "Curve ids must be unique")
        if not self.curves:
            raise DomainSchemaError("/curves", "At least one curve needed")

    @staticmethod
    def from_json(doc, max_degree=None):
        """
        :param doc: parsed domain JSON
        :param max_degree: optional cap on the total degree of every curve
        :raises DomainSchemaError with the location of the first problem
        """
        if not isinstance(doc, dict):
            raise DomainSchemaError("", "Domain must be a JSON object")
        for key in ("curves", "basepoint", "box"):
            if key not in doc:
                raise DomainSchemaError("/" + key, "Missing key " + key)
        if not isinstance(doc["curves"], list):
            raise DomainSchemaError("/curves", "curves must be a list")
        curves = []
        for k, entry in enumerate(doc["curves"]):
            where = "/curves/%d" % k
            if not isinstance(entry, dict) or "id" not in entry \
                    or "f" not in entry:
                raise DomainSchemaError(where, "Curve needs id and f")
            try:
                f = BivariatePolynomial.parse(entry["f"])
            except PolynomialParseError as e:
                raise DomainSchemaError(where + "/f", e.message)
            if max_degree is not None and f.degree > max_degree:
                raise DomainSchemaError(
                    where + "/f", "Degree %d exceeds the limit %d"
                    % (f.degree, max_degree))
            try:
                curves.append(CurveSpec(entry["id"], f))
            except DomainSchemaError as e:
                raise DomainSchemaError(where + e.location, e.message)
        try:
            bx, by = doc["basepoint"]
            basepoint = (Util.to_fraction(bx), Util.to_fraction(by))
        except (TypeError, ValueError, PrkitError):
            raise DomainSchemaError(
                "/basepoint", "basepoint must be two rationals")
        try:
            box = Box.from_json(doc["box"])
        except (BoxError, PrkitError) as e:
            raise DomainSchemaError("/box", str(e))
        return RefinedDomainSpec(curves, basepoint, box)

    def to_json(self):
        f = Util.format_fraction
        return {"curves": [c.to_json() for c in self.curves],
                "basepoint": [f(self.basepoint[0]), f(self.basepoint[1])],
                "box": self.box.to_json()}

    def curve_list(self):
        return [(c.id, c.f) for c in self.curves]

    def translate(self, dx, dy):
        dx, dy = Util.to_fraction(dx), Util.to_fraction(dy)
        return RefinedDomainSpec(
            [CurveSpec(c.id, c.f.translate(dx, dy)) for c in self.curves],
            (self.basepoint[0] + dx, self.basepoint[1] + dy),
            self.box.translate(dx, dy))

    def scaled(self, cid, factor):
        """:return: a copy with curve cid multiplied by factor"""
        return RefinedDomainSpec(
            [CurveSpec(c.id, c.f.scale(factor) if c.id == cid else c.f)
             for c in self.curves], self.basepoint, self.box)

    def permuted(self, order):
        by_id = {c.id: c for c in self.curves}
        return RefinedDomainSpec([by_id[cid] for cid in order],
                                 self.basepoint, self.box)


class DomainViolation(Violation):
    def __init__(self, tag, message, witness=None):
        assert tag in TAGS, tag
        super(DomainViolation, self).__init__(tag, message, witness)


class DomainReport(ValidationReport):
    ORDER = TAGS
    analysis = None


def _point_witness(point):
    p = point.refine(WITNESS_WIDTH)
    return {"x": p.x.to_json() if not p.x.is_exact
            else Util.format_fraction(p.x.lo),
            "y": p.y.to_json() if not p.y.is_exact
            else Util.format_fraction(p.y.lo),
            "approx": list(p.approx())}


class Singularities(object):
    """Exact search for singular points of one curve over the whole plane"""
    def __init__(self, f, settings=None):
        settings = settings or {}
        self.f = f
        self.depth = settings.get("solve_depth", 80)
        self.method = settings.get("isolation_method", STURM)

    def vertical_lines(self):
        """:return: real x-values a such that the line x = a is in f = 0"""
        rows = [c for c in self.f.y_coefficients() if not c.is_zero]
        content = rows[0]
        for row in rows[1:]:
            content = content.gcd(row)
        if content.degree < 1:
            return []
        return content.isolate(method=self.method)

    def global_box(self, g):
        """
        A box holding every real common zero of f and g.
        :raises PositiveDimensionalError if f and g share a factor
        """
        by_x, by_y = resultant_y(self.f, g), resultant_x(self.f, g)
        if by_x.is_zero or by_y.is_zero:
            raise PositiveDimensionalError(
                str(self.f.gcd(g)), "Common factor %s" % self.f.gcd(g))
        bx = by_x.cauchy_bound() if by_x.degree >= 1 else 1
        by = by_y.cauchy_bound() if by_y.degree >= 1 else 1
        return Box(-bx, bx, -by, by)

    def points(self):
        """
        :return: list of singular points as RootPair
        :raises PositiveDimensionalError when f has a repeated factor
        """
        f = self.f
        fx, fy = f.derive("x"), f.derive("y")
        if fy.is_zero:
            # only vertical lines, reported separately
            return []
        box = self.global_box(fy)
        candidates = solve_system(f, fy, box, self.depth, self.method)
        if not candidates:
            return []
        partners = [(f, fx), (fx, fy), (f, fx + fy), (f, fx + fy * 2)]
        for a, b in partners:
            if a.is_zero or b.is_zero:
                continue
            try:
                others = solve_system(a, b, box, self.depth, self.method)
            except PositiveDimensionalError:
                continue
            return [p for p in candidates
                    if any(p.same_point(q) for q in others)]
        return [p for p in candidates if self._vanishes(fx, p)]

    def _vanishes(self, g, point):
        """Interval fallback: treats an undecided sign as zero"""
        p = point
        for _ in range(self.depth):
            if not g.interval_eval(p.x.interval, p.y.interval).contains_zero():
                return False
            p = RootPair(p.x.bisect(), p.y.bisect(), p.transverse)
        return True


def _in_box(point, box):
    return RootOps.side_of(point.x, box.x0) >= 0 and \
        RootOps.side_of(point.x, box.x1) <= 0 and \
        RootOps.side_of(point.y, box.y0) >= 0 and \
        RootOps.side_of(point.y, box.y1) <= 0


def validate_curve_nonsingular(curve, box, settings=None):
    """
    :param curve: CurveSpec
    :param box: Box
    :return: ValidationReport; scope maps the curve id to "global" when no
    singular point exists anywhere in the plane, "box" otherwise
    """
    search = Singularities(curve.f, settings)
    lines = search.vertical_lines()
    if lines:
        return DomainReport([DomainViolation(
            "vertical_component",
            "Curve %s contains a vertical line" % curve.id,
            {"curve": curve.id,
             "x": [root.refine(WITNESS_WIDTH).to_json() for root in lines]})],
            {curve.id: "box"})
    try:
        points = search.points()
    except PositiveDimensionalError:
        return DomainReport([DomainViolation(
            "singular_locus",
            "Curve %s has a repeated factor: its singular set is a curve"
            % curve.id, {"curve": curve.id, "f": str(curve.f)})],
            {curve.id: "box"})
    inside = [p for p in points if _in_box(p, box)]
    violations = [DomainViolation(
        "singular_point", "Curve %s is singular at (%.6g, %.6g)"
        % ((curve.id,) + p.approx()),
        dict(_point_witness(p), curve=curve.id)) for p in inside]
    if points and not inside:
        log.info("Curve %s has %d singular points outside the box" %
                 (curve.id, len(points)))
    return DomainReport(violations,
                        {curve.id: "box" if points else "global"})


class DomainAnalysis(object):
    """Arrangement sweep plus basepoint component of a domain"""
    def __init__(self, spec, settings=None):
        self.spec = spec
        self.settings = settings or {}
        self.arrangement = None
        self.component = None

    def run(self):
        self.arrangement = Arrangement(self.spec.curve_list(), self.spec.box,
                                       self.settings).build()
        self.component = Component(self.arrangement,
                                   self.spec.basepoint).analyse()
        return self


def _box_edge_violations(spec):
    out = []
    box = spec.box
    for c in spec.curves:
        for side, value in (("bottom", box.y0), ("top", box.y1)):
            if c.f.restrict_y(value).is_zero:
                out.append(DomainViolation(
                    "curve_on_box_edge",
                    "Curve %s contains the %s box edge" % (c.id, side),
                    {"curve": c.id, "edge": side}))
        for side, value in (("left", box.x0), ("right", box.x1)):
            if c.f.restrict_x(value).is_zero:
                out.append(DomainViolation(
                    "curve_on_box_edge",
                    "Curve %s contains the %s box edge" % (c.id, side),
                    {"curve": c.id, "edge": side}))
    return out


def _basepoint_violations(spec):
    bx, by = spec.basepoint
    if not spec.box.contains_interior(spec.basepoint):
        return [DomainViolation(
            "basepoint_outside_box", "Basepoint is not inside the open box",
            {"basepoint": [Util.format_fraction(bx),
                           Util.format_fraction(by)]})]
    out = []
    for c in spec.curves:
        value = c.f.eval(spec.basepoint)
        if value <= 0:
            out.append(DomainViolation(
                "basepoint_not_positive",
                "Curve %s is not positive at the basepoint" % c.id,
                {"curve": c.id, "value": Util.format_fraction(value)}))
    return out


def _closure_violations(spec, analysis):
    out = []
    component = analysis.component
    for x, y in component.touch_witnesses():
        out.append(DomainViolation(
            "component_touches_box",
            "Component reaches the box boundary near (%.6g, %.6g)" % (x, y),
            {"approx": [x, y]}))
    if out:
        return out
    met = component.curves_met()
    for c in spec.curves:
        if c.id not in met:
            out.append(DomainViolation(
                "curve_disjoint_from_closure",
                "Curve %s does not meet the closure of the component" % c.id,
                {"curve": c.id}))
    for event in component.closure_events():
        if len(event.curves) >= 3:
            out.append(DomainViolation(
                "triple_point",
                "Curves %s meet at one point of the closure"
                % ", ".join(sorted(event.curves)),
                dict(_point_witness(event.point),
                     curves=sorted(event.curves))))
        for pair, transverse in event.crossings.items():
            if not transverse:
                out.append(DomainViolation(
                    "non_transverse_crossing",
                    "Curves %s are tangent on the closure"
                    % " and ".join(sorted(pair)),
                    dict(_point_witness(event.point),
                         curves=sorted(pair))))
    return out


def validate_domain(spec, settings=None):
    """
    Checks, in order: non-singular curves, basepoint, boundedness inside
    the box, every curve meeting the closure, transverse crossings and no
    triple points on the closure.
    :return: DomainReport listing every violation with witness data; when
    the sweep ran, its DomainAnalysis is kept as report.analysis
    """
    settings = settings or {}
    jobs = settings.get("jobs", 1)
    with Util.stage_timer("domain validation"):
        reports = Util.pool_map(
            lambda c: validate_curve_nonsingular(c, spec.box, settings),
            spec.curves, jobs)
        violations = [v for r in reports for v in r.violations]
        scope = {}
        for r in reports:
            scope.update(r.scope)
        violations += _box_edge_violations(spec)
        violations += _basepoint_violations(spec)
        if violations:
            return DomainReport(violations, scope)
        try:
            analysis = DomainAnalysis(spec, settings).run()
        except PositiveDimensionalError as e:
            return DomainReport([DomainViolation(
                "non_transverse_crossing",
                "Two curves share a component: " + e.message,
                {"common": str(e.expression)})], scope)
        violations += _closure_violations(spec, analysis)
    report = DomainReport(violations, scope)
    report.analysis = analysis
    return report


class Crossing(object):
    def __init__(self, point, curves):
        self.point = point
        self.curves = tuple(sorted(curves))

    def to_json(self):
        return {"point": _point_witness(self.point),
                "curves": list(self.curves)}


class Fold(object):
    DEFINITE = "definite"
    INDEFINITE = "indefinite"
    UNCLASSIFIED = "unclassified"

    def __init__(self, point, curve, kind):
        self.point = point
        self.curve = curve
        self.kind = kind

    def to_json(self):
        return {"point": _point_witness(self.point), "curve": self.curve,
                "kind": self.kind}


class FSet(object):
    """Crossings and folds lying on the closure of the component"""
    def __init__(self, crossings, folds):
        self.crossings = crossings
        self.folds = folds

    def points(self):
        return [c.point for c in self.crossings] + \
            [f.point for f in self.folds]

    def to_json(self):
        return {"crossings": [c.to_json() for c in self.crossings],
                "folds": [f.to_json() for f in self.folds]}


def f_set_from_events(events):
    """
    :param events: arrangement events lying on the closure
    :raises NonGenericError when a fold point is also a crossing
    """
    crossings, folds = [], []
    for event in events:
        crossing_curves = set()
        for pair in sorted(event.crossings, key=sorted):
            crossings.append(Crossing(event.point, pair))
            crossing_curves |= pair
        for cid in sorted(event.folds):
            if cid in crossing_curves:
                raise NonGenericError(
                    _point_witness(event.point),
                    "Fold of curve %s coincides with a crossing near "
                    "(%.6g, %.6g)" % ((cid,) + event.point.approx()))
            folds.append(Fold(event.point, cid, event.fold_kinds[cid]))
    return FSet(crossings, folds)


def compute_f_set(spec, settings=None, analysis=None):
    """
    :param spec: a RefinedDomainSpec that passed validate_domain
    :return: FSet with points ordered by x, then y
    """
    analysis = analysis or DomainAnalysis(spec, settings).run()
    return f_set_from_events(analysis.component.closure_events())
