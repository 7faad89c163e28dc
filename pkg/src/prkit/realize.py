"""
Realization of an embedded graph as a refined algebraic domain whose
Poincare-Reeb V-digraph is weakly isomorphic to the graph.

The pipeline adds vertical segments at vertex x-values, rewires a small
box around every branch vertex into slanted and horizontal segments,
thickens the resulting complex into a planar region, fits a polynomial to
a signed field of that region and certifies it exactly, and finally
removes small conics around every fold of the fitted curve so that the
vertex values are pinned to the input x-coordinates.
"""
import math
import logging

from collections import OrderedDict
from fractions import Fraction

import numpy as np
import shapely
from shapely.geometry import LineString, MultiLineString, Polygon
from shapely.ops import unary_union

from prkit.domain import CurveSpec, RefinedDomainSpec, Fold, \
    validate_domain, compute_f_set
from prkit.geometry import Geometry
from prkit.polyalg import Box, ConicSpec, Interval, FitError, \
    IsolatedRoot, RootPair, conic, fit_polynomial, interpolation_correction, \
    solve_system
from prkit.sweep import build_poincare_reeb, raster_graph, seed_pixel, \
    grid_centers
from prkit.util import PrkitError, Util, FORMAT_TAG
from prkit.vdigraph import VDigraph, is_weakly_isomorphic, \
    validate_theorem_hypotheses

log = logging.getLogger(__name__)

ALGEBRAIC = "algebraic"
PIECEWISE = "piecewise"
STAGES = ("hypotheses", "rewire", "complex", "thicken", "algebraize",
          "excise", "verify")

LEFT = -1
RIGHT = 1

# Piece kinds of the modified complex
MIDDLE = "middle"
SLANT = "slant"
HORIZONTAL = "horizontal"
TIP_SLANT = "tip_slant"
TIP_HORIZONTAL = "tip_horizontal"
SEGMENT = "s_p"

PIN_WIDTH = Fraction(1, 10 ** 12)
MAX_RESOLUTION = 4096


class RealizationError(PrkitError):
    """A pipeline stage failed; stage is one of STAGES"""
    def __init__(self, stage, message, diagnostics=None):
        super(RealizationError, self).__init__(stage, message)
        self.stage = stage
        self.diagnostics = diagnostics or {}

    def to_json(self):
        return {"stage": self.stage, "message": self.message,
                "diagnostics": self.diagnostics}


def _f(q):
    return Util.format_fraction(q)


def _pt(p):
    return [_f(p[0]), _f(p[1])]


def _y_at(line, x):
    """Height of an x-monotone polyline at x, by exact interpolation"""
    for a, b in Geometry.segments(line):
        lo, hi = min(a[0], b[0]), max(a[0], b[0])
        if lo <= x <= hi:
            return a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0])
    raise RealizationError("rewire", "x = %s is outside the edge" % x)


class _GraphGeometry(object):
    """Gaps, clearances and slopes of an embedded graph"""
    def __init__(self, g):
        self.g = g
        xs = sorted(set(x for x, _ in g.vertices.values()))
        self.vertex_xs = xs
        gaps = [b - a for a, b in zip(xs, xs[1:])]
        self.gap = min(gaps) if gaps else Fraction(1)
        self.first_dx = []
        self.first_slope = []
        self.max_slope = Fraction(0)
        for eid in g.edges:
            line = g.polyline(eid)
            for a, b in Geometry.segments(line):
                slope = abs((b[1] - a[1]) / (b[0] - a[0]))
                self.max_slope = max(self.max_slope, slope)
            for end in (line, list(reversed(line))):
                dx = abs(end[1][0] - end[0][0])
                self.first_dx.append(dx)
                self.first_slope.append(
                    abs((end[1][1] - end[0][1]) / (end[1][0] - end[0][0])))
        self.clearance = self._clearance()

    def heights_at(self, x):
        ys = [y for vx, y in self.g.vertices.values() if vx == x]
        for eid in self.g.edges:
            line = self.g.polyline(eid)
            lo = min(line[0][0], line[-1][0])
            hi = max(line[0][0], line[-1][0])
            if lo < x < hi:
                ys.append(_y_at(line, x))
        return sorted(ys)

    def _clearance(self):
        lines = set(self.vertex_xs)
        for eid in self.g.edges:
            lines |= set(p[0] for p in self.g.polyline(eid))
        lines = sorted(lines)
        lines += [Util.midpoint(a, b) for a, b in zip(lines, lines[1:])]
        best = None
        for x in lines:
            ys = self.heights_at(x)
            for a, b in zip(ys, ys[1:]):
                if b > a and (best is None or b - a < best):
                    best = b - a
        return best if best is not None else self.gap


class RealizationConfig(object):
    """
    Separation parameters of the construction. Explicit values are
    validated against the graph and never adjusted.
    """
    def __init__(self, eps1, eps2, eps_prime, delta,
                 radius_scale=Fraction(1, 2),
                 fit_degree_schedule=(2, 4, 6, 8, 10, 12), max_degree=None,
                 resolution=512, circle_offsets=(2, Fraction(3, 2),
                                                 Fraction(5, 4))):
        self.eps1 = Util.to_fraction(eps1)
        self.eps2 = Util.to_fraction(eps2)
        self.eps_prime = Util.to_fraction(eps_prime)
        self.delta = Util.to_fraction(delta)
        self.radius_scale = Util.to_fraction(radius_scale)
        schedule = sorted(int(d) for d in fit_degree_schedule)
        if max_degree is not None:
            schedule = [d for d in schedule if d <= max_degree]
        self.fit_degree_schedule = schedule
        self.max_degree = max_degree
        self.resolution = int(resolution)
        self.circle_offsets = [Util.to_fraction(k) for k in circle_offsets]

    @staticmethod
    def defaults_for(g, settings=None, **explicit):
        """
        eps2 is a quarter of the smallest vertical clearance between
        features on a common vertical line; eps1 is bounded by a quarter of
        the smallest gap between vertex x-values and by the slopes of the
        edges; eps' = eps2 / 2; delta is a quarter of the smallest of
        eps' and the distances between unrelated pieces of the complex.
        :param explicit: values that replace the derived ones
        """
        settings = settings or {}
        explicit = {k: v for k, v in explicit.items() if v is not None}
        geo = _GraphGeometry(g)
        eps2 = Util.to_fraction(explicit.get("eps2", geo.clearance / 4))
        eps1 = explicit.get("eps1")
        if eps1 is None:
            bounds = [geo.gap / 4] + [dx / 2 for dx in geo.first_dx]
            if geo.max_slope > 0:
                bounds.append(eps2 / (4 * geo.max_slope))
            eps1 = min(bounds)
        eps_prime = explicit.get("eps_prime", eps2 / 2)
        cfg = RealizationConfig(
            eps1, eps2, eps_prime, explicit.get("delta", 1),
            explicit.get("radius_scale", Fraction(1, 2)),
            explicit.get("fit_degree_schedule",
                         settings.get("fit_degree_schedule",
                                      (2, 4, 6, 8, 10, 12))),
            explicit.get("max_degree"),
            explicit.get("resolution",
                         settings.get("raster_resolution", 512)))
        if "delta" not in explicit:
            cfg.check(g)
            segments = vertical_segments(g, cfg)
            rewired = rewire_neighborhoods(g, segments, cfg)
            cx = build_G_eps(g, segments, rewired, cfg)
            candidates = [cfg.eps_prime / 4, cfg.eps1 / 8]
            spacing = min([n.spacing for n in rewired.values()
                           if n.spacing is not None] or [cfg.eps2])
            candidates.append(spacing / 4)
            unrelated = cx.min_unrelated_distance()
            if unrelated is not None:
                candidates.append(
                    Fraction(unrelated / 4).limit_denominator(10 ** 6))
            cfg.delta = min(c for c in candidates if c > 0)
        return cfg

    def check(self, g):
        """
        :raises RealizationError (stage "rewire") when a parameter breaks
        the separation the construction relies on
        """
        geo = _GraphGeometry(g)
        problems = []
        if not 0 < self.eps1 < geo.gap / 2:
            problems.append("eps1 must be below half the smallest gap "
                            "between vertex x-values (%s)" % (geo.gap / 2))
        if any(self.eps1 >= dx for dx in geo.first_dx):
            problems.append("eps1 must be shorter than the first segment "
                            "of every edge")
        if not 0 < self.eps2 < geo.clearance / 2:
            problems.append("eps2 must be below half the smallest vertical "
                            "clearance (%s)" % (geo.clearance / 2))
        if not 0 < self.eps_prime < self.eps2:
            problems.append("eps' must lie strictly between 0 and eps2")
        if any(s * self.eps1 >= self.eps2 / 2 for s in geo.first_slope):
            problems.append("eps1 too large: an edge leaves the box "
                            "around its vertex; choose a smaller eps1")
        if self.delta <= 0:
            problems.append("delta must be positive")
        if not self.fit_degree_schedule:
            problems.append("the fit degree schedule is empty")
        if problems:
            raise RealizationError("rewire", "; ".join(problems),
                                   {"config": self.to_json()})
        return self

    def to_json(self):
        return {"eps1": _f(self.eps1), "eps2": _f(self.eps2),
                "eps_prime": _f(self.eps_prime), "delta": _f(self.delta),
                "radius_scale": _f(self.radius_scale),
                "fit_degree_schedule": list(self.fit_degree_schedule),
                "max_degree": self.max_degree,
                "resolution": self.resolution,
                "circle_offsets": [_f(k) for k in self.circle_offsets]}


class VerticalSegment(object):
    """S_p: the segment {p} x [p_m - eps2, p_M + eps2]"""
    def __init__(self, p, lo, hi, vertices):
        self.p = p
        self.lo = lo
        self.hi = hi
        self.vertices = vertices

    def to_json(self):
        return {"p": _f(self.p), "lo": _f(self.lo), "hi": _f(self.hi),
                "vertices": self.vertices}


def vertical_segments(g, cfg):
    """:return: one VerticalSegment per x-value carrying a vertex"""
    by_x = OrderedDict()
    for v, (x, y) in sorted(g.vertices.items(), key=lambda kv: kv[1]):
        by_x.setdefault(x, []).append((y, v))
    out = []
    for p, items in by_x.items():
        ys = [y for y, _ in items]
        out.append(VerticalSegment(p, min(ys) - cfg.eps2, max(ys) + cfg.eps2,
                                   [v for _, v in sorted(items)]))
    return out


class RewiredEnd(object):
    """
    One edge end inside N_v: the clip point on x = p +- eps1, the bend on
    x = p +- eps1/2 and the foot on x = p.
    """
    def __init__(self, edge, side, clip, bend, foot):
        self.edge = edge
        self.side = side
        self.clip = clip
        self.bend = bend
        self.foot = foot

    @property
    def height(self):
        return self.foot[1]

    def to_json(self):
        return {"edge": self.edge,
                "side": "left" if self.side == LEFT else "right",
                "clip": _pt(self.clip), "bend": _pt(self.bend),
                "foot": _pt(self.foot)}


class Pocket(object):
    """A component of N_v minus the complex between two same-side ends"""
    def __init__(self, vertex, p, side, lower, upper):
        self.vertex = vertex
        self.p = p
        self.side = side
        self.lower = lower
        self.upper = upper

    def to_json(self):
        return {"vertex": self.vertex, "p": _f(self.p),
                "side": "left" if self.side == LEFT else "right",
                "between": [_f(self.lower), _f(self.upper)]}


class Neighborhood(object):
    """N_v and the rewired edge ends of one vertex"""
    def __init__(self, vertex, p, y, ends, leaf, window=None):
        self.vertex = vertex
        self.p = p
        self.y = y
        self.ends = ends
        self.leaf = leaf
        self.window = window

    @property
    def spacing(self):
        if self.leaf or len(self.ends) < 2:
            return None
        hs = sorted(e.height for e in self.ends)
        return min(b - a for a, b in zip(hs, hs[1:]))

    def side_ends(self, side):
        return sorted([e for e in self.ends if e.side == side],
                      key=lambda e: e.height, reverse=True)

    def pockets(self):
        """Consecutive ends on one side bound a pocket"""
        out = []
        for side in (LEFT, RIGHT):
            ends = self.side_ends(side)
            for upper, lower in zip(ends, ends[1:]):
                out.append(Pocket(self.vertex, self.p, side, lower.height,
                                  upper.height))
        return out

    def to_json(self):
        doc = {"vertex": self.vertex, "p": _f(self.p), "y": _f(self.y),
               "leaf": self.leaf, "ends": [e.to_json() for e in self.ends]}
        if self.window is not None:
            doc["window"] = [_f(self.window[0]), _f(self.window[1])]
        return doc


def _rewire_vertex(g, v, cfg):
    p, y = g.vertices[v]
    ends = g.ends(v)
    if len(ends) == 1:
        eid, side = ends[0]
        clip_x = p + side * cfg.eps1
        clip = (clip_x, _y_at(g.polyline(eid), clip_x))
        bend = (p + side * cfg.eps1 / 2, y)
        return Neighborhood(v, p, y, [RewiredEnd(eid, side, clip, bend,
                                                 (p, y))], True)
    lo = y - cfg.eps2 + cfg.eps_prime
    hi = y + cfg.eps2 - cfg.eps_prime
    clipped = []
    for eid, side in ends:
        clip_x = p + side * cfg.eps1
        clipped.append((eid, side, (clip_x,
                                    _y_at(g.polyline(eid), clip_x))))
    # left ends take the upper heights, right ends the lower ones; each
    # side keeps the vertical order of its clip points
    lefts = sorted([c for c in clipped if c[1] == LEFT],
                   key=lambda c: c[2][1], reverse=True)
    rights = sorted([c for c in clipped if c[1] == RIGHT],
                    key=lambda c: c[2][1], reverse=True)
    k = len(clipped)
    step = (hi - lo) / (k + 1)
    rewired = []
    for i, (eid, side, clip) in enumerate(lefts + rights):
        h = hi - (i + 1) * step
        bend = (p + side * cfg.eps1 / 2, h)
        rewired.append(RewiredEnd(eid, side, clip, bend, (p, h)))
    return Neighborhood(v, p, y, rewired, False, (lo, hi))


def _check_clear(g, hood, cfg):
    """Edges not incident to the vertex stay outside N_v"""
    x0, x1 = hood.p - cfg.eps1, hood.p + cfg.eps1
    y0, y1 = hood.y - cfg.eps2, hood.y + cfg.eps2
    corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]
    incident = set(e for e, _ in g.ends(hood.vertex))
    for eid in g.edges:
        if eid in incident:
            continue
        line = g.polyline(eid)
        inside = any(x0 <= q[0] <= x1 and y0 <= q[1] <= y1 for q in line)
        if inside or Geometry.polyline_meets(line, corners) is not None:
            raise RealizationError(
                "rewire", "Edge %s enters the neighborhood of vertex %s; "
                "choose smaller eps1/eps2" % (eid, hood.vertex),
                {"edge": eid, "vertex": hood.vertex})
    for end in hood.ends:
        if not y0 < end.clip[1] < y1:
            raise RealizationError(
                "rewire", "Edge %s leaves the neighborhood of vertex %s "
                "before x = p +- eps1; choose a smaller eps1"
                % (end.edge, hood.vertex),
                {"edge": end.edge, "vertex": hood.vertex})


def rewire_neighborhoods(g, segments, cfg, jobs=1):
    """
    Replaces the edge ends inside every N_v by a slanted segment to
    x = p +- eps1/2 and a horizontal segment to x = p. Ends at branch
    vertices land at distinct heights of [p_v - eps2 + eps',
    p_v + eps2 - eps'], left ends above right ones; ends at degree-1
    vertices land at the vertex itself.
    :return: OrderedDict vertex id -> Neighborhood
    :raises RealizationError (stage "rewire") when an edge is not clear of
    a neighborhood
    """
    vertices = [v for s in segments for v in s.vertices]
    hoods = Util.pool_map(lambda v: _rewire_vertex(g, v, cfg), vertices,
                          jobs)
    for hood in hoods:
        _check_clear(g, hood, cfg)
    return OrderedDict((h.vertex, h) for h in hoods)


class Piece(object):
    def __init__(self, kind, points, owner, joints=None):
        self.kind = kind
        self.points = points
        self.owner = owner
        self.joints = set(joints if joints is not None
                          else (points[0], points[-1]))

    def line(self):
        return LineString([(float(x), float(y)) for x, y in self.points])

    def to_json(self):
        return {"kind": self.kind, "owner": self.owner,
                "points": [_pt(q) for q in self.points]}


class Complex(object):
    """The 1-complex G_eps as a list of polyline pieces"""
    def __init__(self, pieces):
        self.pieces = pieces

    def ledger(self):
        counts = OrderedDict((k, 0) for k in (MIDDLE, SLANT, HORIZONTAL,
                                              SEGMENT, TIP_SLANT,
                                              TIP_HORIZONTAL))
        for piece in self.pieces:
            counts[piece.kind] += 1
        return counts

    def geometry(self):
        return MultiLineString([p.line() for p in self.pieces])

    def bounds(self):
        xs = [q[0] for p in self.pieces for q in p.points]
        ys = [q[1] for p in self.pieces for q in p.points]
        return min(xs), max(xs), min(ys), max(ys)

    def related(self, a, b):
        return bool(a.joints & b.joints)

    def min_unrelated_distance(self):
        best = None
        lines = [p.line() for p in self.pieces]
        for i, a in enumerate(self.pieces):
            for j in range(i + 1, len(self.pieces)):
                if self.related(a, self.pieces[j]):
                    continue
                d = lines[i].distance(lines[j])
                best = d if best is None else min(best, d)
        return best

    def interior_point(self):
        """A rational point in the middle of the longest middle piece"""
        middles = [p for p in self.pieces if p.kind == MIDDLE]
        piece = max(middles, key=lambda p: abs(p.points[-1][0] -
                                               p.points[0][0]))
        x = Util.midpoint(piece.points[0][0], piece.points[-1][0])
        return x, _y_at(piece.points, x)

    def to_json(self):
        return {"ledger": self.ledger(),
                "pieces": [p.to_json() for p in self.pieces]}


def _clip_polyline(line, x_from, x_to):
    """Part of an x-monotone polyline between x_from < x_to"""
    inner = [q for q in line if x_from < q[0] < x_to]
    return [(x_from, _y_at(line, x_from))] + inner + \
        [(x_to, _y_at(line, x_to))]


def build_G_eps(g, segments, rewired, cfg):
    """
    Assembles the modified complex: each edge clipped to the part outside
    the neighborhoods of its ends, the rewired segments inside them, and
    S_p kept only on the closure of each branch-vertex neighborhood.
    :raises RealizationError (stage "complex") when two pieces meet away
    from a shared joint
    """
    pieces = []
    for eid, (src, dst, _) in g.edges.items():
        line = g.polyline(eid)
        end_src = [e for e in rewired[src].ends if e.edge == eid]
        end_dst = [e for e in rewired[dst].ends if e.edge == eid]
        if len(end_src) != 1 or len(end_dst) != 1:
            raise RealizationError("complex", "Edge %s is not rewired at "
                                   "both ends" % eid, {"edge": eid})
        left, right = end_src[0], end_dst[0]
        if line[0][0] > line[-1][0]:
            line, left, right = list(reversed(line)), right, left
        middle = _clip_polyline(line, left.clip[0], right.clip[0])
        middle[0], middle[-1] = left.clip, right.clip
        pieces.append(Piece(MIDDLE, middle, eid))
    for v, hood in rewired.items():
        feet = []
        for end in hood.ends:
            kinds = (TIP_SLANT, TIP_HORIZONTAL) if hood.leaf \
                else (SLANT, HORIZONTAL)
            pieces.append(Piece(kinds[0], [end.clip, end.bend], v))
            pieces.append(Piece(kinds[1], [end.bend, end.foot], v))
            feet.append(end.foot)
        if not hood.leaf:
            a, b = (hood.p, hood.y - cfg.eps2), (hood.p, hood.y + cfg.eps2)
            pieces.append(Piece(SEGMENT, [a, b], v, [a, b] + feet))
    complex_ = Complex(pieces)
    for i, a in enumerate(pieces):
        for b in pieces[i + 1:]:
            allowed = a.joints & b.joints
            hit = Geometry.polyline_meets(a.points, b.points, allowed)
            if hit is not None:
                raise RealizationError(
                    "complex", "Pieces of %s and %s meet at (%s, %s)"
                    % (a.owner, b.owner, _f(hit[0]), _f(hit[1])),
                    {"pieces": [a.to_json(), b.to_json()],
                     "point": _pt(hit)})
    log.debug("G_eps ledger: %s" % dict(complex_.ledger()))
    return complex_


class DefiniteFold(object):
    def __init__(self, point, vertex, p, extremum):
        self.point = point
        self.vertex = vertex
        self.p = p
        self.extremum = extremum

    kind = Fold.DEFINITE

    def to_json(self):
        return {"point": _pt(self.point), "vertex": self.vertex,
                "p": _f(self.p), "extremum": self.extremum}


class IndefiniteFold(object):
    def __init__(self, point, pocket, half_gap):
        self.point = point
        self.pocket = pocket
        self.half_gap = half_gap

    kind = Fold.INDEFINITE

    @property
    def vertex(self):
        return self.pocket.vertex

    @property
    def p(self):
        return self.pocket.p

    def to_json(self):
        return {"point": _pt(self.point), "pocket": self.pocket.to_json(),
                "half_gap": _f(self.half_gap)}


class FoldInventory(object):
    """Folds the thickened boundary is expected to have, with owners"""
    def __init__(self, definite, indefinite):
        self.definite = definite
        self.indefinite = indefinite

    def all(self):
        return list(self.definite) + list(self.indefinite)

    def to_json(self):
        return {"definite": [f.to_json() for f in self.definite],
                "indefinite": [f.to_json() for f in self.indefinite]}


class Thickening(object):
    """The region M_D around the complex and its expected folds"""
    def __init__(self, complex_, polygon, inventory, box, components):
        self.complex = complex_
        self.polygon = polygon
        self.inventory = inventory
        self.box = box
        self.components = components

    def to_json(self):
        exterior = list(self.polygon.exterior.coords)
        return {"components": self.components,
                "holes": len(self.polygon.interiors),
                "area": self.polygon.area,
                "box": self.box.to_json(),
                "exterior_vertices": len(exterior),
                "inventory": self.inventory.to_json()}


def fold_inventory(rewired, cfg):
    definite, indefinite = [], []
    for v, hood in rewired.items():
        if hood.leaf:
            side = hood.ends[0].side
            # the edge leaves to the right of a local minimum
            extremum = "min" if side == RIGHT else "max"
            definite.append(DefiniteFold((hood.p - side * cfg.delta, hood.y),
                                         v, hood.p, extremum))
            continue
        for pocket in hood.pockets():
            mid = Util.midpoint(pocket.lower, pocket.upper)
            point = (pocket.p + pocket.side * cfg.delta, mid)
            half_gap = (pocket.upper - pocket.lower) / 2 - cfg.delta
            indefinite.append(IndefiniteFold(point, pocket, half_gap))
    return FoldInventory(definite, indefinite)


def thicken(complex_, rewired, cfg, cycle_rank=0):
    """
    Regular neighborhood of the complex at distance delta with round caps.
    :param cycle_rank: number of independent cycles of the input graph;
    the region must have exactly that many holes
    :return: Thickening
    :raises RealizationError (stage "thicken") when the offset of two
    unrelated pieces overlaps
    """
    two_delta = 2 * float(cfg.delta)
    lines = [p.line() for p in complex_.pieces]
    pieces = complex_.pieces
    for i, a in enumerate(pieces):
        for j in range(i + 1, len(pieces)):
            if complex_.related(a, pieces[j]):
                continue
            if lines[i].distance(lines[j]) <= two_delta:
                raise RealizationError(
                    "thicken", "Offsets of %s and %s overlap at delta = %s; "
                    "choose a smaller delta" % (a.owner, pieces[j].owner,
                                               _f(cfg.delta)),
                    {"pieces": [a.to_json(), pieces[j].to_json()]})
    region = unary_union(lines).buffer(float(cfg.delta))
    if not isinstance(region, Polygon):
        raise RealizationError("thicken", "The thickened complex is not "
                               "connected", {"parts": len(region.geoms)})
    if len(region.interiors) != cycle_rank:
        raise RealizationError(
            "thicken", "The thickened complex has %d holes, the graph has "
            "%d cycles; choose a smaller delta" % (len(region.interiors),
                                                  cycle_rank))
    x0, x1, y0, y1 = complex_.bounds()
    pad = 4 * cfg.delta + cfg.eps1
    box = Box(x0 - pad, x1 + pad, y0 - pad, y1 + pad)
    inventory = fold_inventory(rewired, cfg)
    log.info("Thickened complex: %d holes, %d definite and %d indefinite "
             "folds expected" % (len(region.interiors),
                                 len(inventory.definite),
                                 len(inventory.indefinite)))
    return Thickening(complex_, region, inventory, box,
                      1 + len(region.interiors))


def _resolution(cfg, box):
    """Enough pixels for eight across the thinnest part of the region"""
    width = float(max(box.x1 - box.x0, box.y1 - box.y0))
    wanted = int(math.ceil(8 * width / (2 * float(cfg.delta))))
    return min(max(cfg.resolution, wanted), MAX_RESOLUTION)


def piecewise_graph(thickening, cfg, basepoint):
    """Raster Poincare-Reeb graph of the piecewise region M_D"""
    box = thickening.box
    n = _resolution(cfg, box)
    xs, ys = grid_centers(box, n)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    mask = shapely.contains_xy(thickening.polygon, gx, gy)
    return raster_graph(mask, box, seed_pixel(box, n, basepoint),
                        source="piecewise")


def signed_field(thickening, cfg, grid):
    """
    Samples delta**2 - d**2 on a grid over the box, d the distance to the
    complex, so the field is positive exactly on the thickened region.
    Each sample carries the row weight 1 / (delta**2 + d**2): the weighted
    values lie in (-1, 1] and the fit error is relative to the field.
    :return: (list of ((x, y), value) with rational x, y, list of weights)
    """
    box = thickening.box
    delta2 = float(cfg.delta) ** 2
    xs = [box.x0 + (i + Fraction(1, 2)) * (box.x1 - box.x0) / grid
          for i in range(grid)]
    ys = [box.y0 + (j + Fraction(1, 2)) * (box.y1 - box.y0) / grid
          for j in range(grid)]
    gx, gy = np.meshgrid([float(x) for x in xs], [float(y) for y in ys],
                         indexing="ij")
    dist = shapely.distance(thickening.complex.geometry(),
                            shapely.points(gx, gy))
    values = delta2 - dist ** 2
    weights = 1.0 / (delta2 + dist ** 2)
    samples = [((xs[i], ys[j]), float(values[i, j]))
               for i in range(grid) for j in range(grid)]
    return samples, [float(weights[i, j])
                     for i in range(grid) for j in range(grid)]


class FoldMatch(object):
    def __init__(self, expected, found):
        self.expected = expected
        self.found = found

    def to_json(self):
        return {"expected": self.expected.to_json(),
                "found": self.found.to_json()}


def _approx(point, width=PIN_WIDTH):
    """Rational midpoint of a refined RootPair"""
    p = point.refine(width)
    return (Util.midpoint(p.x.lo, p.x.hi), Util.midpoint(p.y.lo, p.y.hi))


def match_folds(fset, inventory, cfg):
    """
    Pairs every expected fold with a fold of the fitted curve of the same
    kind inside the window |dx| <= eps1/2, |dy| <= eps2/2; a definite fold
    must also lie beyond its vertex on the extremum side.
    :return: (list of FoldMatch, failure message or None)
    """
    if fset.crossings:
        return [], "the fitted curve crosses itself"
    found = list(fset.folds)
    if len(found) != len(inventory.all()):
        return [], "%d folds found, %d expected" % (len(found),
                                                   len(inventory.all()))
    matches = []
    for expected in inventory.all():
        ex, ey = expected.point
        hits = []
        for fold in found:
            x, y = _approx(fold.point)
            if fold.kind != expected.kind:
                continue
            if abs(x - ex) > cfg.eps1 / 2 or abs(y - ey) > cfg.eps2 / 2:
                continue
            if expected.kind == Fold.DEFINITE:
                if expected.extremum == "max" and not x > expected.p:
                    continue
                if expected.extremum == "min" and not x < expected.p:
                    continue
            hits.append(fold)
        if len(hits) != 1:
            return [], "expected %s fold near (%.6g, %.6g) matched %d " \
                       "fitted folds" % (expected.kind, float(ex), float(ey),
                                         len(hits))
        found.remove(hits[0])
        matches.append(FoldMatch(expected, hits[0]))
    return matches, None


class Certificate(object):
    def __init__(self, degree, fit, poly, matches, pr_graph, pins,
                 attempts):
        self.degree = degree
        self.fit = fit
        self.poly = poly
        self.matches = matches
        self.pr_graph = pr_graph
        self.pins = pins
        self.attempts = attempts

    def pin_for(self, vertex):
        return self.pins.get(vertex)

    def to_json(self):
        return {"degree": self.degree, "residual": self.fit.residual,
                "rank": self.fit.rank, "poly": self.poly.to_json(),
                "folds": [m.to_json() for m in self.matches],
                "pins": {v: _pt(q) for v, q in sorted(self.pins.items())},
                "pr_graph": self.pr_graph.to_json(),
                "attempts": self.attempts}


def _single_curve_spec(poly, thickening):
    basepoint = thickening.complex.interior_point()
    return RefinedDomainSpec([CurveSpec("outer", poly)], basepoint,
                             thickening.box)


def _check(poly, thickening, reference, cfg, settings):
    """
    Exact checks of one candidate outer polynomial.
    :return: (failure message or None, matches, PR graph)
    """
    spec = _single_curve_spec(poly, thickening)
    if poly.eval(spec.basepoint) <= 0:
        return "negative on the complex", None, None
    report = validate_domain(spec, settings)
    if not report.ok:
        return "domain: " + ", ".join(sorted(set(report.tags()))), \
            None, None
    fset = compute_f_set(spec, settings, report.analysis)
    matches, failure = match_folds(fset, thickening.inventory, cfg)
    if failure:
        return "folds: " + failure, None, None
    graph = build_poincare_reeb(spec, settings, report.analysis)
    same, _ = is_weakly_isomorphic(graph, reference, respect_values=False)
    if not same:
        return "PR graph differs from the piecewise region", None, None
    return None, matches, graph


def _pins(poly, matches, cfg, box):
    """
    Rational points (p, y) next to every definite fold on the upper branch
    of the fitted curve at the vertex x-value p.
    """
    pins = {}
    for m in matches:
        if m.expected.kind != Fold.DEFINITE:
            continue
        p = m.expected.p
        _, yd = _approx(m.found.point)
        window = Interval(yd, min(yd + cfg.eps2, box.y1))
        roots = poly.restrict_x(p).isolate(window)
        if not roots:
            return None
        root = roots[0].refine(PIN_WIDTH)
        pins[m.expected.vertex] = (p, Util.midpoint(root.lo, root.hi))
    return pins


def algebraize(thickening, cfg, settings=None, reference=None, pin=True):
    """
    Fits the outer polynomial degree by degree until the exact rounded
    fit is non-singular with a bounded component around the complex, has
    exactly the inventory folds, and has the same PR graph structure as
    the piecewise region. With pin=True the fit is then corrected to pass
    exactly through a rational point at x = p near every definite fold
    and certified again.
    :param reference: PR graph of the piecewise region, computed when None
    :return: Certificate
    :raises RealizationError (stage "algebraize") when the schedule is
    exhausted; diagnostics list the failing check per degree
    """
    settings = settings or {}
    if reference is None:
        reference = piecewise_graph(
            thickening, cfg, thickening.complex.interior_point())
    samples, weights = signed_field(thickening, cfg,
                                    settings.get("fit_grid", 96))
    attempts = []
    for degree in cfg.fit_degree_schedule:
        with Util.stage_timer("algebraization at degree %d" % degree):
            try:
                fit = fit_polynomial(
                    samples, degree,
                    settings.get("fit_regularization", 1e-9),
                    settings.get("fit_denominator_bound", 10 ** 6),
                    weights)
            except FitError as e:
                attempts.append({"degree": degree, "failed": str(e)})
                continue
            poly = fit.poly
            failure, matches, graph = _check(poly, thickening, reference,
                                             cfg, settings)
            pins = {}
            if failure is None and pin:
                pins = _pins(poly, matches, cfg, thickening.box)
                if pins is None:
                    failure = "pins: no root of the fit above a fold"
                elif pins:
                    poly = poly - interpolation_correction(
                        poly, list(pins.values()))
                    failure, matches, graph = _check(
                        poly, thickening, reference, cfg, settings)
                    if failure:
                        failure = "after pinning: " + failure
        if failure is None:
            attempts.append({"degree": degree, "certified": True})
            log.info("Outer curve certified at degree %d" % degree)
            return Certificate(degree, fit, poly, matches, graph, pins,
                               attempts)
        log.info("Degree %d not certified: %s" % (degree, failure))
        attempts.append({"degree": degree, "failed": failure})
    raise RealizationError("algebraize", "No degree of the schedule %s "
                           "certifies" % cfg.fit_degree_schedule,
                           {"attempts": attempts})


class Excision(object):
    """A conic removed around one fold of the outer curve"""
    def __init__(self, conic_spec, fold, pin, crossings):
        self.conic = conic_spec
        self.fold = fold
        self.pin = pin
        self.crossings = crossings

    @property
    def poly(self):
        return conic(self.conic)

    def to_json(self):
        return {"conic": self.conic.to_json(),
                "fold": self.fold.to_json(), "pin": _pt(self.pin),
                "crossings": [c.to_json() for c in self.crossings]}


def _sign_at(poly, point, depth):
    """Sign of poly at a RootPair, by interval evaluation"""
    for level in range(depth):
        p = point.refine(Fraction(1, 2 ** (level + 8)))
        value = poly.interval_eval(p.x.interval, p.y.interval)
        if value.lo > 0:
            return 1
        if value.hi < 0:
            return -1
    return 0


def _meets_outer(outer, c, box, settings):
    return solve_system(outer, c, box, settings.get("solve_depth", 80),
                        jobs=1)


def _try_circle(outer, match, pin, k, box, settings):
    depth = settings.get("refine_depth", 60)
    xd, yd = _approx(match.found.point)
    p, yu = pin
    w = abs(xd - p)
    center = (xd, yd - k * w)
    r = (p - center[0]) ** 2 + (yu - center[1]) ** 2
    spec = ConicSpec(center, 1, 1, r, ConicSpec.EXTERIOR)
    c = conic(spec)
    found = _meets_outer(outer, c, box, settings)
    if len(found) != 2 or not all(q.transverse for q in found):
        return None, "circle meets the outer curve in %d points" % len(found)
    pinned = RootPair(IsolatedRoot.from_rational(p),
                      IsolatedRoot.from_rational(yu))
    at_pin = [q for q in found if q.same_point(pinned)]
    if len(at_pin) != 1:
        return None, "circle misses the pinned point"
    other = [q for q in found if q is not at_pin[0]][0]
    beyond = 1 if match.expected.extremum == "max" else -1
    if beyond * other.x.compare(IsolatedRoot.from_rational(p)) >= 0:
        return None, "second crossing is not on the vertex side"
    if _sign_at(c, match.found.point, depth) >= 0:
        return None, "fold is not inside the circle"
    for fold in solve_system(c, c.derive("y"), box,
                             settings.get("solve_depth", 80)):
        if _sign_at(outer, fold, depth) >= 0:
            return None, "circle has a vertical tangent inside the region"
    return Excision(spec, match.expected, pin, found), None


def _try_ellipse(outer, match, scale, box, settings):
    depth = settings.get("refine_depth", 60)
    xi, yi = _approx(match.found.point)
    p = match.expected.p
    a = abs(p - xi)
    b = match.expected.half_gap * scale
    if a == 0 or b <= 0:
        return None, "degenerate ellipse"
    r = a * a
    spec = ConicSpec((xi, yi), 1, r / (b * b), r, ConicSpec.EXTERIOR)
    c = conic(spec)
    found = _meets_outer(outer, c, box, settings)
    if len(found) != 2 or not all(q.transverse for q in found):
        return None, "ellipse meets the outer curve in %d points" % len(found)
    if outer.eval((p, yi)) <= 0:
        return None, "pinned branch point is outside the region"
    if outer.eval((2 * xi - p, yi)) >= 0:
        return None, "far end of the ellipse is inside the region"
    if _sign_at(c, match.found.point, depth) >= 0:
        return None, "fold is not inside the ellipse"
    return Excision(spec, match.expected, (p, yi), found), None


def _place_one(outer, match, certificate, cfg, box, settings):
    tried = []
    if match.expected.kind == Fold.DEFINITE:
        pin = certificate.pin_for(match.expected.vertex)
        for k in sorted(cfg.circle_offsets, reverse=True):
            excision, failure = _try_circle(outer, match, pin, k, box,
                                            settings)
            if excision is not None:
                return excision, tried
            tried.append({"offset": _f(k), "failed": failure})
    else:
        scale = cfg.radius_scale
        floor = cfg.radius_scale / 16
        while scale >= floor:
            excision, failure = _try_ellipse(outer, match, scale, box,
                                             settings)
            if excision is not None:
                return excision, tried
            tried.append({"scale": _f(scale), "failed": failure})
            scale /= 2
    return None, tried


def place_excisions(certificate, cfg, box, settings=None):
    """
    One exterior-positive conic per fold of the certified outer curve: an
    ellipse around every indefinite fold whose right (or left) end is the
    branch point (p, y), and a circle around every definite fold through
    the pinned point (p, y) meeting the outer curve exactly twice.
    :return: list of Excision
    :raises RealizationError (stage "excise") when a conic cannot be
    placed or two conics meet
    """
    settings = settings or {}
    outer = certificate.poly
    with Util.stage_timer("excision placement"):
        placed = Util.pool_map(
            lambda m: _place_one(outer, m, certificate, cfg, box, settings),
            certificate.matches, settings.get("jobs", 1))
        excisions = []
        for match, (excision, tried) in zip(certificate.matches, placed):
            if excision is None:
                raise RealizationError(
                    "excise", "No conic fits the %s fold near vertex %s"
                    % (match.expected.kind, match.expected.vertex),
                    {"fold": match.expected.to_json(), "tried": tried})
            excisions.append(excision)
        for i, a in enumerate(excisions):
            for b in excisions[i + 1:]:
                if solve_system(a.poly, b.poly, box) or \
                        a.poly.eval(b.conic.center) <= 0 or \
                        b.poly.eval(a.conic.center) <= 0:
                    raise RealizationError(
                        "excise", "Conics around vertices %s and %s meet"
                        % (a.fold.vertex, b.fold.vertex),
                        {"conics": [a.conic.to_json(), b.conic.to_json()]})
    return excisions


class RealizationArtifacts(object):
    def __init__(self):
        self.segments = []
        self.rewired = OrderedDict()
        self.complex = None
        self.thickening = None
        self.certificate = None
        self.excisions = []
        self.report = OrderedDict()

    def to_json(self):
        doc = OrderedDict()
        doc["segments"] = [s.to_json() for s in self.segments]
        doc["rewired"] = [h.to_json() for h in self.rewired.values()]
        if self.complex is not None:
            doc["complex"] = self.complex.to_json()
        if self.thickening is not None:
            doc["boundary"] = self.thickening.to_json()
        if self.certificate is not None:
            doc["algebraization"] = self.certificate.to_json()
        doc["excisions"] = [e.to_json() for e in self.excisions]
        doc["report"] = self.report
        return doc


class Realization(object):
    def __init__(self, spec, artifacts, mode):
        self.spec = spec
        self.artifacts = artifacts
        self.mode = mode

    @property
    def algebraic(self):
        return self.mode == ALGEBRAIC

    def to_json(self):
        return {"format": FORMAT_TAG, "mode": self.mode,
                "algebraic": self.algebraic,
                "domain": self.spec.to_json() if self.spec else None,
                "artifacts": self.artifacts.to_json()}


def _cycle_rank(g):
    return len(g.edges) - len(g.vertices) + 1


def _basepoint(complex_, curves):
    """A point of a middle piece where every curve is positive"""
    middles = sorted([p for p in complex_.pieces if p.kind == MIDDLE],
                     key=lambda p: -abs(p.points[-1][0] - p.points[0][0]))
    for piece in middles:
        for t in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)):
            x = piece.points[0][0] + t * (piece.points[-1][0] -
                                          piece.points[0][0])
            q = (x, _y_at(piece.points, x))
            if all(c.f.eval(q) > 0 for c in curves):
                return q
    raise RealizationError("verify", "No basepoint on the complex is "
                           "inside every curve")


def realize(g, cfg=None, settings=None, mode=ALGEBRAIC):
    """
    Runs the whole construction for an embedded graph.
    :param mode: ALGEBRAIC, or PIECEWISE to stop after thickening and
    compare the raster PR graph of the piecewise region instead
    :return: Realization; its spec is None in piecewise mode
    :raises RealizationError tagged with the failing stage; a failed
    final check carries both graphs
    """
    settings = settings or {}
    jobs = settings.get("jobs", 1)
    hypotheses = validate_theorem_hypotheses(g)
    if not hypotheses.ok:
        raise RealizationError("hypotheses", "The graph does not satisfy "
                               "the hypotheses", hypotheses.to_json())
    target = VDigraph.from_embedded(g)
    cfg = cfg or RealizationConfig.defaults_for(g, settings)
    cfg.check(g)
    art = RealizationArtifacts()
    art.report["config"] = cfg.to_json()
    art.segments = vertical_segments(g, cfg)
    art.rewired = rewire_neighborhoods(g, art.segments, cfg, jobs)
    art.complex = build_G_eps(g, art.segments, art.rewired, cfg)
    art.report["ledger"] = art.complex.ledger()
    art.thickening = thicken(art.complex, art.rewired, cfg, _cycle_rank(g))
    art.report["boundary_components"] = art.thickening.components
    reference = piecewise_graph(art.thickening, cfg,
                                art.complex.interior_point())
    if mode == PIECEWISE:
        same, witness = is_weakly_isomorphic(target, reference,
                                             respect_values=False)
        art.report["piecewise_graph"] = reference.to_json()
        art.report["verified"] = same
        art.report["witness"] = witness
        if not same:
            raise RealizationError(
                "verify", "Piecewise region does not realize the graph",
                {"input": target.to_json(), "found": reference.to_json()})
        return Realization(None, art, PIECEWISE)
    art.certificate = algebraize(art.thickening, cfg, settings, reference)
    box = art.thickening.box
    art.excisions = place_excisions(art.certificate, cfg, box, settings)
    curves = [CurveSpec("outer", art.certificate.poly)] + \
        [CurveSpec("c%d" % i, e.poly) for i, e in enumerate(art.excisions)]
    spec = RefinedDomainSpec(curves, _basepoint(art.complex, curves), box)
    with Util.stage_timer("final verification"):
        report = validate_domain(spec, settings)
        art.report["validation"] = report.to_json()
        if not report.ok:
            raise RealizationError("verify", "The assembled domain is not "
                                   "valid", report.to_json())
        graph = build_poincare_reeb(spec, settings, report.analysis)
        same, witness = is_weakly_isomorphic(target, graph)
    art.report["pr_graph"] = graph.to_json()
    art.report["verified"] = same
    art.report["witness"] = witness
    if not same:
        raise RealizationError(
            "verify", "The PR graph of the domain is not weakly isomorphic "
            "to the input", {"input": target.to_json(),
                             "found": graph.to_json()})
    return Realization(spec, art, ALGEBRAIC)
