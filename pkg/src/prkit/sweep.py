"""
Poincare-Reeb V-digraph of a validated refined algebraic domain, from the
certified arrangement sweep, and an independent raster oracle.
"""
import logging

from fractions import Fraction
from functools import cmp_to_key

import numpy as np
from scipy import ndimage

from prkit.arrangement import RefinementError, RootOps, SweepError, \
    BOTTOM, TOP
from prkit.domain import DomainAnalysis, WITNESS_WIDTH, compute_f_set
from prkit.polyalg import RealValue
from prkit.util import PrkitError, Util
from prkit.vdigraph import VDigraph

log = logging.getLogger(__name__)

__all__ = ["SliceInterval", "SliceProfile", "PRGraph", "OracleError",
           "SweepError", "RefinementError", "critical_x_values", "slice",
           "build_poincare_reeb", "raster_oracle", "raster_graph"]


class OracleError(PrkitError):
    pass


class SliceInterval(object):
    """
    A connected component of a closure fiber: [lo, hi] with algebraic or
    rational endpoints, the curves realizing each endpoint, and whether it
    belongs to the selected component.
    """
    def __init__(self, lo, hi, lo_curves, hi_curves, member):
        self.lo = lo
        self.hi = hi
        self.lo_curves = sorted(lo_curves)
        self.hi_curves = sorted(hi_curves)
        self.member = member

    @property
    def is_point(self):
        return RealValue.compare(self.lo, self.hi) == 0

    def approx(self):
        return float(self.lo), float(self.hi)

    def to_json(self):
        return {"lo": RealValue.to_json(self.lo),
                "hi": RealValue.to_json(self.hi),
                "lo_curves": self.lo_curves, "hi_curves": self.hi_curves,
                "member": self.member}

    def __repr__(self):
        return "SliceInterval([%.6g, %.6g]%s)" % (
            float(self.lo), float(self.hi), " member" if self.member else "")


class SliceProfile(object):
    def __init__(self, t, intervals, critical=False):
        self.t = t
        self.intervals = sorted(intervals, key=cmp_to_key(
            lambda a, b: RealValue.compare(a.lo, b.lo)))
        self.critical = critical

    def members(self):
        return [iv for iv in self.intervals if iv.member]

    def to_json(self):
        return {"t": Util.format_fraction(self.t),
                "critical": self.critical,
                "intervals": [iv.to_json() for iv in self.intervals]}


class PRGraph(VDigraph):
    """
    A V-digraph produced from a domain. Vertices carry the events of their
    fiber class as provenance; edges carry the cells they run through.
    """
    def __init__(self, source="sweep"):
        super(PRGraph, self).__init__()
        self.source = source
        self.heights = {}

    def to_json(self):
        doc = super(PRGraph, self).to_json()
        doc["source"] = self.source
        return doc


def _analysis(spec, settings, analysis):
    analysis = analysis or DomainAnalysis(spec, settings).run()
    if not analysis.component.bounded:
        raise SweepError(spec.basepoint,
                         "Component is not bounded inside the box")
    return analysis


def critical_x_values(spec, settings=None, analysis=None):
    """
    :return: ascending distinct x-coordinates of the structural points, as
    IsolatedRoots
    """
    analysis = _analysis(spec, settings, analysis)
    xs = [p.x for p in compute_f_set(spec, settings, analysis).points()]
    xs = sorted(xs, key=cmp_to_key(lambda a, b: a.compare(b)))
    out = []
    for x in xs:
        if not out or out[-1].compare(x) != 0:
            out.append(x)
    return out


def _merge_runs(gaps, member_of):
    """Joins consecutive positive gaps sharing a root into intervals"""
    runs = []
    for gap in gaps:
        if not gap.positive:
            continue
        member = member_of(gap.index)
        if runs and runs[-1][-1].index == gap.index - 1 and \
                member_of(runs[-1][-1].index) == member:
            runs[-1].append(gap)
        else:
            runs.append([gap])
    return runs


def _slab_slice(arr, component, slab, t):
    box = arr.box
    fiber = arr.fiber(t)
    if fiber.signature()[0] != arr.slab_fibers[slab].signature()[0]:
        raise SweepError(t, "Fiber at %s disagrees with slab %d" % (t, slab))
    intervals = []
    for run in _merge_runs(fiber.gaps,
                           lambda g: (slab, g) in component.cells):
        first, last = run[0], run[-1]
        lo = first.lower if first.lower is not None else box.y0
        hi = last.upper if last.upper is not None else box.y1
        intervals.append(SliceInterval(
            lo, hi,
            [first.lower_tag] if first.lower_tag != BOTTOM else [],
            [last.upper_tag] if last.upper_tag != TOP else [],
            (slab, first.index) in component.cells))
    return SliceProfile(t, intervals)


def _critical_points(arr, t):
    """Distinct curve roots on the line x = t strictly inside the box"""
    box = arr.box
    found = []
    for cid, f in arr.curves:
        q = f.restrict_x(t)
        for root in q.isolate(box.y_interval, arr.method):
            if root.is_exact and root.lo in (box.y0, box.y1):
                continue
            found.append((root, cid))
    found = RootOps.sorted(found, key=lambda item: item[0])
    points = []
    for root, cid in found:
        if points and points[-1][0].compare(root) == 0:
            points[-1][1].add(cid)
        else:
            points.append((root, {cid}))
    return points


def _section_slice(arr, component, k, t):
    section = arr.sections[k]
    box = arr.box
    points = _critical_points(arr, t)
    if len(points) != section.top - 1:
        raise SweepError(t, "Found %d points on the critical line, the "
                            "sweep placed %d" % (len(points),
                                                 section.top - 1))

    def at(pos):
        if pos == 0:
            return box.y0, []
        if pos == section.top:
            return box.y1, []
        return points[pos - 1][0], points[pos - 1][1]

    intervals = []
    left_all = [g.index for g in arr.slab_fibers[k].gaps if g.positive]
    right_all = [g.index for g in arr.slab_fibers[k + 1].gaps if g.positive]
    others = arr.closure_classes(
        section,
        [g for g in left_all if (k, g) not in component.cells],
        [g for g in right_all if (k + 1, g) not in component.cells])
    for classes, member in ((component.classes[k], True), (others, False)):
        for cls in classes:
            lo, lo_curves = at(cls.span[0])
            hi, hi_curves = at(cls.span[1])
            intervals.append(SliceInterval(lo, hi, lo_curves, hi_curves,
                                           member))
    return SliceProfile(t, intervals, critical=True)


def slice(spec, t, settings=None, analysis=None):
    """
    Fiber of the closure of the positive region at x = t, split into
    connected intervals; members belong to the basepoint component.
    :param t: rational, inside [x0, x1]
    :raises SweepError when t lies outside the box
    """
    t = Util.to_fraction(t)
    box = spec.box
    if not box.x0 <= t <= box.x1:
        raise SweepError(t, "x = %s lies outside the box" % t)
    analysis = analysis or DomainAnalysis(spec, settings).run()
    arr, component = analysis.arrangement, analysis.component
    slab, section = arr.slab_of(t)
    if section is None:
        return _slab_slice(arr, component, slab, t)
    return _section_slice(arr, component, section, t)


def _class_provenance(cls):
    return {"section": cls.section.index,
            "events": [e.to_json() for e in cls.events]}


def build_poincare_reeb(spec, settings=None, analysis=None):
    """
    Quotient of the closure of the component by connected fiber
    components. Vertices are the fiber classes holding structural points;
    every other class joins exactly one cell on each side and is
    contracted into the edge through it.
    :return: PRGraph with vertex ids in (V, height) order
    :raises SweepError if a class without structural points branches
    """
    settings = settings or {}
    with Util.stage_timer("sweep"):
        analysis = _analysis(spec, settings, analysis)
        arr, component = analysis.arrangement, analysis.component
        left_class, right_class = {}, {}
        vertices = {}
        graph = PRGraph()
        for k, classes in enumerate(component.classes):
            for j, cls in enumerate(classes):
                for g in cls.left_cells:
                    right_class[(k, g)] = (k, j)
                for g in cls.right_cells:
                    left_class[(k + 1, g)] = (k, j)
                if cls.is_structural:
                    vid = "v%d" % len(vertices)
                    vertices[(k, j)] = vid
                    x = cls.x.refine(WITNESS_WIDTH)
                    graph.add_vertex(vid, x, _class_provenance(cls))
                    lo, hi = cls.y_span_approx()
                    graph.heights[vid] = (lo + hi) / 2
                elif len(cls.left_cells) != 1 or len(cls.right_cells) != 1:
                    raise SweepError(
                        (k, cls.span), "Fiber class near x = %.6g branches "
                        "without a structural point" % float(cls.x))
        for cell in sorted(component.cells):
            if cell not in left_class or cell not in right_class:
                raise SweepError(cell, "Cell %s reaches the box edge"
                                 % (cell,))
        for key in sorted(vertices):
            k, j = key
            for g in component.classes[k][j].right_cells:
                chain = [(k + 1, g)]
                end = right_class[chain[-1]]
                while end not in vertices:
                    cls = component.classes[end[0]][end[1]]
                    chain.append((end[0] + 1, cls.right_cells[0]))
                    end = right_class[chain[-1]]
                graph.add_edge(vertices[key], vertices[end],
                               provenance=[{"slab": s, "gap": c}
                                           for s, c in chain])
    log.info("Poincare-Reeb graph: %d vertices, %d edges"
             % (len(graph.values), len(graph.edges)))
    return graph


def _column_runs(column):
    """:return: (start, stop) row ranges of True runs, stop exclusive"""
    padded = np.concatenate(([False], column, [False])).astype(np.int8)
    steps = np.diff(padded)
    return list(zip(np.flatnonzero(steps == 1), np.flatnonzero(steps == -1)))


def grid_centers(box, resolution):
    """:return: float x and y coordinates of the pixel centers"""
    n = resolution
    xs = float(box.x0) + (np.arange(n) + 0.5) * float((box.x1 - box.x0) / n)
    ys = float(box.y0) + (np.arange(n) + 0.5) * float((box.y1 - box.y0) / n)
    return xs, ys


def raster_graph(mask, box, seed, source="raster"):
    """
    Approximate Poincare-Reeb graph of the 4-connected component of mask
    holding the seed pixel. Column runs are joined when they share a row
    in neighbouring columns; runs with one neighbour on each side are
    contracted.
    :param mask: boolean array indexed [column, row] over the box
    :param seed: (column, row) of a pixel in the wanted component
    :raises OracleError if the seed pixel is not set
    """
    n = mask.shape[0]
    dx = (box.x1 - box.x0) / n
    dy = (box.y1 - box.y0) / mask.shape[1]
    if not mask[seed]:
        raise OracleError(seed, "Basepoint pixel is outside the region")
    labels, count = ndimage.label(mask)
    region = labels == labels[seed]
    runs = [_column_runs(region[col]) for col in range(n)]
    right, left = {}, {}
    for col in range(n - 1):
        for a, (s0, e0) in enumerate(runs[col]):
            for b, (s1, e1) in enumerate(runs[col + 1]):
                if max(s0, s1) < min(e0, e1):
                    right.setdefault((col, a), []).append((col + 1, b))
                    left.setdefault((col + 1, b), []).append((col, a))
    nodes = [(col, a) for col in range(n) for a in range(len(runs[col]))]
    graph = PRGraph(source=source)
    vertices = {}
    for node in nodes:
        if len(left.get(node, [])) == 1 and len(right.get(node, [])) == 1:
            continue
        vid = "v%d" % len(vertices)
        vertices[node] = vid
        col, a = node
        s, e = runs[col][a]
        graph.add_vertex(vid, box.x0 + (col + Fraction(1, 2)) * dx,
                         {"column": col, "rows": [int(s), int(e)]})
        graph.heights[vid] = float(box.y0) + (s + e) / 2.0 * float(dy)
    for node in nodes:
        if node not in vertices:
            continue
        for nxt in right.get(node, []):
            start = nxt
            while nxt not in vertices:
                nxt = right[nxt][0]
            graph.add_edge(vertices[node], vertices[nxt], provenance=[
                {"columns": [start[0], nxt[0]]}])
    log.info("Raster graph (%d components in the raster): %d vertices, "
             "%d edges" % (count, len(graph.values), len(graph.edges)))
    return graph


def seed_pixel(box, resolution, point):
    n = resolution
    i = int((point[0] - box.x0) / ((box.x1 - box.x0) / n))
    j = int((point[1] - box.y0) / ((box.y1 - box.y0) / n))
    return min(max(i, 0), n - 1), min(max(j, 0), n - 1)


def raster_oracle(spec, resolution=512):
    """
    Approximate Poincare-Reeb graph of the domain from a resolution x
    resolution raster of the pixels where every curve is positive.
    :raises OracleError if resolution < 64 or the basepoint pixel is not
    inside the region
    """
    if resolution < 64:
        raise OracleError(resolution, "Oracle resolution must be >= 64")
    box = spec.box
    with Util.stage_timer("raster oracle"):
        xs, ys = grid_centers(box, resolution)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        mask = np.ones((resolution, resolution), dtype=bool)
        for c in spec.curves:
            mask &= c.f.eval_float(gx, gy) > 0
        return raster_graph(mask, box,
                            seed_pixel(box, resolution, spec.basepoint))
