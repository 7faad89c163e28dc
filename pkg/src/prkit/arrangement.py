"""
Certified vertical sweep over an arrangement of real algebraic curves in a
box. Events are folds (vertical tangents), pairwise intersections and hits of
the two horizontal box edges. Between consecutive event x-values every fiber
has the same combinatorics; at each event x-value the local picture is
certified by exact root counting inside shrinking windows.
"""
import logging

from functools import cmp_to_key

from networkx.utils import UnionFind

from prkit.polyalg import IsolatedRoot, RootPair, PositiveDimensionalError, \
    solve_system, STURM
from prkit.util import PrkitError, Util

log = logging.getLogger(__name__)

BOTTOM = "bottom"
TOP = "top"
EVENT = "event"
FREE = "free"

FOLD_PATTERNS = {(0, 2), (2, 0), (1, 1)}
CROSSING_PATTERNS = {(1, 1)}
WALL_PATTERNS = {(0, 0), (0, 1), (1, 0), (0, 2), (2, 0), (1, 1)}
IDLE_PATTERNS = {(0, 0)}


class RefinementError(PrkitError):
    pass


class SweepError(PrkitError):
    pass


class RootOps(object):
    """Exact helpers on lists of IsolatedRoot"""
    @staticmethod
    def side_of(root, q):
        """:return: -1, 0 or 1 as the root lies below, at or above q"""
        while True:
            if root.hi < q:
                return -1
            if root.lo > q:
                return 1
            if root.is_exact or root.poly.sign_at(q) == 0:
                return 0
            root = root.bisect()

    @staticmethod
    def sorted(items, key=lambda r: r):
        return sorted(items, key=cmp_to_key(
            lambda a, b: key(a).compare(key(b))))

    @staticmethod
    def separate(roots):
        """
        Refines an ascending list of pairwise distinct roots until their
        intervals are pairwise disjoint.
        """
        roots = list(roots)
        for k in range(len(roots) - 1):
            a, b = roots[k], roots[k + 1]
            while a.hi >= b.lo:
                if a.is_exact and b.is_exact:
                    raise SweepError((a, b), "Roots expected to be distinct")
                a, b = a.bisect(), b.bisect()
            roots[k], roots[k + 1] = a, b
        return roots

    @staticmethod
    def strictly_inside(root, lo, hi):
        """Refines a root known to lie in the open (lo, hi)"""
        while root.lo <= lo or root.hi >= hi:
            if root.is_exact:
                raise SweepError(root, "Root on the boundary of (%s, %s)"
                                 % (lo, hi))
            root = root.bisect()
        return root


class Event(object):
    """A point of the arrangement where the fiber combinatorics may change"""
    def __init__(self, point):
        self.point = point
        self.curves = set()
        self.folds = set()
        self.crossings = {}
        self.walls = set()
        self.fold_kinds = {}

    @property
    def x(self):
        return self.point.x

    @property
    def y(self):
        return self.point.y

    def absorb(self, other):
        self.curves |= other.curves
        self.folds |= other.folds
        self.crossings.update(other.crossings)
        self.walls |= other.walls
        self.fold_kinds.update(other.fold_kinds)
        if other.point.x.width < self.point.x.width or \
                other.point.y.width < self.point.y.width:
            self.point = RootPair(other.point.x, other.point.y,
                                  self.point.transverse)

    def to_json(self):
        doc = {"point": self.point.to_json(),
               "curves": sorted(self.curves)}
        if self.folds:
            doc["folds"] = [{"curve": c, "kind": self.fold_kinds.get(c)}
                            for c in sorted(self.folds)]
        if self.crossings:
            doc["crossings"] = [{"curves": sorted(pair),
                                 "transverse": flag}
                                for pair, flag in sorted(
                                    self.crossings.items(),
                                    key=lambda kv: sorted(kv[0]))]
        return doc

    def __repr__(self):
        return "Event(%.6g, %.6g, curves=%s)" % (
            float(self.x), float(self.y), sorted(self.curves))


class Gap(object):
    """Open fiber interval between consecutive roots (or box edges)"""
    def __init__(self, index, lower, upper, lower_tag, upper_tag, sample,
                 positive):
        self.index = index
        self.lower = lower
        self.upper = upper
        self.lower_tag = lower_tag
        self.upper_tag = upper_tag
        self.sample = sample
        self.positive = positive

    @property
    def touches_wall(self):
        return self.lower_tag == BOTTOM or self.upper_tag == TOP


class Fiber(object):
    """All curve roots on a vertical line x = t inside the box"""
    def __init__(self, t, roots, tags, gaps):
        self.t = t
        self.roots = roots
        self.tags = tags
        self.gaps = gaps

    def signature(self):
        return tuple(self.tags), tuple(g.positive for g in self.gaps)

    def gap_containing(self, y):
        """:return: index of the gap containing rational y (not a root)"""
        for k, root in enumerate(self.roots):
            side = RootOps.side_of(root, y)
            if side == 0:
                raise SweepError(y, "Point lies on a curve at x = %s" % self.t)
            if side > 0:
                return k
        return len(self.roots)


class Slot(object):
    """A distinct point of the arrangement on a critical vertical line"""
    def __init__(self, kind, y_approx, event=None, curve=None):
        self.kind = kind
        self.y_approx = y_approx
        self.event = event
        self.curve = curve


class CriticalSection(object):
    """Certified local structure of the arrangement at one event x-value"""
    def __init__(self, index, x, events, t_left, t_right, left, right,
                 slots, left_pos, right_pos):
        self.index = index
        self.x = x
        self.events = events
        self.t_left = t_left
        self.t_right = t_right
        self.left = left
        self.right = right
        self.slots = slots
        self.left_pos = left_pos
        self.right_pos = right_pos

    @property
    def top(self):
        return len(self.slots) - 1

    def gap_range(self, side, g):
        """Positions of the limits of gap g on the critical line"""
        pos = self.left_pos if side == "left" else self.right_pos
        lo = 0 if g == 0 else pos[g - 1]
        hi = self.top if g == len(pos) else pos[g]
        return lo, hi

    def event_positions(self):
        return [(k, s.event) for k, s in enumerate(self.slots)
                if s.kind == EVENT]


class ClosureClass(object):
    """
    A connected component of the fiber of a closure on a critical line,
    described by the cells on either side whose limits form it.
    """
    def __init__(self, section, left_cells, right_cells, span):
        self.section = section
        self.left_cells = sorted(left_cells)
        self.right_cells = sorted(right_cells)
        self.span = span
        self.events = [e for k, e in section.event_positions()
                       if span[0] <= k <= span[1]]

    @property
    def x(self):
        return self.section.x

    @property
    def is_structural(self):
        return bool(self.events)

    def touches_wall(self):
        return self.span[0] == 0 or self.span[1] == self.section.top

    def y_span_approx(self):
        slots = self.section.slots
        return slots[self.span[0]].y_approx, slots[self.span[1]].y_approx


class Arrangement(object):
    """
    Events, critical sections and slab fibers of a list of curves in a box.
    :param curves: list of (curve id, BivariatePolynomial)
    :param box: polyalg.Box
    :param settings: prkit.default_param.Settings or a plain dict
    """
    def __init__(self, curves, box, settings=None):
        settings = settings or {}
        self.curves = list(curves)
        self.box = box
        self.refine_depth = settings.get("refine_depth", 60)
        self.solve_depth = settings.get("solve_depth", 80)
        self.method = settings.get("isolation_method", STURM)
        self.jobs = settings.get("jobs", 1)
        self._fibers = {}
        self.events = None
        self.sections = None
        self.slab_fibers = None

    def build(self):
        with Util.stage_timer("arrangement sweep over %d curves" %
                              len(self.curves)):
            self.events = self._collect_events()
            groups = self._group_by_x(self.events)
            xs = self._separate_criticals([g[0].x for g in groups])
            self.sections = Util.pool_map(
                lambda k: self._certify(k, xs, groups[k]),
                range(len(groups)), self.jobs)
            self.slab_fibers = self._slab_fibers()
        log.debug("Arrangement: %d events, %d critical x-values" %
                  (len(self.events), len(self.sections)))
        return self

    # Events

    def _fold_events(self, curve):
        cid, f = curve
        points = solve_system(f, f.derive("y"), self.box, self.solve_depth,
                              self.method)
        events = []
        for p in points:
            e = Event(p)
            e.curves.add(cid)
            e.folds.add(cid)
            e.fold_kinds[cid] = self.fold_kind(f, p)
            events.append(e)
        return events

    def _wall_events(self, curve):
        cid, f = curve
        events = []
        for side, wall_y in ((BOTTOM, self.box.y0), (TOP, self.box.y1)):
            q = f.restrict_y(wall_y)
            if q.is_zero:
                raise PositiveDimensionalError(
                    cid, "Curve %s contains the box edge y = %s"
                    % (cid, wall_y))
            for root in q.isolate(self.box.x_interval, self.method):
                e = Event(RootPair(root, IsolatedRoot.from_rational(wall_y)))
                e.curves.add(cid)
                e.walls.add(side)
                events.append(e)
        return events

    def _crossing_events(self, pair):
        (ci, fi), (cj, fj) = pair
        events = []
        for p in solve_system(fi, fj, self.box, self.solve_depth,
                              self.method):
            e = Event(p)
            e.curves |= {ci, cj}
            e.crossings[frozenset((ci, cj))] = p.transverse
            events.append(e)
        return events

    def fold_kind(self, f, point):
        """
        Classifies a fold of the region f > 0 by the sign of f_yy:
        negative is definite, positive indefinite.
        """
        fyy = f.derive("y").derive("y")
        p = point
        for _ in range(self.refine_depth):
            value = fyy.interval_eval(p.x.interval, p.y.interval)
            if value.lo > 0:
                return "indefinite"
            if value.hi < 0:
                return "definite"
            if p.x.is_exact and p.y.is_exact:
                break
            p = RootPair(p.x.bisect(), p.y.bisect(), p.transverse)
        return "unclassified"

    def _collect_events(self):
        tasks = [("fold", c) for c in self.curves] + \
                [("wall", c) for c in self.curves] + \
                [("cross", (a, b)) for k, a in enumerate(self.curves)
                 for b in self.curves[k + 1:]]
        handlers = {"fold": self._fold_events, "wall": self._wall_events,
                    "cross": self._crossing_events}
        found = Util.pool_map(lambda task: handlers[task[0]](task[1]),
                              tasks, self.jobs)
        raw = [e for events in found for e in events]
        x0 = IsolatedRoot.from_rational(self.box.x0)
        x1 = IsolatedRoot.from_rational(self.box.x1)
        raw = [e for e in raw
               if e.x.compare(x0) != 0 and e.x.compare(x1) != 0]
        ordered = sorted(raw, key=cmp_to_key(Arrangement._compare_events))
        merged = []
        for e in ordered:
            if merged and Arrangement._compare_events(merged[-1], e) == 0:
                merged[-1].absorb(e)
            else:
                merged.append(e)
        return merged

    @staticmethod
    def _compare_events(a, b):
        by_x = a.x.compare(b.x)
        return by_x if by_x != 0 else a.y.compare(b.y)

    @staticmethod
    def _group_by_x(events):
        groups = []
        for e in events:
            if groups and groups[-1][0].x.compare(e.x) == 0:
                groups[-1].append(e)
            else:
                groups.append([e])
        return groups

    def _separate_criticals(self, xs):
        xs = [RootOps.strictly_inside(x, self.box.x0, self.box.x1)
              for x in xs]
        return RootOps.separate(xs)

    # Fibers

    def fiber(self, t):
        """
        :param t: rational x-value that is not an event x-value
        :return: Fiber at x = t
        """
        t = Util.to_fraction(t)
        if t in self._fibers:
            return self._fibers[t]
        y0, y1 = self.box.y0, self.box.y1
        found = []
        for cid, f in self.curves:
            q = f.restrict_x(t)
            if q.is_zero:
                raise SweepError(t, "Curve %s contains the line x = %s"
                                 % (cid, t))
            for root in q.isolate(self.box.y_interval, self.method):
                if root.is_exact and root.lo in (y0, y1):
                    continue
                found.append((root, cid))
        found = RootOps.sorted(found, key=lambda item: item[0])
        roots = RootOps.separate([r for r, _ in found])
        roots = [RootOps.strictly_inside(r, y0, y1) for r in roots]
        tags = [cid for _, cid in found]
        bounds = [y0] + [b for r in roots for b in (r.lo, r.hi)] + [y1]
        gaps = []
        for g in range(len(roots) + 1):
            lo, hi = bounds[2 * g], bounds[2 * g + 1]
            sample = Util.dyadic_between(lo, hi)
            positive = all(f.eval((t, sample)) > 0 for _, f in self.curves)
            gaps.append(Gap(g,
                            roots[g - 1] if g > 0 else None,
                            roots[g] if g < len(roots) else None,
                            tags[g - 1] if g > 0 else BOTTOM,
                            tags[g] if g < len(roots) else TOP,
                            sample, positive))
        fiber = Fiber(t, roots, tags, gaps)
        self._fibers[t] = fiber
        return fiber

    def _slab_fibers(self):
        """One reference fiber per open slab between event x-values"""
        k = len(self.sections)
        if k == 0:
            return [self.fiber(Util.midpoint(self.box.x0, self.box.x1))]
        fibers = []
        for s in range(k + 1):
            left = self.sections[s - 1].right if s > 0 else None
            right = self.sections[s].left if s < k else None
            if left is not None and right is not None and \
                    left.signature() != right.signature():
                raise SweepError(s, "Fiber structure changes inside slab %d"
                                 % s)
            fibers.append(left if left is not None else right)
        return fibers

    def slab_of(self, t):
        """
        :return: (slab index, None) for t inside an open slab, or
        (None, section index) when t is an event x-value
        """
        for k, section in enumerate(self.sections):
            side = RootOps.side_of(section.x, t)
            if side == 0:
                return None, k
            if side > 0:
                return k, None
        return len(self.sections), None

    # Critical sections

    def _windows(self, events, ys, rho):
        box = self.box
        windows = []
        bottom = [e for e in events if BOTTOM in e.walls]
        top = [e for e in events if TOP in e.walls]
        interior = [e for e in events if not e.walls]
        if bottom:
            windows.append((box.y0, box.y0 + rho, BOTTOM, bottom))
        for e, y in zip(interior, ys):
            windows.append((y.lo - rho, y.hi + rho, EVENT, e))
        if top:
            windows.append((box.y1 - rho, box.y1, TOP, top))
        for a, b in zip(windows, windows[1:]):
            if a[1] >= b[0]:
                return None
        for lo, hi, kind, _ in windows:
            if kind == EVENT and (lo <= box.y0 or hi >= box.y1):
                return None
        return windows

    def _edges_clear(self, windows, t_left, t_right):
        edges = []
        for lo, hi, kind, _ in windows:
            if kind != BOTTOM:
                edges.append(lo)
            if kind != TOP:
                edges.append(hi)
        for w in edges:
            for _, f in self.curves:
                q = f.restrict_y(w)
                if q.is_zero:
                    return False
                if q.degree >= 1 and q.count_roots(t_left, t_right) > 0:
                    return False
        return True

    @staticmethod
    def _locate(fiber, windows):
        """:return: per root, ("window", k) or ("free", region)"""
        located = []
        for root in fiber.roots:
            where = None
            region = 0
            for k, (lo, hi, _, _) in enumerate(windows):
                if RootOps.side_of(root, hi) < 0:
                    if RootOps.side_of(root, lo) > 0:
                        where = ("window", k)
                    break
                region = k + 1
            located.append(where or (FREE, region))
        return located

    def _patterns_hold(self, windows, left, right, loc_left, loc_right):
        for k, (_, _, kind, payload) in enumerate(windows):
            for cid, _ in self.curves:
                count_l = sum(1 for tag, where in zip(left.tags, loc_left)
                              if tag == cid and where == ("window", k))
                count_r = sum(1 for tag, where in zip(right.tags, loc_right)
                              if tag == cid and where == ("window", k))
                if kind == EVENT:
                    if cid in payload.folds:
                        allowed = FOLD_PATTERNS
                    elif cid in payload.curves:
                        allowed = CROSSING_PATTERNS
                    else:
                        allowed = IDLE_PATTERNS
                else:
                    involved = set().union(*[e.curves for e in payload])
                    allowed = WALL_PATTERNS if cid in involved \
                        else IDLE_PATTERNS
                if (count_l, count_r) not in allowed:
                    return False
        return True

    @staticmethod
    def _free_sequences(fiber, located):
        regions = {}
        for tag, where in zip(fiber.tags, located):
            if where[0] == FREE:
                regions.setdefault(where[1], []).append(tag)
        return regions

    def _certify(self, index, xs, events):
        box = self.box
        c = xs[index]
        left_bound = xs[index - 1].hi if index > 0 else box.x0
        right_bound = xs[index + 1].lo if index + 1 < len(xs) else box.x1
        events = RootOps.sorted(events, key=lambda e: e.y)
        interior = [e for e in events if not e.walls]
        ys = RootOps.separate([e.y for e in interior])
        ys = [RootOps.strictly_inside(y, box.y0, box.y1) for y in ys]
        spans = [box.y1 - box.y0]
        bounds = [box.y0] + [b for y in ys for b in (y.lo, y.hi)] + [box.y1]
        spans += [bounds[2 * g + 1] - bounds[2 * g]
                  for g in range(len(ys) + 1)]
        rho0 = min(spans) / 4
        for level in range(self.refine_depth):
            rho = rho0 / 2 ** level
            ys = [y.refine(rho / 4) for y in ys]
            cap = min(c.lo - left_bound, right_bound - c.hi) / 3
            eta = min(cap, rho * rho / 2 ** level)
            c = c.refine(eta)
            t_left, t_right = c.lo - eta, c.hi + eta
            windows = self._windows(events, ys, rho)
            if windows is None:
                continue
            if not self._edges_clear(windows, t_left, t_right):
                log.debug("x = %.6g: window edges crossed at depth %d" %
                          (float(c), level))
                continue
            left, right = self.fiber(t_left), self.fiber(t_right)
            loc_left = Arrangement._locate(left, windows)
            loc_right = Arrangement._locate(right, windows)
            if not self._patterns_hold(windows, left, right,
                                       loc_left, loc_right):
                log.debug("x = %.6g: window patterns fail at depth %d" %
                          (float(c), level))
                continue
            free_l = Arrangement._free_sequences(left, loc_left)
            free_r = Arrangement._free_sequences(right, loc_right)
            if free_l != free_r:
                log.debug("x = %.6g: free arcs differ at depth %d" %
                          (float(c), level))
                continue
            return self._section(index, c, events, t_left, t_right, left,
                                 right, windows, loc_left, loc_right)
        raise RefinementError(
            float(c), "Could not certify the sweep at x ~ %.9g within %d "
            "refinements" % (float(c), self.refine_depth))

    def _section(self, index, c, events, t_left, t_right, left, right,
                 windows, loc_left, loc_right):
        box = self.box
        slots = [Slot(BOTTOM, float(box.y0))]
        window_slot = {}
        free_slot = {}
        regions = len(windows) + 1
        by_region_l = {}
        by_region_r = {}
        for k, where in enumerate(loc_left):
            if where[0] == FREE:
                by_region_l.setdefault(where[1], []).append(k)
        for k, where in enumerate(loc_right):
            if where[0] == FREE:
                by_region_r.setdefault(where[1], []).append(k)
        for region in range(regions):
            lefts = by_region_l.get(region, [])
            rights = by_region_r.get(region, [])
            for kl, kr in zip(lefts, rights):
                y = (float(left.roots[kl]) + float(right.roots[kr])) / 2
                free_slot[("left", kl)] = len(slots)
                free_slot[("right", kr)] = len(slots)
                slots.append(Slot(FREE, y, curve=left.tags[kl]))
            if region < len(windows):
                kind, payload = windows[region][2], windows[region][3]
                if kind == BOTTOM:
                    window_slot[region] = 0
                elif kind == TOP:
                    window_slot[region] = None
                else:
                    window_slot[region] = len(slots)
                    slots.append(Slot(EVENT, float(payload.y), event=payload))
        slots.append(Slot(TOP, float(box.y1)))
        top = len(slots) - 1

        def positions(side, located):
            out = []
            for k, where in enumerate(located):
                if where[0] == FREE:
                    out.append(free_slot[(side, k)])
                else:
                    pos = window_slot[where[1]]
                    out.append(top if pos is None else pos)
            return out

        return CriticalSection(index, c, events, t_left, t_right, left,
                               right, slots, positions("left", loc_left),
                               positions("right", loc_right))

    # Classes

    def closure_classes(self, section, left_cells, right_cells):
        """
        Groups cells adjacent to a critical line by intersecting limit
        ranges.
        :param left_cells: gap indices of the slab left of the section
        :param right_cells: gap indices of the slab right of the section
        :return: list of ClosureClass sorted by span
        """
        items = [("left", g, section.gap_range("left", g))
                 for g in left_cells] + \
                [("right", g, section.gap_range("right", g))
                 for g in right_cells]
        groups = UnionFind(range(len(items)))
        for a in range(len(items)):
            for b in range(a + 1, len(items)):
                ra, rb = items[a][2], items[b][2]
                if max(ra[0], rb[0]) <= min(ra[1], rb[1]):
                    groups.union(a, b)
        classes = []
        for members in groups.to_sets():
            members = [items[m] for m in members]
            span = (min(m[2][0] for m in members),
                    max(m[2][1] for m in members))
            classes.append(ClosureClass(
                section,
                [g for side, g, _ in members if side == "left"],
                [g for side, g, _ in members if side == "right"],
                span))
        classes.sort(key=lambda cls: cls.span)
        return classes


class Component(object):
    """
    The connected component of the open region where every curve is
    positive that contains a basepoint, analysed on an Arrangement.
    """
    def __init__(self, arrangement, basepoint):
        self.arrangement = arrangement
        self.basepoint = (Util.to_fraction(basepoint[0]),
                          Util.to_fraction(basepoint[1]))
        self.cells = None
        self.classes = None

    def analyse(self):
        arr = self.arrangement
        uf = UnionFind()
        for s, fiber in enumerate(arr.slab_fibers):
            for gap in fiber.gaps:
                if gap.positive:
                    uf[(s, gap.index)]
        for section in arr.sections:
            i = section.index
            lefts = [g.index for g in arr.slab_fibers[i].gaps if g.positive]
            rights = [g.index for g in arr.slab_fibers[i + 1].gaps
                      if g.positive]
            for gl in lefts:
                ra = section.gap_range("left", gl)
                for gr in rights:
                    rb = section.gap_range("right", gr)
                    if max(ra[0], rb[0]) < min(ra[1], rb[1]):
                        uf.union((i, gl), (i + 1, gr))
        seed = self.basepoint_cell()
        self.cells = next(set(c) for c in uf.to_sets() if seed in c) \
            if seed in uf.parents else {seed}
        self.classes = []
        for section in arr.sections:
            i = section.index
            lefts = [g for s, g in self.cells if s == i]
            rights = [g for s, g in self.cells if s == i + 1]
            self.classes.append(
                arr.closure_classes(section, lefts, rights))
        return self

    def basepoint_cell(self):
        """:return: (slab, gap) of the cell containing the basepoint"""
        arr = self.arrangement
        bx, by = self.basepoint
        slab, section = arr.slab_of(bx)
        if section is None:
            t = bx
        else:
            slab = section
            crit = arr.sections[section]
            floor = arr.sections[section - 1].x.hi if section > 0 \
                else arr.box.x0
            eta = (bx - floor) / 2
            for _ in range(arr.refine_depth):
                t = bx - eta
                if t > floor and all(
                        f.restrict_y(by).count_roots(t, bx) == 0
                        for _, f in arr.curves):
                    break
                eta /= 2
            else:
                raise RefinementError(
                    bx, "Could not reach the basepoint from an open slab")
        fiber = arr.fiber(t)
        if fiber.signature()[0] != arr.slab_fibers[slab].signature()[0]:
            raise SweepError(t, "Basepoint fiber disagrees with its slab")
        return slab, fiber.gap_containing(by)

    @property
    def slab_count(self):
        return len(self.arrangement.slab_fibers)

    def touch_witnesses(self):
        """
        :return: list of (x approx, y approx) where the component reaches
        the box boundary; empty when it is bounded inside the box
        """
        arr = self.arrangement
        found = []
        last = self.slab_count - 1
        for s, g in sorted(self.cells):
            fiber = arr.slab_fibers[s]
            gap = fiber.gaps[g]
            if s == 0:
                found.append((float(arr.box.x0), float(gap.sample)))
            elif s == last:
                found.append((float(arr.box.x1), float(gap.sample)))
            elif gap.touches_wall:
                y = arr.box.y0 if gap.lower_tag == BOTTOM else arr.box.y1
                found.append((float(fiber.t), float(y)))
        for classes in self.classes:
            for cls in classes:
                if cls.touches_wall():
                    y = cls.section.slots[0].y_approx if cls.span[0] == 0 \
                        else cls.section.slots[-1].y_approx
                    found.append((float(cls.x), y))
        return found

    @property
    def bounded(self):
        return not self.touch_witnesses()

    def curves_met(self):
        """Ids of curves whose zero set meets the closure"""
        arr = self.arrangement
        met = set()
        for s, g in self.cells:
            gap = arr.slab_fibers[s].gaps[g]
            met |= {gap.lower_tag, gap.upper_tag} - {BOTTOM, TOP}
        for event in self.closure_events():
            met |= event.curves
        return met

    def closure_events(self):
        """Events lying on the closure, in x then y order"""
        return [e for classes in self.classes for cls in classes
                for e in cls.events]
