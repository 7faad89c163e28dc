"""Exact orientation and segment predicates over rational points"""
import logging

from prkit.util import Util

log = logging.getLogger(__name__)


class Geometry(object):
    """
    Predicates on points given as pairs of Fractions. All answers are
    exact; no tolerance is involved.
    """
    @staticmethod
    def point(p):
        return Util.to_fraction(p[0]), Util.to_fraction(p[1])

    @staticmethod
    def orient(a, b, c):
        """
        :return: +1 if a, b, c turn counter-clockwise, -1 if clockwise,
        0 if collinear
        """
        det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return (det > 0) - (det < 0)

    @staticmethod
    def on_segment(p, a, b):
        """:return: True if p lies on the closed segment ab"""
        if Geometry.orient(a, b, p) != 0:
            return False
        return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and \
            min(a[1], b[1]) <= p[1] <= max(a[1], b[1])

    @staticmethod
    def segment_intersection(a, b, c, d):
        """
        Intersection of the closed segments ab and cd.
        :return: None when disjoint, ("point", p) for a single common
        point, ("overlap", (p, q)) for a collinear common piece p != q
        """
        o1 = Geometry.orient(a, b, c)
        o2 = Geometry.orient(a, b, d)
        o3 = Geometry.orient(c, d, a)
        o4 = Geometry.orient(c, d, b)
        if o1 == o2 == o3 == o4 == 0:
            return Geometry._collinear_overlap(a, b, c, d)
        if o1 * o2 > 0 or o3 * o4 > 0:
            return None
        # proper crossing or touching; solve a + s (b - a) = c + u (d - c)
        rx, ry = b[0] - a[0], b[1] - a[1]
        sx, sy = d[0] - c[0], d[1] - c[1]
        den = rx * sy - ry * sx
        s = ((c[0] - a[0]) * sy - (c[1] - a[1]) * sx) / den
        return "point", (a[0] + s * rx, a[1] + s * ry)

    @staticmethod
    def _collinear_overlap(a, b, c, d):
        # order along the dominant axis of the common line
        axis = 0 if a[0] != b[0] or c[0] != d[0] else 1
        p1, p2 = sorted([a, b], key=lambda p: (p[axis], p[1 - axis]))
        q1, q2 = sorted([c, d], key=lambda p: (p[axis], p[1 - axis]))
        lo = max(p1, q1, key=lambda p: (p[axis], p[1 - axis]))
        hi = min(p2, q2, key=lambda p: (p[axis], p[1 - axis]))
        if (lo[axis], lo[1 - axis]) > (hi[axis], hi[1 - axis]):
            return None
        if lo == hi:
            return "point", lo
        return "overlap", (lo, hi)

    @staticmethod
    def segments(polyline):
        return list(zip(polyline[:-1], polyline[1:]))

    @staticmethod
    def polyline_contains(polyline, p):
        return any(Geometry.on_segment(p, a, b)
                   for a, b in Geometry.segments(polyline))

    @staticmethod
    def polyline_meets(first, second, allowed=()):
        """
        :param allowed: points at which the two polylines may touch
        :return: a witness point of an intersection outside allowed, or
        None when the polylines meet only there
        """
        for a, b in Geometry.segments(first):
            for c, d in Geometry.segments(second):
                found = Geometry.segment_intersection(a, b, c, d)
                if found is None:
                    continue
                kind, where = found
                if kind == "overlap":
                    return where[0] if where[0] not in allowed else where[1]
                if where not in allowed:
                    return where
        return None

    @staticmethod
    def strictly_monotone_x(polyline):
        """:return: +1 or -1 for strictly increasing/decreasing x, else 0"""
        steps = [b[0] - a[0] for a, b in Geometry.segments(polyline)]
        if steps and all(s > 0 for s in steps):
            return 1
        if steps and all(s < 0 for s in steps):
            return -1
        return 0
