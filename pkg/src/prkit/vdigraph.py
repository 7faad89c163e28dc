"""
V-digraphs: finite directed multigraphs whose vertices carry real values
that strictly increase along every edge. Includes isomorphism, weak
isomorphism and the hypothesis checks for embedded input graphs.
"""
import logging

from collections import OrderedDict
from functools import cmp_to_key

import networkx as nx
from networkx.algorithms.isomorphism import MultiDiGraphMatcher

from prkit.geometry import Geometry
from prkit.polyalg import IsolatedRoot, RealValue, PolynomialParseError
from prkit.util import PrkitError, RationalParseError, Util, Violation, \
    ValidationReport, FORMAT_TAG

log = logging.getLogger(__name__)

# Report order of hypothesis violations
HYPOTHESIS_TAGS = ["bad_endpoint", "not_x_monotone", "edges_intersect",
                   "isolated_vertex", "disconnected", "degree_two",
                   "extremum_degree"]


class GraphSchemaError(PrkitError):
    """Malformed graph document; expression holds a JSON-pointer location"""
    @property
    def location(self):
        return self.expression


def value_to_json(value):
    """Vertex values serialize as a certified interval, plus defining data"""
    if isinstance(value, IsolatedRoot) and not value.is_exact:
        doc = value.to_json()
        doc.pop("multiplicity", None)
        return doc
    q = value.lo if isinstance(value, IsolatedRoot) else value
    text = Util.format_fraction(q)
    return {"lo": text, "hi": text}


def value_from_json(doc, location="/V"):
    try:
        if isinstance(doc, dict):
            if "poly" in doc:
                return IsolatedRoot.from_json(doc)
            lo, hi = Util.to_fraction(doc["lo"]), Util.to_fraction(doc["hi"])
            if lo != hi:
                raise GraphSchemaError(
                    location, "An interval value needs its defining poly")
            return lo
        return Util.to_fraction(doc)
    except (KeyError, TypeError, RationalParseError,
            PolynomialParseError) as e:
        raise GraphSchemaError(location, "Bad vertex value: " + str(e))


class VDigraph(object):
    """
    Vertices map id -> value (Fraction or IsolatedRoot). Edges map a
    distinct id -> (src, dst), so parallel edges are kept apart.
    """
    def __init__(self):
        self.values = OrderedDict()
        self.edges = OrderedDict()
        self.vertex_provenance = {}
        self.edge_provenance = {}

    @property
    def vertices(self):
        return list(self.values)

    def add_vertex(self, vid, value, provenance=None):
        if vid in self.values:
            raise GraphSchemaError("/vertices/" + str(vid),
                                   "Duplicate vertex id " + str(vid))
        self.values[vid] = value
        if provenance is not None:
            self.vertex_provenance[vid] = provenance
        return vid

    def add_edge(self, src, dst, eid=None, provenance=None):
        """
        :raises GraphSchemaError if an endpoint is unknown or the value
        does not strictly increase from src to dst
        """
        eid = eid if eid is not None else "e%d" % len(self.edges)
        where = "/edges/" + str(eid)
        if eid in self.edges:
            raise GraphSchemaError(where, "Duplicate edge id " + str(eid))
        for v in (src, dst):
            if v not in self.values:
                raise GraphSchemaError(where, "Unknown vertex " + str(v))
        if RealValue.compare(self.values[src], self.values[dst]) >= 0:
            raise GraphSchemaError(
                where, "Edge %s does not increase the value (%s -> %s)"
                % (eid, src, dst))
        self.edges[eid] = (src, dst)
        if provenance is not None:
            self.edge_provenance[eid] = provenance
        return eid

    def out_edges(self, v):
        return [e for e, (s, _) in self.edges.items() if s == v]

    def in_edges(self, v):
        return [e for e, (_, d) in self.edges.items() if d == v]

    def degree(self, v):
        return len(self.out_edges(v)) + len(self.in_edges(v))

    def value_ranks(self):
        """:return: vertex id -> dense rank of its value (ties share)"""
        order = sorted(self.values,
                       key=cmp_to_key(lambda a, b: RealValue.compare(
                           self.values[a], self.values[b])))
        ranks = {}
        rank = -1
        previous = None
        for v in order:
            if previous is None or RealValue.compare(
                    self.values[previous], self.values[v]) != 0:
                rank += 1
            ranks[v] = rank
            previous = v
        return ranks

    def to_networkx(self):
        g = nx.MultiDiGraph()
        for v, rank in self.value_ranks().items():
            g.add_node(v, rank=rank)
        for eid, (src, dst) in self.edges.items():
            g.add_edge(src, dst, key=eid)
        return g

    def copy(self):
        out = VDigraph()
        out.values = OrderedDict(self.values)
        out.edges = OrderedDict(self.edges)
        out.vertex_provenance = dict(self.vertex_provenance)
        out.edge_provenance = dict(self.edge_provenance)
        return out

    def check(self):
        """
        :raises GraphSchemaError for isolated vertices in a graph with
        more than one vertex
        """
        if len(self.values) < 2:
            return self
        for v in self.values:
            if self.degree(v) == 0:
                raise GraphSchemaError("/vertices/" + str(v),
                                       "Isolated vertex " + str(v))
        return self

    def to_json(self):
        vertices = []
        for v, value in self.values.items():
            doc = {"id": v, "V": value_to_json(value)}
            if v in self.vertex_provenance:
                doc["provenance"] = self.vertex_provenance[v]
            vertices.append(doc)
        edges = []
        for eid, (src, dst) in self.edges.items():
            doc = {"id": eid, "src": src, "dst": dst}
            if eid in self.edge_provenance:
                doc["provenance"] = self.edge_provenance[eid]
            edges.append(doc)
        return {"format": FORMAT_TAG, "vertices": vertices, "edges": edges}

    @staticmethod
    def from_json(doc):
        """
        :param doc: graph document; vertex values are "n/d" strings or
        {"lo", "hi"[, "poly"]} objects
        :raises GraphSchemaError with the location of the first problem
        """
        if not isinstance(doc, dict):
            raise GraphSchemaError("", "Graph document must be an object")
        g = VDigraph()
        for k, item in enumerate(doc.get("vertices", [])):
            where = "/vertices/%d" % k
            if not isinstance(item, dict) or "id" not in item or \
                    "V" not in item:
                raise GraphSchemaError(where, "Vertex needs id and V")
            g.add_vertex(item["id"], value_from_json(item["V"], where + "/V"),
                         item.get("provenance"))
        for k, item in enumerate(doc.get("edges", [])):
            where = "/edges/%d" % k
            if not isinstance(item, dict) or "src" not in item or \
                    "dst" not in item:
                raise GraphSchemaError(where, "Edge needs src and dst")
            g.add_edge(item["src"], item["dst"], item.get("id", "e%d" % k),
                       item.get("provenance"))
        return g.check()

    @staticmethod
    def from_embedded(embedded):
        """
        :param embedded: EmbeddedGraph with x-monotone edges
        :return: its V-digraph; values are x coordinates and edges point
        towards increasing x
        """
        g = VDigraph()
        for v, (x, _) in embedded.vertices.items():
            g.add_vertex(v, x)
        for eid, (src, dst, _) in embedded.edges.items():
            xs, xd = embedded.vertices[src][0], embedded.vertices[dst][0]
            if xs == xd:
                raise GraphSchemaError("/edges/" + str(eid),
                                       "Edge %s is vertical" % eid)
            if xs < xd:
                g.add_edge(src, dst, eid)
            else:
                g.add_edge(dst, src, eid)
        return g

    def __repr__(self):
        return "VDigraph(%d vertices, %d edges)" % (len(self.values),
                                                    len(self.edges))


def normalize(g):
    """
    Suppresses every pass-through vertex (exactly one incoming and one
    outgoing edge), joining its two edges into one that keeps the id of
    the incoming edge.
    :return: a new VDigraph
    """
    out = g.copy()
    changed = True
    while changed:
        changed = False
        for v in list(out.values):
            ins, outs = out.in_edges(v), out.out_edges(v)
            if len(ins) != 1 or len(outs) != 1:
                continue
            e_in, e_out = ins[0], outs[0]
            src, dst = out.edges[e_in][0], out.edges[e_out][1]
            provenance = (out.edge_provenance.pop(e_in, []) or []) + \
                (out.edge_provenance.pop(e_out, []) or [])
            del out.edges[e_out]
            out.edges[e_in] = (src, dst)
            if provenance:
                out.edge_provenance[e_in] = provenance
            del out.values[v]
            out.vertex_provenance.pop(v, None)
            changed = True
    return out


def _matcher(g1, g2, respect_values):
    if respect_values:
        node_match = lambda a, b: a["rank"] == b["rank"]  # noqa: E731
    else:
        node_match = None
    return MultiDiGraphMatcher(g1.to_networkx(), g2.to_networkx(),
                               node_match=node_match)


def _edge_mapping(g1, g2, mapping):
    pairs = {}
    for eid, (s, d) in g2.edges.items():
        pairs.setdefault((s, d), []).append(eid)
    edges = {}
    for eid, (s, d) in g1.edges.items():
        edges[eid] = pairs[(mapping[s], mapping[d])].pop(0)
    return edges


def is_isomorphic(g1, g2, respect_values=True):
    """
    :return: (True, witness) when a vertex bijection preserves oriented
    multi-edges and the order and ties of the values, else (False, None).
    The witness maps vertex and edge ids of g1 to those of g2.
    """
    if len(g1.values) != len(g2.values) or len(g1.edges) != len(g2.edges):
        return False, None
    if respect_values and \
            sorted(g1.value_ranks().values()) != \
            sorted(g2.value_ranks().values()):
        return False, None
    matcher = _matcher(g1, g2, respect_values)
    if not matcher.is_isomorphic():
        return False, None
    mapping = dict(matcher.mapping)
    return True, {"vertices": mapping,
                  "edges": _edge_mapping(g1, g2, mapping)}


def is_weakly_isomorphic(g1, g2, respect_values=True):
    """
    Isomorphism after suppressing pass-through vertices. Value order is
    compared on the retained vertices only; respect_values=False compares
    the oriented multigraph structure alone.
    :return: (bool, witness or None) as is_isomorphic
    """
    return is_isomorphic(normalize(g1), normalize(g2), respect_values)


class EmbeddedGraph(object):
    """
    A graph drawn in the plane: vertices at rational points and edges as
    polylines through rational breakpoints.
    """
    def __init__(self):
        self.vertices = OrderedDict()
        self.edges = OrderedDict()

    def add_vertex(self, vid, x, y):
        self.vertices[vid] = Geometry.point((x, y))
        return vid

    def add_edge(self, eid, src, dst, via=()):
        self.edges[eid] = (src, dst, [Geometry.point(p) for p in via])
        return eid

    def polyline(self, eid):
        src, dst, via = self.edges[eid]
        return [self.vertices[src]] + list(via) + [self.vertices[dst]]

    def ends(self, v):
        """:return: (edge id, side) per edge end at v; side is the sign of
        the x step leaving v along the edge"""
        out = []
        for eid, (src, dst, _) in self.edges.items():
            line = self.polyline(eid)
            if src == v:
                out.append((eid, _sign(line[1][0] - line[0][0])))
            if dst == v:
                out.append((eid, _sign(line[-2][0] - line[-1][0])))
        return out

    def degree(self, v):
        return len(self.ends(v))

    def translate(self, dx, dy):
        dx, dy = Util.to_fraction(dx), Util.to_fraction(dy)
        out = EmbeddedGraph()
        for v, (x, y) in self.vertices.items():
            out.add_vertex(v, x + dx, y + dy)
        for eid, (src, dst, via) in self.edges.items():
            out.add_edge(eid, src, dst, [(x + dx, y + dy) for x, y in via])
        return out

    def to_json(self):
        return {
            "format": FORMAT_TAG,
            "vertices": [{"id": v, "x": Util.format_fraction(x),
                          "y": Util.format_fraction(y)}
                         for v, (x, y) in self.vertices.items()],
            "edges": [{"id": eid, "src": src, "dst": dst,
                       "via": [[Util.format_fraction(x),
                                Util.format_fraction(y)] for x, y in via]}
                      for eid, (src, dst, via) in self.edges.items()]}

    @staticmethod
    def from_json(doc):
        """:raises GraphSchemaError with the location of the problem"""
        if not isinstance(doc, dict) or "vertices" not in doc:
            raise GraphSchemaError("", "Embedded graph needs vertices")
        g = EmbeddedGraph()
        where = "/vertices"
        try:
            for k, item in enumerate(doc["vertices"]):
                where = "/vertices/%d" % k
                if item["id"] in g.vertices:
                    raise GraphSchemaError(where, "Duplicate vertex id")
                g.add_vertex(item["id"], item["x"], item["y"])
            for k, item in enumerate(doc.get("edges", [])):
                where = "/edges/%d" % k
                eid = item.get("id", "e%d" % k)
                if eid in g.edges:
                    raise GraphSchemaError(where, "Duplicate edge id")
                g.add_edge(eid, item["src"], item["dst"],
                           item.get("via", []))
        except (KeyError, TypeError, RationalParseError) as e:
            raise GraphSchemaError(where, "Bad embedded graph: " + str(e))
        return g

    def __repr__(self):
        return "EmbeddedGraph(%d vertices, %d edges)" % (len(self.vertices),
                                                         len(self.edges))


def _sign(q):
    return (q > 0) - (q < 0)


class HypothesisReport(ValidationReport):
    ORDER = HYPOTHESIS_TAGS


def _endpoint_violations(g):
    out = []
    for eid, (src, dst, _) in g.edges.items():
        missing = [v for v in (src, dst) if v not in g.vertices]
        if missing:
            out.append(Violation(
                "bad_endpoint", "Edge %s ends at unknown vertex %s"
                % (eid, missing[0]), {"edge": eid, "vertex": missing[0]}))
        elif src == dst:
            out.append(Violation(
                "bad_endpoint", "Edge %s is a loop at %s" % (eid, src),
                {"edge": eid, "vertex": src}))
    return out


def _embedding_violations(g, edges):
    out = []
    for eid in edges:
        if Geometry.strictly_monotone_x(g.polyline(eid)) == 0:
            out.append(Violation(
                "not_x_monotone", "Edge %s is not strictly x-monotone" % eid,
                {"edge": eid}))
    monotone = [e for e in edges
                if Geometry.strictly_monotone_x(g.polyline(e)) != 0]
    for k, a in enumerate(monotone):
        for b in monotone[k + 1:]:
            shared = set(g.edges[a][:2]) & set(g.edges[b][:2])
            allowed = [g.vertices[v] for v in shared]
            hit = Geometry.polyline_meets(g.polyline(a), g.polyline(b),
                                          allowed)
            if hit is not None:
                out.append(Violation(
                    "edges_intersect", "Edges %s and %s intersect away "
                    "from a shared vertex" % (a, b),
                    {"edges": [a, b],
                     "point": [Util.format_fraction(c) for c in hit]}))
    for v, p in g.vertices.items():
        for eid in monotone:
            if v in g.edges[eid][:2]:
                continue
            if Geometry.polyline_contains(g.polyline(eid), p):
                out.append(Violation(
                    "edges_intersect", "Edge %s passes through vertex %s"
                    % (eid, v), {"edges": [eid], "vertex": v}))
    return out


def _degree_violations(g, edges):
    out = []
    for v in g.vertices:
        ends = [(e, side) for e, side in g.ends(v) if e in edges]
        degree = len(ends)
        if degree == 0:
            out.append(Violation("isolated_vertex",
                                 "Vertex %s has no edges" % v, {"vertex": v}))
            continue
        if degree == 2:
            out.append(Violation("degree_two", "Vertex %s has degree 2" % v,
                                 {"vertex": v}))
        sides = set(side for _, side in ends)
        if degree != 1 and len(sides) == 1 and 0 not in sides:
            out.append(Violation(
                "extremum_degree",
                "Local extremum at vertex %s of degree %d" % (v, degree),
                {"vertex": v, "degree": degree,
                 "side": "left" if sides == {-1} else "right"}))
    return out


def validate_theorem_hypotheses(g):
    """
    Checks that g is connected, drawn as an embedding with strictly
    x-monotone edges, has no vertex of degree 2, and has local extrema of
    the x coordinate only at vertices of degree 1.
    :return: HypothesisReport; each violation names the offending ids
    """
    violations = _endpoint_violations(g)
    edges = [e for e, (src, dst, _) in g.edges.items()
             if src in g.vertices and dst in g.vertices and src != dst]
    violations += _embedding_violations(g, edges)
    violations += _degree_violations(g, edges)
    graph = nx.MultiGraph()
    graph.add_nodes_from(g.vertices)
    graph.add_edges_from(g.edges[e][:2] for e in edges)
    if graph.number_of_nodes() > 0 and not nx.is_connected(graph):
        parts = sorted(sorted(c) for c in nx.connected_components(graph))
        violations.append(Violation(
            "disconnected", "Graph has %d components" % len(parts),
            {"components": parts}))
    report = HypothesisReport(violations)
    log.debug("Hypothesis check of %r: %s" % (g, report.tags()))
    return report
