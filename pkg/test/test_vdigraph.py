"""Tests V-digraphs, isomorphism and the embedded graph checks"""

import random
import unittest

from fractions import Fraction

from prkit.cli import load_document
from prkit.vdigraph import VDigraph, EmbeddedGraph, GraphSchemaError, \
    normalize, is_isomorphic, is_weakly_isomorphic, \
    validate_theorem_hypotheses, value_from_json, value_to_json


def embedded(name):
    return EmbeddedGraph.from_json(load_document("fixture:" + name))


def chain(values, prefix="v"):
    g = VDigraph()
    for k, value in enumerate(values):
        g.add_vertex("%s%d" % (prefix, k), Fraction(value))
    for k in range(len(values) - 1):
        g.add_edge("%s%d" % (prefix, k), "%s%d" % (prefix, k + 1))
    return g


class ValueTest(unittest.TestCase):
    def test_rational_forms(self):
        self.assertEqual(Fraction(1, 2), value_from_json("1/2"))
        self.assertEqual(Fraction(1, 2),
                         value_from_json({"lo": "2/4", "hi": "1/2"}))
        self.assertEqual({"lo": "3/4", "hi": "3/4"},
                         value_to_json(Fraction(3, 4)))

    def test_interval_needs_poly(self):
        with self.assertRaises(GraphSchemaError) as ctx:
            value_from_json({"lo": "0", "hi": "1"}, "/vertices/2/V")
        self.assertEqual("/vertices/2/V", ctx.exception.location)

    def test_garbage(self):
        with self.assertRaises(GraphSchemaError):
            value_from_json("half")


class VDigraphTest(unittest.TestCase):
    def test_json_round_trip(self):
        g = VDigraph.from_embedded(embedded("eyeglasses"))
        again = VDigraph.from_json(g.to_json())
        self.assertEqual(list(g.values.items()), list(again.values.items()))
        self.assertEqual(list(g.edges.items()), list(again.edges.items()))

    def test_edges_must_increase(self):
        g = chain([0, 1])
        with self.assertRaises(GraphSchemaError) as ctx:
            g.add_edge("v1", "v0", "back")
        self.assertEqual("/edges/back", ctx.exception.location)
        g.add_vertex("w", 1)
        with self.assertRaises(GraphSchemaError):
            g.add_edge("v1", "w")

    def test_unknown_and_duplicate(self):
        g = chain([0, 1])
        with self.assertRaises(GraphSchemaError):
            g.add_edge("v0", "nowhere")
        with self.assertRaises(GraphSchemaError):
            g.add_vertex("v0", 5)

    def test_isolated_vertex(self):
        doc = chain([0, 1]).to_json()
        doc["vertices"].append({"id": "lonely", "V": "3"})
        with self.assertRaises(GraphSchemaError):
            VDigraph.from_json(doc)

    def test_from_embedded_orients_by_x(self):
        doc = load_document("fixture:y")
        doc["edges"][2] = {"id": "e2", "src": "D", "dst": "C"}
        g = VDigraph.from_embedded(EmbeddedGraph.from_json(doc))
        self.assertEqual(("C", "D"), g.edges["e2"])
        self.assertEqual(("A", "C"), g.edges["e0"])
        self.assertEqual(Fraction(-1), g.values["B"])

    def test_value_ranks_share_ties(self):
        g = VDigraph.from_embedded(embedded("y"))
        self.assertEqual({"A": 0, "B": 0, "C": 1, "D": 2}, g.value_ranks())

    def test_normalize(self):
        g = normalize(VDigraph.from_embedded(embedded("path3")))
        self.assertEqual(["A", "C"], g.vertices)
        self.assertEqual({"e0": ("A", "C")}, dict(g.edges))
        y = VDigraph.from_embedded(embedded("y"))
        self.assertEqual(y.vertices, normalize(y).vertices)


class IsomorphismTest(unittest.TestCase):
    def test_relabelled_copy(self):
        g = VDigraph.from_embedded(embedded("eyeglasses"))
        h = VDigraph()
        for v, value in g.values.items():
            h.add_vertex(v.lower(), value * 3 + 1)
        for eid, (src, dst) in g.edges.items():
            h.add_edge(src.lower(), dst.lower(), "f" + eid)
        verdict, witness = is_isomorphic(g, h)
        self.assertTrue(verdict)
        self.assertEqual("a", witness["vertices"]["A"])
        self.assertEqual({"fe1", "fe2"},
                         {witness["edges"]["e1"], witness["edges"]["e2"]})
        self.assertEqual("fe3", witness["edges"]["e3"])

    def test_orientation_matters(self):
        y = VDigraph.from_embedded(embedded("y"))
        inverted = VDigraph.from_embedded(embedded("inverted_y"))
        self.assertEqual((False, None), is_isomorphic(y, inverted))
        self.assertEqual((False, None),
                         is_isomorphic(y, inverted, respect_values=False))

    def test_value_order_matters(self):
        y = VDigraph.from_embedded(embedded("y"))
        spread = load_document("fixture:y")
        spread["vertices"][0]["x"] = "-2"
        untied = VDigraph.from_embedded(EmbeddedGraph.from_json(spread))
        self.assertFalse(is_isomorphic(y, untied)[0])
        self.assertTrue(is_isomorphic(y, untied, respect_values=False)[0])

    def test_weak(self):
        path = VDigraph.from_embedded(embedded("path3"))
        edge = VDigraph.from_embedded(embedded("single_edge"))
        self.assertFalse(is_isomorphic(path, edge)[0])
        verdict, witness = is_weakly_isomorphic(path, edge)
        self.assertTrue(verdict)
        self.assertEqual({"A": "A", "C": "B"}, witness["vertices"])

    def test_size_mismatch(self):
        self.assertEqual((False, None), is_isomorphic(chain([0, 1]),
                                                      chain([0, 1, 2])))


def random_vdigraph(rng, n_vertices=5, n_edges=6):
    g = VDigraph()
    for k in range(n_vertices):
        value = {0: 0, 1: 3}.get(k, rng.randint(0, 3))
        g.add_vertex("v%d" % k, Fraction(value))
    while len(g.edges) < n_edges:
        a, b = rng.sample(g.vertices, 2)
        if g.values[a] > g.values[b]:
            a, b = b, a
        if g.values[a] < g.values[b]:
            g.add_edge(a, b)
    return g


def subdivided(g, eid, vid):
    """Copy of g with a pass-through vertex vid in the middle of eid"""
    out = VDigraph()
    for v, value in g.values.items():
        out.add_vertex(v, value)
    src, dst = g.edges[eid]
    out.add_vertex(vid, (g.values[src] + g.values[dst]) / 2)
    for other, (s, d) in g.edges.items():
        if other == eid:
            out.add_edge(s, vid, other + "a")
            out.add_edge(vid, d, other + "b")
        else:
            out.add_edge(s, d, other)
    return out


class WeakIsomorphismPropertiesTest(unittest.TestCase):
    def setUp(self):
        rng = random.Random(7)
        self.rng = rng
        self.pool = []
        for _ in range(8):
            g = random_vdigraph(rng)
            self.pool.append(g)
            self.pool.append(subdivided(g, rng.choice(list(g.edges)), "w"))

    def test_normalize_is_idempotent(self):
        for g in self.pool:
            once = normalize(g)
            twice = normalize(once)
            self.assertEqual(list(once.values.items()),
                             list(twice.values.items()))
            self.assertEqual(dict(once.edges), dict(twice.edges))

    def test_equivalence(self):
        weak = {}
        for i, g in enumerate(self.pool):
            self.assertTrue(is_weakly_isomorphic(g, g)[0])
            for j, h in enumerate(self.pool):
                weak[i, j] = is_weakly_isomorphic(g, h)[0]
        n = len(self.pool)
        for i in range(n):
            for j in range(n):
                self.assertEqual(weak[i, j], weak[j, i])
                for k in range(n):
                    if weak[i, j] and weak[j, k]:
                        self.assertTrue(weak[i, k])

    def test_subdivision_keeps_the_class(self):
        for g in self.pool:
            h = g
            for k in range(3):
                h = subdivided(h, self.rng.choice(list(h.edges)), "s%d" % k)
            self.assertTrue(is_weakly_isomorphic(g, h)[0])

    def test_isomorphic_implies_weak(self):
        for g in self.pool:
            for h in self.pool:
                if is_isomorphic(g, h)[0]:
                    self.assertTrue(is_weakly_isomorphic(g, h)[0])


class EmbeddedGraphTest(unittest.TestCase):
    def test_ends(self):
        self.assertEqual([("e0", -1), ("e1", -1), ("e2", 1)],
                         embedded("star3").ends("O"))
        self.assertEqual(3, embedded("star3").degree("O"))

    def test_translate(self):
        g = embedded("eyeglasses").translate(1, "1/2")
        self.assertEqual((Fraction(-1), Fraction(1, 2)), g.vertices["A"])
        self.assertEqual([(Fraction(1), Fraction(3, 2))], g.edges["e1"][2])

    def test_json_round_trip(self):
        g = embedded("star3")
        again = EmbeddedGraph.from_json(g.to_json())
        self.assertEqual(g.to_json(), again.to_json())

    def test_schema(self):
        with self.assertRaises(GraphSchemaError) as ctx:
            EmbeddedGraph.from_json({"vertices": [{"id": "A", "x": "0"}]})
        self.assertEqual("/vertices/0", ctx.exception.location)
        with self.assertRaises(GraphSchemaError):
            EmbeddedGraph.from_json({"edges": []})


def drawn(vertices, edges):
    return EmbeddedGraph.from_json({
        "vertices": [{"id": v, "x": x, "y": y} for v, x, y in vertices],
        "edges": [{"id": eid, "src": s, "dst": d, "via": via}
                  for eid, s, d, via in edges]})


class HypothesesTest(unittest.TestCase):
    def test_fixtures_satisfy_hypotheses(self):
        for name in ("single_edge", "y", "inverted_y", "double_y",
                     "eyeglasses", "star3"):
            report = validate_theorem_hypotheses(embedded(name))
            self.assertTrue(report.ok, "%s: %s" % (name, report.tags()))

    def test_degree_two(self):
        report = validate_theorem_hypotheses(embedded("path3"))
        self.assertEqual(["degree_two"], report.tags())
        self.assertEqual({"vertex": "B"}, report.violations[0].witness)

    def test_extremum_degree(self):
        report = validate_theorem_hypotheses(embedded("extremum_deg3"))
        self.assertEqual(["extremum_degree"], report.tags())
        witness = report.violations[0].witness
        self.assertEqual("O", witness["vertex"])
        self.assertEqual("right", witness["side"])

    def test_not_x_monotone(self):
        g = drawn([("a", "0", "0"), ("b", "2", "0")],
                  [("e", "a", "b", [["3", "1"]])])
        self.assertEqual(["not_x_monotone"],
                         validate_theorem_hypotheses(g).tags())

    def test_crossing_edges(self):
        g = drawn([("a", "0", "0"), ("b", "2", "2"), ("c", "0", "2"),
                   ("d", "2", "0")],
                  [("e", "a", "b", []), ("f", "c", "d", [])])
        report = validate_theorem_hypotheses(g)
        self.assertIn("edges_intersect", report.tags())
        hit = [v for v in report.violations if v.tag == "edges_intersect"]
        self.assertEqual(["1/1", "1/1"], hit[0].witness["point"])

    def test_disconnected(self):
        g = drawn([("a", "0", "0"), ("b", "1", "0"), ("c", "0", "5"),
                   ("d", "1", "5")],
                  [("e", "a", "b", []), ("f", "c", "d", [])])
        report = validate_theorem_hypotheses(g)
        self.assertEqual(["disconnected"], report.tags())
        self.assertEqual([["a", "b"], ["c", "d"]],
                         report.violations[0].witness["components"])

    def test_loop(self):
        g = drawn([("a", "0", "0"), ("b", "1", "0")],
                  [("e", "a", "b", []), ("loop", "a", "a", [])])
        self.assertIn("bad_endpoint", validate_theorem_hypotheses(g).tags())


if __name__ == '__main__':
    unittest.main()
