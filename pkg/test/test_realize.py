"""Tests the graph realization pipeline"""

import os
import unittest

from fractions import Fraction

import shapely

from prkit.cli import load_document
from prkit.realize import RealizationConfig, RealizationError, LEFT, RIGHT, \
    PIECEWISE, vertical_segments, rewire_neighborhoods, build_G_eps, \
    fold_inventory, thicken, signed_field, realize
from prkit.vdigraph import EmbeddedGraph, VDigraph, is_weakly_isomorphic, \
    normalize

FULL_CORPUS = os.environ.get("PRKIT_FULL_CORPUS")


def embedded(name):
    return EmbeddedGraph.from_json(load_document("fixture:" + name))


def stages(g, cfg=None):
    cfg = cfg or RealizationConfig.defaults_for(g)
    segments = vertical_segments(g, cfg)
    rewired = rewire_neighborhoods(g, segments, cfg)
    return cfg, segments, rewired, build_G_eps(g, segments, rewired, cfg)


class ConfigTest(unittest.TestCase):
    def test_defaults_for_y(self):
        cfg = RealizationConfig.defaults_for(embedded("y"))
        self.assertEqual(Fraction(1, 4), cfg.eps2)
        self.assertEqual(Fraction(1, 16), cfg.eps1)
        self.assertEqual(Fraction(1, 8), cfg.eps_prime)
        self.assertGreater(cfg.delta, 0)
        self.assertLessEqual(cfg.delta, Fraction(1, 128))

    def test_defaults_for_single_edge(self):
        cfg = RealizationConfig.defaults_for(embedded("single_edge"))
        self.assertEqual(Fraction(1, 4), cfg.eps1)
        self.assertEqual(Fraction(1, 4), cfg.eps2)
        self.assertEqual(Fraction(1, 32), cfg.delta)

    def test_explicit_values_are_kept(self):
        cfg = RealizationConfig.defaults_for(
            embedded("y"), eps1=Fraction(1, 32), delta=Fraction(1, 1000),
            max_degree=6, eps2=None)
        self.assertEqual(Fraction(1, 32), cfg.eps1)
        self.assertEqual(Fraction(1, 4), cfg.eps2)
        self.assertEqual(Fraction(1, 1000), cfg.delta)
        self.assertEqual([2, 4, 6], cfg.fit_degree_schedule)

    def test_settings_feed_the_schedule(self):
        cfg = RealizationConfig.defaults_for(
            embedded("single_edge"), {"fit_degree_schedule": [4, 2],
                                      "raster_resolution": 256})
        self.assertEqual([2, 4], cfg.fit_degree_schedule)
        self.assertEqual(256, cfg.resolution)

    def test_bad_values_are_rejected(self):
        with self.assertRaises(RealizationError) as ctx:
            RealizationConfig.defaults_for(embedded("y"), eps1=Fraction(1))
        self.assertEqual("rewire", ctx.exception.stage)
        self.assertIn("config", ctx.exception.diagnostics)
        with self.assertRaises(RealizationError):
            RealizationConfig.defaults_for(embedded("y"), eps2=Fraction(1),
                                           delta=Fraction(1, 100))\
                .check(embedded("y"))
        with self.assertRaises(RealizationError):
            RealizationConfig.defaults_for(embedded("y"), max_degree=1,
                                           delta=Fraction(1, 100))\
                .check(embedded("y"))

    def test_json(self):
        doc = RealizationConfig.defaults_for(embedded("y")).to_json()
        self.assertEqual("1/4", doc["eps2"])
        self.assertEqual(["2/1", "3/2", "5/4"], doc["circle_offsets"])


class RewireTest(unittest.TestCase):
    def test_vertical_segments(self):
        g = embedded("y")
        cfg = RealizationConfig.defaults_for(g)
        segments = vertical_segments(g, cfg)
        self.assertEqual([Fraction(-1), Fraction(0), Fraction(1)],
                         [s.p for s in segments])
        self.assertEqual(["B", "A"], segments[0].vertices)
        self.assertEqual(Fraction(-5, 4), segments[0].lo)
        self.assertEqual(Fraction(5, 4), segments[0].hi)

    def test_branch_heights(self):
        cfg, _, rewired, _ = stages(embedded("y"))
        hood = rewired["C"]
        self.assertFalse(hood.leaf)
        self.assertEqual((Fraction(-1, 8), Fraction(1, 8)), hood.window)
        heights = [(e.edge, e.side, e.height) for e in hood.ends]
        self.assertEqual([("e0", LEFT, Fraction(1, 16)),
                          ("e1", LEFT, Fraction(0)),
                          ("e2", RIGHT, Fraction(-1, 16))], heights)
        self.assertEqual(Fraction(1, 16), hood.spacing)
        end = hood.ends[0]
        self.assertEqual((Fraction(-1, 16), Fraction(1, 16)), end.clip)
        self.assertEqual((Fraction(-1, 32), Fraction(1, 16)), end.bend)
        self.assertEqual((Fraction(0), Fraction(1, 16)), end.foot)

    def test_leaf(self):
        _, _, rewired, _ = stages(embedded("y"))
        hood = rewired["A"]
        self.assertTrue(hood.leaf)
        self.assertIsNone(hood.spacing)
        end = hood.ends[0]
        self.assertEqual(RIGHT, end.side)
        self.assertEqual((Fraction(-15, 16), Fraction(15, 16)), end.clip)
        self.assertEqual((Fraction(-31, 32), Fraction(1)), end.bend)
        self.assertEqual((Fraction(-1), Fraction(1)), end.foot)

    def test_pockets(self):
        _, _, rewired, _ = stages(embedded("eyeglasses"))
        self.assertEqual([RIGHT], [p.side for p in rewired["B"].pockets()])
        self.assertEqual([LEFT], [p.side for p in rewired["C"].pockets()])
        self.assertEqual([], rewired["A"].pockets())

    def test_edge_through_neighborhood(self):
        g = embedded("y")
        cfg = RealizationConfig.defaults_for(g, eps1=Fraction(1, 16),
                                             eps2=Fraction(1, 4),
                                             delta=Fraction(1, 200))
        g.add_vertex("E", Fraction(-1, 2), Fraction(-1, 10))
        g.add_vertex("F", Fraction(1, 2), Fraction(1, 10))
        g.add_edge("e9", "E", "F")
        with self.assertRaises(RealizationError) as ctx:
            rewire_neighborhoods(g, vertical_segments(g, cfg), cfg)
        self.assertEqual("rewire", ctx.exception.stage)
        self.assertEqual("e9", ctx.exception.diagnostics["edge"])


class ComplexTest(unittest.TestCase):
    def test_y_ledger(self):
        _, _, _, cx = stages(embedded("y"))
        self.assertEqual({"middle": 3, "slant": 3, "horizontal": 3,
                          "s_p": 1, "tip_slant": 3, "tip_horizontal": 3},
                         dict(cx.ledger()))

    def test_single_edge_ledger(self):
        _, _, _, cx = stages(embedded("single_edge"))
        self.assertEqual({"middle": 1, "slant": 0, "horizontal": 0,
                          "s_p": 0, "tip_slant": 2, "tip_horizontal": 2},
                         dict(cx.ledger()))
        self.assertEqual(Fraction(1, 8), Fraction(
            cx.min_unrelated_distance()).limit_denominator(1000))
        middle = [p for p in cx.pieces if p.kind == "middle"][0]
        self.assertEqual([(Fraction(1, 4), 0), (Fraction(3, 4), 0)],
                         middle.points)
        self.assertEqual((Fraction(1, 2), Fraction(0)),
                         cx.interior_point())

    def test_decreasing_edge_is_reversed(self):
        doc = load_document("fixture:single_edge")
        doc["edges"][0] = {"id": "e0", "src": "B", "dst": "A"}
        _, _, _, cx = stages(EmbeddedGraph.from_json(doc))
        middle = [p for p in cx.pieces if p.kind == "middle"][0]
        self.assertEqual(Fraction(1, 4), middle.points[0][0])

    def test_s_p_joints(self):
        _, _, rewired, cx = stages(embedded("y"))
        sp = [p for p in cx.pieces if p.kind == "s_p"][0]
        for end in rewired["C"].ends:
            self.assertIn(end.foot, sp.joints)


class ThickenTest(unittest.TestCase):
    def test_inventory_y(self):
        cfg, _, rewired, _ = stages(embedded("y"))
        inventory = fold_inventory(rewired, cfg)
        self.assertEqual(3, len(inventory.definite))
        self.assertEqual(1, len(inventory.indefinite))
        by_vertex = {f.vertex: f for f in inventory.definite}
        self.assertEqual("min", by_vertex["A"].extremum)
        self.assertEqual("max", by_vertex["D"].extremum)
        self.assertEqual((Fraction(-1) - cfg.delta, Fraction(1)),
                         by_vertex["A"].point)
        pocket = inventory.indefinite[0]
        self.assertEqual("C", pocket.vertex)
        self.assertEqual((-cfg.delta, Fraction(1, 32)), pocket.point)
        self.assertEqual(Fraction(1, 32) - cfg.delta, pocket.half_gap)

    def test_inventory_counts(self):
        for name, definite, indefinite in (("single_edge", 2, 0),
                                           ("eyeglasses", 2, 2),
                                           ("double_y", 4, 2),
                                           ("star3", 3, 1)):
            cfg, _, rewired, _ = stages(embedded(name))
            inventory = fold_inventory(rewired, cfg)
            self.assertEqual((definite, indefinite),
                             (len(inventory.definite),
                              len(inventory.indefinite)), name)

    def test_holes_follow_cycles(self):
        cfg, _, rewired, cx = stages(embedded("eyeglasses"))
        thick = thicken(cx, rewired, cfg, cycle_rank=1)
        self.assertEqual(1, len(thick.polygon.interiors))
        self.assertEqual(2, thick.components)
        self.assertEqual(1, thick.to_json()["holes"])
        x0, x1, y0, y1 = cx.bounds()
        self.assertLess(thick.box.x0, x0)
        self.assertGreater(thick.box.y1, y1)
        with self.assertRaises(RealizationError) as ctx:
            thicken(cx, rewired, cfg, cycle_rank=0)
        self.assertEqual("thicken", ctx.exception.stage)

    def test_signed_field(self):
        cfg, _, rewired, cx = stages(embedded("y"))
        thick = thicken(cx, rewired, cfg)
        samples, weights = signed_field(thick, cfg, 24)
        self.assertEqual(24 * 24, len(weights))
        delta2 = float(cfg.delta) ** 2
        for ((x, y), value), w in zip(samples, weights):
            self.assertLessEqual(value, delta2)
            self.assertTrue(-1 < value * w <= 1)
            if shapely.contains_xy(thick.polygon, float(x), float(y)):
                self.assertGreater(value, 0)
        self.assertTrue(any(value < 0 for _, value in samples))

    def test_overlapping_offsets(self):
        g = embedded("y")
        cfg = RealizationConfig.defaults_for(g)
        cfg.delta = Fraction(1, 2)
        cfg, _, rewired, cx = stages(g, cfg)
        with self.assertRaises(RealizationError):
            thicken(cx, rewired, cfg)


class PiecewiseRealizeTest(unittest.TestCase):
    def test_fixtures(self):
        for name in ("single_edge", "y", "eyeglasses"):
            g = embedded(name)
            result = realize(g, mode=PIECEWISE)
            self.assertFalse(result.algebraic)
            self.assertIsNone(result.spec)
            report = result.artifacts.report
            self.assertTrue(report["verified"], name)
            self.assertEqual(1 + len(g.edges) - len(g.vertices) + 1,
                             report["boundary_components"])
            self.assertIn("piecewise_graph", report)
            self.assertEqual("piecewise", result.to_json()["mode"])

    def test_hypotheses_first(self):
        with self.assertRaises(RealizationError) as ctx:
            realize(embedded("path3"), mode=PIECEWISE)
        self.assertEqual("hypotheses", ctx.exception.stage)
        self.assertEqual(["degree_two"],
                         [v["tag"] for v in
                          ctx.exception.diagnostics["violations"]])


class RealizeInvarianceTest(unittest.TestCase):
    @staticmethod
    def piecewise(g, cfg=None):
        result = realize(g, cfg, mode=PIECEWISE)
        return VDigraph.from_json(result.artifacts.report["piecewise_graph"])

    def test_halving_delta(self):
        for name in ("y", "eyeglasses"):
            g = embedded(name)
            cfg = RealizationConfig.defaults_for(g)
            base = self.piecewise(g, cfg)
            finer = RealizationConfig.defaults_for(g)
            finer.delta = cfg.delta / 2
            self.assertTrue(is_weakly_isomorphic(
                base, self.piecewise(g, finer), respect_values=False)[0],
                name)

    def test_translation(self):
        for name in ("single_edge", "inverted_y"):
            g = embedded(name)
            moved = g.translate(Fraction(5, 3), Fraction(-7, 4))
            self.assertTrue(is_weakly_isomorphic(
                self.piecewise(g), self.piecewise(moved),
                respect_values=False)[0], name)
            cfg = RealizationConfig.defaults_for(g)
            other = RealizationConfig.defaults_for(moved)
            self.assertEqual((cfg.eps1, cfg.eps2), (other.eps1, other.eps2))


def parallel_pairs(graph):
    """Edge multiplicities above one, per ordered vertex pair"""
    counts = {}
    for src, dst in graph.edges.values():
        counts[src, dst] = counts.get((src, dst), 0) + 1
    return sorted(n for n in counts.values() if n > 1)


def check_realization(test, name):
    """Runs the algebraic pipeline on a fixture and checks the result"""
    g = embedded(name)
    result = realize(g)
    test.assertTrue(result.algebraic)
    report = result.artifacts.report
    test.assertTrue(report["verified"])
    test.assertTrue(report["validation"]["ok"])
    found = VDigraph.from_json(report["pr_graph"])
    target = VDigraph.from_embedded(g)
    test.assertTrue(is_weakly_isomorphic(target, found)[0])
    test.assertEqual(parallel_pairs(normalize(target)),
                     parallel_pairs(normalize(found)))
    art = result.artifacts
    test.assertEqual(len(art.thickening.inventory.all()),
                     len(art.excisions))
    test.assertEqual(1 + len(art.excisions), len(result.spec.curves))
    for excision in art.excisions:
        test.assertEqual(2, len(excision.crossings))
    return result


class AlgebraicRealizeTest(unittest.TestCase):
    def test_single_edge(self):
        result = check_realization(self, "single_edge")
        self.assertEqual(2, len(result.artifacts.excisions))
        self.assertEqual(3, len(result.spec.curves))


@unittest.skipUnless(FULL_CORPUS, "set PRKIT_FULL_CORPUS to run")
class AlgebraicCorpusTest(unittest.TestCase):
    def test_y(self):
        check_realization(self, "y")

    def test_inverted_y(self):
        check_realization(self, "inverted_y")

    def test_double_y(self):
        result = check_realization(self, "double_y")
        self.assertEqual(6, len(result.artifacts.excisions))

    def test_eyeglasses(self):
        result = check_realization(self, "eyeglasses")
        found = normalize(VDigraph.from_json(
            result.artifacts.report["pr_graph"]))
        # the hole between B and C
        self.assertEqual([2], parallel_pairs(found))


if __name__ == '__main__':
    unittest.main()
