"""Tests util module"""

import os
import json
import tempfile
import unittest

from fractions import Fraction

from prkit.util import Util, TestUtil, RationalParseError, Violation, \
    ValidationReport


class RationalTest(unittest.TestCase):
    def test_to_fraction(self):
        self.assertEqual(Fraction(3, 4), Util.to_fraction("3/4"))
        self.assertEqual(Fraction(-2), Util.to_fraction("-2"))
        self.assertEqual(Fraction(1, 8), Util.to_fraction("0.125"))
        self.assertEqual(Fraction(-1, 2), Util.to_fraction("2/-4"))
        self.assertEqual(Fraction(5), Util.to_fraction(5))
        self.assertEqual(Fraction(1, 2), Util.to_fraction(0.5))
        q = Fraction(7, 9)
        self.assertIs(q, Util.to_fraction(q))

        with self.assertRaises(RationalParseError):
            Util.to_fraction("one half")
        with self.assertRaises(RationalParseError):
            Util.to_fraction("1/0")
        with self.assertRaises(RationalParseError):
            Util.to_fraction("1/2/3")
        with self.assertRaises(RationalParseError):
            Util.to_fraction(True)
        with self.assertRaises(RationalParseError):
            Util.to_fraction([1, 2])

    def test_format_fraction(self):
        self.assertEqual("3/4", Util.format_fraction(Fraction(6, 8)))
        self.assertEqual("-1/2", Util.format_fraction("2/-4"))
        self.assertEqual("0/1", Util.format_fraction(0))
        self.assertEqual("7/1", Util.format_fraction(7))

    def test_dyadic_between(self):
        for lo, hi in [(Fraction(0), Fraction(1)),
                       (Fraction(1, 3), Fraction(1, 3) + Fraction(1, 1000)),
                       (Fraction(-5, 7), Fraction(-4, 7))]:
            q = Util.dyadic_between(lo, hi)
            self.assertTrue(lo < q < hi)
        self.assertEqual(Fraction(1, 8),
                         Util.dyadic_between(0, Fraction(1, 2)))


class JsonTest(unittest.TestCase):
    def test_dump_is_deterministic(self):
        first = Util.dump_json({"b": 1, "a": [1, 2]})
        second = Util.dump_json({"a": [1, 2], "b": 1})
        self.assertEqual(first, second)
        self.assertTrue(first.endswith("\n"))

    def test_dump_and_load(self):
        path = os.path.join(tempfile.mkdtemp(), "doc.json")
        Util.dump_json({"x": "1/2"}, path)
        self.assertEqual({"x": "1/2"}, Util.load_json(path))


class PoolTest(unittest.TestCase):
    def test_order_is_kept(self):
        items = list(range(20))
        self.assertEqual([i * i for i in items],
                         Util.pool_map(lambda i: i * i, items, 4))
        self.assertEqual([i * i for i in items],
                         Util.pool_map(lambda i: i * i, items, 1))
        self.assertEqual([], Util.pool_map(lambda i: i, [], 3))

    def test_stage_timer(self):
        with Util.stage_timer("nothing") as timer:
            pass
        self.assertIsNotNone(timer)


class ReportTest(unittest.TestCase):
    class OrderedReport(ValidationReport):
        ORDER = ["first", "second"]

    def test_order_and_json(self):
        report = ReportTest.OrderedReport([
            Violation("second", "b", {"k": 2}),
            Violation("first", "a", {"k": 9}),
            Violation("second", "b", {"k": 1})])
        self.assertFalse(report.ok)
        self.assertEqual(["first", "second", "second"], report.tags())
        doc = report.to_json()
        self.assertEqual({"k": 1}, doc["violations"][1]["witness"])
        self.assertNotIn("scope", doc)
        json.dumps(doc)

    def test_empty(self):
        report = ValidationReport(scope={"c0": "global"})
        self.assertTrue(report.ok)
        self.assertEqual({"c0": "global"}, report.to_json()["scope"])


class TestUtilTest(unittest.TestCase):
    def test_modified_environ(self):
        with TestUtil.modified_environ(PRKIT_TEST_VALUE="1"):
            self.assertEqual("1", os.environ["PRKIT_TEST_VALUE"])
        self.assertNotIn("PRKIT_TEST_VALUE", os.environ)
