"""This module tests argument parsing"""

import unittest

from prkit.args import ArgumentParserError, ArgumentParser, \
    PrkitArgumentParser


class ArgumentParserTest(unittest.TestCase):
    def setUp(self):
        self.parser = PrkitArgumentParser()

    def test_make_flag(self):
        self.assertEqual("--refine-depth",
                         ArgumentParser.make_flag("refine_depth"))
        self.assertEqual("Rounds. Default: 60.",
                         ArgumentParser.make_help_msg((60, "Rounds.")))

    def test_bad_flags(self):
        with self.assertRaises(ArgumentParserError):
            self.parser.parse_args([])
        with self.assertRaises(ArgumentParserError):
            self.parser.parse_args(["validate", "--blah", "blah"])
        with self.assertRaises(ArgumentParserError):
            self.parser.parse_args(["validate"])
        with self.assertRaises(ArgumentParserError):
            self.parser.parse_args(["frobnicate"])
        with self.assertRaises(ArgumentParserError):
            self.parser.parse_args(["realize", "--graph", "g.json",
                                    "--mode", "smooth"])
        with self.assertRaises(ArgumentParserError):
            self.parser.parse_args(["validate", "--domain", "d.json",
                                    "--config", "novalue"])

    def test_common_flags(self):
        res = self.parser.parse_args(
            ["reeb", "--domain", "fixture:disk", "--jobs", "3",
             "--refine-depth", "20", "--config", "fit_grid=32",
             "--config", "seed=4", "--log-level", "DEBUG"])
        self.assertEqual("reeb", res.command)
        self.assertEqual(3, res.jobs)
        self.assertEqual(20, res.refine_depth)
        self.assertIsNone(res.seed)
        self.assertEqual([("fit_grid", "32"), ("seed", "4")], res.config)
        self.assertEqual("DEBUG", res.log_level)

    def test_subcommands(self):
        res = self.parser.parse_args(["compare", "a.json", "b.json",
                                      "--weak"])
        self.assertTrue(res.weak)
        self.assertEqual(("a.json", "b.json"), (res.first, res.second))
        res = self.parser.parse_args(["realize", "--graph", "fixture:y",
                                      "--max-degree", "8"])
        self.assertEqual("algebraic", res.mode)
        self.assertEqual(8, res.max_degree)
        res = self.parser.parse_args(["oracle", "--domain", "d.json"])
        self.assertIsNone(res.resolution)
        res = self.parser.parse_args(["lift", "--domain", "d.json",
                                      "--lift", "l.json", "--text"])
        self.assertTrue(res.text)
