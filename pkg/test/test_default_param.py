"""Tests layered settings"""

import unittest

from prkit.default_param import Settings, SettingsError, DEFAULTS, KNOBS


class SettingsTest(unittest.TestCase):
    def test_defaults(self):
        settings = Settings(environ={})
        self.assertEqual(60, settings["refine_depth"])
        self.assertEqual([2, 4, 6, 8, 10, 12],
                         settings["fit_degree_schedule"])
        self.assertEqual(sorted(DEFAULTS), sorted(settings.effective()))
        self.assertEqual(set(KNOBS), set(DEFAULTS))

    def test_layers(self):
        environ = {"PRKIT_REFINE_DEPTH": "30", "PRKIT_SEED": "7",
                   "OTHER": "x", "PRKIT_UNKNOWN": "1"}
        settings = Settings({"seed": 3}, environ=environ)
        self.assertEqual(30, settings["refine_depth"])
        self.assertEqual(3, settings["seed"])
        self.assertEqual(512, settings.get("raster_resolution"))
        derived = settings.derive(refine_depth=10, jobs=None)
        self.assertEqual(10, derived["refine_depth"])
        self.assertEqual(3, derived["seed"])

    def test_parse_value(self):
        self.assertEqual(5, Settings.parse_value("jobs", "5"))
        self.assertEqual(1e-6, Settings.parse_value("fit_regularization",
                                                    "1e-6"))
        self.assertEqual([2, 4], Settings.parse_value("fit_degree_schedule",
                                                      "[2, 4]"))
        self.assertEqual("sympy", Settings.parse_value("isolation_method",
                                                       "sympy"))
        with self.assertRaises(SettingsError):
            Settings.parse_value("jobs", "many")
        with self.assertRaises(SettingsError):
            Settings.parse_value("fit_degree_schedule", "4")
        with self.assertRaises(SettingsError):
            Settings.parse_value("colour", "red")

    def test_unknown_override(self):
        with self.assertRaises(SettingsError):
            Settings({"colour": "red"}, environ={})
