"""Tests the command-line surface end to end"""

import io
import os
import json
import shutil
import tempfile
import unittest

from prkit import __version__
from prkit.cli import run, fixture_names, load_document, load_vdigraph, \
    InputError, EXIT_OK, EXIT_INVALID
from prkit.domain import RefinedDomainSpec
from prkit.lift import restrict_to_plane
from prkit.util import FORMAT_TAG, TestUtil, Util
from prkit.vdigraph import VDigraph, is_weakly_isomorphic


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def invoke_json(*argv):
    code, text = invoke(*argv)
    return code, json.loads(text)


class LoaderTest(unittest.TestCase):
    def test_fixture_names(self):
        names = fixture_names()
        for name in ("disk", "annulus", "lens", "y", "eyeglasses"):
            self.assertIn(name, names)

    def test_unknown_fixture(self):
        with self.assertRaises(InputError) as ctx:
            load_document("fixture:nothing")
        self.assertEqual("fixture:nothing", ctx.exception.location)

    def test_missing_file(self):
        with self.assertRaises(InputError):
            load_document(TestUtil.resource("absent.json"))


class CliTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp(prefix="prkit-test-")

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def path(self, name):
        return os.path.join(self.tmp, name)

    def test_validate(self):
        code, doc = invoke_json("validate", "--domain", "fixture:disk",
                                "--jobs", "1")
        self.assertEqual(EXIT_OK, code)
        self.assertEqual(FORMAT_TAG, doc["format"])
        self.assertEqual(__version__, doc["version"])
        self.assertEqual("validate", doc["command"])
        self.assertEqual(1, doc["config"]["jobs"])
        self.assertTrue(doc["ok"])
        self.assertEqual(2, len(doc["f_set"]["folds"]))

    def test_validate_violation(self):
        code, doc = invoke_json("validate", "--domain", "fixture:nodal",
                                "--report", self.path("report.json"))
        self.assertEqual(EXIT_INVALID, code)
        self.assertFalse(doc["ok"])
        tags = [v["tag"] for v in doc["report"]["violations"]]
        self.assertIn("singular_point", tags)
        with open(self.path("report.json")) as f:
            self.assertEqual(doc["report"], json.load(f)["report"])

    def test_reeb(self):
        code, doc = invoke_json("reeb", "--domain", "fixture:annulus",
                                "--out", self.path("graph.json"),
                                "--dot", self.path("graph.dot"))
        self.assertEqual(EXIT_OK, code)
        self.assertEqual(4, len(doc["graph"]["edges"]))
        with open(self.path("graph.dot")) as f:
            self.assertTrue(f.read().startswith("digraph"))
        code, doc = invoke_json("compare", self.path("graph.json"),
                                self.path("graph.json"))
        self.assertEqual(EXIT_OK, code)
        self.assertTrue(doc["verdict"])

    def test_compare(self):
        code, doc = invoke_json("compare", "fixture:path3",
                                "fixture:single_edge")
        self.assertEqual(EXIT_OK, code)
        self.assertFalse(doc["verdict"])
        self.assertIsNone(doc["witness"])
        code, doc = invoke_json("compare", "fixture:path3",
                                "fixture:single_edge", "--weak")
        self.assertEqual(EXIT_OK, code)
        self.assertTrue(doc["verdict"])
        self.assertEqual({"A": "A", "C": "B"}, doc["witness"]["vertices"])

    def test_schema_errors(self):
        code, doc = invoke_json("validate", "--domain",
                                TestUtil.resource("broken.json"))
        self.assertEqual(EXIT_INVALID, code)
        self.assertEqual("schema", doc["error"])
        code, doc = invoke_json("reeb", "--domain", "fixture:nothing")
        self.assertEqual(EXIT_INVALID, code)
        self.assertEqual("fixture:nothing", doc["location"])
        code, doc = invoke_json("lift", "--domain", "fixture:disk",
                                "--lift", "fixture:disk")
        self.assertEqual(EXIT_INVALID, code)
        self.assertEqual("/assignment", doc["location"])

    def test_bad_arguments(self):
        self.assertEqual(EXIT_INVALID, invoke("frobnicate")[0])
        self.assertEqual(EXIT_INVALID, invoke("validate")[0])
        self.assertEqual(EXIT_INVALID, invoke(
            "validate", "--domain", "fixture:disk", "--jobs", "many")[0])

    def test_bad_config(self):
        code, doc = invoke_json("validate", "--domain", "fixture:disk",
                                "--config", "no_such_knob=1")
        self.assertEqual(EXIT_INVALID, code)
        self.assertEqual("settings", doc["error"])

    def test_config_override(self):
        code, doc = invoke_json("validate", "--domain", "fixture:disk",
                                "--config", "solve_depth=40")
        self.assertEqual(EXIT_OK, code)
        self.assertEqual(40, doc["config"]["solve_depth"])

    def test_realize_checks_hypotheses(self):
        code, doc = invoke_json("realize", "--graph", "fixture:path3")
        self.assertEqual(EXIT_INVALID, code)
        self.assertEqual(["degree_two"],
                         [v["tag"] for v in doc["report"]["violations"]])

    def test_realize_piecewise(self):
        code, doc = invoke_json("realize", "--graph", "fixture:single_edge",
                                "--mode", "piecewise",
                                "--report", self.path("realization.json"))
        self.assertEqual(EXIT_OK, code)
        self.assertFalse(doc["algebraic"])
        self.assertTrue(doc["report"]["verified"])
        self.assertNotIn("domain", doc)
        with open(self.path("realization.json")) as f:
            self.assertEqual("piecewise", json.load(f)["mode"])

    def test_lift_text(self):
        code, text = invoke("lift", "--domain", "fixture:disk", "--lift",
                            TestUtil.resource("disk_lift.json"), "--text")
        self.assertEqual(EXIT_OK, code)
        self.assertEqual("1 - x1**2 - x2**2 - y_{a,1}**2 - y_{a,2}**2 = 0\n",
                         text)

    def test_lift_rejects_shared_label(self):
        code, doc = invoke_json("lift", "--domain", "fixture:lens", "--lift",
                                TestUtil.resource("lens_one_label.json"))
        self.assertEqual(EXIT_INVALID, code)
        self.assertEqual("same_label_crossing",
                         doc["report"]["violations"][0]["tag"])

    def test_oracle(self):
        code, doc = invoke_json("oracle", "--domain", "fixture:disk",
                                "--resolution", "64")
        self.assertEqual(EXIT_OK, code)
        self.assertEqual(64, doc["resolution"])
        self.assertEqual(1, len(doc["graph"]["edges"]))

    def test_render(self):
        svg = self.path("disk.svg")
        code, doc = invoke_json("render", "--domain", "fixture:lens",
                                "--svg", svg)
        self.assertEqual(EXIT_OK, code)
        self.assertEqual(svg, doc["svg"])
        with open(svg) as f:
            self.assertIn("<svg", f.read())


class DeterminismTest(unittest.TestCase):
    COMMANDS = (("validate", "--domain", "fixture:triple_circles"),
                ("reeb", "--domain", "fixture:annulus"),
                ("oracle", "--domain", "fixture:lens", "--resolution", "96"),
                ("lift", "--domain", "fixture:lens", "--lift",
                 TestUtil.resource("lens_lift.json")),
                ("realize", "--graph", "fixture:y", "--mode", "piecewise"))

    def test_repeated_runs(self):
        for argv in DeterminismTest.COMMANDS:
            self.assertEqual(invoke(*argv), invoke(*argv), argv[0])

    def test_jobs_do_not_change_results(self):
        for argv in DeterminismTest.COMMANDS:
            outputs = set()
            for jobs in ("1", "2", "4"):
                code, doc = invoke_json(*(argv + ("--jobs", jobs)))
                self.assertEqual(int(jobs), doc.pop("config")["jobs"])
                outputs.add((code, json.dumps(doc, sort_keys=True)))
            self.assertEqual(1, len(outputs), argv[0])


class RoundTripTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp(prefix="prkit-test-")

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def path(self, name):
        return os.path.join(self.tmp, name)

    def test_validate_report(self):
        code, text = invoke("validate", "--domain", "fixture:lens",
                            "--report", self.path("report.json"))
        self.assertEqual(EXIT_OK, code)
        with open(self.path("report.json")) as f:
            self.assertEqual(text, f.read())

    def test_domain(self):
        spec = RefinedDomainSpec.from_json(load_document("fixture:annulus"))
        Util.dump_json(spec.to_json(), self.path("annulus.json"))
        self.assertEqual(invoke("validate", "--domain", "fixture:annulus"),
                         invoke("validate", "--domain",
                                self.path("annulus.json")))

    def test_graphs(self):
        for argv in (("reeb", "--domain", "fixture:lens"),
                     ("oracle", "--domain", "fixture:lens",
                      "--resolution", "128")):
            out = self.path(argv[0] + ".json")
            code, doc = invoke_json(*(argv + ("--out", out)))
            self.assertEqual(EXIT_OK, code)
            loaded = VDigraph.from_json(load_document(out))
            self.assertEqual(VDigraph.from_json(doc["graph"]).to_json(),
                             loaded.to_json())
            code, doc = invoke_json("compare", out, out)
            self.assertTrue(doc["verdict"], argv[0])

    def test_lift(self):
        out = self.path("lift.json")
        code, text = invoke("lift", "--domain", "fixture:lens", "--lift",
                            TestUtil.resource("lens_lift.json"), "--out",
                            out)
        self.assertEqual(EXIT_OK, code)
        with open(out) as f:
            self.assertEqual(text, f.read())
        self.assertEqual(restrict_to_plane(json.loads(text)),
                         restrict_to_plane(load_document(out)))

    def test_realize_report(self):
        out = self.path("realization.json")
        code, doc = invoke_json("realize", "--graph", "fixture:y", "--mode",
                                "piecewise", "--report", out)
        self.assertEqual(EXIT_OK, code)
        saved = load_document(out)
        self.assertEqual(doc["report"], saved["artifacts"]["report"])
        graph = VDigraph.from_json(saved["artifacts"]["report"]
                                   ["piecewise_graph"])
        self.assertTrue(is_weakly_isomorphic(
            graph, load_vdigraph("fixture:y"), respect_values=False)[0])


if __name__ == '__main__':
    unittest.main()
