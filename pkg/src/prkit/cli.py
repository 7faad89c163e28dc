"""
Command-line entry point. Every subcommand prints one JSON document to
stdout carrying the format tag, the tool version and the effective
settings; logs go to stderr.

Exit codes: 0 on success, 2 on violations and malformed input, 1 on any
other error.
"""
from __future__ import print_function

import os
import sys
import json
import logging

from collections import OrderedDict

from prkit import __version__
from prkit.args import PrkitArgumentParser, ArgumentParserError
from prkit.default_param import Settings, SettingsError
from prkit.domain import RefinedDomainSpec, DomainSchemaError, \
    validate_domain, compute_f_set
from prkit.lift import LiftSpec, LiftError, validate_partition, emit_lift
from prkit.polyalg import PolynomialParseError
from prkit.realize import RealizationConfig, RealizationError, realize
from prkit.render import render_svg, to_dot
from prkit.sweep import build_poincare_reeb, raster_oracle
from prkit.util import FORMAT_TAG, PrkitError, RationalParseError, Util
from prkit.vdigraph import VDigraph, EmbeddedGraph, GraphSchemaError, \
    is_isomorphic, is_weakly_isomorphic, validate_theorem_hypotheses

log = logging.getLogger(__name__)

FIXTURE_PREFIX = "fixture:"
FIXTURE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                           "fixtures")
LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2


class InputError(PrkitError):
    """Unreadable input; expression is the location"""
    @property
    def location(self):
        return self.expression


SCHEMA_ERRORS = (InputError, DomainSchemaError, GraphSchemaError, LiftError,
                 PolynomialParseError, RationalParseError)


def fixture_names():
    return sorted(name[:-len(".json")] for name in os.listdir(FIXTURE_DIR)
                  if name.endswith(".json"))


def load_document(ref):
    """
    :param ref: a file path or fixture:<name>
    :return: the parsed JSON document
    :raises InputError when the file is missing or not JSON
    """
    path = ref
    if ref.startswith(FIXTURE_PREFIX):
        name = ref[len(FIXTURE_PREFIX):]
        if name not in fixture_names():
            raise InputError(ref, "Unknown fixture %s; known: %s"
                             % (name, ", ".join(fixture_names())))
        path = os.path.join(FIXTURE_DIR, name + ".json")
    try:
        return Util.load_json(path)
    except IOError as e:
        raise InputError(ref, "Cannot read %s: %s" % (ref, e.strerror))
    except ValueError as e:
        raise InputError(ref, "%s is not valid JSON: %s" % (ref, e))


def load_domain(ref, settings):
    return RefinedDomainSpec.from_json(load_document(ref),
                                       settings["max_poly_degree"])


def load_vdigraph(ref):
    """Accepts a V-digraph document or an embedded graph document"""
    doc = load_document(ref)
    vertices = doc.get("vertices") if isinstance(doc, dict) else None
    if vertices and isinstance(vertices[0], dict) and "x" in vertices[0]:
        return VDigraph.from_embedded(EmbeddedGraph.from_json(doc))
    return VDigraph.from_json(doc)


def make_settings(args):
    """Flags override --config items, which override the environment"""
    overrides = {}
    for key, text in args.config:
        overrides[key] = Settings.parse_value(key, text)
    for knob in ("jobs", "seed", "refine_depth"):
        if getattr(args, knob, None) is not None:
            overrides[knob] = getattr(args, knob)
    return Settings(overrides)


def envelope(doc, settings, command):
    out = OrderedDict()
    out["format"] = FORMAT_TAG
    out["version"] = __version__
    out["command"] = command
    out["config"] = settings.effective()
    out.update(doc)
    return out


class Commands(object):
    """
    One static method per subcommand; each returns (document, exit code)
    and writes its optional side outputs.
    """
    @staticmethod
    def validate(args, settings):
        spec = load_domain(args.domain, settings)
        report = validate_domain(spec, settings)
        doc = OrderedDict([("ok", report.ok), ("report", report.to_json())])
        if report.ok:
            doc["f_set"] = compute_f_set(spec, settings,
                                         report.analysis).to_json()
        if args.report:
            Util.dump_json(envelope(doc, settings, "validate"), args.report)
        return doc, EXIT_OK if report.ok else EXIT_INVALID

    @staticmethod
    def reeb(args, settings):
        spec = load_domain(args.domain, settings)
        report = validate_domain(spec, settings)
        if not report.ok:
            return OrderedDict([("ok", False),
                                ("report", report.to_json())]), EXIT_INVALID
        graph = build_poincare_reeb(spec, settings, report.analysis)
        doc = OrderedDict([("ok", True), ("graph", graph.to_json())])
        if args.out:
            Util.dump_json(envelope(graph.to_json(), settings, "reeb"),
                           args.out)
        if args.dot:
            with open(args.dot, "w") as out:
                out.write(to_dot(graph))
        if args.svg:
            render_svg(args.svg, spec, graph)
        return doc, EXIT_OK

    @staticmethod
    def realize(args, settings):
        g = EmbeddedGraph.from_json(load_document(args.graph))
        hypotheses = validate_theorem_hypotheses(g)
        if not hypotheses.ok:
            return OrderedDict([("ok", False),
                                ("report", hypotheses.to_json())]), \
                EXIT_INVALID
        cfg = RealizationConfig.defaults_for(g, settings,
                                             max_degree=args.max_degree)
        result = realize(g, cfg, settings, args.mode)
        doc = OrderedDict([("ok", True), ("mode", result.mode),
                           ("algebraic", result.algebraic),
                           ("report", result.artifacts.report)])
        if result.spec is not None:
            doc["domain"] = result.spec.to_json()
        if args.out and result.spec is not None:
            Util.dump_json(envelope(result.spec.to_json(), settings,
                                    "realize"), args.out)
        if args.report:
            Util.dump_json(envelope(result.to_json(), settings, "realize"),
                           args.report)
        if args.svg and result.spec is not None:
            graph = VDigraph.from_json(result.artifacts.report["pr_graph"])
            render_svg(args.svg, result.spec, graph)
        return doc, EXIT_OK

    @staticmethod
    def compare(args, settings):
        first, second = load_vdigraph(args.first), load_vdigraph(args.second)
        check = is_weakly_isomorphic if args.weak else is_isomorphic
        verdict, witness = check(first, second)
        return OrderedDict([("weak", args.weak), ("verdict", verdict),
                            ("witness", witness)]), EXIT_OK

    @staticmethod
    def lift(args, settings):
        spec = load_domain(args.domain, settings)
        lift = LiftSpec.from_json(load_document(args.lift))
        report = validate_domain(spec, settings)
        if not report.ok:
            return OrderedDict([("ok", False),
                                ("report", report.to_json())]), EXIT_INVALID
        partition = validate_partition(spec, lift, settings, report.analysis)
        if not partition.ok:
            return OrderedDict([("ok", False),
                                ("report", partition.to_json())]), \
                EXIT_INVALID
        doc = emit_lift(spec, lift)
        if args.out:
            Util.dump_json(envelope(doc, settings, "lift"), args.out)
        return doc, EXIT_OK

    @staticmethod
    def oracle(args, settings):
        spec = load_domain(args.domain, settings)
        resolution = args.resolution or settings["raster_resolution"]
        graph = raster_oracle(spec, resolution)
        if args.out:
            Util.dump_json(envelope(graph.to_json(), settings, "oracle"),
                           args.out)
        return OrderedDict([("resolution", resolution),
                            ("graph", graph.to_json())]), EXIT_OK

    @staticmethod
    def render(args, settings):
        spec = load_domain(args.domain, settings)
        graph = load_vdigraph(args.graph) if args.graph else None
        render_svg(args.svg, spec, graph)
        return OrderedDict([("svg", args.svg)]), EXIT_OK


def _error_document(e, kind):
    doc = OrderedDict([("ok", False), ("error", kind),
                       ("message", getattr(e, "message", str(e)))])
    location = getattr(e, "location", None)
    if location is not None:
        doc["location"] = location
    if isinstance(e, RealizationError):
        doc["stage"] = e.stage
        doc["diagnostics"] = e.diagnostics
    return doc


def run(argv=None, stdout=None):
    """
    :param argv: arguments without the program name
    :return: the exit code
    """
    stdout = stdout or sys.stdout
    try:
        args = PrkitArgumentParser().parse_args(argv)
    except ArgumentParserError:
        return EXIT_INVALID
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format=LOG_FORMAT, stream=sys.stderr)
    try:
        settings = make_settings(args)
    except SettingsError as e:
        print(json.dumps({"ok": False, "error": "settings",
                          "message": str(e)}), file=stdout)
        return EXIT_INVALID
    command = getattr(Commands, args.command)
    try:
        with Util.stage_timer(args.command):
            doc, code = command(args, settings)
    except SCHEMA_ERRORS as e:
        doc, code = _error_document(e, "schema"), EXIT_INVALID
    except PrkitError as e:
        log.error(str(e))
        doc, code = _error_document(e, type(e).__name__), EXIT_ERROR
    except Exception as e:
        log.exception("Unexpected failure")
        doc, code = _error_document(e, type(e).__name__), EXIT_ERROR
    if args.command == "lift" and getattr(args, "text", False) and \
            code == EXIT_OK:
        stdout.write("".join(eq["text"] + "\n" for eq in doc["equations"]))
        return code
    stdout.write(Util.dump_json(envelope(doc, settings, args.command)))
    return code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
