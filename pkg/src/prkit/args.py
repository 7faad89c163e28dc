"""This module handles argument parsing"""

from __future__ import print_function

from sys import stderr
import argparse

from prkit.default_param import KNOBS
from prkit.util import PrkitError

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


class ArgumentParserError(PrkitError):
    """Represents argument parsing errors"""
    pass


def key_value(text):
    """Parses a --config KEY=VALUE item"""
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError("expected KEY=VALUE, got " + text)
    return key.strip(), value


class ArgumentParser(argparse.ArgumentParser):
    """Overrides the default ArgumentParser error"""

    @staticmethod
    def make_flag(param):
        return "--" + param.replace("_", "-")

    @staticmethod
    def make_help_msg(desc):
        if isinstance(desc, tuple):
            return str(desc[1]).replace('\r\n', '').rstrip('.') + \
                   ". Default: " + str(desc[0]) + "."
        return desc

    def error(self, message):
        """Overwrites default error function"""
        print("Error: " + message, file=stderr)
        self.print_usage(stderr)
        raise ArgumentParserError("ArgumentParserError", message)


class PrkitArgumentParser(ArgumentParser):
    """
    Sets up the subcommands. Every subcommand shares the flags of
    common_flags().
    """
    SUBCOMMANDS = ["validate", "reeb", "realize", "compare", "lift",
                   "oracle", "render"]

    @staticmethod
    def common_flags():
        common = ArgumentParser(add_help=False)
        for knob in ("jobs", "seed", "refine_depth"):
            common.add_argument(ArgumentParser.make_flag(knob), type=int,
                                dest=knob, default=None,
                                help=ArgumentParser.make_help_msg(
                                    KNOBS[knob]))
        common.add_argument("--log-level", choices=LOG_LEVELS,
                            default="WARNING", help="Default: WARNING.")
        common.add_argument("--config", type=key_value, action="append",
                            default=[], metavar="KEY=VALUE",
                            help="Override any setting; repeatable")
        return common

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("prog", "prkit")
        super(PrkitArgumentParser, self).__init__(*args, **kwargs)
        common = PrkitArgumentParser.common_flags()
        sub = self.add_subparsers(dest="command", metavar="COMMAND",
                                  parser_class=ArgumentParser)
        sub.required = True

        cmd = sub.add_parser("validate", parents=[common],
                             help="Check the refined domain conditions")
        cmd.add_argument("--domain", required=True,
                         help="Domain JSON path or fixture:<name>")
        cmd.add_argument("--report", help="Also write the report here")

        cmd = sub.add_parser("reeb", parents=[common],
                             help="Poincare-Reeb V-digraph of a domain")
        cmd.add_argument("--domain", required=True)
        cmd.add_argument("--out", help="Graph JSON output path")
        cmd.add_argument("--dot", help="Graphviz output path")
        cmd.add_argument("--svg", help="SVG output path")

        cmd = sub.add_parser("realize", parents=[common],
                             help="Realize an embedded graph as a domain")
        cmd.add_argument("--graph", required=True,
                         help="Embedded graph JSON path or fixture:<name>")
        cmd.add_argument("--mode", choices=["algebraic", "piecewise"],
                         default="algebraic")
        cmd.add_argument("--max-degree", type=int, dest="max_degree")
        cmd.add_argument("--out", help="Domain JSON output path")
        cmd.add_argument("--report", help="Realization report output path")
        cmd.add_argument("--svg", help="SVG output path")

        cmd = sub.add_parser("compare", parents=[common],
                             help="Isomorphism of two V-digraphs")
        cmd.add_argument("first")
        cmd.add_argument("second")
        cmd.add_argument("--weak", action="store_true",
                         help="Compare after contracting degree-2 vertices")

        cmd = sub.add_parser("lift", parents=[common],
                             help="Emit the lifted polynomial system")
        cmd.add_argument("--domain", required=True)
        cmd.add_argument("--lift", required=True, help="Lift JSON path")
        cmd.add_argument("--out", help="Output path")
        cmd.add_argument("--text", action="store_true",
                         help="Print equations as plain text")

        cmd = sub.add_parser("oracle", parents=[common],
                             help="Raster approximation of the PR graph")
        cmd.add_argument("--domain", required=True)
        cmd.add_argument("--resolution", type=int, default=None,
                         help=ArgumentParser.make_help_msg(
                             KNOBS["raster_resolution"]))
        cmd.add_argument("--out", help="Graph JSON output path")

        cmd = sub.add_parser("render", parents=[common],
                             help="Draw a domain and optionally a graph")
        cmd.add_argument("--domain", required=True)
        cmd.add_argument("--graph", help="V-digraph JSON to overlay")
        cmd.add_argument("--svg", required=True)
