"""DOT and SVG output for domains and V-digraphs"""
import logging

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.collections import LineCollection  # noqa: E402

from prkit.polyalg import ZeroPolynomialError  # noqa: E402
from prkit.util import Util  # noqa: E402

log = logging.getLogger(__name__)

# Figure size in inches at 100 dpi; curves 1.2pt, graph edges 1.5pt
FIGURE_SIZE = (8, 6)
CURVE_WIDTH = 1.2
EDGE_WIDTH = 1.5
CURVE_COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                "#8c564b", "#e377c2", "#7f7f7f"]


def _value_text(value):
    if hasattr(value, "lo"):
        if value.lo == value.hi:
            return Util.format_fraction(value.lo)
        return "%.6g" % float(value)
    return Util.format_fraction(value)


def to_dot(g, name="prgraph"):
    """
    :param g: VDigraph
    :return: Graphviz source with one node per vertex labelled by its value
    and one arc per edge labelled by its id
    """
    lines = ['digraph "%s" {' % name, "  rankdir=LR;"]
    for v, value in g.values.items():
        lines.append('  "%s" [label="%s\\nV=%s"];' % (v, v,
                                                     _value_text(value)))
    for eid, (src, dst) in g.edges.items():
        lines.append('  "%s" -> "%s" [label="%s"];' % (src, dst, eid))
    lines.append("}")
    return "\n".join(lines) + "\n"


def curve_points(f, box, columns=256):
    """
    Zero set of f inside the box, sampled by isolating the real roots of
    f(t, y) on evenly spaced rational columns t.
    :return: list of (x, y) floats
    """
    out = []
    width = (box.x1 - box.x0) / columns
    for k in range(columns + 1):
        t = box.x0 + k * width
        try:
            roots = f.restrict_x(t).isolate(box.y_interval)
        except ZeroPolynomialError:
            # the column is a component of the curve
            continue
        for root in roots:
            out.append((float(t), float(root.refine(width / 4))))
    return out


def _graph_segments(g, heights, default_y):
    segments = []
    for src, dst in g.edges.values():
        a = (float(g.values[src]), heights.get(src, default_y))
        b = (float(g.values[dst]), heights.get(dst, default_y))
        segments.append([a, b])
    return segments


def render_svg(path, spec=None, graph=None, title=None, columns=256):
    """
    Writes an SVG with the box, the zero set of every curve, the basepoint
    and, when given, the graph drawn at its vertex values. Vertices without
    a recorded height sit on the middle of the box.
    """
    plt.rcParams["svg.hashsalt"] = "prkit"
    fig, ax = plt.subplots(figsize=FIGURE_SIZE)
    try:
        if spec is not None:
            box = spec.box
            x0, x1, y0, y1 = map(float, (box.x0, box.x1, box.y0, box.y1))
            ax.plot([x0, x1, x1, x0, x0], [y0, y0, y1, y1, y0],
                    color="black", linewidth=0.6)
            for k, curve in enumerate(spec.curves):
                pts = curve_points(curve.f, box, columns)
                if pts:
                    xs, ys = zip(*pts)
                    ax.plot(xs, ys, linestyle="none", marker=".",
                            markersize=CURVE_WIDTH,
                            color=CURVE_COLORS[k % len(CURVE_COLORS)],
                            label=curve.id)
            ax.plot([float(spec.basepoint[0])], [float(spec.basepoint[1])],
                    marker="*", color="black", linestyle="none",
                    label="basepoint")
            middle = float((box.y0 + box.y1) / 2)
        else:
            middle = 0.0
        if graph is not None:
            heights = getattr(graph, "heights", {}) or {}
            lines = LineCollection(_graph_segments(graph, heights, middle),
                                   colors="#444444", linewidths=EDGE_WIDTH)
            ax.add_collection(lines)
            for v, value in graph.values.items():
                x, y = float(value), heights.get(v, middle)
                ax.plot([x], [y], marker="o", color="#444444")
                ax.annotate(v, (x, y), textcoords="offset points",
                            xytext=(3, 3), fontsize=8)
            ax.autoscale()
        ax.set_aspect("equal", adjustable="datalim")
        if title:
            ax.set_title(title)
        if spec is not None:
            ax.legend(loc="upper right", fontsize=8)
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    log.info("Wrote %s" % path)
    return path

