"""Figures from sweep summaries: colourable fraction, search cost, rescaled collapse.

Each figure is written as an SVG whose ``dc:description`` metadata holds the
plotted series as JSON, next to a plain Python script that redraws it from
the summary CSV.
"""

from __future__ import annotations

import io
import json
import math
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from ._io import atomic_write_bytes, atomic_write_text  # noqa: E402
from .experiment import SummaryRow  # noqa: E402
from .scaling import CollapseFitter, curves_from_rows  # noqa: E402

KINDS = ("fraction", "cost", "collapse")

_SCRIPT = '''\
"""Redraw {kind} plot for family {family!r} from {csv_name}."""
import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

KIND = {kind!r}
FAMILY = {family!r}
EXPONENT = {exponent!r}

path = sys.argv[1] if len(sys.argv) > 1 else {csv_name!r}
series = defaultdict(list)
with open(path) as fh:
    for row in csv.DictReader(fh):
        if row["family"] == FAMILY and float(row["p"]) > 0 and row["fraction"] != "nan":
            series[(int(row["L"]), int(row["N"]))].append(row)

fig, ax = plt.subplots()
for (L, N), rows in sorted(series.items()):
    rows.sort(key=lambda r: float(r["p"]))
    p = [float(r["p"]) for r in rows]
    if KIND == "cost":
        ax.plot(p, [float(r["cost_mean"]) for r in rows], "o-", label=f"L={{L}} mean")
        ax.plot(p, [float(r["cost_median"]) for r in rows], "s--", label=f"L={{L}} median")
        continue
    x = p if KIND == "fraction" else [v * N ** EXPONENT for v in p]
    ax.plot(x, [float(r["fraction"]) for r in rows], "o-", label=f"L={{L}}")
    ax.fill_between(x, [float(r["ci_lo"]) for r in rows], [float(r["ci_hi"]) for r in rows], alpha=0.2)
ax.set_xscale("log")
if KIND != "cost":
    ax.set_ylim(0, 1)
ax.legend()
fig.savefig(sys.argv[2] if len(sys.argv) > 2 else "{stem}.replot.svg")
'''


def _series(rows: Sequence[SummaryRow], family: str, kind: str, exponent: float | None) -> list[dict]:
    out = []
    for L in sorted({r.L for r in rows if r.family == family}):
        pts = sorted((r for r in rows if r.family == family and r.L == L and r.p > 0
                      and not math.isnan(r.fraction)), key=lambda r: r.p)
        if not pts:
            continue
        N = pts[0].N
        s = {"label": f"{family}:{L}", "L": L, "N": N, "p": [r.p for r in pts]}
        if kind == "cost":
            s["mean"] = [r.cost_mean for r in pts]
            s["median"] = [r.cost_median for r in pts]
            s["max"] = [r.cost_max for r in pts]
        else:
            scale = 1.0 if kind == "fraction" else float(N) ** exponent
            s["x"] = [r.p * scale for r in pts]
            s["y"] = [r.fraction for r in pts]
            s["lo"] = [r.ci_lo for r in pts]
            s["hi"] = [r.ci_hi for r in pts]
        out.append(s)
    return out


def _draw(payload: dict) -> bytes:
    kind = payload["kind"]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for s in payload["series"]:
        if kind == "cost":
            ax.plot(s["p"], s["mean"], "o-", label=f"{s['label']} mean")
            ax.plot(s["p"], s["median"], "s--", label=f"{s['label']} median")
        else:
            ax.plot(s["x"], s["y"], "o-", label=s["label"])
            ax.fill_between(s["x"], s["lo"], s["hi"], alpha=0.2)
    ax.set_xscale("log")
    if kind == "fraction":
        ax.set_xlabel("p")
        ax.set_ylabel("fraction colourable")
    elif kind == "cost":
        ax.set_xlabel("p")
        ax.set_ylabel("search nodes visited")
    else:
        ax.set_xlabel(f"p N^{payload['exponent']:g}")
        ax.set_ylabel("fraction colourable")
    if payload["ylim"] is not None:
        ax.set_ylim(*payload["ylim"])
    if payload["series"]:
        ax.legend(fontsize="small")
    ax.set_title(f"{payload['family']} ({kind})")
    buf = io.BytesIO()
    with matplotlib.rc_context({"svg.hashsalt": "swcol", "svg.fonttype": "none"}):
        fig.savefig(buf, format="svg", metadata={
            "Date": None,
            "Title": f"{payload['family']} {kind}",
            "Description": json.dumps(payload, sort_keys=True),
        })
    plt.close(fig)
    return buf.getvalue()


def emit_plot(rows: Sequence[SummaryRow], kind: str, out_prefix, csv_name: str = "summary.csv",
              families: Sequence[str] | None = None, exponent: float | None = None) -> list[Path]:
    """Write one SVG and one redraw script per family; returns the SVG paths.

    For ``kind="collapse"`` the exponent defaults to the best grid exponent
    found by :class:`~swcol.scaling.CollapseFitter` for that family (0 when
    the family has fewer than two sizes). Points with ``p = 0`` are left off
    the log axis.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown plot kind {kind!r}; choose from {', '.join(KINDS)}")
    rows = list(rows)
    if not rows:
        raise ValueError("no summary rows to plot")
    fams = sorted({r.family for r in rows}) if families is None else list(families)
    written = []
    for fam in fams:
        a = exponent
        if kind == "collapse" and a is None:
            curves = curves_from_rows(rows, fam)
            a = CollapseFitter().fit(curves).exponent_ if len(curves) >= 2 else 0.0
        payload = {"kind": kind, "family": fam, "exponent": a, "xscale": "log",
                   "ylim": None if kind == "cost" else [0.0, 1.0],
                   "series": _series(rows, fam, kind, a)}
        stem = f"{out_prefix}{kind}_{fam}"
        svg = atomic_write_bytes(Path(f"{stem}.svg"), _draw(payload))
        atomic_write_text(Path(f"{stem}.py"), _SCRIPT.format(
            kind=kind, family=fam, exponent=a, csv_name=csv_name, stem=Path(stem).name))
        written.append(svg)
    return written


def read_embedded_data(svg_path) -> dict:
    """Recover the JSON payload stored in an SVG written by :func:`emit_plot`."""
    root = ET.parse(svg_path).getroot()
    for el in root.iter():
        if el.tag.endswith("}description") and el.text:
            return json.loads(el.text)
    raise ValueError(f"{svg_path}: no embedded plot data")
