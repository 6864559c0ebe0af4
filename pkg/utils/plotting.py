import logging
import math
import os

import altair as alt
import pandas as pd

from utils.errors import InputError
from utils.seifert_core import SignatureProfile

LOGGER = logging.getLogger(__name__)

TABLE_COLUMNS = ["breakpoint", "left", "right", "jump", "value"]
CHART_FORMATS = (".svg", ".html", ".json")


def profile_table(profile: SignatureProfile) -> pd.DataFrame:
    """
    One row per breakpoint with a nonzero jump, in angle order.

    Columns: breakpoint (exact rendering), left and right arc values, jump = right − left,
    and the value of σ at the breakpoint itself.
    """
    rows = []
    lefts = profile.left_values()
    for i, angle in enumerate(profile.breakpoints):
        if not profile.jumps[i]:
            continue
        rows.append({
            "breakpoint": angle.render(),
            "left": lefts[i],
            "right": profile.interval_values[i],
            "jump": profile.jumps[i],
            "value": profile.point_values[i],
        })
    return pd.DataFrame(rows, columns=TABLE_COLUMNS)


def format_table(table: pd.DataFrame) -> str:
    if table.empty:
        return ""
    return table.to_string(index=False)


def arcs_frame(profile: SignatureProfile) -> pd.DataFrame:
    return pd.DataFrame(profile.arcs(), columns=["x", "x2", "y"])


def breakpoints_frame(profile: SignatureProfile) -> pd.DataFrame:
    return pd.DataFrame({
        "x": [b.to_float() for b in profile.breakpoints],
        "label": [b.render() for b in profile.breakpoints],
    })


def step_chart(profile: SignatureProfile, title: str = "signature function") -> alt.LayerChart:
    """
    Step plot of σ over [0, 2π): one horizontal rule per arc and a dashed rule per breakpoint.

    The arc through 0 is drawn as its two pieces on either side of 0.
    """
    x_scale = alt.Scale(domain=[0, 2 * math.pi])
    arcs = alt.Chart(arcs_frame(profile)).mark_rule(strokeWidth=2).encode(
        x=alt.X("x:Q", title="θ", scale=x_scale),
        x2="x2:Q",
        y=alt.Y("y:Q", title="σ"),
    )
    markers = alt.Chart(breakpoints_frame(profile)).mark_rule(strokeDash=[4, 4], color="gray").encode(
        x=alt.X("x:Q", scale=x_scale),
        tooltip=["label:N"],
    )
    return alt.layer(arcs, markers).properties(title=title)


def save_step_chart(chart: alt.LayerChart, path: str):
    """Writes the chart as .svg (through vl-convert), .html or .json."""
    suffix = os.path.splitext(path)[1].lower()
    if suffix not in CHART_FORMATS:
        raise InputError(f"plot file must end in one of {', '.join(CHART_FORMATS)}: {path}")
    chart.save(path)
    LOGGER.info("plot written path=%s", path)
