"""House style: method-stable colors and markers, fixed rc settings.

Every method identifier always maps to the same color and marker, no matter
which subset of methods a figure shows, so two figures rendered months apart
stay visually comparable and image diffs are meaningful.
"""

from __future__ import annotations

import colorsys
import hashlib

METHOD_COLORS = {
    "GREEDY_COLORING": "#d62728",
    "LDG": "#2ca02c",
    "AP_EIG": "#1f77b4",
    "AP_SVD": "#17becf",
    "DIRAP_EIG": "#9467bd",
    "DIRAP_SVD": "#e377c2",
    "ALTMIN": "#ff7f0e",
}

METHOD_MARKERS = {
    "GREEDY_COLORING": "s",
    "LDG": "^",
    "AP_EIG": "o",
    "AP_SVD": "D",
    "DIRAP_EIG": "v",
    "DIRAP_SVD": "P",
    "ALTMIN": "X",
}

# line style cycles with the fixed parameter (sorted order), so one figure
# can overlay several p values per method and stay readable
PARAM_LINESTYLES = ("-", "--", ":", "-.")

RC = {
    "figure.figsize": (7.0, 4.5),
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
    "svg.hashsalt": "benchplots",
    # keep SVG text as text so method names stay searchable in the output
    "svg.fonttype": "none",
}


def method_color(method: str) -> str:
    """House color; unknown identifiers get a stable hash-derived hue."""
    try:
        return METHOD_COLORS[method]
    except KeyError:
        digest = hashlib.sha256(method.encode("utf-8")).digest()
        hue = digest[0] / 255.0
        r, g, b = colorsys.hls_to_rgb(hue, 0.42, 0.65)
        return f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}"


def method_marker(method: str) -> str:
    return METHOD_MARKERS.get(method, ".")


def param_linestyle(index: int) -> str:
    return PARAM_LINESTYLES[index % len(PARAM_LINESTYLES)]
