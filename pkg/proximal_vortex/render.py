"""
SVG 1.1 drawings of planar vortexes.

Element order is fixed: cycle polygons outermost first, then bridge lines,
then one circle per vertex in ascending id. All numbers are exact grid
decimals, so the same vortex always renders to the same bytes.
"""
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Union

from .complex import PlanarVortex

SVG_NS = "http://www.w3.org/2000/svg"

# outermost first; deeper cycles cycle through the palette
_FILLS = ("#c8ecc8", "#e6e6e6", "#d4e4f7", "#f7e4d4")
_HOLE_FILL = "#ffffff"


def render_svg(v: PlanarVortex) -> str:
    q = v.quantum
    xs = [p[0] for p in (v.position(i) for i in v.vertex_ids)]
    # SVG y grows downwards
    ys = [-p[1] for p in (v.position(i) for i in v.vertex_ids)]
    width = max(xs) - min(xs)
    height = max(ys) - min(ys)
    extent = max(width, height, 1)
    margin = max(1, -(-extent * 5 // 100))
    radius = max(1, -(-extent // 100))
    stroke = max(1, -(-extent // 400))

    def num(k: int) -> str:
        return q.to_text(k)

    svg = ET.Element(
        "svg",
        {
            "xmlns": SVG_NS,
            "version": "1.1",
            "viewBox": " ".join(
                num(k)
                for k in (
                    min(xs) - margin,
                    min(ys) - margin,
                    width + 2 * margin,
                    height + 2 * margin,
                )
            ),
        },
    )
    if v.name:
        ET.SubElement(svg, "title").text = v.name

    for depth, cycle in enumerate(v.cycles):
        fill = _FILLS[depth % len(_FILLS)] if cycle.filled else _HOLE_FILL
        points = " ".join(
            f"{num(x)},{num(-y)}" for x, y in (v.position(i) for i in cycle.vertex_ids)
        )
        ET.SubElement(
            svg,
            "polygon",
            {
                "points": points,
                "fill": fill,
                "stroke": "#000000",
                "stroke-width": num(stroke),
                "data-cycle": str(depth),
            },
        )

    for br in v.bridges:
        (x1, y1), (x2, y2) = v.position(br.a), v.position(br.b)
        ET.SubElement(
            svg,
            "line",
            {
                "x1": num(x1),
                "y1": num(-y1),
                "x2": num(x2),
                "y2": num(-y2),
                "stroke": "#000000",
                "stroke-width": num(stroke),
                "data-bridge": f"{br.a}-{br.b}",
            },
        )

    bridge_ends = {e for br in v.bridges for e in br.endpoints}
    for vid in v.vertex_ids:
        x, y = v.position(vid)
        ET.SubElement(
            svg,
            "circle",
            {
                "cx": num(x),
                "cy": num(-y),
                "r": num(radius),
                "fill": "#ff0000" if vid in bridge_ends else "#ffffff",
                "stroke": "#000000",
                "stroke-width": num(stroke),
                "data-vertex": str(vid),
            },
        )

    ET.indent(svg)
    return ET.tostring(svg, encoding="unicode") + "\n"


def write_svg(v: PlanarVortex, path: Union[str, Path]) -> Path:
    out = Path(path)
    out.write_text(render_svg(v), encoding="utf-8")
    return out
