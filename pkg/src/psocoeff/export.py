"""CSV/JSON emission of trajectories and rasters (plot-ready, no plotting)."""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable

from .analysis import RasterCell

TRAJECTORY_HEADER = ("t", "x", "v")
RASTER_HEADER = ("phi", "w", "class", "spectral_radius")


def fmt(value: float, digits: int = 17) -> str:
    return format(float(value), f".{digits}g")


def trajectory_rows(xs) -> list[dict]:
    xs = [float(x) for x in xs]
    return [
        {"t": t, "x": x, "v": None if t == 0 else x - xs[t - 1]}
        for t, x in enumerate(xs)
    ]


def trajectory_csv(xs, digits: int = 17) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRAJECTORY_HEADER)
    for row in trajectory_rows(xs):
        v = "" if row["v"] is None else fmt(row["v"], digits)
        writer.writerow([row["t"], fmt(row["x"], digits), v])
    return buf.getvalue()


def trajectory_json(xs) -> str:
    return json.dumps(trajectory_rows(xs))


def raster_rows(cells: Iterable[RasterCell]) -> list[dict]:
    return [
        {"phi": c.phi, "w": c.w, "class": c.behavior.value, "spectral_radius": c.spectral_radius}
        for c in cells
    ]


def raster_csv(cells: Iterable[RasterCell], digits: int = 17) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RASTER_HEADER)
    for c in cells:
        writer.writerow([fmt(c.phi, digits), fmt(c.w, digits), c.behavior.value, fmt(c.spectral_radius, digits)])
    return buf.getvalue()


def raster_json(cells: Iterable[RasterCell]) -> str:
    return json.dumps(raster_rows(cells))


def parse_trajectory_csv(text: str) -> list[dict]:
    rows = list(csv.DictReader(io.StringIO(text)))
    return [
        {"t": int(r["t"]), "x": float(r["x"]), "v": None if r["v"] == "" else float(r["v"])}
        for r in rows
    ]


def parse_raster_csv(text: str) -> list[dict]:
    rows = list(csv.DictReader(io.StringIO(text)))
    return [
        {"phi": float(r["phi"]), "w": float(r["w"]), "class": r["class"], "spectral_radius": float(r["spectral_radius"])}
        for r in rows
    ]
