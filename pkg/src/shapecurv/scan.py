"""Curvature sweeps over collinear charts and their CSV/JSON encodings."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from .curvature import inequality_sides, sectional_curvature
from .errors import CollisionError
from .shape import CollinearChart, normal_plane_frame, tangent_plane_frame

COLUMNS = (
    "status",
    "phi",
    "theta",
    "plane",
    "k",
    "term_first_partials",
    "term_grad_norm",
    "term_laplacian",
    "term_oneill",
    "u_l",
    "lhs",
    "rhs",
)

FRAMES = {"normal": normal_plane_frame, "tangent": tangent_plane_frame}


@dataclass(frozen=True)
class ScanRecord:
    status: str
    phi: float
    theta: float
    plane: str
    k: float | None = None
    term_first_partials: float | None = None
    term_grad_norm: float | None = None
    term_laplacian: float | None = None
    term_oneill: float | None = None
    u_l: float | None = None
    lhs: float | None = None
    rhs: float | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def on_collinear_circle(theta: float) -> bool:
    return abs(theta - math.pi / 2) < 1e-12


def scan_record(phi: float, theta: float, plane: str = "normal") -> ScanRecord:
    try:
        pair = FRAMES[plane](CollinearChart(phi, theta))
    except CollisionError:
        return ScanRecord("collision", phi, theta, plane)
    b = sectional_curvature(pair)
    lhs = rhs = None
    if plane == "normal" and on_collinear_circle(theta):
        sides = inequality_sides(phi)
        lhs, rhs = sides.lhs, sides.rhs
    return ScanRecord(
        "ok",
        phi,
        theta,
        plane,
        float(b.k),
        float(b.term_first_partials),
        float(b.term_grad_norm),
        float(b.term_laplacian),
        float(b.term_oneill),
        float(b.u_l),
        None if lhs is None else float(lhs),
        None if rhs is None else float(rhs),
    )


def phi_grid(phi_min: float, phi_max: float, samples: int) -> np.ndarray:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    return np.linspace(phi_min, phi_max, samples)


def run_scan(
    theta: float,
    phi_min: float,
    phi_max: float,
    samples: int,
    plane: str = "normal",
    workers: int = 1,
) -> list[ScanRecord]:
    """One record per grid angle, in grid order regardless of ``workers``."""
    if plane not in FRAMES:
        raise ValueError(f"unknown plane {plane!r}")
    phis = [float(x) for x in phi_grid(phi_min, phi_max, samples)]
    job = lambda phi: scan_record(phi, theta, plane)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, phis))
    return [job(phi) for phi in phis]


# -- serialization ---------------------------------------------------------


def fmt_number(x) -> str:
    """17 significant digits: exact round trip for doubles."""
    return "" if x is None else format(float(x), ".17g")


def _cell(record: ScanRecord, name: str) -> str:
    v = getattr(record, name)
    return v if isinstance(v, str) else fmt_number(v)


def to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow([_cell(r, c) for c in COLUMNS])
    return buf.getvalue()


def to_json(records) -> str:
    rows = []
    for r in records:
        items = []
        for c in COLUMNS:
            v = getattr(r, c)
            if isinstance(v, str):
                tok = json.dumps(v)
            elif v is None:
                tok = "null"
            else:
                tok = fmt_number(v)
            items.append(f"{json.dumps(c)}: {tok}")
        rows.append("  {" + ", ".join(items) + "}")
    return "[\n" + ",\n".join(rows) + "\n]\n"


def _parse_value(name: str, v):
    if name in ("status", "plane"):
        return v
    if v is None or v == "":
        return None
    return float(v)


def from_csv(text: str) -> list[ScanRecord]:
    reader = csv.DictReader(io.StringIO(text))
    return [ScanRecord(**{c: _parse_value(c, row[c]) for c in COLUMNS}) for row in reader]


def from_json(text: str) -> list[ScanRecord]:
    names = {f.name for f in fields(ScanRecord)}
    return [ScanRecord(**{k: _parse_value(k, v) for k, v in row.items() if k in names}) for row in json.loads(text)]
