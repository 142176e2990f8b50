"""Scene files (JSON), result tables (CSV) and SVG drawings of optimal sets.

Scene schema::

    {"label": "square-in-square", "unit": "mm", "normalize": false,
     "domain": {"type": "rectangle", "center": [0, 0], "width": 3.33, "height": 3.33},
     "particles": [{"type": "square", "center": [0, 0], "side": 1}]}

Shape types: ``disk`` (center, radius), ``rectangle`` (center, width,
height), ``square`` (center, side, optional angle), ``polygon`` (CCW
vertices).  ``center`` defaults to the origin.  ``unit`` is carried along
but never interpreted.
"""
from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import GeometryError, ValidationError
from .geom import ArcRegion, ConvexPolygon, Disk, Rectangle, as_body, to_region

CSV_HEADER = ("label", "param", "lambda_c", "y_c", "s_value", "config", "provenance")
SHAPE_KEYS = {
    "disk": {"radius"},
    "rectangle": {"width", "height"},
    "square": {"side"},
    "polygon": {"vertices"},
}


@dataclass(frozen=True)
class Scene:
    domain: object
    particles: tuple = ()
    normalize: bool = False
    label: str = ""
    unit: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "particles", tuple(self.particles))

    @property
    def particle_area(self) -> float:
        return math.fsum(as_body(p).area for p in self.particles)

    def transformed(self, factor: float = 1.0, offset=(0.0, 0.0)) -> "Scene":
        return Scene(
            self.domain.transformed(factor, offset),
            tuple(p.transformed(factor, offset) for p in self.particles),
            self.normalize,
            self.label,
            self.unit,
        )

    def normalized(self) -> "Scene":
        """Rescaled about the origin so the particles have unit total area."""
        factor = 1.0 / math.sqrt(self.particle_area)
        if abs(factor - 1.0) < 1e-14:
            return self
        return self.transformed(factor)


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------


def _number(obj, key, ptr, positive=False):
    if key not in obj:
        raise ValidationError(f"missing field {key!r}", ptr)
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ValidationError(f"{key} must be a finite number", f"{ptr}/{key}")
    if positive and v <= 0:
        raise ValidationError(f"{key} must be positive", f"{ptr}/{key}")
    return float(v)


def _point(v, ptr):
    if not (isinstance(v, list) and len(v) == 2):
        raise ValidationError("expected a pair [x, y]", ptr)
    for i, c in enumerate(v):
        if isinstance(c, bool) or not isinstance(c, (int, float)) or not math.isfinite(c):
            raise ValidationError("coordinate must be a finite number", f"{ptr}/{i}")
    return (float(v[0]), float(v[1]))


def _shape(obj, ptr):
    if not isinstance(obj, dict):
        raise ValidationError("shape must be an object", ptr)
    kind = obj.get("type")
    if kind not in SHAPE_KEYS:
        raise ValidationError(f"unknown shape type {kind!r}; expected one of {sorted(SHAPE_KEYS)}", f"{ptr}/type")
    allowed = SHAPE_KEYS[kind] | {"type", "center", "angle"}
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ValidationError(f"unexpected field {extra[0]!r}", f"{ptr}/{extra[0]}")
    center = _point(obj.get("center", [0, 0]), f"{ptr}/center")
    try:
        if kind == "disk":
            return Disk(center, _number(obj, "radius", ptr, True))
        if kind == "rectangle":
            return Rectangle(center, _number(obj, "width", ptr, True), _number(obj, "height", ptr, True))
        if kind == "square":
            side = _number(obj, "side", ptr, True)
            angle = _number(obj, "angle", ptr) if "angle" in obj else 0.0
            if angle == 0.0:
                return Rectangle(center, side, side)
            return ConvexPolygon.square(center, side, angle)
        verts = obj.get("vertices")
        if not isinstance(verts, list):
            raise ValidationError("vertices must be a list of points", f"{ptr}/vertices")
        return ConvexPolygon(tuple(_point(v, f"{ptr}/vertices/{i}") for i, v in enumerate(verts)))
    except ValidationError as exc:
        if exc.pointer:
            raise
        raise ValidationError(str(exc), ptr) from None


def shape_to_json(shape) -> dict:
    if isinstance(shape, Disk):
        return {"type": "disk", "center": list(shape.center), "radius": shape.radius}
    if isinstance(shape, Rectangle):
        return {"type": "rectangle", "center": list(shape.center), "width": shape.width, "height": shape.height}
    if isinstance(shape, ConvexPolygon):
        return {"type": "polygon", "vertices": [list(v) for v in shape.vertices]}
    raise GeometryError(f"cannot serialise {type(shape).__name__}")


def validate_scene(scene: Scene) -> None:
    """Raise ValidationError (with a JSON pointer) unless particles are disjoint and interior."""
    dom = as_body(scene.domain)
    bodies = [as_body(p) for p in scene.particles]
    if not bodies:
        raise ValidationError("scene has no particles", "/particles")
    for i, b in enumerate(bodies):
        if float(dom.signed_distance(b.core).max()) + b.radius >= 0:
            raise ValidationError("particle touches or leaves the domain", f"/particles/{i}")
    for i in range(len(bodies)):
        for j in range(i + 1, len(bodies)):
            if bodies[i].distance_to(bodies[j]) <= 0:
                raise ValidationError(f"particle overlaps or touches particle {i}", f"/particles/{j}")


def parse_scene(text: str | bytes) -> Scene:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}", "") from None
    if not isinstance(doc, dict):
        raise ValidationError("scene must be a JSON object", "")
    extra = sorted(set(doc) - {"label", "unit", "normalize", "domain", "particles"})
    if extra:
        raise ValidationError(f"unexpected field {extra[0]!r}", f"/{extra[0]}")
    if "domain" not in doc:
        raise ValidationError("missing field 'domain'", "")
    parts = doc.get("particles")
    if not isinstance(parts, list) or not parts:
        raise ValidationError("particles must be a non-empty list", "/particles")
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise ValidationError("label must be a string", "/label")
    unit = doc.get("unit")
    if unit is not None and not isinstance(unit, str):
        raise ValidationError("unit must be a string", "/unit")
    norm = doc.get("normalize", False)
    if not isinstance(norm, bool):
        raise ValidationError("normalize must be true or false", "/normalize")
    scene = Scene(
        _shape(doc["domain"], "/domain"),
        tuple(_shape(p, f"/particles/{i}") for i, p in enumerate(parts)),
        norm,
        label,
        unit,
    )
    validate_scene(scene)
    return scene.normalized() if norm else scene


def dump_scene(scene: Scene) -> str:
    doc = {"label": scene.label}
    if scene.unit is not None:
        doc["unit"] = scene.unit
    doc["normalize"] = scene.normalize
    doc["domain"] = shape_to_json(scene.domain)
    doc["particles"] = [shape_to_json(p) for p in scene.particles]
    return json.dumps(doc, indent=2)


def load_scene(path) -> Scene:
    return parse_scene(Path(path).read_bytes())


def save_scene(scene: Scene, path) -> None:
    Path(path).write_text(dump_scene(scene) + "\n", encoding="utf-8")


# --------------------------------------------------------------------------
# example scenes
# --------------------------------------------------------------------------


def example_scene(case) -> Scene:
    """Scene of an analytic example case (see ``analytic.KINDS``)."""
    p = case.parameters
    k = case.kind
    rho = 1.0 / math.sqrt(math.pi)
    label = k + " " + " ".join(f"{n}={v:g}" for n, v in sorted(p.items()))
    unit_square = Rectangle((0.0, 0.0), 1.0, 1.0)
    if k in ("disk-in-disk", "square-in-disk"):
        part = Disk((0.0, 0.0), rho) if k == "disk-in-disk" else unit_square
        return Scene(Disk((0.0, 0.0), p["R"]), (part,), label=label)
    if k in ("square-in-square", "disk-in-square"):
        part = Disk((0.0, 0.0), rho) if k == "disk-in-square" else unit_square
        return Scene(Rectangle((0.0, 0.0), p["L"], p["L"]), (part,), label=label)
    if k == "rectangle-in-square":
        b = p["beta"]
        return Scene(Rectangle((0.0, 0.0), p["L"], p["L"]), (Rectangle((0.0, 0.0), 1.0 / b, b),), label=label)
    if k == "offset-square":
        x = 0.5 * p["L"] - p["d"] - 0.5
        return Scene(Rectangle((0.0, 0.0), p["L"], p["L"]), (Rectangle((x, 0.0), 1.0, 1.0),), label=label)
    if k == "two-squares":
        h = 0.5 * p["d"]
        parts = (Rectangle((-h, 0.0), 1.0, 1.0), Rectangle((h, 0.0), 1.0, 1.0))
        return Scene(Disk((0.0, 0.0), p["R"]), parts, label=label)
    if k == "periodic-disks":
        L, n, a, d = p["L"], int(p["N"]), p["a"], p["delta"]
        s = (L - 2 * (a + d)) / (n - 1)
        xs = [-0.5 * L + a + d + i * s for i in range(n)]
        parts = tuple(Disk((x, y), d) for y in xs for x in xs)
        return Scene(Rectangle((0.0, 0.0), L, L), parts, label=label)
    raise GeometryError(f"no scene for kind {k!r}")


# --------------------------------------------------------------------------
# results
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ResultRecord:
    label: str
    y_c: float
    lambda_c: float
    s_value: float
    config: str
    provenance: str = "geometric"
    param: float | None = None
    measures: Mapping[str, float] = field(default_factory=dict)
    timestamp: float = field(default_factory=time.time, compare=False)

    def __post_init__(self):
        if self.provenance not in ("geometric", "oracle", "analytic"):
            raise ValidationError(f"unknown provenance {self.provenance!r}", "/provenance")
        for k in ("y_c", "lambda_c", "s_value"):
            if not math.isfinite(getattr(self, k)):
                raise ValidationError(f"{k} is not finite", f"/{k}")

    @classmethod
    def from_solution(cls, solution, label="", param=None, provenance="geometric") -> "ResultRecord":
        """Record for a geometric ``YieldSolution`` or an analytic ``ExampleSolution``."""
        if hasattr(solution, "omega_c") and hasattr(solution.omega_c, "area"):
            om, o1 = solution.omega_c, solution.omega_1c
        else:
            om = o1 = None
        measures = {}
        if om is not None:
            measures = {
                "omega_c_area": om.area,
                "omega_c_perimeter": om.perimeter,
                "omega_1c_area": o1.area,
                "omega_1c_perimeter": o1.perimeter,
            }
        return cls(label, solution.y_c, solution.lambda_c, solution.s_value, solution.config, provenance, param, measures)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def write_results(records: Iterable[ResultRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow([_fmt(getattr(r, k)) for k in CSV_HEADER])


def read_results(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


# --------------------------------------------------------------------------
# SVG
# --------------------------------------------------------------------------


def _f(x: float) -> str:
    return repr(float(x))


def region_path(region: ArcRegion) -> str:
    """SVG path data in model coordinates; arcs keep their exact radii."""
    out = []
    for lp in region.loops:
        e0 = lp.edges[0]
        out.append(f"M {_f(e0.start.x)} {_f(e0.start.y)}")
        for e in lp.edges:
            if e.is_arc:
                large = 1 if abs(e.sweep) > math.pi else 0
                sweep = 1 if e.sweep > 0 else 0
                r = _f(e.radius)
                out.append(f"A {r} {r} 0 {large} {sweep} {_f(e.end.x)} {_f(e.end.y)}")
            else:
                out.append(f"L {_f(e.end.x)} {_f(e.end.y)}")
        out.append("Z")
    return " ".join(out)


def _bbox(regions: Sequence[ArcRegion]):
    b = [r.bbox for r in regions]
    return min(x[0] for x in b), min(x[1] for x in b), max(x[2] for x in b), max(x[3] for x in b)


def render_svg(solution, scene: Scene, path, width: int = 600) -> None:
    """Draw the domain outline, Omega_c, Omega_1c (bridges) and the particles.

    Drawing order puts the particles over ``Omega_1c`` so that only the
    bridges keep the second fill.  A y-flip keeps model orientation, so the
    arc sweep flag is 1 for counter-clockwise arcs.
    """
    dom = to_region(scene.domain)
    parts = [to_region(p) for p in scene.particles]
    x0, y0, x1, y1 = _bbox([dom])
    pad = 0.02 * max(x1 - x0, y1 - y0)
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
    height = int(round(width * (y1 - y0) / (x1 - x0)))
    style = 'vector-effect="non-scaling-stroke" fill-rule="nonzero"'
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="{_f(x0)} {_f(-y1)} {_f(x1 - x0)} {_f(y1 - y0)}">',
        f"<title>{scene.label or 'scene'}</title>",
        '<g transform="scale(1,-1)">',
        f'<path id="omega_c" d="{region_path(solution.omega_c.set)}" fill="#9ecae1" stroke="#3182bd" stroke-width="1" {style}/>',
        f'<path id="omega_1c" d="{region_path(solution.omega_1c.set)}" fill="#fdae6b" stroke="#e6550d" stroke-width="1" {style}/>',
    ]
    for i, p in enumerate(parts):
        lines.append(f'<path id="particle_{i}" d="{region_path(p)}" fill="#636363" stroke="none" {style}/>')
    lines.append(f'<path id="domain" d="{region_path(dom)}" fill="none" stroke="#000000" stroke-width="1.5" {style}/>')
    lines += ["</g>", "</svg>"]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
