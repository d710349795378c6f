"""Component catalog, subdivision expansion and the chromosome gene layout.

A catalog document is JSON::

    {
      "name": "optional label",
      "cylinder_dimension": "diameter" | "radius",      # optional, default diameter
      "container": {"outer_radius": 450.0},               # optional
      "exclusion_zones": [                                # optional
        {"center": [x, y], "width": w, "height": h, "orientation": 0.0}
      ],
      "components": [
        {"id": "F1", "kind": "fuel", "geometry": "cylinder",
         "d1": 100, "mass": 15, "subdivisions": [1, 2, 3], "plate": 1},
        {"id": "E1", "kind": "energy", "geometry": "cuboid",
         "d1": 200, "d2": 200, "mass": 10, "subdivisions": [1, 2, 3]}
      ]
    }

Dimensions are mm, masses kg. A k-way subdivision splits a component into k
identical parts of 1/k the area and 1/k the mass; cuboid parts keep the
parent's aspect ratio.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterator, Mapping, Sequence

import numpy as np

from .geometry import DISK, RECTANGLE, TWO_PI, ContainerDisk, PlacedShape

__all__ = [
    "CatalogError",
    "Catalog",
    "Component",
    "SubComponent",
    "ConfigurationSpace",
    "GeneSlot",
    "GeneLayout",
    "LayoutInstance",
    "PlacedPart",
    "KINDS",
    "load_catalog",
    "parse_catalog",
    "expand_subdivisions",
    "configuration_count",
    "build_gene_layout",
    "decode",
    "occupation_rate",
    "scale_for_occupation_rate",
    "default_catalog_path",
]

KINDS = ("fuel", "energy", "diverse")
GEOMETRIES = ("cylinder", "cuboid")
PARAMETERIZATIONS = ("cartesian", "polar")

_DOC_KEYS = {"name", "cylinder_dimension", "container", "exclusion_zones", "components"}
_COMPONENT_KEYS = {"id", "kind", "geometry", "d1", "d2", "mass", "subdivisions", "plate"}
_ZONE_KEYS = {"center", "width", "height", "orientation"}


class CatalogError(ValueError):
    """Raised when a catalog document violates the schema."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class Component:
    id: str
    kind: str
    geometry: str
    d1: float
    mass: float
    subdivisions: tuple[int, ...]
    d2: float | None = None
    plate: int = 1
    d1_is_diameter: bool = True

    @property
    def is_cylinder(self) -> bool:
        return self.geometry == "cylinder"

    @property
    def radius(self) -> float:
        if not self.is_cylinder:
            raise AttributeError("cuboids have no radius")
        return self.d1 / 2.0 if self.d1_is_diameter else self.d1

    @property
    def area(self) -> float:
        if self.is_cylinder:
            return math.pi * self.radius**2
        return self.d1 * self.d2


@dataclass(frozen=True)
class SubComponent:
    parent_id: str
    kind: str
    geometry: str
    subdivision: int
    part_index: int
    mass: float
    radius: float = 0.0
    width: float = 0.0
    height: float = 0.0

    @property
    def is_cylinder(self) -> bool:
        return self.geometry == "cylinder"

    @property
    def area(self) -> float:
        if self.is_cylinder:
            return math.pi * self.radius**2
        return self.width * self.height

    @property
    def n_genes(self) -> int:
        return 2 if self.is_cylinder else 3

    def place(self, x: float, y: float, orientation: float = 0.0) -> PlacedShape:
        if self.is_cylinder:
            return PlacedShape.disk((x, y), self.radius)
        return PlacedShape.rectangle((x, y), self.width, self.height, orientation)


@dataclass(frozen=True)
class Catalog(Sequence):
    """Ordered, immutable collection of components plus optional plate data."""

    components: tuple[Component, ...]
    name: str = ""
    container_radius: float | None = None
    exclusion_zones: tuple[PlacedShape, ...] = ()

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self) -> Iterator[Component]:
        return iter(self.components)

    @property
    def total_area(self) -> float:
        return sum(c.area for c in self.components)

    @property
    def total_mass(self) -> float:
        return sum(c.mass for c in self.components)

    @property
    def space(self) -> ConfigurationSpace:
        return ConfigurationSpace(tuple(c.subdivisions for c in self.components))


def default_catalog_path(name: str = "appendix_a.json") -> str:
    return os.path.join(os.path.dirname(__file__), "data", name)


def _number(value, where, errors, positive=True):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        errors.append(f"{where}: expected a number, got {value!r}")
        return None
    if positive and value <= 0:
        errors.append(f"{where}: must be > 0, got {value!r}")
        return None
    return float(value)


def _parse_component(i, entry, d1_is_diameter, errors):
    where = f"components[{i}]"
    if not isinstance(entry, Mapping):
        errors.append(f"{where}: expected an object")
        return None
    if "id" in entry:
        where = f"components[{i}] ({entry['id']})"
    n_before = len(errors)
    unknown = sorted(set(entry) - _COMPONENT_KEYS)
    if unknown:
        errors.append(f"{where}: unknown field(s) {', '.join(unknown)}")
    for key in ("id", "kind", "geometry", "d1", "mass", "subdivisions"):
        if key not in entry:
            errors.append(f"{where}: missing field '{key}'")
    if len(errors) > n_before:
        return None

    cid = entry["id"]
    if not isinstance(cid, str) or not cid:
        errors.append(f"{where}: 'id' must be a non-empty string")
    kind = entry["kind"]
    if kind not in KINDS:
        errors.append(f"{where}: 'kind' must be one of {', '.join(KINDS)}, got {kind!r}")
    geometry = entry["geometry"]
    if geometry not in GEOMETRIES:
        errors.append(f"{where}: 'geometry' must be one of {', '.join(GEOMETRIES)}, got {geometry!r}")
    d1 = _number(entry["d1"], f"{where}: 'd1'", errors)
    mass = _number(entry["mass"], f"{where}: 'mass'", errors)
    d2 = None
    if geometry == "cuboid":
        if "d2" not in entry:
            errors.append(f"{where}: cuboid requires 'd2'")
        else:
            d2 = _number(entry["d2"], f"{where}: 'd2'", errors)
    elif geometry == "cylinder" and entry.get("d2") is not None:
        errors.append(f"{where}: cylinder must not define 'd2'")
    subs = entry["subdivisions"]
    if (
        not isinstance(subs, list)
        or not subs
        or any(isinstance(k, bool) or not isinstance(k, int) or k < 1 for k in subs)
    ):
        errors.append(f"{where}: 'subdivisions' must be a non-empty list of integers >= 1")
    elif len(set(subs)) != len(subs):
        errors.append(f"{where}: 'subdivisions' contains duplicates")
    plate = entry.get("plate", 1)
    if plate != 1:
        errors.append(f"{where}: 'plate' must be 1 (single-plate container)")
    if len(errors) > n_before:
        return None
    return Component(
        id=cid,
        kind=kind,
        geometry=geometry,
        d1=d1,
        d2=d2,
        mass=mass,
        subdivisions=tuple(subs),
        plate=1,
        d1_is_diameter=d1_is_diameter,
    )


def _parse_zone(i, entry, errors):
    where = f"exclusion_zones[{i}]"
    if not isinstance(entry, Mapping):
        errors.append(f"{where}: expected an object")
        return None
    unknown = sorted(set(entry) - _ZONE_KEYS)
    if unknown:
        errors.append(f"{where}: unknown field(s) {', '.join(unknown)}")
        return None
    center = entry.get("center")
    if not (isinstance(center, list) and len(center) == 2):
        errors.append(f"{where}: 'center' must be [x, y]")
        return None
    cx = _number(center[0], f"{where}: center x", errors, positive=False)
    cy = _number(center[1], f"{where}: center y", errors, positive=False)
    w = _number(entry.get("width"), f"{where}: 'width'", errors)
    h = _number(entry.get("height"), f"{where}: 'height'", errors)
    ang = _number(entry.get("orientation", 0.0), f"{where}: 'orientation'", errors, positive=False)
    if None in (cx, cy, w, h, ang):
        return None
    return PlacedShape.rectangle((cx, cy), w, h, ang)


def parse_catalog(doc: Mapping) -> Catalog:
    """Validate a decoded catalog document; collects every error before raising."""
    if not isinstance(doc, Mapping):
        raise CatalogError("catalog document must be a JSON object")
    errors: list[str] = []
    unknown = sorted(set(doc) - _DOC_KEYS)
    if unknown:
        errors.append(f"unknown top-level field(s) {', '.join(unknown)}")
    convention = doc.get("cylinder_dimension", "diameter")
    if convention not in ("diameter", "radius"):
        errors.append(f"'cylinder_dimension' must be 'diameter' or 'radius', got {convention!r}")
    comps = doc.get("components")
    if comps is None:
        errors.append("missing field 'components'")
        comps = []
    elif not isinstance(comps, list):
        errors.append("'components' must be a list")
        comps = []
    elif not comps:
        errors.append("catalog must contain at least one component")

    components = []
    for i, entry in enumerate(comps):
        c = _parse_component(i, entry, convention != "radius", errors)
        if c is not None:
            components.append(c)
    ids = [c.id for c in components]
    dupes = sorted({x for x in ids if ids.count(x) > 1})
    if dupes:
        errors.append(f"duplicate component id(s) {', '.join(dupes)}")

    radius = None
    if "container" in doc:
        cont = doc["container"]
        if not isinstance(cont, Mapping) or set(cont) != {"outer_radius"}:
            errors.append("'container' must be an object with exactly 'outer_radius'")
        else:
            radius = _number(cont["outer_radius"], "container: 'outer_radius'", errors)

    zones = []
    raw_zones = doc.get("exclusion_zones", [])
    if not isinstance(raw_zones, list):
        errors.append("'exclusion_zones' must be a list")
        raw_zones = []
    for i, entry in enumerate(raw_zones):
        z = _parse_zone(i, entry, errors)
        if z is not None:
            zones.append(z)

    name = doc.get("name", "")
    if not isinstance(name, str):
        errors.append("'name' must be a string")
    if errors:
        raise CatalogError(errors)
    return Catalog(tuple(components), name=name, container_radius=radius, exclusion_zones=tuple(zones))


def load_catalog(source) -> Catalog:
    """Load a catalog from a path, a JSON string, or an already decoded mapping."""
    if isinstance(source, Mapping):
        return parse_catalog(source)
    if isinstance(source, os.PathLike) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"invalid JSON: {exc}") from exc
    return parse_catalog(doc)


def expand_subdivisions(c: Component, k: int) -> list[SubComponent]:
    """Split ``c`` into ``k`` area- and mass-conserving identical parts."""
    if k not in c.subdivisions:
        raise ValueError(f"component {c.id}: subdivision {k} not admissible (allowed {list(c.subdivisions)})")
    scale = 1.0 / math.sqrt(k)
    mass = c.mass / k
    if c.is_cylinder:
        return [
            SubComponent(c.id, c.kind, c.geometry, k, j, mass, radius=c.radius * scale)
            for j in range(k)
        ]
    return [
        SubComponent(c.id, c.kind, c.geometry, k, j, mass, width=c.d1 * scale, height=c.d2 * scale)
        for j in range(k)
    ]


@dataclass(frozen=True)
class ConfigurationSpace:
    """Per-component subdivision options; a selection holds one option index per component."""

    options: tuple[tuple[int, ...], ...]

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(o) for o in self.options)

    @property
    def size(self) -> int:
        return math.prod(self.counts)

    def __len__(self) -> int:
        return len(self.options)

    def index(self, selection: Sequence[int]) -> int:
        """Mixed-radix index in [0, size) of a 0-based selection (first component most significant)."""
        idx = 0
        for choice, n in zip(selection, self.counts):
            idx = idx * n + int(choice)
        return idx

    def selection(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise ValueError(f"configuration index {index} outside [0, {self.size})")
        out = []
        for n in reversed(self.counts):
            index, r = divmod(index, n)
            out.append(r)
        return tuple(reversed(out))

    def validate(self, selection: Sequence[int]) -> None:
        if len(selection) != len(self.options):
            raise ValueError(f"selection has {len(selection)} entries, expected {len(self.options)}")
        for i, (choice, n) in enumerate(zip(selection, self.counts)):
            if not 0 <= int(choice) < n:
                raise ValueError(f"selection for component {i} is {choice}, expected 0..{n - 1}")


def configuration_count(cs: ConfigurationSpace | Catalog) -> int:
    if isinstance(cs, Catalog):
        cs = cs.space
    return cs.size


@dataclass(frozen=True)
class GeneSlot:
    component: int
    option: int
    part: SubComponent
    offset: int

    @property
    def size(self) -> int:
        return self.part.n_genes


@dataclass(frozen=True, eq=False)
class GeneLayout:
    """Mapping from every potential subcomponent to its slice of the gene vector."""

    slots: tuple[GeneSlot, ...]
    space: ConfigurationSpace
    parameterization: str
    lower: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)

    @property
    def length(self) -> int:
        return int(self.lower.shape[0])

    @property
    def n_cylinder_parts(self) -> int:
        return sum(1 for s in self.slots if s.part.is_cylinder)

    @property
    def n_cuboid_parts(self) -> int:
        return sum(1 for s in self.slots if not s.part.is_cylinder)

    @cached_property
    def arrays(self) -> dict[str, np.ndarray]:
        """Flat per-slot arrays for the compiled evaluator."""
        parts = [s.part for s in self.slots]
        return {
            "offset": np.array([s.offset for s in self.slots], dtype=np.int64),
            "component": np.array([s.component for s in self.slots], dtype=np.int64),
            "option": np.array([s.option for s in self.slots], dtype=np.int64),
            "shape": np.array([DISK if p.is_cylinder else RECTANGLE for p in parts], dtype=np.int64),
            "radius": np.array([p.radius for p in parts], dtype=np.float64),
            "hx": np.array([p.width / 2.0 for p in parts], dtype=np.float64),
            "hy": np.array([p.height / 2.0 for p in parts], dtype=np.float64),
            "mass": np.array([p.mass for p in parts], dtype=np.float64),
            "kind": np.array([KINDS.index(p.kind) for p in parts], dtype=np.int64),
        }

    def active_slots(self, selection: Sequence[int]) -> np.ndarray:
        sel = np.asarray(selection, dtype=np.int64)
        a = self.arrays
        return sel[a["component"]] == a["option"]

    def active_gene_mask(self, selection: Sequence[int]) -> np.ndarray:
        mask = np.zeros(self.length, dtype=bool)
        for slot, on in zip(self.slots, self.active_slots(selection)):
            if on:
                mask[slot.offset : slot.offset + slot.size] = True
        return mask


def build_gene_layout(catalog: Catalog, container_radius: float, parameterization: str = "cartesian") -> GeneLayout:
    """Slots ordered by catalog order, then subdivision order, then part index."""
    if parameterization not in PARAMETERIZATIONS:
        raise ValueError(f"parameterization must be one of {PARAMETERIZATIONS}, got {parameterization!r}")
    slots = []
    lower: list[float] = []
    upper: list[float] = []
    offset = 0
    for ci, comp in enumerate(catalog):
        for oi, k in enumerate(comp.subdivisions):
            for part in expand_subdivisions(comp, k):
                slots.append(GeneSlot(ci, oi, part, offset))
                if parameterization == "cartesian":
                    lower += [-container_radius, -container_radius]
                    upper += [container_radius, container_radius]
                else:
                    lower += [0.0, 0.0]
                    upper += [container_radius, TWO_PI]
                if not part.is_cylinder:
                    lower.append(0.0)
                    upper.append(TWO_PI)
                offset += part.n_genes
    return GeneLayout(
        tuple(slots),
        catalog.space,
        parameterization,
        np.array(lower, dtype=np.float64),
        np.array(upper, dtype=np.float64),
    )


@dataclass(frozen=True)
class PlacedPart:
    shape: PlacedShape
    mass: float
    kind: str
    parent_id: str


@dataclass(frozen=True)
class LayoutInstance:
    parts: tuple[PlacedPart, ...]

    def __len__(self) -> int:
        return len(self.parts)

    @property
    def shapes(self) -> list[PlacedShape]:
        return [p.shape for p in self.parts]

    def arrays(self) -> tuple[np.ndarray, ...]:
        """(shape, x, y, radius, hx, hy, angle, mass, kind) columns."""
        n = len(self.parts)
        cols = [np.empty(n, dtype=np.int64)] + [np.empty(n) for _ in range(7)] + [np.empty(n, dtype=np.int64)]
        for i, p in enumerate(self.parts):
            s = p.shape
            cols[0][i] = s.kind
            cols[1][i], cols[2][i] = s.center
            cols[3][i] = s.radius
            cols[4][i], cols[5][i] = s.half_extents
            cols[6][i] = s.orientation
            cols[7][i] = p.mass
            cols[8][i] = KINDS.index(p.kind)
        return tuple(cols)

    def moved(self, dx: float = 0.0, dy: float = 0.0, rotation: float = 0.0, pivot=(0.0, 0.0)) -> LayoutInstance:
        """Rigidly rotate about ``pivot`` then translate every part."""
        c, s = math.cos(rotation), math.sin(rotation)
        out = []
        for p in self.parts:
            x, y = p.shape.center
            x0, y0 = x - pivot[0], y - pivot[1]
            nx = pivot[0] + c * x0 - s * y0 + dx
            ny = pivot[1] + s * x0 + c * y0 + dy
            shape = replace(p.shape, center=(nx, ny), orientation=p.shape.orientation + rotation)
            out.append(replace(p, shape=shape))
        return LayoutInstance(tuple(out))


def decode(genes, selection: Sequence[int], layout: GeneLayout) -> LayoutInstance:
    """Place the parts of the selected subdivisions; genes of other slots are ignored."""
    genes = np.asarray(genes, dtype=np.float64)
    if genes.shape != (layout.length,):
        raise ValueError(f"expected {layout.length} genes, got shape {genes.shape}")
    layout.space.validate(selection)
    polar = layout.parameterization == "polar"
    parts = []
    for slot, on in zip(layout.slots, layout.active_slots(selection)):
        if not on:
            continue
        g = genes[slot.offset : slot.offset + slot.size]
        if polar:
            x, y = g[0] * math.cos(g[1]), g[0] * math.sin(g[1])
        else:
            x, y = g[0], g[1]
        angle = g[2] if slot.size == 3 else 0.0
        parts.append(PlacedPart(slot.part.place(x, y, angle), slot.part.mass, slot.part.kind, slot.part.parent_id))
    return LayoutInstance(tuple(parts))


def occupation_rate(catalog: Catalog, container: ContainerDisk) -> float:
    return catalog.total_area / container.area


def scale_for_occupation_rate(catalog: Catalog, target_or: float, container: ContainerDisk) -> Catalog:
    """Multiply every dimension by one coefficient so the catalog fills ``target_or`` of the plate."""
    if not 0.0 < target_or < 1.0:
        raise ValueError(f"occupation rate must lie in (0, 1), got {target_or}")
    coef = math.sqrt(target_or / occupation_rate(catalog, container))
    comps = tuple(
        replace(c, d1=c.d1 * coef, d2=None if c.d2 is None else c.d2 * coef) for c in catalog
    )
    return replace(catalog, components=comps)
