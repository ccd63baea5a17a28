"""Scenario and result documents: parsing, validation, serialization.

Documents are YAML with an explicit ``version: 1`` field.  Parsing uses
a standard YAML loader; serialization goes through a small deterministic
emitter that renders floats with 17 significant digits so that a
serialize/parse round trip is lossless and re-runs are byte-identical.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np
import yaml

from .geometry import Circle, Polygon, RobotTeam, Scenario, Workspace, is_config_free
from .lattices import Family
from .planner import (
    MODE_LATTICE_GLO,
    MODE_LATTICE_LOC,
    MODE_RANDOM_GLO,
    PlannerConfig,
    ScenarioError,
)

FORMAT_VERSION = 1

MODE_TOKENS = {"loc": MODE_LATTICE_LOC, "glo": MODE_LATTICE_GLO, "random": MODE_RANDOM_GLO}
MODE_NAMES = {v: k for k, v in MODE_TOKENS.items()}
FAMILY_TOKENS = {f.value: f for f in Family}


@dataclass
class PlanDefaults:
    """Planner parameters carried by a scenario file.

    ``delta`` of None means "start from the start configuration's
    clearance"; ``edge_spacing`` of None means 0.1 * beta_star.
    """

    delta: float | None = None
    eps: float = 2.0
    family: Family = Family.ASTAR
    mode: str = MODE_LATTICE_LOC
    edge_spacing: float | None = None
    floor_ratio: float = 0.01
    psi: float = 3.0
    seed: int = 0
    node_cap: int = 1_000_000
    time_cap: float | None = None


@dataclass
class ScenarioFile:
    """A parsed and validated scenario document."""

    name: str
    workspace: Workspace
    team: RobotTeam
    starts: np.ndarray
    goals: np.ndarray
    defaults: PlanDefaults = field(default_factory=PlanDefaults)

    def to_scenario(self) -> Scenario:
        return Scenario(
            workspace=self.workspace,
            team=self.team,
            start=self.starts.reshape(-1).copy(),
            goal=self.goals.reshape(-1).copy(),
        )

    def planner_config(self, **overrides) -> PlannerConfig:
        d = self.defaults
        values = dict(
            mode=d.mode,
            family=d.family,
            delta=d.delta if d.delta is not None else 1.0,
            eps=d.eps,
            psi=d.psi,
            seed=d.seed,
            edge_spacing=d.edge_spacing,
            node_cap=d.node_cap,
            time_cap=d.time_cap,
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return PlannerConfig(**values)


@dataclass
class ResultFile:
    """A planning run as written to disk.

    ``stats`` holds only deterministic effort counters; wall-clock time
    is reported on the console, never in files, so identical runs write
    identical bytes.
    """

    scenario: str
    mode: str
    family: str
    params: dict
    status: str
    path: list[list[float]] | None
    length: float | None
    stats: dict
    delta_ladder: list[dict]


# ---------------------------------------------------------------------------
# Parsing


def _need(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ScenarioError(f"{where}: missing field '{key}'")
    return mapping[key]


def _as_float(value, where: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{where}: expected a number") from exc


def _as_int(value, where: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{where}: expected an integer") from exc


def _float_list(value, where: str, length: int) -> list[float]:
    if not isinstance(value, (list, tuple)) or len(value) != length:
        raise ScenarioError(f"{where}: expected a list of {length} numbers")
    try:
        return [float(x) for x in value]
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{where}: expected numbers") from exc


def _parse_obstacle(entry, where: str) -> Circle | Polygon:
    if not isinstance(entry, dict):
        raise ScenarioError(f"{where}: expected a mapping")
    kind = _need(entry, "kind", where)
    if kind == "circle":
        cx, cy = _float_list(_need(entry, "center", where), f"{where}.center", 2)
        radius = _as_float(_need(entry, "radius", where), f"{where}.radius")
        return Circle(center=(cx, cy), radius=radius)
    if kind == "polygon":
        raw = _need(entry, "vertices", where)
        if not isinstance(raw, list) or len(raw) < 3:
            raise ScenarioError(f"{where}.vertices: need at least 3 vertices")
        verts = tuple(tuple(_float_list(v, f"{where}.vertices[{i}]", 2)) for i, v in enumerate(raw))
        _check_simple_polygon(verts, where)
        return Polygon(vertices=verts)
    raise ScenarioError(f"{where}.kind: unknown obstacle kind '{kind}'")


def _segments_properly_intersect(p1, p2, p3, p4) -> bool:
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return 0 if v == 0 else (1 if v > 0 else -1)

    o1, o2 = orient(p1, p2, p3), orient(p1, p2, p4)
    o3, o4 = orient(p3, p4, p1), orient(p3, p4, p2)
    return o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4)


def _check_simple_polygon(verts, where: str) -> None:
    n = len(verts)
    edges = [(verts[i], verts[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if _segments_properly_intersect(*edges[i], *edges[j]):
                raise ScenarioError(f"{where}: polygon self-intersects (edges {i} and {j})")


def _inside_bounds(point, bounds) -> bool:
    xmin, ymin, xmax, ymax = bounds
    return xmin <= point[0] <= xmax and ymin <= point[1] <= ymax


def parse_scenario(text: str) -> ScenarioFile:
    """Parse and validate a scenario document.

    Raises :class:`ScenarioError` naming the offending field for both
    syntax and semantic problems (length mismatches, coordinates outside
    the bounds, start or goal in collision).
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioError("top level: expected a mapping")
    version = _need(doc, "version", "top level")
    if version != FORMAT_VERSION:
        raise ScenarioError(f"version: unsupported value {version!r}")
    name = str(_need(doc, "name", "top level"))

    ws_doc = _need(doc, "workspace", "top level")
    bounds = tuple(_float_list(_need(ws_doc, "bounds", "workspace"), "workspace.bounds", 4))
    xmin, ymin, xmax, ymax = bounds
    if not (xmin < xmax and ymin < ymax):
        raise ScenarioError("workspace.bounds: degenerate rectangle")
    obstacles = tuple(
        _parse_obstacle(entry, f"workspace.obstacles[{i}]")
        for i, entry in enumerate(ws_doc.get("obstacles") or [])
    )
    workspace = Workspace(bounds=bounds, obstacles=obstacles)

    robots = _need(doc, "robots", "top level")
    radii = _need(robots, "radii", "robots")
    starts = _need(robots, "starts", "robots")
    goals = _need(robots, "goals", "robots")
    if not (isinstance(radii, list) and radii):
        raise ScenarioError("robots.radii: expected a non-empty list")
    m = len(radii)
    if not (isinstance(starts, list) and len(starts) == m):
        raise ScenarioError(f"robots.starts: expected {m} entries to match radii")
    if not (isinstance(goals, list) and len(goals) == m):
        raise ScenarioError(f"robots.goals: expected {m} entries to match radii")
    radii_f = []
    for i, r in enumerate(radii):
        r = float(r)
        if r <= 0.0:
            raise ScenarioError(f"robots.radii[{i}]: must be positive")
        radii_f.append(r)
    team = RobotTeam(radii=tuple(radii_f))
    start_rows, goal_rows = [], []
    for label, rows, out in (("starts", starts, start_rows), ("goals", goals, goal_rows)):
        for i, row in enumerate(rows):
            point = _float_list(row, f"robots.{label}[{i}]", 2)
            if not _inside_bounds(point, bounds):
                raise ScenarioError(f"robots.{label}[{i}]: robot {i} outside workspace bounds")
            out.append(point)
    starts_arr = np.array(start_rows)
    goals_arr = np.array(goal_rows)

    defaults = _parse_defaults(doc.get("defaults") or {})
    sf = ScenarioFile(
        name=name,
        workspace=workspace,
        team=team,
        starts=starts_arr,
        goals=goals_arr,
        defaults=defaults,
    )
    scenario = sf.to_scenario()
    if not is_config_free(workspace, team, scenario.start, 0.0):
        raise ScenarioError("robots.starts: start configuration is in collision")
    if not is_config_free(workspace, team, scenario.goal, 0.0):
        raise ScenarioError("robots.goals: goal configuration is in collision")
    return sf


def _parse_defaults(doc) -> PlanDefaults:
    if not isinstance(doc, dict):
        raise ScenarioError("defaults: expected a mapping")
    out = PlanDefaults()
    if (delta := doc.get("delta")) is not None:
        out.delta = _as_float(delta, "defaults.delta")
        if out.delta <= 0.0:
            raise ScenarioError("defaults.delta: must be positive")
    if (eps := doc.get("eps")) is not None:
        out.eps = _as_float(eps, "defaults.eps")
        if out.eps <= 0.0:
            raise ScenarioError("defaults.eps: must be positive")
    if (family := doc.get("family")) is not None:
        if family not in FAMILY_TOKENS:
            raise ScenarioError(f"defaults.family: unknown family '{family}'")
        out.family = FAMILY_TOKENS[family]
    if (mode := doc.get("mode")) is not None:
        if mode not in MODE_TOKENS:
            raise ScenarioError(f"defaults.mode: unknown mode '{mode}'")
        out.mode = MODE_TOKENS[mode]
    if (spacing := doc.get("edge_spacing")) is not None:
        out.edge_spacing = _as_float(spacing, "defaults.edge_spacing")
        if out.edge_spacing <= 0.0:
            raise ScenarioError("defaults.edge_spacing: must be positive")
    if (ratio := doc.get("floor_ratio")) is not None:
        out.floor_ratio = _as_float(ratio, "defaults.floor_ratio")
        if not 0.0 < out.floor_ratio <= 1.0:
            raise ScenarioError("defaults.floor_ratio: must be in (0, 1]")
    if (psi := doc.get("psi")) is not None:
        out.psi = _as_float(psi, "defaults.psi")
        if out.psi <= 0.0:
            raise ScenarioError("defaults.psi: must be positive")
    if (seed := doc.get("seed")) is not None:
        out.seed = _as_int(seed, "defaults.seed")
    if (cap := doc.get("node_cap")) is not None:
        out.node_cap = _as_int(cap, "defaults.node_cap")
        if out.node_cap <= 0:
            raise ScenarioError("defaults.node_cap: must be positive")
    if (cap := doc.get("time_cap")) is not None:
        out.time_cap = _as_float(cap, "defaults.time_cap")
        if out.time_cap <= 0.0:
            raise ScenarioError("defaults.time_cap: must be positive")
    return out


# ---------------------------------------------------------------------------
# Serialization


def fmt_float(x: float) -> str:
    """Render a float with 17 significant digits in a YAML-safe spelling
    (always a decimal point, signed exponent)."""
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError("cannot serialize nan/inf")
    s = format(x, ".17g")
    if "e" in s:
        mantissa, exponent = s.split("e")
        if "." not in mantissa:
            mantissa += ".0"
        return mantissa + "e" + exponent
    if "." not in s:
        s += ".0"
    return s


def _fmt_scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return fmt_float(value)
    if isinstance(value, str):
        if re.fullmatch(r"[A-Za-z0-9_][A-Za-z0-9_.\-]*", value) and value.lower() not in (
            "null", "true", "false", "yes", "no", "on", "off",
        ):
            return value
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _is_scalar_list(value) -> bool:
    return isinstance(value, (list, tuple)) and all(
        isinstance(v, (int, float, np.integer, np.floating, str, bool)) or v is None
        for v in value
    )


def _emit(value, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, dict) and item:
                lines.append(f"{pad}{key}:")
                _emit(item, indent + 1, lines)
            elif isinstance(item, (list, tuple)) and item and not _is_scalar_list(item):
                lines.append(f"{pad}{key}:")
                _emit(item, indent + 1, lines)
            elif isinstance(item, (list, tuple)):
                lines.append(f"{pad}{key}: {_flow(item)}")
            elif isinstance(item, dict):
                lines.append(f"{pad}{key}: {{}}")
            else:
                lines.append(f"{pad}{key}: {_fmt_scalar(item)}")
    elif isinstance(value, (list, tuple)):
        for item in value:
            if isinstance(item, dict):
                sub: list[str] = []
                _emit(item, indent + 1, sub)
                first = sub[0].lstrip()
                lines.append(f"{pad}- {first}")
                lines.extend(sub[1:])
            elif isinstance(item, (list, tuple)):
                lines.append(f"{pad}- {_flow(item)}")
            else:
                lines.append(f"{pad}- {_fmt_scalar(item)}")
    else:
        lines.append(f"{pad}{_fmt_scalar(value)}")


def _flow(values) -> str:
    return "[" + ", ".join(_fmt_scalar(v) for v in values) + "]"


def emit_document(doc: dict) -> str:
    """Deterministic YAML rendering of a document built from dicts,
    lists, and scalars (insertion order preserved)."""
    lines: list[str] = []
    _emit(doc, 0, lines)
    return "\n".join(lines) + "\n"


def _obstacle_doc(obs) -> dict:
    if isinstance(obs, Circle):
        return {"kind": "circle", "center": list(obs.center), "radius": obs.radius}
    return {"kind": "polygon", "vertices": [list(v) for v in obs.vertices]}


def serialize_scenario(sf: ScenarioFile) -> str:
    d = sf.defaults
    defaults_doc = {
        "delta": d.delta,
        "eps": d.eps,
        "family": d.family.value,
        "mode": MODE_NAMES[d.mode],
        "edge_spacing": d.edge_spacing,
        "floor_ratio": d.floor_ratio,
        "psi": d.psi,
        "seed": d.seed,
        "node_cap": d.node_cap,
        "time_cap": d.time_cap,
    }
    doc = {
        "version": FORMAT_VERSION,
        "name": sf.name,
        "workspace": {
            "bounds": list(sf.workspace.bounds),
            "obstacles": [_obstacle_doc(o) for o in sf.workspace.obstacles],
        },
        "robots": {
            "radii": list(sf.team.radii),
            "starts": [list(row) for row in sf.starts.tolist()],
            "goals": [list(row) for row in sf.goals.tolist()],
        },
        "defaults": defaults_doc,
    }
    return emit_document(doc)


def serialize_result(rf: ResultFile) -> str:
    doc = {
        "version": FORMAT_VERSION,
        "scenario": rf.scenario,
        "mode": rf.mode,
        "family": rf.family,
        "params": rf.params,
        "status": rf.status,
        "length": rf.length,
        "path": [list(row) for row in rf.path] if rf.path is not None else None,
        "stats": rf.stats,
        "delta_ladder": rf.delta_ladder,
    }
    return emit_document(doc)


def parse_result(text: str) -> ResultFile:
    doc = yaml.safe_load(text)
    if not isinstance(doc, dict) or doc.get("version") != FORMAT_VERSION:
        raise ScenarioError("result file: bad or missing version")
    return ResultFile(
        scenario=doc["scenario"],
        mode=doc["mode"],
        family=doc["family"],
        params=doc["params"],
        status=doc["status"],
        path=doc["path"],
        length=doc["length"],
        stats=doc["stats"],
        delta_ladder=doc["delta_ladder"],
    )
