"""2D workspaces with disc-robot teams over the composite space R^(2m).

A team of m discs is treated as one robot whose configuration stacks the
m centers, so all clearance and segment queries operate on vectors of
length 2m.  Clearance is the minimum over robot-obstacle, robot-robot,
and robot-boundary separations; the workspace boundary acts as an
obstacle (robots must stay fully inside the bounds).

Configurations whose disc center falls inside a polygon get a negative
clearance of -(radius + distance to the polygon boundary); only the sign
of that value is meaningful.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Circle:
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ValueError(f"circle radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Polygon:
    """Simple polygon given by its vertex ring (no closing repeat)."""

    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("polygon needs at least 3 vertices")


@dataclass(frozen=True)
class Workspace:
    """Axis-aligned bounded workspace with circle/polygon obstacles."""

    bounds: tuple[float, float, float, float]
    obstacles: tuple[Circle | Polygon, ...] = ()

    def __post_init__(self):
        xmin, ymin, xmax, ymax = self.bounds
        if not (xmin < xmax and ymin < ymax):
            raise ValueError(f"degenerate workspace bounds {self.bounds}")


@dataclass(frozen=True)
class RobotTeam:
    """Disc radii of the m robots."""

    radii: tuple[float, ...]

    def __post_init__(self):
        if not self.radii:
            raise ValueError("team needs at least one robot")
        if any(r <= 0.0 for r in self.radii):
            raise ValueError("robot radii must be positive")

    @property
    def m(self) -> int:
        return len(self.radii)

    @property
    def dim(self) -> int:
        return 2 * len(self.radii)


@dataclass(frozen=True, eq=False)
class Scenario:
    """One planning problem: workspace, team, and composite start/goal."""

    workspace: Workspace
    team: RobotTeam
    start: np.ndarray
    goal: np.ndarray

    @property
    def dim(self) -> int:
        return self.team.dim


@dataclass(frozen=True)
class ClearanceResult:
    """Minimum separation and the pair attaining it.

    ``limiting`` is ("boundary", robot, None), ("obstacle", robot, index),
    or ("robot", i, j).
    """

    value: float
    limiting: tuple


def _point_segment_distance(px, py, x1, y1, x2, y2) -> float:
    dx, dy = x2 - x1, y2 - y1
    denom = dx * dx + dy * dy
    if denom <= 0.0:
        return math.hypot(px - x1, py - y1)
    t = ((px - x1) * dx + (py - y1) * dy) / denom
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return math.hypot(x1 + t * dx - px, y1 + t * dy - py)


def _point_in_polygon(px, py, vertices) -> bool:
    inside = False
    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        if (y1 > py) != (y2 > py):
            xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if px < xint:
                inside = not inside
    return inside


def signed_polygon_distance(px: float, py: float, poly: Polygon) -> float:
    """Distance from a point to the polygon boundary, negated inside."""
    d = min(
        _point_segment_distance(px, py, *poly.vertices[i], *poly.vertices[(i + 1) % len(poly.vertices)])
        for i in range(len(poly.vertices))
    )
    return -d if _point_in_polygon(px, py, poly.vertices) else d


def _check_config(team: RobotTeam, q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape != (team.dim,):
        raise ValueError(f"configuration must have length {team.dim}, got {q.shape}")
    return q


def config_clearance(ws: Workspace, team: RobotTeam, q) -> ClearanceResult:
    """Minimum separation of a composite configuration, with the pair
    that attains it."""
    q = _check_config(team, q)
    xmin, ymin, xmax, ymax = ws.bounds
    best = math.inf
    limiting: tuple = ("none", -1, None)
    for i, radius in enumerate(team.radii):
        px, py = q[2 * i], q[2 * i + 1]
        wall = min(px - xmin, py - ymin, xmax - px, ymax - py) - radius
        if wall < best:
            best, limiting = wall, ("boundary", i, None)
        for k, obs in enumerate(ws.obstacles):
            if isinstance(obs, Circle):
                sep = math.hypot(px - obs.center[0], py - obs.center[1]) - obs.radius - radius
            else:
                sep = signed_polygon_distance(px, py, obs) - radius
            if sep < best:
                best, limiting = sep, ("obstacle", i, k)
        for j in range(i + 1, team.m):
            sep = (
                math.hypot(px - q[2 * j], py - q[2 * j + 1])
                - radius
                - team.radii[j]
            )
            if sep < best:
                best, limiting = sep, ("robot", i, j)
    return ClearanceResult(value=best, limiting=limiting)


@functools.lru_cache(maxsize=256)
def _compiled_polygon(poly: Polygon) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Per-polygon arrays reused across queries: vertices, edge vectors,
    squared edge lengths, and a division-safe copy of the edge slopes."""
    verts = np.asarray(poly.vertices, dtype=float)
    edges = np.roll(verts, -1, axis=0) - verts
    len2 = np.einsum("ij,ij->i", edges, edges)
    if np.any(len2 <= 0.0):
        raise ValueError("polygon has a zero-length edge")
    safe_dy = np.where(edges[:, 1] == 0.0, 1.0, edges[:, 1])
    for arr in (verts, edges, len2, safe_dy):
        arr.setflags(write=False)
    return verts, edges, len2, safe_dy


def _polygon_signed_distances(points: np.ndarray, poly: Polygon) -> np.ndarray:
    """Signed distance from each point (rows) to the polygon boundary,
    negative inside, vectorized over points and edges."""
    verts, edges, len2, safe_dy = _compiled_polygon(poly)
    diff = points[:, None, :] - verts[None, :, :]
    t = np.einsum("nej,ej->ne", diff, edges) / len2[None, :]
    np.clip(t, 0.0, 1.0, out=t)
    proj = diff - t[:, :, None] * edges[None, :, :]
    dmin = np.sqrt(np.einsum("nej,nej->ne", proj, proj)).min(axis=1)
    py = points[:, 1][:, None]
    y1 = verts[:, 1][None, :]
    y2 = (verts[:, 1] + edges[:, 1])[None, :]
    crosses = (y1 > py) != (y2 > py)
    xint = verts[:, 0][None, :] + (py - y1) * (edges[:, 0] / safe_dy)[None, :]
    inside = np.logical_and(crosses, points[:, 0][:, None] < xint).sum(axis=1) % 2 == 1
    return np.where(inside, -dmin, dmin)


def clearance_values(ws: Workspace, team: RobotTeam, configs: np.ndarray) -> np.ndarray:
    """Clearance of many configurations at once (rows of ``configs``).

    Equivalent to mapping :func:`config_clearance` over the rows; the
    per-obstacle work is shared across all rows and robots.
    """
    configs = np.asarray(configs, dtype=float)
    if configs.ndim != 2 or configs.shape[1] != team.dim:
        raise ValueError(f"configs must be n x {team.dim}")
    n = len(configs)
    m = team.m
    xmin, ymin, xmax, ymax = ws.bounds
    centers = configs.reshape(n * m, 2)
    cx = centers[:, 0]
    cy = centers[:, 1]

    sep = np.minimum.reduce([cx - xmin, cy - ymin, xmax - cx, ymax - cy])
    for obs in ws.obstacles:
        if isinstance(obs, Circle):
            d = np.hypot(cx - obs.center[0], cy - obs.center[1]) - obs.radius
        else:
            d = _polygon_signed_distances(centers, obs)
        np.minimum(sep, d, out=sep)
    radii = np.asarray(team.radii)
    best = (sep.reshape(n, m) - radii[None, :]).min(axis=1)

    for i in range(m):
        ri = radii[i]
        for j in range(i + 1, m):
            d = np.hypot(
                configs[:, 2 * i] - configs[:, 2 * j],
                configs[:, 2 * i + 1] - configs[:, 2 * j + 1],
            )
            np.minimum(best, d - ri - radii[j], out=best)
    return best


def is_config_free(ws: Workspace, team: RobotTeam, q, required_clearance: float = 0.0) -> bool:
    """Whether the configuration keeps at least the required clearance."""
    if required_clearance < 0.0:
        raise ValueError("required clearance must be nonnegative")
    return config_clearance(ws, team, q).value >= required_clearance - 1e-12


def _segment_ts(a: np.ndarray, b: np.ndarray, spacing: float) -> np.ndarray:
    """Interpolation parameters in evaluation order: both endpoints first,
    then the uniform interior sweep."""
    n = int(math.ceil(float(np.linalg.norm(b - a)) / spacing))
    if n <= 1:
        return np.array([0.0, 1.0]) if n == 1 else np.array([0.0])
    interior = np.arange(1, n) / n
    return np.concatenate(([0.0, 1.0], interior))


def is_segment_free(ws: Workspace, team: RobotTeam, a, b, spacing: float) -> bool:
    """Validate the straight segment between two configurations by dense
    sampling at the given spacing, stopping at the first violation.

    The check covers ceil(dist/spacing) + 1 equally spaced configurations
    including both endpoints.
    """
    ok, _ = segment_probe(ws, team, a, b, spacing)
    return ok


def segment_probe(
    ws: Workspace, team: RobotTeam, a, b, spacing: float
) -> tuple[bool, int]:
    """Segment check that also reports how many configurations a
    one-at-a-time sweep would have evaluated (index of the first
    violation plus one, or the full count when free).

    Configurations are evaluated in endpoint-first order, in fixed-size
    batches; the outcome and reported count match the sequential sweep.
    """
    if spacing <= 0.0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    a = _check_config(team, a)
    b = _check_config(team, b)
    ts = _segment_ts(a, b, spacing)
    total = len(ts)
    chunk = 64
    for lo in range(0, total, chunk):
        sub = ts[lo : lo + chunk]
        configs = a[None, :] + sub[:, None] * (b - a)[None, :]
        values = clearance_values(ws, team, configs)
        bad = np.nonzero(values < -1e-12)[0]
        if bad.size:
            return False, lo + int(bad[0]) + 1
    return True, total


def cspace_box(ws: Workspace, team: RobotTeam) -> tuple[np.ndarray, np.ndarray]:
    """Composite configuration-space box: the workspace bounds repeated
    once per robot."""
    xmin, ymin, xmax, ymax = ws.bounds
    lo = np.tile([xmin, ymin], team.m).astype(float)
    hi = np.tile([xmax, ymax], team.m).astype(float)
    return lo, hi
