"""Implicit A* over roadmap graphs on deterministic sample sets.

The roadmap on a sample set X with connection radius r has the
collision-free members of X plus the start and goal as vertices, and an
edge between every vertex pair at distance <= r whose straight segment
is collision-free.  The planner never builds that graph explicitly:
edges are generated and validated only when their source vertex is
expanded by A*.

Two neighbor-retrieval flavors exist.  The lattice-local flavor exploits
regularity: the neighbor set of any sample is a translation of the
anchor's neighbor set, so one template (computed once) serves every
expansion.  The global flavor runs radius queries against an explicit
point list and also serves the uniform-random baseline.

With a (delta, eps)-complete sample set, an exhausted frontier inside
the bounded configuration-space box certifies that no delta-clear
solution exists; with other point sets the same status only means the
roadmap is disconnected.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass

import numpy as np

from .completeness import (
    CompletenessParams,
    build_sample_set,
    derive_params,
    neighbor_template,
)
from .geometry import (
    Scenario,
    config_clearance,
    cspace_box,
    is_config_free,
    segment_probe,
)
from .lattices import DEFAULT_CAP, Family

MODE_LATTICE_LOC = "lattice_loc"
MODE_LATTICE_GLO = "lattice_glo"
MODE_RANDOM_GLO = "random_glo"

STATUS_SOLVED = "solved"
STATUS_INFEASIBLE = "infeasible_certified"
STATUS_BUDGET = "exhausted_budget"

_GOAL = "goal"


class ScenarioError(ValueError):
    """A scenario violates a precondition (e.g. start in collision)."""


@dataclass
class PlannerConfig:
    """Knobs shared by all planner flavors.

    ``family`` applies to the lattice modes, ``psi``/``seed`` to the
    random baseline.  ``edge_spacing`` defaults to 0.1 * beta_star when
    left unset.  ``time_cap`` is in seconds; None disables it.
    """

    mode: str = MODE_LATTICE_LOC
    family: Family = Family.ASTAR
    delta: float = 1.0
    eps: float = 2.0
    psi: float = 3.0
    seed: int = 0
    edge_spacing: float | None = None
    node_cap: int = 1_000_000
    time_cap: float | None = None


@dataclass
class SearchStats:
    expanded: int = 0
    generated: int = 0
    vertex_checks: int = 0
    edge_checks: int = 0
    edge_check_configs: int = 0
    wall_time: float = 0.0


@dataclass
class PlanOutcome:
    """Search result: status, the path when solved, and effort counters."""

    status: str
    path: list[np.ndarray] | None
    length: float | None
    stats: SearchStats


def _resolve_spacing(config: PlannerConfig, params: CompletenessParams) -> float:
    if config.edge_spacing is not None:
        if config.edge_spacing <= 0.0:
            raise ValueError("edge_spacing must be positive")
        return config.edge_spacing
    return 0.1 * params.beta_star


def _require_free_endpoints(scenario: Scenario) -> None:
    ws, team = scenario.workspace, scenario.team
    if not is_config_free(ws, team, scenario.start, 0.0):
        raise ScenarioError("start configuration is in collision")
    if not is_config_free(ws, team, scenario.goal, 0.0):
        raise ScenarioError("goal configuration is in collision")


class _Search:
    """One A* run over an implicitly represented roadmap."""

    def __init__(self, scenario: Scenario, spacing: float, node_cap: int, time_cap: float | None):
        self.scenario = scenario
        self.spacing = spacing
        self.node_cap = node_cap
        self.time_cap = time_cap
        self.stats = SearchStats()
        self.g: dict = {}
        self.pos: dict = {}
        self.prev: dict = {}
        self.closed: set = set()
        self.valid: dict = {}
        self.heap: list = []

    def vertex_ok(self, key, position: np.ndarray) -> bool:
        cached = self.valid.get(key)
        if cached is None:
            cached = is_config_free(self.scenario.workspace, self.scenario.team, position, 0.0)
            self.stats.vertex_checks += 1
            self.valid[key] = cached
        return cached

    def edge_ok(self, a: np.ndarray, b: np.ndarray) -> bool:
        ok, count = segment_probe(self.scenario.workspace, self.scenario.team, a, b, self.spacing)
        self.stats.edge_checks += 1
        self.stats.edge_check_configs += count
        return ok

    def push(self, key, lex, g_value: float, h_value: float) -> None:
        heapq.heappush(self.heap, (g_value + h_value, -g_value, lex, key))

    def relax(self, key, lex, position: np.ndarray, g_new: float, parent) -> None:
        current = self.g.get(key)
        if current is not None and g_new >= current:
            return
        if current is None:
            self.stats.generated += 1
        self.g[key] = g_new
        # Copy: lattice candidates are rows of a per-expansion scratch array.
        self.pos[key] = np.array(position)
        self.prev[key] = parent
        h_value = 0.0 if key == _GOAL else float(np.linalg.norm(self.scenario.goal - position))
        self.push(key, lex, g_new, h_value)

    def reconstruct(self, key) -> list[np.ndarray]:
        path = []
        while key is not None:
            path.append(self.pos[key])
            key = self.prev[key]
        path.reverse()
        return path

    def run(self, start_key, start_lex, candidates) -> PlanOutcome:
        t0 = time.perf_counter()
        self.g[start_key] = 0.0
        self.pos[start_key] = self.scenario.start
        self.prev[start_key] = None
        self.valid[start_key] = True
        self.valid[_GOAL] = True
        self.stats.generated = 1
        self.push(start_key, start_lex, 0.0, float(np.linalg.norm(self.scenario.goal - self.scenario.start)))

        status = STATUS_INFEASIBLE
        goal_key = None
        while self.heap:
            _, neg_g, _, key = heapq.heappop(self.heap)
            if key in self.closed:
                continue
            if self.g[key] != -neg_g:
                continue
            if key == _GOAL:
                goal_key = key
                status = STATUS_SOLVED
                break
            if self.stats.expanded >= self.node_cap:
                status = STATUS_BUDGET
                break
            if self.time_cap is not None and time.perf_counter() - t0 > self.time_cap:
                status = STATUS_BUDGET
                break
            self.closed.add(key)
            self.stats.expanded += 1
            q_pos = self.pos[key]
            g_q = self.g[key]
            for n_key, n_lex, n_pos, weight in candidates(key, q_pos):
                if not self.vertex_ok(n_key, n_pos):
                    continue
                if not self.edge_ok(q_pos, n_pos):
                    continue
                self.relax(n_key, n_lex, n_pos, g_q + weight, key)

        self.stats.wall_time = time.perf_counter() - t0
        if status != STATUS_SOLVED:
            return PlanOutcome(status=status, path=None, length=None, stats=self.stats)
        path = self.reconstruct(goal_key)
        length = float(sum(np.linalg.norm(b - a) for a, b in zip(path, path[1:])))
        return PlanOutcome(status=status, path=path, length=length, stats=self.stats)


def plan_loc(scenario: Scenario, config: PlannerConfig, cap: int = DEFAULT_CAP) -> PlanOutcome:
    """Implicit A* on the lattice sample set anchored at the start, using
    the translated neighbor template.

    The search space is restricted to the configuration-space box, so an
    emptied frontier certifies infeasibility at the configured clearance.
    """
    if config.mode != MODE_LATTICE_LOC:
        raise ValueError(f"plan_loc requires mode {MODE_LATTICE_LOC!r}, got {config.mode!r}")
    _require_free_endpoints(scenario)
    params = derive_params(config.delta, config.eps)
    sample_set = build_sample_set(config.family, scenario.dim, params, translation=scenario.start)
    template = neighbor_template(sample_set, cap)
    spacing = _resolve_spacing(config, params)
    r_star = params.r_star
    goal_tol = 1e-9 * max(1.0, r_star)
    lo, hi = cspace_box(scenario.workspace, scenario.team)
    box_tol = 1e-9 * max(1.0, float(np.max(np.abs(lo))), float(np.max(np.abs(hi))))
    goal = scenario.goal
    d = scenario.dim

    offsets = template.offsets
    int_offsets = [tuple(v) for v in template.int_offsets.tolist()]
    weights = template.norms

    def candidates(key, q_pos):
        spots = q_pos[None, :] + offsets
        inside = np.all(spots >= lo - box_tol, axis=1) & np.all(spots <= hi + box_tol, axis=1)
        for i in np.nonzero(inside)[0]:
            dv = int_offsets[i]
            n_key = tuple(key[j] + dv[j] for j in range(d))
            yield n_key, (0,) + n_key, spots[i], float(weights[i])
        goal_dist = float(np.linalg.norm(goal - q_pos))
        if goal_dist <= r_star + goal_tol:
            yield _GOAL, (1,), goal, goal_dist

    search = _Search(scenario, spacing, config.node_cap, config.time_cap)
    start_key = (0,) * d
    return search.run(start_key, (0,) + start_key, candidates)


class _RadiusIndex:
    """Fixed-radius neighbor queries: a uniform grid hash with cell size
    equal to the query radius, or a linear scan below 5000 points."""

    GRID_THRESHOLD = 5000

    def __init__(self, points: np.ndarray, radius: float):
        self.points = points
        self.radius = radius
        self.cells: dict | None = None
        if len(points) >= self.GRID_THRESHOLD:
            self.cells = {}
            keys = np.floor(points / radius).astype(np.int64)
            for idx, cell in enumerate(map(tuple, keys.tolist())):
                self.cells.setdefault(cell, []).append(idx)

    def query(self, x: np.ndarray, limit: float) -> tuple[np.ndarray, np.ndarray]:
        """Indices (ascending) and distances of points within ``limit``."""
        if self.cells is None:
            if not len(self.points):
                return np.empty(0, dtype=np.int64), np.empty(0)
            dists = np.linalg.norm(self.points - x, axis=1)
            idx = np.nonzero(dists <= limit)[0]
            return idx, dists[idx]
        base = np.floor(x / self.radius).astype(np.int64)
        gathered: list[int] = []
        d = len(x)
        span = [(-1, 0, 1)] * d
        for off in np.stack(np.meshgrid(*span, indexing="ij"), axis=-1).reshape(-1, d):
            bucket = self.cells.get(tuple((base + off).tolist()))
            if bucket:
                gathered.extend(bucket)
        if not gathered:
            return np.empty(0, dtype=np.int64), np.empty(0)
        idx = np.sort(np.asarray(gathered, dtype=np.int64))
        dists = np.linalg.norm(self.points[idx] - x, axis=1)
        keep = dists <= limit
        return idx[keep], dists[keep]


def plan_glo(
    scenario: Scenario,
    config: PlannerConfig,
    points: np.ndarray,
    radius: float,
) -> PlanOutcome:
    """Implicit A* whose neighbors come from radius queries over an
    explicit point list; the start and goal join the vertex set.

    With the lattice sample points and radius r_star this returns the
    same path length as :func:`plan_loc`.
    """
    if radius <= 0.0:
        raise ValueError(f"radius must be positive, got {radius}")
    _require_free_endpoints(scenario)
    params = derive_params(config.delta, config.eps)
    spacing = _resolve_spacing(config, params)
    points = np.asarray(points, dtype=float).reshape(-1, scenario.dim)

    vertices = [points]
    start_idx = goal_idx = None
    matches = np.nonzero((points == scenario.start).all(axis=1))[0] if len(points) else []
    if len(matches):
        start_idx = int(matches[0])
    matches = np.nonzero((points == scenario.goal).all(axis=1))[0] if len(points) else []
    if len(matches):
        goal_idx = int(matches[0])
    extra = []
    if start_idx is None:
        start_idx = len(points) + len(extra)
        extra.append(scenario.start)
    if goal_idx is None:
        goal_idx = len(points) + len(extra)
        extra.append(scenario.goal)
    if extra:
        vertices.append(np.vstack(extra))
    all_points = np.vstack(vertices)
    index = _RadiusIndex(all_points, radius)
    limit = radius + 1e-9 * max(1.0, radius)

    def candidates(key, q_pos):
        idxs, dists = index.query(q_pos, limit)
        for i, dist in zip(idxs.tolist(), dists.tolist()):
            if i == key:
                continue
            n_key = _GOAL if i == goal_idx else i
            n_pos = scenario.goal if i == goal_idx else all_points[i]
            yield n_key, (1,) if n_key == _GOAL else (0, i), n_pos, dist

    search = _Search(scenario, spacing, config.node_cap, config.time_cap)
    return search.run(start_idx, (0, start_idx), candidates)


def random_samples(scenario: Scenario, count: int, seed: int) -> np.ndarray:
    """Uniform i.i.d. samples in the configuration-space box, from a
    seeded generator; identical across runs for a fixed seed."""
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    lo, hi = cspace_box(scenario.workspace, scenario.team)
    rng = np.random.Generator(np.random.PCG64(seed))
    return lo + rng.random((count, scenario.dim)) * (hi - lo)


def matched_count(
    scenario: Scenario,
    family: Family,
    params: CompletenessParams,
    cap: int = DEFAULT_CAP,
) -> int:
    """Number of sample-set points inside the configuration-space box,
    ignoring all collisions (used to size the random baseline)."""
    from .lattices import enumerate_box

    sample_set = build_sample_set(family, scenario.dim, params, translation=scenario.start)
    lo, hi = cspace_box(scenario.workspace, scenario.team)
    pts = enumerate_box(sample_set.spec, sample_set.scale, sample_set.translation, lo, hi, cap)
    return len(pts)


def lattice_points_in_box(
    scenario: Scenario,
    family: Family,
    params: CompletenessParams,
    cap: int = DEFAULT_CAP,
) -> np.ndarray:
    """Positions of the sample-set points inside the configuration-space
    box (explicit list for the global flavor)."""
    from .lattices import enumerate_box

    sample_set = build_sample_set(family, scenario.dim, params, translation=scenario.start)
    lo, hi = cspace_box(scenario.workspace, scenario.team)
    pts = enumerate_box(sample_set.spec, sample_set.scale, sample_set.translation, lo, hi, cap)
    if not pts:
        return np.empty((0, scenario.dim))
    return np.vstack([p.position for p in pts])


def r_rnd(n: int, psi: float, d: int) -> float:
    """Connection radius psi * (log n / n)^(1/d) for n random samples."""
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    if psi <= 0.0:
        raise ValueError(f"psi must be positive, got {psi}")
    return psi * (math.log(n) / n) ** (1.0 / d)


def select_delta(
    scenario: Scenario, decay: float = 0.8, floor_ratio: float = 0.01
) -> list[float]:
    """Clearance ladder for retries: the start configuration's clearance,
    decayed geometrically down to a floor (default 1/100 of the start)."""
    if not 0.0 < decay < 1.0:
        raise ValueError(f"decay must be in (0, 1), got {decay}")
    start_clearance = config_clearance(scenario.workspace, scenario.team, scenario.start).value
    if start_clearance <= 0.0:
        raise ScenarioError("start configuration has no positive clearance")
    return delta_ladder(start_clearance, decay, floor_ratio)


def delta_ladder(first: float, decay: float = 0.8, floor_ratio: float = 0.01) -> list[float]:
    """Geometric clearance sequence first, first*decay, ... down to
    first * floor_ratio (inclusive up to rounding)."""
    if first <= 0.0:
        raise ValueError(f"ladder start must be positive, got {first}")
    floor = first * floor_ratio * (1.0 - 1e-12)
    values = []
    value = first
    while value >= floor:
        values.append(value)
        value *= decay
    return values
