import math

import numpy as np
import pytest

from latticeplan.geometry import (
    Circle,
    Polygon,
    RobotTeam,
    Workspace,
    clearance_values,
    config_clearance,
    cspace_box,
    is_config_free,
    is_segment_free,
    segment_probe,
    signed_polygon_distance,
)

FAR = Workspace(bounds=(-100, -100, 100, 100))
UNIT_SQUARE_POLY = Polygon(vertices=((4.0, 0.0), (6.0, 0.0), (6.0, 6.0), (4.0, 6.0)))


class TestClearance:
    def test_collinear_discs(self):
        ws = Workspace(bounds=(-100, -100, 100, 100), obstacles=(Circle((5, 0), 1.0),))
        res = config_clearance(ws, RobotTeam(radii=(1.0,)), [0.0, 0.0])
        assert res.value == pytest.approx(3.0)
        assert res.limiting == ("obstacle", 0, 0)

    def test_touching_robots(self):
        res = config_clearance(FAR, RobotTeam(radii=(1.0, 1.0)), [0, 0, 2, 0])
        assert res.value == pytest.approx(0.0, abs=1e-12)
        assert res.limiting == ("robot", 0, 1)

    def test_inside_obstacle_is_negative(self):
        ws = Workspace(bounds=(0, 0, 10, 10), obstacles=(UNIT_SQUARE_POLY,))
        assert config_clearance(ws, RobotTeam(radii=(0.5,)), [5, 3]).value < 0

    def test_boundary_limits(self):
        res = config_clearance(FAR, RobotTeam(radii=(1.0,)), [-98.5, 0.0])
        assert res.value == pytest.approx(0.5)
        assert res.limiting == ("boundary", 0, None)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            config_clearance(FAR, RobotTeam(radii=(1.0,)), [0, 0, 1, 1])

    def test_swap_equal_robots_invariant(self):
        ws = Workspace(bounds=(0, 0, 10, 10), obstacles=(Circle((3, 3), 0.7),))
        team = RobotTeam(radii=(0.4, 0.4))
        rng = np.random.default_rng(3)
        for _ in range(25):
            q = rng.uniform(0, 10, size=4)
            swapped = np.concatenate([q[2:], q[:2]])
            a = config_clearance(ws, team, q).value
            b = config_clearance(ws, team, swapped).value
            assert a == pytest.approx(b, abs=1e-12)

    def test_single_robot_move_is_lipschitz(self):
        ws = Workspace(
            bounds=(0, 0, 10, 10),
            obstacles=(Circle((3, 3), 0.7), UNIT_SQUARE_POLY),
        )
        team = RobotTeam(radii=(0.4, 0.3))
        rng = np.random.default_rng(4)
        for _ in range(50):
            q = rng.uniform(0, 10, size=4)
            q2 = q.copy()
            robot = rng.integers(0, 2)
            q2[2 * robot : 2 * robot + 2] += rng.normal(scale=0.3, size=2)
            gap = abs(
                config_clearance(ws, team, q).value - config_clearance(ws, team, q2).value
            )
            assert gap <= np.linalg.norm(q - q2) + 1e-9


class TestBatchClearance:
    def test_matches_scalar(self):
        ws = Workspace(
            bounds=(0, 0, 10, 10),
            obstacles=(
                Circle((5, 5), 1.0),
                Polygon(vertices=((1, 1), (3, 1), (3, 2), (1, 2))),
                Polygon(vertices=((6, 1), (8, 1), (8, 3), (7, 3), (7, 2), (6, 2))),
            ),
        )
        team = RobotTeam(radii=(0.4, 0.3))
        rng = np.random.default_rng(0)
        configs = rng.uniform(0, 10, size=(300, 4))
        batch = clearance_values(ws, team, configs)
        scalar = np.array([config_clearance(ws, team, q).value for q in configs])
        assert np.abs(batch - scalar).max() < 1e-12


class TestSignedPolygonDistance:
    def test_outside_and_inside(self):
        poly = Polygon(vertices=((0, 0), (2, 0), (2, 2), (0, 2)))
        assert signed_polygon_distance(3.0, 1.0, poly) == pytest.approx(1.0)
        assert signed_polygon_distance(1.0, 1.0, poly) == pytest.approx(-1.0)
        assert signed_polygon_distance(1.0, 1.5, poly) == pytest.approx(-0.5)

    def test_concave(self):
        poly = Polygon(vertices=((0, 0), (4, 0), (4, 4), (3, 4), (3, 1), (0, 1)))
        assert signed_polygon_distance(1.0, 3.0, poly) == pytest.approx(2.0)
        assert signed_polygon_distance(3.5, 3.0, poly) == pytest.approx(-0.5)


class TestIsConfigFree:
    def test_clear_config(self):
        assert is_config_free(FAR, RobotTeam(radii=(1.0,)), [0, 0], 0.0)

    def test_touching_robots_fail_at_margin(self):
        team = RobotTeam(radii=(1.0, 1.0))
        assert not is_config_free(FAR, team, [0, 0, 2, 0], 0.1)

    def test_consistent_with_clearance(self):
        ws = Workspace(bounds=(0, 0, 10, 10), obstacles=(Circle((5, 5), 1.0),))
        team = RobotTeam(radii=(0.5,))
        q = [2.0, 2.0]
        c = config_clearance(ws, team, q).value
        assert is_config_free(ws, team, q, c)
        assert not is_config_free(ws, team, q, c + 1e-6)


class TestSegment:
    def test_degenerate_segment(self):
        assert is_segment_free(FAR, RobotTeam(radii=(1.0,)), [0, 0], [0, 0], 0.5)

    def test_blocked_through_obstacle(self):
        ws = Workspace(bounds=(-10, -10, 10, 10), obstacles=(Circle((0, 0), 1.0),))
        team = RobotTeam(radii=(0.5,))
        assert not is_segment_free(ws, team, [-5, 0], [5, 0], 0.4)

    def test_free_corridor_matches_fine_oracle(self):
        ws = Workspace(
            bounds=(0, 0, 10, 4),
            obstacles=(
                Polygon(vertices=((0, 0), (10, 0), (10, 0.5), (0, 0.5))),
                Polygon(vertices=((0, 3.5), (10, 3.5), (10, 4), (0, 4))),
            ),
        )
        team = RobotTeam(radii=(0.6,))
        a, b = [1.0, 2.0], [9.0, 2.0]
        spacing = 0.25
        assert is_segment_free(ws, team, a, b, spacing)
        assert is_segment_free(ws, team, a, b, spacing / 10)

    def test_coarse_never_invents_violations(self):
        ws = Workspace(bounds=(0, 0, 10, 10), obstacles=(Circle((5, 5), 1.2),))
        team = RobotTeam(radii=(0.4,))
        rng = np.random.default_rng(9)
        for _ in range(40):
            a = rng.uniform(0, 10, size=2)
            b = rng.uniform(0, 10, size=2)
            fine = is_segment_free(ws, team, a, b, 0.1)
            coarse = is_segment_free(ws, team, a, b, 0.2)
            if fine:
                assert coarse

    def test_probe_counts_match_sequential_sweep(self):
        ws = Workspace(bounds=(0, 0, 10, 10), obstacles=(Circle((5, 5), 1.2),))
        team = RobotTeam(radii=(0.4,))
        rng = np.random.default_rng(10)
        for _ in range(30):
            a = rng.uniform(0, 10, size=2)
            b = rng.uniform(0, 10, size=2)
            spacing = 0.15
            ok, count = segment_probe(ws, team, a, b, spacing)
            n = max(1, math.ceil(np.linalg.norm(np.asarray(b) - a) / spacing))
            ts = [0.0, 1.0] + [k / n for k in range(1, n)] if n > 1 else [0.0, 1.0]
            expected = None
            for idx, t in enumerate(ts):
                q = np.asarray(a) + t * (np.asarray(b) - np.asarray(a))
                if config_clearance(ws, team, q).value < -1e-12:
                    expected = (False, idx + 1)
                    break
            if expected is None:
                expected = (True, len(ts))
            assert (ok, count) == expected

    def test_rejects_bad_spacing(self):
        with pytest.raises(ValueError):
            is_segment_free(FAR, RobotTeam(radii=(1.0,)), [0, 0], [1, 0], 0.0)


class TestCspaceBox:
    def test_two_robots(self):
        ws = Workspace(bounds=(0, 0, 10, 10))
        lo, hi = cspace_box(ws, RobotTeam(radii=(1.0, 1.0)))
        assert np.array_equal(lo, [0, 0, 0, 0])
        assert np.array_equal(hi, [10, 10, 10, 10])

    def test_single_robot(self):
        ws = Workspace(bounds=(-1, -2, 3, 4))
        lo, hi = cspace_box(ws, RobotTeam(radii=(0.5,)))
        assert np.array_equal(lo, [-1, -2])
        assert np.array_equal(hi, [3, 4])

    def test_volume_is_area_power_m(self):
        ws = Workspace(bounds=(0, 0, 4, 3))
        lo, hi = cspace_box(ws, RobotTeam(radii=(0.5, 0.5, 0.5)))
        assert np.prod(hi - lo) == pytest.approx(12.0**3)


class TestValidation:
    def test_degenerate_bounds(self):
        with pytest.raises(ValueError):
            Workspace(bounds=(0, 0, 0, 5))

    def test_too_few_vertices(self):
        with pytest.raises(ValueError):
            Polygon(vertices=((0, 0), (1, 0)))

    def test_nonpositive_radius(self):
        with pytest.raises(ValueError):
            RobotTeam(radii=(0.5, 0.0))
        with pytest.raises(ValueError):
            Circle((0, 0), -1.0)
