import math

import numpy as np
import pytest

from latticeplan.lattices import (
    CapacityError,
    Family,
    build_embedding_T,
    build_generator,
    build_spec,
    covering_radius,
    enumerate_ball,
    enumerate_box,
    householder_P,
    quad_norm,
    unit_ball_volume,
)

from oracles import brute_force_ball, brute_force_box

ALL_FAMILIES = list(Family)


def embedding_matrix_E(d):
    return np.hstack([np.eye(d), np.zeros((d, 1))])


class TestGenerators:
    def test_zd_identity(self):
        assert np.array_equal(build_generator(Family.ZD, 3), np.eye(3))

    def test_dstar_d2(self):
        assert np.allclose(build_generator(Family.DSTAR, 2), [[1, 0], [0.5, 0.5]])

    def test_astar_d2_raw(self):
        g = build_generator(Family.ASTAR, 2)
        assert np.allclose(g, [[1, -1, 0], [-2 / 3, 1 / 3, 1 / 3]])

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_rejects_dimension_below_two(self, family):
        with pytest.raises(ValueError):
            build_generator(family, 1)

    @pytest.mark.parametrize("d", range(2, 9))
    def test_astar_rows_sum_to_zero(self, d):
        g = build_generator(Family.ASTAR, d)
        assert np.abs(g.sum(axis=1)).max() < 1e-12

    @pytest.mark.parametrize("d", range(2, 9))
    def test_astar_points_stay_on_zero_sum_plane(self, d):
        g = build_generator(Family.ASTAR, d)
        rng = np.random.default_rng(d)
        for _ in range(50):
            v = rng.integers(-5, 6, size=d)
            assert abs((v @ g).sum()) < 1e-10


class TestHouseholder:
    def test_d2_entries(self):
        p = householder_P(2)
        assert p[0][0] == pytest.approx(1 - 1 / (3 - math.sqrt(3)), abs=1e-12)
        assert p[0][1] == pytest.approx(-1 / (3 - math.sqrt(3)), abs=1e-12)
        assert p[0][2] == pytest.approx(1 / math.sqrt(3), abs=1e-12)
        assert p[2][2] == pytest.approx(1 / math.sqrt(3), abs=1e-12)

    @pytest.mark.parametrize("d", range(2, 11))
    def test_symmetric_involution_orthogonal(self, d):
        p = householder_P(d)
        assert np.abs(p - p.T).max() < 1e-12
        assert np.abs(p @ p - np.eye(d + 1)).max() < 1e-12
        assert np.abs(np.linalg.norm(p, axis=1) - 1.0).max() < 1e-12


class TestEmbedding:
    def test_d2_closed_form(self):
        a = 1 / (3 - math.sqrt(3))
        t = build_embedding_T(2)
        assert np.allclose(t, [[1, a - 1], [-1, a]], atol=1e-12)
        assert np.allclose(t.T @ t, [[2, -1], [-1, 2 / 3]], atol=1e-12)

    @pytest.mark.parametrize("d", range(2, 11))
    def test_matches_composed_mapping(self, d):
        t = build_embedding_T(d)
        composed = embedding_matrix_E(d) @ householder_P(d) @ build_generator(Family.ASTAR, d).T
        assert np.abs(t - composed).max() < 1e-10

    @pytest.mark.parametrize("d", range(2, 11))
    def test_gram_identity(self, d):
        t = build_embedding_T(d)
        g = build_generator(Family.ASTAR, d)
        assert np.abs(t.T @ t - g @ g.T).max() < 1e-10

    @pytest.mark.parametrize("d", range(2, 9))
    def test_isometry_on_random_integer_vectors(self, d):
        t = build_embedding_T(d)
        g = build_generator(Family.ASTAR, d)
        p = householder_P(d)
        rng = np.random.default_rng(100 + d)
        for _ in range(100):
            v = rng.integers(-20, 21, size=d).astype(float)
            lifted = g.T @ v
            assert np.linalg.norm(t @ v) == pytest.approx(
                np.linalg.norm(lifted), rel=1e-9, abs=1e-12
            )
            # the reflected point loses its last coordinate
            assert abs((p @ lifted)[d]) < 1e-10


class TestCoveringRadius:
    def test_closed_form_values(self):
        assert covering_radius(Family.ZD, 4) == pytest.approx(1.0)
        assert covering_radius(Family.DSTAR, 3) == pytest.approx(math.sqrt(5) / 4)
        assert covering_radius(Family.ASTAR, 3) == pytest.approx(math.sqrt(15.0 / 48.0))

    def test_dstar_and_astar_coincide_at_d3(self):
        assert covering_radius(Family.DSTAR, 3) == pytest.approx(
            covering_radius(Family.ASTAR, 3), abs=1e-15
        )

    @pytest.mark.parametrize("d", range(2, 31))
    def test_formulas(self, d):
        assert covering_radius(Family.ZD, d) == pytest.approx(math.sqrt(d) / 2, rel=1e-12)
        expected = math.sqrt(2 * d - 1) / 4 if d % 2 else math.sqrt(2 * d) / 4
        assert covering_radius(Family.DSTAR, d) == pytest.approx(expected, rel=1e-12)
        assert covering_radius(Family.ASTAR, d) == pytest.approx(
            math.sqrt(d * (d + 2) / (12 * (d + 1))), rel=1e-12
        )


class TestSpec:
    @pytest.mark.parametrize("d", range(2, 13))
    def test_determinants(self, d):
        assert build_spec(Family.ZD, d).det_gram == pytest.approx(1.0, rel=1e-9)
        assert build_spec(Family.DSTAR, d).det_gram == pytest.approx(0.25, rel=1e-9)
        assert build_spec(Family.ASTAR, d).det_gram == pytest.approx(1 / (d + 1), rel=1e-9)

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_gram_is_spd_and_consistent(self, family, d):
        spec = build_spec(family, d)
        assert np.abs(spec.gram - spec.gram.T).max() < 1e-12
        assert np.all(np.linalg.eigvalsh(spec.gram) > 0)
        assert np.abs(spec.gram - spec.generator @ spec.generator.T).max() < 1e-12
        assert spec.det_gram == pytest.approx(np.linalg.det(spec.gram), rel=1e-9)


class TestQuadNorm:
    def test_zero(self):
        assert quad_norm([0, 0], build_spec(Family.ZD, 2)) == 0.0

    def test_euclidean_for_grid(self):
        assert quad_norm([3, 4], build_spec(Family.ZD, 2)) == pytest.approx(5.0)

    def test_astar_basis_vector(self):
        spec = build_spec(Family.ASTAR, 2)
        assert quad_norm([0, 1], spec) == pytest.approx(math.sqrt(2 / 3), rel=1e-12)

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_matches_generator_norm(self, family):
        spec = build_spec(family, 4)
        rng = np.random.default_rng(5)
        for _ in range(50):
            v = rng.integers(-8, 9, size=4)
            expected = np.linalg.norm(v @ spec.generator)
            assert quad_norm(v, spec) == pytest.approx(expected, rel=1e-9, abs=1e-12)


class TestEnumerateBall:
    def test_grid_nine_points(self):
        pts = enumerate_ball(build_spec(Family.ZD, 2), 1.0, 1.5)
        assert len(pts) == 9

    def test_radius_zero_gives_origin(self):
        for family in ALL_FAMILIES:
            pts = enumerate_ball(build_spec(family, 3), 1.0, 0.0)
            assert len(pts) == 1
            assert pts[0].int_vec == (0, 0, 0)
            assert pts[0].norm == 0.0

    def test_astar2_thirteen_points(self):
        pts = enumerate_ball(build_spec(Family.ASTAR, 2), 1.0, math.sqrt(2))
        assert len(pts) == 13

    def test_sorted_by_norm_then_lex(self):
        pts = enumerate_ball(build_spec(Family.DSTAR, 2), 1.0, 2.0)
        keys = [(p.norm, p.int_vec) for p in pts]
        assert keys == sorted(keys)

    def test_point_fields_consistent(self):
        spec = build_spec(Family.ASTAR, 3)
        for p in enumerate_ball(spec, 0.7, 1.8):
            assert np.allclose(p.position, np.array(p.int_vec) @ (0.7 * spec.generator))
            assert p.norm == pytest.approx(np.linalg.norm(p.position), abs=1e-12)

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_matches_brute_force(self, family, d):
        spec = build_spec(family, d)
        for scale in (0.5, 1.0, 2.0):
            for radius in (0.5, 1.0, 2.0, 3.0):
                got = {p.int_vec for p in enumerate_ball(spec, scale, radius)}
                assert got == brute_force_ball(spec, scale, radius), (
                    family,
                    d,
                    scale,
                    radius,
                )

    def test_capacity_error(self):
        with pytest.raises(CapacityError):
            enumerate_ball(build_spec(Family.ZD, 6), 0.001, 10.0, cap=10_000)

    def test_rejects_bad_arguments(self):
        spec = build_spec(Family.ZD, 2)
        with pytest.raises(ValueError):
            enumerate_ball(spec, 0.0, 1.0)
        with pytest.raises(ValueError):
            enumerate_ball(spec, 1.0, -1.0)


class TestEnumerateBox:
    def test_grid_box(self):
        pts = enumerate_box(build_spec(Family.ZD, 2), 1.0, [0, 0], [0, 0], [2, 2])
        assert len(pts) == 9

    def test_empty_box_off_lattice(self):
        pts = enumerate_box(build_spec(Family.ZD, 2), 1.0, [0, 0], [0.4, 0.4], [0.4, 0.4])
        assert pts == []

    def test_dstar_unit_box_against_oracle(self):
        spec = build_spec(Family.DSTAR, 2)
        got = {p.int_vec for p in enumerate_box(spec, 1.0, [0, 0], [0, 0], [1, 1])}
        expected = brute_force_box(spec, 1.0, [0, 0], [0, 0], [1, 1], half=4)
        assert got == expected
        positions = sorted(
            tuple(np.round(p.position, 9))
            for p in enumerate_box(spec, 1.0, [0, 0], [0, 0], [1, 1])
        )
        assert positions == [
            (0.0, 0.0),
            (0.0, 1.0),
            (0.5, 0.5),
            (1.0, 0.0),
            (1.0, 1.0),
        ]

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_translated_boxes_match_oracle(self, family):
        spec = build_spec(family, 3)
        translation = [0.3, -0.2, 0.1]
        lo = [-1.0, -0.5, -1.2]
        hi = [1.5, 1.0, 0.8]
        got = {p.int_vec for p in enumerate_box(spec, 0.6, translation, lo, hi)}
        assert got == brute_force_box(spec, 0.6, translation, lo, hi, half=24)

    def test_monotone_in_box_size(self):
        spec = build_spec(Family.ASTAR, 2)
        sizes = [0.5, 1.0, 2.0, 4.0]
        counts = [
            len(enumerate_box(spec, 0.7, [0, 0], [-s, -s], [s, s])) for s in sizes
        ]
        assert counts == sorted(counts)

    def test_rejects_inverted_box(self):
        with pytest.raises(ValueError):
            enumerate_box(build_spec(Family.ZD, 2), 1.0, [0, 0], [1, 0], [0, 1])

    def test_capacity_error(self):
        with pytest.raises(CapacityError):
            enumerate_box(
                build_spec(Family.ZD, 2), 0.001, [0, 0], [0, 0], [10, 10], cap=100
            )


class TestCovering:
    @pytest.mark.parametrize("family", ALL_FAMILIES)
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_random_queries_within_covering_radius(self, family, d):
        spec = build_spec(family, d)
        f = spec.covering_radius
        rng = np.random.default_rng(17 * d + hash(family.value) % 100)
        queries = rng.random((200, d))
        for q in queries:
            box = enumerate_box(spec, 1.0, np.zeros(d), q - 1.5 * f, q + 1.5 * f)
            dist = min(np.linalg.norm(p.position - q) for p in box)
            assert dist <= f + 1e-9

    def test_grid_bound_tight_at_cube_center(self):
        for d in (2, 3, 4):
            spec = build_spec(Family.ZD, d)
            q = 0.5 * np.ones(d)
            box = enumerate_box(spec, 1.0, np.zeros(d), q - 2, q + 2)
            dist = min(np.linalg.norm(p.position - q) for p in box)
            assert dist == pytest.approx(math.sqrt(d) / 2, abs=1e-9)


def test_unit_ball_volume():
    assert unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-12)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3, rel=1e-12)
