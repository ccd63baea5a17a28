"""Lattice families, embeddings, and point enumeration.

Three families are supported: the integer grid ``z``, the staggered grid
``dstar`` (cubic grid plus cell centers), and the hexagonal-family lattice
``astar``, the best known space covering in low dimensions.  Points are
integer row combinations of a generator matrix, ``x = v @ G`` for
``v`` in Z^d; the Gram matrix ``G @ G.T`` gives squared point norms
directly from the integer coefficients.

The ``astar`` family is natively defined by a d x (d+1) generator whose
points live on the zero-sum hyperplane of R^(d+1).  It is brought down to
R^d by reflecting that hyperplane onto ``x_{d+1} = 0`` with a Householder
matrix and dropping the last coordinate; the composition has a closed
form (see :func:`build_embedding_T`) and preserves all distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

#: Default limit on the number of points an enumeration may produce.
DEFAULT_CAP = 20_000_000


class CapacityError(RuntimeError):
    """An enumeration would exceed the configured point cap."""


class Family(Enum):
    """The three supported lattice families."""

    ZD = "z"
    DSTAR = "dstar"
    ASTAR = "astar"


@dataclass(frozen=True, eq=False)
class LatticeSpec:
    """A lattice family instantiated at dimension ``d``.

    ``generator`` is the d x d matrix actually used to produce points
    (rows are basis vectors, points are ``v @ generator``).  For the
    ``astar`` family this is the embedded basis, i.e. the transpose of
    the closed-form embedding matrix, so that the Gram matrix equals the
    Gram of the native d x (d+1) generator.
    """

    family: Family
    d: int
    generator: np.ndarray
    gram: np.ndarray
    det_gram: float
    covering_radius: float


@dataclass(frozen=True, eq=False)
class LatticePoint:
    """A single lattice point: integer coefficients, position, and norm."""

    int_vec: tuple[int, ...]
    position: np.ndarray
    norm: float


def _check_dimension(d: int) -> None:
    if d < 2:
        raise ValueError(f"lattice dimension must be >= 2, got {d}")


def unit_ball_volume(d: int) -> float:
    """Volume of the d-dimensional Euclidean unit ball."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def build_generator(family: Family, d: int) -> np.ndarray:
    """Native generator matrix of a lattice family.

    ``z`` and ``dstar`` generators are d x d; the ``astar`` generator is
    the native d x (d+1) matrix whose rows span the zero-sum hyperplane.
    """
    _check_dimension(d)
    if family is Family.ZD:
        return np.eye(d)
    if family is Family.DSTAR:
        g = np.eye(d)
        g[d - 1, :] = 0.5
        return g
    g = np.zeros((d, d + 1))
    for i in range(d - 1):
        g[i, 0] = 1.0
        g[i, i + 1] = -1.0
    g[d - 1, 0] = -d / (d + 1.0)
    g[d - 1, 1:] = 1.0 / (d + 1.0)
    return g


def householder_P(d: int) -> np.ndarray:
    """Householder reflection taking the zero-sum hyperplane of R^(d+1)
    onto the coordinate hyperplane ``x_{d+1} = 0``.

    The result is symmetric, orthogonal, and an involution (P @ P = I).
    """
    _check_dimension(d)
    big = d + 1
    p = np.full((big, big), -1.0 / (big - math.sqrt(big)))
    p[np.diag_indices(d)] += 1.0
    p[:, d] = 1.0 / math.sqrt(big)
    p[d, :] = 1.0 / math.sqrt(big)
    return p


def build_embedding_T(d: int) -> np.ndarray:
    """Closed-form d x d embedding of the ``astar`` family into R^d.

    Column convention: the embedded point of an integer vector ``v`` is
    ``T @ v``.  The first row is (1, ..., 1, a - 1) and row k >= 2 has -1
    in column k - 1 and ``a`` in the last column, where
    ``a = 1 / (d + 1 - sqrt(d + 1))``.  The same matrix is obtained by
    composing the native generator with the Householder reflection and
    dropping the last coordinate.
    """
    _check_dimension(d)
    a = 1.0 / (d + 1.0 - math.sqrt(d + 1.0))
    t = np.zeros((d, d))
    t[0, : d - 1] = 1.0
    t[0, d - 1] = a - 1.0
    for k in range(1, d):
        t[k, k - 1] = -1.0
        t[k, d - 1] = a
    return t


def covering_radius(family: Family, d: int) -> float:
    """Covering radius of the unit-scale lattice (closed form)."""
    _check_dimension(d)
    if family is Family.ZD:
        return math.sqrt(d) / 2.0
    if family is Family.DSTAR:
        if d % 2 == 1:
            return math.sqrt(2.0 * d - 1.0) / 4.0
        return math.sqrt(2.0 * d) / 4.0
    return math.sqrt(d * (d + 2.0) / (12.0 * (d + 1.0)))


def build_spec(family: Family, d: int) -> LatticeSpec:
    """Bundle the generator in use, its Gram matrix, determinant, and
    covering radius for one (family, dimension) pair.

    ``det_gram`` is always computed numerically from the constructed
    generator rather than read from a table.
    """
    _check_dimension(d)
    if family is Family.ASTAR:
        gen = build_embedding_T(d).T.copy()
    else:
        gen = build_generator(family, d)
    gram = gen @ gen.T
    det_gram = float(np.linalg.det(gram))
    gen.setflags(write=False)
    gram.setflags(write=False)
    return LatticeSpec(
        family=family,
        d=d,
        generator=gen,
        gram=gram,
        det_gram=det_gram,
        covering_radius=covering_radius(family, d),
    )


def quad_norm(v, spec: LatticeSpec) -> float:
    """Norm of the lattice point with integer coefficients ``v``,
    evaluated through the quadratic form of the Gram matrix."""
    a = np.asarray(v, dtype=float)
    return float(math.sqrt(max(0.0, a @ spec.gram @ a)))


def _estimate_ball_count(spec: LatticeSpec, scale: float, radius: float) -> float:
    return (
        unit_ball_volume(spec.d)
        * radius ** spec.d
        / (scale ** spec.d * math.sqrt(spec.det_gram))
    )


def neighbor_steps(family: Family, d: int) -> np.ndarray:
    """Integer step vectors for the breadth-first ball search.

    The steps cover every Voronoi-facet direction of the family (plus the
    unit coefficient steps), so from any nonzero lattice point some step
    strictly reduces the norm.  That makes the in-ball search complete:
    unit coefficient steps alone can strand points for the staggered and
    hexagonal families at small radii, where a point sits inside the ball
    but all its unit-step neighbors fall outside.
    """
    _check_dimension(d)
    units = np.vstack([np.eye(d, dtype=np.int64), -np.eye(d, dtype=np.int64)])
    if family is Family.ZD:
        return units
    if family is Family.DSTAR:
        # Facet vectors: +-e_j in lattice coordinates and the 2^d
        # half-vectors (+-1/2, ..., +-1/2).  In coefficients of the rows
        # (e_1, ..., e_{d-1}, (1/2)1): e_d = (-1, ..., -1, 2) and the half
        # vector with signs s has a_d = s_d, a_j = (s_j - s_d) / 2.
        extra = [np.full(d, -1, dtype=np.int64)]
        extra[0][d - 1] = 2
        extra.append(-extra[0])
        for mask in range(2 ** d):
            signs = np.array([1 if mask >> j & 1 else -1 for j in range(d)], dtype=np.int64)
            coeff = np.empty(d, dtype=np.int64)
            coeff[: d - 1] = (signs[: d - 1] - signs[d - 1]) // 2
            coeff[d - 1] = signs[d - 1]
            extra.append(coeff)
        steps = np.vstack([units, np.vstack(extra)])
    else:
        # Facet vectors correspond to the nonempty proper subsets S of the
        # d+1 lifted coordinates: the lattice point with (d+1-k)/(d+1) on
        # S and -k/(d+1) elsewhere, k = |S|.  Solving v @ G = u_S for the
        # integer coefficients v gives the closed form below.
        extra = []
        top = d + 1
        for mask in range(1, 2 ** top - 1):
            k = bin(mask).count("1")
            c = top - k if mask >> d & 1 else -k
            coeff = np.empty(d, dtype=np.int64)
            for j in range(2, top):  # lifted coordinate j maps to v_{j-1}
                in_s = mask >> (j - 1) & 1
                if c == top - k:
                    coeff[j - 2] = 0 if in_s else 1
                else:
                    coeff[j - 2] = -1 if in_s else 0
            coeff[d - 1] = c
            extra.append(coeff)
        steps = np.vstack([units, np.vstack(extra)])
    return np.unique(steps, axis=0)


def enumerate_ball_arrays(
    spec: LatticeSpec, scale: float, radius: float, cap: int = DEFAULT_CAP
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Array-level ball enumeration: all points of the scaled lattice with
    norm <= radius (plus a small boundary tolerance).

    Returns ``(int_vecs, positions, norms)`` sorted by (norm, then
    lexicographic integer vector).  The search is a breadth-first
    expansion over integer vectors, layer by layer from the origin;
    a candidate enters the next layer only if its own position lies
    inside the ball.
    """
    if scale <= 0.0:
        raise ValueError(f"scale must be positive, got {scale}")
    if radius < 0.0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    estimate = _estimate_ball_count(spec, scale, radius)
    if estimate > cap:
        raise CapacityError(
            f"estimated {estimate:.3g} points exceeds cap {cap} "
            f"(family={spec.family.value}, d={spec.d}, scale={scale}, radius={radius})"
        )

    d = spec.d
    scaled = scale * spec.generator
    tol = 1e-9 * max(1.0, radius)
    steps = neighbor_steps(spec.family, d)
    slice_rows = max(1, 2_000_000 // len(steps))

    # Pack integer vectors into single int64 keys: any coefficient of an
    # in-ball point is bounded by the ellipsoid box of the Gram form, and
    # one extra step cannot leave twice that box.
    inv_diag = np.sqrt(np.diag(np.linalg.inv(spec.gram)))
    coef_bound = np.floor((radius + tol) / scale * inv_diag).astype(np.int64) + 1
    coef_bound += np.abs(steps).max(axis=0)
    radix = 2 * coef_bound + 1
    if float(np.prod(radix.astype(float))) >= 2.0**62:
        raise CapacityError(
            f"coefficient range too large to enumerate (d={d}, radius={radius}, scale={scale})"
        )
    strides = np.ones(d, dtype=np.int64)
    for j in range(1, d):
        strides[j] = strides[j - 1] * radix[j - 1]

    def pack(vectors: np.ndarray) -> np.ndarray:
        return (vectors + coef_bound) @ strides

    layer = np.zeros((1, d), dtype=np.int64)
    layer_keys = pack(layer)
    prev_keys = np.empty(0, dtype=np.int64)
    vec_chunks = [layer]
    pos_chunks = [np.zeros((1, d))]
    norm_chunks = [np.zeros(1)]

    while layer.size:
        pieces = []
        for lo in range(0, len(layer), slice_rows):
            cand = (layer[lo : lo + slice_rows, None, :] + steps[None, :, :]).reshape(-1, d)
            pos = cand @ scaled
            nrm = np.sqrt(np.einsum("ij,ij->i", pos, pos))
            pieces.append(cand[nrm <= radius + tol])
        cand = np.concatenate(pieces)
        keys, first = np.unique(pack(cand), return_index=True)
        cand = cand[first]
        # previously seen vectors can only sit in the last two layers
        fresh = ~np.isin(keys, layer_keys, assume_unique=True)
        fresh &= ~np.isin(keys, prev_keys, assume_unique=True)
        if not fresh.any():
            break
        prev_keys = layer_keys
        layer = cand[fresh]
        layer_keys = keys[fresh]
        pos = layer @ scaled
        nrm = np.sqrt(np.einsum("ij,ij->i", pos, pos))
        vec_chunks.append(layer)
        pos_chunks.append(pos)
        norm_chunks.append(nrm)

    vecs = np.concatenate(vec_chunks)
    positions = np.concatenate(pos_chunks)
    norms = np.concatenate(norm_chunks)
    order = np.lexsort(tuple(vecs[:, j] for j in range(d - 1, -1, -1)) + (norms,))
    return vecs[order], positions[order], norms[order]


def enumerate_ball(
    spec: LatticeSpec, scale: float, radius: float, cap: int = DEFAULT_CAP
) -> list[LatticePoint]:
    """All points of the scaled lattice inside the closed radius-ball,
    origin included, in deterministic (norm, lexicographic) order."""
    vecs, positions, norms = enumerate_ball_arrays(spec, scale, radius, cap)
    return [
        LatticePoint(tuple(v), p, float(n))
        for v, p, n in zip(vecs.tolist(), positions, norms)
    ]


def enumerate_box(
    spec: LatticeSpec,
    scale: float,
    translation,
    lo,
    hi,
    cap: int = DEFAULT_CAP,
) -> list[LatticePoint]:
    """All points of the scaled, translated lattice inside the axis-aligned
    box [lo, hi], in lexicographic integer-vector order.

    The candidate integer coefficients are bounded by mapping the box
    through the inverse of the scaled generator (interval arithmetic per
    coefficient), then filtered by position.  Point norms are Euclidean
    norms of the translated positions.
    """
    if scale <= 0.0:
        raise ValueError(f"scale must be positive, got {scale}")
    d = spec.d
    t = np.asarray(translation, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if t.shape != (d,) or lo.shape != (d,) or hi.shape != (d,):
        raise ValueError("translation/lo/hi must all have length d")
    if np.any(lo > hi):
        raise ValueError("box must satisfy lo <= hi componentwise")

    scaled = scale * spec.generator
    inv = np.linalg.inv(scaled)
    a = lo - t
    b = hi - t
    # Coefficient j of a box point x is (x - t) @ inv[:, j]; bound it by
    # choosing the worst corner per matrix entry.
    low = np.minimum(a[:, None] * inv, b[:, None] * inv).sum(axis=0)
    high = np.maximum(a[:, None] * inv, b[:, None] * inv).sum(axis=0)
    slack = 1e-9 * (1.0 + np.abs(low) + np.abs(high))
    kmin = np.ceil(low - slack).astype(np.int64)
    kmax = np.floor(high + slack).astype(np.int64)
    if np.any(kmax < kmin):
        return []
    counts = (kmax - kmin + 1).astype(float)
    total = float(np.prod(counts))
    if total > cap:
        raise CapacityError(
            f"candidate coefficient box holds {total:.3g} vectors, cap is {cap}"
        )

    tol = 1e-9 * max(1.0, float(np.max(np.abs(lo))), float(np.max(np.abs(hi))))
    tail_ranges = [np.arange(kmin[j], kmax[j] + 1) for j in range(1, d)]
    tail_count = int(np.prod([len(r) for r in tail_ranges])) if d > 1 else 1
    # Candidates are generated in slices along the first coefficient so
    # peak memory stays bounded near the capacity limit.
    per_slice = max(1, int(2_000_000 // max(1, tail_count)))
    first_values = np.arange(kmin[0], kmax[0] + 1)
    kept_vecs, kept_pos = [], []
    for lo_idx in range(0, len(first_values), per_slice):
        firsts = first_values[lo_idx : lo_idx + per_slice]
        grids = np.meshgrid(firsts, *tail_ranges, indexing="ij")
        cand = np.stack([g.ravel() for g in grids], axis=1)
        pos = t + cand @ scaled
        keep = np.all(pos >= lo - tol, axis=1) & np.all(pos <= hi + tol, axis=1)
        if keep.any():
            kept_vecs.append(cand[keep])
            kept_pos.append(pos[keep])
    if not kept_vecs:
        return []
    cand = np.concatenate(kept_vecs)
    pos = np.concatenate(kept_pos)
    norms = np.sqrt(np.einsum("ij,ij->i", pos, pos))
    order = np.lexsort(tuple(cand[:, j] for j in range(d - 1, -1, -1)))
    return [
        LatticePoint(tuple(v), p, float(n))
        for v, p, n in zip(cand[order].tolist(), pos[order], norms[order])
    ]
