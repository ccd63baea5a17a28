"""Clearance/stretch completeness parameters and complete sample sets.

A sample set paired with a connection radius is (delta, eps)-complete when,
for every planning problem admitting a delta-clear solution, the roadmap
built on the set contains a path at most (1 + eps) times the optimal
delta-clear length, and an empty roadmap search certifies that no
delta-clear solution exists.  Such a set is obtained from any lattice by
rescaling it until its covering radius drops to the cover radius
``beta_star``; the matching connection radius is ``r_star``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattices import (
    DEFAULT_CAP,
    Family,
    LatticeSpec,
    build_spec,
    enumerate_ball_arrays,
)


@dataclass(frozen=True)
class CompletenessParams:
    """Derived completeness quantities for one (delta, eps) pair.

    ``beta_star`` is the cover radius a sample set must achieve and
    ``r_star`` the connection radius to pair with it.
    """

    delta: float
    eps: float
    beta_star: float
    r_star: float


@dataclass(frozen=True, eq=False)
class SampleSet:
    """A scaled (and optionally translated) lattice that is a
    beta_star-cover, hence (delta, eps)-complete with radius r_star."""

    spec: LatticeSpec
    params: CompletenessParams
    scale: float
    translation: np.ndarray


@dataclass(frozen=True, eq=False)
class NeighborTemplate:
    """The nonzero sample-set points within the connection radius of the
    anchor, in (norm, lexicographic) order.

    Because the set is a lattice, the neighbor set of any sample is this
    template translated to it.
    """

    int_offsets: np.ndarray
    offsets: np.ndarray
    norms: np.ndarray

    def __len__(self) -> int:
        return len(self.norms)


def derive_params(delta: float, eps: float) -> CompletenessParams:
    """Cover radius and connection radius for a clearance ``delta`` and
    stretch factor ``eps``:

        beta_star = delta * eps / sqrt(1 + eps^2)
        r_star    = 2 * delta * (1 + eps) / sqrt(1 + eps^2)
    """
    if delta <= 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    root = math.sqrt(1.0 + eps * eps)
    return CompletenessParams(
        delta=delta,
        eps=eps,
        beta_star=delta * eps / root,
        r_star=2.0 * delta * (1.0 + eps) / root,
    )


def build_sample_set(
    family: Family,
    d: int,
    params: CompletenessParams,
    translation=None,
) -> SampleSet:
    """The (delta, eps)-complete sample set of a lattice family at
    dimension ``d``, anchored at ``translation`` (default: the origin).

    The scale is beta_star divided by the family's covering radius, which
    reproduces the per-family closed forms: 2*beta_star/sqrt(d) for the
    grid, 4*beta_star/sqrt(2d-1) or sqrt(8/d)*beta_star for the staggered
    grid (odd/even d), and sqrt(12(d+1)/(d(d+2)))*beta_star for the
    hexagonal family.
    """
    spec = build_spec(family, d)
    if translation is None:
        translation = np.zeros(d)
    anchor = np.array(translation, dtype=float)
    if anchor.shape != (d,):
        raise ValueError(f"translation must have dimension {d}, got {anchor.shape}")
    anchor.setflags(write=False)
    return SampleSet(
        spec=spec,
        params=params,
        scale=params.beta_star / spec.covering_radius,
        translation=anchor,
    )


def neighbor_template(sample_set: SampleSet, cap: int = DEFAULT_CAP) -> NeighborTemplate:
    """Offsets from a sample to every other sample within r_star.

    Computed once per run; the origin itself is excluded.  The offset list
    is symmetric under negation.
    """
    vecs, positions, norms = enumerate_ball_arrays(
        sample_set.spec, sample_set.scale, sample_set.params.r_star, cap
    )
    keep = norms > 0.0
    int_offsets = vecs[keep]
    offsets = positions[keep]
    kept_norms = norms[keep]
    for arr in (int_offsets, offsets, kept_norms):
        arr.setflags(write=False)
    return NeighborTemplate(int_offsets=int_offsets, offsets=offsets, norms=kept_norms)
