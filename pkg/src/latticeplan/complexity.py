"""Sample-complexity and collision-check-complexity accounting.

The number of samples a roadmap vertex connects to is controlled by the
rescaled ball radius ``theta_bar = 2 * f * (1 + 1/eps)`` where ``f`` is
the lattice covering radius: the count of set points within r_star equals
the count of unit-scale lattice points within theta_bar.  Its leading
term is ball_volume(d) * theta_bar^d / sqrt(det).  Collision-check
complexity is the summed norm of those points; a naive bound multiplies
the count by r_star, and a sharper bound splits the ball into geometric
annuli, improving the constant to ``zeta(d) < 1``.

The number-theoretic error term in exact lattice-point counts has no
closed form; reports carry the empirical residual (exact minus leading
term) in its place.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .completeness import CompletenessParams, SampleSet, build_sample_set, derive_params
from .lattices import (
    DEFAULT_CAP,
    CapacityError,
    Family,
    LatticeSpec,
    enumerate_ball_arrays,
    unit_ball_volume,
)

CSV_HEADER = "family,d,delta,eps,theta_bar,leading,exact,residual,cc_exact,cc_naive,cc_annuli,zeta"


@dataclass(frozen=True)
class ComplexityReport:
    """One row of the complexity sweep.

    ``exact``, ``residual`` and ``cc_exact`` are None when enumeration
    would exceed the point cap.
    """

    family: Family
    d: int
    delta: float
    eps: float
    theta_bar: float
    leading: float
    exact: int | None
    residual: float | None
    cc_exact: float | None
    cc_naive: float
    cc_annuli: float
    zeta: float


def theta_bar(f: float, eps: float) -> float:
    """Rescaled ball radius 2 * f * (1 + 1/eps)."""
    if f <= 0.0:
        raise ValueError(f"covering radius must be positive, got {f}")
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    return 2.0 * f * (1.0 + 1.0 / eps)


def ball_volume(d: int) -> float:
    """Volume of the d-dimensional Euclidean unit ball."""
    return unit_ball_volume(d)


def leading_sample_term(spec: LatticeSpec, theta: float) -> float:
    """Leading term of the lattice-point count inside a theta-ball:
    ball_volume(d) * theta^d / sqrt(det)."""
    if theta < 0.0:
        raise ValueError(f"theta must be nonnegative, got {theta}")
    return unit_ball_volume(spec.d) * theta ** spec.d / math.sqrt(spec.det_gram)


def exact_sample_complexity(sample_set: SampleSet, cap: int = DEFAULT_CAP) -> int:
    """Exact number of sample-set points within r_star of a sample."""
    _, _, norms = enumerate_ball_arrays(
        sample_set.spec, sample_set.scale, sample_set.params.r_star, cap
    )
    return int(len(norms))


def exact_cc(sample_set: SampleSet, cap: int = DEFAULT_CAP) -> float:
    """Exact collision-check complexity: the summed norms of the
    sample-set points within r_star of a sample."""
    _, _, norms = enumerate_ball_arrays(
        sample_set.spec, sample_set.scale, sample_set.params.r_star, cap
    )
    return float(norms.sum())


def xi(d: int) -> float:
    """Annuli shrink base (d / (d + 1))^d; tends to 1/e."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return (d / (d + 1.0)) ** d


def zeta(d: int) -> float:
    """Annuli improvement factor, strictly below 1:

        zeta = 1 - (xi^(d+2) - xi) / (d * xi - (d + 1)).
    """
    x = xi(d)
    return 1.0 - (x ** (d + 2) - x) / (d * x - (d + 1.0))


def annuli_gamma_oracle(d: int, r: float, theta: float) -> float:
    """Direct finite sum over the annuli partition, the independent check
    for :func:`zeta`:

        gamma = r * theta^d + sum_i (r_i - r_{i-1}) * theta_i^d

    with r_i = (d/(d+1))^i * r, theta_i = r_i * theta / r, and d annuli.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if r <= 0.0 or theta <= 0.0:
        raise ValueError("r and theta must be positive")
    shrink = d / (d + 1.0)
    total = r * theta ** d
    prev = r
    for i in range(1, d + 1):
        r_i = shrink ** i * r
        theta_i = r_i * theta / r
        total += (r_i - prev) * theta_i ** d
        prev = r_i
    return total


def cc_bounds(spec: LatticeSpec, params: CompletenessParams) -> tuple[float, float]:
    """Leading terms of the naive and annuli collision-check bounds,
    ``(r_star * leading, zeta * r_star * leading)``."""
    tb = theta_bar(spec.covering_radius, params.eps)
    naive = params.r_star * leading_sample_term(spec, tb)
    return naive, zeta(spec.d) * naive


def sweep_report(
    families: Sequence[Family],
    dims: Sequence[int],
    delta: float,
    eps: float,
    cap: int = DEFAULT_CAP,
) -> list[ComplexityReport]:
    """One report row per (family, d), in input order.

    Rows whose enumeration exceeds the cap keep the theoretical columns
    and leave the exact columns absent.
    """
    if not dims:
        raise ValueError("dims must be non-empty")
    params = derive_params(delta, eps)
    rows = []
    for family in families:
        for d in dims:
            sample_set = build_sample_set(family, d, params)
            spec = sample_set.spec
            tb = theta_bar(spec.covering_radius, eps)
            leading = leading_sample_term(spec, tb)
            naive, annuli = cc_bounds(spec, params)
            exact = residual = cc = None
            try:
                _, _, norms = enumerate_ball_arrays(
                    spec, sample_set.scale, params.r_star, cap
                )
                exact = int(len(norms))
                residual = exact - leading
                cc = float(norms.sum())
            except CapacityError:
                pass
            rows.append(
                ComplexityReport(
                    family=family,
                    d=d,
                    delta=delta,
                    eps=eps,
                    theta_bar=tb,
                    leading=leading,
                    exact=exact,
                    residual=residual,
                    cc_exact=cc,
                    cc_naive=naive,
                    cc_annuli=annuli,
                    zeta=zeta(d),
                )
            )
    return rows


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return format(value, ".12g")


def reports_to_csv(rows: Iterable[ComplexityReport]) -> str:
    """Serialize report rows to the fixed CSV schema (floats rendered with
    12 significant digits, absent values as empty cells)."""
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for r in rows:
        cells = [
            r.family.value,
            str(r.d),
            _cell(r.delta),
            _cell(r.eps),
            _cell(r.theta_bar),
            _cell(r.leading),
            _cell(r.exact),
            _cell(r.residual),
            _cell(r.cc_exact),
            _cell(r.cc_naive),
            _cell(r.cc_annuli),
            _cell(r.zeta),
        ]
        out.write(",".join(cells) + "\n")
    return out.getvalue()
