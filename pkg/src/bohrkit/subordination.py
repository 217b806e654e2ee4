"""Subordination machinery: boundary distance, coefficient bands, sums.

For g subordinate to a univalent f (g = f(omega(z)) with omega a Schwarz
function), classical distortion bounds tie the coefficients of g to the
distance from f(0) to the image boundary:

    univalent target:  |b_n| <= n |f'(0)| <= 4 n dist(f(0), boundary)
    convex target:     |b_n| <= |f'(0)|   <= 2 dist(f(0), boundary)

Built-in targets are the slit-plane model z/(1-z)^2 (dist 1/4) and the
half-plane model 1/(1-z) (dist 1/2, convex).  User-supplied geometry is
taken on trust but must sit inside the distortion band for its declared
convexity.

The sums here are the subordination-side weighted sums: a single series
(sum over n >= 1 of |b_n| phi_n) and the harmonic-pair variant that adds
the co-analytic coefficients.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError
from .harmonic import HarmonicPair, pair_tail_sum
from .series import (
    ClassCheck,
    CoefficientSeries,
    ExtremalFamily,
    FamilyKind,
    SeriesTail,
    SumResult,
    compose,
    expand_extremal,
)
from .weights import WeightSequence


class DomainModel(enum.Enum):
    KOEBE = "koebe"
    HALF_PLANE = "half_plane"
    USER = "user"


@dataclass(frozen=True)
class DomainGeometry:
    """Distance data for a univalent target: dist(f(0), boundary) and f'(0)."""

    model: DomainModel
    dist: float
    fprime0: complex
    convex: bool


def boundary_distance(
    model: DomainModel | str,
    dist: float | None = None,
    fprime0: complex = 1.0,
    convex: bool = False,
) -> DomainGeometry:
    """Geometry for a built-in model, or validated user-supplied data.

    Built-ins: koebe -> dist 1/4 with f'(0) = 1; half_plane -> dist 1/2
    with f'(0) = 1, convex.  User geometry must satisfy the distortion
    band dist in [|f'(0)|/4, |f'(0)|] (univalent) or [|f'(0)|/2, |f'(0)|]
    (convex); DomainError otherwise.
    """
    model = DomainModel(model)
    if model is DomainModel.KOEBE:
        return DomainGeometry(model, 0.25, 1.0 + 0.0j, convex=False)
    if model is DomainModel.HALF_PLANE:
        return DomainGeometry(model, 0.5, 1.0 + 0.0j, convex=True)
    if dist is None or not dist > 0:
        raise DomainError(f"user geometry needs a positive distance, got {dist}")
    scale = abs(complex(fprime0))
    lo = (0.5 if convex else 0.25) * scale
    if not lo <= dist <= scale:
        raise DomainError(
            f"dist={dist} outside the distortion band [{lo}, {scale}] "
            f"for a {'convex' if convex else 'univalent'} target"
        )
    return DomainGeometry(model, float(dist), complex(fprime0), bool(convex))


_MODEL_FAMILY = {
    DomainModel.KOEBE: FamilyKind.KOEBE,
    DomainModel.HALF_PLANE: FamilyKind.HALF_PLANE,
}


def model_series(model: DomainModel | str, order: int) -> CoefficientSeries:
    """Exact expansion of a built-in target."""
    model = DomainModel(model)
    if model not in _MODEL_FAMILY:
        raise DomainError("only built-in models expand to a series")
    return expand_extremal(ExtremalFamily(_MODEL_FAMILY[model]), order)


def subordinate_to_model(
    model: DomainModel | str, omega: CoefficientSeries
) -> CoefficientSeries:
    """g = f_model(omega(z)) with the distortion-band coefficient tail attached.

    The attached tail is |b_n| <= n (slit-plane model) or |b_n| <= 1
    (half-plane model); it holds for every n, in particular beyond the
    truncation order, which is what certifies the weighted sums.
    """
    model = DomainModel(model)
    geom = boundary_distance(model)
    f = model_series(model, omega.truncation_order)
    g = compose(f, omega)
    scale = abs(geom.fprime0)
    tail = SeriesTail("const", scale) if geom.convex else SeriesTail("linear", scale)
    return CoefficientSeries(g.coeffs, g.class_tag, tail)


def coefficient_bound_check(
    g: CoefficientSeries, geom: DomainGeometry, convex: bool | None = None
) -> ClassCheck:
    """Margins of the distortion-band coefficient bounds for 1 <= n <= N.

    Univalent band: 4*n*dist - |b_n|; convex band: 2*dist - |b_n|.
    Returns the per-index margins and their minimum; nonnegative margins
    mean the band holds.
    """
    convex = geom.convex if convex is None else convex
    mods = g.moduli()
    margins = []
    for n in range(1, len(mods)):
        bound = 2.0 * geom.dist if convex else 4.0 * n * geom.dist
        margins.append((n, float(bound - mods[n])))
    if not margins:
        return ClassCheck(True, math.inf, None, ())
    worst_index, worst = min(margins, key=lambda item: item[1])
    return ClassCheck(worst >= -1e-12, worst, worst_index, tuple(margins))


def subordination_bohr_sum(
    g: CoefficientSeries, w: WeightSequence, r: float, tol: float = 1e-12
) -> SumResult:
    """sum_{n>=1} |b_n| phi_n(r) with certified truncation interval."""
    phi = w.values(r, g.truncation_order)
    value = float(np.dot(np.abs(g.coeffs[1:]), phi[1:]))
    err = None
    if g.tail is not None:
        err = float(g.tail.weighted_tail(w, g.truncation_order, r))
    return SumResult(value, err, bool(err is not None and err <= tol))


def harmonic_subordination_sum(
    pair: HarmonicPair, w: WeightSequence, r: float, tol: float = 1e-12
) -> SumResult:
    """sum_{n>=1} |a_n| phi_n(r) + sum_{n>=1} |b_n| phi_n(r).

    Callers are expected to have built pair.h subordinate to a convex
    target (e.g. via subordinate_to_model with the half-plane model); the
    decreasing-weights hypothesis is enforced here (ContractError).
    """
    if not w.decreasing:
        raise ContractError("this sum requires a decreasing weight sequence")
    value, err = pair_tail_sum(pair, w, r)
    return SumResult(value, err, bool(err is not None and err <= tol))


__all__ = [
    "DomainModel",
    "DomainGeometry",
    "boundary_distance",
    "model_series",
    "subordinate_to_model",
    "coefficient_bound_check",
    "subordination_bohr_sum",
    "harmonic_subordination_sum",
]
