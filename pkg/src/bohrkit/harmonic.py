"""Harmonic pairs f = h + conj(g) with a dilatation-bounded co-analytic part.

Pairs are built by construction: g' = lam * k * h' with |lam| = 1 and
k in [0, 1] integrates to g = lam * k * (h - h(0)), i.e. b_n = lam*k*a_n
for n >= 1 and b_0 = 0.  That makes |g'| <= k |h'| hold identically, so
the dilatation hypothesis is satisfied by construction rather than checked
pointwise.

Provided here:

* construct_pair      -- the termwise construction above,
* lemma_c_check       -- the weighted quadratic coefficient comparison
                         sum |b_n|^2 phi_n <= k^2 sum |a_n|^2 phi_n,
* harmonic_bohr_sum   -- |a_0|^p + sum |a_n| phi_n(r) + sum |b_n| phi_n(r),
                         with the constant term omitted on request for the
                         subordination variant whose sum starts at n = 1.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError
from .series import ClassTag, CoefficientSeries, SumResult
from .weights import WeightSequence

_UNIT_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class HarmonicPair:
    """Analytic part h (coefficients a_n), co-analytic part g (b_n, b_0 = 0),
    dilatation bound k, and the unit factor lam used in construction."""

    h: CoefficientSeries
    g: CoefficientSeries
    k: float
    lam: complex = 1.0 + 0.0j

    def __post_init__(self):
        if abs(self.g.coeffs[0]) > _UNIT_TOL:
            raise ContractError("co-analytic part must have b_0 = 0")
        if not 0.0 <= self.k <= 1.0:
            raise DomainError(f"k={self.k} outside [0, 1]")


def construct_pair(h: CoefficientSeries, k: float, lam: complex = 1.0) -> HarmonicPair:
    """Pair with b_n = lam * k * a_n for n >= 1 and b_0 = 0.

    lam must be unimodular within 1e-14 and k in [0, 1]; the co-analytic
    tail inherits h's coefficient tail scaled by k.
    """
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > _UNIT_TOL:
        raise DomainError(f"|lam|={abs(lam)} must equal 1")
    if not 0.0 <= k <= 1.0:
        raise DomainError(f"k={k} outside [0, 1]")
    b = lam * k * np.asarray(h.coeffs, dtype=complex)
    b[0] = 0.0
    tail = h.tail.scaled(k) if h.tail is not None else None
    g = CoefficientSeries(b, ClassTag.GENERIC, tail)
    return HarmonicPair(h=h, g=g, k=k, lam=lam)


def unit_from_turns(turns: float) -> complex:
    """Unimodular lam = exp(2*pi*i*turns); keeps configs real-valued."""
    lam = cmath.exp(2j * cmath.pi * turns)
    return lam / abs(lam)


@dataclass(frozen=True)
class LemmaCCheck:
    """Both weighted quadratic sums, their certified tails, and the verdict."""

    lhs: float
    rhs: float
    holds: bool
    lhs_error: float | None
    rhs_error: float | None


def lemma_c_check(
    pair: HarmonicPair, w: WeightSequence, r: float, tol: float = 1e-12
) -> LemmaCCheck:
    """Compare sum |b_n|^2 phi_n(r) against k^2 sum |a_n|^2 phi_n(r).

    The comparison is only meaningful for decreasing weight sequences, so
    the flag is required (ContractError otherwise).  For constructed pairs
    both truncated sums agree termwise up to the k^2 factor, so equality
    holds at every truncation order.
    """
    if not w.decreasing:
        raise ContractError("the quadratic comparison requires decreasing weights")
    order = min(pair.h.truncation_order, pair.g.truncation_order)
    phi = w.values(r, order)
    a2 = np.abs(pair.h.coeffs[1 : order + 1]) ** 2
    b2 = np.abs(pair.g.coeffs[1 : order + 1]) ** 2
    lhs = float(np.dot(b2, phi[1:]))
    rhs = float(pair.k**2 * np.dot(a2, phi[1:]))
    lhs_err = _squared_tail(pair.g, w, order, r)
    rhs_err = _squared_tail(pair.h, w, order, r)
    if rhs_err is not None:
        rhs_err *= pair.k**2
    return LemmaCCheck(lhs, rhs, lhs <= rhs + tol, lhs_err, rhs_err)


def _squared_tail(
    s: CoefficientSeries, w: WeightSequence, order: int, r: float
) -> float | None:
    """Bound on sum_{n>order} |a_n|^2 phi_n(r) from the declared tail."""
    t = s.tail
    if t is None:
        return None
    if t.is_zero:
        return 0.0
    if t.kind == "const":
        return t.coeff**2 * w.phi_tail(order, r)
    if t.kind == "geometric":
        # |a_n|^2 <= coeff^2 ratio^(2(n-1)) <= coeff^2 ratio^(2*order)
        return t.coeff**2 * t.ratio ** (2 * order) * w.phi_tail(order, r)
    return None  # linear growth squared needs an n^2 majorant we do not carry


def harmonic_bohr_sum(
    pair: HarmonicPair,
    w: WeightSequence,
    p: float,
    r: float,
    constant_term: bool = True,
    tol: float = 1e-12,
) -> SumResult:
    """|a_0|^p + sum |a_n| phi_n(r) + sum |b_n| phi_n(r), n >= 1.

    The constant-term form requires phi_0 identically 1 and p in (0, 1];
    with ``constant_term=False`` the |a_0|^p term is omitted (the sum then
    starts at n = 1) and p is ignored.
    """
    if constant_term:
        if not 0.0 < p <= 1.0:
            raise DomainError(f"p={p} outside (0, 1]")
        if not w.phi0_is_one:
            raise DomainError("this sum is defined for weights with phi_0 = 1")
    value, err = pair_tail_sum(pair, w, r)
    if constant_term:
        value += abs(pair.h.coeffs[0]) ** p
    return SumResult(float(value), err, bool(err is not None and err <= tol))


def pair_tail_sum(
    pair: HarmonicPair, w: WeightSequence, r: float
) -> tuple[float, float | None]:
    """sum_{n>=1} |a_n| phi_n(r) + sum_{n>=1} |b_n| phi_n(r) and its tail bound."""
    h, g = pair.h, pair.g
    phi_h = w.values(r, h.truncation_order)
    phi_g = w.values(r, g.truncation_order)
    value = float(
        np.dot(np.abs(h.coeffs[1:]), phi_h[1:]) + np.dot(np.abs(g.coeffs[1:]), phi_g[1:])
    )
    if h.tail is None or g.tail is None:
        return value, None
    err = h.tail.weighted_tail(w, h.truncation_order, r) + g.tail.weighted_tail(
        w, g.truncation_order, r
    )
    return value, float(err)
