"""Minimal positive roots of the radius equations.

Each supported equation compares a constant or phi_0 against a multiple of
an aggregate weight sum; the radius R is the leftmost sign change of
G(x) = LHS(x) - RHS(x) on (0, r_max].  Located by a forward scan (step
1e-3 from x = 1e-6) followed by bisection; the result carries the bracket,
the residual G(R), and a scan certificate recording that G kept one sign
left of the bracket.

For power weights every equation also has a closed form, exposed through
closed_form_radius as an independent cross-check of the solver.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ContractError, DomainError, NoRootInRange
from .weights import WeightKind, WeightSequence, phi_sum, psi_sum

DEFAULT_TOL = 1e-12
SCAN_START = 1e-6
SCAN_STEP = 1e-3
_WEIGHT_TOL = 1e-13


class Equation(enum.Enum):
    """Radius equations, keyed by the CLI names.

    thma: phi0(x) = (2/p) * Phi1(x)     p in (0, 2]
    thm1: phi0(x) = (1/p) * Phi1(x)     p in (0, 1]
    thm2: p = (1+k) * Phi1(x)           p in (0, 1], k in [0, 1], phi0 == 1
    thm3: 1 = 4 * Psi1(x)
    thm4: 1 = 2 * Phi1(x)
    thm5: 1 = 2 * (1+k) * Phi1(x)       k in [0, 1]
    """

    THMA = "thma"
    THM1 = "thm1"
    THM2 = "thm2"
    THM3 = "thm3"
    THM4 = "thm4"
    THM5 = "thm5"


_NEEDS_P = {Equation.THMA: (0.0, 2.0), Equation.THM1: (0.0, 1.0), Equation.THM2: (0.0, 1.0)}
_NEEDS_K = (Equation.THM2, Equation.THM5)


@dataclass(frozen=True)
class RadiusProblem:
    """A radius equation together with its weights and parameters."""

    equation: Equation
    weights: WeightSequence
    p: float | None = None
    k: float | None = None

    def __post_init__(self):
        eq = self.equation
        if eq in _NEEDS_P:
            lo, hi = _NEEDS_P[eq]
            if self.p is None or not lo < self.p <= hi:
                raise DomainError(f"{eq.value} needs p in ({lo}, {hi}], got {self.p}")
        elif self.p is not None:
            raise DomainError(f"{eq.value} takes no p parameter")
        if eq in _NEEDS_K:
            if self.k is None or not 0.0 <= self.k <= 1.0:
                raise DomainError(f"{eq.value} needs k in [0, 1], got {self.k}")
        elif self.k is not None:
            raise DomainError(f"{eq.value} takes no k parameter")
        if eq is Equation.THM2 and not self.weights.phi0_is_one:
            raise ContractError("thm2 requires phi_0(r) = 1 identically")
        if eq is Equation.THM3 and not self.weights.has_psi_tail:
            raise ContractError(
                "thm3 needs the index-weighted sum; weights declare no majorant for it"
            )

    def gap(self, x: float, weight_tol: float = _WEIGHT_TOL) -> float:
        """G(x) = LHS(x) - RHS(x) for this equation."""
        eq, w = self.equation, self.weights
        if eq is Equation.THMA:
            return w.phi0(x) - (2.0 / self.p) * phi_sum(w, x, weight_tol)
        if eq is Equation.THM1:
            return w.phi0(x) - phi_sum(w, x, weight_tol) / self.p
        if eq is Equation.THM2:
            return self.p - (1.0 + self.k) * phi_sum(w, x, weight_tol)
        if eq is Equation.THM3:
            return 1.0 - 4.0 * psi_sum(w, x, weight_tol)
        if eq is Equation.THM4:
            return 1.0 - 2.0 * phi_sum(w, x, weight_tol)
        return 1.0 - 2.0 * (1.0 + self.k) * phi_sum(w, x, weight_tol)


@dataclass(frozen=True)
class RadiusResult:
    """Located root with bracket, residual, and leftmost-root evidence."""

    R: float
    bracket: tuple
    residual: float
    certificate: dict


def solve_radius(prob: RadiusProblem, tol: float = DEFAULT_TOL) -> RadiusResult:
    """Leftmost sign change of the radius equation on (0, r_max].

    Scans forward from SCAN_START in steps of SCAN_STEP until G changes
    sign, then bisects the bracketing step down to width <= tol.  The
    certificate records how many scan points kept the starting sign, so
    roots separated by less than the scan step would be reported against
    that resolution rather than silently missed.
    """
    if not tol > 0:
        raise DomainError(f"tol={tol} must be positive")
    r_max = prob.weights.r_max
    x0 = SCAN_START
    g0 = prob.gap(x0)
    if g0 == 0.0:
        return RadiusResult(x0, (x0, x0), 0.0, _certificate(0))
    sign0 = math.copysign(1.0, g0)

    lo = x0
    hi = None
    points_checked = 0
    x = x0 + SCAN_STEP
    while True:
        x = min(x, r_max)
        g = prob.gap(x)
        if g == 0.0 or math.copysign(1.0, g) != sign0:
            hi = x
            break
        points_checked += 1
        lo = x
        if x >= r_max:
            raise NoRootInRange(
                f"{prob.equation.value}: no sign change on ({SCAN_START}, {r_max}]"
            )
        x += SCAN_STEP

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # bracket already at float resolution
        g_mid = prob.gap(mid)
        if g_mid == 0.0:
            lo = hi = mid
            break
        if math.copysign(1.0, g_mid) == sign0:
            lo = mid
        else:
            hi = mid

    root = 0.5 * (lo + hi)
    return RadiusResult(root, (lo, hi), prob.gap(root), _certificate(points_checked))


def _certificate(points_checked: int) -> dict:
    return {
        "scan_start": SCAN_START,
        "scan_step": SCAN_STEP,
        "points_before_bracket": points_checked,
        "single_signed_before_bracket": True,
    }


def closed_form_radius(
    equation: Equation, p: float | None = None, k: float | None = None
) -> float:
    """Closed-form radius for power weights (phi_n(r) = r^n).

    thma -> p/(p+2), thm1 -> p/(1+p), thm2 -> p/(k+1+p), thm3 -> 3-sqrt(8),
    thm4 -> 1/3, thm5 -> 1/(3+2k).  Parameter ranges as in RadiusProblem.
    """
    if equation in _NEEDS_P:
        lo, hi = _NEEDS_P[equation]
        if p is None or not lo < p <= hi:
            raise DomainError(f"{equation.value} needs p in ({lo}, {hi}], got {p}")
    if equation in _NEEDS_K and (k is None or not 0.0 <= k <= 1.0):
        raise DomainError(f"{equation.value} needs k in [0, 1], got {k}")
    if equation is Equation.THMA:
        return p / (p + 2.0)
    if equation is Equation.THM1:
        return p / (1.0 + p)
    if equation is Equation.THM2:
        return p / (k + 1.0 + p)
    if equation is Equation.THM3:
        return 3.0 - math.sqrt(8.0)
    if equation is Equation.THM4:
        return 1.0 / 3.0
    return 1.0 / (3.0 + 2.0 * k)


def closed_form_or_none(prob: RadiusProblem) -> float | None:
    """Closed form when the problem uses power weights, else None."""
    if prob.weights.kind is not WeightKind.POWER:
        return None
    return closed_form_radius(prob.equation, prob.p, prob.k)
