"""Truncated Taylor series of functions on the unit disk.

A CoefficientSeries stores exact complex coefficients a_0..a_N together
with class metadata and, when known, a certified description of the
discarded coefficients (see SeriesTail).  Built on top of it:

* explicit extremal families with exact expansions and exact tails,
* a sampler for bounded disk functions driven by the Schur recursion,
* a coefficient-bound sampler for the reduced-bound class
  (|a_n| <= 1 - |a_0|),
* class-membership predicates with per-index margins,
* the weighted coefficient sum |a_0|^p phi_0(r) + sum |a_n| phi_n(r),
* truncated composition f(omega(z)) for Schwarz omega.

Everything is immutable and deterministic in (seed, params); per-sample
seeds are derived as seed + sample_index so batch and one-at-a-time
sampling agree.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError
from .weights import WeightSequence

DEFAULT_ORDER = 64
SCHUR_PARAM_CAP = 1.0 - 1e-9
SCHUR_DRAW_RADIUS = 0.98
GAP_EPS = 1e-12
_TAG_SLACK = 1e-8


class ClassTag(enum.Enum):
    SCHWARZ_CLASS_B = "schwarz_class_b"    # |a_n| <= 1 - |a_0|^2 for n >= 1
    CLASS_B_PRIME = "class_b_prime"        # |a_n| <= 1 - |a_0|  for n >= 1
    UNIVALENT_MODEL = "univalent_model"    # built-in univalent target, no bound
    SCHWARZ_FUNCTION = "schwarz_function"  # a_0 = 0 and |a_n| <= 1
    GENERIC = "generic"


@dataclass(frozen=True)
class SeriesTail:
    """Certified description of the coefficients beyond the truncation order.

    kind "const":     |a_n| <= coeff                  for n > N
    kind "linear":    |a_n| <= coeff * n              for n > N
    kind "geometric": |a_n| <= coeff * ratio**(n-1)   for n > N
    """

    kind: str
    coeff: float
    ratio: float = 0.0

    def __post_init__(self):
        if self.kind not in ("const", "linear", "geometric"):
            raise DomainError(f"unknown tail kind {self.kind!r}")
        if self.coeff < 0 or not 0.0 <= self.ratio < 1.0:
            raise DomainError("tail needs coeff >= 0 and ratio in [0, 1)")

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0.0

    def scaled(self, factor: float) -> "SeriesTail":
        return SeriesTail(self.kind, self.coeff * factor, self.ratio)

    def power_tail(self, trunc: int, r: float) -> float:
        """Bound on sum_{n>trunc} |a_n| r^n for 0 <= r < 1."""
        if self.is_zero or r == 0.0:
            return 0.0
        if self.kind == "const":
            return self.coeff * r ** (trunc + 1) / (1.0 - r)
        if self.kind == "linear":
            return (
                self.coeff
                * r ** (trunc + 1)
                * ((trunc + 1) - trunc * r)
                / (1.0 - r) ** 2
            )
        q = self.ratio
        return self.coeff * q**trunc * r ** (trunc + 1) / (1.0 - q * r)

    def weighted_tail(self, w: WeightSequence, trunc: int, r: float) -> float:
        """Bound on sum_{n>trunc} |a_n| phi_n(r) for the given weights."""
        if self.is_zero:
            return 0.0
        if self.kind == "const":
            return self.coeff * w.phi_tail(trunc, r)
        if self.kind == "linear":
            return self.coeff * w.psi_tail(trunc, r)
        # |a_n| <= coeff * ratio**(n-1) <= coeff * ratio**trunc for n > trunc
        return self.coeff * self.ratio**trunc * w.phi_tail(trunc, r)


ZERO_TAIL = SeriesTail("const", 0.0)


@dataclass(frozen=True, eq=False)
class CoefficientSeries:
    """Exact truncated Taylor coefficients plus class metadata.

    The coefficient array is complex and read-only; the declared class tag
    is validated at construction (with a small slack for roundoff from the
    samplers).
    """

    coeffs: np.ndarray
    class_tag: ClassTag = ClassTag.GENERIC
    tail: SeriesTail | None = None

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=complex)
        if arr.ndim != 1 or len(arr) == 0:
            raise DomainError("coefficients must be a nonempty 1-d sequence")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        check = is_in_class(self, self.class_tag, _slack=_TAG_SLACK)
        if not check.ok:
            raise ContractError(
                f"coefficients violate declared class {self.class_tag.value} "
                f"(worst margin {check.worst_margin:.3e} at n={check.worst_index})"
            )

    @property
    def truncation_order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def a0(self) -> complex:
        return complex(self.coeffs[0])

    def moduli(self) -> np.ndarray:
        return np.abs(self.coeffs)

    def rn_tail(self, r: float) -> float | None:
        """Certified bound on sum_{n>N} |a_n| r^n, or None when unknown."""
        if self.tail is None:
            return None
        return self.tail.power_tail(self.truncation_order, r)


@dataclass(frozen=True)
class SumResult:
    """A weighted coefficient sum with its certified truncation interval.

    ``error`` bounds the discarded remainder (None when no tail is
    declared); ``certified`` records whether the interval half-width came
    out below the requested tolerance.
    """

    value: float
    error: float | None
    certified: bool

    @property
    def upper(self) -> float:
        return self.value + (self.error if self.error is not None else math.inf)

    @property
    def lower(self) -> float:
        return self.value  # partial sums of nonnegative terms never overshoot


@dataclass(frozen=True)
class ClassCheck:
    """Outcome of a coefficient-bound scan: bound minus modulus, per index."""

    ok: bool
    worst_margin: float
    worst_index: int | None
    margins: tuple


# -- extremal families -------------------------------------------------


class FamilyKind(enum.Enum):
    BPRIME_EXTREMAL = "bprime_extremal"    # (a - (1-a+a^2) z) / (1 - a z)
    KOEBE = "koebe"                        # z / (1-z)^2
    HALF_PLANE = "half_plane"              # 1 / (1-z)
    DISK_AUTOMORPHISM = "disk_automorphism"  # (a - z) / (1 - a z)


@dataclass(frozen=True)
class ExtremalFamily:
    """One of the built-in sharpness families, with parameter where needed."""

    kind: FamilyKind
    a: float = 0.0

    def __post_init__(self):
        if self.kind in (FamilyKind.BPRIME_EXTREMAL, FamilyKind.DISK_AUTOMORPHISM):
            if not 0.0 <= self.a < 1.0:
                raise DomainError(f"family parameter a={self.a} outside [0, 1)")


def bprime_extremal(a: float) -> ExtremalFamily:
    return ExtremalFamily(FamilyKind.BPRIME_EXTREMAL, float(a))


def koebe() -> ExtremalFamily:
    return ExtremalFamily(FamilyKind.KOEBE)


def half_plane() -> ExtremalFamily:
    return ExtremalFamily(FamilyKind.HALF_PLANE)


def disk_automorphism(a: float) -> ExtremalFamily:
    return ExtremalFamily(FamilyKind.DISK_AUTOMORPHISM, float(a))


def expand_extremal(fam: ExtremalFamily, order: int = DEFAULT_ORDER) -> CoefficientSeries:
    """Exact truncated expansion of a built-in family, analytic tail attached.

    Expansions used:
        bprime_extremal:   a - (1-a) * sum_{n>=1} a^(n-1) z^n
        koebe:             sum_{n>=1} n z^n
        half_plane:        sum_{n>=0} z^n
        disk_automorphism: a - (1-a^2) * sum_{n>=1} a^(n-1) z^n
    """
    if order < 1:
        raise DomainError("order must be >= 1")
    n = np.arange(order + 1)
    if fam.kind is FamilyKind.KOEBE:
        return CoefficientSeries(
            n.astype(complex), ClassTag.UNIVALENT_MODEL, SeriesTail("linear", 1.0)
        )
    if fam.kind is FamilyKind.HALF_PLANE:
        return CoefficientSeries(
            np.ones(order + 1, dtype=complex),
            ClassTag.UNIVALENT_MODEL,
            SeriesTail("const", 1.0),
        )
    a = fam.a
    lead = (1.0 - a) if fam.kind is FamilyKind.BPRIME_EXTREMAL else (1.0 - a * a)
    coeffs = np.empty(order + 1, dtype=complex)
    coeffs[0] = a
    coeffs[1:] = -lead * a ** (n[1:] - 1).astype(float)
    tag = (
        ClassTag.CLASS_B_PRIME
        if fam.kind is FamilyKind.BPRIME_EXTREMAL
        else ClassTag.SCHWARZ_CLASS_B
    )
    tail = ZERO_TAIL if a == 0.0 else SeriesTail("geometric", lead, a)
    return CoefficientSeries(coeffs, tag, tail)


# -- samplers ----------------------------------------------------------


def schur_sample(
    params=None,
    order: int = DEFAULT_ORDER,
    seed: int = 0,
    depth: int | None = None,
) -> CoefficientSeries:
    """Bounded disk function built from the Schur recursion, truncated exactly.

    With parameters g_0..g_{m-1} (each |g_j| <= 1 - 1e-9) and every later
    parameter zero, the function is f_0 where f_m = 0 and

        f_j(z) = (g_j + z f_{j+1}(z)) / (1 + conj(g_j) z f_{j+1}(z)).

    Each step is a disk automorphism applied to z*f_{j+1}, so f_0 is a
    genuine self-map of the disk and its coefficients obey
    |a_n| <= 1 - |a_0|^2.  When ``params`` is omitted, ``depth`` of them
    (default: ``order``) are drawn uniformly from the disk of radius 0.98
    using ``seed``.
    """
    if order < 1:
        raise DomainError("order must be >= 1")
    if params is None:
        params = _draw_schur_params(order if depth is None else depth, seed)
    params = np.asarray(params, dtype=complex).reshape(-1)
    if len(params) == 0:
        raise DomainError("at least one Schur parameter is required")
    if np.any(np.abs(params) > SCHUR_PARAM_CAP):
        raise DomainError(f"Schur parameters must have modulus <= {SCHUR_PARAM_CAP}")
    coeffs = _schur_coeffs(params[np.newaxis, :], order)[0]
    a0 = float(abs(coeffs[0]))
    return CoefficientSeries(
        coeffs, ClassTag.SCHWARZ_CLASS_B, SeriesTail("const", 1.0 - a0 * a0)
    )


def _draw_schur_params(depth: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    rho = SCHUR_DRAW_RADIUS * np.sqrt(rng.uniform(0.0, 1.0, depth))
    theta = rng.uniform(0.0, 2.0 * np.pi, depth)
    return rho * np.exp(1j * theta)


def _schur_coeffs(params: np.ndarray, order: int) -> np.ndarray:
    """Batched Schur recursion: params (S, m) -> coefficients (S, order+1)."""
    s = params.shape[0]
    f = np.zeros((s, order + 1), dtype=complex)
    for j in range(params.shape[1] - 1, -1, -1):
        g = params[:, j]
        zf = np.zeros_like(f)
        zf[:, 1:] = f[:, :order]
        num = zf.copy()
        num[:, 0] += g
        den = np.conj(g)[:, np.newaxis] * zf
        den[:, 0] += 1.0
        f = _div_trunc(num, den)
    return f


def _div_trunc(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """Row-wise truncated power-series division; den[:, 0] must be 1."""
    out = np.empty_like(num)
    out[:, 0] = num[:, 0]
    for n in range(1, num.shape[1]):
        acc = np.sum(den[:, 1 : n + 1] * out[:, n - 1 :: -1], axis=1)
        out[:, n] = num[:, n] - acc
    return out


def schur_sample_batch(count: int, order: int, seed: int, depth: int | None = None) -> list:
    """``count`` independent samples with per-sample seeds seed + i.

    Identical to calling schur_sample one seed at a time, just batched
    through the recursion for speed.
    """
    depth = order if depth is None else depth
    params = np.stack([_draw_schur_params(depth, seed + i) for i in range(count)])
    coeffs = _schur_coeffs(params, order)
    out = []
    for row in coeffs:
        a0 = float(abs(row[0]))
        out.append(
            CoefficientSeries(
                row, ClassTag.SCHWARZ_CLASS_B, SeriesTail("const", 1.0 - a0 * a0)
            )
        )
    return out


def schwarz_sample(order: int, seed: int) -> CoefficientSeries:
    """Random Schwarz function (fixes 0, bounded by 1): z times a Schur sample."""
    if order < 1:
        raise DomainError("order must be >= 1")
    if order == 1:
        inner = np.asarray([0.0], dtype=complex)
    else:
        inner = schur_sample(order=order - 1, seed=seed).coeffs
    coeffs = np.zeros(order + 1, dtype=complex)
    coeffs[1:] = inner
    return CoefficientSeries(coeffs, ClassTag.SCHWARZ_FUNCTION, SeriesTail("const", 1.0))


def schwarz_sample_batch(count: int, order: int, seed: int) -> list:
    """``count`` Schwarz samples with per-sample seeds seed + i.

    Output i equals schwarz_sample(order, seed + i) exactly.
    """
    if order == 1:
        rows = np.zeros((count, 1), dtype=complex)
    else:
        params = np.stack(
            [_draw_schur_params(order - 1, seed + i) for i in range(count)]
        )
        rows = _schur_coeffs(params, order - 1)
    out = []
    tail = SeriesTail("const", 1.0)
    for row in rows:
        coeffs = np.zeros(order + 1, dtype=complex)
        coeffs[1:] = row
        out.append(CoefficientSeries(coeffs, ClassTag.SCHWARZ_FUNCTION, tail))
    return out


def sample_bprime_coeffs(
    order: int, seed: int, a0: float | None = None
) -> CoefficientSeries:
    """Random polynomial obeying the reduced coefficient bound |a_n| <= 1 - a_0.

    a_0 is uniform in [0, 1) unless forced; each higher coefficient has
    modulus uniform in [0, 1 - a_0] and uniform phase.  The output obeys
    the coefficient bound by construction but is not certified to be a
    bounded disk function; results derived from it are coefficient-level.
    """
    if order < 1:
        raise DomainError("order must be >= 1")
    rng = np.random.default_rng(seed)
    lead = rng.uniform(0.0, 1.0) if a0 is None else float(a0)
    if not 0.0 <= lead < 1.0:
        raise DomainError(f"a0={lead} outside [0, 1)")
    mods = rng.uniform(0.0, 1.0 - lead, order)
    args = rng.uniform(0.0, 2.0 * np.pi, order)
    coeffs = np.empty(order + 1, dtype=complex)
    coeffs[0] = lead
    coeffs[1:] = mods * np.exp(1j * args)
    return CoefficientSeries(coeffs, ClassTag.CLASS_B_PRIME, ZERO_TAIL)


# -- predicates ---------------------------------------------------------


def is_in_class(
    s: CoefficientSeries,
    tag: ClassTag,
    stride: int | None = None,
    _slack: float = 1e-12,
) -> ClassCheck:
    """Scan the coefficient inequalities of ``tag`` up to the truncation order.

    Margins are bound minus modulus, so nonnegative means the inequality
    holds.  With ``stride`` m > 1, additionally requires the gap condition
    |a_{mn}| <= 1e-12 for all mn <= N.  Tags without a coefficient bound
    (univalent model, generic) pass trivially with an infinite margin.
    """
    mods = np.abs(np.asarray(s.coeffs, dtype=complex))
    margins: list[tuple[int, float]] = []
    if tag is ClassTag.CLASS_B_PRIME:
        bound = 1.0 - mods[0]
        margins += [(n, bound - mods[n]) for n in range(1, len(mods))]
    elif tag is ClassTag.SCHWARZ_CLASS_B:
        bound = 1.0 - mods[0] ** 2
        margins += [(n, bound - mods[n]) for n in range(1, len(mods))]
    elif tag is ClassTag.SCHWARZ_FUNCTION:
        margins.append((0, 1e-14 - mods[0]))
        margins += [(n, 1.0 - mods[n]) for n in range(1, len(mods))]
    if stride is not None:
        if stride <= 1:
            raise DomainError("gap stride must be an integer > 1")
        for n in range(stride, len(mods), stride):
            margins.append((n, GAP_EPS - mods[n]))
    if not margins:
        return ClassCheck(True, math.inf, None, ())
    worst_index, worst = min(margins, key=lambda item: item[1])
    return ClassCheck(worst >= -_slack, float(worst), worst_index, tuple(margins))


# -- weighted sum --------------------------------------------------------


def bohr_sum(
    s: CoefficientSeries,
    w: WeightSequence,
    p: float,
    r: float,
    tol: float = 1e-12,
) -> SumResult:
    """|a_0|^p phi_0(r) + sum_{n=1}^{N} |a_n| phi_n(r), certified when possible.

    The truncation interval half-width combines the series' declared
    coefficient tail with the weights' tail majorant; ``certified`` is set
    when that half-width is <= tol.  p must lie in (0, 2].
    """
    if not 0.0 < p <= 2.0:
        raise DomainError(f"p={p} outside (0, 2]")
    mods = s.moduli()
    phi = w.values(r, s.truncation_order)
    value = float(mods[0] ** p * phi[0] + np.dot(mods[1:], phi[1:]))
    err = None
    if s.tail is not None:
        err = float(s.tail.weighted_tail(w, s.truncation_order, r))
    return SumResult(value, err, bool(err is not None and err <= tol))


# -- composition ----------------------------------------------------------


def compose(f: CoefficientSeries, omega: CoefficientSeries) -> CoefficientSeries:
    """Truncated Taylor coefficients of f(omega(z)).

    omega must fix the origin (|omega_0| <= 1e-14, ContractError otherwise);
    then coefficient n of the composition depends only on the first n
    coefficients of each input, so the result is exact to order
    min(f.N, omega.N).  Evaluated by Horner's scheme with truncated
    products.
    """
    if abs(omega.coeffs[0]) > 1e-14:
        raise ContractError("composition requires omega(0) = 0")
    order = min(f.truncation_order, omega.truncation_order)
    om = np.asarray(omega.coeffs[: order + 1], dtype=complex)
    acc = np.zeros(order + 1, dtype=complex)
    acc[0] = f.coeffs[order]
    for k in range(order - 1, -1, -1):
        acc = np.convolve(acc, om)[: order + 1]
        acc[0] += f.coeffs[k]
    tag = (
        ClassTag.SCHWARZ_FUNCTION
        if f.class_tag is ClassTag.SCHWARZ_FUNCTION
        else ClassTag.GENERIC
    )
    return CoefficientSeries(acc, tag, None)


# -- serialization ---------------------------------------------------------


def to_json(s: CoefficientSeries, at_r: float | None = None) -> dict:
    """JSON object {"coeffs": [[re, im], ...], "class", "order", "tail_bound"}.

    ``tail_bound`` is the certified bound on sum_{n>N} |a_n| r^n evaluated
    at ``at_r`` (0.0 for exact polynomials); null when no radius is given
    and the tail is not identically zero.
    """
    if s.tail is None:
        tail_bound = None
    elif s.tail.is_zero:
        tail_bound = 0.0
    elif at_r is not None:
        tail_bound = s.rn_tail(at_r)
    else:
        tail_bound = None
    return {
        "coeffs": [[float(c.real), float(c.imag)] for c in s.coeffs],
        "class": s.class_tag.value,
        "order": s.truncation_order,
        "tail_bound": tail_bound,
    }


def from_json(obj: dict) -> CoefficientSeries:
    """Inverse of to_json.  A numeric nonzero tail_bound cannot be re-certified
    at other radii, so only the zero tail survives the round trip."""
    coeffs = np.asarray([complex(re, im) for re, im in obj["coeffs"]])
    tag = ClassTag(obj.get("class", "generic"))
    tail = ZERO_TAIL if obj.get("tail_bound") == 0.0 else None
    return CoefficientSeries(coeffs, tag, tail)
