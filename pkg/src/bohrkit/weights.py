"""Weight sequences and their aggregate sums with certified truncation.

A weight sequence assigns to each index n >= 0 a nonnegative function
phi_n(r) on [0, r_max].  Downstream code consumes two aggregates,

    Phi1(r) = sum_{n>=1} phi_n(r)
    Psi1(r) = sum_{n>=1} n * phi_n(r)

evaluated by direct summation.  Truncation is certified: every sequence
declares tail majorants bounding the discarded remainder, and summation
stops at the first index whose majorant drops below the requested
tolerance.

Supported kinds:

* ``power``:        phi_n(r) = r**n, with closed-form geometric tails.
* ``scaled_power``: phi_n(r) = c[n] * r**n for a finite coefficient table,
                    zero beyond the table; tails are exact finite remainders.
* ``tabulated``:    finitely many weight functions sampled on an r-grid and
                    evaluated by linear interpolation, plus a declared
                    majorant for everything beyond the table (zero default).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ContractError, DomainError, NonConvergent

DEFAULT_TOL = 1e-12
DEFAULT_R_MAX = 0.999
MONOTONE_EPS = 1e-12
INDEX_CAP = 10**6

_CHUNK = 512
_SPOT_CHECK_POINTS = 33

TailFn = Callable[[int, float], float]


class WeightKind(enum.Enum):
    POWER = "power"
    SCALED_POWER = "scaled_power"
    TABULATED = "tabulated"


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """Immutable weight sequence; safe to share across concurrent workers.

    ``decreasing`` records phi_n(r) >= phi_{n+1}(r) for n >= 1 on
    [0, r_max]; it is spot-checked at construction when declared.
    """

    kind: WeightKind
    r_max: float
    decreasing: bool
    config: dict
    c: np.ndarray | None = None
    r_grid: np.ndarray | None = None
    table: np.ndarray | None = None
    beyond_phi_tail: TailFn | None = None
    beyond_psi_tail: TailFn | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    # -- evaluation ---------------------------------------------------

    def phi0(self, r: float) -> float:
        """phi_0(r), the index-0 weight."""
        return float(self.values(r, 0)[0])

    @property
    def phi0_is_one(self) -> bool:
        """True when phi_0(r) is literally the constant 1."""
        if self.kind is WeightKind.POWER:
            return True
        if self.kind is WeightKind.SCALED_POWER:
            return float(self.c[0]) == 1.0
        return bool(np.all(self.table[0] == 1.0))

    @property
    def table_order(self) -> int | None:
        """Last index carried by a finite table, or None for power weights."""
        if self.kind is WeightKind.SCALED_POWER:
            return len(self.c) - 1
        if self.kind is WeightKind.TABULATED:
            return self.table.shape[0] - 1
        return None

    def values(self, r: float, order: int) -> np.ndarray:
        """Array (phi_0(r), ..., phi_order(r)); cached, returned read-only."""
        self._check_r(r)
        key = (r, order)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out = self._values(r, order)
        out.setflags(write=False)
        if len(self._cache) < 4096:
            self._cache[key] = out
        return out

    def _values(self, r: float, order: int) -> np.ndarray:
        n = np.arange(order + 1)
        if self.kind is WeightKind.POWER:
            return r ** n.astype(float)
        if self.kind is WeightKind.SCALED_POWER:
            c = np.zeros(order + 1)
            m = min(order, len(self.c) - 1)
            c[: m + 1] = self.c[: m + 1]
            return c * r ** n.astype(float)
        rows = _interp_rows(self.r_grid, self.table, r)
        out = np.zeros(order + 1)
        m = min(order, len(rows) - 1)
        out[: m + 1] = rows[: m + 1]
        return out

    # -- tail majorants -----------------------------------------------

    def phi_tail(self, trunc: int, r: float) -> float:
        """Upper bound on sum_{n>trunc} phi_n(r); nonincreasing in trunc."""
        self._check_r(r)
        if self.kind is WeightKind.POWER:
            return r ** (trunc + 1) / (1.0 - r)
        if self.kind is WeightKind.SCALED_POWER:
            return self._finite_remainder(trunc, r, weighted=False)
        rest = self._finite_remainder(trunc, r, weighted=False)
        if self.beyond_phi_tail is not None:
            rest += self.beyond_phi_tail(trunc, r)
        return rest

    def psi_tail(self, trunc: int, r: float) -> float:
        """Upper bound on sum_{n>trunc} n*phi_n(r).

        Raises ContractError when the sequence never declared an
        index-weighted majorant (tabulated kind with a nonzero undeclared
        remainder beyond the table).
        """
        self._check_r(r)
        if self.kind is WeightKind.POWER:
            # sum_{n>N} n r^n = r^(N+1) ((N+1) - N r) / (1-r)^2
            return r ** (trunc + 1) * ((trunc + 1) - trunc * r) / (1.0 - r) ** 2
        if self.kind is WeightKind.SCALED_POWER:
            return self._finite_remainder(trunc, r, weighted=True)
        if not self.has_psi_tail:
            raise ContractError(
                "tabulated weights declared a nonzero tail beyond the table "
                "but no index-weighted majorant; index-weighted sums refuse to run"
            )
        rest = self._finite_remainder(trunc, r, weighted=True)
        if self.beyond_psi_tail is not None:
            rest += self.beyond_psi_tail(trunc, r)
        return rest

    @property
    def has_psi_tail(self) -> bool:
        if self.kind is not WeightKind.TABULATED:
            return True
        return self.beyond_phi_tail is None or self.beyond_psi_tail is not None

    def _finite_remainder(self, trunc: int, r: float, weighted: bool) -> float:
        last = self.table_order
        if trunc >= last:
            return 0.0
        n = np.arange(trunc + 1, last + 1)
        vals = self.values(r, last)[trunc + 1 :]
        if weighted:
            return float(np.dot(n, vals))
        return float(np.sum(vals))

    def _check_r(self, r: float) -> None:
        if not 0.0 <= r <= self.r_max:
            raise DomainError(f"r={r} outside [0, r_max={self.r_max}]")


def _interp_rows(r_grid: np.ndarray, table: np.ndarray, r: float) -> np.ndarray:
    """Linear interpolation of every table row at a single r."""
    i = int(np.searchsorted(r_grid, r, side="right"))
    i = min(max(i, 1), len(r_grid) - 1)
    t = (r - r_grid[i - 1]) / (r_grid[i] - r_grid[i - 1])
    return table[:, i - 1] * (1.0 - t) + table[:, i] * t


# -- constructors -----------------------------------------------------


def power_weights(r_max: float = DEFAULT_R_MAX) -> WeightSequence:
    """phi_n(r) = r**n.  Decreasing in n for every r in [0, 1]."""
    _check_r_max(r_max)
    return WeightSequence(
        kind=WeightKind.POWER,
        r_max=r_max,
        decreasing=True,
        config={"kind": "power", "r_max": r_max},
    )


def scaled_power(
    c, *, r_max: float = DEFAULT_R_MAX, decreasing: bool | None = None
) -> WeightSequence:
    """phi_n(r) = c[n] * r**n for n < len(c), zero beyond.

    ``decreasing=None`` infers the flag by spot check; an explicit ``True``
    is validated and raises ContractError if the sampled table violates
    phi_n >= phi_{n+1} beyond MONOTONE_EPS.
    """
    _check_r_max(r_max)
    c = np.asarray(c, dtype=float)
    if c.ndim != 1 or len(c) == 0:
        raise DomainError("coefficient table must be a nonempty 1-d sequence")
    if np.any(c < 0):
        raise DomainError("weights must be nonnegative: negative coefficient found")
    c.setflags(write=False)
    w = WeightSequence(
        kind=WeightKind.SCALED_POWER,
        r_max=r_max,
        decreasing=False,
        config={"kind": "scaled_power", "c": [float(x) for x in c], "r_max": r_max},
        c=c,
    )
    verified = _spot_check_decreasing(w, len(c))
    if decreasing is True and not verified:
        raise ContractError("declared decreasing, but sampled weights increase in n")
    flag = verified if decreasing is None else decreasing
    return WeightSequence(
        kind=w.kind, r_max=w.r_max, decreasing=bool(flag), config=w.config, c=c
    )


def tabulated(
    r_grid,
    table,
    *,
    r_max: float | None = None,
    decreasing: bool = False,
    beyond_phi_tail: TailFn | None = None,
    beyond_psi_tail: TailFn | None = None,
) -> WeightSequence:
    """Finite list of weight functions sampled on an r-grid.

    Rows of ``table`` are phi_0, phi_1, ... sampled at ``r_grid``;
    evaluation between nodes is linear interpolation.  Anything beyond the
    last row is covered by ``beyond_phi_tail(N, r)`` (zero when omitted,
    i.e. the sequence self-certifies a zero tail).  Index-weighted sums
    additionally need ``beyond_psi_tail`` whenever ``beyond_phi_tail`` is
    nonzero.
    """
    r_grid = np.asarray(r_grid, dtype=float)
    table = np.atleast_2d(np.asarray(table, dtype=float))
    if r_grid.ndim != 1 or len(r_grid) < 2 or np.any(np.diff(r_grid) <= 0):
        raise DomainError("r_grid must be strictly increasing with >= 2 nodes")
    if table.shape[1] != len(r_grid):
        raise DomainError("table columns must match r_grid length")
    if np.any(table < 0):
        raise DomainError("weights must be nonnegative: negative table entry found")
    if r_grid[0] > 0.0:
        raise DomainError("r_grid must start at 0")
    if r_max is None:
        r_max = float(r_grid[-1])
    _check_r_max(r_max)
    if r_grid[-1] < r_max:
        raise DomainError("r_grid must cover [0, r_max]")
    r_grid.setflags(write=False)
    table.setflags(write=False)
    w = WeightSequence(
        kind=WeightKind.TABULATED,
        r_max=r_max,
        decreasing=False,
        config={"kind": "tabulated", "rows": int(table.shape[0]), "r_max": r_max},
        r_grid=r_grid,
        table=table,
        beyond_phi_tail=beyond_phi_tail,
        beyond_psi_tail=beyond_psi_tail,
    )
    if decreasing and not _spot_check_decreasing(w, table.shape[0]):
        raise ContractError("declared decreasing, but sampled weights increase in n")
    return WeightSequence(
        kind=w.kind,
        r_max=w.r_max,
        decreasing=bool(decreasing),
        config=w.config,
        r_grid=r_grid,
        table=table,
        beyond_phi_tail=beyond_phi_tail,
        beyond_psi_tail=beyond_psi_tail,
    )


def from_config(cfg: dict) -> WeightSequence:
    """Build a weight sequence from a JSON-style config object."""
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise DomainError("weight config must be an object with a 'kind' key")
    kind = cfg["kind"]
    r_max = float(cfg.get("r_max", DEFAULT_R_MAX))
    if kind == "power":
        return power_weights(r_max=r_max)
    if kind == "scaled_power":
        if "c" not in cfg:
            raise DomainError("scaled_power config needs a coefficient list 'c'")
        return scaled_power(cfg["c"], r_max=r_max, decreasing=cfg.get("decreasing"))
    if kind == "tabulated":
        for key in ("r_grid", "table"):
            if key not in cfg:
                raise DomainError(f"tabulated config needs '{key}'")
        return tabulated(
            cfg["r_grid"],
            cfg["table"],
            r_max=cfg.get("r_max"),
            decreasing=bool(cfg.get("decreasing", False)),
        )
    raise DomainError(f"unknown weight kind {kind!r}")


def _check_r_max(r_max: float) -> None:
    if not 0.0 < r_max < 1.0:
        raise DomainError(f"r_max={r_max} must lie in (0, 1)")


def _spot_check_decreasing(w: WeightSequence, rows: int) -> bool:
    order = min(max(rows, 2), 128)
    for r in np.linspace(0.0, w.r_max, _SPOT_CHECK_POINTS):
        vals = w.values(float(r), order)
        if np.any(np.diff(vals[1:]) > MONOTONE_EPS):
            return False
    return True


# -- aggregate sums ---------------------------------------------------


def phi_sum(w: WeightSequence, r: float, tol: float = DEFAULT_TOL) -> float:
    """Phi1(r) = sum_{n>=1} phi_n(r) with |result - Phi1(r)| <= tol.

    Sums chunks of terms until the declared tail majorant drops below tol;
    raises NonConvergent past INDEX_CAP terms and DomainError for r outside
    [0, r_max].
    """
    return _certified_sum(w, r, tol, weighted=False)


def psi_sum(w: WeightSequence, r: float, tol: float = DEFAULT_TOL) -> float:
    """Psi1(r) = sum_{n>=1} n*phi_n(r) with |result - Psi1(r)| <= tol.

    Requires an index-weighted tail majorant (ContractError otherwise).
    """
    return _certified_sum(w, r, tol, weighted=True)


def _certified_sum(w: WeightSequence, r: float, tol: float, weighted: bool) -> float:
    w._check_r(r)
    if not tol > 0:
        raise DomainError(f"tol={tol} must be positive")
    tail = w.psi_tail if weighted else w.phi_tail
    total = 0.0
    done = 0
    while True:
        upto = min(done + _CHUNK, INDEX_CAP)
        total += _term_block(w, r, done + 1, upto, weighted)
        done = upto
        if tail(done, r) <= tol:
            return total
        if done >= INDEX_CAP:
            raise NonConvergent(
                f"tail majorant still {tail(done, r):.3e} > tol={tol} "
                f"after {INDEX_CAP} terms at r={r}"
            )


def _term_block(w: WeightSequence, r: float, lo: int, hi: int, weighted: bool) -> float:
    """sum over lo <= n <= hi of phi_n(r), or n*phi_n(r) when weighted."""
    last = w.table_order
    if last is not None:
        if lo > last:
            return 0.0
        hi = min(hi, last)
        vals = w.values(r, hi)[lo:]
    else:
        vals = r ** np.arange(lo, hi + 1, dtype=float)
    if weighted:
        return float(np.dot(np.arange(lo, lo + len(vals)), vals))
    return float(np.sum(vals))
