"""Secret-key capacity, omniscience rate, and the fractional-partition LP.

Two independent routes to the capacity are implemented and cross-checked:

* :func:`sk_capacity` minimizes the normalized surplus Delta over all
  partitions with at least two cells (exact rationals on the counting
  path, binary64 with a 1e-9 tie tolerance otherwise);
* :func:`lp_capacity` evaluates H(X_M) minus the optimum of the
  fractional-partition linear program over weights on nonempty proper
  subsets, solved by the exact simplex.

On top of the LP sit the optimal-face computations: feasibility and
optimality checks for explicit weight vectors, and the conditional value
given a function L of the source, obtained by re-optimizing the
conditional objective over the optimal face (the original constraints
plus one equality pinning the unconditional objective to its optimum).
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import _sweep
from .errors import InputError, VerificationError
from .model import (
    FLOAT_TOL,
    EntropyOracle,
    FunctionObservable,
    club,
    mask_subset,
    subset_mask,
)
from .partitions import ENUMERATION_CAP, Partition, _rgs_iter
from .simplex import solve_eq_lp

#: the LP has 2^m - 2 weight variables; keep it desk-scale
LP_CAP = 10

#: matching tolerance between the LP value and the partition minimum (binary64 path)
LP_FLOAT_TOL = 1e-7

#: default truncation of the reported minimizer list
MINIMIZER_LIMIT = 64

#: binary64 entropies are embedded into the exact LP on this dyadic grid
_QUANT = 1 << 40


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    return Fraction(round(float(v) * _QUANT), _QUANT)


@dataclass(frozen=True)
class LambdaVector:
    """Sparse nonnegative weights on nonempty proper subsets of {1..m}."""

    m: int
    weights: Mapping[int, Fraction]  # subset mask -> weight, zeros omitted

    def __init__(self, m: int, weights: Mapping[int, Fraction]):
        full = (1 << m) - 1
        w = {}
        for mask, val in weights.items():
            val = Fraction(val)
            if not 0 < mask < full:
                raise ValueError(f"mask {mask:#x} is not a nonempty proper subset")
            if val < 0:
                raise ValueError(f"negative weight for subset {mask_subset(mask)}")
            if val:
                w[int(mask)] = val
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_subsets(cls, m: int, weights: Mapping[Iterable[int], object]) -> "LambdaVector":
        return cls(m, {subset_mask(s, m): Fraction(v) for s, v in weights.items()})

    def weight(self, subset: Iterable[int]) -> Fraction:
        return self.weights.get(subset_mask(subset, self.m), Fraction(0))

    def coverage(self) -> tuple[Fraction, ...]:
        """The per-terminal totals sum_{B contains i} lambda_B."""
        cov = [Fraction(0)] * self.m
        for mask, val in self.weights.items():
            for i in range(self.m):
                if mask >> i & 1:
                    cov[i] += val
        return tuple(cov)

    def is_feasible(self) -> bool:
        return all(v == 1 for v in self.coverage())

    def to_json_dict(self) -> dict[str, str]:
        out = {}
        for mask in sorted(self.weights, key=mask_subset):
            v = self.weights[mask]
            out[",".join(str(i) for i in mask_subset(mask))] = f"{v.numerator}/{v.denominator}"
        return out


@dataclass(frozen=True)
class CapacityReport:
    """Capacity and omniscience figures plus the minimizing partitions."""

    i_capacity: Fraction | float
    r_co: Fraction | float
    minimizers: tuple[Partition, ...]
    minimizer_count: int
    lp_value: Fraction | float | None = None
    lambda_star_witness: LambdaVector | None = None


@dataclass(frozen=True)
class LpReport:
    value: Fraction | float
    witness: LambdaVector


@dataclass(frozen=True)
class LambdaCheck:
    feasible: bool
    objective: Fraction | float
    optimal: bool


@dataclass(frozen=True)
class ClubRelation:
    i_x: Fraction | float
    i_y: Fraction | float
    i_z: Fraction | float
    superadditive: bool
    equality: bool
    shared_minimizer: bool


def _float_table(oracle: EntropyOracle) -> np.ndarray:
    return np.asarray(oracle.entropy_table(), dtype=np.float64)


def _float_min_sweep(table: np.ndarray, m: int, limit: int | None):
    """Two-pass tolerance sweep for binary64 tables: min, tie list, count."""
    h_full = float(table[(1 << m) - 1])
    best = None
    for rgs in _rgs_iter(m):
        n_cells = max(rgs) + 1
        if n_cells < 2:
            continue
        s = 0.0
        masks = [0] * n_cells
        for i, lab in enumerate(rgs):
            masks[lab] |= 1 << i
        for mask in masks:
            s += float(table[mask])
        val = (s - h_full) / (n_cells - 1)
        if best is None or val < best:
            best = val
    assert best is not None
    count = 0
    mins: list[Partition] = []
    for rgs in _rgs_iter(m):
        n_cells = max(rgs) + 1
        if n_cells < 2:
            continue
        s = 0.0
        masks = [0] * n_cells
        for i, lab in enumerate(rgs):
            masks[lab] |= 1 << i
        for mask in masks:
            s += float(table[mask])
        val = (s - h_full) / (n_cells - 1)
        if val <= best + FLOAT_TOL:
            count += 1
            if limit is None or len(mins) < limit:
                mins.append(Partition.from_rgs(rgs))
    return max(best, 0.0), mins, count


def sk_capacity(
    oracle: EntropyOracle,
    *,
    limit: int | None = MINIMIZER_LIMIT,
    include_lp: bool = False,
    cap: int = ENUMERATION_CAP,
) -> CapacityReport:
    """Capacity by full partition minimization, with every minimizer found.

    ``limit`` truncates the reported minimizer list (None keeps all);
    ``minimizer_count`` is always the full tie count.  With ``include_lp``
    the LP route is also run and cross-checked against the partition
    minimum (exact on the counting path, 1e-7 otherwise); disagreement
    raises :class:`VerificationError`.
    """
    m = oracle.m
    if m < 2:
        raise InputError("capacity needs at least 2 terminals")
    if m > cap:
        raise InputError(f"partition enumeration is capped at m <= {cap}, got m = {m}")
    if oracle.exact:
        table = oracle.entropy_table()
        num, den, count, rgs_list = _sweep.sweep_min(table, m, 2, -1 if limit is None else limit)
        i_cap = Fraction(num, den)
        if i_cap < 0:
            raise VerificationError(f"negative capacity {i_cap}: oracle is not submodular")
        minimizers = tuple(Partition.from_rgs(r) for r in rgs_list)
        r_co = Fraction(int(table[(1 << m) - 1])) - i_cap
    else:
        table = _float_table(oracle)
        i_cap, mins, count = _float_min_sweep(table, m, limit)
        minimizers = tuple(mins)
        r_co = float(table[(1 << m) - 1]) - i_cap
    lp_value = None
    witness = None
    if include_lp:
        lp = lp_capacity(oracle)
        lp_value, witness = lp.value, lp.witness
        if oracle.exact:
            if lp_value != i_cap:
                raise VerificationError(
                    f"duality mismatch: LP value {lp_value} != partition minimum {i_cap}"
                )
        elif abs(lp_value - i_cap) > LP_FLOAT_TOL:
            raise VerificationError(
                f"duality mismatch: LP value {lp_value} vs partition minimum {i_cap}"
            )
    return CapacityReport(
        i_capacity=i_cap,
        r_co=r_co,
        minimizers=minimizers,
        minimizer_count=count,
        lp_value=lp_value,
        lambda_star_witness=witness,
    )


# -- fractional-partition LP ------------------------------------------


class _LambdaContext:
    """The LP data shared by every optimal-face computation on one oracle."""

    def __init__(self, oracle: EntropyOracle):
        m = oracle.m
        if m < 2:
            raise InputError("the weight LP needs at least 2 terminals")
        if m > LP_CAP:
            raise InputError(f"the weight LP is capped at m <= {LP_CAP}, got m = {m}")
        full = (1 << m) - 1
        self.m = m
        self.cols = list(range(1, full))  # variable order: ascending mask
        table = oracle.entropy_table()
        self.h_full = _as_fraction(table[full])
        self.cond = [self.h_full - _as_fraction(table[full ^ mask]) for mask in self.cols]
        rows = []
        for i in range(m):
            rows.append([Fraction(1) if mask >> i & 1 else Fraction(0) for mask in self.cols])
        self.cover_rows = rows
        self.ones = [Fraction(1)] * m
        res = solve_eq_lp(rows, self.ones, self.cond, maximize=True)
        self.opt_sum = res.value
        self.witness = LambdaVector(
            m, {mask: v for mask, v in zip(self.cols, res.x) if v}
        )


_context_cache: "weakref.WeakKeyDictionary[EntropyOracle, _LambdaContext]" = (
    weakref.WeakKeyDictionary()
)


def _lambda_context(oracle: EntropyOracle) -> _LambdaContext:
    ctx = _context_cache.get(oracle)
    if ctx is None:
        ctx = _LambdaContext(oracle)
        _context_cache[oracle] = ctx
    return ctx


def lp_capacity(oracle: EntropyOracle) -> LpReport:
    """Capacity as H(X_M) minus the weight-LP optimum, with a witness.

    Exact on the counting path (simplex over rationals, Bland's rule);
    binary64 entropies are embedded on a dyadic grid far below the 1e-7
    comparison tolerance.
    """
    ctx = _lambda_context(oracle)
    value = ctx.h_full - ctx.opt_sum
    if not oracle.exact:
        return LpReport(value=float(value), witness=ctx.witness)
    return LpReport(value=value, witness=ctx.witness)


def uniform_lambda(m: int) -> LambdaVector:
    """Weight 1/(m-1) on every subset of size m-1, zero elsewhere.

    Feasible for every m >= 2: each terminal lies in exactly m-1 of the
    (m-1)-subsets.  Optimal whenever the singleton partition minimizes the
    surplus, because its objective then equals the partition minimum.
    """
    if m < 2:
        raise InputError("uniform weights need m >= 2")
    full = (1 << m) - 1
    return LambdaVector(m, {full ^ (1 << i): Fraction(1, m - 1) for i in range(m)})


def verify_lambda(oracle: EntropyOracle, lam: LambdaVector) -> LambdaCheck:
    """Feasibility, objective value, and optimality of a weight vector."""
    if lam.m != oracle.m:
        raise InputError(f"weight vector is over m = {lam.m}, oracle has m = {oracle.m}")
    feasible = lam.is_feasible()
    full = (1 << oracle.m) - 1
    h_full = oracle.entropy_mask(full)
    if oracle.exact:
        objective: Fraction | float = Fraction(h_full) - sum(
            (v * (h_full - oracle.entropy_mask(full ^ mask)) for mask, v in lam.weights.items()),
            Fraction(0),
        )
        optimal = feasible and objective == lp_capacity(oracle).value
    else:
        objective = h_full - sum(
            float(v) * (h_full - oracle.entropy_mask(full ^ mask))
            for mask, v in lam.weights.items()
        )
        optimal = feasible and abs(objective - lp_capacity(oracle).value) <= LP_FLOAT_TOL
    return LambdaCheck(feasible=feasible, objective=objective, optimal=optimal)


def conditional_sk_value(obs: FunctionObservable) -> float:
    """The capacity expression conditioned on a function L of the source.

    Maximizes H(X_M|L) - sum_B lambda_B H(X_B|X_{B^c},L) over the optimal
    face of the unconditional LP, by minimizing the conditional objective
    subject to the original constraints plus the equality that pins the
    unconditional objective to its optimum.  Nonnegative for every L.
    """
    oracle = obs.source
    ctx = _lambda_context(oracle)
    m = ctx.m
    full = (1 << m) - 1
    h_full = float(oracle.entropy_mask(full))
    h_label = obs.label_entropy()
    # H(X_B | X_{B^c}, L) = H(X_M) - H(X_{B^c}, L) since L is a function of X_M
    cond_l = [_as_fraction(h_full - obs.joint_entropy_mask(full ^ mask)) for mask in ctx.cols]
    rows = ctx.cover_rows + [ctx.cond]
    rhs = ctx.ones + [ctx.opt_sum]
    res = solve_eq_lp(rows, rhs, cond_l, maximize=False)
    value = (h_full - h_label) - float(res.value)
    if value < -FLOAT_TOL:
        raise VerificationError(f"conditional value {value} is negative")
    return max(value, 0.0)


def club_relation(x: EntropyOracle, y: EntropyOracle, *, cap: int = ENUMERATION_CAP) -> ClubRelation:
    """Capacities of two independent sources and their clubbed pairing.

    Checks superadditivity I(Z) >= I(X) + I(Y) (a violation raises
    :class:`VerificationError`) and whether equality holds, which happens
    exactly when the two sources share a minimizing partition; the shared-
    minimizer test is performed independently of the equality test.
    """
    if x.m != y.m:
        raise InputError(f"terminal counts differ: {x.m} vs {y.m}")
    m = x.m
    if m < 2:
        raise InputError("capacity needs at least 2 terminals")
    if m > cap:
        raise InputError(f"partition enumeration is capped at m <= {cap}, got m = {m}")
    z = club(x, y)
    if x.exact and y.exact:
        tx = x.entropy_table()
        ty = y.entropy_table()
        nx, dx, _, _ = _sweep.sweep_min(tx, m, 2, 0)
        ny, dy, _, _ = _sweep.sweep_min(ty, m, 2, 0)
        nz, dz, _, _ = _sweep.sweep_min(z.entropy_table(), m, 2, 0)
        i_x: Fraction | float = Fraction(nx, dx)
        i_y: Fraction | float = Fraction(ny, dy)
        i_z: Fraction | float = Fraction(nz, dz)
        shared = bool(_sweep.sweep_shared(tx, ty, m, nx, dx, ny, dy))
        superadditive = i_z >= i_x + i_y
        equality = i_z == i_x + i_y
    else:
        tx = _float_table(x)
        ty = _float_table(y)
        i_x, _, _ = _float_min_sweep(tx, m, 0)
        i_y, _, _ = _float_min_sweep(ty, m, 0)
        i_z, _, _ = _float_min_sweep(tx + ty, m, 0)
        shared = _float_shared(tx, ty, m, i_x, i_y)
        superadditive = i_z >= i_x + i_y - FLOAT_TOL
        equality = abs(i_z - (i_x + i_y)) <= FLOAT_TOL
    if not superadditive:
        raise VerificationError(
            f"clubbed capacity {i_z} below the component sum {i_x} + {i_y}"
        )
    return ClubRelation(
        i_x=i_x,
        i_y=i_y,
        i_z=i_z,
        superadditive=superadditive,
        equality=equality,
        shared_minimizer=shared,
    )


def _float_shared(tx: np.ndarray, ty: np.ndarray, m: int, best_x: float, best_y: float) -> bool:
    hx = float(tx[(1 << m) - 1])
    hy = float(ty[(1 << m) - 1])
    for rgs in _rgs_iter(m):
        n_cells = max(rgs) + 1
        if n_cells < 2:
            continue
        masks = [0] * n_cells
        for i, lab in enumerate(rgs):
            masks[lab] |= 1 << i
        sx = sum(float(tx[mask]) for mask in masks)
        sy = sum(float(ty[mask]) for mask in masks)
        den = n_cells - 1
        if (sx - hx) / den <= best_x + FLOAT_TOL and (sy - hy) / den <= best_y + FLOAT_TOL:
            return True
    return False
