"""The singleton-minimizer ("type S") test, the complete-uniform closed
forms, the exact communication-complexity formula for qualifying PIN
models, and the empirical per-terminal information bound.

The type-S test needs only the partitions P_B = {{b},..., B^c} for proper
subsets B with |B| <= m-2: the singleton partition minimizes the surplus
iff it beats all of them, and uniquely iff strictly.  That replaces the
full Bell-number sweep with a 2^m one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator

import numpy as np

from .errors import InputError, PreconditionError, VerificationError
from .model import (
    FLOAT_TOL,
    EntropyOracle,
    FunctionObservable,
    Hypergraph,
    PinSource,
    observable_stats,
)
from .partitions import singleton_partition
from . import capacity as _capacity

#: the type-S sweep touches 2^m subsets
TYPE_S_CAP = 20

#: outcome-space cap for the empirical bound check (2^|E| outcomes)
BOUND_CHECK_EDGE_CAP = 24


@dataclass(frozen=True)
class TypeSVerdict:
    """Whether the singleton partition minimizes the surplus, and uniquely.

    ``worst_b`` is the subset whose attached partition comes closest to (or
    beats) the singleton partition; it is populated whenever some
    comparison is tight or violated.  ``margin`` is the corresponding
    minimum of Delta(P_B) - Delta(S) over all tested B.
    """

    is_minimizer: bool
    is_unique: bool
    worst_b: tuple[int, ...] | None
    margin: Fraction | float | None


def _subsets_lex(m: int, max_size: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Nonempty subsets of {1..m} up to ``max_size``, in tuple-lex order,
    as (tuple, mask) pairs."""
    stack: list[tuple[tuple[int, ...], int, int]] = [((v,), 1 << (v - 1), v) for v in range(m, 0, -1)]
    while stack:
        subset, mask, last = stack.pop()
        yield subset, mask
        if len(subset) < max_size:
            for v in range(m, last, -1):
                stack.append((subset + (v,), mask | 1 << (v - 1), v))


def is_type_s(oracle: EntropyOracle, *, cap: int = TYPE_S_CAP) -> TypeSVerdict:
    """Decide whether the singleton partition minimizes the surplus.

    Requires m >= 3 (for m = 2 the singleton partition is the only
    partition, so the question is vacuous; see
    :func:`type_s_by_enumeration`).  Exact on the counting path, 1e-9
    comparison tolerance otherwise.
    """
    m = oracle.m
    if m < 3:
        raise PreconditionError(
            "the subset test needs m >= 3; inspect the capacity minimizers directly"
        )
    if m > cap:
        raise InputError(f"the type-S sweep is capped at m <= {cap}, got m = {m}")
    table = oracle.entropy_table()
    full = (1 << m) - 1
    exact = oracle.exact
    h_full = int(table[full]) if exact else float(table[full])
    singles = [int(table[1 << i]) if exact else float(table[1 << i]) for i in range(m)]
    if exact:
        delta_s: Fraction | float = Fraction(sum(singles) - h_full, m - 1)
    else:
        delta_s = (sum(singles) - h_full) / (m - 1)
    worst: tuple[int, ...] | None = None
    margin: Fraction | float | None = None
    for subset, mask in _subsets_lex(m, m - 2):
        s_b = sum(singles[v - 1] for v in subset)
        comp_h = int(table[full ^ mask]) if exact else float(table[full ^ mask])
        if exact:
            gap: Fraction | float = Fraction(s_b + comp_h - h_full, len(subset)) - delta_s
        else:
            gap = (s_b + comp_h - h_full) / len(subset) - delta_s
        if margin is None or gap < margin:
            margin = gap
            worst = subset
    assert margin is not None
    if exact:
        is_min = margin >= 0
        is_uni = margin > 0
    else:
        is_min = margin >= -FLOAT_TOL
        is_uni = margin > FLOAT_TOL
    return TypeSVerdict(
        is_minimizer=is_min,
        is_unique=is_uni,
        worst_b=None if is_uni else worst,
        margin=margin,
    )


def type_s_by_enumeration(oracle: EntropyOracle) -> TypeSVerdict:
    """The same verdict by full partition enumeration (any m >= 2).

    Used as the fallback below the subset test's m >= 3 regime and as an
    independent cross-check in the test suite.
    """
    report = _capacity.sk_capacity(oracle, limit=None)
    s = singleton_partition(oracle.m)
    is_min = s in report.minimizers
    is_uni = is_min and report.minimizer_count == 1
    return TypeSVerdict(is_minimizer=is_min, is_unique=is_uni, worst_b=None, margin=None)


@dataclass(frozen=True)
class RskResult:
    """The exact communication complexity of a qualifying PIN model."""

    r_sk: Fraction
    r_co: Fraction
    m: int
    t: int
    edge_count: int


def complete_uniform_gap(m: int, t: int, b: int) -> Fraction:
    """Delta(P_B) - Delta(S) on the complete t-uniform hypergraph, |B| = b.

    Closed forms: (1/t)[C(m-2,t-1) - C(b-1,t-1)] when b >= t, and
    (1/t) C(m-2,t-1) when b < t; nonnegative throughout the valid range.
    """
    if not 2 <= t <= m - 1:
        raise InputError(f"need 2 <= t <= m-1, got t = {t}, m = {m}")
    if not 1 <= b <= m - 2:
        raise InputError(f"need 1 <= b <= m-2, got b = {b}")
    if b >= t:
        return Fraction(comb(m - 2, t - 1) - comb(b - 1, t - 1), t)
    return Fraction(comb(m - 2, t - 1), t)


def rsk_uniform_pin(h: Hypergraph, *, crosscheck_cap: int = 12) -> RskResult:
    """R_SK = R_CO = (m-t)/(m-1) |E| for a type-S t-uniform PIN model.

    Refuses non-uniform hypergraphs, t < 2, and instances that fail the
    type-S test (the witness subset is named in the error).  Whenever
    enumeration is affordable the formula is cross-checked against the
    brute-force omniscience rate; a mismatch raises
    :class:`VerificationError`.
    """
    t = h.uniform_size()
    if t is None:
        raise PreconditionError("hypergraph is not uniform: edge sizes differ")
    if t < 2:
        raise PreconditionError(f"the formula needs t >= 2, got t = {t}")
    m = h.m
    source = PinSource(h)
    if m >= 3:
        verdict = is_type_s(source)
        if not verdict.is_minimizer:
            b = verdict.worst_b
            raise PreconditionError(
                "singleton partition is not a minimizer: "
                f"Delta(P_B) - Delta(S) = {verdict.margin} for B = {set(b)}"
            )
    # m = 2: the singleton partition is the only partition, nothing to check;
    # t >= 2 and t <= m force m >= 2, so the denominator is safe
    r = Fraction((m - t) * h.edge_count, m - 1)
    if m <= crosscheck_cap:
        report = _capacity.sk_capacity(source, limit=1)
        if report.r_co != r:
            raise VerificationError(
                f"formula value {r} disagrees with enumerated omniscience rate {report.r_co}"
            )
    return RskResult(r_sk=r, r_co=r, m=m, t=t, edge_count=h.edge_count)


@dataclass(frozen=True)
class BoundCheckResult:
    """Outcome of the empirical sum_i I(X_i;L) <= t H(L) check."""

    max_ratio: float
    violations: int
    trials: int
    evaluated: int
    t: int
    edge_count: int


def observable_bound_check(
    h: Hypergraph,
    trials: int,
    seed: int,
    *,
    include_structured: bool = False,
) -> BoundCheckResult:
    """Sample random label maps L and test sum_i I(X_i;L) <= t H(L).

    Each trial draws a label-set size in 2..8 and a uniformly random
    assignment of labels to the 2^|E| outcomes from its own derived seed
    (seed, trial), so results do not depend on evaluation order.  Trials
    with H(L) = 0 are excluded from the ratio.  ``include_structured``
    appends the identity map, the constant map, and every single-edge
    projection.
    """
    t = h.uniform_size()
    if t is None:
        raise PreconditionError("the bound check needs a uniform hypergraph")
    if trials < 1:
        raise InputError("need at least one trial")
    if h.edge_count > BOUND_CHECK_EDGE_CAP:
        raise InputError(
            f"outcome enumeration is capped at |E| <= {BOUND_CHECK_EDGE_CAP}, got {h.edge_count}"
        )
    source = PinSource(h)
    observables = []
    for k in range(trials):
        rng = np.random.default_rng([seed, k])
        n_labels = int(rng.integers(2, 9))
        observables.append(FunctionObservable.random_labels(source, n_labels, rng))
    if include_structured:
        observables.append(FunctionObservable.identity(source))
        observables.append(FunctionObservable.constant(source))
        for j in range(1, h.edge_count + 1):
            observables.append(FunctionObservable.edge_projection(source, j))
    max_ratio = 0.0
    violations = 0
    evaluated = 0
    for obs in observables:
        stats = observable_stats(obs)
        total = sum(stats.mi)
        bound = t * stats.h_label
        if total > bound + FLOAT_TOL:
            violations += 1
        if stats.h_label > 0.0:
            evaluated += 1
            max_ratio = max(max_ratio, total / bound)
    return BoundCheckResult(
        max_ratio=max_ratio,
        violations=violations,
        trials=len(observables),
        evaluated=evaluated,
        t=t,
        edge_count=h.edge_count,
    )
