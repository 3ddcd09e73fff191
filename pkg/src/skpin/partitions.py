"""Set partitions of {1..m}: enumeration, the normalized surplus Delta,
and the special partitions used by the singleton-minimizer test.

Partitions are kept in a canonical form (each cell sorted, cells ordered
by smallest element) so equality and reporting are deterministic.
Enumeration follows restricted-growth-string (RGS) lexicographic order;
the canonical cell order coincides with the RGS label order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import InputError, VerificationError
from .model import FLOAT_TOL, EntropyOracle, subset_mask

#: full enumeration is desk-scale up to Bell(12) ~ 4.2M partitions
ENUMERATION_CAP = 12


@dataclass(frozen=True)
class Partition:
    """A set partition of {1..m} in canonical form."""

    m: int
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        flat = sorted(v for cell in self.cells for v in cell)
        if flat != list(range(1, self.m + 1)):
            raise ValueError("cells must partition 1..m")
        if any(tuple(sorted(c)) != c or not c for c in self.cells):
            raise ValueError("cells must be nonempty sorted tuples")
        if list(self.cells) != sorted(self.cells, key=lambda c: c[0]):
            raise ValueError("cells must be ordered by smallest element")

    @classmethod
    def from_cells(cls, m: int, cells: Iterable[Iterable[int]]) -> "Partition":
        canon = sorted((tuple(sorted(c)) for c in cells), key=lambda c: c[0] if c else 0)
        return cls(m, tuple(canon))

    @classmethod
    def from_rgs(cls, rgs: Sequence[int]) -> "Partition":
        """Build from a restricted-growth string (rgs[i] = cell of terminal i+1)."""
        n_cells = max(rgs) + 1
        cells: list[list[int]] = [[] for _ in range(n_cells)]
        for i, label in enumerate(rgs):
            cells[label].append(i + 1)
        return cls(len(rgs), tuple(tuple(c) for c in cells))

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @cached_property
    def cell_masks(self) -> tuple[int, ...]:
        return tuple(subset_mask(c, self.m) for c in self.cells)

    def to_lists(self) -> list[list[int]]:
        """JSON form: arrays of arrays of 1-based terminals."""
        return [list(c) for c in self.cells]


def singleton_partition(m: int) -> Partition:
    """The partition of {1..m} into m one-element cells."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return Partition(m, tuple((i,) for i in range(1, m + 1)))


def partition_from_subset(b: Iterable[int], m: int) -> Partition:
    """The partition {{b_1},...,{b_k}, B^c} attached to a proper subset B."""
    bset = sorted(set(b))
    if not bset:
        raise ValueError("B must be nonempty")
    if any(not 1 <= v <= m for v in bset):
        raise ValueError(f"B contains terminals outside 1..{m}")
    comp = tuple(v for v in range(1, m + 1) if v not in set(bset))
    if not comp:
        raise ValueError("B must be a proper subset of 1..m")
    cells = [(v,) for v in bset] + [comp]
    return Partition.from_cells(m, cells)


def _rgs_iter(m: int) -> Iterator[list[int]]:
    """All restricted-growth strings of length m in lexicographic order.

    Yields one mutable buffer repeatedly; callers must copy what they keep.
    """
    a = [0] * m
    mb = [0] * m  # mb[j] = max(a[:j])
    while True:
        yield a
        j = m - 1
        while j >= 1 and a[j] == mb[j] + 1:
            j -= 1
        if j == 0:
            return
        a[j] += 1
        v = mb[j] if mb[j] >= a[j] else a[j]
        for k in range(j + 1, m):
            a[k] = 0
            mb[k] = v


def enumerate_partitions(
    m: int, min_cells: int = 2, *, cap: int = ENUMERATION_CAP
) -> Iterator[Partition]:
    """Every partition of {1..m} with at least ``min_cells`` cells, once each,
    in restricted-growth lexicographic order.

    ``cap`` bounds m (Bell numbers explode); raise it explicitly to go past
    the default desk-scale limit.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 1 <= min_cells <= m:
        raise ValueError(f"min_cells must lie in 1..{m}")
    if m > cap:
        raise InputError(f"partition enumeration is capped at m <= {cap}, got m = {m}")
    for rgs in _rgs_iter(m):
        if max(rgs) + 1 >= min_cells:
            yield Partition.from_rgs(rgs)


def delta(oracle: EntropyOracle, partition: Partition):
    """The normalized surplus (sum_A H(X_A) - H(X_M)) / (|P| - 1).

    Exact Fraction on the counting path, binary64 otherwise; nonnegative
    for every submodular oracle (checked at runtime).
    """
    if partition.m != oracle.m:
        raise ValueError(f"partition is over m = {partition.m}, oracle has m = {oracle.m}")
    if partition.n_cells < 2:
        raise ValueError("delta needs a partition with at least 2 cells")
    h_full = oracle.entropy_mask(oracle.full_mask)
    surplus = sum(oracle.entropy_mask(cm) for cm in partition.cell_masks) - h_full
    if oracle.exact:
        value = Fraction(surplus, partition.n_cells - 1)
        if value < 0:
            raise VerificationError(f"negative surplus {value}: oracle is not submodular")
        return value
    value = surplus / (partition.n_cells - 1)
    if value < -FLOAT_TOL:
        raise VerificationError(f"negative surplus {value}: oracle is not submodular")
    return max(value, 0.0)
