"""Combinatorial allocation machinery on complete uniform hypergraphs.

For the complete t-uniform hypergraph on m vertices, the per-terminal
information terms split by the canonical edge order into "fresh" edges
(smallest terminal equals the row index) and "carried" edges (the row
terminal plus a smaller one); the carried terms of the low rows are then
handed out, one each, to the high-row sink terms by a greedy double loop
over an availability table.  The procedure is executed literally -- error
branch included -- so that its two advertised properties can be machine
checked: it never errors, and it hands out every generated term, giving
each sink row exactly one term per edge avoiding it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable

from .errors import InputError

#: column count is C(m, t); keep the table desk-scale
ALLOCATION_CAP_M = 16


@dataclass(frozen=True)
class EdgeOrder:
    """The C(m,t) size-t subsets of {1..m} in lexicographic order, 1-indexed."""

    m: int
    t: int
    edges: tuple[tuple[int, ...], ...]

    def index_of(self, edge: Iterable[int]) -> int:
        """1-based index of an edge; ValueError if absent."""
        e = tuple(sorted(edge))
        try:
            return self._index[e]
        except KeyError:
            raise ValueError(f"{e} is not a size-{self.t} subset of 1..{self.m}") from None

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {e: j for j, e in enumerate(self.edges, 1)}

    def __len__(self) -> int:
        return len(self.edges)


def edge_order(m: int, t: int) -> EdgeOrder:
    """Canonical lexicographic indexing of all t-subsets of {1..m}."""
    if not 2 <= t <= m:
        raise InputError(f"need 2 <= t <= m, got t = {t}, m = {m}")
    if m > ALLOCATION_CAP_M:
        raise InputError(f"edge order is capped at m <= {ALLOCATION_CAP_M}, got m = {m}")
    return EdgeOrder(m=m, t=t, edges=tuple(combinations(range(1, m + 1), t)))


@dataclass(frozen=True)
class TermDecomposition:
    """Edge sets behind the per-terminal information terms on K_{m,t}.

    ``fresh[i]``   -- edges whose smallest terminal is i (rows 2..m-t+1);
    ``carried[i]`` -- edges containing i and a smaller terminal (same rows;
                      these generate the allocatable terms);
    ``sinks[i]``   -- all edges containing i, for rows m-t+2..m.
    """

    m: int
    t: int
    fresh: dict[int, tuple[tuple[int, ...], ...]]
    carried: dict[int, tuple[tuple[int, ...], ...]]
    sinks: dict[int, tuple[tuple[int, ...], ...]]

    def carried_count(self) -> int:
        return sum(len(v) for v in self.carried.values())


def term_decomposition(m: int, t: int) -> TermDecomposition:
    """Split the canonical edge list into per-row fresh/carried/sink sets.

    |fresh[i]| = C(m-i, t-1) and the total carried count is
    (t-1) C(m-1, t); when t = m there are no low rows and only sinks
    remain.
    """
    order = edge_order(m, t)
    fresh: dict[int, tuple[tuple[int, ...], ...]] = {}
    carried: dict[int, tuple[tuple[int, ...], ...]] = {}
    sinks: dict[int, tuple[tuple[int, ...], ...]] = {}
    for i in range(2, m - t + 2):
        fresh[i] = tuple(e for e in order.edges if e[0] == i)
        carried[i] = tuple(e for e in order.edges if i in e and e[0] < i)
    for i in range(m - t + 2, m + 1):
        sinks[i] = tuple(e for e in order.edges if i in e)
    return TermDecomposition(m=m, t=t, fresh=fresh, carried=carried, sinks=sinks)


@dataclass(frozen=True)
class Allocation:
    """One handout: the term of edge ``edge`` generated by low row
    ``source_row`` goes to sink row ``target_row``."""

    index: int  # 1-based canonical edge index
    edge: tuple[int, ...]
    source_row: int
    target_row: int


@dataclass
class AllocationState:
    """Full record of one allocation run."""

    m: int
    t: int
    order: EdgeOrder
    status: str = "running"  # running | done | error
    allocations: list[Allocation] = field(default_factory=list)
    initial_table: dict[int, tuple[int, ...]] = field(default_factory=dict)
    table: dict[int, list[int]] = field(default_factory=dict)
    snapshots: list[dict[int, tuple[int, ...]]] = field(default_factory=list)
    error_at: tuple[int, int] | None = None


def run_allocation(m: int, t: int, trace: bool = False) -> AllocationState:
    """Execute the greedy availability-table allocation on K_{m,t}.

    Rows 2..m-t+1 start with a 1 in every column whose edge they carried;
    sink rows m-t+2..m then scan columns in ascending order, skip edges
    containing their own terminal, and consume the availability with the
    smallest row index.  A sink finding no available row sets
    status="error" (never observed; the check below makes that a hard
    claim).  With ``trace`` a copy of the table is kept after every
    consumption.
    """
    if not 2 <= t <= m - 1:
        raise InputError(f"the allocation needs 2 <= t <= m-1, got t = {t}, m = {m}")
    order = edge_order(m, t)
    low_rows = range(2, m - t + 2)
    state = AllocationState(m=m, t=t, order=order)
    for k in low_rows:
        state.table[k] = [1 if (k in e and e[0] < k) else 0 for e in order.edges]
    state.initial_table = {k: tuple(v) for k, v in state.table.items()}
    for i in range(m - t + 2, m + 1):
        for j, e in enumerate(order.edges, 1):
            if i in e:
                continue
            for k in low_rows:
                if state.table[k][j - 1] == 1:
                    state.table[k][j - 1] = 0
                    state.allocations.append(
                        Allocation(index=j, edge=e, source_row=k, target_row=i)
                    )
                    if trace:
                        state.snapshots.append({r: tuple(v) for r, v in state.table.items()})
                    break
            else:
                state.status = "error"
                state.error_at = (i, j)
                return state
    state.status = "done"
    return state


@dataclass(frozen=True)
class AllocationCheck:
    """Machine check of the two advertised allocation properties.

    ``error_free``: the run finished without hitting the error branch.
    ``exhaustive``: every generated term was consumed, and each sink row
    received exactly one term per edge avoiding its terminal.
    """

    error_free: bool
    exhaustive: bool


def verify_allocation(state: AllocationState) -> AllocationCheck:
    m, t = state.m, state.t
    error_free = state.status == "done"
    consumed_all = all(v == 0 for row in state.table.values() for v in row)
    expected_total = (t - 1) * comb(m - 1, t)
    per_sink_ok = True
    for i in range(m - t + 2, m + 1):
        got = sorted(a.edge for a in state.allocations if a.target_row == i)
        want = sorted(e for e in state.order.edges if i not in e)
        if got != want:
            per_sink_ok = False
    exhaustive = (
        consumed_all and per_sink_ok and len(state.allocations) == expected_total
    )
    return AllocationCheck(error_free=error_free, exhaustive=exhaustive)
