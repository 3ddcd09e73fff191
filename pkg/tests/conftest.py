"""Shared test helpers: independent brute-force oracles and seeded corpora.

The brute-force entropy here materializes the joint distribution of the
edge bits and never uses the incidence-counting rule, so agreement between
the two is a real check.  All randomness is drawn from numpy Generators
with seeds fixed in this file.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from skpin import Hypergraph, PinSource, hidden_bit_source
from skpin.generators import complete_uniform, cycle_graph, harary_graph, matching

# seeds are arbitrary but frozen; changing them invalidates derived values
SEED_DUALITY = 20250811
SEED_CLUB = 515253
SEED_ORACLE = 90210
SEED_PMF = 777


def brute_pin_entropy(h: Hypergraph, subset) -> Fraction:
    """H(X_A) from the materialized joint distribution of the edge bits.

    Every outcome of the 2^|E| edge-bit vectors is equally likely; the
    marginal on A groups outcomes by the bits of edges incident to A, so
    every group size is a power of two and the entropy is an exact
    integer-valued Fraction computed without floating point.
    """
    n_edges = len(h.edges)
    members = [set(e) for e in h.edges]
    subset = list(subset)
    groups: dict[tuple, int] = {}
    for o in range(1 << n_edges):
        key = tuple(
            tuple((o >> j) & 1 for j in range(n_edges) if i in members[j])
            for i in subset
        )
        groups[key] = groups.get(key, 0) + 1
    total = 1 << n_edges
    acc = Fraction(0)
    for c in groups.values():
        assert c & (c - 1) == 0, "PIN marginal group sizes must be powers of two"
        k = c.bit_length() - 1
        acc += Fraction(c, total) * (n_edges - k)
    return acc


class BrutePinOracle:
    """Entropy oracle backed by brute_pin_entropy; exact but exponential."""

    exact = True

    def __init__(self, h: Hypergraph):
        self.hypergraph = h
        self.m = h.m

    def entropy_mask(self, mask: int) -> Fraction:
        subset = [i + 1 for i in range(self.m) if mask >> i & 1]
        return brute_pin_entropy(self.hypergraph, subset)

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1


def bell_number(n: int) -> int:
    """Bell numbers by the Bell-triangle recurrence (Bell(1) = 1)."""
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[-1]


def random_hypergraph(rng: np.random.Generator, m: int, max_edges: int, t: int | None = None) -> Hypergraph:
    """A random multihypergraph; mixed edge sizes unless t is given."""
    n_edges = int(rng.integers(1, max_edges + 1))
    edges = []
    for _ in range(n_edges):
        size = t if t is not None else int(rng.integers(1, m + 1))
        verts = rng.choice(m, size=size, replace=False) + 1
        edges.append(tuple(sorted(int(v) for v in verts)))
    return Hypergraph(m, edges)


def random_joint_pmf(rng: np.random.Generator, sizes: tuple[int, ...]) -> dict:
    """A dense Dirichlet(1) pmf over the product alphabet."""
    from itertools import product

    outcomes = list(product(*[range(a) for a in sizes]))
    probs = rng.dirichlet(np.ones(len(outcomes)))
    return dict(zip(outcomes, probs))


@pytest.fixture(scope="session")
def duality_corpus() -> list[Hypergraph]:
    """100 random hypergraphs with 3 <= m <= 6 (criterion 3 / criterion 4)."""
    rng = np.random.default_rng(SEED_DUALITY)
    corpus = []
    for _ in range(100):
        m = int(rng.integers(3, 7))
        corpus.append(random_hypergraph(rng, m, max_edges=2 * m))
    return corpus


@pytest.fixture(scope="session")
def club_corpus():
    """50 constructed oracle pairs for the clubbing dichotomy (criterion 6)."""
    rng = np.random.default_rng(SEED_CLUB)
    pairs = []
    # the counterexample pairing: hidden-bit source with the triangle
    pairs.append((hidden_bit_source(3, Fraction(1, 2)), PinSource(complete_uniform(3, 2))))
    # complementary matchings whose club is the 4-cycle (strict inequality)
    pairs.append((PinSource(matching(4, 1)), PinSource(matching(4, 2))))
    # identical random pairs (always share every minimizer)
    for _ in range(12):
        m = int(rng.integers(3, 6))
        h = random_hypergraph(rng, m, max_edges=2 * m)
        pairs.append((PinSource(h), PinSource(h)))
    # complete-uniform pairs (both uniquely singleton-minimized)
    for _ in range(6):
        m = int(rng.integers(4, 7))
        t1 = int(rng.integers(2, m))
        t2 = int(rng.integers(2, m))
        pairs.append((PinSource(complete_uniform(m, t1)), PinSource(complete_uniform(m, t2))))
    # free-form random pairs
    while len(pairs) < 50:
        m = int(rng.integers(3, 6))
        pairs.append(
            (
                PinSource(random_hypergraph(rng, m, max_edges=2 * m)),
                PinSource(random_hypergraph(rng, m, max_edges=2 * m)),
            )
        )
    return pairs


@pytest.fixture(scope="session")
def type_s_zoo() -> list[Hypergraph]:
    """A few hundred instances that pass the singleton-minimizer test.

    Mix of families known to pass (complete uniform, Harary, cycles, and
    parallel-edge copies of them) plus random hypergraphs filtered by the
    test itself.
    """
    from skpin import is_type_s

    rng = np.random.default_rng(SEED_ORACLE)
    zoo: list[Hypergraph] = []
    for m in range(3, 7):
        for t in range(2, m + 1):
            zoo.append(complete_uniform(m, t))
        for k in range(2, m):
            zoo.append(harary_graph(m, k))
        zoo.append(cycle_graph(m))
    # duplicated-edge variants: scaling every entropy keeps the verdict
    for h in list(zoo)[:20]:
        zoo.append(Hypergraph(h.m, h.edges + h.edges))
    attempts = 0
    while len(zoo) < 220 and attempts < 4000:
        attempts += 1
        m = int(rng.integers(3, 7))
        h = random_hypergraph(rng, m, max_edges=2 * m)
        if is_type_s(PinSource(h)).is_minimizer:
            zoo.append(h)
    assert len(zoo) >= 200
    return zoo
