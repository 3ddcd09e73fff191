"""Discrete source models and entropy primitives.

The capacity machinery only ever sees a source through its subset-entropy
map A -> H(X_A) (an "entropy oracle").  Two concrete families are provided:

* :class:`PinSource` -- every hyperedge of a hypergraph carries an
  independent fair bit observed by exactly its endpoints, so H(X_A) is the
  number of hyperedges meeting A: an exact integer.
* :class:`TabularSource` -- an explicit joint pmf over m finite alphabets;
  entropies are binary64 values in bits.

Independent sources combine coordinatewise with :func:`club`;
deterministic functions of a full source outcome wrap as
:class:`FunctionObservable` for the label-side computations.

Terminal subsets are 1-based index iterables at the public surface and
bitmasks internally (bit i-1 holds terminal i).  All objects are immutable
after construction; internal caches are fill-once and never observable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError, VerificationError

#: comparison tolerance used throughout the binary64 path
FLOAT_TOL = 1e-9

#: largest number of edge bits for which a PIN outcome space is enumerated
PIN_OUTCOME_CAP = 24

#: largest m for which a full 2^m subset-entropy table may be materialized
TABLE_CAP = 24


def subset_mask(subset: Iterable[int], m: int) -> int:
    """Encode a 1-based terminal subset as a bitmask, validating the range."""
    mask = 0
    for v in subset:
        if not 1 <= v <= m:
            raise ValueError(f"terminal {v} out of range 1..{m}")
        mask |= 1 << (v - 1)
    return mask


def mask_subset(mask: int) -> tuple[int, ...]:
    """Decode a bitmask back into a sorted tuple of 1-based terminals."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class Hypergraph:
    """A vertex count plus a multiset of hyperedges in canonical order.

    Edges are stored as strictly increasing 1-based tuples, sorted
    lexicographically as tuples; repeated edges are kept (k parallel copies
    behave as k independent bits).
    """

    m: int
    edges: tuple[tuple[int, ...], ...]

    def __init__(self, m: int, edges: Iterable[Iterable[int]]):
        if not isinstance(m, int) or m < 1:
            raise ValueError("vertex count m must be a positive integer")
        canon = []
        for e in edges:
            verts = tuple(sorted(e))
            if not verts:
                raise ValueError("hyperedges must be nonempty")
            if len(set(verts)) != len(verts):
                raise ValueError(f"repeated vertex in hyperedge {tuple(e)}")
            if verts[0] < 1 or verts[-1] > m:
                raise ValueError(f"hyperedge {verts} out of range 1..{m}")
            canon.append(verts)
        canon.sort()
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_masks(self) -> tuple[int, ...]:
        return tuple(subset_mask(e, self.m) for e in self.edges)

    def uniform_size(self) -> int | None:
        """The common edge size t, or None if the hypergraph is not uniform."""
        sizes = {len(e) for e in self.edges}
        return sizes.pop() if len(sizes) == 1 else None


def load_hypergraph(text: str) -> Hypergraph:
    """Parse a hypergraph file: '#' comments, first token m, one edge per line.

    Edge lines carry space-separated, strictly increasing 1-based vertex
    indices.  Duplicate edge lines are preserved as parallel edges.  All
    rejections name the offending line.
    """
    m: int | None = None
    edges: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if m is None:
            if len(tokens) != 1:
                raise InputError(f"line {lineno}: expected the terminal count alone")
            try:
                m = int(tokens[0])
            except ValueError:
                raise InputError(f"line {lineno}: terminal count is not an integer") from None
            if m < 1:
                raise InputError(f"line {lineno}: terminal count must be >= 1")
            continue
        try:
            verts = tuple(int(t) for t in tokens)
        except ValueError:
            raise InputError(f"line {lineno}: malformed hyperedge {line!r}") from None
        for v in verts:
            if not 1 <= v <= m:
                raise InputError(f"line {lineno}: vertex {v} out of range 1..{m}")
        if len(set(verts)) != len(verts):
            raise InputError(f"line {lineno}: repeated vertex within a hyperedge")
        if any(a >= b for a, b in zip(verts, verts[1:])):
            raise InputError(f"line {lineno}: vertices must be strictly increasing")
        edges.append(verts)
    if m is None:
        raise InputError("no terminal count found in hypergraph file")
    if not edges:
        raise InputError("hypergraph file contains no hyperedges")
    return Hypergraph(m, edges)


class EntropyOracle:
    """Abstract subset-entropy map.

    Subclasses define ``m``, ``exact`` and :meth:`entropy_mask`.  Exact
    oracles return integers (counting entropies); inexact ones return
    binary64 bits.
    """

    m: int
    exact: bool

    def entropy_mask(self, mask: int):
        raise NotImplementedError

    def entropy(self, subset: Iterable[int]):
        """H(X_A) for a 1-based terminal subset A."""
        return self.entropy_mask(subset_mask(subset, self.m))

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1

    def entropy_table(self) -> np.ndarray:
        """H(X_A) for every subset mask, as one array indexed by mask.

        int64 for exact oracles, float64 otherwise.
        """
        if self.m > TABLE_CAP:
            raise InputError(f"entropy table needs m <= {TABLE_CAP}, got m = {self.m}")
        dtype = np.int64 if self.exact else np.float64
        table = np.empty(1 << self.m, dtype=dtype)
        for mask in range(1 << self.m):
            table[mask] = self.entropy_mask(mask)
        return table


class PinSource(EntropyOracle):
    """Entropy oracle of the shared-bit source on a hypergraph.

    H(X_A) is the number of hyperedges (with multiplicity) meeting A, an
    exact integer at the one-copy rate scale.
    """

    exact = True

    def __init__(self, hypergraph: Hypergraph):
        self.hypergraph = hypergraph
        self.m = hypergraph.m
        self._table: np.ndarray | None = None

    def entropy_mask(self, mask: int) -> int:
        if mask >> self.m:
            raise ValueError(f"subset mask {mask:#x} out of range for m = {self.m}")
        return sum(1 for em in self.hypergraph.edge_masks if em & mask)

    def entropy_table(self) -> np.ndarray:
        if self._table is None:
            m = self.m
            if m > TABLE_CAP:
                raise InputError(f"entropy table needs m <= {TABLE_CAP}, got m = {m}")
            n = 1 << m
            # edges contained in each mask, by subset-sum transform; then
            # H(A) = |E| - #edges avoiding A = |E| - #edges contained in A^c.
            contained = np.zeros(n, dtype=np.int64)
            for em in self.hypergraph.edge_masks:
                contained[em] += 1
            for b in range(m):
                blocks = contained.reshape(-1, 2, 1 << b)
                blocks[:, 1, :] += blocks[:, 0, :]
            e = len(self.hypergraph.edges)
            self._table = e - contained[(n - 1) ^ np.arange(n)]
        return self._table


class TabularSource(EntropyOracle):
    """Entropy oracle of an explicit joint pmf over m finite alphabets.

    ``support`` lists outcome tuples with positive probability; ``probs``
    holds the matching binary64 probabilities.  When every probability was
    given as a ratio, the exact values are retained in ``exact_probs`` for
    serialization and the probabilities must sum to 1 exactly; otherwise
    the sum is checked to within ``FLOAT_TOL``.
    """

    exact = False

    def __init__(
        self,
        m: int,
        alphabet_sizes: Sequence[int],
        pmf: Mapping[tuple[int, ...], float | Fraction],
    ):
        if m < 1:
            raise InputError("tabular source needs m >= 1")
        sizes = tuple(int(a) for a in alphabet_sizes)
        if len(sizes) != m or any(a < 1 for a in sizes):
            raise InputError("alphabet_sizes must list m positive integers")
        items = sorted(pmf.items())
        all_rational = all(isinstance(p, (Fraction, int)) for _, p in items)
        support: list[tuple[int, ...]] = []
        probs: list[float] = []
        exact: list[Fraction] = []
        for x, p in items:
            if len(x) != m:
                raise InputError(f"outcome {x} has wrong arity (expected {m})")
            for i, xi in enumerate(x):
                if not 0 <= xi < sizes[i]:
                    raise InputError(f"symbol {xi} out of range for coordinate {i + 1}")
            if (all_rational and p < 0) or (not all_rational and float(p) < -FLOAT_TOL):
                raise InputError(f"negative probability for outcome {x}")
            if float(p) <= 0.0:
                continue
            support.append(tuple(x))
            probs.append(float(p))
            if all_rational:
                exact.append(Fraction(p))
        if all_rational:
            if sum(exact, Fraction(0)) != 1:
                raise InputError("probabilities do not sum to 1 exactly")
        elif abs(math.fsum(probs) - 1.0) > FLOAT_TOL:
            raise InputError("probabilities do not sum to 1 within 1e-9")
        self.m = m
        self.alphabet_sizes = sizes
        self.support = tuple(support)
        self.probs = np.array(probs, dtype=np.float64)
        self.exact_probs = tuple(exact) if all_rational else None
        self._marginal_cache: dict[int, float] = {0: 0.0}

    def entropy_mask(self, mask: int) -> float:
        if mask >> self.m:
            raise ValueError(f"subset mask {mask:#x} out of range for m = {self.m}")
        cached = self._marginal_cache.get(mask)
        if cached is not None:
            return cached
        coords = [i for i in range(self.m) if mask >> i & 1]
        groups: dict[tuple[int, ...], float] = {}
        for x, p in zip(self.support, self.probs):
            key = tuple(x[i] for i in coords)
            groups[key] = groups.get(key, 0.0) + p
        h = -math.fsum(p * math.log2(p) for p in groups.values() if p > 0.0)
        self._marginal_cache[mask] = h
        return h


class SumOracle(EntropyOracle):
    """Oracle of a clubbed (coordinatewise paired) independent source.

    By independence H(Z_A) = H(X_A) + H(Y_A) for every A, so the oracle is
    just the pointwise sum of its components.
    """

    def __init__(self, x: EntropyOracle, y: EntropyOracle):
        if x.m != y.m:
            raise InputError(f"terminal counts differ: {x.m} vs {y.m}")
        self.components = (x, y)
        self.m = x.m
        self.exact = x.exact and y.exact

    def entropy_mask(self, mask: int):
        x, y = self.components
        return x.entropy_mask(mask) + y.entropy_mask(mask)

    def entropy_table(self) -> np.ndarray:
        x, y = self.components
        return x.entropy_table() + y.entropy_table()


def club(x: EntropyOracle, y: EntropyOracle) -> SumOracle:
    """The entropy oracle of the clubbed source Z with Z_i = (X_i, Y_i)."""
    return SumOracle(x, y)


def subset_entropy(oracle: EntropyOracle, subset: Iterable[int]):
    """H(X_A) in bits (exact integer on the counting path)."""
    return oracle.entropy(subset)


def conditional_entropy(oracle: EntropyOracle, a: Iterable[int], b: Iterable[int]):
    """H(X_A | X_B) = H(X_{A∪B}) - H(X_B), nonnegative by monotonicity."""
    ma = subset_mask(a, oracle.m)
    mb = subset_mask(b, oracle.m)
    return oracle.entropy_mask(ma | mb) - oracle.entropy_mask(mb)


def hidden_bit_source(m: int, p) -> TabularSource:
    """The hidden-bit counterexample source on m terminals.

    A latent bit W with P[W=1] = p is shared; terminal i observes the
    two-bit symbol (W, U_i) with U_i an independent fair bit, encoded as
    2*W + U_i over the alphabet {0,1,2,3}.  Every nonempty subset then has
    H(X_A) = |A| + h(p).

    ``p`` may be a Fraction, a ratio/decimal string, or a float (floats are
    read as their shortest decimal so 0.1 means exactly 1/10).
    """
    if m < 2:
        raise InputError("hidden-bit source needs m >= 2")
    if isinstance(p, float):
        p = Fraction(repr(p))
    else:
        p = Fraction(p)
    if not 0 <= p <= 1:
        raise InputError(f"p = {p} outside [0, 1]")
    scale = Fraction(1, 2**m)
    pmf: dict[tuple[int, ...], Fraction] = {}
    for w, pw in ((0, 1 - p), (1, p)):
        if pw == 0:
            continue
        for bits in range(2**m):
            x = tuple(2 * w + (bits >> i & 1) for i in range(m))
            pmf[x] = pw * scale
    return TabularSource(m, (4,) * m, pmf)


def load_pmf(text: str) -> TabularSource:
    """Parse a tabular pmf file.

    '#' comments; first data line is ``m a_1 ... a_m``; each further line is
    ``x_1 ... x_m p`` with 0-based symbol indices and p either a decimal or
    a ratio ``num/den``.  Ratios make the file exact: probabilities must
    then sum to 1 exactly, otherwise to within 1e-9.
    """
    header: tuple[int, tuple[int, ...]] | None = None
    pmf: dict[tuple[int, ...], Fraction | float] = {}
    all_rational = True
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if header is None:
            try:
                nums = [int(t) for t in tokens]
            except ValueError:
                raise InputError(f"line {lineno}: malformed header") from None
            if len(nums) < 2 or nums[0] < 1 or len(nums) != nums[0] + 1:
                raise InputError(f"line {lineno}: header must read 'm a_1 ... a_m'")
            if any(a < 1 for a in nums[1:]):
                raise InputError(f"line {lineno}: alphabet sizes must be positive")
            header = (nums[0], tuple(nums[1:]))
            continue
        m, sizes = header
        if len(tokens) != m + 1:
            raise InputError(f"line {lineno}: expected {m} symbols and a probability")
        try:
            x = tuple(int(t) for t in tokens[:m])
        except ValueError:
            raise InputError(f"line {lineno}: malformed symbol indices") from None
        for i, xi in enumerate(x):
            if not 0 <= xi < sizes[i]:
                raise InputError(
                    f"line {lineno}: symbol {xi} out of range 0..{sizes[i] - 1}"
                )
        ptok = tokens[m]
        try:
            if "/" in ptok:
                p: Fraction | float = Fraction(ptok)
            else:
                p = float(ptok)
                all_rational = False
        except (ValueError, ZeroDivisionError):
            raise InputError(f"line {lineno}: malformed probability {ptok!r}") from None
        if p < 0:
            raise InputError(f"line {lineno}: negative probability")
        if x in pmf:
            raise InputError(f"line {lineno}: duplicate outcome {x}")
        pmf[x] = p
    if header is None:
        raise InputError("no header found in pmf file")
    if not pmf:
        raise InputError("pmf file contains no outcomes")
    if not all_rational:
        pmf = {x: float(p) for x, p in pmf.items()}
    return TabularSource(header[0], header[1], pmf)


def _entropy_from_counts(counts: np.ndarray, log2_total: float, total: float) -> float:
    """Entropy in bits of a uniform-probability grouping given group sizes."""
    c = counts[counts > 0].astype(np.float64)
    return float(log2_total - (c * np.log2(c)).sum() / total)


def _entropy_from_probs(p: np.ndarray) -> float:
    p = p[p > 0.0]
    return float(-(p * np.log2(p)).sum())


class FunctionObservable:
    """A deterministic finite-valued function L of the full source outcome.

    Holds the label of every outcome in the source's canonical enumeration:
    all 2^|E| edge-bit vectors for a PIN source (capped at
    ``PIN_OUTCOME_CAP`` bits), or the pmf support for a tabular source.
    """

    def __init__(self, source: PinSource | TabularSource, labels: Sequence[int], name: str = "custom"):
        self.source = source
        self.name = name
        if isinstance(source, PinSource):
            n_edges = len(source.hypergraph.edges)
            if n_edges > PIN_OUTCOME_CAP:
                raise InputError(
                    f"observable enumeration needs |E| <= {PIN_OUTCOME_CAP}, got {n_edges}"
                )
            n_outcomes = 1 << n_edges
        else:
            n_outcomes = len(source.support)
        labels = np.asarray(labels, dtype=np.int64)
        if labels.shape != (n_outcomes,):
            raise InputError(
                f"label array has length {labels.shape}, expected {n_outcomes}"
            )
        # compact the label alphabet so joint keys stay small
        _, self.labels = np.unique(labels, return_inverse=True)
        self.n_labels = int(self.labels.max()) + 1 if n_outcomes else 0
        self._joint_cache: dict[int, float] = {}

    # -- constructors -------------------------------------------------

    @classmethod
    def from_function(cls, source, fn: Callable, name: str = "custom") -> "FunctionObservable":
        """Apply ``fn`` to every outcome (edge-bit tuple or symbol tuple)."""
        values = []
        seen: dict = {}
        for outcome in _outcome_iter(source):
            try:
                v = fn(outcome)
            except Exception as exc:  # noqa: BLE001 - report untotal maps
                raise InputError(f"label map failed on outcome {outcome}: {exc}") from exc
            if v is None:
                raise InputError(f"label map is not total: no label for {outcome}")
            values.append(seen.setdefault(v, len(seen)))
        return cls(source, values, name=name)

    @classmethod
    def identity(cls, source) -> "FunctionObservable":
        n = (1 << len(source.hypergraph.edges)) if isinstance(source, PinSource) else len(source.support)
        return cls(source, np.arange(n), name="identity")

    @classmethod
    def constant(cls, source) -> "FunctionObservable":
        n = (1 << len(source.hypergraph.edges)) if isinstance(source, PinSource) else len(source.support)
        return cls(source, np.zeros(n, dtype=np.int64), name="constant")

    @classmethod
    def edge_projection(cls, source: PinSource, index: int) -> "FunctionObservable":
        """The single bit of canonical edge number ``index`` (1-based)."""
        if not isinstance(source, PinSource):
            raise InputError("edge projection is only defined for PIN sources")
        n_edges = len(source.hypergraph.edges)
        if not 1 <= index <= n_edges:
            raise InputError(f"edge index {index} out of range 1..{n_edges}")
        outcomes = np.arange(1 << n_edges, dtype=np.int64)
        return cls(source, (outcomes >> (index - 1)) & 1, name=f"edge:{index}")

    @classmethod
    def random_labels(cls, source, n_labels: int, rng: np.random.Generator) -> "FunctionObservable":
        if n_labels < 1:
            raise InputError("need at least one label")
        n = (1 << len(source.hypergraph.edges)) if isinstance(source, PinSource) else len(source.support)
        return cls(source, rng.integers(0, n_labels, size=n), name="random")

    # -- entropies ----------------------------------------------------

    def label_entropy(self) -> float:
        """H(L) in bits."""
        return self.joint_entropy_mask(0)

    def joint_entropy(self, subset: Iterable[int]) -> float:
        """H(X_A, L) in bits."""
        return self.joint_entropy_mask(subset_mask(subset, self.source.m))

    def joint_entropy_mask(self, mask: int) -> float:
        cached = self._joint_cache.get(mask)
        if cached is not None:
            return cached
        src = self.source
        if isinstance(src, PinSource):
            n_edges = len(src.hypergraph.edges)
            inc = 0
            for j, em in enumerate(src.hypergraph.edge_masks):
                if em & mask:
                    inc |= 1 << j
            keys = np.arange(1 << n_edges, dtype=np.int64) & inc
            combined = keys * self.n_labels + self.labels
            _, counts = np.unique(combined, return_counts=True)
            h = _entropy_from_counts(counts, float(n_edges), float(1 << n_edges))
        else:
            coords = [i for i in range(src.m) if mask >> i & 1]
            if coords:
                seen: dict[tuple[int, ...], int] = {}
                key_ids = np.array(
                    [seen.setdefault(tuple(x[i] for i in coords), len(seen)) for x in src.support],
                    dtype=np.int64,
                )
            else:
                key_ids = np.zeros(len(src.support), dtype=np.int64)
            combined = key_ids * self.n_labels + self.labels
            _, inverse = np.unique(combined, return_inverse=True)
            group = np.bincount(inverse, weights=src.probs)
            h = _entropy_from_probs(group)
        self._joint_cache[mask] = h
        return h


def _outcome_iter(source):
    """Canonical outcome enumeration: edge-bit tuples or support tuples."""
    if isinstance(source, PinSource):
        n_edges = len(source.hypergraph.edges)
        if n_edges > PIN_OUTCOME_CAP:
            raise InputError(
                f"observable enumeration needs |E| <= {PIN_OUTCOME_CAP}, got {n_edges}"
            )
        for o in range(1 << n_edges):
            yield tuple((o >> j) & 1 for j in range(n_edges))
    else:
        yield from source.support


@dataclass(frozen=True)
class ObservableStats:
    """H(L) and the per-terminal informations I(X_i; L), all in bits."""

    h_label: float
    mi: tuple[float, ...]


def observable_stats(obs: FunctionObservable) -> ObservableStats:
    """H(L) and I(X_i;L) = H(X_i) + H(L) - H(X_i, L) for every terminal."""
    src = obs.source
    h_label = obs.label_entropy()
    mi = []
    for i in range(src.m):
        v = float(src.entropy_mask(1 << i)) + h_label - obs.joint_entropy_mask(1 << i)
        if v < -FLOAT_TOL:
            raise VerificationError(f"negative mutual information {v} for terminal {i + 1}")
        mi.append(max(v, 0.0))
    return ObservableStats(h_label=h_label, mi=tuple(mi))


def conditional_mutual_information(
    source: TabularSource,
    x: Iterable[int],
    z: Iterable[int],
    w: Iterable[int] = (),
) -> float:
    """I(X;Z|W) over disjoint coordinate sets of a tabular joint pmf."""
    mx = subset_mask(x, source.m)
    mz = subset_mask(z, source.m)
    mw = subset_mask(w, source.m)
    if mx & mz or mx & mw or mz & mw:
        raise ValueError("coordinate sets must be disjoint")
    v = (
        source.entropy_mask(mx | mw)
        + source.entropy_mask(mz | mw)
        - source.entropy_mask(mx | mz | mw)
        - source.entropy_mask(mw)
    )
    if v < -FLOAT_TOL:
        raise VerificationError(f"negative conditional mutual information {v}")
    return max(v, 0.0)
