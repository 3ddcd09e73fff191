"""Sources, parsing, entropies, observables, and the information lemmas."""

import math
from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest

from skpin import (
    FunctionObservable,
    Hypergraph,
    InputError,
    PinSource,
    TabularSource,
    club,
    conditional_entropy,
    conditional_mutual_information,
    hidden_bit_source,
    load_hypergraph,
    load_pmf,
    observable_stats,
    subset_entropy,
)
from skpin.generators import complete_uniform, render_pmf_file

from conftest import (
    SEED_ORACLE,
    SEED_PMF,
    BrutePinOracle,
    brute_pin_entropy,
    random_hypergraph,
    random_joint_pmf,
)


def h2(p: float) -> float:
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


# -- hypergraph parsing -------------------------------------------------


def test_load_complete_53_matches_canonical_indexing():
    lines = ["5"] + [" ".join(map(str, e)) for e in combinations(range(1, 6), 3)]
    h = load_hypergraph("\n".join(lines))
    assert h.m == 5
    assert h.edges == tuple(combinations(range(1, 6), 3))
    assert h.edges[0] == (1, 2, 3)
    assert h.edges[9] == (3, 4, 5)


def test_load_smallest_legal_input():
    h = load_hypergraph("1\n1\n")
    assert h.m == 1
    assert h.edges == ((1,),)


def test_load_preserves_duplicates():
    h = load_hypergraph("3\n1 2\n1 2\n")
    assert h.m == 3
    assert h.edges == ((1, 2), (1, 2))
    assert PinSource(h).entropy([1, 2, 3]) == 2


def test_load_resorts_edges_canonically():
    h = load_hypergraph("4\n1 3\n1 2 4\n1 2\n")
    assert h.edges == ((1, 2), (1, 2, 4), (1, 3))


def test_load_comments_and_blank_lines():
    text = "# a comment\n\n3  # vertex count\n1 2\n# middle\n2 3\n"
    assert load_hypergraph(text).edges == ((1, 2), (2, 3))


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("0\n1\n", "line 1"),
        ("x\n1 2\n", "line 1"),
        ("3\n1 a\n", "line 2"),
        ("3\n1 4\n", "line 2"),
        ("3\n2 2\n", "line 2"),
        ("3\n2 1\n", "line 2"),
        ("3\n", "no hyperedges"),
        ("", "no terminal count"),
        ("3 1 2\n", "line 1"),
    ],
)
def test_load_rejections_carry_line_numbers(text, fragment):
    with pytest.raises(InputError, match=fragment):
        load_hypergraph(text)


# -- subset entropies ---------------------------------------------------


def test_k53_subset_entropies():
    src = PinSource(complete_uniform(5, 3))
    assert subset_entropy(src, [1]) == 6  # C(4,2)
    assert subset_entropy(src, [1, 2, 3, 4, 5]) == 10  # C(5,3)
    assert subset_entropy(src, []) == 0


def test_conditional_entropy_triangle():
    src = PinSource(complete_uniform(3, 2))
    assert conditional_entropy(src, [1, 2], [3]) == 1
    assert conditional_entropy(src, [1], [1, 2]) == 0  # subset of condition


def test_conditional_entropy_hidden_bit():
    src = hidden_bit_source(3, Fraction(1, 2))
    assert conditional_entropy(src, [1], [2]) == pytest.approx(1.0, abs=1e-9)


def test_pin_counting_matches_materialized_joint_exhaustively():
    # every edge multiset up to |E| = 4 for m <= 3, and up to |E| = 2 for m = 4
    from itertools import combinations_with_replacement

    cases = [(1, 4), (2, 4), (3, 4), (4, 2)]
    for m, max_edges in cases:
        pool = [tuple(sorted(c)) for r in range(1, m + 1) for c in combinations(range(1, m + 1), r)]
        for k in range(1, max_edges + 1):
            for edges in combinations_with_replacement(pool, k):
                h = Hypergraph(m, edges)
                src = PinSource(h)
                for mask in range(1 << m):
                    subset = [i + 1 for i in range(m) if mask >> i & 1]
                    assert brute_pin_entropy(h, subset) == src.entropy_mask(mask)


def test_pin_counting_matches_materialized_joint_random_m4():
    rng = np.random.default_rng(SEED_ORACLE)
    for _ in range(60):
        h = random_hypergraph(rng, 4, max_edges=4)
        src = PinSource(h)
        for mask in range(16):
            subset = [i + 1 for i in range(4) if mask >> i & 1]
            assert brute_pin_entropy(h, subset) == src.entropy_mask(mask)


def test_entropy_table_matches_pointwise():
    rng = np.random.default_rng(SEED_ORACLE + 1)
    for _ in range(25):
        m = int(rng.integers(1, 7))
        src = PinSource(random_hypergraph(rng, m, max_edges=2 * m))
        table = src.entropy_table()
        for mask in range(1 << m):
            assert int(table[mask]) == src.entropy_mask(mask)


def _check_monotone_submodular(oracle, tol=0.0):
    m = oracle.m
    for a in range(1 << m):
        for b in range(1 << m):
            ha = oracle.entropy_mask(a)
            hb = oracle.entropy_mask(b)
            if a & b == a:  # a subset of b
                assert ha <= hb + tol
            hu = oracle.entropy_mask(a | b)
            hi = oracle.entropy_mask(a & b)
            assert ha + hb >= hu + hi - tol


def test_pin_oracles_monotone_submodular():
    rng = np.random.default_rng(SEED_ORACLE + 2)
    for _ in range(12):
        m = int(rng.integers(2, 7))
        _check_monotone_submodular(PinSource(random_hypergraph(rng, m, max_edges=2 * m)))


def test_tabular_oracles_monotone_submodular():
    rng = np.random.default_rng(SEED_ORACLE + 3)
    for _ in range(6):
        m = int(rng.integers(2, 4))
        sizes = tuple(int(rng.integers(2, 4)) for _ in range(m))
        src = TabularSource(m, sizes, random_joint_pmf(rng, sizes))
        _check_monotone_submodular(src, tol=1e-9)
    _check_monotone_submodular(hidden_bit_source(4, Fraction(1, 4)), tol=1e-9)


# -- clubbing -----------------------------------------------------------


def test_club_single_edge_pair():
    x = PinSource(Hypergraph(2, [(1, 2)]))
    z = club(x, x)
    assert z.entropy([1, 2]) == 2


def test_club_zero_entropy_identity():
    x = PinSource(complete_uniform(3, 2))
    zero = PinSource(Hypergraph(3, []))
    z = club(x, zero)
    for mask in range(8):
        assert z.entropy_mask(mask) == x.entropy_mask(mask)


def test_club_additivity_brute_force_product_pmf():
    # club of the hidden-bit source with the triangle, checked against the
    # explicit product pmf: H(Z_A) must equal H(X_A) + H(Y_A) for every A
    x = hidden_bit_source(3, Fraction(1, 2))
    tri = complete_uniform(3, 2)
    y = PinSource(tri)
    z = club(x, y)
    # product source over symbols (x_i, y_i); y_i enumerates the incident bits
    members = [set(e) for e in tri.edges]
    pmf = {}
    for xt, p in zip(x.support, x.exact_probs):
        for o in range(8):
            bits = [(o >> j) & 1 for j in range(3)]
            yt = tuple(
                sum(b << k for k, b in enumerate(bits[j] for j in range(3) if i + 1 in members[j]))
                for i in range(3)
            )
            zt = tuple(xi * 4 + yi for xi, yi in zip(xt, yt))
            pmf[zt] = pmf.get(zt, Fraction(0)) + p * Fraction(1, 8)
    prod = TabularSource(3, (16, 16, 16), pmf)
    for mask in range(8):
        assert prod.entropy_mask(mask) == pytest.approx(float(z.entropy_mask(mask)), abs=1e-9)
    # the full-source value: 3 + h(1/2) from the hidden-bit part plus 3 edge bits
    assert z.entropy([1, 2, 3]) == pytest.approx(7.0, abs=1e-9)


def test_club_additivity_random_pins():
    rng = np.random.default_rng(SEED_ORACLE + 4)
    for _ in range(10):
        m = int(rng.integers(2, 7))
        x = PinSource(random_hypergraph(rng, m, max_edges=2 * m))
        y = PinSource(random_hypergraph(rng, m, max_edges=2 * m))
        z = club(x, y)
        for mask in range(1 << m):
            assert z.entropy_mask(mask) == x.entropy_mask(mask) + y.entropy_mask(mask)


def test_club_mismatched_m_rejected():
    with pytest.raises(InputError):
        club(PinSource(Hypergraph(2, [(1, 2)])), PinSource(Hypergraph(3, [(1, 2)])))


# -- hidden-bit source --------------------------------------------------


@pytest.mark.parametrize("m", [2, 3, 4, 5])
@pytest.mark.parametrize("p", [Fraction(0), Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)])
def test_hidden_bit_closed_form(m, p):
    src = hidden_bit_source(m, p)
    hp = h2(float(p))
    for mask in range(1, 1 << m):
        assert src.entropy_mask(mask) == pytest.approx(bin(mask).count("1") + hp, abs=1e-9)


def test_hidden_bit_examples():
    assert hidden_bit_source(3, Fraction(1, 2)).entropy([1, 2]) == pytest.approx(3.0, abs=1e-9)
    assert hidden_bit_source(3, 0).entropy([1, 2, 3]) == pytest.approx(3.0, abs=1e-9)
    assert hidden_bit_source(4, Fraction(1, 4)).entropy([1]) == pytest.approx(
        1 + h2(0.25), abs=1e-9
    )


def test_hidden_bit_marginal_direct():
    # direct 4-point marginal: P(00)=P(01)=(1-p)/2, P(10)=P(11)=p/2
    p = 0.25
    expect = -2 * ((1 - p) / 2) * math.log2((1 - p) / 2) - 2 * (p / 2) * math.log2(p / 2)
    assert hidden_bit_source(4, Fraction(1, 4)).entropy([1]) == pytest.approx(expect, abs=1e-12)


def test_hidden_bit_rejects_bad_p():
    with pytest.raises(InputError):
        hidden_bit_source(3, Fraction(3, 2))


# -- pmf files ----------------------------------------------------------


def test_pmf_round_trip_rational():
    src = hidden_bit_source(3, Fraction(1, 2))
    text = render_pmf_file(src)
    back = load_pmf(text)
    assert back.alphabet_sizes == src.alphabet_sizes
    assert back.support == src.support
    assert back.exact_probs == src.exact_probs


def test_pmf_decimal_parsing():
    text = "2 2 2\n0 0 0.25\n0 1 0.25\n1 0 0.25\n1 1 0.25\n"
    src = load_pmf(text)
    assert src.exact_probs is None
    assert src.entropy([1, 2]) == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("2 2\n0 0 1\n", "line 1"),  # header arity wrong
        ("2 2 2\n0 2 1/2\n0 0 1/2\n", "line 2"),
        ("2 2 2\n0 0 1/2\n0 0 1/2\n", "duplicate"),
        ("2 2 2\n0 0 1/2\n0 1 1/3\n", "sum"),
        ("2 2 2\n0 0 0.5\n0 1 0.4\n", "sum"),
        ("2 2 2\n0 0 x\n", "line 2"),
    ],
)
def test_pmf_rejections(text, fragment):
    with pytest.raises(InputError, match=fragment):
        load_pmf(text)


# -- observables --------------------------------------------------------


def test_observable_identity_on_triangle():
    src = PinSource(complete_uniform(3, 2))
    stats = observable_stats(FunctionObservable.identity(src))
    assert stats.h_label == pytest.approx(3.0, abs=1e-12)
    assert sum(stats.mi) == pytest.approx(6.0, abs=1e-12)  # each terminal sees 2 bits
    for v in stats.mi:
        assert v == pytest.approx(2.0, abs=1e-12)


def test_observable_constant():
    src = PinSource(complete_uniform(3, 2))
    stats = observable_stats(FunctionObservable.constant(src))
    assert stats.h_label == 0.0
    assert stats.mi == (0.0, 0.0, 0.0)


def test_observable_edge_projection():
    src = PinSource(complete_uniform(3, 2))  # edges (12),(13),(23)
    stats = observable_stats(FunctionObservable.edge_projection(src, 1))
    assert stats.h_label == pytest.approx(1.0, abs=1e-12)
    assert stats.mi[0] == pytest.approx(1.0, abs=1e-12)
    assert stats.mi[1] == pytest.approx(1.0, abs=1e-12)
    assert stats.mi[2] == pytest.approx(0.0, abs=1e-12)


def test_observable_from_function_parity():
    src = PinSource(complete_uniform(3, 2))
    obs = FunctionObservable.from_function(src, lambda bits: sum(bits) % 2, name="parity")
    stats = observable_stats(obs)
    assert stats.h_label == pytest.approx(1.0, abs=1e-12)


def test_observable_on_tabular_source():
    src = hidden_bit_source(3, Fraction(1, 2))
    obs = FunctionObservable.from_function(src, lambda x: x[0] >> 1, name="w")  # the hidden bit
    stats = observable_stats(obs)
    assert stats.h_label == pytest.approx(1.0, abs=1e-9)
    for v in stats.mi:
        assert v == pytest.approx(1.0, abs=1e-9)  # I(X_i; W) = h(p) = 1


def test_observable_label_length_guard():
    src = PinSource(complete_uniform(3, 2))
    with pytest.raises(InputError):
        FunctionObservable(src, [0, 1])


# -- conditional mutual information and the two rv lemmas ----------------


def test_cmi_basic_values():
    # two independent fair bits, and Z = X
    pmf = {(0, 0): 0.25, (0, 1): 0.25, (1, 0): 0.25, (1, 1): 0.25}
    src = TabularSource(2, (2, 2), pmf)
    assert conditional_mutual_information(src, [1], [2]) == pytest.approx(0.0, abs=1e-12)
    same = TabularSource(2, (2, 2), {(0, 0): 0.5, (1, 1): 0.5})
    assert conditional_mutual_information(same, [1], [2]) == pytest.approx(1.0, abs=1e-12)


def test_cmi_xor_strictness_witness():
    # X, Y fair bits, Z = X xor Y: I(X;Z) = 0 but I(X;Z|Y) = 1
    pmf = {}
    for x, y in product((0, 1), repeat=2):
        pmf[(x, y, x ^ y)] = 0.25
    src = TabularSource(3, (2, 2, 2), pmf)
    assert conditional_mutual_information(src, [1], [3]) == pytest.approx(0.0, abs=1e-12)
    assert conditional_mutual_information(src, [1], [3], [2]) == pytest.approx(1.0, abs=1e-12)


def test_cmi_rejects_overlap():
    src = TabularSource(2, (2, 2), {(0, 0): 0.5, (1, 1): 0.5})
    with pytest.raises(ValueError):
        conditional_mutual_information(src, [1], [1])


def _product_pmf_xyz(rng):
    """Joint over (X, Y, Z) with X independent of Y by construction."""
    px = rng.dirichlet(np.ones(2))
    py = rng.dirichlet(np.ones(2))
    pmf = {}
    for x in range(2):
        for y in range(2):
            pz = rng.dirichlet(np.ones(3))
            for z in range(3):
                pmf[(x, y, z)] = px[x] * py[y] * pz[z]
    return TabularSource(3, (2, 2, 3), pmf)


def test_joint_information_superadditivity_lemma():
    # I(X;Z) + I(Y;Z) <= I(X,Y;Z) whenever X and Y are independent
    rng = np.random.default_rng(SEED_PMF)
    for _ in range(500):
        src = _product_pmf_xyz(rng)
        lhs = conditional_mutual_information(src, [1], [3]) + conditional_mutual_information(
            src, [2], [3]
        )
        rhs = conditional_mutual_information(src, [1, 2], [3])
        assert lhs <= rhs + 1e-9


def test_extra_conditioning_lemma():
    # I(X;Z|W) <= I(X;Z|W,Y) whenever X, Y, W are mutually independent
    rng = np.random.default_rng(SEED_PMF + 1)
    for _ in range(500):
        px = rng.dirichlet(np.ones(2))
        py = rng.dirichlet(np.ones(2))
        pw = rng.dirichlet(np.ones(2))
        pmf = {}
        for x in range(2):
            for y in range(2):
                for w in range(2):
                    pz = rng.dirichlet(np.ones(2))
                    for z in range(2):
                        pmf[(x, y, w, z)] = px[x] * py[y] * pw[w] * pz[z]
        src = TabularSource(4, (2, 2, 2, 2), pmf)
        lhs = conditional_mutual_information(src, [1], [4], [3])
        rhs = conditional_mutual_information(src, [1], [4], [2, 3])
        assert lhs <= rhs + 1e-9
