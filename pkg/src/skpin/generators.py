"""Named instance generators and the file renderers behind ``skpin gen``.

Hypergraph families: complete uniform, cycle, path, perfect matchings
(the standard disconnected witnesses), and Harary graphs.  The one
tabular family is the hidden-bit source.  A generator spec is a string
``name:key=value,key=value``, e.g. ``complete-uniform:m=5,t=3``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .model import Hypergraph, TabularSource, hidden_bit_source

#: cap on generated instance size (file-level sanity, not a math limit)
GEN_M_CAP = 64


def complete_uniform(m: int, t: int) -> Hypergraph:
    """The complete t-uniform hypergraph on m vertices (every t-subset)."""
    from itertools import combinations

    if not 1 <= t <= m:
        raise InputError(f"need 1 <= t <= m, got t = {t}, m = {m}")
    return Hypergraph(m, combinations(range(1, m + 1), t))


def cycle_graph(m: int) -> Hypergraph:
    if m < 3:
        raise InputError("a cycle needs m >= 3")
    edges = [(i, i + 1) for i in range(1, m)] + [(1, m)]
    return Hypergraph(m, edges)


def path_graph(m: int) -> Hypergraph:
    if m < 2:
        raise InputError("a path needs m >= 2")
    return Hypergraph(m, [(i, i + 1) for i in range(1, m)])


def matching(m: int, stride: int = 1) -> Hypergraph:
    """A perfect matching: pairs (2i-1, 2i) at stride 1.

    Stride 2 interleaves within blocks of four -- (1,3),(2,4),... -- giving
    the complementary matching whose club with the stride-1 one is a union
    of 4-cycles.  Both are disconnected for m > 2, hence zero capacity.
    """
    if m < 2 or m % 2:
        raise InputError("a perfect matching needs even m >= 2")
    if stride == 1:
        edges = [(i, i + 1) for i in range(1, m, 2)]
    elif stride == 2:
        if m % 4:
            raise InputError("stride-2 matching needs m divisible by 4")
        edges = []
        for base in range(0, m, 4):
            edges.append((base + 1, base + 3))
            edges.append((base + 2, base + 4))
    else:
        raise InputError(f"stride must be 1 or 2, got {stride}")
    return Hypergraph(m, edges)


def harary_graph(m: int, k: int) -> Hypergraph:
    """The k-connected circulant construction on m vertices.

    Even k joins each vertex to its k/2 nearest neighbors on each side;
    odd k adds diameters (even m) or near-diameters (odd m, one vertex
    ending up with degree k+1).  Contains the cycle (k = 2) and the
    complete graph (k = m-1) as the extreme cases.
    """
    if not 2 <= k < m:
        raise InputError(f"need 2 <= k < m, got k = {k}, m = {m}")
    edges = set()

    def add(a: int, b: int) -> None:
        a, b = a % m, b % m
        if a != b:
            edges.add((min(a, b) + 1, max(a, b) + 1))

    for i in range(m):
        for d in range(1, k // 2 + 1):
            add(i, i + d)
    if k % 2:
        if m % 2 == 0:
            for i in range(m // 2):
                add(i, i + m // 2)
        else:
            for i in range((m - 1) // 2 + 1):
                add(i, i + (m - 1) // 2)
    return Hypergraph(m, sorted(edges))


def render_hypergraph_file(h: Hypergraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(str(h.m))
    lines.extend(" ".join(str(v) for v in e) for e in h.edges)
    return "\n".join(lines) + "\n"


def render_pmf_file(src: TabularSource, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"{src.m} " + " ".join(str(a) for a in src.alphabet_sizes))
    if src.exact_probs is not None:
        probs = [f"{p.numerator}/{p.denominator}" for p in src.exact_probs]
    else:
        probs = [repr(float(p)) for p in src.probs]
    for x, p in zip(src.support, probs):
        lines.append(" ".join(str(v) for v in x) + f" {p}")
    return "\n".join(lines) + "\n"


def _parse_params(text: str) -> dict[str, str]:
    params: dict[str, str] = {}
    if not text:
        return params
    for item in text.split(","):
        if "=" not in item:
            raise InputError(f"bad generator parameter {item!r} (expected key=value)")
        key, value = item.split("=", 1)
        params[key.strip()] = value.strip()
    return params


def _int_param(params: dict[str, str], key: str) -> int:
    if key not in params:
        raise InputError(f"generator needs parameter {key}")
    try:
        return int(params[key])
    except ValueError:
        raise InputError(f"parameter {key} must be an integer, got {params[key]!r}") from None


def make_instance(spec: str) -> Hypergraph | TabularSource:
    """Build the instance described by ``name:key=value,...``.

    Names: complete-uniform(m,t), cycle(m), path(m), disconnected(m[,stride]),
    harary(m,k), hidden-bit(m,p) (alias: example1).
    """
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    params = _parse_params(rest)
    if "m" in params and _int_param(params, "m") > GEN_M_CAP:
        raise InputError(f"generated instances are capped at m <= {GEN_M_CAP}")
    if name == "complete-uniform":
        return complete_uniform(_int_param(params, "m"), _int_param(params, "t"))
    if name == "cycle":
        return cycle_graph(_int_param(params, "m"))
    if name == "path":
        return path_graph(_int_param(params, "m"))
    if name == "disconnected":
        stride = _int_param(params, "stride") if "stride" in params else 1
        return matching(_int_param(params, "m"), stride)
    if name == "harary":
        return harary_graph(_int_param(params, "m"), _int_param(params, "k"))
    if name in ("hidden-bit", "example1"):
        if "p" not in params:
            raise InputError("hidden-bit generator needs parameter p")
        try:
            p = Fraction(params["p"])
        except (ValueError, ZeroDivisionError):
            raise InputError(f"parameter p must be a number, got {params['p']!r}") from None
        return hidden_bit_source(_int_param(params, "m"), p)
    raise InputError(f"unknown generator {name!r}")


def render_instance_file(instance: Hypergraph | TabularSource, spec: str) -> str:
    if isinstance(instance, Hypergraph):
        return render_hypergraph_file(instance, comment=spec)
    return render_pmf_file(instance, comment=spec)
