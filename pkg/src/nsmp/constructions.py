"""Generators for families of patterns that allow but do not require the nSMP."""

from __future__ import annotations

from .digraph import max_composite_cycle
from .errors import HypothesisViolatedError
from .patterns import Sign, SignPattern, parse_pattern

P_, M_, Z_ = Sign.PLUS, Sign.MINUS, Sign.ZERO

FIG1_LEFT = parse_pattern("""
0 + 0 0
+ 0 - 0
0 0 0 +
+ 0 0 0
""")

FIG1_RIGHT = parse_pattern("""
0 + 0 0
+ 0 - 0
0 + 0 +
+ 0 0 0
""")

# 4-cycle 0->1->2->3->0 and a negative 2-cycle between 0 and the extra vertex 4
FIG2 = parse_pattern("""
0 + 0 0 -
0 0 + 0 0
0 0 0 + 0
+ 0 0 0 0
+ 0 0 0 0
""")

C52 = parse_pattern("""
+ + 0 0 0
0 0 + + +
- - 0 0 0
0 0 - 0 0
0 0 0 - -
""")


def _embed(G: SignPattern, n: int) -> list[list[Sign]]:
    rows = [[Z_] * n for _ in range(n)]
    for i in range(G.n):
        for j in range(G.n):
            rows[i][j] = G.entries[i][j]
    return rows


def star2_attach(G: SignPattern) -> SignPattern:
    """Attach a positive and a negative loopless 2-cycle to vertex 0 of ``G``.

    Requires a composite cycle of ``G`` covering all vertices except 0.
    """
    m = G.n
    rest = list(range(1, m))
    if m < 1 or (rest and max_composite_cycle(G.principal(rest)) < m - 1):
        raise HypothesisViolatedError(
            "G needs a composite cycle on every vertex other than vertex 0")
    n = m + 2
    rows = _embed(G, n)
    u, w = m, m + 1
    rows[0][u], rows[u][0] = P_, P_
    rows[0][w], rows[w][0] = P_, M_
    return SignPattern.from_rows(rows)


def star3_attach(H: SignPattern) -> SignPattern:
    """Attach three positive 2-cycles to vertex 0 of ``H``, each new vertex with a positive loop.

    Requires a composite cycle of ``H`` covering at least ``H.n - 1`` vertices.
    """
    m = H.n
    if max_composite_cycle(H) < m - 1:
        raise HypothesisViolatedError("H needs a composite cycle on at least n(H) - 1 vertices")
    n = m + 3
    rows = _embed(H, n)
    for s in range(m, n):
        rows[0][s] = rows[s][0] = rows[s][s] = P_
    return SignPattern.from_rows(rows)


def cnk(n: int) -> SignPattern:
    if n != 5:
        raise HypothesisViolatedError("only the order-5 member of this family is available")
    return C52


def build_figure_construction(kind: str, base: SignPattern | None = None,
                              n: int | None = None) -> SignPattern:
    """Named constructions: ``fig1-left``, ``fig1-right``, ``fig2``,
    ``star2-attach`` (needs ``base``), ``star3-attach`` (needs ``base``), ``cnk`` (needs ``n``)."""
    kind = kind.lower()
    if kind == "fig1-left":
        return FIG1_LEFT
    if kind == "fig1-right":
        return FIG1_RIGHT
    if kind == "fig2":
        return FIG2
    if kind in ("star2-attach", "star3-attach"):
        if base is None:
            raise HypothesisViolatedError(f"{kind} needs a base pattern")
        return star2_attach(base) if kind == "star2-attach" else star3_attach(base)
    if kind == "cnk":
        return cnk(5 if n is None else n)
    raise ValueError(f"unknown construction {kind!r}")
