"""Structure of the signed digraph D(P) of a sign pattern.

Vertex ``i`` has an arc to vertex ``j`` exactly when ``P[i][j] != 0``; the
arc carries that sign.  Loops are arcs ``(i, i)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .errors import TooLargeError
from .patterns import Sign, SignPattern, sign_product

ENUMERATION_LIMIT = 10


@dataclass(frozen=True)
class SignedDigraph:
    n: int
    arcs: frozenset[tuple[int, int, Sign]]

    def successors(self, i: int) -> list[int]:
        return sorted(j for (a, j, _) in self.arcs if a == i)


def digraph_of(P: SignPattern) -> SignedDigraph:
    arcs = frozenset((i, j, P.entries[i][j]) for i in range(P.n) for j in range(P.n)
                     if P.entries[i][j])
    return SignedDigraph(P.n, arcs)


def _adjacency(P: SignPattern) -> list[list[int]]:
    return [[j for j in range(P.n) if P.entries[i][j]] for i in range(P.n)]


# ---------------------------------------------------------------------------
# strong components

@dataclass(frozen=True)
class SccDecomposition:
    """Vertex order and diagonal blocks of a block upper-triangular form.

    ``blocks[k] = (start, stop)`` indexes into ``permutation``; permuting the
    pattern by ``permutation`` puts every arc between different blocks
    above the block diagonal.
    """

    permutation: tuple[int, ...]
    blocks: tuple[tuple[int, int], ...]

    @property
    def components(self) -> list[tuple[int, ...]]:
        return [self.permutation[a:b] for a, b in self.blocks]

    @property
    def is_irreducible(self) -> bool:
        return len(self.blocks) == 1


def _tarjan(adj: list[list[int]]) -> list[list[int]]:
    """Strong components in reverse topological order of the condensation."""
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0

    def visit(v: int):
        nonlocal counter
        index[v] = low[v] = counter
        counter += 1
        stack.append(v)
        on_stack[v] = True
        for w in adj[v]:
            if index[w] < 0:
                visit(w)
                low[v] = min(low[v], low[w])
            elif on_stack[w]:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on_stack[w] = False
                comp.append(w)
                if w == v:
                    break
            out.append(sorted(comp))

    for v in range(n):
        if index[v] < 0:
            visit(v)
    return out


def scc_decompose(P: SignPattern) -> SccDecomposition:
    comps = list(reversed(_tarjan(_adjacency(P))))
    perm: list[int] = []
    blocks = []
    for c in comps:
        blocks.append((len(perm), len(perm) + len(c)))
        perm.extend(c)
    return SccDecomposition(tuple(perm), tuple(blocks))


# ---------------------------------------------------------------------------
# cycles

def max_composite_cycle(P: SignPattern) -> int:
    """Largest number of vertices covered by vertex-disjoint cycles.

    Bitmask DP over full permutations in which a fixed point on a zero
    diagonal entry is a free "skip" of weight 0 and every other assignment
    must use a nonzero entry (weight 1).
    """
    n = P.n
    if n > 20:
        raise TooLargeError(n, 20, "max_composite_cycle")
    nz = [[bool(P.entries[i][j]) for j in range(n)] for i in range(n)]
    NEG = -1
    dp = [NEG] * (1 << n)
    dp[0] = 0
    for mask in range(1 << n):
        cur = dp[mask]
        if cur < 0:
            continue
        i = mask.bit_count()
        if i == n:
            continue
        row = nz[i]
        for j in range(n):
            bit = 1 << j
            if mask & bit:
                continue
            if row[j]:
                w = 1
            elif j == i:
                w = 0
            else:
                continue
            if cur + w > dp[mask | bit]:
                dp[mask | bit] = cur + w
    return dp[(1 << n) - 1]


def simple_cycles(P: SignPattern) -> list[tuple[tuple[int, ...], Sign]]:
    """Every simple directed cycle (loops included) with its sign.

    Each cycle is listed once, starting from its smallest vertex.
    """
    n = P.n
    if n > ENUMERATION_LIMIT:
        raise TooLargeError(n, ENUMERATION_LIMIT, "simple cycle enumeration")
    adj = _adjacency(P)
    E = P.entries
    found = []

    def extend(start: int, path: list[int], on_path: set[int]):
        v = path[-1]
        for w in adj[v]:
            if w == start:
                cyc = tuple(path)
                sign = sign_product(E[cyc[k]][cyc[(k + 1) % len(cyc)]] for k in range(len(cyc)))
                found.append((cyc, sign))
            elif w > start and w not in on_path:
                path.append(w)
                on_path.add(w)
                extend(start, path, on_path)
                path.pop()
                on_path.discard(w)

    for s in range(n):
        extend(s, [s], {s})
    return found


def has_positive_simple_cycle(P: SignPattern) -> bool:
    return any(sign == Sign.PLUS for _, sign in simple_cycles(P))


def has_intersecting_opposite_cycles(P: SignPattern) -> bool:
    """Two simple cycles of different lengths and opposite signs sharing a vertex."""
    cycles = simple_cycles(P)
    for a in range(len(cycles)):
        ca, sa = cycles[a]
        for b in range(a + 1, len(cycles)):
            cb, sb = cycles[b]
            if len(ca) != len(cb) and sa != sb and set(ca) & set(cb):
                return True
    return False


def _permutation_terms(P: SignPattern) -> Iterator[Sign]:
    """Signs of the nonzero terms of the determinant expansion."""
    n = P.n
    E = P.entries
    used = [False] * n
    chosen: list[int] = []

    def rec(i: int, unit: int) -> Iterator[Sign]:
        if i == n:
            yield Sign.from_unit(unit)
            return
        for j in range(n):
            s = E[i][j]
            if used[j] or not s:
                continue
            inversions = sum(1 for c in chosen if c > j)
            u = unit * s.unit * (-1 if inversions % 2 else 1)
            used[j] = True
            chosen.append(j)
            yield from rec(i + 1, u)
            chosen.pop()
            used[j] = False

    yield from rec(0, 1)


def is_sign_nonsingular(P: SignPattern) -> bool:
    if P.n > ENUMERATION_LIMIT:
        raise TooLargeError(P.n, ENUMERATION_LIMIT, "is_sign_nonsingular")
    seen = set()
    for s in _permutation_terms(P):
        seen.add(s)
        if len(seen) > 1:
            return False
    return len(seen) == 1


# ---------------------------------------------------------------------------
# structural classes

def recognize_hollow(P: SignPattern) -> bool:
    """All off-diagonal entries nonzero (the diagonal is unrestricted)."""
    return all(P.entries[i][j] for i in range(P.n) for j in range(P.n) if i != j)


def recognize_cycle(P: SignPattern) -> bool:
    """Off-diagonal arcs form a single Hamiltonian cycle; loops unrestricted."""
    n = P.n
    if n < 2:
        return False
    succ = []
    for i in range(n):
        out = [j for j in range(n) if j != i and P.entries[i][j]]
        if len(out) != 1:
            return False
        succ.append(out[0])
    v, seen = 0, set()
    while v not in seen:
        seen.add(v)
        v = succ[v]
    return v == 0 and len(seen) == n


@dataclass(frozen=True)
class StarStructure:
    """A star: 2-cycles between ``centre`` and every other vertex, nothing else off the diagonal.

    ``leaf_cycle_signs[k]`` is the sign of the 2-cycle through ``leaves[k]``
    (the product of its two arc signs).
    """

    centre: int
    centre_loop: Sign
    leaves: tuple[int, ...]
    leaf_loops: tuple[Sign, ...]
    leaf_cycle_signs: tuple[Sign, ...]

    @property
    def non_centre_loop_signs(self) -> Counter:
        return Counter(self.leaf_loops)

    @property
    def loopless_two_cycle_signs(self) -> Counter:
        return Counter(c for lp, c in zip(self.leaf_loops, self.leaf_cycle_signs)
                       if lp == Sign.ZERO)

    def loopless_leaves(self) -> list[int]:
        return [v for v, lp in zip(self.leaves, self.leaf_loops) if lp == Sign.ZERO]


def recognize_star(P: SignPattern) -> StarStructure | None:
    n = P.n
    if n < 2:
        return None
    E = P.entries
    for c in range(n):
        ok = True
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                on_star = (i == c) != (j == c)
                if on_star != bool(E[i][j]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            leaves = tuple(v for v in range(n) if v != c)
            return StarStructure(
                centre=c,
                centre_loop=E[c][c],
                leaves=leaves,
                leaf_loops=tuple(E[v][v] for v in leaves),
                leaf_cycle_signs=tuple(sign_product((E[c][v], E[v][c])) for v in leaves),
            )
    return None


def recognize_proper_hessenberg(P: SignPattern) -> frozenset[int] | None:
    """Cycle lengths of a proper lower Hessenberg pattern, or ``None``.

    Length ``k >= 2`` is present when subdiagonal ``k - 1`` has a nonzero
    entry; length 1 when some diagonal entry is nonzero.
    """
    n = P.n
    E = P.entries
    for i in range(n - 1):
        if not E[i][i + 1]:
            return None
        if any(E[i][j] for j in range(i + 2, n)):
            return None
    lengths = set()
    if any(E[i][i] for i in range(n)):
        lengths.add(1)
    for d in range(1, n):
        if any(E[i][i - d] for i in range(d, n)):
            lengths.add(d + 1)
    return frozenset(lengths)


def is_bipartite_underlying(P: SignPattern) -> bool:
    """Underlying undirected graph is 2-colourable; a loop counts as an odd cycle."""
    n = P.n
    E = P.entries
    if any(E[i][i] for i in range(n)):
        return False
    colour = [-1] * n
    for s in range(n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        todo = [s]
        while todo:
            v = todo.pop()
            for w in range(n):
                if w != v and (E[v][w] or E[w][v]):
                    if colour[w] < 0:
                        colour[w] = 1 - colour[v]
                        todo.append(w)
                    elif colour[w] == colour[v]:
                        return False
    return True
