"""Sign patterns, relaxed S-patterns, realizations and pattern equivalence.

Indices are 0-based throughout.  Two patterns are *equivalent* when one is
carried to the other by some composition of permutation similarity,
signature similarity, transposition and negation; these operations send
realizations with the nSMP to realizations with the nSMP.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .algebra import RationalMatrix
from .errors import (
    BadTokenError,
    DimensionMismatchError,
    NonSquareError,
    RaggedError,
    TooLargeError,
)
from .rng import SplitMix64

CANONICAL_LIMIT = 6


class Sign(enum.IntEnum):
    """Entry of a sign pattern.

    The integer values fix the canonicalization order ``ZERO < PLUS < MINUS``.
    """

    ZERO = 0
    PLUS = 1
    MINUS = 2

    @property
    def token(self) -> str:
        return _SIGN_TOKENS[self]

    @property
    def unit(self) -> int:
        """``+1``, ``-1`` or ``0``."""
        return _SIGN_UNITS[self]

    def flipped(self) -> Sign:
        return _FLIP[self]

    @classmethod
    def of(cls, x) -> Sign:
        if x > 0:
            return cls.PLUS
        if x < 0:
            return cls.MINUS
        return cls.ZERO

    @classmethod
    def from_unit(cls, u: int) -> Sign:
        return cls.of(u)


_SIGN_TOKENS = {Sign.ZERO: "0", Sign.PLUS: "+", Sign.MINUS: "-"}
_SIGN_UNITS = {Sign.ZERO: 0, Sign.PLUS: 1, Sign.MINUS: -1}
_FLIP = {Sign.ZERO: Sign.ZERO, Sign.PLUS: Sign.MINUS, Sign.MINUS: Sign.PLUS}
_TOKEN_SIGNS = {"0": Sign.ZERO, "+": Sign.PLUS, "-": Sign.MINUS, "−": Sign.MINUS}
# flip lookup on raw int codes, used by the orbit tables
_FLIP_CODE = (0, 2, 1)


def sign_product(signs: Iterable[Sign]) -> Sign:
    u = 1
    for s in signs:
        u *= s.unit
    return Sign.from_unit(u)


class SSymbol(enum.Enum):
    """Entry of an S-pattern; each symbol denotes a set of admissible signs."""

    PLUS = "+"
    MINUS = "-"
    ZERO = "0"
    STAR = "*"
    NONNEG = "0+"
    NONPOS = "0-"
    ANY = "0*"

    @property
    def allowed(self) -> frozenset[Sign]:
        return _ALLOWED[self]

    @property
    def token(self) -> str:
        return self.value


_ALLOWED = {
    SSymbol.PLUS: frozenset({Sign.PLUS}),
    SSymbol.MINUS: frozenset({Sign.MINUS}),
    SSymbol.ZERO: frozenset({Sign.ZERO}),
    SSymbol.STAR: frozenset({Sign.PLUS, Sign.MINUS}),
    SSymbol.NONNEG: frozenset({Sign.ZERO, Sign.PLUS}),
    SSymbol.NONPOS: frozenset({Sign.ZERO, Sign.MINUS}),
    SSymbol.ANY: frozenset({Sign.ZERO, Sign.PLUS, Sign.MINUS}),
}
_SSYMBOL_TOKENS = {s.value: s for s in SSymbol}
_SSYMBOL_TOKENS.update({"⊕": SSymbol.NONNEG, "⊖": SSymbol.NONPOS,
                        "⊛": SSymbol.ANY, "−": SSymbol.MINUS})


def _grid_tokens(text: str) -> list[list[str]]:
    rows = [line.split() for line in text.splitlines()
            if line.strip() and not line.lstrip().startswith("#")]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise RaggedError("rows have different lengths")
    if rows and len(rows) != len(rows[0]):
        raise NonSquareError(f"{len(rows)} rows of length {len(rows[0])}")
    if not rows:
        raise NonSquareError("empty pattern")
    return rows


@dataclass(frozen=True)
class SignPattern:
    n: int
    entries: tuple[tuple[Sign, ...], ...]

    def __post_init__(self):
        if self.n < 1 or len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise NonSquareError("a sign pattern must be a non-empty square grid")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> SignPattern:
        """Build from rows of :class:`Sign`, sign tokens, or numbers (sign taken)."""
        def conv(x) -> Sign:
            if isinstance(x, Sign):
                return x
            if isinstance(x, str):
                if x not in _TOKEN_SIGNS:
                    raise BadTokenError(f"bad sign token {x!r}")
                return _TOKEN_SIGNS[x]
            return Sign.of(x)
        grid = tuple(tuple(conv(x) for x in r) for r in rows)
        if any(len(r) != len(grid) for r in grid):
            raise NonSquareError("pattern rows must have length n")
        return cls(len(grid), grid)

    @classmethod
    def from_key(cls, n: int, key: Sequence[int]) -> SignPattern:
        return cls(n, tuple(tuple(Sign(key[i * n + j]) for j in range(n)) for i in range(n)))

    @classmethod
    def of_matrix(cls, A: RationalMatrix) -> SignPattern:
        if not A.is_square:
            raise NonSquareError("sign pattern of a non-square matrix")
        return cls.from_rows(A.to_rows())

    @classmethod
    def zero(cls, n: int) -> SignPattern:
        return cls(n, tuple((Sign.ZERO,) * n for _ in range(n)))

    @property
    def key(self) -> tuple[int, ...]:
        """Row-major tuple of int codes; lexicographic order is the canonical order."""
        return tuple(int(s) for r in self.entries for s in r)

    def __getitem__(self, ij: tuple[int, int]) -> Sign:
        i, j = ij
        return self.entries[i][j]

    def nonzero_positions(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(self.n) if self.entries[i][j]]

    def transpose(self) -> SignPattern:
        return SignPattern(self.n, tuple(zip(*self.entries)))

    def negate(self) -> SignPattern:
        return SignPattern(self.n, tuple(tuple(s.flipped() for s in r) for r in self.entries))

    def principal(self, indices: Sequence[int]) -> SignPattern:
        return SignPattern(len(indices), tuple(tuple(self.entries[i][j] for j in indices)
                                               for i in indices))

    def permuted(self, order: Sequence[int]) -> SignPattern:
        return self.principal(order)

    def format(self) -> str:
        return "\n".join(" ".join(s.token for s in r) for r in self.entries)

    def __str__(self) -> str:
        return self.format()


def parse_pattern(text: str) -> SignPattern:
    """Parse rows of ``+ - 0`` tokens into a square :class:`SignPattern`."""
    rows = _grid_tokens(text)
    for r in rows:
        for tok in r:
            if tok not in _TOKEN_SIGNS:
                raise BadTokenError(f"bad sign token {tok!r}")
    return SignPattern.from_rows(rows)


@dataclass(frozen=True)
class SPattern:
    n: int
    entries: tuple[tuple[SSymbol, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[SSymbol | str]]) -> SPattern:
        grid = tuple(tuple(x if isinstance(x, SSymbol) else _SSYMBOL_TOKENS[x] for x in r)
                     for r in rows)
        return cls(len(grid), grid)

    def fixed_signings(self) -> Iterator[SignPattern]:
        """Every sign pattern whose entries lie in the symbol sets of this template."""
        choices = [sorted(sym.allowed) for r in self.entries for sym in r]
        n = self.n
        for combo in itertools.product(*choices):
            yield SignPattern.from_key(n, combo)

    def format(self) -> str:
        width = max(len(s.token) for r in self.entries for s in r)
        return "\n".join(" ".join(s.token.rjust(width) for s in r) for r in self.entries)


def parse_spattern(text: str) -> SPattern:
    rows = _grid_tokens(text)
    for r in rows:
        for tok in r:
            if tok not in _SSYMBOL_TOKENS:
                raise BadTokenError(f"bad S-pattern token {tok!r}")
    return SPattern.from_rows(rows)


# ---------------------------------------------------------------------------
# qualitative class

def _check_dims(n1: int, n2: int, what: str):
    if n1 != n2:
        raise DimensionMismatchError(f"{what}: dimensions {n1} and {n2} differ")


def qualitative_member(A: RationalMatrix, P: SignPattern) -> bool:
    """True iff ``A`` lies in the qualitative class of ``P``."""
    if A.rows != P.n or A.cols != P.n:
        raise DimensionMismatchError(f"matrix {A.shape} vs pattern of order {P.n}")
    return all(Sign.of(A[i, j]) == P.entries[i][j] for i in range(P.n) for j in range(P.n))


def sample_realization(P: SignPattern, seed: int, magnitude_bound: int = 10) -> RationalMatrix:
    """Deterministic member of Q(P).

    Each nonzero entry, in row-major order, is ``s * p/q`` with ``p`` then ``q``
    drawn uniformly from ``[1, magnitude_bound]`` by SplitMix64 seeded with ``seed``.
    """
    if magnitude_bound < 1:
        raise ValueError("magnitude_bound must be >= 1")
    rng = SplitMix64(seed)
    out = []
    for r in P.entries:
        for s in r:
            if s == Sign.ZERO:
                out.append(Fraction(0))
            else:
                p = rng.randint(1, magnitude_bound)
                q = rng.randint(1, magnitude_bound)
                out.append(Fraction(s.unit * p, q))
    return RationalMatrix(P.n, P.n, tuple(out))


def matches_spattern(P: SignPattern, T: SPattern) -> bool:
    """True iff ``P`` is a fixed signing of ``T``."""
    _check_dims(P.n, T.n, "matches_spattern")
    return all(P.entries[i][j] in T.entries[i][j].allowed
               for i in range(P.n) for j in range(P.n))


def is_superpattern(P: SignPattern, R: SignPattern) -> bool:
    """True iff ``P`` agrees with ``R`` on every nonzero entry of ``R``."""
    _check_dims(P.n, R.n, "is_superpattern")
    return all(not r or p == r
               for pr, rr in zip(P.entries, R.entries) for p, r in zip(pr, rr))


# ---------------------------------------------------------------------------
# equivalence

@dataclass(frozen=True)
class PatternTransform:
    """Permutation similarity, then signature similarity, then optional
    transposition, then optional negation.

    The permutation stage maps ``P`` to ``Q`` with ``Q[i][j] = P[perm[i]][perm[j]]``;
    the signature stage multiplies entry ``(i, j)`` by ``signature[i] * signature[j]``.
    """

    perm: tuple[int, ...]
    signature: tuple[int, ...]
    transposed: bool = False
    negated: bool = False

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)) or len(self.signature) != n:
            raise ValueError("perm must be a bijection of range(n) and signature of length n")
        if any(d not in (1, -1) for d in self.signature):
            raise ValueError("signature entries must be +1 or -1")

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> PatternTransform:
        return cls(tuple(range(n)), (1,) * n)

    def inverse(self) -> PatternTransform:
        n = self.n
        inv = [0] * n
        for i, p in enumerate(self.perm):
            inv[p] = i
        sig = tuple(self.signature[inv[k]] for k in range(n))
        return PatternTransform(tuple(inv), sig, self.transposed, self.negated)

    def source_table(self) -> tuple[tuple[int, ...], tuple[bool, ...]]:
        """For each output flat index: (source flat index, whether the sign flips)."""
        n = self.n
        src, flips = [], []
        for i in range(n):
            for j in range(n):
                a, b = (j, i) if self.transposed else (i, j)
                src.append(self.perm[a] * n + self.perm[b])
                flips.append((self.signature[a] * self.signature[b] == -1) != self.negated)
        return tuple(src), tuple(flips)

    def apply_matrix(self, A: RationalMatrix) -> RationalMatrix:
        """Same transform on a realization; maps Q(P) onto Q(apply_transform(P, self))."""
        n = self.n
        src, flips = self.source_table()
        vals = tuple(-A.entries[s] if f else A.entries[s] for s, f in zip(src, flips))
        return RationalMatrix(n, n, vals)

    def to_json(self) -> dict:
        return {"perm": list(self.perm), "signature": list(self.signature),
                "transposed": self.transposed, "negated": self.negated}


def _apply_table(key: Sequence[int], src: Sequence[int], flips: Sequence[bool]) -> tuple[int, ...]:
    return tuple(_FLIP_CODE[key[s]] if f else key[s] for s, f in zip(src, flips))


def apply_transform(P: SignPattern, t: PatternTransform) -> SignPattern:
    if t.n != P.n:
        raise DimensionMismatchError(f"transform of order {t.n} on pattern of order {P.n}")
    src, flips = t.source_table()
    return SignPattern.from_key(P.n, _apply_table(P.key, src, flips))


@lru_cache(maxsize=None)
def _transform_group(n: int) -> tuple[tuple[PatternTransform, tuple[int, ...], tuple[bool, ...]], ...]:
    # signature d and -d act identically, so d[0] = +1 suffices
    group = []
    for perm in itertools.permutations(range(n)):
        for tail in itertools.product((1, -1), repeat=n - 1):
            sig = (1,) + tail
            for transposed in (False, True):
                for negated in (False, True):
                    t = PatternTransform(perm, sig, transposed, negated)
                    src, flips = t.source_table()
                    group.append((t, src, flips))
    return tuple(group)


def orbit_keys(P: SignPattern) -> frozenset[tuple[int, ...]]:
    """Keys of every pattern equivalent to ``P``."""
    if P.n > CANONICAL_LIMIT:
        raise TooLargeError(P.n, CANONICAL_LIMIT, "orbit enumeration")
    key = P.key
    return frozenset(_apply_table(key, src, flips) for _, src, flips in _transform_group(P.n))


def canonical_form(P: SignPattern) -> tuple[SignPattern, PatternTransform]:
    """Lexicographically least member of the equivalence orbit, and a transform reaching it."""
    if P.n > CANONICAL_LIMIT:
        raise TooLargeError(P.n, CANONICAL_LIMIT, "canonical_form")
    key = P.key
    best, best_t = None, None
    for t, src, flips in _transform_group(P.n):
        img = _apply_table(key, src, flips)
        if best is None or img < best:
            best, best_t = img, t
    return SignPattern.from_key(P.n, best), best_t


def are_equivalent(P: SignPattern, R: SignPattern) -> bool:
    _check_dims(P.n, R.n, "are_equivalent")
    if P.n > CANONICAL_LIMIT:
        raise TooLargeError(P.n, CANONICAL_LIMIT, "are_equivalent")
    if sum(1 for c in P.key if c) != sum(1 for c in R.key if c):
        return False
    return canonical_form(P)[0] == canonical_form(R)[0]


def all_patterns(n: int) -> Iterator[SignPattern]:
    for key in itertools.product((0, 1, 2), repeat=n * n):
        yield SignPattern.from_key(n, key)
