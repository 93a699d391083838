"""Exact linear algebra and univariate polynomials over the rationals.

Scalars are :class:`fractions.Fraction`.  Nothing in this module uses a
tolerance: ranks, nullspaces and gcds are computed exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BadTokenError, BothZeroError, NonSquareError, RaggedError

Scalar = int | Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(token: str) -> Fraction:
    """Parse ``p/q`` or ``p``; decimals and exponents are rejected."""
    if not _RATIONAL_RE.match(token):
        raise BadTokenError(f"not a rational token: {token!r}")
    value = Fraction(token)
    return value


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RationalMatrix:
    """An immutable dense ``rows x cols`` matrix over Q, stored row-major."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length does not match shape")

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar | str]]) -> RationalMatrix:
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0, ())
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise RaggedError("rows have different lengths")
        flat = tuple(Fraction(x) for r in rows for x in r)
        return cls(len(rows), width, flat)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> RationalMatrix:
        cols = rows if cols is None else cols
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        one, zero = Fraction(1), Fraction(0)
        return cls(n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def column(cls, values: Iterable[Scalar]) -> RationalMatrix:
        vals = tuple(Fraction(v) for v in values)
        return cls(len(vals), 1, vals)

    # access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    # arithmetic ---------------------------------------------------------

    def _check_same_shape(self, other: RationalMatrix):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        self._check_same_shape(other)
        return RationalMatrix(self.rows, self.cols,
                              tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        self._check_same_shape(other)
        return RationalMatrix(self.rows, self.cols,
                              tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> RationalMatrix:
        return RationalMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c: Scalar) -> RationalMatrix:
        c = Fraction(c)
        return RationalMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = [other.entries[j::other.cols] for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for c in ocols:
                out.append(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)))
        return RationalMatrix(self.rows, other.cols, tuple(out))

    def hadamard(self, other: RationalMatrix) -> RationalMatrix:
        self._check_same_shape(other)
        return RationalMatrix(self.rows, self.cols,
                              tuple(a * b for a, b in zip(self.entries, other.entries)))

    @property
    def T(self) -> RationalMatrix:
        return RationalMatrix(self.cols, self.rows,
                              tuple(self.entries[i * self.cols + j]
                                    for j in range(self.cols) for i in range(self.rows)))

    def trace(self) -> Fraction:
        if not self.is_square:
            raise NonSquareError(f"trace of a {self.rows}x{self.cols} matrix")
        return sum((self.entries[i * self.cols + i] for i in range(self.rows)), Fraction(0))

    def power(self, k: int) -> RationalMatrix:
        if not self.is_square:
            raise NonSquareError("power of a non-square matrix")
        result = RationalMatrix.identity(self.rows)
        for _ in range(k):
            result = result @ self
        return result

    def principal_submatrix(self, indices: Sequence[int]) -> RationalMatrix:
        return RationalMatrix(len(indices), len(indices),
                              tuple(self[i, j] for i in indices for j in indices))

    def permuted(self, order: Sequence[int]) -> RationalMatrix:
        """Permutation similarity: entry ``(i, j)`` of the result is ``self[order[i], order[j]]``."""
        return self.principal_submatrix(order)

    def denominator_lcm(self) -> int:
        return math.lcm(1, *(x.denominator for x in self.entries))

    def integer_scaled(self) -> tuple[list[list[int]], int]:
        """Return ``(L * self as int rows, L)`` with ``L`` the lcm of all denominators."""
        lcm = self.denominator_lcm()
        rows = [[int(x * lcm) for x in self.row(i)] for i in range(self.rows)]
        return rows, lcm

    # text ---------------------------------------------------------------

    def format(self) -> str:
        cells = [[format_rational(x) for x in self.row(i)] for i in range(self.rows)]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join(" ".join(c.rjust(width) for c in r) for r in cells)

    def __str__(self) -> str:
        return self.format()


def parse_matrix(text: str) -> RationalMatrix:
    """Parse a whitespace-separated grid of rational tokens, one row per line.

    Blank lines and lines starting with ``#`` are ignored.
    """
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([parse_rational(tok) for tok in line.split()])
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise RaggedError("rows have different lengths")
    return RationalMatrix.from_rows(rows)


# ---------------------------------------------------------------------------
# elimination

def _integer_row(row: Sequence[Fraction]) -> list[int]:
    lcm = math.lcm(1, *(x.denominator for x in row))
    out = [int(x * lcm) for x in row]
    g = math.gcd(*out)
    if g > 1:
        out = [v // g for v in out]
    return out


def _reduced_echelon(int_rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free Gauss-Jordan elimination over Z.

    Rows are kept primitive (content divided out) after every update.
    Columns are scanned left to right; among the candidate rows the one
    with the smallest nonzero pivot magnitude is chosen, ties broken by row
    index.  Returns the nonzero reduced rows and their pivot columns.
    """
    rows = [r for r in (list(r) for r in int_rows) if any(r)]
    pivots: list[int] = []
    prow = 0
    for c in range(ncols):
        best = None
        for r in range(prow, len(rows)):
            v = rows[r][c]
            if v and (best is None or abs(v) < abs(rows[best][c])):
                best = r
        if best is None:
            continue
        rows[prow], rows[best] = rows[best], rows[prow]
        piv = rows[prow]
        if piv[c] < 0:
            piv = [-v for v in piv]
            rows[prow] = piv
        p = piv[c]
        for r in range(len(rows)):
            if r == prow:
                continue
            f = rows[r][c]
            if not f:
                continue
            g = math.gcd(p, f)
            a, b = p // g, f // g
            new = [a * x - b * y for x, y in zip(rows[r], piv)]
            cg = math.gcd(*new)
            if cg > 1:
                new = [v // cg for v in new]
            rows[r] = new
        pivots.append(c)
        prow += 1
        if prow == len(rows):
            break
    return rows[:prow], pivots


def rank(M: RationalMatrix) -> int:
    int_rows = [_integer_row(M.row(i)) for i in range(M.rows)]
    _, pivots = _reduced_echelon(int_rows, M.cols)
    return len(pivots)


def nullspace(M: RationalMatrix) -> list[RationalMatrix]:
    """Basis of ``{v : M v = 0}`` as ``cols x 1`` column matrices.

    One basis vector per non-pivot column ``f`` (in increasing order), with
    ``v[f] = 1`` and zero in every other non-pivot coordinate.
    """
    int_rows = [_integer_row(M.row(i)) for i in range(M.rows)]
    reduced, pivots = _reduced_echelon(int_rows, M.cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(M.cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for row, c in zip(reduced, pivots):
            if row[f]:
                v[c] = Fraction(-row[f], row[c])
        basis.append(RationalMatrix.column(v))
    return basis


# Mersenne prime 2**31 - 1: products of two residues fit in int64.
MODULUS = 2_147_483_647


def rank_mod_p(int_rows: Sequence[Sequence[int]], ncols: int, p: int = MODULUS) -> int:
    """Rank of an integer matrix over GF(p).

    Never exceeds the rank over Q, so ``rank_mod_p == ncols`` certifies a
    trivial rational nullspace.
    """
    if not int_rows or ncols == 0:
        return 0
    M = np.array([[v % p for v in r] for r in int_rows], dtype=np.int64)
    nrows = M.shape[0]
    r = 0
    for c in range(ncols):
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        inv = pow(int(M[r, c]), -1, p)
        M[r] = (M[r] * inv) % p
        if r + 1 < nrows:
            below = M[r + 1:]
            below -= np.outer(below[:, c], M[r]) % p
            below %= p
        r += 1
        if r == nrows:
            break
    return r


# ---------------------------------------------------------------------------
# polynomials

def _strip(coeffs: Iterable[Scalar]) -> tuple[Fraction, ...]:
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True, init=False)
class Polynomial:
    """Univariate polynomial over Q, coefficients lowest degree first.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> Polynomial:
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __add__(self, other: Polynomial) -> Polynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial | Scalar) -> Polynomial:
        if not isinstance(other, Polynomial):
            return Polynomial(Fraction(other) * c for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lead
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq] if dq > 0 else [])

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def derivative(self) -> Polynomial:
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> Polynomial:
        if self.is_zero():
            return self
        lead = self.leading
        return Polynomial(c / lead for c in self.coeffs)

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate_at_matrix(self, A: RationalMatrix) -> RationalMatrix:
        """Horner evaluation ``p(A)``."""
        n = A.rows
        acc = RationalMatrix.zeros(n)
        eye = RationalMatrix.identity(n)
        for c in reversed(self.coeffs):
            acc = acc @ A + eye.scale(c)
        return acc

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mag = format_rational(abs(c))
            sign = "-" if c < 0 else "+"
            body = "" if (abs(c) == 1 and k) else mag
            mono = {0: "", 1: "x"}.get(k, f"x^{k}")
            terms.append((sign, body + ("*" if body and mono else "") + mono))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, t in terms[1:]:
            out += f" {sign} {t}"
        return out


def char_poly(A: RationalMatrix) -> Polynomial:
    """Characteristic polynomial ``det(xI - A)`` by Faddeev-LeVerrier."""
    if not A.is_square:
        raise NonSquareError(f"characteristic polynomial of a {A.rows}x{A.cols} matrix")
    n = A.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    eye = RationalMatrix.identity(n)
    M = RationalMatrix.zeros(n)
    for k in range(1, n + 1):
        M = A @ M + eye.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(A @ M).trace() / k
    return Polynomial(coeffs)


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd over Q (Euclid)."""
    if p.is_zero() and q.is_zero():
        raise BothZeroError("gcd(0, 0) is undefined")
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def is_squarefree(p: Polynomial) -> bool:
    """True iff ``p`` has no repeated complex root."""
    if p.degree < 1:
        raise ValueError("squarefree test needs degree >= 1")
    return poly_gcd(p, p.derivative()).is_constant()


def matrix_power_traces(A: RationalMatrix, kmax: int) -> list[Fraction]:
    """``[tr(A^0), tr(A^1), ..., tr(A^kmax)]``."""
    if not A.is_square:
        raise NonSquareError("traces of powers of a non-square matrix")
    out = []
    P = RationalMatrix.identity(A.rows)
    for k in range(kmax + 1):
        if k:
            P = P @ A
        out.append(P.trace())
    return out


def determinant(A: RationalMatrix) -> Fraction:
    """Exact determinant via the constant term of the characteristic polynomial."""
    cp = char_poly(A)
    c0 = cp.coeffs[0] if cp.coeffs else Fraction(0)
    return c0 if A.rows % 2 == 0 else -c0
