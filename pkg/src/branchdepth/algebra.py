"""Exact arithmetic: finite fields GF(p^m) with q <= 256, and rationals.

Field elements are the integers ``0..q-1``.  For ``m >= 2`` the integer
``a`` stands for the polynomial ``sum(d_i x^i)`` where ``d_i`` are the base
``p`` digits of ``a``; arithmetic is modulo the lexicographically first monic
irreducible polynomial of degree ``m`` over GF(p), where "first" means the
smallest integer encoding of its lower coefficients.  For GF(4) that is
``x^2 + x + 1``, so the generator ``x = 2`` satisfies ``x*x = x + 1 = 3``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import FieldError
from . import kernels

MAX_ORDER = 256

Rational = Fraction


def _factor_prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        return None
    return p, m


def _digits(a: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(a % p)
        a //= p
    return out


def _undigits(ds, p: int) -> int:
    a = 0
    for d in reversed(ds):
        a = a * p + d
    return a


def _poly_mulmod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    """Multiply coefficient lists (low degree first) modulo a monic polynomial."""
    m = len(modulus) - 1
    prod = [0] * (2 * m - 1 if m > 0 else 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for deg in range(len(prod) - 1, m - 1, -1):
        c = prod[deg]
        if c:
            for k in range(m + 1):
                prod[deg - m + k] = (prod[deg - m + k] - c * modulus[k]) % p
    return prod[:m]


def _has_root_or_factor(poly: list[int], p: int) -> bool:
    """True if the monic ``poly`` has a nontrivial monic factor over GF(p)."""
    m = len(poly) - 1
    for deg in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            divisor = list(low) + [1]
            rem = list(poly)
            for top in range(m, deg - 1, -1):
                c = rem[top]
                if c:
                    for k in range(deg + 1):
                        rem[top - deg + k] = (rem[top - deg + k] - c * divisor[k]) % p
            if not any(rem[:deg]):
                return True
    return False


def canonical_modulus(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree ``m`` (low degree first)."""
    for code in range(p**m):
        poly = _digits(code, p, m) + [1]
        if poly[0] == 0 and m > 1:
            continue
        if not _has_root_or_factor(poly, p):
            return tuple(poly)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")


@dataclass(frozen=True)
class FieldSpec:
    """Arithmetic tables for GF(q).  Immutable once built."""

    q: int
    p: int
    m: int
    modulus: tuple[int, ...]
    add: bytes = field(repr=False)
    mul: bytes = field(repr=False)
    neg: bytes = field(repr=False)
    inv: bytes = field(repr=False)

    def plus(self, a: int, b: int) -> int:
        return self.add[a * self.q + b]

    def times(self, a: int, b: int) -> int:
        return self.mul[a * self.q + b]

    def minus(self, a: int, b: int) -> int:
        return self.add[a * self.q + self.neg[b]]

    def inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.inv[a]

    def elements(self) -> range:
        return range(self.q)


def check_field_axioms(F: FieldSpec) -> None:
    """Exhaustively verify the field axioms; raises ``FieldError`` on failure."""
    q = F.q
    E = range(q)
    for a in E:
        if F.plus(a, 0) != a or F.times(a, 1) != a:
            raise FieldError(f"identity fails at {a}")
        if F.plus(a, F.neg[a]) != 0:
            raise FieldError(f"additive inverse fails at {a}")
        if a and F.times(a, F.inv[a]) != 1:
            raise FieldError(f"multiplicative inverse fails at {a}")
        for b in E:
            if F.plus(a, b) != F.plus(b, a) or F.times(a, b) != F.times(b, a):
                raise FieldError(f"commutativity fails at ({a}, {b})")
            for c in E:
                if F.plus(F.plus(a, b), c) != F.plus(a, F.plus(b, c)):
                    raise FieldError(f"additive associativity fails at ({a}, {b}, {c})")
                if F.times(F.times(a, b), c) != F.times(a, F.times(b, c)):
                    raise FieldError(f"multiplicative associativity fails at ({a}, {b}, {c})")
                if F.times(a, F.plus(b, c)) != F.plus(F.times(a, b), F.times(a, c)):
                    raise FieldError(f"distributivity fails at ({a}, {b}, {c})")


@lru_cache(maxsize=None)
def field_build(q: int) -> FieldSpec:
    """Build GF(q); fields with ``q <= 16`` are axiom-checked exhaustively."""
    if not isinstance(q, int) or isinstance(q, bool):
        raise FieldError(f"field order must be an integer, got {q!r}")
    if q > MAX_ORDER:
        raise FieldError(f"field order {q} exceeds the supported maximum {MAX_ORDER}")
    pm = _factor_prime_power(q)
    if pm is None:
        raise FieldError(f"{q} is not a prime power")
    p, m = pm
    if m == 1:
        modulus = (0, 1)
        add = bytes((a + b) % p for a in range(q) for b in range(q))
        mul = bytes((a * b) % p for a in range(q) for b in range(q))
    else:
        modulus = canonical_modulus(p, m)
        digits = [_digits(a, p, m) for a in range(q)]
        add = bytes(
            _undigits([(x + y) % p for x, y in zip(digits[a], digits[b])], p)
            for a in range(q)
            for b in range(q)
        )
        mul = bytes(
            _undigits(_poly_mulmod(digits[a], digits[b], list(modulus), p), p)
            for a in range(q)
            for b in range(q)
        )
    neg = bytes(next(b for b in range(q) if add[a * q + b] == 0) for a in range(q))
    inv = bytes([0] + [next(b for b in range(1, q) if mul[a * q + b] == 1) for a in range(1, q)])
    F = FieldSpec(q=q, p=p, m=m, modulus=modulus, add=add, mul=mul, neg=neg, inv=inv)
    if q <= 16:
        check_field_axioms(F)
    return F


def matrix_rank(rows, F: FieldSpec) -> int:
    """Rank of the row space of ``rows`` over ``F`` by exact elimination."""
    rows = [tuple(r) for r in rows]
    if not rows:
        return 0
    width = len(rows[0])
    for r in rows:
        if len(r) != width:
            raise ValueError("ragged matrix: rows have different lengths")
        for x in r:
            if not 0 <= x < F.q:
                raise ValueError(f"entry {x} is not an element of GF({F.q})")
    return kernels.gf_rank(rows, F.q, F.add, F.mul, F.neg, F.inv)


def solve_combination(basis, target, F: FieldSpec) -> list[int]:
    """Coefficients ``a`` with ``sum(a_i * basis_i) == target`` over ``F``.

    ``basis`` must be linearly independent.  Raises ``ValueError`` when the
    target is outside their span.
    """
    k = len(basis)
    width = len(target)
    # augmented system: one row per coordinate, unknowns = coefficients
    rows = [[basis[i][j] for i in range(k)] + [target[j]] for j in range(width)]
    pivots = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, width) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        s = F.inverse(rows[r][col])
        rows[r] = [F.times(s, x) for x in rows[r]]
        for i in range(width):
            if i != r and rows[i][col]:
                c = rows[i][col]
                rows[i] = [F.minus(x, F.times(c, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(rows[i][k] for i in range(r, width)):
        raise ValueError("target is not in the span of the basis")
    if len(pivots) != k:
        raise ValueError("basis vectors are linearly dependent")
    coeffs = [0] * k
    for i, col in enumerate(pivots):
        coeffs[col] = rows[i][k]
    return coeffs


def rational_rank(rows) -> int:
    """Rank over Q of a matrix with integer or ``Fraction`` entries."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return 0
    width = len(mat[0])
    if any(len(r) != width for r in mat):
        raise ValueError("ragged matrix: rows have different lengths")
    rank = 0
    for col in range(width):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        for i in range(rank + 1, len(mat)):
            c = mat[i][col]
            if c:
                f = c / prow[col]
                mat[i] = [a - f * b for a, b in zip(mat[i], prow)]
        rank += 1
    return rank


def collinear(p1, p2, p3) -> bool:
    """Whether three points of Q^2 lie on a common line (exact determinant)."""
    (x1, y1), (x2, y2), (x3, y3) = (tuple(map(Fraction, p)) for p in (p1, p2, p3))
    det = x1 * (y2 - y3) - y1 * (x2 - x3) + (x2 * y3 - x3 * y2)
    return det == 0
