"""Small finite fields F_q (q <= 16) and dense linear algebra over them.

Elements of F_q are the integers 0..q-1.  For q = p^e the integer
``sum(c_i * p**i)`` stands for the polynomial ``sum(c_i * x**i)`` reduced
modulo a fixed monic irreducible of degree e, so integer order is the
lexicographic order on ``(c_{e-1}, ..., c_0)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

MAX_ORDER = 16


def _factor_prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    return (p, e) if q == 1 else None


@dataclass(frozen=True, eq=False)
class FieldTable:
    """Addition/multiplication tables of F_q.

    ``modulus`` lists the coefficients (low degree first) of the monic
    irreducible used for extension fields; it is ``(0, 1)`` for prime fields.
    """

    q: int
    p: int
    e: int
    modulus: tuple[int, ...]
    add: tuple[tuple[int, ...], ...] = field(repr=False)
    mul: tuple[tuple[int, ...], ...] = field(repr=False)
    neg: tuple[int, ...] = field(repr=False)
    inv: tuple[int, ...] = field(repr=False)  # inv[0] is 0 by convention

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg[b]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.q)
        return self.mul[a][self.inv[b]]

    @property
    def elements(self) -> range:
        return range(self.q)

    def check_axioms(self) -> bool:
        """Exhaustively verify the field axioms on the stored tables."""
        E = range(self.q)
        add, mul = self.add, self.mul
        for a in E:
            if add[a][0] != a or mul[a][1] != a or add[a][self.neg[a]] != 0:
                return False
            if a and mul[a][self.inv[a]] != 1:
                return False
            for b in E:
                if add[a][b] != add[b][a] or mul[a][b] != mul[b][a]:
                    return False
                for c in E:
                    if add[add[a][b]][c] != add[a][add[b][c]]:
                        return False
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                        return False
                    if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]:
                        return False
        return True

    def __repr__(self) -> str:
        return f"FieldTable(q={self.q})"


# -- polynomials over a field, coefficient lists low degree first ----------


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_mod(a: list[int], m: list[int], F: FieldTable) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = _poly_trim(list(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = F.sub(a[shift + i], F.mul[lead][mi])
        _poly_trim(a)
    return a


def poly_mul(a: list[int], b: list[int], F: FieldTable) -> list[int]:
    out = [0] * max(len(a) + len(b) - 1, 0)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = F.add[out[i + j]][F.mul[ai][bj]]
    return _poly_trim(out)


def monic_polynomials(F: FieldTable, degree: int):
    """Monic polynomials of the given degree, lexicographic in (c_{d-1},...,c_0)."""
    for high_first in itertools.product(range(F.q), repeat=degree):
        yield list(reversed(high_first)) + [1]


def is_irreducible(poly: list[int], F: FieldTable) -> bool:
    d = len(poly) - 1
    if d < 1:
        return False
    for dd in range(1, d // 2 + 1):
        for g in monic_polynomials(F, dd):
            if not poly_mod(poly, g, F):
                return False
    return True


def smallest_irreducible(F: FieldTable, degree: int) -> list[int]:
    """Lexicographically smallest monic irreducible of ``degree`` over F."""
    for poly in monic_polynomials(F, degree):
        if is_irreducible(poly, F):
            return poly
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def _prime_field(p: int) -> FieldTable:
    add = tuple(tuple((a + b) % p for b in range(p)) for a in range(p))
    mul = tuple(tuple((a * b) % p for b in range(p)) for a in range(p))
    neg = tuple((-a) % p for a in range(p))
    inv = (0,) + tuple(pow(a, p - 2, p) for a in range(1, p))
    return FieldTable(p, p, 1, (0, 1), add, mul, neg, inv)


def _digits(a: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _undigits(c: list[int], p: int) -> int:
    return sum(ci * p**i for i, ci in enumerate(c))


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldTable:
    """Return the field of order ``q`` (a prime power, at most 16)."""
    pe = _factor_prime_power(q) if isinstance(q, int) else None
    if pe is None:
        raise ValueError(f"q={q!r} is not a prime power")
    if q > MAX_ORDER:
        raise ValueError(f"q={q} exceeds the supported maximum {MAX_ORDER}")
    p, e = pe
    base = _prime_field(p)
    if e == 1:
        return base
    modulus = smallest_irreducible(base, e)
    digits = [_digits(a, p, e) for a in range(q)]
    add = tuple(
        tuple(_undigits([(x + y) % p for x, y in zip(digits[a], digits[b])], p) for b in range(q))
        for a in range(q)
    )
    mul = tuple(
        tuple(_undigits(poly_mod(poly_mul(digits[a], digits[b], base), modulus, base), p) for b in range(q))
        for a in range(q)
    )
    neg = tuple(next(b for b in range(q) if add[a][b] == 0) for a in range(q))
    inv = (0,) + tuple(next(b for b in range(1, q) if mul[a][b] == 1) for a in range(1, q))
    return FieldTable(q, p, e, tuple(modulus), add, mul, neg, inv)


# -- dense matrices: lists/tuples of rows of field elements -----------------


def rref(rows, F: FieldTable) -> tuple[list[list[int]], list[int]]:
    """Reduced row-echelon form; returns (nonzero rows, pivot columns)."""
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        s = inv[M[r][c]]
        if s != 1:
            M[r] = [mul[s][x] for x in M[r]]
        prow = M[r]
        for i in range(len(M)):
            if i != r and M[i][c]:
                t = neg[M[i][c]]
                row = M[i]
                M[i] = [add[x][mul[t][y]] for x, y in zip(row, prow)]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows, F: FieldTable) -> int:
    return len(rref(rows, F)[1])


def matmul(A, B, F: FieldTable) -> list[list[int]]:
    add, mul = F.add, F.mul
    cols = list(zip(*B)) if B else []
    out = []
    for row in A:
        out_row = []
        for col in cols:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = add[acc][mul[x][y]]
            out_row.append(acc)
        out.append(out_row)
    return out


def vecmat(v, B, F: FieldTable) -> list[int]:
    return matmul([v], B, F)[0]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def inverse(A, F: FieldTable) -> list[list[int]]:
    n = len(A)
    aug = [list(row) + e for row, e in zip(A, identity(n))]
    R, piv = rref(aug, F)
    if piv[:n] != list(range(n)) or len(R) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in R]


def is_invertible(A, F: FieldTable) -> bool:
    return rank(A, F) == len(A)


def nullspace(A, F: FieldTable) -> list[list[int]]:
    """Basis (as rows) of {x : A x = 0} for a matrix given by rows."""
    if not A:
        return []
    ncols = len(A[0])
    R, piv = rref(A, F)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        x = [0] * ncols
        x[fc] = 1
        for row, pc in zip(R, piv):
            x[pc] = F.neg[row[fc]]
        basis.append(x)
    return basis
