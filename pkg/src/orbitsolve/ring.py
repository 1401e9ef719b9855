"""Exact rings with a finite linear-system solver: Q, Z and Z/m.

Ring values are plain Python objects supporting ``+ - *`` and ``==``:
``Fraction`` for Q, ``int`` for Z and ``ModInt`` for Z/m.  A ``Ring`` object
knows how to build, parse and print them and how to solve ``M x = b``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class Ring:
    name: str

    zero = 0
    one = 1

    def coerce(self, x):
        raise NotImplementedError

    def parse(self, text: str):
        text = text.strip()
        try:
            value = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise RingError(f"not a ring literal: {text!r}") from exc
        return self.coerce(value)

    def fmt(self, x) -> str:
        return str(x)

    def solve(self, M, b):
        raise NotImplementedError

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Rationals(Ring):
    name: str = "Q"

    def coerce(self, x):
        if isinstance(x, ModInt):
            raise RingError("residue is not a rational")
        return Fraction(x)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def fmt(self, x):
        return str(Fraction(x))

    def solve(self, M, b):
        return _solve_field(M, b, self)


@dataclass(frozen=True)
class Integers(Ring):
    name: str = "Z"

    def coerce(self, x):
        if isinstance(x, ModInt):
            raise RingError("residue is not an integer")
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise RingError(f"{x} is not an integer")
            return x.numerator
        if isinstance(x, bool) or not isinstance(x, int):
            raise RingError(f"{x!r} is not an integer")
        return x

    def solve(self, M, b):
        return solve_integer(M, b)


class ModInt:
    """Residue class modulo ``m``, always stored in ``[0, m)``."""

    __slots__ = ("v", "m")

    def __init__(self, v: int, m: int):
        self.m = m
        self.v = v % m

    def _lift(self, other):
        if isinstance(other, ModInt):
            if other.m != self.m:
                raise RingError("mixing residues of different moduli")
            return other.v
        if isinstance(other, Fraction):
            if other.denominator != 1:
                raise RingError(f"{other} is not an integer")
            return other.numerator
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else ModInt(self.v + o, self.m)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else ModInt(self.v - o, self.m)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else ModInt(o - self.v, self.m)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else ModInt(self.v * o, self.m)

    __rmul__ = __mul__

    def __neg__(self):
        return ModInt(-self.v, self.m)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.v - o) % self.m == 0

    def __hash__(self):
        return hash((self.v, self.m))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} mod {self.m}"

    def __str__(self):
        return str(self.v)


@dataclass(frozen=True)
class IntegersMod(Ring):
    modulus: int = 2
    name: str = "Zmod"

    def __post_init__(self):
        if self.modulus < 2:
            raise RingError("modulus must be at least 2")

    @property
    def zero(self):
        return ModInt(0, self.modulus)

    @property
    def one(self):
        return ModInt(1, self.modulus)

    def coerce(self, x):
        if isinstance(x, ModInt):
            if x.m != self.modulus:
                raise RingError("wrong modulus")
            return x
        return ModInt(Integers().coerce(x), self.modulus)

    def fmt(self, x):
        return str(self.coerce(x).v)

    def solve(self, M, b):
        m = self.modulus
        n = len(M)
        cols = len(M[0]) if M else 0
        lifted = [[self.coerce(v).v for v in row] + [m if i == j else 0 for j in range(n)]
                  for i, row in enumerate(M)]
        sol = solve_integer(lifted, [self.coerce(v).v for v in b])
        if sol is None:
            return None
        return [ModInt(v, m) for v in sol[:cols]]

    def __str__(self):
        return f"Zmod {self.modulus}"


QQ = Rationals()
ZZ = Integers()


def Zmod(m: int) -> IntegersMod:
    return IntegersMod(modulus=m)


def ring_from_name(text: str) -> Ring:
    parts = text.split()
    if parts == ["Q"]:
        return QQ
    if parts == ["Z"]:
        return ZZ
    if len(parts) == 2 and parts[0] == "Zmod" and parts[1].isdigit():
        return Zmod(int(parts[1]))
    raise RingError(f"unknown ring {text!r} (expected Q, Z or Zmod <m>)")


# --- finite systems -----------------------------------------------------------


def _check_dims(M, b):
    n = len(M)
    if len(b) != n:
        raise ValueError(f"matrix has {n} rows but target has {len(b)} entries")
    widths = {len(row) for row in M}
    if len(widths) > 1:
        raise ValueError("ragged matrix")
    return n, (widths.pop() if widths else 0)


def _solve_field(M, b, ring):
    """Gauss-Jordan elimination on sparse rows ``{column: value}``."""
    n, m = _check_dims(M, b)
    rows = []
    for row, bi in zip(M, b):
        r = {j: ring.coerce(v) for j, v in enumerate(row) if v != 0}
        rhs = ring.coerce(bi)
        if r:
            rows.append((r, rhs))
        elif rhs != 0:
            return None
    pivots = []
    for c in range(m):
        cand = [i for i in range(len(pivots), len(rows)) if c in rows[i][0]]
        if not cand:
            continue
        p = min(cand, key=lambda i: len(rows[i][0]))
        r = len(pivots)
        rows[r], rows[p] = rows[p], rows[r]
        prow, prhs = rows[r]
        inv = 1 / prow[c]
        prow = {j: v * inv for j, v in prow.items()}
        prhs = prhs * inv
        rows[r] = (prow, prhs)
        for i in range(len(rows)):
            if i == r or c not in rows[i][0]:
                continue
            row, rhs = rows[i]
            f = row[c]
            row = dict(row)
            for j, v in prow.items():
                nv = row.get(j, 0) - f * v
                if nv != 0:
                    row[j] = nv
                else:
                    row.pop(j, None)
            rows[i] = (row, rhs - f * prhs)
        pivots.append(c)
    if any(rhs != 0 for _, rhs in rows[len(pivots):]):
        return None
    x = [ring.zero] * m
    for (row, rhs), c in zip(rows, pivots):
        x[c] = rhs
    return x


def smith_normal_form(M):
    """Return ``(U, D, V)`` with ``U M V = D`` diagonal and ``d_i | d_{i+1}``.

    ``U`` and ``V`` are unimodular.  The pivot is always the entry of least
    absolute value in the remaining block, first in row-major order.
    """
    n = len(M)
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    D, V = _smith(M, U)
    return U, D, V


def _smith(M, U):
    """Diagonalize ``M`` in place of a copy; row operations are mirrored on ``U``.

    ``U`` is a list of rows (a matrix) or of 1-element lists (a vector).
    """
    n = len(M)
    m = len(M[0]) if n else 0
    A = [[int(v) for v in row] for row in M]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def row_op(i, j, q):  # row_i -= q * row_j
        A[i] = [a - q * c for a, c in zip(A[i], A[j])]
        U[i] = [a - q * c for a, c in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for R in (A, V):
            for row in R:
                row[i] -= q * row[j]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (A, V):
            for row in R:
                row[i], row[j] = row[j], row[i]

    for t in range(min(n, m)):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, m):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            dirty = False
            for i in range(t + 1, n):
                if A[i][t]:
                    row_op(i, t, A[i][t] // p)
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, m):
                if A[t][j]:
                    col_op(j, t, A[t][j] // p)
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m)
                        if A[i][j] % p), None)
            if bad is None:
                break
            # pull the offending row into row t so the next pass shrinks the pivot
            row_op(t, bad[0], -1)
        if t < n and t < m and A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return A, V


def solve_integer(M, b):
    n, m = _check_dims(M, b)
    M = [[ZZ.coerce(v) for v in row] for row in M]
    b = [ZZ.coerce(v) for v in b]
    if m == 0:
        return [] if all(v == 0 for v in b) else None
    # zero and repeated rows carry no information beyond a consistency check
    rows: dict = {}
    for row, bi in zip(M, b):
        key = tuple(row)
        if not any(key):
            if bi:
                return None
            continue
        if rows.setdefault(key, bi) != bi:
            return None
    if not rows:
        return [0] * m
    M, b = [list(r) for r in rows], list(rows.values())
    n = len(M)
    c = [[v] for v in b]
    D, V = _smith(M, c)
    c = [v[0] for v in c]
    y = [0] * m
    for i in range(n):
        d = D[i][i] if i < m else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return [sum(V[i][j] * y[j] for j in range(m)) for i in range(m)]


def solve_finite(ring: Ring, M, b):
    """A solution of ``M x = b`` over ``ring``, or ``None``.

    Any returned solution has been checked by multiplication.
    """
    _check_dims(M, b)
    x = ring.solve(M, b)
    if x is None:
        return None
    for row, bi in zip(M, b):
        total = ring.zero
        for a, v in zip(row, x):
            total = total + ring.coerce(a) * v
        if total != ring.coerce(bi):
            raise AssertionError("finite solver returned a non-solution")
    return x
