"""Exact linear algebra over the rationals.

Dense matrices are used for small systems (derivation constraints, Gram
matrices). Ideal slices of quotient rings can have thousands of columns but
very sparse rows, so they go through :class:`SparseEchelon` instead.
"""

from __future__ import annotations

import heapq
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

Rational = Fraction


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use int or Fraction")
    return Fraction(x)


class QMatrix:
    """Immutable dense matrix with Fraction entries, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(as_rational(e) for e in entries)
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    def __reduce__(self):
        return (QMatrix, (self.rows, self.cols, self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, [e for r in rows for e in r])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows,
                       [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for j in range(other.cols):
                out.append(sum((r[t] * other[t, j] for t in range(self.cols) if r[t]), Fraction(0)))
        return QMatrix(self.rows, other.cols, out)

    def apply(self, v: Sequence) -> list[Fraction]:
        if len(v) != self.cols:
            raise ValueError("shape mismatch")
        return [sum((a * b for a, b in zip(self.row(i), v) if a and b), Fraction(0))
                for i in range(self.rows)]

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i))

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows))
        return f"QMatrix({self.rows}x{self.cols}: [{body}])"


def rref(m: QMatrix) -> tuple[QMatrix, list[int]]:
    """Reduced row echelon form and the pivot columns.

    Pivots are chosen as the first nonzero entry scanning columns left to
    right and rows top to bottom, so the result is deterministic.
    """
    a = m.to_rows()
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        pr = a[r]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], pr)]
        pivots.append(c)
        r += 1
    return QMatrix(nrows, ncols, [x for row in a for x in row]), pivots


def rank(m: QMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: QMatrix) -> list[list[Fraction]]:
    """Basis of the right null space, one vector per free column.

    Each vector has a 1 in its free column and zeros in the other free
    columns, which makes the basis canonical for a given matrix.
    """
    red, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i, f]
        basis.append(v)
    return basis


def solve(m: QMatrix, rhs: Sequence) -> list[Fraction] | None:
    """One solution of ``m x = rhs`` (free variables set to zero), or None."""
    if len(rhs) != m.rows:
        raise ValueError("shape mismatch")
    aug = QMatrix(m.rows, m.cols + 1,
                  [e for i in range(m.rows) for e in (*m.row(i), rhs[i])])
    red, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for i, p in enumerate(pivots):
        x[p] = red[i, m.cols]
    return x


def congruence_diagonalize(m: QMatrix) -> list[Fraction]:
    """Diagonal of a matrix congruent to the symmetric matrix ``m``.

    Symmetric Gaussian elimination; a zero pivot with a nonzero off-diagonal
    entry is fixed by adding the partner row/column, which splits a
    hyperbolic 2x2 block into a positive and a negative entry.
    """
    if not m.is_symmetric():
        raise ValueError("matrix is not symmetric")
    a = m.to_rows()
    n = m.rows
    diag: list[Fraction] = []
    active = list(range(n))
    while active:
        i = next((t for t in active if a[t][t] != 0), None)
        if i is None:
            pair = next(((s, t) for s in active for t in active if s < t and a[s][t] != 0), None)
            if pair is None:
                diag.extend(Fraction(0) for _ in active)
                break
            s, t = pair
            # row_s += row_t, col_s += col_t: new a[s][s] = 2 a[s][t] != 0
            for j in range(n):
                a[s][j] += a[t][j]
            for j in range(n):
                a[j][s] += a[j][t]
            i = s
        p = a[i][i]
        diag.append(p)
        active.remove(i)
        for s in active:
            f = a[s][i] / p
            if f:
                for j in active:
                    a[s][j] -= f * a[i][j]
        for s in active:
            a[s][i] = a[i][s] = Fraction(0)
    return diag


def signature(m: QMatrix) -> int:
    d = congruence_diagonalize(m)
    return sum(1 for x in d if x > 0) - sum(1 for x in d if x < 0)


def determinant(m: QMatrix) -> Fraction:
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    a = m.to_rows()
    n = m.rows
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


class SparseEchelon:
    """Incrementally built echelon basis of a row space, sparse rows.

    Rows are dicts ``column -> value``. Column indices double as the pivot
    order: the pivot of a row is its smallest column, which matches the
    first-nonzero rule of :func:`rref` on the dense equivalent. Rows are
    stored fraction-free, as primitive integer vectors with a positive
    pivot entry; rational input is cleared of denominators first. This
    keeps elimination on dense slices fast without changing the row space.
    """

    def __init__(self):
        self._rows: dict[int, dict[int, int]] = {}
        self._final = False

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def __len__(self):
        return len(self._rows)

    @staticmethod
    def _integral(row: Mapping[int, object]) -> dict[int, int]:
        vals = {c: as_rational(v) for c, v in row.items() if v}
        den = 1
        for v in vals.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
        return {c: int(v * den) for c, v in vals.items()}

    @staticmethod
    def _primitive(row: dict[int, int]) -> dict[int, int]:
        g = 0
        for v in row.values():
            g = math.gcd(g, v)
            if g == 1:
                break
        if row[min(row)] < 0:
            g = -g
        if g != 1:
            row = {j: v // g for j, v in row.items()}
        return row

    @staticmethod
    def _eliminate(row: dict[int, int], prow: dict[int, int], c: int) -> dict[int, int]:
        """Integer combination of ``row`` and ``prow`` with column ``c`` cleared."""
        a, b = prow[c], row[c]
        g = math.gcd(a, b)
        a //= g
        b //= g
        new = {j: a * v for j, v in row.items()} if a != 1 else dict(row)
        for j, v in prow.items():
            nv = new.get(j, 0) - b * v
            if nv:
                new[j] = nv
            else:
                new.pop(j, None)
        return new

    def add(self, row: Mapping[int, object]) -> bool:
        """Insert a row; returns True if it enlarged the row space."""
        row = self._integral(row)
        rows = self._rows
        while row:
            c = min(row)
            prow = rows.get(c)
            if prow is None:
                break
            row = self._eliminate(row, prow, c)
            if row:
                row = self._primitive(row)
        if not row:
            return False
        rows[min(row)] = self._primitive(row)
        self._final = False
        return True

    def finalize(self) -> None:
        """Back-substitute so every stored row is zero in the other pivots."""
        if self._final:
            return
        rows = self._rows
        for c in sorted(rows, reverse=True):
            row = rows[c]
            for j in sorted(k for k in row if k != c and k in rows):
                if j in row:
                    row = self._eliminate(row, rows[j], j)
            rows[c] = self._primitive(row)
        self._final = True

    def reduce(self, vec: Mapping[int, object]) -> dict[int, Fraction]:
        """Remainder of ``vec`` modulo the row space, supported off the pivots."""
        out = {c: as_rational(v) for c, v in vec.items() if v}
        rows = self._rows
        pending = sorted(c for c in out if c in rows)
        heapq.heapify(pending)
        seen = set(pending)
        while pending:
            c = heapq.heappop(pending)
            seen.discard(c)
            f = out.pop(c, None)
            if not f:
                continue
            prow = rows[c]
            f = f / prow[c]
            for j, v in prow.items():
                if j == c:
                    continue
                nv = out.get(j, 0) - f * v
                if nv:
                    out[j] = nv
                    if j in rows and j not in seen:
                        heapq.heappush(pending, j)
                        seen.add(j)
                else:
                    out.pop(j, None)
        return out

    def row(self, pivot: int) -> dict[int, Fraction]:
        """Stored row scaled to pivot entry 1."""
        r = self._rows[pivot]
        lead = r[pivot]
        return {j: Fraction(v, lead) for j, v in r.items()}


# ---------- modular rank ----------

MODULUS = 2147483647  # 2^31 - 1; products of residues fit in int64


def rank_mod_p(rows: Sequence[Mapping[int, Fraction]], ncols: int, p: int = MODULUS) -> int | None:
    """Rank of a rational matrix reduced mod ``p``, or None if a denominator vanishes.

    Reduction can only lose rank, so rank mod p = ncols proves full column
    rank over Q. Nothing else is concluded from it.
    """
    a = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, c in row.items():
            c = Fraction(c)
            if c.denominator % p == 0:
                return None
            a[i, j] = c.numerator % p * pow(c.denominator, -1, p) % p
    r = 0
    nrows = a.shape[0]
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        below = a[r + 1:, c].copy()
        hit = np.nonzero(below)[0]
        if hit.size:
            rows_ = r + 1 + hit
            a[rows_] = (a[rows_] - (below[hit, None] * a[r][None, :]) % p) % p
        r += 1
    return r
