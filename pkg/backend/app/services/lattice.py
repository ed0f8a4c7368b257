"""
Exact integer matrix algebra

Row-style conventions: a lattice is the Z-span of the rows of a matrix and
vectors multiply from the left (v.A). Python ints keep every intermediate
exact, so HNF/SNF growth never overflows.
"""

import logging
from typing import Iterator, List, Optional, Sequence, Tuple

import sympy

from app.core.errors import DimensionMismatchError

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


class IntMatrix:
    """Immutable dense integer matrix."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Sequence[Sequence[int]], cols: Optional[int] = None):
        rows = tuple(tuple(int(x) for x in row) for row in data)
        if cols is None:
            if not rows:
                raise ValueError("Column count is required for a matrix without rows")
            cols = len(rows[0])
        for row in rows:
            if len(row) != cols:
                raise DimensionMismatchError(f"Ragged row of length {len(row)}, expected {cols}")
        self._data = rows
        self.rows = len(rows)
        self.cols = cols

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @property
    def entries(self) -> Tuple[int, ...]:
        return tuple(x for row in self._data for x in row)

    def row(self, i: int) -> Vector:
        return self._data[i]

    def __getitem__(self, key: Tuple[int, int]) -> int:
        i, j = key
        return self._data[i][j]

    def __iter__(self) -> Iterator[Vector]:
        return iter(self._data)

    def tolist(self) -> List[List[int]]:
        return [list(row) for row in self._data]

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.cols == other.cols and self._data == other._data

    def __hash__(self):
        return hash((self.cols, self._data))

    def __repr__(self):
        return f"IntMatrix({self.tolist()})"

    def transpose(self) -> "IntMatrix":
        return IntMatrix([[row[j] for row in self._data] for j in range(self.cols)], cols=self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        # action matrices are mostly zeros, so accumulate over nonzero entries only
        out = []
        for row in self._data:
            acc = [0] * other.cols
            for a, other_row in zip(row, other._data):
                if a:
                    for j, b in enumerate(other_row):
                        if b:
                            acc[j] += a * b
            out.append(acc)
        return IntMatrix(out, cols=other.cols)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix([[k * x for x in row] for row in self._data], cols=self.cols)

    def stack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise DimensionMismatchError(f"Cannot stack {self.cols} columns on {other.cols}")
        return IntMatrix(self._data + other._data, cols=self.cols)

    def nonzero_rows(self) -> "IntMatrix":
        return IntMatrix([row for row in self._data if any(row)], cols=self.cols)

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            x == (1 if i == j else 0) for i, row in enumerate(self._data) for j, x in enumerate(row)
        )

    def determinant(self) -> int:
        if self.rows != self.cols:
            raise DimensionMismatchError("Determinant of a non-square matrix")
        if self.rows == 0:
            return 1
        return int(sympy.Matrix(self.tolist()).det(method="bareiss"))

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.determinant()) == 1


def block_diagonal(blocks: Sequence[IntMatrix]) -> IntMatrix:
    total_rows = sum(b.rows for b in blocks)
    total_cols = sum(b.cols for b in blocks)
    data = []
    offset = 0
    for block in blocks:
        for row in block:
            data.append([0] * offset + list(row) + [0] * (total_cols - offset - block.cols))
        offset += block.cols
    assert len(data) == total_rows
    return IntMatrix(data, cols=total_cols)


def mat_vec(A: IntMatrix, v: Sequence[int]) -> Vector:
    if A.cols != len(v):
        raise DimensionMismatchError(f"Matrix with {A.cols} columns applied to vector of length {len(v)}")
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def vec_mat(v: Sequence[int], A: IntMatrix) -> Vector:
    if A.rows != len(v):
        raise DimensionMismatchError(f"Vector of length {len(v)} times matrix with {A.rows} rows")
    out = [0] * A.cols
    for x, row in zip(v, A):
        if x:
            for j, a in enumerate(row):
                out[j] += x * a
    return tuple(out)


def _hermite(work: List[List[int]], ncols: int, transform: Optional[List[List[int]]]) -> int:
    """Row-reduce work in place to Hermite form; returns the rank."""
    m = len(work)

    def swap(i, k):
        work[i], work[k] = work[k], work[i]
        if transform is not None:
            transform[i], transform[k] = transform[k], transform[i]

    def add(target, source, q):
        # row[target] += q * row[source]
        src = work[source]
        tgt = work[target]
        for j in range(ncols):
            tgt[j] += q * src[j]
        if transform is not None:
            src_t = transform[source]
            tgt_t = transform[target]
            for j in range(len(tgt_t)):
                tgt_t[j] += q * src_t[j]

    def negate(i):
        work[i] = [-x for x in work[i]]
        if transform is not None:
            transform[i] = [-x for x in transform[i]]

    pivot_row = 0
    for j in range(ncols):
        if pivot_row == m:
            break
        if not any(work[i][j] for i in range(pivot_row, m)):
            continue
        while True:
            best = min((i for i in range(pivot_row, m) if work[i][j]), key=lambda i: abs(work[i][j]))
            swap(pivot_row, best)
            p = work[pivot_row][j]
            clean = True
            for i in range(pivot_row + 1, m):
                if work[i][j]:
                    add(i, pivot_row, -(work[i][j] // p))
                    if work[i][j]:
                        clean = False
            if clean:
                break
        if work[pivot_row][j] < 0:
            negate(pivot_row)
        p = work[pivot_row][j]
        for i in range(pivot_row):
            q = work[i][j] // p
            if q:
                add(i, pivot_row, -q)
        pivot_row += 1
    return pivot_row


def hermite_normal_form(A: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """(H, U) with U unimodular and U.A = H in row Hermite form (zero rows last)."""
    work = A.tolist()
    transform = IntMatrix.identity(A.rows).tolist()
    _hermite(work, A.cols, transform)
    return IntMatrix(work, cols=A.cols), IntMatrix(transform, cols=A.rows)


def hermite_basis(A: IntMatrix) -> IntMatrix:
    """Nonzero rows of the Hermite form: the canonical basis of the row span."""
    work = A.tolist()
    rank = _hermite(work, A.cols, None)
    return IntMatrix(work[:rank], cols=A.cols)


def rank(A: IntMatrix) -> int:
    return _hermite(A.tolist(), A.cols, None)


def smith_normal_form(A: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """(S, U, V) with U.A.V = S diagonal, d_1 | d_2 | ..., U and V unimodular."""
    m, n = A.rows, A.cols
    S = A.tolist()
    U = IntMatrix.identity(m).tolist()
    V = IntMatrix.identity(n).tolist()

    def swap_rows(i, k):
        S[i], S[k] = S[k], S[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in S:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(target, source, q):
        for mat in (S, U):
            src, tgt = mat[source], mat[target]
            for j in range(len(tgt)):
                tgt[j] += q * src[j]

    def add_col(target, source, q):
        for mat in (S, V):
            for row in mat:
                row[target] += q * row[source]

    t = 0
    while t < min(m, n):
        candidates = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not candidates:
            break
        _, i0, j0 = min(candidates)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
                    dirty = dirty or bool(S[i][t])
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
                    dirty = dirty or bool(S[t][j])
            if dirty:
                line = [(abs(S[i][t]), 0, i) for i in range(t, m) if S[i][t]]
                line += [(abs(S[t][j]), 1, j) for j in range(t + 1, n) if S[t][j]]
                _, axis, k = min(line)
                if axis == 0:
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return IntMatrix(S, cols=n), IntMatrix(U, cols=m), IntMatrix(V, cols=n)


def elementary_divisors(A: IntMatrix) -> List[int]:
    S, _, _ = smith_normal_form(A)
    return [S[i, i] for i in range(min(S.rows, S.cols)) if S[i, i]]


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """
    Saturated Z-basis of the left kernel {v : v.A = 0}, Hermite-reduced

    The rows of the HNF transform that reduce to zero rows are part of a
    unimodular matrix, so their span is already pure.
    """
    H, U = hermite_normal_form(A)
    r = sum(1 for row in H if any(row))
    kernel = IntMatrix([U.row(i) for i in range(r, A.rows)], cols=A.rows)
    return hermite_basis(kernel)


class RowLattice:
    """Row span of a matrix with its Hermite data cached for repeated queries."""

    def __init__(self, A: IntMatrix):
        self.matrix = A
        H, U = hermite_normal_form(A)
        self.rank = sum(1 for row in H if any(row))
        self.hermite = IntMatrix([H.row(i) for i in range(self.rank)], cols=A.cols)
        self.transform = U
        self._pivots = [next(j for j, x in enumerate(row) if x) for row in self.hermite]

    def _reduce(self, v: Sequence[int]) -> Optional[List[int]]:
        if len(v) != self.matrix.cols:
            raise DimensionMismatchError(f"Vector of length {len(v)} against lattice in Z^{self.matrix.cols}")
        residual = list(v)
        coeffs = [0] * self.rank
        for i, (row, c) in enumerate(zip(self.hermite, self._pivots)):
            if residual[c] % row[c]:
                return None
            q = residual[c] // row[c]
            if q:
                coeffs[i] = q
                for j in range(c, len(residual)):
                    residual[j] -= q * row[j]
        if any(residual):
            return None
        return coeffs

    def __contains__(self, v: Sequence[int]) -> bool:
        return self._reduce(v) is not None

    def coordinates(self, v: Sequence[int]) -> Optional[Vector]:
        """x with x.A = v, or None when v is outside the span."""
        coeffs = self._reduce(v)
        if coeffs is None:
            return None
        padded = coeffs + [0] * (self.matrix.rows - self.rank)
        return vec_mat(padded, self.transform)


def in_row_span(A: IntMatrix, v: Sequence[int]) -> bool:
    return v in RowLattice(A)


def lattice_equal(A: IntMatrix, B: IntMatrix) -> bool:
    if A.cols != B.cols:
        raise DimensionMismatchError(f"Lattices in Z^{A.cols} and Z^{B.cols} cannot be compared")
    return hermite_basis(A) == hermite_basis(B)
