"""Dense exact matrices and the elimination kernels every rank condition
reduces to: rank, determinant, Pfaffian, minors, one-sided inverses and
null spaces.

Entries are raw field payloads (see :mod:`isodet.fields`); a matrix never
mixes fields.  Matrices are immutable after construction and all
operations are pure, so values can be shared freely between concurrent
workers.  Pivoting is deterministic (first non-zero), so every output is
reproducible across runs and platforms.

Degenerate shapes are legal: a 0x0 determinant and Pfaffian are both 1,
which lets boundary-parameter generator sets degrade gracefully.
"""

from __future__ import annotations

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NonSquare,
    NotSkewSymmetric,
    OddDimension,
    RankDeficient,
    SizeMismatch,
)
from .fields import Field, field_from_json


class Matrix:
    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data, rows: int | None = None, cols: int | None = None):
        data = tuple(tuple(row) for row in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise DimensionMismatch("ragged or mis-sized entry grid")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = data

    # ------------------------------------------------------------ builders

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, [[z] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_ints(cls, field: Field, grid) -> "Matrix":
        return cls(field, [[field.from_int(v) for v in row] for row in grid])

    @classmethod
    def from_json(cls, obj: dict, field: Field | None = None) -> "Matrix":
        ffield = field_from_json(obj["field"]) if "field" in obj else field
        if ffield is None:
            raise DimensionMismatch("matrix JSON carries no field and none was supplied")
        if field is not None and ffield != field:
            raise DimensionMismatch("matrix JSON field disagrees with the expected field")
        rows = [[ffield.parse(s) for s in row] for row in obj["rows"]]
        return cls(ffield, rows)

    def to_json(self) -> dict:
        render = self.field.render
        return {
            "field": self.field.descriptor(),
            "rows": [[render(v) for v in row] for row in self.data],
        }

    # ------------------------------------------------------------ access

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int):
        return self.data[i]

    def flat(self):
        """Entries in row-major order (the variable order of the
        polynomial module)."""
        return tuple(v for row in self.data for v in row)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.render(v) for v in row) for row in self.data)
        return f"Matrix({self.rows}x{self.cols}: {body})"

    # ------------------------------------------------------------ algebra

    def _check_same_field(self, other: "Matrix"):
        if self.field != other.field:
            raise DimensionMismatch("matrices live over different fields")

    @property
    def T(self) -> "Matrix":
        return Matrix(
            self.field,
            tuple(zip(*self.data)) if self.data else (),
            self.cols,
            self.rows,
        )

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in addition")
        add = self.field.add
        return Matrix(
            self.field,
            [[add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
            self.rows,
            self.cols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, [[neg(v) for v in row] for row in self.data], self.rows, self.cols)

    def scale(self, c) -> "Matrix":
        mul = self.field.mul
        return Matrix(self.field, [[mul(c, v) for v in row] for row in self.data], self.rows, self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        F = self.field
        add, mul, zero = F.add, F.mul, F.zero
        bcols = tuple(zip(*other.data)) if other.data else ()
        out = []
        for arow in self.data:
            orow = []
            for bcol in bcols:
                acc = zero
                for a, b in zip(arow, bcol):
                    if a != zero and b != zero:
                        acc = add(acc, mul(a, b))
                orow.append(acc)
            out.append(orow)
        return Matrix(F, out, self.rows, other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.cols != other.cols:
            raise DimensionMismatch("column count mismatch in vstack")
        return Matrix(self.field, self.data + other.data, self.rows + other.rows, self.cols)

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        rows = [[self.data[i][j] for j in col_idx] for i in row_idx]
        return Matrix(self.field, rows, len(row_idx), len(col_idx))

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.data[i][j] == self.data[j][i] for i in range(self.rows) for j in range(i + 1, self.cols)
        )

    def is_skew(self) -> bool:
        if self.rows != self.cols:
            return False
        F = self.field
        for i in range(self.rows):
            if not F.is_zero(self.data[i][i]):
                return False
            for j in range(i + 1, self.cols):
                if self.data[i][j] != F.neg(self.data[j][i]):
                    return False
        return True

    # ------------------------------------------------------------ elimination

    def _mutable(self):
        return [list(row) for row in self.data]

    def rank(self) -> int:
        F = self.field
        zero, mul, sub, inv = F.zero, F.mul, F.sub, F.inv
        rows = self._mutable()
        m, n = self.rows, self.cols
        r = 0
        for c in range(n):
            pivot = None
            for i in range(r, m):
                if rows[i][c] != zero:
                    pivot = i
                    break
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            prow = rows[r]
            pinv = inv(prow[c])
            for i in range(r + 1, m):
                v = rows[i][c]
                if v == zero:
                    continue
                factor = mul(v, pinv)
                irow = rows[i]
                for j in range(c, n):
                    irow[j] = sub(irow[j], mul(factor, prow[j]))
            r += 1
            if r == m:
                break
        return r

    def det(self):
        if self.rows != self.cols:
            raise NonSquare("determinant of a non-square matrix")
        F = self.field
        zero, mul, sub, inv = F.zero, F.mul, F.sub, F.inv
        n = self.rows
        rows = self._mutable()
        det = F.one
        for c in range(n):
            pivot = None
            for i in range(c, n):
                if rows[i][c] != zero:
                    pivot = i
                    break
            if pivot is None:
                return zero
            if pivot != c:
                rows[c], rows[pivot] = rows[pivot], rows[c]
                det = F.neg(det)
            prow = rows[c]
            det = mul(det, prow[c])
            pinv = inv(prow[c])
            for i in range(c + 1, n):
                v = rows[i][c]
                if v == zero:
                    continue
                factor = mul(v, pinv)
                irow = rows[i]
                for j in range(c, n):
                    irow[j] = sub(irow[j], mul(factor, prow[j]))
        return det

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise NonSquare("inverse of a non-square matrix")
        F = self.field
        zero, mul, sub, inv = F.zero, F.mul, F.sub, F.inv
        n = self.rows
        rows = self._mutable()
        aug = [row + [F.one if i == j else zero for j in range(n)] for i, row in enumerate(rows)]
        for c in range(n):
            pivot = None
            for i in range(c, n):
                if aug[i][c] != zero:
                    pivot = i
                    break
            if pivot is None:
                raise RankDeficient("matrix is singular")
            aug[c], aug[pivot] = aug[pivot], aug[c]
            pinv = inv(aug[c][c])
            aug[c] = [mul(pinv, v) for v in aug[c]]
            prow = aug[c]
            for i in range(n):
                if i == c:
                    continue
                v = aug[i][c]
                if v == zero:
                    continue
                irow = aug[i]
                for j in range(c, 2 * n):
                    irow[j] = sub(irow[j], mul(v, prow[j]))
        return Matrix(F, [row[n:] for row in aug], n, n)

    def pfaffian(self):
        """Pfaffian by recursive expansion along the first remaining row.

        Normalization: pf of the 0x0 matrix is 1, and pf of the standard
        block-diagonal [[0,1],[-1,0]] form is +1.
        """
        if self.rows != self.cols:
            raise NonSquare("Pfaffian of a non-square matrix")
        if self.rows % 2 != 0:
            raise OddDimension("Pfaffian needs even dimension")
        if not self.is_skew():
            raise NotSkewSymmetric("Pfaffian needs a skew matrix with zero diagonal")
        F = self.field
        add, sub, mul, zero = F.add, F.sub, F.mul, F.zero
        data = self.data
        memo: dict = {}

        def pf(idx):
            if not idx:
                return F.one
            got = memo.get(idx)
            if got is not None:
                return got
            i0 = idx[0]
            rest = idx[1:]
            acc = zero
            for k, j in enumerate(rest):
                a = data[i0][j]
                if a == zero:
                    continue
                sub_idx = rest[:k] + rest[k + 1 :]
                term = mul(a, pf(sub_idx))
                acc = add(acc, term) if k % 2 == 0 else sub(acc, term)
            memo[idx] = acc
            return acc

        return pf(tuple(range(self.rows)))

    def minor(self, rowset, colset):
        """Determinant of the submatrix on strictly increasing index sets."""
        rowset, colset = tuple(rowset), tuple(colset)
        if len(rowset) != len(colset):
            raise SizeMismatch("row and column sets differ in size")
        for sel, bound in ((rowset, self.rows), (colset, self.cols)):
            if any(i < 0 or i >= bound for i in sel):
                raise IndexOutOfRange(f"selection {sel} out of range")
            if any(a >= b for a, b in zip(sel, sel[1:])):
                raise IndexOutOfRange(f"selection {sel} is not strictly increasing")
        return self.submatrix(rowset, colset).det()

    def left_inverse(self) -> "Matrix":
        """Some Y with Y @ self = identity; needs full column rank.

        Deterministic: the first maximal independent set of rows (in row
        order) is inverted and embedded, so repeated calls agree.
        """
        F = self.field
        zero, mul, sub, inv = F.zero, F.mul, F.sub, F.inv
        n = self.cols
        chosen: list[int] = []
        reduced: list[tuple[int, list]] = []  # (pivot column, reduced row)
        for i in range(self.rows):
            v = list(self.data[i])
            for pc, prow in reduced:
                coef = v[pc]
                if coef == zero:
                    continue
                for j in range(n):
                    v[j] = sub(v[j], mul(coef, prow[j]))
            pc = next((j for j in range(n) if v[j] != zero), None)
            if pc is None:
                continue
            pinv = inv(v[pc])
            v = [mul(pinv, x) for x in v]
            reduced.append((pc, v))
            chosen.append(i)
            if len(chosen) == n:
                break
        if len(chosen) < n:
            raise RankDeficient("matrix does not have full column rank")
        block = self.submatrix(chosen, range(n)).inverse()
        out = [[zero] * self.rows for _ in range(n)]
        for k, i in enumerate(chosen):
            for r in range(n):
                out[r][i] = block.data[r][k]
        return Matrix(F, out, n, self.rows)

    def kernel_basis(self) -> list[tuple]:
        """Basis of the right null space; length equals cols - rank."""
        F = self.field
        zero, one, mul, sub, inv, neg = F.zero, F.one, F.mul, F.sub, F.inv, F.neg
        rows = self._mutable()
        m, n = self.rows, self.cols
        pivots: list[int] = []  # pivot column of row r
        r = 0
        for c in range(n):
            pivot = None
            for i in range(r, m):
                if rows[i][c] != zero:
                    pivot = i
                    break
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            pinv = inv(rows[r][c])
            rows[r] = [mul(pinv, v) for v in rows[r]]
            prow = rows[r]
            for i in range(m):
                if i == r:
                    continue
                v = rows[i][c]
                if v == zero:
                    continue
                irow = rows[i]
                for j in range(c, n):
                    irow[j] = sub(irow[j], mul(v, prow[j]))
            pivots.append(c)
            r += 1
            if r == m:
                break
        pivot_set = set(pivots)
        basis = []
        for free in range(n):
            if free in pivot_set:
                continue
            vec = [zero] * n
            vec[free] = one
            for rr, pc in enumerate(pivots):
                vec[pc] = neg(rows[rr][free])
            basis.append(tuple(vec))
        return basis


def random_matrix(field: Field, rows: int, cols: int, rng) -> Matrix:
    rand = field.random
    return Matrix(field, [[rand(rng) for _ in range(cols)] for _ in range(rows)], rows, cols)


def random_invertible(field: Field, n: int, rng) -> Matrix:
    for _ in range(999):
        cand = random_matrix(field, n, n, rng)
        if not field.is_zero(cand.det()):
            return cand
    raise RankDeficient("failed to sample an invertible matrix")
