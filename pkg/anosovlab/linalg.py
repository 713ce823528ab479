"""Exact integer matrix algebra.

Every other module goes through this one: integer matrices with
arbitrary-precision entries, powers, determinants, the Smith normal form with
its unimodular transforms and cokernels in invariant-factor form. No floating
point is used anywhere in here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Tuple

from anosovlab.errors import InvalidInputError, NotHyperbolicError, StandingAssumptionError


@dataclass(frozen=True)
class IntMat:
    """Integer matrix stored row-major.

    Attributes:
        rows (int): Number of rows.
        cols (int): Number of columns.
        entries (tuple): ``rows * cols`` Python integers in row-major order.
    """

    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InvalidInputError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise InvalidInputError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMat":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise InvalidInputError("ragged rows")
        return cls(len(rows), ncols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMat":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMat":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence[int], rows: int = None, cols: int = None) -> "IntMat":
        rows = len(values) if rows is None else rows
        cols = rows if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = v
        return cls.from_rows(out) if rows else cls(0, cols, ())

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMat":
        """Build a matrix whose j-th column is ``columns[j]``."""
        out = [[0] * len(columns) for _ in range(rows)]
        for j, column in enumerate(columns):
            for i, v in enumerate(column):
                out[i][j] = v
        return cls(rows, len(columns), tuple(x for r in out for x in r))

    def __getitem__(self, key: Tuple[int, int]) -> int:
        i, j = key
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list:
        return [list(self.entries[i * self.cols : (i + 1) * self.cols]) for i in range(self.rows)]

    def row(self, i: int) -> Tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __matmul__(self, other: "IntMat") -> "IntMat":
        if self.cols != other.rows:
            raise InvalidInputError(
                f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        cols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum(a * b for a, b in zip(r, c)) for c in cols)
        return IntMat(self.rows, other.cols, tuple(out))

    def apply(self, vector: Sequence) -> tuple:
        """Multiply a column vector (integers or Fractions) by the matrix."""
        if len(vector) != self.cols:
            raise InvalidInputError("vector length does not match matrix columns")
        return tuple(sum(a * x for a, x in zip(self.row(i), vector)) for i in range(self.rows))

    def __add__(self, other: "IntMat") -> "IntMat":
        self._same_shape(other)
        return IntMat(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMat") -> "IntMat":
        self._same_shape(other)
        return IntMat(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMat":
        return IntMat(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> "IntMat":
        return IntMat(self.rows, self.cols, tuple(k * a for a in self.entries))

    def trace(self) -> int:
        self._require_square()
        return sum(self[i, i] for i in range(self.rows))

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        self._require_square()
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def unimodular_inverse(self) -> "IntMat":
        """Inverse of a 2x2 matrix with determinant +1 or -1."""
        if (self.rows, self.cols) != (2, 2):
            raise InvalidInputError("unimodular_inverse is only defined for 2x2 matrices")
        d = self.det()
        if d not in (1, -1):
            raise InvalidInputError(f"matrix is not unimodular (det = {d})")
        a, b, c, e = self.entries
        return IntMat(2, 2, (d * e, -d * b, -d * c, d * a))

    def _same_shape(self, other: "IntMat"):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InvalidInputError("shape mismatch")

    def _require_square(self):
        if not self.is_square:
            raise InvalidInputError(f"matrix is not square ({self.rows}x{self.cols})")

    def __str__(self) -> str:
        return ";".join(",".join(str(x) for x in self.row(i)) for i in range(self.rows))


def mat_pow(a: IntMat, n: int) -> IntMat:
    """Exact n-th power of a square matrix by repeated squaring.

    Args:
        a (IntMat): A square matrix.
        n (int): A non-negative exponent; ``n = 0`` gives the identity.

    Returns:
        IntMat: ``a`` raised to the ``n``-th power.

    Example:
        >>> str(mat_pow(IntMat.from_rows([[2, 1], [1, 1]]), 3))
        '13,8;8,5'
    """
    if not a.is_square:
        raise InvalidInputError("mat_pow needs a square matrix")
    if n < 0:
        raise InvalidInputError("mat_pow needs a non-negative exponent")
    result = IntMat.identity(a.rows)
    base = a
    while n:
        if n & 1:
            result = result @ base
        base = base @ base
        n >>= 1
    return result


@dataclass(frozen=True)
class Hyperbolic2:
    """A hyperbolic 2x2 integer matrix with determinant +1 or -1.

    Attributes:
        m (IntMat): The matrix.
        det (int): Its determinant, +1 or -1.
        trace (int): Its trace; ``|trace| > 2``.
    """

    m: IntMat
    det: int = field(init=False)
    trace: int = field(init=False)

    def __post_init__(self):
        if (self.m.rows, self.m.cols) != (2, 2):
            raise NotHyperbolicError(f"not hyperbolic: expected a 2x2 matrix, got {self.m.rows}x{self.m.cols}")
        det, trace = self.m.det(), self.m.trace()
        if det not in (1, -1):
            raise NotHyperbolicError(f"not hyperbolic: det = {det} is not +1 or -1")
        if abs(trace) <= 2:
            raise NotHyperbolicError(f"not hyperbolic: |trace| = {abs(trace)}")
        object.__setattr__(self, "det", det)
        object.__setattr__(self, "trace", trace)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Hyperbolic2":
        return cls(IntMat.from_rows(rows))

    @property
    def is_positive(self) -> bool:
        """True for det = +1 and trace >= 3, the standing assumptions of the flow modules."""
        return self.det == 1 and self.trace >= 3

    def require_positive(self) -> "Hyperbolic2":
        if self.det != 1:
            raise StandingAssumptionError(
                f"outside standing assumptions: det = {self.det}, need det = 1 "
                "(orientable stable/unstable foliations)"
            )
        if self.trace < 3:
            raise StandingAssumptionError(
                f"outside standing assumptions: trace = {self.trace}, need trace >= 3"
            )
        return self

    def inverse(self) -> "Hyperbolic2":
        return Hyperbolic2(self.m.unimodular_inverse())

    def power(self, n: int) -> IntMat:
        return mat_pow(self.m, n)

    def to_rows(self) -> list:
        return self.m.to_rows()

    def __str__(self) -> str:
        return str(self.m)


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group ``Z^free_rank + Z/d1 + ... + Z/dk``.

    Attributes:
        free_rank (int): Rank of the free part.
        invariant_factors (tuple): ``d1 | d2 | ... | dk`` with every ``di >= 2``.
    """

    free_rank: int
    invariant_factors: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise InvalidInputError("free rank must be non-negative")
        factors = tuple(self.invariant_factors)
        if any(d < 2 for d in factors):
            raise InvalidInputError(f"invariant factors must be >= 2: {factors}")
        if any(b % a for a, b in zip(factors, factors[1:])):
            raise InvalidInputError(f"invariant factors must form a divisibility chain: {factors}")
        object.__setattr__(self, "invariant_factors", factors)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def torsion_order(self) -> int:
        order = 1
        for d in self.invariant_factors:
            order *= d
        return order

    def order(self):
        """Group order, or ``None`` for an infinite group."""
        return None if self.free_rank else self.torsion_order

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {
            "free_rank": self.free_rank,
            "invariant_factors": list(self.invariant_factors),
            "label": str(self),
        }


@dataclass(frozen=True)
class SNFResult:
    """Smith decomposition ``U @ M @ V == D``.

    Attributes:
        U (IntMat): Unimodular row transform.
        D (IntMat): Diagonal with ``d1 | d2 | ...``, non-negative, zeros last.
        V (IntMat): Unimodular column transform.
    """

    U: IntMat
    D: IntMat
    V: IntMat

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _min_pivot(a: list, t: int):
    best = None
    for i in range(t, len(a)):
        for j in range(t, len(a[i])):
            x = a[i][j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
    return best


def snf(m: IntMat) -> SNFResult:
    """Compute the Smith normal form together with its unimodular transforms.

    The pivot is the entry of least nonzero absolute value in the remaining
    block; its column is cleared with row operations before its row is cleared
    with column operations.

    Args:
        m (IntMat): Any integer matrix.

    Returns:
        SNFResult: ``U``, ``D``, ``V`` with ``U @ m @ V == D``.

    Example:
        >>> snf(IntMat.from_rows([[2, 2], [1, 0]])).diagonal
        (1, 2)
    """
    nrows, ncols = m.rows, m.cols
    a = m.to_rows()
    u = IntMat.identity(nrows).to_rows()
    v = IntMat.identity(ncols).to_rows()

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        for r in v:
            r[j], r[k] = r[k], r[j]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for r in a:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    for t in range(min(nrows, ncols)):
        while True:
            pivot = _min_pivot(a, t)
            if pivot is None:
                break
            _, i, j = pivot
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = a[t][t]
            clean = True
            for i in range(t + 1, nrows):
                q = a[i][t] // p
                if q:
                    add_row(i, t, -q)
                if a[i][t]:
                    clean = False
            for j in range(t + 1, ncols):
                q = a[t][j] // p
                if q:
                    add_col(j, t, -q)
                if a[t][j]:
                    clean = False
            if not clean:
                continue
            stray = next(
                (i for i in range(t + 1, nrows) for j in range(t + 1, ncols) if a[i][j] % p),
                None,
            )
            if stray is None:
                break
            add_row(t, stray, 1)
        if t < nrows and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return SNFResult(IntMat.from_rows(u), _from_rows_shape(a, nrows, ncols), IntMat.from_rows(v) if ncols else IntMat(0, 0, ()))


def _from_rows_shape(rows: list, nrows: int, ncols: int) -> IntMat:
    return IntMat(nrows, ncols, tuple(x for r in rows for x in r))


class Cokernel:
    """The quotient ``Z^rows / image(M)`` with a reducer for its elements.

    Elements are written in the coordinates given by the Smith transform:
    one residue per invariant factor, then the free coordinates.
    """

    def __init__(self, m: IntMat):
        self.matrix = m
        self.decomposition = snf(m)
        diagonal = self.decomposition.diagonal
        self._moduli = [diagonal[i] if i < len(diagonal) else 0 for i in range(m.rows)]
        self.group = AbelianGroup(
            free_rank=sum(1 for d in self._moduli if d == 0),
            invariant_factors=tuple(d for d in self._moduli if d > 1),
        )

    def reduce(self, vector: Sequence[int]) -> Tuple[int, ...]:
        """Canonical coordinates of the class of ``vector``."""
        w = self.decomposition.U.apply(tuple(vector))
        torsion = tuple(x % d for x, d in zip(w, self._moduli) if d > 1)
        free = tuple(x for x, d in zip(w, self._moduli) if d == 0)
        return torsion + free

    def is_zero(self, vector: Sequence[int]) -> bool:
        return not any(self.reduce(vector))


def cokernel(m: IntMat) -> AbelianGroup:
    """Invariant-factor form of ``Z^rows / image(m)``.

    Args:
        m (IntMat): A presentation matrix; its columns are relations.

    Returns:
        AbelianGroup: ``free_rank = rows - rank(m)`` and the nontrivial invariant factors.

    Example:
        >>> str(cokernel(IntMat.from_rows([[2, 2], [1, 0]])))
        'Z/2'
    """
    return Cokernel(m).group


def stack_columns(m: IntMat, extra: Iterable[Sequence[int]]) -> IntMat:
    """Append relation columns to a presentation matrix."""
    columns = [m.column(j) for j in range(m.cols)] + [tuple(c) for c in extra]
    return IntMat.from_columns(columns, m.rows)
