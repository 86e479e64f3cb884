"""Exact dense linear algebra over Z and Q.

Matrices are immutable, with arbitrary-precision entries (int, or Fraction
for rational data).  Elimination algorithms use deterministic pivoting --
smallest absolute value, first position in row-major order on ties -- so
normal forms, kernels and the generators derived from them are reproducible
run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "Matrix",
    "SNFResult",
    "det",
    "snf",
    "hnf_rows",
    "hnf_columns",
    "int_kernel",
    "rational_inverse",
    "congruent_diag",
    "charpoly",
    "companion_matrix",
    "matrix_to_text",
    "matrix_from_text",
]


def _as_entry(x):
    if isinstance(x, int):
        return x
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f


class Matrix:
    """Immutable dense matrix; rows are tuples, entries int or Fraction."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows, *, ncols: int | None = None) -> None:
        data = tuple(tuple(_as_entry(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != width:
                raise ValueError("ncols disagrees with row data")
            ncols = width
        elif ncols is None:
            ncols = 0
        self.rows = data
        self.nrows = len(data)
        self.ncols = ncols

    # -- construction ------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> Matrix:
        return cls([[0] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def diagonal(cls, entries) -> Matrix:
        entries = list(entries)
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns, *, nrows: int | None = None) -> Matrix:
        columns = [tuple(c) for c in columns]
        if not columns:
            if nrows is None:
                raise ValueError("need nrows for an empty column list")
            return cls([()] * nrows, ncols=0) if nrows else cls([], ncols=0)
        return cls(list(zip(*columns)))

    # -- access ------------------------------------------------------------
    def __getitem__(self, i: int):
        return self.rows[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for r in self.rows for x in r)

    @property
    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(self.nrows) for j in range(i))

    def transpose(self) -> Matrix:
        return Matrix(list(zip(*self.rows))) if self.nrows else Matrix([], ncols=0)

    # -- arithmetic --------------------------------------------------------
    def __matmul__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch: {self.nrows}x{self.ncols} @ "
                             f"{other.nrows}x{other.ncols}")
        cols = other.transpose().rows
        return Matrix([[sum(a * b for a, b in zip(row, col)) for col in cols]
                       for row in self.rows], ncols=other.ncols)

    def __mul__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            return Matrix([[x * scalar for x in row] for row in self.rows],
                          ncols=self.ncols)
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other: Matrix) -> Matrix:
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError("shape mismatch")
        return Matrix([[a + b for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.rows, other.rows)], ncols=self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (other * -1)

    def __neg__(self) -> Matrix:
        return self * -1

    def mat_vec(self, vec) -> tuple:
        if len(vec) != self.ncols:
            raise ValueError("shape mismatch")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.ncols == other.ncols \
            and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.ncols, self.rows))

    def __repr__(self) -> str:
        return f"Matrix({[list(r) for r in self.rows]!r})"

    def __reduce__(self):
        return (_rebuild_matrix, (self.rows, self.ncols))


def _rebuild_matrix(rows, ncols):
    return Matrix(rows, ncols=ncols)


# ---------------------------------------------------------------------------
# determinant

def det(a: Matrix):
    """Exact determinant; fraction-free (Bareiss) on integer matrices."""
    if not a.is_square:
        raise ValueError("determinant of a non-square matrix")
    if a.nrows == 0:
        return 1
    if a.is_integral:
        return _bareiss([list(r) for r in a.rows])
    # scale each row integral, then divide the integer determinant back out
    scale = Fraction(1)
    rows = []
    for row in a.rows:
        d = 1
        for x in row:
            if isinstance(x, Fraction):
                d = d * x.denominator // _gcd(d, x.denominator)
        scale *= d
        rows.append([int(x * d) for x in row])
    return _bareiss(rows) / scale


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _bareiss(m: list[list[int]]) -> int:
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i, row_k = m[i], m[k]
            head = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - head * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form with transforms

@dataclass(frozen=True)
class SNFResult:
    """U @ A @ V == D, with U, V unimodular and D diagonal, d1 | d2 | ..."""

    d: Matrix
    u: Matrix
    v: Matrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        n = min(self.d.nrows, self.d.ncols)
        return tuple(self.d[i][i] for i in range(n))


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _row_axpy(m, dst, src, f):
    if f:
        row_d, row_s = m[dst], m[src]
        for j in range(len(row_d)):
            row_d[j] += f * row_s[j]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _col_axpy(m, dst, src, f):
    if f:
        for row in m:
            row[dst] += f * row[src]


def _pick_pivot(d, t, nrows, ncols):
    best = None
    for i in range(t, nrows):
        for j in range(t, ncols):
            x = d[i][j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
    return None if best is None else (best[1], best[2])


def snf(a: Matrix) -> SNFResult:
    """Smith normal form over Z with unimodular transforms."""
    if not a.is_integral:
        raise ValueError("Smith normal form needs an integer matrix")
    r, c = a.nrows, a.ncols
    d = [list(row) for row in a.rows]
    u = [list(row) for row in Matrix.identity(r).rows]
    v = [list(row) for row in Matrix.identity(c).rows]
    t = 0
    while t < min(r, c):
        piv = _pick_pivot(d, t, r, c)
        if piv is None:
            break
        _swap_rows(d, t, piv[0]); _swap_rows(u, t, piv[0])
        _swap_cols(d, t, piv[1]); _swap_cols(v, t, piv[1])
        while True:
            for i in range(t + 1, r):
                while d[i][t]:
                    q = d[i][t] // d[t][t]
                    _row_axpy(d, i, t, -q); _row_axpy(u, i, t, -q)
                    if d[i][t]:
                        _swap_rows(d, t, i); _swap_rows(u, t, i)
            for j in range(t + 1, c):
                while d[t][j]:
                    q = d[t][j] // d[t][t]
                    _col_axpy(d, j, t, -q); _col_axpy(v, j, t, -q)
                    if d[t][j]:
                        _swap_cols(d, t, j); _swap_cols(v, t, j)
            if any(d[i][t] for i in range(t + 1, r)):
                continue
            pivot = d[t][t]
            off = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c)
                        if d[i][j] % pivot), None)
            if off is None:
                break
            _row_axpy(d, t, off[0], 1); _row_axpy(u, t, off[0], 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return SNFResult(Matrix(d, ncols=c), Matrix(u), Matrix(v))


# ---------------------------------------------------------------------------
# Hermite normal form, kernels

def hnf_rows(a: Matrix) -> Matrix:
    """Canonical row Hermite form of the row lattice; zero rows dropped.

    Pivots are positive, entries above each pivot reduced into [0, pivot).
    """
    if not a.is_integral:
        raise ValueError("Hermite normal form needs an integer matrix")
    rows = [list(r) for r in a.rows]
    r = 0
    for col in range(a.ncols):
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][col]]
            if len(nz) <= 1:
                break
            i0 = min(nz, key=lambda i: (abs(rows[i][col]), i))
            for i in nz:
                if i != i0:
                    q = rows[i][col] // rows[i0][col]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[i0])]
        nz = [i for i in range(r, len(rows)) if rows[i][col]]
        if not nz:
            continue
        rows[r], rows[nz[0]] = rows[nz[0]], rows[r]
        if rows[r][col] < 0:
            rows[r] = [-x for x in rows[r]]
        pivot = rows[r][col]
        for i in range(r):
            q = rows[i][col] // pivot
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return Matrix(rows[:r], ncols=a.ncols)


def hnf_columns(a: Matrix) -> Matrix:
    """Canonical basis (as columns) of the column lattice of `a`."""
    return hnf_rows(a.transpose()).transpose()


def int_kernel(a: Matrix) -> Matrix:
    """Columns form the canonical basis of {x in Z^ncols : A x = 0}."""
    res = snf(a)
    diag = res.diagonal
    ker_cols = [res.v.column(j) for j in range(a.ncols)
                if j >= len(diag) or diag[j] == 0]
    if not ker_cols:
        return Matrix.zeros(a.ncols, 0)
    return hnf_columns(Matrix.from_columns(ker_cols))


# ---------------------------------------------------------------------------
# rational elimination

def rational_inverse(a: Matrix) -> Matrix:
    """Exact inverse of a nonsingular square matrix."""
    if not a.is_square:
        raise ValueError("inverse of a non-square matrix")
    n = a.nrows
    aug = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(a.rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return Matrix([row[n:] for row in aug])


def congruent_diag(g: Matrix) -> tuple[int, int]:
    """Signature (s+, s-) of a nondegenerate symmetric matrix by exact
    congruent diagonalization (Sylvester's law of inertia)."""
    if not g.is_symmetric:
        raise ValueError("matrix is not symmetric")
    n = g.nrows
    a = [[Fraction(x) for x in row] for row in g.rows]
    pos = neg = 0
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j]), None)
            if j is not None:
                _swap_rows(a, k, j)
                _swap_cols(a, k, j)
            else:
                j = next((j for j in range(k + 1, n) if a[k][j]), None)
                if j is None:
                    raise ValueError("degenerate symmetric form")
                # e_k += e_j puts 2*a[k][j] on the diagonal
                _row_axpy(a, k, j, Fraction(1))
                _col_axpy(a, k, j, Fraction(1))
        pivot = a[k][k]
        if pivot > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = a[i][k] / pivot
            if f:
                _row_axpy(a, i, k, -f)
                _col_axpy(a, i, k, -f)
    return (pos, neg)


# ---------------------------------------------------------------------------
# characteristic polynomial, companion matrices

def charpoly(a: Matrix) -> tuple:
    """Coefficients of det(xI - A), ascending; exact (Faddeev-LeVerrier)."""
    if not a.is_square:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = a.nrows
    af = Matrix([[Fraction(x) for x in row] for row in a.rows])
    ident = Matrix.identity(n)
    coeffs_desc = [Fraction(1)]
    mk = ident
    for k in range(1, n + 1):
        am = af @ mk
        ck = Fraction(-sum(am[i][i] for i in range(n)), k)
        coeffs_desc.append(ck)
        if k < n:
            mk = am + ident * ck
    asc = list(reversed(coeffs_desc))
    if a.is_integral:
        return tuple(int(c) for c in asc)
    return tuple(asc)


def companion_matrix(monic_coeffs) -> Matrix:
    """Companion matrix of a monic polynomial given by ascending coefficients."""
    coeffs = [Fraction(c) for c in monic_coeffs]
    if not coeffs or coeffs[-1] != 1:
        raise ValueError("polynomial must be monic")
    n = len(coeffs) - 1
    if n < 1:
        raise ValueError("degree must be at least 1")
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][n - 1] = _as_entry(-coeffs[i])
        if i + 1 < n:
            rows[i + 1][i] = 1
    return Matrix(rows)


# ---------------------------------------------------------------------------
# text format: first line "rows cols", then space-separated entries

def matrix_to_text(a: Matrix) -> str:
    lines = [f"{a.nrows} {a.ncols}"]
    for row in a.rows:
        lines.append(" ".join(str(Fraction(x)) for x in row))
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> Matrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    try:
        nrows, ncols = map(int, lines[0].split())
    except Exception as exc:
        raise ValueError(f"bad matrix header {lines[0]!r}") from exc
    if len(lines) != nrows + 1:
        raise ValueError(f"expected {nrows} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        items = ln.split()
        if len(items) != ncols:
            raise ValueError(f"expected {ncols} entries per row, got {len(items)}")
        rows.append([Fraction(tok) for tok in items])
    return Matrix(rows, ncols=ncols)
