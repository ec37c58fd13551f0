"""Exact matrices.

Two layers live here:

* tiny dense matrices over :class:`FieldScalar`, stored as tuples of tuples,
  used for group elements and points (dimension <= 3 in practice);
* :class:`KMat`, a matrix over Q(sqrt(d)) backed by a pair of FLINT rational
  matrices, used for module action matrices.  Kernels and ranks are taken
  over Q after realification, where Q(sqrt(d))^n is viewed as Q^(2n).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from flint import fmpq, fmpq_mat, fmpq_poly

from .field import FieldScalar, scalar

Matrix = tuple  # tuple[tuple[FieldScalar, ...], ...]
Vector = tuple  # tuple[FieldScalar, ...]


# ---------------------------------------------------------------------------
# small dense matrices over FieldScalar
# ---------------------------------------------------------------------------

def identity(n: int, d: int = 0) -> Matrix:
    one, zero = FieldScalar(1, 0, d), FieldScalar(0, 0, d)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    cols = tuple(zip(*B))
    return tuple(tuple(_dot(row, col) for col in cols) for row in A)


def mat_vec(A: Matrix, v: Vector) -> Vector:
    return tuple(_dot(row, v) for row in A)


def vec_mat(u: Vector, A: Matrix) -> Vector:
    """Row vector times matrix; used for covectors."""
    return tuple(_dot(u, col) for col in zip(*A))


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def _dot(u, v):
    it = iter(zip(u, v))
    x, y = next(it)
    total = x * y
    for x, y in it:
        if x and y:
            total = total + x * y
    return total


def dot(u: Vector, v: Vector):
    return _dot(u, v)


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(c, v: Vector) -> Vector:
    return tuple(c * x for x in v)


def is_identity(A: Matrix) -> bool:
    return all(x == (i == j) for i, row in enumerate(A) for j, x in enumerate(row))


def mat_power(A: Matrix, k: int) -> Matrix:
    result = identity(len(A), A[0][0].d)
    for _ in range(k):
        result = mat_mul(result, A)
    return result


def row_reduce(rows: Sequence[Sequence[FieldScalar]]):
    """Gauss-Jordan elimination; returns (reduced rows, pivot columns)."""
    R = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(R[0]) if R else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(R)) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = R[r][c].inverse()
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return R, pivots


def solve(A: Matrix, b: Vector) -> Vector:
    """One exact solution of ``A x = b``; free variables are set to zero.

    Raises ``ValueError`` when the system is inconsistent.
    """
    n = len(A[0])
    d = b[0].d if b else 0
    aug = [list(row) + [rhs] for row, rhs in zip(A, b)]
    R, pivots = row_reduce(aug)
    if n in pivots:
        raise ValueError("inconsistent linear system")
    zero = FieldScalar(0, 0, d)
    x = [zero] * n
    for row, c in zip(R, pivots):
        x[c] = row[n]
    return tuple(x)


def rank(A: Matrix) -> int:
    return len(row_reduce(A)[1]) if A else 0


# ---------------------------------------------------------------------------
# KMat: matrices over Q(sqrt(d)) on top of FLINT
# ---------------------------------------------------------------------------

def _q(x: Fraction) -> fmpq:
    return fmpq(x.numerator, x.denominator)


def _fr(x: fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


class KMat:
    """Matrix ``re + sqrt(d) * im`` with rational FLINT parts.

    For ``d == 0`` the irrational part is ``None``.
    """

    __slots__ = ("re", "im", "d")

    def __init__(self, re: fmpq_mat, im: fmpq_mat | None, d: int):
        self.re = re
        self.im = im if d else None
        self.d = d

    @classmethod
    def from_rows(cls, rows, d: int = 0) -> "KMat":
        rows = [[scalar(x, d) for x in row] for row in rows]
        n = len(rows)
        m = len(rows[0]) if n else 0
        re = fmpq_mat(n, m, [_q(x.a) for row in rows for x in row])
        im = fmpq_mat(n, m, [_q(x.b) for row in rows for x in row]) if d else None
        return cls(re, im, d)

    @classmethod
    def zeros(cls, n: int, m: int, d: int = 0) -> "KMat":
        return cls(fmpq_mat(n, m), fmpq_mat(n, m) if d else None, d)

    @classmethod
    def identity(cls, n: int, d: int = 0) -> "KMat":
        re = fmpq_mat(n, n)
        for i in range(n):
            re[i, i] = 1
        return cls(re, fmpq_mat(n, n) if d else None, d)

    @classmethod
    def scalar_matrix(cls, c: FieldScalar, n: int) -> "KMat":
        return cls.identity(n, c.d).scale(c)

    @property
    def shape(self):
        return (self.re.nrows(), self.re.ncols())

    def _same_field(self, other: "KMat"):
        if other.d != self.d:
            from .errors import FieldMismatchError
            raise FieldMismatchError("matrices over different fields")

    def __add__(self, other: "KMat") -> "KMat":
        self._same_field(other)
        im = self.im + other.im if self.d else None
        return KMat(self.re + other.re, im, self.d)

    def __sub__(self, other: "KMat") -> "KMat":
        self._same_field(other)
        im = self.im - other.im if self.d else None
        return KMat(self.re - other.re, im, self.d)

    def __neg__(self) -> "KMat":
        return KMat(-self.re, -self.im if self.d else None, self.d)

    def __matmul__(self, other: "KMat") -> "KMat":
        self._same_field(other)
        if not self.d:
            return KMat(self.re * other.re, None, 0)
        re = self.re * other.re + self.im * other.im * self.d
        im = self.re * other.im + self.im * other.re
        return KMat(re, im, self.d)

    def scale(self, c) -> "KMat":
        c = scalar(c, self.d)
        a = _q(c.a)
        if not self.d:
            return KMat(self.re * a, None, 0)
        b = _q(c.b)
        if not c.b:
            return KMat(self.re * a, self.im * a, self.d)
        re = self.re * a + self.im * (b * self.d)
        im = self.im * a + self.re * b
        return KMat(re, im, self.d)

    def shift(self, c) -> "KMat":
        """Return ``self - c * I``."""
        n = self.re.nrows()
        c = scalar(c, self.d)
        re = fmpq_mat(self.re)
        a = _q(c.a)
        for i in range(n):
            re[i, i] = re[i, i] - a
        if not self.d:
            return KMat(re, None, 0)
        im = fmpq_mat(self.im)
        b = _q(c.b)
        for i in range(n):
            im[i, i] = im[i, i] - b
        return KMat(re, im, self.d)

    def __pow__(self, k: int) -> "KMat":
        if k == 1:
            return self
        result = KMat.identity(self.re.nrows(), self.d)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, KMat):
            return NotImplemented
        if self.d != other.d or self.shape != other.shape:
            return False
        return self.re == other.re and (not self.d or self.im == other.im)

    __hash__ = None

    def is_zero(self) -> bool:
        return self.re == fmpq_mat(*self.shape) and (
            not self.d or self.im == fmpq_mat(*self.shape))

    def entries(self) -> list[list[FieldScalar]]:
        re = self.re.tolist()
        if not self.d:
            return [[FieldScalar(_fr(x)) for x in row] for row in re]
        im = self.im.tolist()
        return [[FieldScalar(_fr(x), _fr(y), self.d) for x, y in zip(r, i)]
                for r, i in zip(re, im)]

    def realify(self) -> fmpq_mat:
        """Rational matrix of the same map on Q^(deg*n); identity when d = 0."""
        if not self.d:
            return self.re
        return block_rational([[self.re, self.im * self.d], [self.im, self.re]])

    @staticmethod
    def block(rows: list[list["KMat"]]) -> "KMat":
        d = rows[0][0].d
        re = block_rational([[b.re for b in row] for row in rows])
        im = block_rational([[b.im for b in row] for row in rows]) if d else None
        return KMat(re, im, d)

    def __repr__(self):
        return f"KMat(d={self.d}, {self.entries()!r})"


def block_rational(rows: list[list[fmpq_mat]]) -> fmpq_mat:
    """Assemble a rational block matrix."""
    lists = [[b.tolist() for b in row] for row in rows]
    out = []
    for row in lists:
        nr = len(row[0])
        for i in range(nr):
            line = []
            for b in row:
                line.extend(b[i])
            out.append(line)
    if not out:
        return fmpq_mat(0, 0)
    return fmpq_mat(out)


def hstack(mats: list[fmpq_mat]) -> fmpq_mat:
    n = mats[0].nrows()
    widths = [m.ncols() for m in mats]
    return fmpq_mat(n, sum(widths),
                    [m[i, j] for i in range(n) for m, w in zip(mats, widths) for j in range(w)])


def vstack(mats: list[fmpq_mat]) -> fmpq_mat:
    return block_rational([[m] for m in mats])


def nullspace(M: fmpq_mat) -> fmpq_mat | None:
    """Basis of the right kernel as columns, or None for a zero kernel.

    Clears denominators and runs FLINT's fraction-free integer nullspace.
    """
    ncols = M.ncols()
    if M.nrows() == 0:
        return identity_rational(ncols)
    num, _den = M.numer_denom()
    X, k = num.nullspace()
    if k == 0:
        return None
    return fmpq_mat(ncols, k, [X[i, j] for i in range(ncols) for j in range(k)])


def column_basis(M: fmpq_mat) -> fmpq_mat | None:
    """Basis of the column space (as columns), or None when it is zero."""
    R, r = M.transpose().rref()
    if r == 0:
        return None
    n = M.nrows()
    return fmpq_mat(n, r, [R[j, i] for i in range(n) for j in range(r)])


def identity_rational(n: int) -> fmpq_mat:
    I = fmpq_mat(n, n)
    for i in range(n):
        I[i, i] = 1
    return I


def root_multiplicity(poly: fmpq_poly, root: FieldScalar) -> int:
    """Multiplicity of ``root`` (or of its Galois orbit) in a rational polynomial."""
    if not root.b:
        factor = fmpq_poly([-_q(root.a), 1])
    else:
        # minimal polynomial x^2 - 2a x + (a^2 - d b^2)
        factor = fmpq_poly([_q(root.norm()), -2 * _q(root.a), 1])
    k = 0
    while poly.degree() >= factor.degree():
        q, r = divmod(poly, factor)
        if r != 0:
            break
        poly = q
        k += 1
    return k
