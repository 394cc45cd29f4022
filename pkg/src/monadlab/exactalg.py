"""Exact fields and dense matrices over them.

Two coefficient fields are supported: the rationals (elements are
``fractions.Fraction``) and prime fields F_q with q < 2**31 (elements are
Python ints in ``[0, q)``).  Matrices are numpy arrays underneath: object
arrays of Fractions over Q, int64 arrays over F_q.  Every product of two
reduced F_q entries fits in int64, which the elimination relies on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational

import numpy as np

LARGEST_PRIME_BELOW_2_31 = 2147483647


class MalformedInputError(ValueError):
    """Raised for non-exact entries or operations mixing two fields."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24 with these bases
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class RationalField:
    characteristic = 0
    dtype = object

    @property
    def tag(self) -> str:
        return "Q"

    def __call__(self, x) -> Fraction:
        if isinstance(x, bool) or isinstance(x, float):
            raise MalformedInputError(f"non-exact scalar {x!r}")
        if isinstance(x, (Integral, Rational)):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x.strip())
        if isinstance(x, np.integer):
            return Fraction(int(x))
        raise MalformedInputError(f"cannot coerce {x!r} into Q")

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def inv(self, x: Fraction) -> Fraction:
        return 1 / x

    def random_element(self, rng, height: int = 9) -> Fraction:
        return Fraction(rng.randint(-height, height))

    def __repr__(self) -> str:
        return "QQ"


@dataclass(frozen=True)
class PrimeField:
    q: int
    dtype = np.int64

    def __post_init__(self):
        if not (2 <= self.q < 2**31) or not _is_prime(self.q):
            raise MalformedInputError(f"F_q needs a prime q < 2^31, got {self.q}")

    @property
    def characteristic(self) -> int:
        return self.q

    @property
    def tag(self) -> str:
        return f"Fq:{self.q}"

    def __call__(self, x) -> int:
        if isinstance(x, bool) or isinstance(x, float):
            raise MalformedInputError(f"non-exact scalar {x!r}")
        if isinstance(x, (Integral, np.integer)):
            return int(x) % self.q
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Rational):
            den = int(x.denominator) % self.q
            if den == 0:
                raise MalformedInputError(f"denominator of {x} vanishes mod {self.q}")
            return int(x.numerator) * pow(den, -1, self.q) % self.q
        raise MalformedInputError(f"cannot coerce {x!r} into F_{self.q}")

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def inv(self, x: int) -> int:
        return pow(int(x), -1, self.q)

    def random_element(self, rng, height: int = 9) -> int:
        return rng.randrange(self.q)

    def signed(self, x: int) -> int:
        """Symmetric representative, used for printing."""
        x = int(x)
        return x - self.q if x > self.q // 2 else x

    def __repr__(self) -> str:
        return f"GF({self.q})"


Field = RationalField | PrimeField
QQ = RationalField()


def GF(q: int) -> PrimeField:
    return PrimeField(q)


def field_from_tag(tag: str) -> Field:
    tag = tag.strip()
    if tag == "Q":
        return QQ
    if tag.startswith("Fq:"):
        try:
            return PrimeField(int(tag[3:]))
        except ValueError as exc:
            raise MalformedInputError(f"bad field tag {tag!r}") from exc
    raise MalformedInputError(f"unknown field tag {tag!r}; expected 'Q' or 'Fq:<prime>'")


def _matmul_mod(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    # split b into 16-bit limbs so that no partial sum overflows int64
    lo = b & 0xFFFF
    hi = b >> 16
    r_hi = (a @ hi) % q
    r_lo = (a @ lo) % q
    return (r_hi * 65536 + r_lo) % q


class ExactMatrix:
    """Dense immutable matrix over QQ or a prime field."""

    __slots__ = ("field", "data")

    def __init__(self, field: Field, data: np.ndarray):
        if data.ndim != 2:
            raise MalformedInputError("matrix data must be 2-D")
        if data.dtype != np.dtype(field.dtype):
            raise MalformedInputError(f"dtype {data.dtype} does not match {field!r}")
        data.setflags(write=False)
        self.field = field
        self.data = data

    @classmethod
    def from_rows(cls, field: Field, rows, ncols: int | None = None) -> ExactMatrix:
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise MalformedInputError("ragged rows")
        arr = np.empty((len(rows), ncols), dtype=field.dtype)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                arr[i, j] = field(x)
        return cls(field, arr)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> ExactMatrix:
        arr = np.zeros((nrows, ncols), dtype=field.dtype)
        if field.dtype is object:
            arr[...] = Fraction(0)
        return cls(field, arr)

    @classmethod
    def identity(cls, field: Field, n: int) -> ExactMatrix:
        arr = np.zeros((n, n), dtype=field.dtype)
        if field.dtype is object:
            arr[...] = Fraction(0)
        for i in range(n):
            arr[i, i] = field.one
        return cls(field, arr)

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    @property
    def ncols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def T(self) -> ExactMatrix:
        return ExactMatrix(self.field, self.data.T.copy())

    def __getitem__(self, idx):
        v = self.data[idx]
        if isinstance(v, np.ndarray):
            return v
        return int(v) if self.field.dtype is not object else v

    def tolist(self) -> list[list]:
        if self.field.dtype is object:
            return [list(r) for r in self.data]
        return [[int(x) for x in r] for r in self.data]

    def is_zero(self) -> bool:
        return not np.any(self.data)

    def _check_same_field(self, other: ExactMatrix):
        if self.field != other.field:
            raise MalformedInputError(f"field mismatch: {self.field!r} vs {other.field!r}")

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_same_field(other)
        if self.ncols != other.nrows:
            raise MalformedInputError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.field.dtype is object:
            if self.ncols == 0:
                return ExactMatrix.zeros(self.field, self.nrows, other.ncols)
            return ExactMatrix(self.field, self.data.dot(other.data))
        return ExactMatrix(self.field, _matmul_mod(self.data, other.data, self.field.q))

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_same_field(other)
        s = self.data + other.data
        if self.field.dtype is not object:
            s %= self.field.q
        return ExactMatrix(self.field, s)

    def __neg__(self) -> ExactMatrix:
        if self.field.dtype is object:
            return ExactMatrix(self.field, -self.data)
        return ExactMatrix(self.field, (-self.data) % self.field.q)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and bool(np.all(self.data == other.data)))

    def __hash__(self):
        return hash((self.field.tag, self.shape, tuple(map(tuple, self.tolist()))))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.field!r}, {self.tolist()})"

    def hstack(self, other: ExactMatrix) -> ExactMatrix:
        self._check_same_field(other)
        return ExactMatrix(self.field, np.hstack([self.data, other.data]))

    def columns(self, idx) -> ExactMatrix:
        return ExactMatrix(self.field, self.data[:, list(idx)].copy())

    def rows(self, idx) -> ExactMatrix:
        return ExactMatrix(self.field, self.data[list(idx), :].copy())


def block_matrix(field: Field, row_sizes, col_sizes, blocks: dict) -> ExactMatrix:
    """Assemble a matrix from ``{(i, j): ExactMatrix}``; missing blocks are zero."""
    out = np.zeros((sum(row_sizes), sum(col_sizes)), dtype=field.dtype)
    if field.dtype is object:
        out[...] = Fraction(0)
    r_off = np.concatenate([[0], np.cumsum(row_sizes)]).astype(int)
    c_off = np.concatenate([[0], np.cumsum(col_sizes)]).astype(int)
    for (i, j), blk in blocks.items():
        if blk.field != field:
            raise MalformedInputError("block field mismatch")
        if blk.shape != (row_sizes[i], col_sizes[j]):
            raise MalformedInputError(f"block ({i},{j}) has shape {blk.shape}")
        out[r_off[i]:r_off[i + 1], c_off[j]:c_off[j + 1]] = blk.data
    return ExactMatrix(field, out)


def _rref_rational(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    # fraction-free: rows are kept as primitive integer vectors, Fractions only at the end
    nrows, ncols = a.shape
    ints = np.empty((nrows, ncols), dtype=object)
    for i in range(nrows):
        row = a[i]
        den = math.lcm(*[x.denominator for x in row]) if ncols else 1
        ints[i] = [int(x * den) for x in row]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(ints[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            ints[[r, p], c:] = ints[[p, r], c:]
        pv = ints[r, c]
        col = ints[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            # whole rows: earlier pivot rows have entries left of c
            ints[others] = ints[others] * pv - np.outer(col[others], ints[r])
            for i in others:
                g = math.gcd(*ints[i])
                if g > 1:
                    ints[i] = ints[i] // g
        pivots.append(c)
        r += 1
    out = np.empty((nrows, ncols), dtype=object)
    out[...] = Fraction(0)
    for i, c in enumerate(pivots):
        pv = ints[i, c]
        out[i] = [Fraction(x, pv) for x in ints[i]]
    return out, pivots


def _rref_array(field: Field, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan; first nonzero entry scanning down each column."""
    if field.dtype is object:
        return _rref_rational(a)
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    modular = field.dtype is not object
    q = field.q if modular else None
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p], c:] = a[[p, r], c:]
        inv = field.inv(a[r, c])
        if modular:
            a[r, c:] = (a[r, c:] * inv) % q
        else:
            a[r, c:] = a[r, c:] * inv
        col = a[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            upd = np.outer(col[others], a[r, c:])
            if modular:
                a[others, c:] = (a[others, c:] - upd) % q
            else:
                a[others, c:] = a[others, c:] - upd
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: ExactMatrix) -> tuple[ExactMatrix, list[int], int]:
    """Reduced row-echelon form, pivot columns and rank."""
    a = m.data.copy()
    a, pivots = _rref_array(m.field, a)
    return ExactMatrix(m.field, a), pivots, len(pivots)


def rank(m: ExactMatrix) -> int:
    if m.nrows > m.ncols:
        return rref(m.T)[2]
    return rref(m)[2]


def _kernel_array(field: Field, reduced: np.ndarray, pivots: list[int], ncols: int) -> np.ndarray:
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = np.zeros((ncols, len(free)), dtype=field.dtype)
    if field.dtype is object:
        out[...] = Fraction(0)
    for k, f in enumerate(free):
        out[f, k] = field.one
        for i, p in enumerate(pivots):
            x = reduced[i, f]
            if x:
                out[p, k] = field(-x) if field.dtype is object else (-int(x)) % field.q
    return out


def kernel_matrix(m: ExactMatrix) -> ExactMatrix:
    """Columns form a basis of ker(m)."""
    reduced, pivots, _ = rref(m)
    return ExactMatrix(m.field, _kernel_array(m.field, reduced.data, pivots, m.ncols))


def kernel_basis(m: ExactMatrix) -> list[tuple]:
    k = kernel_matrix(m)
    return [tuple(col) for col in zip(*k.tolist())] if k.ncols else []


@dataclass(frozen=True)
class CokernelData:
    """Cokernel of a matrix, presented on a coordinate complement of its image.

    ``complement`` lists the target coordinates whose unit vectors span a
    complement of the column space; ``projection`` (dim x nrows) kills the
    column space and is the identity on that complement.
    """

    dim: int
    rank: int
    complement: tuple[int, ...]
    projection: ExactMatrix
    image_basis: ExactMatrix  # nrows x rank, reduced

    def inclusion(self) -> ExactMatrix:
        """Unit vectors of the complement coordinates as columns."""
        n = self.projection.ncols
        field = self.projection.field
        arr = np.zeros((n, self.dim), dtype=field.dtype)
        if field.dtype is object:
            arr[...] = Fraction(0)
        for k, c in enumerate(self.complement):
            arr[c, k] = field.one
        return ExactMatrix(field, arr)


def cokernel_data(m: ExactMatrix) -> CokernelData:
    field = m.field
    reduced, pivots, r = rref(m.T)
    basis = reduced.data[:r, :]  # rows span the column space of m
    pivset = set(pivots)
    comp = tuple(c for c in range(m.nrows) if c not in pivset)
    proj = np.zeros((len(comp), m.nrows), dtype=field.dtype)
    if field.dtype is object:
        proj[...] = Fraction(0)
    for k, c in enumerate(comp):
        proj[k, c] = field.one
    if comp and r:
        sub = basis[:, list(comp)]  # r x dim
        if field.dtype is object:
            proj[:, pivots] = -sub.T
        else:
            proj[:, pivots] = (-sub.T) % field.q
    return CokernelData(
        dim=len(comp),
        rank=r,
        complement=comp,
        projection=ExactMatrix(field, proj),
        image_basis=ExactMatrix(field, basis.T.copy()),
    )


def solve(m: ExactMatrix, b: ExactMatrix) -> ExactMatrix | None:
    """One solution x of m @ x = b (b a column matrix), or None."""
    aug = m.hstack(b)
    reduced, pivots, r = rref(aug)
    if pivots and pivots[-1] >= m.ncols:
        return None
    x = ExactMatrix.zeros(m.field, m.ncols, b.ncols).data.copy()
    for i, p in enumerate(pivots):
        x[p, :] = reduced.data[i, m.ncols:]
    return ExactMatrix(m.field, x)


def column_space_basis(m: ExactMatrix) -> ExactMatrix:
    """Reduced basis of the column space, as columns."""
    reduced, _, r = rref(m.T)
    return ExactMatrix(m.field, reduced.data[:r, :].T.copy())
