"""Cohomology of the bundle E = ker(beta)/im(alpha) of a monad on P^3.

Since the middle cohomology of line bundles on P^3 vanishes,
H^1(E(t)) is the cokernel of H^0(beta(t)) and
h^0(E(t)) = dim ker H^0(beta(t)) - h^0(A(t)).  For rank 2 the remaining
groups follow from Serre duality, E^v = E(-c1).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .exactalg import ExactMatrix
from .monad import MonadError, MonadPresentation, cached_cokernel, sections_matrix
from .polyring import HomogeneousPoly, dim_S, multiplication_matrix

# beyond this many twists past the generators a nonvanishing module means beta is
# not surjective somewhere
SUPPORT_SEARCH_LIMIT = 64


class UnsupportedMonadError(MonadError):
    pass


class NotLocallyFreeError(MonadError):
    pass


class WindowTooNarrowError(MonadError):
    pass


def line_bundle_h(i: int, n: int) -> int:
    if i == 0:
        return dim_S(n)
    if i == 3:
        return dim_S(-n - 4)
    if i in (1, 2):
        return 0
    raise ValueError(f"cohomological degree {i} out of range 0..3")


def chi_line(n: int) -> int:
    # (n+1)(n+2)(n+3)/6 as a polynomial, valid for every integer n
    return (n + 1) * (n + 2) * (n + 3) // 6


def euler_characteristic(m: MonadPresentation, t: int) -> int:
    return (sum(chi_line(b + t) for b in m.B) - sum(chi_line(a + t) for a in m.A)
            - sum(chi_line(c + t) for c in m.C))


def hilbert_polynomial(m: MonadPresentation) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Coefficients (c3, c2, c1, c0) of chi(E(t)) as a cubic in t."""
    # interpolate from four integer values
    xs = [0, 1, 2, 3]
    ys = [Fraction(euler_characteristic(m, x)) for x in xs]
    coeffs = [Fraction(0)] * 4  # constant term first
    for i, xi in enumerate(xs):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = [Fraction(0)] + basis  # multiply by t
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k, b in enumerate(basis):
            coeffs[k] += ys[i] * b / denom
    return coeffs[3], coeffs[2], coeffs[1], coeffs[0]


def chern_classes(m: MonadPresentation) -> tuple[int, int]:
    """(c1, c2) from c(E) = c(B) / (c(A) c(C)), truncated in degree 2."""
    def mul(p, q):
        return [p[0] * q[0], p[0] * q[1] + p[1] * q[0], p[0] * q[2] + p[1] * q[1] + p[2] * q[0]]

    total = [1, 0, 0]
    for b in m.B:
        total = mul(total, [1, b, 0])
    for a in list(m.A) + list(m.C):
        total = mul(total, [1, -a, a * a])
    return total[1], total[2]


def instanton_hilbert(k: int, t: int) -> Fraction:
    if k < 1:
        raise ValueError("charge must be positive")
    return Fraction((t + 2) * ((t + 3) * (t + 1) - 3 * k), 3)


def sections_matrix_beta(m: MonadPresentation, t: int) -> ExactMatrix:
    return sections_matrix(m.field, m.beta, m.B, m.C, t)


def _variable_matrix(m: MonadPresentation, v: int, t: int) -> ExactMatrix:
    """Multiplication by x_v on H^0(C(t)) -> H^0(C(t+1)), block diagonal."""
    from .exactalg import block_matrix

    x = HomogeneousPoly.variable(m.field, v)
    rs = [dim_S(c + t + 1) for c in m.C]
    cs = [dim_S(c + t) for c in m.C]
    blocks = {(i, i): multiplication_matrix(x, c + t) for i, c in enumerate(m.C) if cs[i]}
    return block_matrix(m.field, rs, cs, blocks)


@dataclass(frozen=True)
class H1Piece:
    degree: int
    dim: int
    h0_C: int          # rows of the sections matrix
    h0_B: int          # columns
    rank: int
    complement: tuple[int, ...]


@dataclass
class GradedH1Module:
    """H^1_*(E) with the multiplication-by-variable maps between its pieces."""

    field: object
    pieces: dict[int, H1Piece]
    mult: dict[tuple[int, int], ExactMatrix]  # (variable, t) -> M_t -> M_{t+1}
    support: tuple[int, int] | None           # None for the zero module
    computed: tuple[int, int] = dc_field(default=(0, -1))  # twists actually reduced

    def dim(self, t: int) -> int:
        p = self.pieces.get(t)
        return p.dim if p else 0

    def dims(self) -> dict[int, int]:
        return {t: p.dim for t, p in sorted(self.pieces.items()) if p.dim}

    def is_zero(self) -> bool:
        return self.support is None

    def map(self, v: int, t: int) -> ExactMatrix:
        if (v, t) in self.mult:
            return self.mult[(v, t)]
        return ExactMatrix.zeros(self.field, self.dim(t + 1), self.dim(t))


def h1_module(m: MonadPresentation, exactness=None) -> GradedH1Module:
    if exactness is not None and not exactness.locally_free:
        raise NotLocallyFreeError(
            "fiberwise exactness is not established; H^1 of the display needs local freeness")
    lo = -max(m.C)   # first twist with H^0(C(t)) != 0
    gen = -min(m.C)  # the module is generated in twists <= gen
    pieces: dict[int, H1Piece] = {}
    coks = {}
    t = lo
    while True:
        (shape, cok) = cached_cokernel(m, "beta", t)
        coks[t] = cok
        pieces[t] = H1Piece(t, cok.dim, shape[0], shape[1], cok.rank, cok.complement)
        if t >= gen and cok.dim == 0:
            break
        if t > gen + SUPPORT_SEARCH_LIMIT:
            raise NotLocallyFreeError("H^1 module does not terminate; beta is not surjective")
        t += 1
    hi_computed = t
    nonzero = [s for s, p in pieces.items() if p.dim]
    support = (min(nonzero), max(nonzero)) if nonzero else None
    mult = {}
    for s in range(lo, hi_computed):
        if not pieces[s].dim or not pieces[s + 1].dim:
            continue
        incl = coks[s].inclusion()
        for v in range(4):
            xv = _variable_matrix(m, v, s)
            # well-definedness: x_v maps the image of H^0(beta(s)) into that of s+1
            if coks[s].rank and not (coks[s + 1].projection @ (xv @ coks[s].image_basis)).is_zero():
                raise MonadError(f"module action not well defined at twist {s}; is beta*alpha = 0?")
            mult[(v, s)] = coks[s + 1].projection @ (xv @ incl)
    return GradedH1Module(m.field, pieces, mult, support, (lo, hi_computed))


def h0_twist(m: MonadPresentation, mod: GradedH1Module, t: int) -> int:
    """h^0(E(t)) = dim ker H^0(beta(t)) - h^0(A(t))."""
    cols = sum(dim_S(b + t) for b in m.B)
    rows = sum(dim_S(c + t) for c in m.C)
    lo, hi = mod.computed
    if lo <= t <= hi:
        rk = mod.pieces[t].rank
    elif t < lo:
        rk = 0      # H^0(C(t)) = 0
    else:
        rk = rows   # past the support, H^0(beta(t)) is onto
    return cols - rk - sum(dim_S(a + t) for a in m.A)


@dataclass
class CohomologyTable:
    window: tuple[int, int]
    h: dict[int, tuple[int, int, int, int]]   # t -> (h0, h1, h2, h3)
    chern: tuple[int, int]
    euler: dict[int, int]

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, t = key
        if not (self.window[0] <= t <= self.window[1]):
            raise WindowTooNarrowError(f"twist {t} lies outside the window {self.window}")
        return self.h[t][i]

    def row(self, i: int) -> list[int]:
        return [self.h[t][i] for t in range(self.window[0], self.window[1] + 1)]

    def to_json(self) -> dict:
        return {
            "window": list(self.window),
            "c1": self.chern[0],
            "c2": self.chern[1],
            "h": {str(i): self.row(i) for i in range(4)},
        }


def auto_window(m: MonadPresentation, mod: GradedH1Module) -> tuple[int, int]:
    """A window wide enough to certify regularity and natural cohomology."""
    from .analysis import cmr_bound, NOT_APPLICABLE

    c1, _ = chern_classes(m)
    bound = cmr_bound(m)
    if bound is NOT_APPLICABLE:
        bound = estimated_regularity(m, mod)
    w = bound + 2
    return (-c1 - 4 - w, w)


def estimated_regularity(m: MonadPresentation, mod: GradedH1Module) -> int:
    c1, _ = chern_classes(m)
    t0 = mod.computed[0]
    while h0_twist(m, mod, t0) == 0:
        t0 += 1
    cands = [-c1 - t0]
    if mod.support is not None:
        lo, hi = mod.support
        cands += [hi + 2, -c1 - 2 - lo]
    return max(cands)


def cohomology_table(m: MonadPresentation, window: tuple[int, int] | None = None,
                     mod: GradedH1Module | None = None) -> CohomologyTable:
    if m.rank != 2:
        raise UnsupportedMonadError(f"cohomology has rank {m.rank}; duality identities need rank 2")
    if mod is None:
        mod = h1_module(m)
    if window is None:
        window = auto_window(m, mod)
    c1, c2 = chern_classes(m)
    h = {}
    euler = {}
    for t in range(window[0], window[1] + 1):
        dual = -c1 - 4 - t
        h[t] = (h0_twist(m, mod, t), mod.dim(t), mod.dim(dual), h0_twist(m, mod, dual))
        euler[t] = euler_characteristic(m, t)
    return CohomologyTable(tuple(window), h, (c1, c2), euler)
