"""Buchsbaum index, Castelnuovo-Mumford regularity and bundle classification."""
from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, asdict
from fractions import Fraction
from math import isqrt

from .cohomology import (CohomologyTable, GradedH1Module, WindowTooNarrowError,
                         cohomology_table, h1_module, hilbert_polynomial)
from .exactalg import ExactMatrix, column_space_basis
from .monad import (DEFAULT_NULLSTELLENSATZ_CAP, ExactnessReport, MonadError, MonadPresentation,
                    check_composition, check_fiberwise, serialize_monad)


class _NotApplicable:
    def __repr__(self):
        return "NOT_APPLICABLE"

    def __bool__(self):
        return False


NOT_APPLICABLE = _NotApplicable()


def buchsbaum_index(mod: GradedH1Module) -> int:
    """Least p with m^p H^1_*(E) = 0.

    (m^p M)_t is spanned by the images of (m^{p-1} M)_{t-1} under the four
    variable maps, so the powers are tracked as subspaces degree by degree.
    """
    if mod.is_zero():
        return 0
    lo, hi = mod.support
    layer = {t: ExactMatrix.identity(mod.field, mod.dim(t)) for t in range(lo, hi + 1) if mod.dim(t)}
    p = 0
    while layer:
        p += 1
        nxt = {}
        for t, span in layer.items():
            if not mod.dim(t + 1):
                continue
            imgs = [mod.map(v, t) @ span for v in range(4)]
            stacked = imgs[0]
            for im in imgs[1:]:
                stacked = stacked.hstack(im)
            basis = column_space_basis(stacked)
            if basis.ncols:
                nxt[t + 1] = basis
        layer = nxt
    return p


def h1_generation_degrees(mod: GradedH1Module) -> list[int]:
    """Twists where M_t is not spanned by x_v M_{t-1}."""
    if mod.is_zero():
        return []
    lo, hi = mod.support
    out = []
    for t in range(lo, hi + 1):
        d = mod.dim(t)
        if not d:
            continue
        if not mod.dim(t - 1):
            out.append(t)
            continue
        stacked = mod.map(0, t - 1)
        for v in range(1, 4):
            stacked = stacked.hstack(mod.map(v, t - 1))
        if column_space_basis(stacked).ncols < d:
            out.append(t)
    return out


def _regular_at(table: CohomologyTable, m: int) -> bool:
    return table[1, m - 1] == 0 and table[2, m - 2] == 0 and table[3, m - 3] == 0


def castelnuovo_regularity(table: CohomologyTable) -> int:
    """Least m with h^1(E(m-1)) = h^2(E(m-2)) = h^3(E(m-3)) = 0."""
    lo, hi = table.window
    first, last = lo + 3, hi + 1
    for m in range(first, last + 1):
        if _regular_at(table, m):
            if m == first:
                raise WindowTooNarrowError(
                    f"E is already {m}-regular at the bottom of the window {table.window}; "
                    f"extend the window below {lo}")
            if not all(_regular_at(table, m2) for m2 in range(m, last + 1)):
                raise MonadError("regularity not persistent inside the window")
            return m
    raise WindowTooNarrowError(
        f"no regularity certified inside {table.window}; extend the window above {hi}")


def cmr_bound(m: MonadPresentation):
    """Regularity bound for monads O(-l)^k -> sum O(b_j) (2+2k terms) -> O(d)^k."""
    k = len(m.A)
    if len(m.C) != k or len(m.B) != 2 + 2 * k:
        return NOT_APPLICABLE
    if len(set(m.A)) != 1 or len(set(m.C)) != 1:
        return NOT_APPLICABLE
    l, d = -m.A[0], m.C[0]
    b = sorted(m.B)
    if l < 1 or not (-l < b[0] and b[-1] < d):
        return NOT_APPLICABLE
    return max((k + 2) * d - sum(b[:k + 3]) - 2, l)


@dataclass(frozen=True)
class GenericIndexBounds:
    k: int
    m_of_k: int
    lower_p: int
    upper_p: int
    literal_lower: int  # m(k) + 2 taken at face value


def generic_bounds(k: int) -> GenericIndexBounds:
    if k < 1:
        raise ValueError("charge must be positive")
    n = 3 * k + 1
    r = isqrt(n)
    m_of_k = r - 2
    # largest integer strictly below sqrt(3k+1) - 2
    strict = r - 3 if r * r == n else r - 2
    return GenericIndexBounds(k, m_of_k, strict + 2, k, m_of_k + 2)


def integer_roots(coeffs) -> list[int]:
    """Distinct integer roots of a polynomial given highest degree first."""
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return []
    bound = 1 + int(max(abs(c / coeffs[0]) for c in coeffs[1:]))
    roots = []
    for x in range(-bound, bound + 1):
        val = Fraction(0)
        for c in coeffs:
            val = val * x + c
        if val == 0:
            roots.append(x)
    return roots


@dataclass
class ClassificationReport:
    chern: tuple[int, int]
    buchsbaum_p: int
    regularity_computed: int
    regularity_bound_cmr: object
    is_instanton: bool
    has_natural_cohomology: bool
    is_supernatural: bool
    is_tHooft: bool
    is_stable: bool
    h1_generation_degrees: list[int]
    monad_is_minimal: bool = True  # reported only; nothing downstream relies on it

    def to_json(self) -> dict:
        d = asdict(self)
        d["chern"] = list(self.chern)
        if self.regularity_bound_cmr is NOT_APPLICABLE:
            d["regularity_bound_cmr"] = None
        return d


def monad_is_minimal(m: MonadPresentation) -> bool:
    """No nonzero constant entry in alpha or beta, so no summand of A or C splits off into B."""
    return not any(f.degree == 0 and not f.is_zero() for grid in (m.alpha, m.beta)
                   for row in grid for f in row)


def classify(m: MonadPresentation, table: CohomologyTable, mod: GradedH1Module) -> ClassificationReport:
    c1, c2 = table.chern
    reg = castelnuovo_regularity(table)
    lo, hi = table.window
    if hi < reg - 1 or lo > -c1 - 3 - reg:
        raise WindowTooNarrowError(f"window {table.window} does not certify natural cohomology")
    natural = all(sum(1 for x in table.h[t] if x) <= 1 for t in range(lo, hi + 1))
    is_instanton = (c1 == 0 and table[0, -1] == 0 and table[1, -2] == 0
                    and table[2, -2] == 0 and table[3, -3] == 0)
    roots = integer_roots(hilbert_polynomial(m))
    supernatural = natural and len(roots) == 3
    t_norm = -((c1 + 1) // 2)
    return ClassificationReport(
        chern=(c1, c2),
        buchsbaum_p=buchsbaum_index(mod),
        regularity_computed=reg,
        regularity_bound_cmr=cmr_bound(m),
        is_instanton=is_instanton,
        has_natural_cohomology=natural,
        is_supernatural=supernatural,
        is_tHooft=(c1 == 0 and table[0, 1] != 0),
        is_stable=(table[0, t_norm] == 0),
        h1_generation_degrees=h1_generation_degrees(mod),
        monad_is_minimal=monad_is_minimal(m),
    )


@dataclass
class AnalysisReport:
    monad_hash: str
    exactness: ExactnessReport
    table: CohomologyTable
    module: GradedH1Module
    classification: ClassificationReport
    timing: float

    def to_json(self) -> dict:
        return {
            "schema": "monadlab.analysis/1",
            "monad_sha256": self.monad_hash,
            "exactness": self.exactness.to_json(),
            "cohomology": self.table.to_json(),
            "h1_module": {str(t): d for t, d in self.module.dims().items()},
            "classification": self.classification.to_json(),
            "seconds": round(self.timing, 4),
        }


class CompositionError(MonadError):
    def __init__(self, witness):
        i, j, f = witness
        super().__init__(f"beta*alpha is not zero: entry [{i}][{j}] = {f}")
        self.witness = witness


class NotExactError(MonadError):
    def __init__(self, report: ExactnessReport):
        bad = [(name, v) for name, v in (("alpha", report.alpha_fiberwise_injective),
                                         ("beta", report.beta_fiberwise_surjective))
               if v.status not in ("proved", "probable")]
        msg = "; ".join(f"{name}: {v.status}" + (f" at {list(map(str, v.witness))}" if v.witness else "")
                        for name, v in bad)
        super().__init__(f"fiberwise exactness fails: {msg}")
        self.report = report


def monad_hash(m: MonadPresentation) -> str:
    return hashlib.sha256(serialize_monad(m).encode()).hexdigest()


def analyze_monad(m: MonadPresentation, window: tuple[int, int] | None = None,
                  exactness: str = "nullstellensatz",
                  max_degree: int = DEFAULT_NULLSTELLENSATZ_CAP) -> AnalysisReport:
    """validate -> fiberwise -> H^1 module -> table -> classify."""
    start = time.perf_counter()
    comp = check_composition(m)
    if not comp:
        raise CompositionError(comp.witness)
    report = check_fiberwise(m, mode=exactness, max_degree=max_degree)
    if not report.locally_free:
        raise NotExactError(report)
    mod = h1_module(m, report)
    table = cohomology_table(m, window=window, mod=mod)
    cls = classify(m, table, mod)
    return AnalysisReport(monad_hash(m), report, table, mod, cls, time.perf_counter() - start)
