"""Seeded random monads: charge-k instantons and generalized nullcorrelation bundles.

Instanton monads O(-1)^k -> O^{2k+2} -> O(1)^k need alpha with
alpha^T J alpha = 0 for a symplectic J, otherwise beta*alpha = 0 has no
useful solutions once k >= 4.  Writing alpha = sum_i A_i x_i, the condition
on the quadric coefficients pairs column c with column c' bilinearly, so the
columns are drawn one at a time, each from the solution space of a linear
system in the previous ones.  beta is then a random point of the linear
solution space of beta*alpha = 0.
"""
from __future__ import annotations

import os
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .exactalg import (LARGEST_PRIME_BELOW_2_31, ExactMatrix, Field, GF, QQ, kernel_matrix)
from .monad import (DEFAULT_NULLSTELLENSATZ_CAP, GenerationError, MonadPresentation, check_composition, check_fiberwise,
                    sections_matrix)
from .polyring import HomogeneousPoly, dim_S

MASK64 = (1 << 64) - 1
SURVEY_FIELD = GF(LARGEST_PRIME_BELOW_2_31)


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def split_seed(master: int, index: int) -> int:
    """Per-trial seed: splitmix64(splitmix64(master) xor index)."""
    return splitmix64(splitmix64(master & MASK64) ^ (index & MASK64))


@dataclass
class SampleConfig:
    charge: int | None = None
    shape: tuple[int, int, int] | None = None  # (a, b, d) for generalized nullcorrelation
    variant: str = "E"
    field: Field = QQ
    seed: int = 0
    max_resamples: int = 25
    height: int = 9
    thooft: bool = False
    exactness: str = "nullstellensatz"
    # draws not proved exact by this degree are resampled (None: per family default)
    validation_degree: int | None = None


def _rand(field: Field, rng: random.Random, height: int):
    return field(field.random_element(rng, height))


def _random_combination(field: Field, basis: ExactMatrix, rng, height) -> list:
    coeffs = [_rand(field, rng, height) for _ in range(basis.ncols)]
    vec = basis @ ExactMatrix.from_rows(field, [[c] for c in coeffs], 1)
    return [row[0] for row in vec.tolist()]


def _clear_denominators(field: Field, vec: list) -> list:
    if field is not QQ and field != QQ:
        return vec
    den = lcm(*[Fraction(x).denominator for x in vec]) if vec else 1
    ints = [int(Fraction(x) * den) for x in vec]
    g = gcd(*ints) if any(ints) else 1
    return [Fraction(x, g) for x in ints]


def random_form(field: Field, degree: int, rng, height: int = 9) -> HomogeneousPoly:
    if degree < 0:
        return HomogeneousPoly.zero(field, degree)
    return HomogeneousPoly(field, degree, tuple(_rand(field, rng, height) for _ in range(dim_S(degree))))


def solve_beta(field: Field, alpha, A, B, C, rng, height: int = 9):
    """Random beta with beta*alpha = 0 in the degrees forced by the twists, or None."""
    alpha_t = tuple(zip(*alpha))
    rows = []
    for ci in C:
        system = sections_matrix(field, alpha_t, tuple(-b for b in B), tuple(-a for a in A), ci)
        ker = kernel_matrix(system)
        if ker.ncols == 0:
            return None
        vec = _clear_denominators(field, _random_combination(field, ker, rng, height))
        row, off = [], 0
        for b in B:
            n = dim_S(ci - b)
            row.append(HomogeneousPoly(field, ci - b, tuple(field(x) for x in vec[off:off + n]))
                       if n else HomogeneousPoly.zero(field, ci - b))
            off += n
        rows.append(row)
    return rows


def _omega_row(a: np.ndarray, h: int) -> list:
    """Coefficients of v -> a^T J v, J = [[0, I], [-I, 0]] with blocks of size h."""
    out = [None] * (2 * h)
    for r in range(h):
        out[r + h] = a[r]
        out[r] = -a[r + h]
    return out


def isotropic_columns(field: Field, n: int, count: int, rng, height: int = 9) -> list[list[list]]:
    """Columns c_j = sum_i a[j][i] x_i in K^n with omega(c_j, c_l) = 0 identically."""
    h = n // 2
    cols: list[list[list]] = []
    for c in range(count):
        if not cols:
            vec = [_rand(field, rng, height) for _ in range(4 * n)]
        else:
            eqs = []
            for prev in cols:
                for i in range(4):
                    for i2 in range(i, 4):
                        row = [field.zero] * (4 * n)
                        w = _omega_row(prev[i], h)
                        for s in range(n):
                            row[i2 * n + s] = field(row[i2 * n + s] + w[s])
                        if i2 != i:
                            w2 = _omega_row(prev[i2], h)
                            for s in range(n):
                                row[i * n + s] = field(row[i * n + s] + w2[s])
                        eqs.append(row)
            ker = kernel_matrix(ExactMatrix.from_rows(field, eqs, 4 * n))
            if ker.ncols <= c:
                raise GenerationError(f"no new isotropic column at step {c}")
            vec = _random_combination(field, ker, rng, height)
        vec = _clear_denominators(field, vec)
        cols.append([vec[i * n:(i + 1) * n] for i in range(4)])
    return cols


def _linear(field: Field, coeffs) -> HomogeneousPoly:
    return HomogeneousPoly(field, 1, tuple(field(c) for c in coeffs))


def _alpha_from_columns(field: Field, cols, n: int):
    return [[_linear(field, [col[i][r] for i in range(4)]) for col in cols] for r in range(n)]


def _thooft_alpha(field: Field, k: int, rng, height: int):
    """alpha' N with alpha' carrying k+1 pairs of linear forms on hyperbolic planes.

    The k+1 columns of alpha' are isotropic and degenerate on k+1 lines, so
    E(1) picks up the section coming from the column of alpha' outside im N.
    """
    n = 2 * k + 2
    h = k + 1
    zero = HomogeneousPoly.zero(field, 1)
    prime = [[zero] * h for _ in range(n)]
    for j in range(h):
        prime[j][j] = random_form(field, 1, rng, height)
        prime[j + h][j] = random_form(field, 1, rng, height)
    mix = [[_rand(field, rng, height) for _ in range(k)] for _ in range(h)]
    alpha = []
    for r in range(n):
        row = []
        for c in range(k):
            acc = zero
            for j in range(h):
                if mix[j][c] and not prime[r][j].is_zero():
                    acc = acc + prime[r][j].scale(mix[j][c])
            row.append(acc)
        alpha.append(row)
    return alpha


def _symplectic_beta(field: Field, alpha, k: int):
    # beta = alpha^T J
    h = k + 1
    beta = []
    for c in range(k):
        row = [None] * (2 * h)
        for r in range(h):
            row[r + h] = alpha[r][c]
            row[r] = -alpha[r + h][c]
        beta.append(row)
    return beta


# valid instanton draws for k <= 6 prove at degree 3; gnc ones can need the full cap
INSTANTON_VALIDATION_DEGREE = 4


def _validate(m: MonadPresentation, cfg: SampleConfig, cap: int):
    comp = check_composition(m)
    if not comp:
        return f"composition fails at {comp.witness[:2]}"
    rep = check_fiberwise(m, mode=cfg.exactness, max_degree=cap)
    if not rep.locally_free:
        return (f"fiberwise: alpha {rep.alpha_fiberwise_injective.status}, "
                f"beta {rep.beta_fiberwise_surjective.status}")
    return None


def sample_instanton(cfg: SampleConfig) -> MonadPresentation:
    k = cfg.charge
    if k is None or k < 1:
        raise ValueError("instanton sampling needs a charge k >= 1")
    field = cfg.field
    rng = random.Random(cfg.seed)
    n = 2 * k + 2
    A, B, C = (-1,) * k, (0,) * n, (1,) * k
    last = None
    for attempt in range(cfg.max_resamples):
        try:
            if cfg.thooft:
                alpha = _thooft_alpha(field, k, rng, cfg.height)
                beta = _symplectic_beta(field, alpha, k)
            else:
                alpha = _alpha_from_columns(field, isotropic_columns(field, n, k, rng, cfg.height), n)
                beta = solve_beta(field, alpha, A, B, C, rng, cfg.height)
        except GenerationError as exc:
            last = str(exc)
            continue
        if beta is None:
            last = "beta*alpha = 0 has only the zero solution"
            continue
        kind = "thooft" if cfg.thooft else "instanton"
        m = MonadPresentation(field, A, B, C, alpha, beta, name=f"{kind}-k{k}-seed{cfg.seed}")
        last = _validate(m, cfg, cfg.validation_degree or INSTANTON_VALIDATION_DEGREE)
        if last is None:
            return m
    raise GenerationError(f"charge {k}: {cfg.max_resamples} resamples exhausted", last)


def sample_gnc(cfg: SampleConfig) -> MonadPresentation:
    if cfg.shape is None:
        raise ValueError("generalized nullcorrelation sampling needs (a, b, d)")
    a, b, d = cfg.shape
    if not (d > b >= a >= 0):
        raise ValueError(f"need d > b >= a >= 0, got a={a}, b={b}, d={d}")
    if cfg.variant not in ("E", "F"):
        raise ValueError("variant must be 'E' or 'F'")
    field = cfg.field
    rng = random.Random(cfg.seed)
    if cfg.variant == "E":
        A, B = (-d,), (-b, -a, a, b)
    else:
        A, B = (-d - 1,), (-b - 1, -a - 1, a, b)
    C = (d,)
    last = None
    for attempt in range(cfg.max_resamples):
        alpha = [[random_form(field, bi - A[0], rng, cfg.height)] for bi in B]
        beta = solve_beta(field, alpha, A, B, C, rng, cfg.height)
        if beta is None:
            last = "beta*alpha = 0 has only the zero solution"
            continue
        m = MonadPresentation(field, A, B, C, alpha, beta,
                              name=f"gnc-{cfg.variant}({a},{b},{d})-seed{cfg.seed}")
        last = _validate(m, cfg, cfg.validation_degree or DEFAULT_NULLSTELLENSATZ_CAP)
        if last is None:
            return m
    raise GenerationError(f"gnc-{cfg.variant}({a},{b},{d}): resamples exhausted", last)


def sample(cfg: SampleConfig) -> MonadPresentation:
    return sample_gnc(cfg) if cfg.shape is not None else sample_instanton(cfg)


@dataclass
class TrialRecord:
    index: int
    seed: int
    buchsbaum_p: int | None = None
    regularity: int | None = None
    natural: bool = False
    supernatural: bool = False
    thooft: bool = False
    stable: bool = False
    h1_dims: dict = dc_field(default_factory=dict)
    error: str | None = None


@dataclass
class SurveyResult:
    trials_requested: int
    trials_valid: int
    histogram: dict[int, int]
    flag_counts: dict[str, int]
    outlier_seeds: list[int]
    records: list[TrialRecord]
    expected_p: int | None = None

    def to_json(self) -> dict:
        return {
            "schema": "monadlab.survey/1",
            "trials_requested": self.trials_requested,
            "trials_valid": self.trials_valid,
            "expected_p": self.expected_p,
            "histogram": {str(p): c for p, c in sorted(self.histogram.items())},
            "flag_counts": self.flag_counts,
            "outlier_seeds": self.outlier_seeds,
            "trials": [
                {"index": r.index, "seed": r.seed, "buchsbaum_p": r.buchsbaum_p,
                 "regularity": r.regularity, "natural": r.natural,
                 "supernatural": r.supernatural, "tHooft": r.thooft, "stable": r.stable,
                 "h1": {str(t): d for t, d in r.h1_dims.items()}, "error": r.error}
                for r in self.records
            ],
        }


def run_trial(cfg: SampleConfig, index: int) -> TrialRecord:
    from .analysis import analyze_monad
    from .monad import MonadError

    seed = split_seed(cfg.seed, index)
    trial_cfg = SampleConfig(**{**cfg.__dict__, "seed": seed})
    rec = TrialRecord(index=index, seed=seed)
    try:
        m = sample(trial_cfg)
        rep = analyze_monad(m, exactness=cfg.exactness)
    except (MonadError, ValueError) as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
        return rec
    c = rep.classification
    rec.buchsbaum_p = c.buchsbaum_p
    rec.regularity = c.regularity_computed
    rec.natural = c.has_natural_cohomology
    rec.supernatural = c.is_supernatural
    rec.thooft = c.is_tHooft
    rec.stable = c.is_stable
    rec.h1_dims = rep.module.dims()
    return rec


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("MONADLAB_THREADS", "1")))
    except ValueError:
        return 1


def survey(cfg: SampleConfig, trials: int) -> SurveyResult:
    from .analysis import generic_bounds

    if trials < 1:
        raise ValueError("trials must be >= 1")
    workers = min(thread_cap(), trials)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_trial, [cfg] * trials, range(trials)))
    else:
        records = [run_trial(cfg, i) for i in range(trials)]
    records.sort(key=lambda r: r.index)
    valid = [r for r in records if r.error is None]
    hist = Counter(r.buchsbaum_p for r in valid)
    if cfg.shape is None and not cfg.thooft:
        expected = generic_bounds(cfg.charge).lower_p
    else:
        expected = hist.most_common(1)[0][0] if hist else None
    flags = {
        "natural": sum(r.natural for r in valid),
        "supernatural": sum(r.supernatural for r in valid),
        "tHooft": sum(r.thooft for r in valid),
        "stable": sum(r.stable for r in valid),
        "failed": len(records) - len(valid),
    }
    outliers = [r.seed for r in valid if r.buchsbaum_p != expected]
    return SurveyResult(trials, len(valid), dict(sorted(hist.items())), flags, outliers, records,
                        expected)
