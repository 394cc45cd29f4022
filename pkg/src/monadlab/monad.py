"""Monads A --alpha--> B --beta--> C of sums of line bundles on P^3.

A, B, C are twist lists ((a_1, ..., a_r) stands for the sum of the O(a_i));
alpha is a b x a grid and beta a c x b grid of homogeneous forms, with
deg alpha[i][j] = B[i] - A[j] and deg beta[i][j] = C[i] - B[j].
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .exactalg import (LARGEST_PRIME_BELOW_2_31, ExactMatrix, Field, MalformedInputError,
                       PrimeField, QQ, block_matrix, cokernel_data, field_from_tag, rank)
from .polyring import (DegreeError, HomogeneousPoly, PolySyntaxError, dim_S, evaluate,
                       format_poly, multiplication_matrix, parse_poly)

DEFAULT_NULLSTELLENSATZ_CAP = 12


class MonadError(Exception):
    pass


class MonadSyntaxError(MonadError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class DegreeMismatchError(MonadError):
    pass


class MalformedMonadError(MonadError):
    pass


class GenerationError(MonadError):
    """A random construction did not produce a valid monad."""

    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


Grid = tuple[tuple[HomogeneousPoly, ...], ...]


def _perm(twists) -> list[int]:
    return sorted(range(len(twists)), key=lambda i: twists[i])


@dataclass(frozen=True, eq=False)
class MonadPresentation:
    field: Field
    A: tuple[int, ...]
    B: tuple[int, ...]
    C: tuple[int, ...]
    alpha: Grid
    beta: Grid
    name: str = ""
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        A, B, C = (tuple(int(x) for x in t) for t in (self.A, self.B, self.C))
        for label, t in (("A", A), ("B", B), ("C", C)):
            if not t:
                raise MalformedMonadError(f"twist list {label} is empty")
        alpha = tuple(tuple(r) for r in self.alpha)
        beta = tuple(tuple(r) for r in self.beta)
        if len(alpha) != len(B) or any(len(r) != len(A) for r in alpha):
            raise MalformedMonadError(f"alpha must be {len(B)} x {len(A)}")
        if len(beta) != len(C) or any(len(r) != len(B) for r in beta):
            raise MalformedMonadError(f"beta must be {len(C)} x {len(B)}")
        for name, grid, rows, cols in (("alpha", alpha, B, A), ("beta", beta, C, B)):
            for i, row in enumerate(grid):
                for j, f in enumerate(row):
                    if f.field != self.field:
                        raise MalformedMonadError(f"{name}[{i}][{j}] lives over {f.field!r}")
                    need = rows[i] - cols[j]
                    if f.is_zero():
                        continue
                    if f.degree != need:
                        raise DegreeMismatchError(
                            f"{name}[{i}][{j}] = {format_poly(f)} has degree {f.degree}, "
                            f"twists require {need}")
        if len(B) - len(A) - len(C) < 1:
            raise MalformedMonadError("rank b - a - c of the cohomology must be at least 1")
        # canonical form: twist lists ascending (stable), matrices permuted to match
        pa, pb, pc = _perm(A), _perm(B), _perm(C)
        A2 = tuple(A[i] for i in pa)
        B2 = tuple(B[i] for i in pb)
        C2 = tuple(C[i] for i in pc)

        def norm(f, d):
            return HomogeneousPoly.zero(self.field, d) if f.is_zero() else f

        alpha2 = tuple(tuple(norm(alpha[i][j], B2[r] - A2[s]) for s, j in enumerate(pa))
                       for r, i in enumerate(pb))
        beta2 = tuple(tuple(norm(beta[i][j], C2[r] - B2[s]) for s, j in enumerate(pb))
                      for r, i in enumerate(pc))
        object.__setattr__(self, "A", A2)
        object.__setattr__(self, "B", B2)
        object.__setattr__(self, "C", C2)
        object.__setattr__(self, "alpha", alpha2)
        object.__setattr__(self, "beta", beta2)

    @property
    def rank(self) -> int:
        return len(self.B) - len(self.A) - len(self.C)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonadPresentation):
            return NotImplemented
        return (self.field == other.field and self.A == other.A and self.B == other.B
                and self.C == other.C and self.alpha == other.alpha and self.beta == other.beta)

    def __hash__(self):
        return hash((self.field.tag, self.A, self.B, self.C, self.alpha, self.beta))


def dual_monad(m: MonadPresentation) -> MonadPresentation:
    """C^v --beta^T--> B^v --alpha^T--> A^v; its cohomology is E^v."""
    alpha_t = tuple(zip(*m.beta))
    beta_t = tuple(zip(*m.alpha))
    return MonadPresentation(m.field, tuple(-c for c in m.C), tuple(-b for b in m.B),
                             tuple(-a for a in m.A), alpha_t, beta_t, name=f"dual({m.name})")


# ---------------------------------------------------------------- file format

def serialize_monad(m: MonadPresentation) -> str:
    def grid(rows):
        inner = ",\n".join("    " + json.dumps([format_poly(f) for f in row]) for row in rows)
        return "[\n" + inner + "\n  ]"

    lines = []
    if m.name:
        lines.append(f'  "name": {json.dumps(m.name)}')
    lines += [
        f'  "field": {json.dumps(m.field.tag)}',
        f'  "A": {json.dumps(list(m.A))}',
        f'  "B": {json.dumps(list(m.B))}',
        f'  "C": {json.dumps(list(m.C))}',
        f'  "alpha": {grid(m.alpha)}',
        f'  "beta": {grid(m.beta)}',
    ]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def _locate(document: str, needle: str) -> tuple[int | None, int | None]:
    k = document.find(json.dumps(needle))
    if k < 0:
        return None, None
    line = document.count("\n", 0, k) + 1
    col = k - (document.rfind("\n", 0, k) + 1) + 1
    return line, col


def parse_monad(document: str) -> MonadPresentation:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MonadSyntaxError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict):
        raise MalformedMonadError("monad document must be a JSON object")
    missing = [k for k in ("A", "B", "C", "alpha", "beta") if k not in doc]
    if missing:
        raise MalformedMonadError(f"missing fields: {', '.join(missing)}")
    try:
        fld = field_from_tag(str(doc.get("field", "Q")))
    except MalformedInputError as exc:
        raise MalformedMonadError(str(exc)) from exc
    twists = {}
    for key in ("A", "B", "C"):
        t = doc[key]
        if not isinstance(t, list) or not t or not all(isinstance(x, int) and not isinstance(x, bool) for x in t):
            raise MalformedMonadError(f"{key} must be a non-empty list of integers")
        twists[key] = t
    A, B, C = twists["A"], twists["B"], twists["C"]

    def grid(key, rows, cols):
        g = doc[key]
        if not isinstance(g, list) or len(g) != len(rows) or any(
                not isinstance(r, list) or len(r) != len(cols) for r in g):
            raise MalformedMonadError(f"{key} must be a {len(rows)} x {len(cols)} array")
        out = []
        for i, row in enumerate(g):
            prow = []
            for j, text in enumerate(row):
                if isinstance(text, int) and not isinstance(text, bool):
                    text = str(text)
                if not isinstance(text, str):
                    raise MalformedMonadError(f"{key}[{i}][{j}] must be a polynomial string")
                need = rows[i] - cols[j]
                try:
                    prow.append(parse_poly(text, fld, degree=need))
                except PolySyntaxError as exc:
                    line, col = _locate(document, text)
                    if line is not None:
                        col = col + exc.column  # opening quote offset
                    raise MonadSyntaxError(f"{key}[{i}][{j}]: {exc.reason}", line, col) from exc
                except DegreeError as exc:
                    raise DegreeMismatchError(f"{key}[{i}][{j}]: {exc}") from exc
                except MalformedInputError as exc:
                    raise MalformedMonadError(f"{key}[{i}][{j}]: {exc}") from exc
            out.append(prow)
        return out

    alpha = grid("alpha", B, A)
    beta = grid("beta", C, B)
    return MonadPresentation(fld, tuple(A), tuple(B), tuple(C), alpha, beta,
                             name=str(doc.get("name", "")))


# ---------------------------------------------------------------- composition

@dataclass(frozen=True)
class CompositionResult:
    ok: bool
    witness: tuple[int, int, HomogeneousPoly] | None = None

    def __bool__(self):
        return self.ok


def compose(m: MonadPresentation) -> list[list[HomogeneousPoly]]:
    out = []
    for i in range(len(m.C)):
        row = []
        for j in range(len(m.A)):
            acc = HomogeneousPoly.zero(m.field, m.C[i] - m.A[j])
            for k in range(len(m.B)):
                prod = m.beta[i][k] * m.alpha[k][j]
                if not prod.is_zero():
                    acc = acc + prod
            row.append(acc)
        out.append(row)
    return out


def check_composition(m: MonadPresentation) -> CompositionResult:
    for i, row in enumerate(compose(m)):
        for j, f in enumerate(row):
            if not f.is_zero():
                return CompositionResult(False, (i, j, f))
    return CompositionResult(True)


# ---------------------------------------------------------------- sections

def sections_matrix(field: Field, grid, source: tuple[int, ...], target: tuple[int, ...],
                    t: int) -> ExactMatrix:
    """Matrix of H^0 of (sum O(source)) -> (sum O(target)) twisted by t."""
    rs = [dim_S(x + t) for x in target]
    cs = [dim_S(x + t) for x in source]
    blocks = {}
    for i in range(len(target)):
        if not rs[i]:
            continue
        for j in range(len(source)):
            f = grid[i][j]
            if cs[j] and not f.is_zero():
                blocks[(i, j)] = multiplication_matrix(f, source[j] + t)
    return block_matrix(field, rs, cs, blocks)


def alpha_transpose(m: MonadPresentation):
    return tuple(zip(*m.alpha))


def cached_cokernel(m: MonadPresentation, which: str, t: int):
    """Cokernel data of H^0(beta(t)) ('beta') or H^0(alpha^T(t)) ('alpha^T')."""
    key = (which, t)
    if key not in m._cache:
        if which == "beta":
            mat = sections_matrix(m.field, m.beta, m.B, m.C, t)
        else:
            mat = sections_matrix(m.field, alpha_transpose(m), tuple(-b for b in m.B),
                                  tuple(-a for a in m.A), t)
        m._cache[key] = (mat.shape, cokernel_data(mat))
    return m._cache[key]


# ---------------------------------------------------------------- fiberwise exactness

PROVED, REFUTED, PROBABLE, INDETERMINATE = "proved", "refuted", "probable", "indeterminate"


@dataclass(frozen=True)
class MapVerdict:
    status: str
    witness: tuple | None = None
    degree_reached: int | None = None
    trials: int = 0
    confidence: float | None = None

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": None if self.witness is None else [str(x) for x in self.witness],
            "degree_reached": self.degree_reached,
            "trials": self.trials,
            "confidence": self.confidence,
        }


@dataclass(frozen=True)
class ExactnessReport:
    alpha_fiberwise_injective: MapVerdict
    beta_fiberwise_surjective: MapVerdict
    method: str

    @property
    def locally_free(self) -> bool:
        return all(v.status in (PROVED, PROBABLE)
                   for v in (self.alpha_fiberwise_injective, self.beta_fiberwise_surjective))

    @property
    def refuted(self) -> bool:
        return REFUTED in (self.alpha_fiberwise_injective.status, self.beta_fiberwise_surjective.status)

    @property
    def indeterminate(self) -> bool:
        return INDETERMINATE in (self.alpha_fiberwise_injective.status,
                                 self.beta_fiberwise_surjective.status)

    def to_json(self) -> dict:
        return {"method": self.method,
                "alpha_fiberwise_injective": self.alpha_fiberwise_injective.to_json(),
                "beta_fiberwise_surjective": self.beta_fiberwise_surjective.to_json()}


def special_points() -> list[tuple[int, int, int, int]]:
    """The 4 coordinate points and one point on each of the 6 coordinate lines."""
    pts = []
    for i in range(4):
        e = [0, 0, 0, 0]
        e[i] = 1
        pts.append(tuple(e))
    for i, j in combinations(range(4), 2):
        e = [0, 0, 0, 0]
        e[i] = e[j] = 1
        pts.append(tuple(e))
    return pts


def _rank_at(field: Field, grid, point) -> int:
    vals = [[evaluate(f, point) for f in row] for row in grid]
    if not vals or not vals[0]:
        return 0
    return rank(ExactMatrix.from_rows(field, vals))


def _drops_rank(m: MonadPresentation, which: str, point) -> bool:
    if which == "alpha":
        return _rank_at(m.field, m.alpha, point) < len(m.A)
    return _rank_at(m.field, m.beta, point) < len(m.C)


def _nullstellensatz(m: MonadPresentation, which: str, cap: int) -> MapVerdict:
    # Fiberwise surjectivity of a map F -> G of line-bundle sums is equivalent to
    # the graded cokernel vanishing in some degree past its generators; for a
    # single target summand this is exactly "every monomial of degree N lies in
    # the ideal of the entries", and in general the support of the cokernel is
    # the zero locus of the maximal minors.
    if which == "alpha":
        grid, target = alpha_transpose(m), tuple(-a for a in m.A)
    else:
        grid, target = m.beta, m.C
    degs = [f.degree for row in grid for f in row if not f.is_zero()]
    if not degs:
        return MapVerdict(INDETERMINATE, degree_reached=None)
    tmax, tmin = max(target), min(target)
    start = max(min(degs), tmax - tmin, 0)
    which_key = "alpha^T" if which == "alpha" else "beta"
    for n in range(start, cap + 1):
        t = n - tmax
        (rows, _), cok = cached_cokernel(m, which_key, t)
        if cok.dim == 0:
            return MapVerdict(PROVED, degree_reached=n)
    return MapVerdict(INDETERMINATE, degree_reached=cap)


def _random_points(m: MonadPresentation, rng: random.Random, trials: int):
    if isinstance(m.field, PrimeField):
        q = m.field.q
        for _ in range(trials):
            pt = tuple(rng.randrange(q) for _ in range(4))
            if any(pt):
                yield pt
    else:
        h = LARGEST_PRIME_BELOW_2_31
        for _ in range(trials):
            pt = tuple(rng.randint(-h, h) for _ in range(4))
            if any(pt):
                yield pt


def check_fiberwise(m: MonadPresentation, mode: str = "nullstellensatz",
                    max_degree: int = DEFAULT_NULLSTELLENSATZ_CAP, trials: int = 50,
                    seed: int = 0) -> ExactnessReport:
    """Decide whether alpha is injective and beta surjective at every point of P^3."""
    if mode not in ("nullstellensatz", "probabilistic"):
        raise ValueError(f"unknown exactness mode {mode!r}")
    key = ("fiberwise", mode, max_degree, trials, seed)
    if key in m._cache:
        return m._cache[key]
    verdicts = {}
    rng = random.Random(seed)
    for which in ("alpha", "beta"):
        witness = next((p for p in special_points() if _drops_rank(m, which, p)), None)
        if witness is not None:
            verdicts[which] = MapVerdict(REFUTED, witness=witness)
            continue
        if mode == "nullstellensatz":
            verdicts[which] = _nullstellensatz(m, which, max_degree)
            continue
        grid = m.alpha if which == "alpha" else m.beta
        size = len(m.A) if which == "alpha" else len(m.C)
        dmax = size * max([f.degree for row in grid for f in row if not f.is_zero()] or [0])
        count = 0
        for pt in _random_points(m, rng, trials):
            count += 1
            if _drops_rank(m, which, pt):
                witness = pt
                break
        if witness is not None:
            verdicts[which] = MapVerdict(REFUTED, witness=witness, trials=count)
        else:
            q = m.field.q if isinstance(m.field, PrimeField) else LARGEST_PRIME_BELOW_2_31
            conf = 1.0 - (dmax / q) ** count
            verdicts[which] = MapVerdict(PROBABLE, trials=count, confidence=conf)
    report = ExactnessReport(verdicts["alpha"], verdicts["beta"], mode)
    m._cache[key] = report
    return report


# ---------------------------------------------------------------- builtin examples

def _grid(field: Field, rows) -> list[list[HomogeneousPoly]]:
    return [[parse_poly(s, field) for s in row] for row in rows]


def nullcorrelation(field: Field = QQ) -> MonadPresentation:
    alpha = _grid(field, [["x"], ["y"], ["z"], ["w"]])
    beta = _grid(field, [["-y", "x", "-w", "z"]])
    return MonadPresentation(field, (-1,), (0, 0, 0, 0), (1,), alpha, beta, name="nullcorrelation")


def ein(field: Field = QQ) -> MonadPresentation:
    alpha = _grid(field, [["-z^2"], ["-w^2"], ["x"], ["y"]])
    beta = _grid(field, [["x", "y", "z^2", "w^2"]])
    return MonadPresentation(field, (-2,), (0, 0, -1, -1), (1,), alpha, beta, name="ein")


BUILTIN_NAMES = ("nullcorrelation", "ein", "instanton-sample", "thooft-sample", "gnc-E", "gnc-F")


def builtin_example(name: str, field: Field = QQ, **params) -> MonadPresentation:
    """Named monads: the two explicit ones plus seeded random families."""
    if name == "nullcorrelation":
        return nullcorrelation(field)
    if name == "ein":
        return ein(field)
    from . import sampler  # sampler builds on this module

    seed = int(params.get("seed", 0))
    if name in ("instanton-sample", "thooft-sample"):
        k = int(params.get("k", params.get("charge", 1)))
        cfg = sampler.SampleConfig(charge=k, field=field, seed=seed,
                                   thooft=(name == "thooft-sample"))
        return sampler.sample_instanton(cfg)
    if name in ("gnc-E", "gnc-F"):
        try:
            a, b, d = (int(params[x]) for x in ("a", "b", "d"))
        except KeyError as exc:
            raise ValueError(f"{name} needs parameters a, b, d") from exc
        cfg = sampler.SampleConfig(field=field, seed=seed, shape=(a, b, d), variant=name[-1])
        return sampler.sample_gnc(cfg)
    raise ValueError(f"unknown example {name!r}; known: {', '.join(BUILTIN_NAMES)}")
