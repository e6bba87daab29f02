"""Numerical and exact experiments on Diophantine behaviour of subgroups.

Distances to the identity are measured as the max-norm of logarithmic
coordinates.  Any two left-invariant Riemannian metrics are comparable to
this near the identity, so constants change but exponents do not.
"""

from __future__ import annotations

import contextlib
import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .bch import FreeGroupWord, letter_order
from .free_lie import (DomainError, LieElement, NilpotentAlgebra, basis_words, central_quotient,
                       format_scalar, iroot_ceil, witt_dimension)
from .linalg import EchelonBasis, minimax_residual
from .rep_theory import (Partition, glk_action, highest_weight_vectors, kw_multiplicity,
                         weyl_dim)

DEFAULT_SEED = 42
DEFAULT_M = 5
PRECISION_GUARD = 3


class PrecisionExhausted(ArithmeticError):
    """Distances reached the working precision; laws and near-laws cannot be separated."""


# ---------------------------------------------------------------------------
# word-ball decay

@dataclass(frozen=True)
class TupleSpec:
    group: NilpotentAlgebra
    points: tuple
    digits: int | None = None  # None: exact rational coordinates

    def __post_init__(self):
        for p in self.points:
            if len(p) != self.group.dimension:
                raise DomainError("point length differs from the group dimension")
        if self.digits is not None and self.digits < 1:
            raise DomainError("digits must be positive")

    @property
    def exact(self) -> bool:
        return self.digits is None


@dataclass(frozen=True)
class DecayRecord:
    n: int
    ball_size: int
    laws_excluded: int
    delta: object
    argmin_word: FreeGroupWord

    def row(self, digits: int = 30) -> list[str]:
        if isinstance(self.delta, Fraction):
            d = mpmath.nstr(mpmath.mpf(self.delta.numerator) / self.delta.denominator, digits)
        else:
            d = mpmath.nstr(self.delta, digits)
        return [str(self.n), str(self.ball_size), str(self.laws_excluded), d,
                str(self.argmin_word)]


DECAY_COLUMNS = ["n", "ball_size", "laws_excluded", "delta", "argmin_word"]


def _norm(v) -> object:
    return max((abs(x) for x in v), default=0)


def decay_series(t: TupleSpec, n_max: int) -> list[DecayRecord]:
    """delta_Gamma(n) for n = 1..n_max in one pass over the word ball."""
    if n_max < 1:
        raise DomainError("n must be >= 1")
    g = t.group
    k = len(t.points)
    if k < 1:
        raise DomainError("tuple needs at least one point")
    ctx = mpmath.workdps(t.digits) if t.digits else contextlib.nullcontext()
    with ctx:
        if t.exact:
            pts = [[Fraction(x) for x in p] for p in t.points]
            law_tol = None
        else:
            pts = [[mpmath.mpf(x) for x in p] for p in t.points]
            law_tol = mpmath.mpf(10) ** (-(t.digits // 2))
        letter_value = {}
        for gi, e in letter_order(k):
            letter_value[(gi, e)] = pts[gi - 1] if e == 1 else [-x for x in pts[gi - 1]]
        zero = [0 * pts[0][0]] * g.dimension
        seen = {tuple(zero)} if t.exact else None
        count = 1
        laws = 0
        best = None
        best_word: list = []
        level = [([], zero)]
        records = []
        for n in range(1, n_max + 1):
            nxt = []
            for word, val in level:
                last = word[-1] if word else None
                for letter in letter_order(k):
                    if last is not None and last == (letter[0], -letter[1]):
                        continue
                    v = g.bch(val, letter_value[letter])
                    w2 = word + [letter]
                    nxt.append((w2, v))
                    size = _norm(v)
                    if t.exact:
                        key = tuple(v)
                        if key not in seen:
                            seen.add(key)
                            count += 1
                        if size == 0:
                            laws += 1
                            continue
                    else:
                        count += 1
                        if size < law_tol:
                            laws += 1
                            continue
                    if best is None or size < best:
                        best, best_word = size, w2
            level = nxt
            if best is None:
                raise DomainError("every word evaluates to the identity")
            if not t.exact and best < law_tol * mpmath.mpf(10) ** PRECISION_GUARD:
                raise PrecisionExhausted(
                    f"delta {mpmath.nstr(best, 5)} within {PRECISION_GUARD} digits of the law threshold")
            records.append(DecayRecord(n, count, laws, best,
                                       FreeGroupWord.from_letters(best_word)))
    return records


def delta_gamma(t: TupleSpec, n: int) -> DecayRecord:
    """Least distance to the identity among nontrivial elements of the radius-n ball."""
    return decay_series(t, n)[-1]


def decay_csv(records: Iterable[DecayRecord], digits: int = 30) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(DECAY_COLUMNS)
    for r in records:
        w.writerow(r.row(digits))
    return buf.getvalue()


def read_decay_csv(text: str) -> list[DecayRecord]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(DecayRecord(int(row["n"]), int(row["ball_size"]), int(row["laws_excluded"]),
                               mpmath.mpf(row["delta"]), FreeGroupWord.parse(row["argmin_word"])))
    return out


def bass_guivarch_exponent(ranks: Sequence[int]) -> int:
    """Polynomial growth degree sum_i i * rank_i of a nilpotent group."""
    if any(r < 0 for r in ranks):
        raise DomainError("ranks must be non-negative")
    return sum(i * r for i, r in enumerate(ranks, start=1))


def free_nilpotent_tau(k: int, s: int) -> int:
    return bass_guivarch_exponent([witt_dimension(k, i) for i in range(1, s + 1)])


def fit_beta(records: Sequence[DecayRecord], tau: float) -> float:
    """Least-squares slope of log delta(n) against -tau log n."""
    pts = [(r.n, r.delta) for r in records if r.delta > 0 and r.n >= 1]
    if len({n for n, _ in pts}) < 3:
        raise DomainError("need at least 3 records with positive delta")
    if tau <= 0:
        raise DomainError("tau must be positive")
    x = np.array([-tau * math.log(n) for n, _ in pts])
    y = np.array([float(mpmath.log(mpmath.mpf(d.numerator) / d.denominator)
                        if isinstance(d, Fraction) else mpmath.log(d)) for _, d in pts])
    slope = np.polyfit(x, y, 1)[0]
    return float(slope)


# ---------------------------------------------------------------------------
# Liouville twisted submodules

def liouville_number(M: int = DEFAULT_M) -> Fraction:
    """Exact truncation sum_{j=1}^{M} 10^(-j!)."""
    if M < 1:
        raise DomainError("M must be >= 1")
    return sum((Fraction(1, 10 ** math.factorial(j)) for j in range(1, M + 1)), Fraction(0))


def liouville_convergent(m: int) -> tuple[int, int]:
    """(p, q) with p/q = sum_{j<=m} 10^(-j!) and q = 10^(m!)."""
    mf = math.factorial(m)
    return sum(10 ** (mf - math.factorial(j)) for j in range(1, m + 1)), 10 ** mf


@dataclass
class LiouvilleSetup:
    """A repeated module V1 + V2, the twist alpha: V1 -> V2 and L = {b + lam alpha(b)}.

    Vectors are coordinate lists over ``coords`` (top-degree Lyndon words,
    or plain indices for the toy model).
    """

    k: int
    s: int
    shape: Partition | None
    M: int
    lam: Fraction
    coords: tuple
    v1: list
    v2: list
    relations: list = field(default_factory=list)
    _unit_distance: Fraction | None = field(default=None, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.v1)

    def twisted_basis(self) -> list[list[Fraction]]:
        return [[a + self.lam * b for a, b in zip(x, y)] for x, y in zip(self.v1, self.v2)]

    def witness_vector(self) -> tuple[list, list]:
        return self.v1[0], self.v2[0]

    def unit_distance(self) -> Fraction:
        """Exact max-norm distance from alpha(x) to L_lambda."""
        if self._unit_distance is None:
            _, ax = self.witness_vector()
            value, _ = minimax_residual(ax, self.twisted_basis())
            self._unit_distance = value
        return self._unit_distance

    def lie_relations(self) -> list[LieElement]:
        if self.shape is None:
            raise DomainError("toy setup has no Lie algebra")
        return [LieElement(self.k, self.s, dict(zip(self.coords, vec)))
                for vec in self.twisted_basis()]


@dataclass(frozen=True)
class LiouvilleWitness:
    m: int
    p: int
    q: int
    word_length_bound: int
    distance: Fraction

    @property
    def log10_distance(self) -> float:
        return math.log10(self.distance.numerator) - math.log10(self.distance.denominator)

    def row(self) -> list[str]:
        return [str(self.m), str(self.p), str(self.q), str(self.word_length_bound),
                f"{self.log10_distance:.6f}"]


WITNESS_COLUMNS = ["m", "p", "q", "word_length_bound", "log10_distance"]


def _primitive(vec: Sequence[Fraction]) -> list[Fraction]:
    den = 1
    for c in vec:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in vec]
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    return [Fraction(a // g) for a in ints]


def _module_closure(k: int, seeds: tuple[LieElement, LieElement], coords):
    """Span the modules generated by both highest-weight vectors with the same
    lowering words, so that index-wise matching is a module isomorphism."""
    lowering = [(i, j) for j in range(1, k + 1) for i in range(j + 1, k + 1)]
    span = EchelonBasis(len(coords))
    b1: list = []
    b2: list = []
    queue = [seeds]
    span.add(seeds[0].vector(coords))
    b1.append(seeds[0].vector(coords))
    b2.append(seeds[1].vector(coords))
    while queue:
        a1, a2 = queue.pop(0)
        for i, j in lowering:
            c1 = glk_action(i, j, a1)
            if c1.is_zero():
                continue
            vec = c1.vector(coords)
            if span.add(vec):
                c2 = glk_action(i, j, a2)
                b1.append(vec)
                b2.append(c2.vector(coords))
                queue.append((c1, c2))
    return b1, b2


def liouville_submodule(k: int, s: int, shape: Sequence[int], M: int = DEFAULT_M) -> LiouvilleSetup:
    """Twist two copies of E^shape inside F_k^{[s]} by the truncated Liouville number."""
    shape = Partition(shape)
    if shape.size != s:
        raise DomainError("shape size must equal s")
    if shape.rows > k:
        raise DomainError("shape has more rows than generators")
    mult = kw_multiplicity(shape, 1) if s > 1 else 0
    if mult < 2:
        raise DomainError(f"{shape} has multiplicity {mult} in F_{k}^[{s}]; need >= 2")
    hwv = highest_weight_vectors(k, s, shape)
    if len(hwv) < 2:
        raise DomainError("fewer than two highest-weight vectors")
    coords = basis_words(k, s, s)
    seeds = []
    for v in hwv[:2]:
        prim = _primitive(v.vector(coords))
        seeds.append(LieElement(k, s, dict(zip(coords, prim))))
    b1, b2 = _module_closure(k, (seeds[0], seeds[1]), coords)
    expected = weyl_dim(shape, k)
    if len(b1) != expected:
        raise DomainError(f"module closure reached {len(b1)}, expected {expected}")
    setup = LiouvilleSetup(k, s, shape, M, liouville_number(M), tuple(coords), b1, b2)
    return setup


def liouville_toy(M: int = DEFAULT_M) -> LiouvilleSetup:
    """The plane with x = e1, alpha(x) = e2 and L = span(1, lam)."""
    one, zero = Fraction(1), Fraction(0)
    return LiouvilleSetup(1, 1, None, M, liouville_number(M), (0, 1),
                          [[one, zero]], [[zero, one]])


def liouville_decay(setup: LiouvilleSetup, m: int) -> LiouvilleWitness:
    """Integer point r = q x + p alpha(x) at exact max-norm distance |p - q lam| * d(alpha x, L)."""
    if not 1 <= m < setup.M:
        raise DomainError(f"m must satisfy 1 <= m < M = {setup.M}")
    x, ax = setup.witness_vector()
    if all(c == 0 for c in x):
        raise DomainError("degenerate witness vector")
    p, q = liouville_convergent(m)
    r = [q * a + p * b for a, b in zip(x, ax)]
    gap = abs(p - q * setup.lam)
    distance = gap * setup.unit_distance()
    bound = gap * max(abs(c) for c in ax)
    if not 0 < distance <= bound:
        raise ArithmeticError("witness distance outside (0, |p - q lam| * |alpha x|]")
    degree = setup.s if setup.shape is not None else 1
    wlb = iroot_ceil(max(abs(c) for c in r), degree)
    return LiouvilleWitness(m, p, q, wlb, distance)


def witness_element(setup: LiouvilleSetup, m: int) -> LieElement:
    """r_{p,q} as an element of F_{k,s}."""
    x, ax = setup.witness_vector()
    p, q = liouville_convergent(m)
    return LieElement(setup.k, setup.s,
                      {w: q * a + p * b for w, a, b in zip(setup.coords, x, ax)})


def liouville_quotient(setup: LiouvilleSetup) -> NilpotentAlgebra:
    """F_{k,s} / L_lambda with exact rational structure constants."""
    return central_quotient(setup.k, setup.s, setup.lie_relations())


def witness_csv(witnesses: Iterable[LiouvilleWitness]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(WITNESS_COLUMNS)
    for x in witnesses:
        w.writerow(x.row())
    return buf.getvalue()


# ---------------------------------------------------------------------------
# sublevel sets of polynomial maps

def chebyshev_T(d: int, x):
    """Chebyshev polynomial of the first kind by the three-term recurrence."""
    if d < 0:
        raise DomainError("degree must be >= 0")
    if d == 0:
        return x * 0 + 1
    prev, cur = x * 0 + 1, x
    for _ in range(d - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


@dataclass(frozen=True)
class RemezTrial:
    degree: int
    n1: int
    n2: int
    eps: float
    measure: float
    sup_norm: float
    bound: float

    @property
    def ratio(self) -> float:
        return self.measure / self.bound if self.bound > 0 else 0.0


@dataclass(frozen=True)
class RemezReport:
    trials: int
    max_ratio: float
    violations: int
    margin: float
    grid_points: int
    worst: RemezTrial | None = None

    def to_json(self) -> dict:
        return {"trials": self.trials, "max_ratio": round(self.max_ratio, 12),
                "violations": self.violations, "margin": self.margin,
                "grid_points": self.grid_points}


def sublevel_bound(eps: float, sup_norm: float, degree: int, n1: int, volume: float = 1.0) -> float:
    """4 n1 (eps / sup)^(1/d) |B|."""
    return 4 * n1 * (eps / sup_norm) ** (1.0 / degree) * volume


def _grid_values(coeffs: np.ndarray, per_axis: int) -> np.ndarray:
    """Evaluate sum c_a x^a on the midpoint grid of [0,1]^n1 by axis-wise contraction."""
    xs = (np.arange(per_axis) + 0.5) / per_axis
    deg = coeffs.shape[0] - 1
    powers = np.vstack([xs ** a for a in range(deg + 1)])  # (deg+1, per_axis)
    t = coeffs
    for _ in range(coeffs.ndim):
        t = np.tensordot(t, powers, axes=([0], [0]))
    return t


def _random_polynomial(rng: np.random.Generator, degree: int, n1: int) -> np.ndarray:
    shape = (degree + 1,) * n1
    c = rng.uniform(-1.0, 1.0, size=shape)
    idx = np.indices(shape).sum(axis=0)
    c[idx > degree] = 0.0
    return c


def remez_trial(rng: np.random.Generator, d_max: int, n1_max: int,
                grid_points: int = 10 ** 6) -> RemezTrial:
    degree = int(rng.integers(1, d_max + 1))
    n1 = int(rng.integers(1, n1_max + 1))
    n2 = int(rng.integers(1, 3))
    eps = float(10.0 ** (-rng.uniform(1.0, 6.0)))
    per_axis = math.ceil(round(grid_points ** (1.0 / n1), 9))
    norm = None
    for _ in range(n2):
        vals = np.abs(_grid_values(_random_polynomial(rng, degree, n1), per_axis))
        norm = vals if norm is None else np.maximum(norm, vals)
    sup = float(norm.max())
    measure = float(np.count_nonzero(norm <= eps)) / norm.size
    bound = sublevel_bound(eps, sup, degree, n1) if sup > 0 else math.inf
    return RemezTrial(degree, n1, n2, eps, measure, sup, bound)


def remez_check(trials: int, seed: int = DEFAULT_SEED, d_max: int = 5, n1_max: int = 3,
                grid_points: int = 10 ** 6, margin: float = 0.05) -> RemezReport:
    """Check |{x in B : |f(x)| <= eps}| <= 4 n1 (eps/|f|_B)^(1/d) |B| on random maps."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if d_max < 1 or n1_max < 1:
        raise DomainError("d_max and n1_max must be >= 1")
    rng = np.random.default_rng(seed)
    worst = None
    violations = 0
    for _ in range(trials):
        t = remez_trial(rng, d_max, n1_max, grid_points)
        if worst is None or t.ratio > worst.ratio:
            worst = t
        if t.ratio > 1 + margin:
            violations += 1
    return RemezReport(trials, worst.ratio, violations, margin, grid_points, worst)


def report_json(report: RemezReport) -> str:
    return json.dumps(report.to_json(), indent=2)


# ---------------------------------------------------------------------------
# presets used by the CLI and the acceptance suite

def heisenberg_tuple() -> TupleSpec:
    from .free_lie import heisenberg
    g = heisenberg()
    return TupleSpec(g, ((1, 0, 0), (0, 1, 0)))


def golden_tuple(digits: int = 50) -> TupleSpec:
    from .free_lie import abelian
    with mpmath.workdps(digits):
        phi = (1 + mpmath.sqrt(5)) / 2
    return TupleSpec(abelian(1), ((mpmath.mpf(1),), (phi,)), digits)


def scalar_text(x) -> str:
    return format_scalar(x)
