"""Free s-step nilpotent Lie algebras F_{k,s} over Q in the Lyndon basis.

A basis element is identified with its Lyndon word (a tuple of generator
indices, 1-based); its bracketing is the standard factorization w = uv
where v is the longest proper Lyndon suffix.  Lie elements are sparse
maps word -> coefficient.

Bracket rewriting goes through the free associative algebra: the
expansion of the standard bracketing P_w equals w plus lexicographically
larger words of the same multidegree, so any Lie polynomial can be peeled
back into the Lyndon basis by repeatedly removing its smallest word.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .linalg import EchelonBasis, rref

Word = tuple  # tuple[int, ...]


class DomainError(ValueError):
    """Raised when an operation is called outside its mathematical domain."""


# ---------------------------------------------------------------------------
# Lyndon words

def is_lyndon(w: Sequence[int]) -> bool:
    w = tuple(w)
    return len(w) > 0 and all(w < w[i:] + w[:i] for i in range(1, len(w)))


def lyndon_words(k: int, n: int) -> Iterator[Word]:
    """All Lyndon words of length <= n over 1..k in lexicographic order (Duval)."""
    if k < 1 or n < 1:
        return
    w = [0]
    while w:
        w[-1] += 1
        yield tuple(x for x in w)
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k:
            w.pop()


@functools.lru_cache(maxsize=None)
def standard_factorization(w: Word) -> tuple[Word, Word]:
    """Split a Lyndon word of length >= 2 as (u, v), v its longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise DomainError(f"{w} has no standard factorization")


@functools.lru_cache(maxsize=None)
def bracketing(w: Word):
    """Nested pair structure of P_w; letters are ints."""
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return (bracketing(u), bracketing(v))


def multidegree(w: Sequence[int], k: int) -> tuple[int, ...]:
    counts = [0] * k
    for a in w:
        counts[a - 1] += 1
    return tuple(counts)


def word_str(w: Sequence[int]) -> str:
    if any(a > 9 for a in w):
        return ".".join(str(a) for a in w)
    return "".join(str(a) for a in w)


def parse_word(text: str) -> Word:
    text = text.strip()
    if "." in text:
        return tuple(int(a) for a in text.split("."))
    if not text.isdigit():
        raise DomainError(f"malformed basis word {text!r}")
    return tuple(int(a) for a in text)


def bracket_str(w: Word) -> str:
    def fmt(t):
        if isinstance(t, int):
            return f"x{t}"
        return f"[{fmt(t[0])},{fmt(t[1])}]"
    return fmt(bracketing(w))


@dataclass(frozen=True)
class BasisBracket:
    word: Word
    bracketing: object
    multidegree: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return bracket_str(self.word)


def mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def witt_dimension(k: int, s: int) -> int:
    """Dimension of the degree-s layer of the free Lie algebra on k generators."""
    if k < 1 or s < 1:
        raise DomainError("witt_dimension needs k >= 1 and s >= 1")
    total = sum(mobius(d) * k ** (s // d) for d in divisors(s))
    assert total % s == 0
    return total // s


def lyndon_basis(k: int, s: int) -> list[list[BasisBracket]]:
    """Basis brackets of F_{k,s}, grouped by degree 1..s."""
    if k < 1 or s < 1:
        raise DomainError("lyndon_basis needs k >= 1 and s >= 1")
    layers: list[list[BasisBracket]] = [[] for _ in range(s)]
    for w in lyndon_words(k, s):
        layers[len(w) - 1].append(BasisBracket(w, bracketing(w), multidegree(w, k)))
    return layers


@functools.lru_cache(maxsize=None)
def _basis_words(k: int, s: int) -> tuple[Word, ...]:
    return tuple(sorted(lyndon_words(k, s), key=lambda w: (len(w), w)))


def basis_words(k: int, s: int, degree: int | None = None) -> tuple[Word, ...]:
    """Lyndon words of F_{k,s} ordered by (degree, lexicographic)."""
    words = _basis_words(k, s)
    if degree is None:
        return words
    return tuple(w for w in words if len(w) == degree)


# ---------------------------------------------------------------------------
# associative expansions and rewriting

@functools.lru_cache(maxsize=None)
def expand(w: Word) -> dict:
    """Expansion of P_w in the free associative algebra (integer coefficients)."""
    if len(w) == 1:
        return {w: 1}
    u, v = standard_factorization(w)
    eu, ev = expand(u), expand(v)
    out: dict = {}
    for a, ca in eu.items():
        for b, cb in ev.items():
            c = ca * cb
            out[a + b] = out.get(a + b, 0) + c
            out[b + a] = out.get(b + a, 0) - c
    return {x: c for x, c in out.items() if c}


def rewrite_lie(poly: Mapping[Word, object]) -> dict:
    """Express a Lie polynomial, given in the free associative algebra, in the Lyndon basis.

    Raises DomainError when ``poly`` is not a Lie polynomial.
    """
    p = {w: c for w, c in poly.items() if c != 0}
    out: dict = {}
    while p:
        w = min(p)
        c = p[w]
        if not is_lyndon(w):
            raise DomainError(f"not a Lie polynomial (leading word {word_str(w)})")
        out[w] = c
        for x, e in expand(w).items():
            v = p.get(x, 0) - c * e
            if v == 0:
                p.pop(x, None)
            else:
                p[x] = v
    return out


@functools.lru_cache(maxsize=None)
def basis_bracket(u: Word, v: Word) -> tuple:
    """[P_u, P_v] in the Lyndon basis as a tuple of (word, int) pairs (untruncated)."""
    if u == v:
        return ()
    if u > v:
        return tuple((w, -c) for w, c in basis_bracket(v, u))
    # uv is Lyndon and its standard factorization is (u, v) exactly when
    # v is the longest Lyndon suffix; that case needs no rewriting
    if is_lyndon(u + v) and standard_factorization(u + v) == (u, v):
        return ((u + v, 1),)
    eu, ev = expand(u), expand(v)
    prod: dict = {}
    for a, ca in eu.items():
        for b, cb in ev.items():
            c = ca * cb
            prod[a + b] = prod.get(a + b, 0) + c
            prod[b + a] = prod.get(b + a, 0) - c
    return tuple(sorted(rewrite_lie(prod).items()))


# ---------------------------------------------------------------------------
# Lie elements

def _coerce(c):
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    return c


class LieElement:
    """Immutable sparse element of F_{k,s} in the Lyndon basis."""

    __slots__ = ("k", "s", "_terms", "_hash")

    def __init__(self, k: int, s: int, terms: Mapping[Word, object] | None = None):
        if k < 1 or s < 1:
            raise DomainError("LieElement needs k >= 1 and s >= 1")
        clean = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            if not w or len(w) > s or max(w) > k or min(w) < 1:
                raise DomainError(f"word {w} outside F_{{{k},{s}}}")
            if not is_lyndon(w):
                raise DomainError(f"word {word_str(w)} is not Lyndon")
            c = _coerce(c)
            if c != 0:
                clean[w] = c
        self.k = k
        self.s = s
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def generator(cls, k: int, s: int, i: int) -> "LieElement":
        return cls(k, s, {(i,): 1})

    @classmethod
    def basis(cls, k: int, s: int, w: Sequence[int]) -> "LieElement":
        return cls(k, s, {tuple(w): 1})

    @classmethod
    def zero(cls, k: int, s: int) -> "LieElement":
        return cls(k, s)

    @classmethod
    def _raw(cls, k, s, terms) -> "LieElement":
        obj = cls.__new__(cls)
        obj.k, obj.s, obj._terms, obj._hash = k, s, terms, None
        return obj

    @property
    def terms(self) -> Mapping[Word, object]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda t: (len(t[0]), t[0]))

    def coeff(self, w: Sequence[int]):
        return self._terms.get(tuple(w), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def _check(self, other: "LieElement") -> None:
        if not isinstance(other, LieElement):
            raise TypeError(f"expected LieElement, got {type(other).__name__}")
        if (self.k, self.s) != (other.k, other.s):
            raise DomainError(
                f"mismatched algebras F_{{{self.k},{self.s}}} and F_{{{other.k},{other.s}}}")

    def __add__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            v = out.get(w, 0) + c
            if v == 0:
                out.pop(w, None)
            else:
                out[w] = v
        return LieElement._raw(self.k, self.s, out)

    def __neg__(self) -> "LieElement":
        return LieElement._raw(self.k, self.s, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def scale(self, t) -> "LieElement":
        t = _coerce(t)
        if t == 0:
            return LieElement._raw(self.k, self.s, {})
        return LieElement._raw(self.k, self.s, {w: c * t for w, c in self._terms.items()})

    def __mul__(self, t) -> "LieElement":
        if isinstance(t, LieElement):
            return NotImplemented
        return self.scale(t)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return (self.k, self.s) == (other.k, other.s) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.k, self.s, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"LieElement(k={self.k}, s={self.s}, {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.items():
            parts.append(f"{c}*{bracket_str(w)}")
        return " + ".join(parts)

    def degree_component(self, i: int) -> "LieElement":
        return LieElement._raw(self.k, self.s,
                               {w: c for w, c in self._terms.items() if len(w) == i})

    def truncate(self, s: int) -> "LieElement":
        """Image in F_{k,s'} for s' <= s (drops higher degrees)."""
        return LieElement._raw(self.k, s, {w: c for w, c in self._terms.items() if len(w) <= s})

    def lift(self, k: int, s: int) -> "LieElement":
        """Same element viewed in a larger F_{k',s'}."""
        if k < self.k or s < self.s:
            raise DomainError("lift only enlarges (k, s)")
        return LieElement._raw(k, s, dict(self._terms))

    def vector(self, words: Sequence[Word]) -> list:
        return [self._terms.get(w, Fraction(0)) for w in words]

    def to_records(self) -> list[dict]:
        return [{"word": word_str(w), "coeff": format_scalar(c)} for w, c in self.items()]

    @classmethod
    def from_records(cls, k: int, s: int, records: Iterable[Mapping]) -> "LieElement":
        terms: dict = {}
        for r in records:
            w = parse_word(str(r["word"]))
            terms[w] = terms.get(w, 0) + parse_scalar(r["coeff"])
        return cls(k, s, terms)


def format_scalar(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    if isinstance(c, int):
        return str(c)
    import mpmath
    return mpmath.nstr(c, mpmath.mp.dps, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)


def parse_scalar(text):
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    text = str(text).strip()
    try:
        return Fraction(text)
    except ValueError:
        raise DomainError(f"malformed rational {text!r}") from None


def bracket(a: LieElement, b: LieElement) -> LieElement:
    """Lie bracket in F_{k,s}; products of total degree > s vanish."""
    a._check(b)
    s = a.s
    out: dict = {}
    for u, cu in a._terms.items():
        for v, cv in b._terms.items():
            if len(u) + len(v) > s or u == v:
                continue
            c = cu * cv
            for w, e in basis_bracket(u, v):
                out[w] = out.get(w, 0) + c * e
    return LieElement._raw(a.k, s, {w: c for w, c in out.items() if c != 0})


def weight_component(a: LieElement, weight: Sequence[int]) -> LieElement:
    """Restriction of ``a`` to basis brackets of the given multidegree."""
    weight = tuple(weight)
    if len(weight) < a.k:
        weight = weight + (0,) * (a.k - len(weight))
    return LieElement._raw(a.k, a.s, {w: c for w, c in a._terms.items()
                                      if multidegree(w, a.k) == weight})


def weights_of(a: LieElement) -> set[tuple[int, ...]]:
    return {multidegree(w, a.k) for w in a._terms}


def quasi_norm(a: LieElement) -> float:
    """max_i (max-norm of the degree-i part) ** (1/i)."""
    best = 0.0
    for i in range(1, a.s + 1):
        cs = [abs(c) for w, c in a._terms.items() if len(w) == i]
        if cs:
            best = max(best, _root(max(cs), i))
    return best


def _root(x, i: int) -> float:
    if isinstance(x, Fraction):
        r = iroot_ceil(x, i)
        if r ** i == x:
            return float(r)
        return math.exp((math.log(x.numerator) - math.log(x.denominator)) / i)
    return float(x) ** (1.0 / i)


def iroot_ceil(x: Fraction, i: int) -> int:
    """Smallest integer n >= 0 with n**i >= x, computed exactly."""
    x = Fraction(x)
    if x <= 0:
        return 0
    target = -((-x.numerator) // x.denominator)  # n**i >= x  <=>  n**i >= ceil(x)
    lo, hi = 0, 1
    while hi ** i < target:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** i >= target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def quasi_norm_ceil(a: LieElement) -> int:
    """Exact ceiling of quasi_norm(a)."""
    best = 0
    for i in range(1, a.s + 1):
        cs = [abs(c) for w, c in a._terms.items() if len(w) == i]
        if cs:
            best = max(best, iroot_ceil(Fraction(max(cs)), i))
    return best


def to_associative(a: LieElement) -> dict:
    out: dict = {}
    for w, c in a._terms.items():
        for x, e in expand(w).items():
            out[x] = out.get(x, 0) + c * e
    return {x: c for x, c in out.items() if c != 0}


def from_associative(poly: Mapping[Word, object], k: int, s: int) -> LieElement:
    return LieElement(k, s, rewrite_lie({w: c for w, c in poly.items() if len(w) <= s}))


def random_element(rng, k: int, s: int, nterms: int = 6, max_num: int = 5,
                   max_den: int = 3) -> LieElement:
    """Sparse random element with small rational coefficients (for tests and demos)."""
    words = basis_words(k, s)
    terms: dict = {}
    for _ in range(nterms):
        w = words[rng.randrange(len(words))]
        num = rng.randint(-max_num, max_num)
        terms[w] = terms.get(w, 0) + Fraction(num, rng.randint(1, max_den))
    return LieElement(k, s, terms)


# ---------------------------------------------------------------------------
# finite-dimensional nilpotent algebras by structure constants

@dataclass(frozen=True)
class NilpotentAlgebra:
    """Nilpotent Lie algebra with a graded basis and sparse structure constants.

    ``constants[(i, j)]`` maps k -> c with [e_i, e_j] = sum_k c e_k (0-based).
    Both orders (i, j) and (j, i) are stored.
    """

    dimension: int
    step: int
    grading: tuple[int, ...]
    constants: Mapping[tuple[int, int], Mapping[int, object]]
    labels: tuple[str, ...] = ()
    quotient_map: object = field(default=None, compare=False, repr=False)

    def zero(self) -> list:
        return [self._zero()] * self.dimension

    def _zero(self):
        for row in self.constants.values():
            for c in row.values():
                return c * 0
        return Fraction(0)

    def layer_of(self, index: int) -> int:
        acc = 0
        for d, n in enumerate(self.grading, start=1):
            acc += n
            if index < acc:
                return d
        raise IndexError(index)

    def bracket(self, x: Sequence, y: Sequence) -> list:
        out = [0] * self.dimension
        nzx = [(i, a) for i, a in enumerate(x) if a != 0]
        nzy = [(j, b) for j, b in enumerate(y) if b != 0]
        for i, a in nzx:
            for j, b in nzy:
                row = self.constants.get((i, j))
                if row:
                    ab = a * b
                    for kk, c in row.items():
                        out[kk] = out[kk] + ab * c
        return out

    def is_antisymmetric(self) -> bool:
        for (i, j), row in self.constants.items():
            other = self.constants.get((j, i), {})
            keys = set(row) | set(other)
            if any(row.get(kk, 0) + other.get(kk, 0) != 0 for kk in keys):
                return False
            if i == j and any(c != 0 for c in row.values()):
                return False
        return True

    def jacobi_defect(self):
        """Largest |coefficient| of [e_i,[e_j,e_l]] + cyclic over all basis triples."""
        n = self.dimension
        basis = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            basis.append(e)
        worst = 0
        for i in range(n):
            for j in range(i + 1, n):
                bij = self.bracket(basis[i], basis[j])
                for l in range(j + 1, n):
                    t1 = self.bracket(bij, basis[l])
                    t2 = self.bracket(self.bracket(basis[j], basis[l]), basis[i])
                    t3 = self.bracket(self.bracket(basis[l], basis[i]), basis[j])
                    for a, b, c in zip(t1, t2, t3):
                        v = abs(a + b + c)
                        if v > worst:
                            worst = v
        return worst

    def respects_grading(self) -> bool:
        for (i, j), row in self.constants.items():
            d = self.layer_of(i) + self.layer_of(j)
            for kk, c in row.items():
                if c != 0 and (d > self.step or self.layer_of(kk) != d):
                    return False
        return True

    def bch(self, x: Sequence, y: Sequence) -> list:
        """Group law x*y = log(exp x exp y) in these coordinates."""
        from .bch import evaluate_bch
        return evaluate_bch(self, x, y)

    def project(self, a: LieElement) -> list:
        """Coordinates of the image of ``a`` (quotients built by central_quotient only)."""
        if self.quotient_map is None:
            raise DomainError("algebra carries no quotient map")
        return self.quotient_map(a)

    def to_json(self) -> dict:
        entries = []
        for (i, j) in sorted(self.constants):
            for kk in sorted(self.constants[(i, j)]):
                c = self.constants[(i, j)][kk]
                if c != 0:
                    entries.append({"i": i, "j": j, "k": kk, "c": format_scalar(c)})
        out = {"dimension": self.dimension, "step": self.step,
               "grading": list(self.grading), "constants": entries}
        if self.labels:
            out["labels"] = list(self.labels)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: Mapping, real_digits: int | None = None) -> "NilpotentAlgebra":
        conv = parse_scalar
        if real_digits is not None:
            import mpmath
            mpmath.mp.dps = real_digits
            conv = mpmath.mpf
        consts: dict = {}
        for e in data.get("constants", []):
            consts.setdefault((int(e["i"]), int(e["j"])), {})[int(e["k"])] = conv(e["c"])
        return cls(int(data["dimension"]), int(data["step"]), tuple(data["grading"]),
                   consts, tuple(data.get("labels", ())))


def algebra_from_brackets(dimension: int, step: int, grading: Sequence[int],
                          table: Mapping[tuple[int, int], Mapping[int, object]],
                          labels: Sequence[str] = (), quotient_map=None) -> NilpotentAlgebra:
    """Build a NilpotentAlgebra from [e_i, e_j] for i < j, filling in antisymmetry."""
    consts: dict = {}
    for (i, j), row in table.items():
        row = {kk: c for kk, c in row.items() if c != 0}
        if not row:
            continue
        consts[(i, j)] = row
        consts[(j, i)] = {kk: -c for kk, c in row.items()}
    return NilpotentAlgebra(dimension, step, tuple(grading), consts, tuple(labels), quotient_map)


def free_nilpotent_algebra(k: int, s: int) -> NilpotentAlgebra:
    """F_{k,s} itself as a NilpotentAlgebra in the ordered Lyndon basis."""
    return central_quotient(k, s, [])


def heisenberg() -> NilpotentAlgebra:
    return free_nilpotent_algebra(2, 2)


def abelian(d: int) -> NilpotentAlgebra:
    return NilpotentAlgebra(d, 1, (d,), {}, tuple(f"e{i + 1}" for i in range(d)))


def central_quotient(k: int, s: int, relations: Sequence[LieElement], tol=None) -> NilpotentAlgebra:
    """Structure constants of F_{k,s} / span(relations).

    Every relation must be homogeneous of degree s.  The degree-s part of
    the basis is the lexicographically first set of Lyndon brackets
    complementing span(relations).  Pass ``tol`` when the relation
    coefficients are mpmath reals.
    """
    if k < 1 or s < 1:
        raise DomainError("central_quotient needs k >= 1 and s >= 1")
    top = basis_words(k, s, s)
    lower = [w for w in basis_words(k, s) if len(w) < s]
    for r in relations:
        if (r.k, r.s) != (k, s):
            raise DomainError("relation lives in a different free algebra")
        if any(len(w) != s for w in r.terms):
            raise DomainError("relations must be homogeneous of top degree s")

    span = EchelonBasis(len(top), tol)
    rel_span = EchelonBasis(len(top), tol)
    for r in relations:
        span.add(r.vector(top))
        rel_span.add(r.vector(top))
    # greedy complement: a top-degree bracket is kept when it is independent
    # of the relations and of the brackets kept before it
    complement: list[Word] = []
    for idx, w in enumerate(top):
        e = [0] * len(top)
        e[idx] = 1
        if span.add(e):
            complement.append(w)
    rel_basis = rel_span.rows

    # change of basis in the top layer: columns = complement units then relation basis
    ntop = len(top)
    mat = []
    for i in range(ntop):
        row = []
        for w in complement:
            row.append(1 if top[i] == w else 0)
        for rb in rel_basis:
            row.append(rb[i])
        mat.append(row)
    inverse = _inverse(mat, tol) if ntop else []

    basis = lower + complement
    index = {w: i for i, w in enumerate(basis)}
    nlow = len(lower)
    ncomp = len(complement)

    def top_coords(vec: Sequence) -> list:
        if not ntop:
            return []
        zero = vec[0] * 0
        out = []
        for r in range(ncomp):
            acc = zero
            inv_row = inverse[r]
            for i, v in enumerate(vec):
                if v != 0:
                    acc = acc + inv_row[i] * v
            out.append(acc)
        return out

    def project(a: LieElement) -> list:
        coords = [a.coeff(w) for w in lower]
        coords += top_coords(a.vector(top))
        return coords

    table: dict = {}
    for i, u in enumerate(basis):
        for j in range(i + 1, len(basis)):
            v = basis[j]
            if len(u) + len(v) > s:
                continue
            prod = dict(basis_bracket(u, v))
            if not prod:
                continue
            row: dict = {}
            if len(u) + len(v) < s:
                for w, c in prod.items():
                    row[index[w]] = Fraction(c)
            else:
                tc = top_coords([Fraction(prod.get(w, 0)) for w in top])
                for r, c in enumerate(tc):
                    if c != 0:
                        row[nlow + r] = c
            table[(i, j)] = row
    grading = [len(basis_words(k, s, d)) for d in range(1, s)] + [ncomp]
    while grading and grading[-1] == 0:
        grading.pop()
    labels = [bracket_str(w) for w in basis]
    return algebra_from_brackets(len(basis), len(grading), grading, table, labels, project)


def _inverse(mat, tol):
    n = len(mat)
    if tol is None:
        aug = [[Fraction(x) for x in row] + [Fraction(int(r == c)) for c in range(n)]
               for r, row in enumerate(mat)]
        red, pivots = rref(aug)
        if pivots[:n] != list(range(n)):
            raise DomainError("singular change of basis")
        return [row[n:] for row in red]
    import mpmath
    m = mpmath.matrix([[mpmath.mpf(x) for x in row] for row in mat])
    inv = m ** -1
    return [[inv[r, c] for c in range(n)] for r in range(n)]
