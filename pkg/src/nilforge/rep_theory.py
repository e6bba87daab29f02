"""F_k^{[s]} as an SL_k-module: weight spaces, Kostka numbers, Weyl
dimensions, irreducible decomposition, Kraskiewicz-Weyman multiplicities
and explicit highest-weight vectors.
"""

from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .free_lie import (DomainError, LieElement, basis_bracket, basis_words, divisors, mobius,
                       multidegree, standard_factorization, witt_dimension)
from .linalg import nullspace, rref

DEFAULT_MAX_S = 8


def max_s() -> int:
    """Size cap for decompose; NILFORGE_MAX_S overrides the default of 8."""
    return int(os.environ.get("NILFORGE_MAX_S", DEFAULT_MAX_S))


class InconsistencyError(RuntimeError):
    """A computed multiplicity came out negative."""


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Sequence[int] = ()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p <= 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise DomainError(f"{list(parts)} is not a partition")
        return super().__new__(cls, parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        body = text.strip().strip("[]()")
        if not body:
            return cls(())
        try:
            return cls(int(p) for p in body.replace(" ", "").split(","))
        except ValueError:
            raise DomainError(f"malformed partition {text!r}") from None

    @property
    def parts(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def rows(self) -> int:
        return len(self)

    def padded(self, k: int) -> tuple[int, ...]:
        return tuple(self) + (0,) * (k - len(self))

    def transpose(self) -> "Partition":
        if not self:
            return Partition(())
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def dominates(self, other: Sequence[int]) -> bool:
        a = b = 0
        for i in range(max(len(self), len(other))):
            a += self[i] if i < len(self) else 0
            b += other[i] if i < len(other) else 0
            if a < b:
                return False
        return True

    def __str__(self) -> str:
        return "[" + ",".join(str(p) for p in self) + "]"

    def __repr__(self) -> str:
        return f"Partition({str(self)})"


def partitions(n: int, max_rows: int | None = None) -> list[Partition]:
    """Partitions of n with at most max_rows parts, reverse-lexicographic order."""
    out: list[Partition] = []

    def rec(remaining, largest, prefix):
        if remaining == 0:
            out.append(Partition(prefix))
            return
        if max_rows is not None and len(prefix) == max_rows:
            return
        for p in range(min(remaining, largest), 0, -1):
            rec(remaining - p, p, prefix + [p])

    rec(n, n, [])
    return out


# ---------------------------------------------------------------------------
# weights

def weight_multiplicity(weight: Sequence[int]) -> int:
    """Dimension of the weight space of F_k^{[n]}, n = sum(weight) (Witt's character formula)."""
    weight = tuple(int(x) for x in weight)
    if any(x < 0 for x in weight) or not any(weight):
        raise DomainError("weight entries must be non-negative and not all zero")
    n = sum(weight)
    g = 0
    for x in weight:
        g = math.gcd(g, x)
    total = 0
    for d in divisors(g):
        term = math.factorial(n // d)
        for x in weight:
            term //= math.factorial(x // d)
        total += mobius(d) * term
    assert total % n == 0
    return total // n


def weight_slice(k: int, weight: Sequence[int]) -> tuple:
    """Lyndon words of multidegree ``weight`` (the weight-space basis)."""
    weight = tuple(weight) + (0,) * (k - len(weight))
    n = sum(weight)
    return tuple(w for w in basis_words(k, n, n) if multidegree(w, k) == weight)


# ---------------------------------------------------------------------------
# tableaux

@functools.lru_cache(maxsize=None)
def _kostka(shape: tuple, content: tuple) -> int:
    if not content:
        return 1 if not shape else 0
    m = content[-1]
    rest = content[:-1]
    total = 0
    # remove a horizontal strip of size m from shape
    for inner in _horizontal_strips(shape, m):
        total += _kostka(inner, rest)
    return total


def _horizontal_strips(shape: tuple, m: int) -> Iterator[tuple]:
    rows = len(shape)

    def rec(i, left, acc):
        if i == rows:
            if left == 0:
                out = tuple(p for p in acc if p > 0)
                yield out
            return
        below = shape[i + 1] if i + 1 < rows else 0
        for take in range(0, min(left, shape[i] - below) + 1):
            yield from rec(i + 1, left - take, acc + [shape[i] - take])

    yield from rec(0, m, [])


def kostka(shape: Sequence[int], content: Sequence[int]) -> int:
    """Number of semistandard tableaux of the given shape and content."""
    shape = Partition(shape)
    content = tuple(int(c) for c in content)
    if any(c < 0 for c in content):
        raise DomainError("content entries must be non-negative")
    if shape.size != sum(content):
        raise DomainError("shape and content sizes differ")
    while content and content[-1] == 0:
        content = content[:-1]
    return _kostka(tuple(shape), content)


def weyl_dim(shape: Sequence[int], k: int) -> int:
    """Dimension of the irreducible SL_k-module with highest weight ``shape``."""
    shape = Partition(shape)
    if shape.rows > k:
        return 0
    n = shape.padded(k)
    num, den = 1, 1
    for i in range(k):
        for j in range(i + 1, k):
            num *= n[i] - n[j] + j - i
            den *= j - i
    assert num % den == 0
    return num // den


@dataclass(frozen=True)
class StandardTableau:
    shape: Partition
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if tuple(len(r) for r in self.rows) != tuple(self.shape):
            raise DomainError("rows do not match shape")
        entries = sorted(x for r in self.rows for x in r)
        if entries != list(range(1, self.shape.size + 1)):
            raise DomainError("entries must be 1..n")
        for r in self.rows:
            if any(a >= b for a, b in zip(r, r[1:])):
                raise DomainError("rows must increase")
        for i in range(1, len(self.rows)):
            if any(self.rows[i - 1][j] >= self.rows[i][j] for j in range(len(self.rows[i]))):
                raise DomainError("columns must increase")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "StandardTableau":
        rows = tuple(tuple(r) for r in rows)
        return cls(Partition(len(r) for r in rows), rows)

    def row_of(self) -> dict[int, int]:
        return {x: i for i, r in enumerate(self.rows) for x in r}

    def descents(self) -> list[int]:
        where = self.row_of()
        return [i for i in range(1, self.shape.size) if where[i + 1] > where[i]]


def standard_tableaux(shape: Sequence[int]) -> Iterator[StandardTableau]:
    """All standard tableaux of the shape, by placing 1..n in turn."""
    shape = Partition(shape)
    n = shape.size
    rows: list[list[int]] = [[] for _ in shape]

    def rec(x):
        if x > n:
            yield StandardTableau(shape, tuple(tuple(r) for r in rows))
            return
        for i in range(len(shape)):
            if len(rows[i]) < shape[i] and (i == 0 or len(rows[i - 1]) > len(rows[i])):
                rows[i].append(x)
                yield from rec(x + 1)
                rows[i].pop()

    yield from rec(1)


def major_index(t: StandardTableau) -> int:
    return sum(t.descents())


@functools.lru_cache(maxsize=None)
def _maj_counts(shape: tuple) -> tuple:
    n = sum(shape)
    counts = [0] * max(n, 1)
    for t in standard_tableaux(shape):
        counts[major_index(t) % max(n, 1)] += 1
    return tuple(counts)


def kw_multiplicity(shape: Sequence[int], i: int) -> int:
    """Standard tableaux of the shape with major index = i mod size (i coprime to size)."""
    shape = Partition(shape)
    n = shape.size
    if n < 1:
        raise DomainError("empty shape")
    if math.gcd(i, n) != 1:
        raise DomainError(f"residue {i} is not coprime to {n}")
    return _maj_counts(tuple(shape))[i % n]


def klyachko_occurs(shape: Sequence[int], k: int) -> bool:
    """Whether E^shape occurs in F_k^{[s]}, s = |shape|, by Klyachko's criterion.

    The single column is excluded only from s = 3 on: F_k^{[2]} is E^{(1,1)}.
    """
    shape = Partition(shape)
    s = shape.size
    if s == 0 or shape.rows > k:
        return False
    if shape.rows == 1 and s > 1:
        return False
    if all(p == 1 for p in shape) and s > 2:
        return False
    if tuple(shape) in ((2, 2), (2, 2, 2)):
        return False
    return True


# ---------------------------------------------------------------------------
# decomposition

@dataclass(frozen=True)
class IrrepDecomposition:
    k: int
    s: int
    multiplicities: Mapping[Partition, int]

    def __getitem__(self, shape) -> int:
        return self.multiplicities.get(Partition(shape), 0)

    def items(self):
        return sorted(self.multiplicities.items(), reverse=True)

    def dimension(self) -> int:
        return sum(m * weyl_dim(p, self.k) for p, m in self.multiplicities.items())

    def is_multiplicity_free(self) -> bool:
        return all(m == 1 for m in self.multiplicities.values())

    def to_json(self) -> dict:
        return {"k": self.k, "s": self.s,
                "irreps": [{"partition": list(p), "multiplicity": m} for p, m in self.items()]}


def decompose(k: int, s: int, cap: int | None = None) -> IrrepDecomposition:
    """Peel highest weights off the character of F_k^{[s]}."""
    if k < 1 or s < 1:
        raise DomainError("decompose needs k >= 1 and s >= 1")
    cap = max_s() if cap is None else cap
    if s > cap:
        raise DomainError(f"s = {s} exceeds the size cap {cap} (set NILFORGE_MAX_S)")
    shapes = partitions(s, k)
    mult: dict[Partition, int] = {}
    for lam in shapes:
        m = weight_multiplicity(lam.padded(k))
        for mu, c in mult.items():
            if c:
                m -= c * kostka(mu, lam)
        if m < 0:
            raise InconsistencyError(f"negative multiplicity {m} for {lam}")
        if m:
            mult[lam] = m
    result = IrrepDecomposition(k, s, mult)
    if result.dimension() != witt_dimension(k, s):
        raise InconsistencyError("dimension identity fails")
    return result


def is_multiplicity_free(k: int, s: int) -> bool:
    if k < 2:
        raise DomainError("is_multiplicity_free needs k >= 2")
    return decompose(k, s).is_multiplicity_free()


def metabelian_words(k: int, s: int) -> list[tuple[int, ...]]:
    """Index words i_1 >= ... >= i_{s-1} < i_s of the right-normed metabelian basis."""
    out = []

    def rec(prefix):
        if len(prefix) == s - 1:
            for last in range(prefix[-1] + 1, k + 1):
                out.append(tuple(prefix) + (last,))
            return
        top = prefix[-1] if prefix else k
        for a in range(1, top + 1):
            rec(prefix + [a])

    if s >= 2:
        rec([])
    return out


def metabelian_layer_dims(k: int, s: int) -> tuple[int, int]:
    if s < 2:
        raise DomainError("metabelian_layer_dims needs s >= 2")
    quotient = weyl_dim((s - 1, 1), k)
    if quotient != len(metabelian_words(k, s)):
        raise InconsistencyError("metabelian basis count disagrees with the Weyl dimension")
    return quotient, witt_dimension(k, s) - quotient


# ---------------------------------------------------------------------------
# gl_k action and highest-weight vectors

@functools.lru_cache(maxsize=None)
def _derivation_on_word(i: int, j: int, w: tuple) -> tuple:
    """E_{ij} (x_j -> x_i) applied to P_w, in the Lyndon basis."""
    if len(w) == 1:
        return (((i,), 1),) if w[0] == j else ()
    u, v = standard_factorization(w)
    out: dict = {}
    for du, c in _derivation_on_word(i, j, u):
        for x, e in basis_bracket(du, v):
            out[x] = out.get(x, 0) + c * e
    for dv, c in _derivation_on_word(i, j, v):
        for x, e in basis_bracket(u, dv):
            out[x] = out.get(x, 0) + c * e
    return tuple(sorted((x, c) for x, c in out.items() if c))


def glk_action(i: int, j: int, a: LieElement) -> LieElement:
    """Derivation of F_{k,s} sending x_j to x_i and the other generators to 0."""
    if not (1 <= i <= a.k and 1 <= j <= a.k):
        raise DomainError(f"E_{i}{j} out of range for k = {a.k}")
    out: dict = {}
    for w, c in a.terms.items():
        for x, e in _derivation_on_word(i, j, w):
            out[x] = out.get(x, 0) + c * e
    return LieElement(a.k, a.s, out)


def highest_weight_vectors(k: int, s: int, shape: Sequence[int]) -> list[LieElement]:
    """Echelon basis of the vectors of weight ``shape`` killed by every E_{i,i+1}."""
    shape = Partition(shape)
    if shape.size != s:
        raise DomainError("shape size must equal s")
    if shape.rows > k:
        raise DomainError("shape has more rows than generators")
    words = weight_slice(k, shape.padded(k))
    if not words:
        return []
    rows: list[list[Fraction]] = []
    for i in range(1, k):
        images = [dict(_derivation_on_word(i, i + 1, w)) for w in words]
        targets = sorted({x for img in images for x in img})
        for t in targets:
            rows.append([Fraction(img.get(t, 0)) for img in images])
    kernel = nullspace(rows, len(words))
    # present the kernel in reduced echelon form over the slice basis
    red, _ = rref(kernel)
    return [LieElement(k, s, {w: c for w, c in zip(words, vec) if c != 0}) for vec in red]


def kostka_table(s: int, include_row: bool = False) -> tuple[list[Partition], list[list[int]]]:
    """Square table K[weight][module] over the partitions of s, both axes in reverse-lex order."""
    shapes = [p for p in partitions(s) if include_row or p.rows > 1 or s == 1]
    table = [[kostka(mod, wt) for mod in shapes] for wt in shapes]
    return shapes, table
