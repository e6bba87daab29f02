"""The group (F_{k,s}, *) given by the truncated Campbell-Baker-Hausdorff law,
free-group words, and their evaluation.

The product is computed in the free associative algebra truncated above
degree s: exponentiate both arguments, multiply, take the logarithm, and
rewrite the (primitive) result in the Lyndon basis.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .free_lie import (DomainError, LieElement, bracketing, basis_words, from_associative,
                       to_associative)


# ---------------------------------------------------------------------------
# truncated free associative algebra

def assoc_mul(p: Mapping, q: Mapping, s: int) -> dict:
    out: dict = {}
    for a, ca in p.items():
        la = len(a)
        if la > s:
            continue
        for b, cb in q.items():
            if la + len(b) > s:
                continue
            w = a + b
            out[w] = out.get(w, 0) + ca * cb
    return {w: c for w, c in out.items() if c != 0}


def assoc_exp(p: Mapping, s: int) -> dict:
    """exp(p) truncated above degree s; p must have no constant term."""
    result = {(): Fraction(1)}
    power = {(): Fraction(1)}
    fact = 1
    for n in range(1, s + 1):
        power = assoc_mul(power, p, s)
        if not power:
            break
        fact *= n
        for w, c in power.items():
            result[w] = result.get(w, 0) + c / fact
    return {w: c for w, c in result.items() if c != 0}


def assoc_log(p: Mapping, s: int) -> dict:
    """log(p) truncated above degree s; p must have constant term 1."""
    if p.get((), 0) != 1:
        raise DomainError("log needs constant term 1")
    z = {w: c for w, c in p.items() if w != ()}
    result: dict = {}
    power = {(): Fraction(1)}
    for n in range(1, s + 1):
        power = assoc_mul(power, z, s)
        if not power:
            break
        sign = Fraction(1 if n % 2 else -1, n)
        for w, c in power.items():
            result[w] = result.get(w, 0) + sign * c
    return {w: c for w, c in result.items() if c != 0}


def dynkin_projection(poly: Mapping) -> dict:
    """Dynkin-Specht-Wever map a1...an -> [..[[a1,a2],a3]..,an] / n, per degree.

    Idempotent on Lie polynomials; used as an independent check on primitivity.
    """
    out: dict = {}
    for w, c in poly.items():
        if not w:
            continue
        left = {w[:1]: 1}
        for a in w[1:]:
            nxt: dict = {}
            for x, e in left.items():
                nxt[x + (a,)] = nxt.get(x + (a,), 0) + e
                nxt[(a,) + x] = nxt.get((a,) + x, 0) - e
            left = nxt
        scale = Fraction(c) / len(w)
        for x, e in left.items():
            out[x] = out.get(x, 0) + scale * e
    return {w: c for w, c in out.items() if c != 0}


# ---------------------------------------------------------------------------
# group law

def bch_product(x: LieElement, y: LieElement) -> LieElement:
    """x * y = log(exp x exp y), truncated at degree s."""
    x._check(y)
    if x.is_zero():
        return y
    if y.is_zero():
        return x
    s = x.s
    ex = assoc_exp(to_associative(x), s)
    ey = assoc_exp(to_associative(y), s)
    return from_associative(assoc_log(assoc_mul(ex, ey, s), s), x.k, s)


def bch_inverse(x: LieElement) -> LieElement:
    return -x


def bch_power(x: LieElement, n: int) -> LieElement:
    # exp(x)^n = exp(n x): one-parameter subgroups are lines
    return x.scale(n)


@functools.lru_cache(maxsize=None)
def bch_series(s: int) -> tuple:
    """log(exp x1 exp x2) in F_{2,s} as ((lyndon word, coefficient), ...)."""
    x1 = LieElement.generator(2, s, 1)
    x2 = LieElement.generator(2, s, 2)
    return tuple(bch_product(x1, x2).items())


def evaluate_bch(algebra, x: Sequence, y: Sequence) -> list:
    """Group law of a NilpotentAlgebra in its own coordinates."""
    values: dict = {(1,): list(x), (2,): list(y)}

    def value(w):
        got = values.get(w)
        if got is None:
            from .free_lie import standard_factorization
            u, v = standard_factorization(w)
            got = algebra.bracket(value(u), value(v))
            values[w] = got
        return got

    out = [a + b for a, b in zip(x, y)]
    for w, c in bch_series(algebra.step):
        if len(w) == 1:
            continue
        vec = value(w)
        for i, a in enumerate(vec):
            if a != 0:
                out[i] = out[i] + c * a
    return out


# ---------------------------------------------------------------------------
# free group words

_SYLLABLE = re.compile(r"^x(\d+)(?:\^([+-]?\d+))?$")


@dataclass(frozen=True)
class FreeGroupWord:
    """Freely reduced word stored as (generator, nonzero exponent) syllables."""

    syllables: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for g, e in self.syllables:
            if g < 1 or e == 0:
                raise DomainError(f"bad syllable x{g}^{e}")
        for (g1, _), (g2, _) in zip(self.syllables, self.syllables[1:]):
            if g1 == g2:
                raise DomainError("word is not freely reduced")

    @classmethod
    def from_letters(cls, letters: Sequence[tuple[int, int]]) -> "FreeGroupWord":
        """Build from (generator, +-1) letters, reducing freely."""
        syl: list[list[int]] = []
        for g, e in letters:
            if syl and syl[-1][0] == g:
                syl[-1][1] += e
                if syl[-1][1] == 0:
                    syl.pop()
            else:
                syl.append([g, e])
        return cls(tuple((g, e) for g, e in syl))

    @classmethod
    def parse(cls, text: str) -> "FreeGroupWord":
        text = text.strip()
        if text in ("", "1", "e"):
            return cls()
        letters = []
        for tok in text.split():
            m = _SYLLABLE.match(tok)
            if not m:
                raise DomainError(f"malformed word syllable {tok!r}")
            g = int(m.group(1))
            e = int(m.group(2)) if m.group(2) is not None else 1
            if g < 1:
                raise DomainError(f"generator index must be >= 1 in {tok!r}")
            letters.extend([(g, 1 if e > 0 else -1)] * abs(e))
        return cls.from_letters(letters)

    def letters(self) -> list[tuple[int, int]]:
        out = []
        for g, e in self.syllables:
            out.extend([(g, 1 if e > 0 else -1)] * abs(e))
        return out

    @property
    def length(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def max_generator(self) -> int:
        return max((g for g, _ in self.syllables), default=0)

    def __mul__(self, other: "FreeGroupWord") -> "FreeGroupWord":
        return FreeGroupWord.from_letters(self.letters() + other.letters())

    def inverse(self) -> "FreeGroupWord":
        return FreeGroupWord(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        return " ".join(f"x{g}" if e == 1 else f"x{g}^{e}" for g, e in self.syllables)


def commutator(a: FreeGroupWord, b: FreeGroupWord) -> FreeGroupWord:
    """(a, b) = a b a^-1 b^-1."""
    return a * b * a.inverse() * b.inverse()


def eval_word(w: FreeGroupWord, args: Sequence[LieElement]) -> LieElement:
    """Substitute args[i-1] for x_i and multiply left to right with the CBH law."""
    if not args:
        raise DomainError("eval_word needs at least one argument")
    if w.max_generator() > len(args):
        raise DomainError(f"word uses x{w.max_generator()} but only {len(args)} arguments given")
    result = LieElement.zero(args[0].k, args[0].s)
    for g, e in w.syllables:
        result = bch_product(result, bch_power(args[g - 1], e))
    return result


def word_to_lie(w: FreeGroupWord, k: int, s: int) -> LieElement:
    """log of w(e^{x_1}, ..., e^{x_k}) in F_{k,s}."""
    if k < 1 or s < 1:
        raise DomainError("word_to_lie needs k >= 1 and s >= 1")
    gens = [LieElement.generator(k, s, i) for i in range(1, k + 1)]
    return eval_word(w, gens)


def letter_order(k: int) -> list[tuple[int, int]]:
    """x1 < x1^-1 < x2 < x2^-1 < ..."""
    return [(g, e) for g in range(1, k + 1) for e in (1, -1)]


def ball_letters(k: int, n: int) -> Iterator[list[tuple[int, int]]]:
    """Reduced letter sequences of length <= n in length-lexicographic order."""
    order = letter_order(k)
    level: list[list[tuple[int, int]]] = [[]]
    yield []
    for _ in range(n):
        nxt = []
        for word in level:
            last = word[-1] if word else None
            for g, e in order:
                if last is not None and last == (g, -e):
                    continue
                nxt.append(word + [(g, e)])
        for word in nxt:
            yield word
        level = nxt


def word_ball(k: int, n: int) -> Iterator[FreeGroupWord]:
    """All freely reduced words of length <= n, each once, length-lex ordered."""
    if n < 0:
        raise DomainError("radius must be non-negative")
    for letters in ball_letters(k, n):
        yield FreeGroupWord.from_letters(letters)


def ball_size(k: int, n: int) -> int:
    if k == 0 or n == 0:
        return 1
    return 1 + sum(2 * k * (2 * k - 1) ** (m - 1) for m in range(1, n + 1))


def generators(k: int, s: int) -> list[LieElement]:
    return [LieElement.generator(k, s, i) for i in range(1, k + 1)]


__all__ = [
    "FreeGroupWord", "assoc_exp", "assoc_log", "assoc_mul", "ball_size", "bch_inverse",
    "bch_power", "bch_product", "bch_series", "commutator", "dynkin_projection",
    "eval_word", "evaluate_bch", "generators", "word_ball", "word_to_lie",
]
