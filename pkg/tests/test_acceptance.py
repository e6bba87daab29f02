"""One test per acceptance criterion; each checks its own runtime budget."""

import math
import random
import time
from fractions import Fraction

import pytest

from nilforge.bch import bch_product, bch_series
from nilforge.dioph_lab import (decay_series, heisenberg_tuple, liouville_decay,
                                liouville_quotient, liouville_submodule, remez_check,
                                witness_element)
from nilforge.free_lie import LieElement, bracket, lyndon_basis, random_element, witt_dimension
from nilforge.rep_theory import (decompose, highest_weight_vectors, is_multiplicity_free,
                                 klyachko_occurs, kostka_table, kw_multiplicity, partitions)

from test_rep_theory import DISPLAYED, WEIGHTS_S5, WEIGHTS_S6

F = Fraction


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s, budget {self.seconds}s"
        return False


@pytest.mark.criterion(1, "Witt dimensions equal Lyndon basis counts (k<=5, s<=8)")
def test_criterion_01_witt_dimensions():
    with Budget(5):
        for k in range(1, 6):
            layers = lyndon_basis(k, 8)
            for s in range(1, 9):
                assert witt_dimension(k, s) == len(layers[s - 1])
        assert witt_dimension(2, 6) == 9
        assert witt_dimension(3, 3) == 8
        for k in range(2, 7):
            assert witt_dimension(k, 3) == (k ** 3 - k) // 3


@pytest.mark.criterion(2, "weight tables for s=5 and s=6 reproduced cell for cell")
def test_criterion_02_kostka_tables():
    with Budget(10):
        assert kostka_table(5)[1] == WEIGHTS_S5
        assert kostka_table(6)[1] == WEIGHTS_S6
        shapes5, t5 = kostka_table(5)
        assert t5[-1][shapes5.index((3, 2))] == 5
        shapes6, t6 = kostka_table(6)
        assert t6[-1][shapes6.index((3, 2, 1))] == 16


@pytest.mark.criterion(3, "decompositions for s=2..6 match the displayed formulas")
def test_criterion_03_decompositions():
    with Budget(30):
        for (k, s), expected in DISPLAYED.items():
            got = {tuple(p): m for p, m in decompose(k, s).items()}
            assert got == expected, (k, s)
        # the generic formulas hold for every k large enough to show all terms
        for s in range(2, 7):
            generic = DISPLAYED[(5, s)] if (5, s) in DISPLAYED else None
            if generic:
                for k in range(s, 8):
                    got = {tuple(p): m for p, m in decompose(k, s).items()}
                    assert got == generic


@pytest.mark.criterion(4, "peeling = Kraskiewicz-Weyman = highest-weight dimension, s<=7")
def test_criterion_04_three_way_agreement():
    with Budget(300):
        for s in range(1, 8):
            k = min(s, 5)
            dec = decompose(k, s)
            residues = [i for i in range(1, s + 1) if math.gcd(i, s) == 1]
            for lam in partitions(s, k):
                peel = dec[lam]
                assert all(kw_multiplicity(lam, i) == peel for i in residues), (s, lam)
                assert len(highest_weight_vectors(k, s, lam)) == peel, (s, lam)


@pytest.mark.criterion(5, "multiplicity-free boundary")
def test_criterion_05_multiplicity_free_boundary():
    with Budget(60):
        for k in range(3, 7):
            for s in range(1, 6):
                assert is_multiplicity_free(k, s), (k, s)
        for s in range(1, 7):
            assert is_multiplicity_free(2, s), (2, s)
        for k, s in [(3, 6), (2, 7), (4, 6)]:
            assert not is_multiplicity_free(k, s), (k, s)


@pytest.mark.criterion(6, "Klyachko predicate iff multiplicity >= 1, s<=8")
def test_criterion_06_klyachko():
    with Budget(60):
        for s in range(1, 9):
            dec = decompose(s, s)
            for lam in partitions(s):
                assert klyachko_occurs(lam, s) == (dec[lam] >= 1), lam
                assert (kw_multiplicity(lam, 1) >= 1) == klyachko_occurs(lam, s), lam
        for shape in [(2, 2), (2, 2, 2), (4,), (1, 1, 1, 1)]:
            assert not klyachko_occurs(shape, 8)


@pytest.mark.criterion(7, "(2,2,1^{s-4}) has multiplicity >= 2 for s=6..9")
def test_criterion_07_two_two_one():
    with Budget(30):
        for s in (6, 7, 8, 9):
            lam = (2, 2) + (1,) * (s - 4)
            assert kw_multiplicity(lam, 1) >= 2, s


@pytest.mark.criterion(8, "CBH closed forms, associativity and inverses in F_{3,5}")
def test_criterion_08_bch():
    with Budget(120):
        x = LieElement.generator(2, 2, 1)
        y = LieElement.generator(2, 2, 2)
        assert bch_product(x, y) == x + y + bracket(x, y).scale(F(1, 2))
        assert dict(bch_series(3)) == {(1,): 1, (2,): 1, (1, 2): F(1, 2),
                                       (1, 1, 2): F(1, 12), (1, 2, 2): F(1, 12)}
        rng = random.Random(2024)
        for _ in range(100):
            a, b, c = (random_element(rng, 3, 5, nterms=4) for _ in range(3))
            assert bch_product(bch_product(a, b), c) == bch_product(a, bch_product(b, c))
        for _ in range(50):
            a = random_element(rng, 3, 5)
            assert bch_product(a, -a).is_zero()


@pytest.mark.criterion(9, "Liouville witness decay (M=5, m=2,3,4)")
def test_criterion_09_liouville_decay():
    with Budget(60):
        setup = liouville_submodule(3, 6, (4, 1, 1), M=5)
        for m in (2, 3, 4):
            w = liouville_decay(setup, m)
            q = 10 ** math.factorial(m)
            assert w.q == q
            assert w.distance <= F(1, q ** m), m
            if m >= 3:
                assert w.distance <= F(1, w.word_length_bound ** 10), m


@pytest.mark.criterion(10, "sublevel bound: 1000 seeded trials, no violations")
def test_criterion_10_remez():
    with Budget(300):
        report = remez_check(1000, seed=42, d_max=5, n1_max=3)
        assert report.trials == 1000
        assert report.violations == 0


@pytest.mark.criterion(11, "delta sanity: Heisenberg >= 1/2, Liouville quotient < 1e-12")
def test_criterion_11_delta_sanity():
    with Budget(120):
        for rec in decay_series(heisenberg_tuple(), 6):
            assert rec.delta >= F(1, 2), rec.n
        setup = liouville_submodule(3, 6, (4, 1, 1))
        group = liouville_quotient(setup)
        hits = []
        for m in (2, 3, 4):
            w = liouville_decay(setup, m)
            size = max(abs(c) for c in group.project(witness_element(setup, m)))
            assert size > 0
            if size < F(1, 10 ** 12) and w.word_length_bound < 10 ** 4:
                hits.append(m)
        assert hits
