"""Free nilpotent Lie algebras and groups: Lyndon bases, the CBH group law,
gl_k decompositions of graded pieces, and word-ball Diophantine experiments."""

from .bch import FreeGroupWord, bch_product, eval_word, word_ball, word_to_lie
from .dioph_lab import (PrecisionExhausted, TupleSpec, decay_series, delta_gamma, fit_beta,
                        liouville_decay, liouville_submodule, remez_check)
from .free_lie import (DomainError, LieElement, NilpotentAlgebra, central_quotient,
                       free_nilpotent_algebra, lyndon_basis, witt_dimension)
from .rep_theory import (Partition, decompose, highest_weight_vectors, kostka, kw_multiplicity,
                         klyachko_occurs, weyl_dim)

__version__ = "0.1.0"

__all__ = [
    "DomainError", "FreeGroupWord", "LieElement", "NilpotentAlgebra", "Partition",
    "PrecisionExhausted", "TupleSpec", "bch_product", "central_quotient", "decay_series",
    "decompose", "delta_gamma", "eval_word", "fit_beta", "free_nilpotent_algebra",
    "highest_weight_vectors", "klyachko_occurs", "kostka", "kw_multiplicity", "liouville_decay",
    "liouville_submodule", "lyndon_basis", "remez_check", "weyl_dim", "witt_dimension",
    "word_ball", "word_to_lie",
]
