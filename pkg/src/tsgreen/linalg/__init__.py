from .ff import FFMatrix, ff_solve, inverse, nullspace, rank, rref, solve
from .intmat import HNF, SNF, hnf, lattice_contains, lattice_equals_full, lattice_solve, snf

__all__ = [
    "FFMatrix", "ff_solve", "inverse", "nullspace", "rank", "rref", "solve",
    "HNF", "SNF", "hnf", "snf", "lattice_contains", "lattice_equals_full", "lattice_solve",
]
