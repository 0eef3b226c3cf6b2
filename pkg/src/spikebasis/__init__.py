"""Sparse versus least statistically-dependent bases for the spike process.

Submodules: ``processes`` (data), ``bases`` (explicit bases and LSDB
constructions), ``dictionary`` (Haar-Walsh packet tree), ``costs``,
``bestbasis`` (tree search), ``analytic`` (closed forms), ``verify`` and
``cli``.
"""

from .analytic import f, g, gl_mutual_information, og_mutual_information, standard_basis_cost
from .bases import Basis, householder_dc, lsdb_gl_pair, lsdb_orthonormal, standard_basis, walsh_basis
from .bestbasis import BestBasisResult, CostSpec, best_basis, best_basis_exact_spike, exhaustive_best_basis
from .costs import entropy_empirical, entropy_exact_discrete, l0_cost, lp_cost, mutual_information_spike
from .dictionary import DictionaryTable, TreeBasis, analyze, enumerate_tree_bases, reconstruct
from .processes import Dataset, SpikeProcess, sample_spike, sample_uniform2d, spike_dataset

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "BestBasisResult",
    "CostSpec",
    "Dataset",
    "DictionaryTable",
    "SpikeProcess",
    "TreeBasis",
    "analyze",
    "best_basis",
    "best_basis_exact_spike",
    "entropy_empirical",
    "entropy_exact_discrete",
    "enumerate_tree_bases",
    "exhaustive_best_basis",
    "f",
    "g",
    "gl_mutual_information",
    "householder_dc",
    "l0_cost",
    "lp_cost",
    "lsdb_gl_pair",
    "lsdb_orthonormal",
    "mutual_information_spike",
    "og_mutual_information",
    "reconstruct",
    "sample_spike",
    "sample_uniform2d",
    "spike_dataset",
    "standard_basis",
    "standard_basis_cost",
    "walsh_basis",
]
