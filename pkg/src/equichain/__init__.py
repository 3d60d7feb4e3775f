"""Mod-2 chains, filtered complexes and Z/2-equivariant Smith theory on finite simplicial complexes."""

from .cells import (CellularMap, Chain, ClosedSubcomplex, Complex, GroupAction, betti_numbers,
                    fixed_subcomplex, quotient_complex)
from .equivariant import (FiltrationData, decompose_invariant_chain, default_filtration,
                          free_part_image, quotient_comparison, verify_smith_exactness)
from .errors import EquichainError
from .filtered import ChainComplex, FilteredComplex, canonical_filtration, spectral_sequence
from .fileformat import dump, parse
from .splitting import SplitProblem, find_split, verify_split

__version__ = "0.1.0"

__all__ = [
    "CellularMap", "Chain", "ChainComplex", "ClosedSubcomplex", "Complex", "EquichainError",
    "FilteredComplex", "FiltrationData", "GroupAction", "SplitProblem", "betti_numbers",
    "canonical_filtration", "decompose_invariant_chain", "default_filtration", "dump",
    "find_split", "fixed_subcomplex", "free_part_image", "parse", "quotient_comparison",
    "quotient_complex", "spectral_sequence", "verify_smith_exactness", "verify_split",
]
