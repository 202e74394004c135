"""Shuffles of rooted trees: enumeration, counting, lattice structure and intersections."""

from .counting import (BoundsTriple, ShuffleCounter, binary_count, count_bounds, count_shuffles,
                       linear_count, shuffle_polynomial)
from .errors import InvariantError, ResourceLimitError, TreeSyntaxError
from .geometry import (IntersectionDiagram, MaximalChain, chains_cover_check, intersect_shuffles,
                       intersection_diagram, maximal_chains)
from .lattice import (HasseDiagram, OpenSet, PairPoset, ShuffleMorphism, bottom, check_aut_theorem,
                      compose, from_open_set, hasse, identity_shuffle, join, leq, meet,
                      percolation_successors, poset_automorphisms, to_open_set, top)
from .polynomial import CountPolynomial, discrete_sum, interpolate
from .shuffles import (BranchShuffle, PairTree, Shuffle, StumpedShuffle, Verdict,
                       brute_force_shuffles, enumerate_shuffles, extend_branch_shuffle,
                       shuffles_with_stumps, transpose, verify_branches, verify_definition,
                       verify_all, verify_maximality)
from .tree import (Tree, binary_tree, branches, canonical_form, corolla, decompose, edge_poset,
                   height, linear_tree, parse_tree, prune_stumps, reduce, tree_automorphisms,
                   tree_factorial, unit_tree, vertex_poset)

__version__ = "0.1.0"
