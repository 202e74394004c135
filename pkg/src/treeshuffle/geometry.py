"""Intersections of shuffles and maximal chains of ``E(S) x E(T)``.

The classifying space of the product of two trees is covered by the
spaces of their shuffles.  Combinatorially: every saturated chain from the
root pair to a leaf pair lies in some shuffle, and any two shuffles meet in
a tree with the same root and leaves.
"""

from dataclasses import dataclass, field
from itertools import product

from .errors import InvariantError, ResourceLimitError
from .shuffles import DEFAULT_MAX_SHUFFLES, PairTree, enumerate_shuffles
from .tree import as_tree

DEFAULT_MAX_NODES = 10 ** 5
DEFAULT_MAX_CHAINS = 10 ** 6


def intersect_shuffles(A, B):
    """``A`` and ``B`` intersected as edge sets, with the induced order.

    The result is re-checked: it must be a tree rooted at ``(r_S, r_T)``
    with leaves ``leaves(S) x leaves(T)``.  A failure raises
    :class:`InvariantError`.
    """
    if not A.same_pair(B):
        raise ValueError("shuffles belong to different tree pairs")
    return _checked_tree(A.S, A.T, A.edges & B.edges)


def _checked_tree(S, T, edges):
    try:
        tree = PairTree.from_edges(S, T, edges)
    except ValueError as exc:
        raise InvariantError(f"intersection is not a tree: {exc}") from exc
    if tree.root != (S.root, T.root):
        raise InvariantError(f"intersection has root {tree.root}")
    if tree.leaves != tree.leaf_pairs():
        raise InvariantError("intersection has the wrong leaves")
    return tree


@dataclass
class IntersectionDiagram:
    """Distinct trees ``A_I`` over nonempty index sets ``I`` of shuffles.

    ``nodes[k]`` is a tree, ``index_sets[k]`` the largest ``I`` giving it
    (all shuffles containing it), and ``arrows`` the covering pairs
    ``(k, l)`` with ``index_sets[k]`` strictly inside ``index_sets[l]``,
    which is the direction ``A_{I_l} -> A_{I_k}`` of the inclusion.
    """

    shuffles: list
    nodes: list
    index_sets: list
    arrows: list = field(default_factory=list)

    def to_dot(self):
        lines = ["digraph intersections {", "  rankdir=BT;", "  node [shape=box, fontname=monospace];"]
        for k, I in enumerate(self.index_sets):
            label = "{" + ",".join(str(i) for i in sorted(I)) + "}"
            lines.append(f'  n{k} [label="{label}\\n{len(self.nodes[k])} edges"];')
        for k, l in self.arrows:
            lines.append(f"  n{l} -> n{k};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def intersection_diagram(S, T, max_shuffles=DEFAULT_MAX_SHUFFLES, max_nodes=DEFAULT_MAX_NODES):
    """Close the set of shuffles under pairwise intersection and record the inclusions."""
    S, T = as_tree(S), as_tree(T)
    shuffles = enumerate_shuffles(S, T, max_shuffles=max_shuffles)
    sets = [A.edges for A in shuffles]
    seen = set(sets)
    frontier = list(dict.fromkeys(sets))
    while frontier:
        nxt = []
        for X in frontier:
            for Y in sets:
                Z = X & Y
                if Z not in seen:
                    seen.add(Z)
                    nxt.append(Z)
                    if len(seen) > max_nodes:
                        raise ResourceLimitError(f"intersection diagram exceeds {max_nodes} nodes")
        frontier = nxt
    index_sets = {X: frozenset(i for i, Y in enumerate(sets) if X <= Y) for X in seen}
    order = sorted(seen, key=lambda X: (len(index_sets[X]), sorted(index_sets[X])))
    nodes = [_checked_tree(S, T, X) for X in order]
    idx = [index_sets[X] for X in order]
    arrows = []
    for k, I in enumerate(idx):
        above = [l for l, J in enumerate(idx) if I < J]
        for l in above:
            if not any(I < idx[m] < idx[l] for m in above):
                arrows.append((k, l))
    return IntersectionDiagram(shuffles, nodes, idx, arrows)


@dataclass(frozen=True)
class MaximalChain:
    """A saturated chain of edge pairs from the root pair to a leaf pair."""

    pairs: tuple

    @property
    def leaf(self):
        return self.pairs[-1]

    def __len__(self):
        return len(self.pairs)


def maximal_chains(S, T, max_chains=DEFAULT_MAX_CHAINS):
    """All saturated chains from ``(r_S, r_T)`` to a leaf pair, depth first."""
    S, T = as_tree(S), as_tree(T)
    out = []
    path = [(S.root, T.root)]

    def walk():
        s, t = path[-1]
        steps = [(c, t) for c in S.children(s)] + [(s, c) for c in T.children(t)]
        if not steps:
            out.append(MaximalChain(tuple(path)))
            if len(out) > max_chains:
                raise ResourceLimitError(f"more than {max_chains} maximal chains")
            return
        for p in steps:
            path.append(p)
            walk()
            path.pop()

    walk()
    return out


def chains_cover_check(S, T, max_shuffles=DEFAULT_MAX_SHUFFLES):
    """Every maximal chain lies in some shuffle, and every shuffle branch is a maximal chain."""
    S, T = as_tree(S), as_tree(T)
    chains = {c.pairs for c in maximal_chains(S, T)}
    covered = set()
    for A in enumerate_shuffles(S, T, max_shuffles=max_shuffles):
        for leaf in product(S.leaves, T.leaves):
            branch = tuple(A.path_to_root(leaf))
            if branch not in chains:
                return False
            covered.add(branch)
    return covered == chains
