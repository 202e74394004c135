"""Intersections of shuffles and the maximal chains they cover."""

from treeshuffle import (chains_cover_check, enumerate_shuffles, intersect_shuffles,
                         intersection_diagram, maximal_chains)

S, T = "((e))", "((e))"
shuffles = enumerate_shuffles(S, T)
X = intersect_shuffles(shuffles[0], shuffles[-1])
print("bottom and top meet in", len(X), "edge pairs, root", X.root)

chains = maximal_chains(S, T)
print(len(chains), "maximal chains; all covered by shuffles:", chains_cover_check(S, T))

d = intersection_diagram(S, T)
for k, I in enumerate(d.index_sets):
    print(k, sorted(I), len(d.nodes[k]), "edge pairs")
print(len(d.arrows), "arrows")
