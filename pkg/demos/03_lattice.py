"""The shuffles form a distributive lattice of open sets; shuffles also compose."""

from treeshuffle import (bottom, check_aut_theorem, compose, enumerate_shuffles, hasse,
                         identity_shuffle, join, meet, parse_tree, to_open_set, top)

S, T = parse_tree("((e))"), parse_tree("((e)(e))")
h = hasse(S, T)
for i, A in enumerate(h.nodes):
    print(i, A.picture(), sorted(to_open_set(A).minimal))
print("covers:", h.edges)

shuffles = h.nodes
A, B = shuffles[3], shuffles[5]
print("meet:", meet(A, B).picture())
print("join:", join(A, B).picture())
print("bottom is first, top is last:", bottom(S, T) == shuffles[0], top(S, T) == shuffles[-1])

# composition Sh(S,T) x Sh(R,S) -> Sh(R,T)
R = parse_tree("(e)")
f = shuffles[4]
for g in enumerate_shuffles(R, S):
    print("compose:", compose(f, g).picture())
print("unit law:", compose(f, identity_shuffle(S)) == f)

print(check_aut_theorem(S, T))
print(check_aut_theorem("((e))", "((e))"))
