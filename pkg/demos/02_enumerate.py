"""Listing shuffles and checking each one three independent ways."""

from treeshuffle import enumerate_shuffles, parse_tree, shuffles_with_stumps, verify_all

S, T = parse_tree("((e e))"), parse_tree("((e)(e))")
shuffles = enumerate_shuffles(S, T)
for i, A in enumerate(shuffles):
    verdicts = verify_all(S, T, A)
    print(f"{i:2d}  {A.picture():40s}  {'ok' if all(verdicts) else verdicts}")

# the first shuffle stacks copies of T on S, the last copies of S on T
print("bottom:", shuffles[0].picture())
print("top:   ", shuffles[-1].picture())

# stumps are pruned, the shuffles listed, and the stumps put back as marks
for d in shuffles_with_stumps("((e ()))", "(e ())"):
    print("with stumps:", d.picture())
