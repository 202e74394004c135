"""Counting shuffles: the worked pairs, the closed forms, and the bounds."""

import math

from treeshuffle import (binary_tree, count_bounds, count_shuffles, linear_tree, parse_tree,
                         shuffle_polynomial, tree_factorial)

S, T = parse_tree("((e e))"), parse_tree("((e)(e))")
print("pair with drawn shuffles:", count_shuffles(S, T))
print("larger pair:", count_shuffles("(((e)(e)(e)))", "((((e)))(e))"))

# two linear trees shuffle like lattice paths in a grid
for p, q in [(2, 3), (5, 5), (10, 10)]:
    print(f"L{p} x L{q}: {count_shuffles(linear_tree(p), linear_tree(q))}"
          f"  (binomial {math.comb(p + q, p)})")

# binary trees grow doubly exponentially
for n in range(5):
    print(f"B{n} x B{n}: {count_shuffles(binary_tree(n), binary_tree(n))}")

b = count_bounds("((e))", "((e)(e))")
print(f"bounds: {b.lower} <= {count_shuffles('((e))', '((e)(e))')} <= {b.upper_sharp} <= {b.upper_coarse}")

# shuffles with L_n are counted by a polynomial of degree |S|
for text in ("(((e)(e)(e)))", "(((e))((e)))"):
    P = shuffle_polynomial(text)
    print(f"P for {text}: {P}   leading 1/{tree_factorial(parse_tree(text))}")
