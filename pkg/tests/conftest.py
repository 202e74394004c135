import random
import re

import pytest
from hypothesis import strategies as st

from treeshuffle.shuffles import Shuffle
from treeshuffle.tree import Tree, parse_tree

# the worked pair whose 14 shuffles are drawn one by one; S has a vertex
# on its root edge carrying a two-leaf vertex
PAIR14_S = "((e e))"
PAIR14_T = "((e)(e))"
# same lattice, with the reduced first tree
PAIR14_S_RED = "((e))"

CRANCH_S = "(((e)(e)(e)))"
CRANCH_T = "((((e)))(e))"

STUMP_S = "((e ()))"
STUMP_T = "(e ())"

# the 14 drawings as colour codes: w = white (S-step), b = black (T-step),
# children in the order the drawings show them
PICTURES_14 = [
    "w(w(b(b(e)b(e)) b(b(e)b(e))))",
    "w(b(w(b(e)b(e)) w(b(e)b(e))))",
    "w(b(w(b(e)b(e)) b(w(ee))))",
    "w(b(b(w(ee)) w(b(e)b(e))))",
    "w(b(b(w(ee)) b(w(ee))))",
    "b(w(w(b(e)b(e))) w(w(b(e)b(e))))",
    "b(w(w(b(e)b(e))) w(b(w(ee))))",
    "b(w(w(b(e)b(e))) b(w(w(ee))))",
    "b(w(b(w(ee))) w(w(b(e)b(e))))",
    "b(w(b(w(ee))) w(b(w(ee))))",
    "b(w(b(w(ee))) b(w(w(ee))))",
    "b(b(w(w(ee))) w(w(b(e)b(e))))",
    "b(b(w(w(ee))) w(b(w(ee))))",
    "b(b(w(w(ee))) b(w(w(ee))))",
]

# the three drawings of the stump example; w() / b() / o() mark a stump
# of the first tree, of the second, or of both
STUMP_PICTURES = [
    "b(w(w(e w())) w(w(b() o())))",
    "w(b(w(e w()) w(b() o())))",
    "w(w(b(e b()) b(w() o())))",
]


def squash(code):
    return re.sub(r"\s+", "", code)


def parse_picture(code):
    """Picture code -> nested ``(letter, [children])``; leaves are ``("e", [])``."""
    text = squash(code)
    pos = 0

    def node():
        nonlocal pos
        letter = text[pos]
        pos += 1
        if letter == "e":
            return ("e", [])
        assert text[pos] == "("
        pos += 1
        kids = []
        while text[pos] != ")":
            kids.append(node())
        pos += 1
        return (letter, kids)

    result = node()
    assert pos == len(text)
    return result


def shuffle_from_picture(S, T, code):
    """Read a drawing back into a labelled tree over edge pairs, without any checking."""
    parent = {(S.root, T.root): None}

    def walk(p, item):
        letter, kids = item
        s, t = p
        if letter == "w":
            above = [(c, t) for c in S.children(s)]
        elif letter == "b":
            above = [(s, c) for c in T.children(t)]
        else:
            return
        assert len(above) == len(kids)
        for q, sub in zip(above, kids):
            parent[q] = p
            walk(q, sub)

    walk((S.root, T.root), parse_picture(code))
    return Shuffle(S, T, frozenset(parent), parent)


def random_pair(rng, max_vertices):
    from treeshuffle.tree import random_tree
    return random_tree(max_vertices, rng), random_tree(max_vertices, rng)


def terms(max_leaves=6):
    """Hypothesis strategy for tree terms without stumps."""
    return st.recursive(st.just("e"),
                        lambda kids: st.lists(kids, min_size=1, max_size=3).map(tuple),
                        max_leaves=max_leaves)


def trees(max_leaves=6):
    return terms(max_leaves).map(Tree.from_term)


@pytest.fixture
def pair14():
    return parse_tree(PAIR14_S), parse_tree(PAIR14_T)


@pytest.fixture
def pair14_red():
    return parse_tree(PAIR14_S_RED), parse_tree(PAIR14_T)


@pytest.fixture
def rng():
    return random.Random(20240611)
