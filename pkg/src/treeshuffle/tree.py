"""Rooted trees with open root and leaf edges.

A tree is stored by its edges: edge ``e`` has a lower endpoint
``lower[e]`` (a vertex, or ``None`` for the root opening) and an upper
endpoint ``upper[e]`` (a vertex, or ``None`` for a leaf).  Vertex ``v`` has
exactly one outgoing edge (the edge with ``upper == v``) and any number of
incoming edges; a vertex with no incoming edges is a stump.

Trees are unordered: ``==`` and ``hash`` compare canonical codes, so two
differently labelled copies of the same shape are equal.  Anything that
depends on the actual edge or vertex ids (shuffles, open sets) must use
:meth:`Tree.same_labelling` instead.

Text format::

    Tree ::= "e" | "(" Tree* ")"

``e`` is the unit tree (a single edge), ``(t1 ... tk)`` is a root edge
into a vertex carrying ``t1 ... tk``, and ``()`` is a stump.  Parsing
numbers edges and vertices in pre-order.
"""

import json
import math
import random
from collections import Counter
from functools import cached_property, lru_cache
from itertools import combinations_with_replacement

from .errors import TreeSyntaxError
from .poset import FinitePoset

UNIT = "e"


class Tree:
    """An immutable rooted tree; see the module docstring for the layout."""

    def __init__(self, lower, upper):
        lower = tuple(lower)
        upper = tuple(upper)
        if len(lower) != len(upper) or not lower:
            raise ValueError("a tree needs at least one edge and matching endpoint lists")
        roots = [e for e, v in enumerate(lower) if v is None]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root edge, found {len(roots)}")
        n_vertices = len([v for v in upper if v is not None])
        if sorted(v for v in upper if v is not None) != list(range(n_vertices)):
            raise ValueError("every vertex must be the upper end of exactly one edge")
        if any(v is not None and not 0 <= v < n_vertices for v in lower):
            raise ValueError("lower endpoint refers to an unknown vertex")
        self.lower = lower
        self.upper = upper
        self.root = roots[0]
        out = [0] * n_vertices
        for e, v in enumerate(upper):
            if v is not None:
                out[v] = e
        inputs = [[] for _ in range(n_vertices)]
        for e, v in enumerate(lower):
            if v is not None:
                inputs[v].append(e)
        self._out = tuple(out)
        self._in = tuple(tuple(es) for es in inputs)
        # walk from the root; also rejects cycles and disconnected pieces
        below = {self.root: frozenset([self.root])}
        preorder = []
        stack = [self.root]
        while stack:
            e = stack.pop()
            preorder.append(e)
            v = upper[e]
            if v is None:
                continue
            for c in reversed(self._in[v]):
                if c in below:
                    raise ValueError("edge structure contains a cycle")
                below[c] = below[e] | {c}
                stack.append(c)
        if len(below) != len(lower):
            raise ValueError("edge structure is not connected")
        self._below = tuple(below[e] for e in range(len(lower)))
        self._preorder = tuple(preorder)

    # -- construction --------------------------------------------------------

    @classmethod
    def from_term(cls, term):
        """Build from a nested term: ``"e"`` for an edge ending in a leaf, a tuple for a vertex."""
        lower, upper = [], []
        stack = [(term, None)]
        n_vertices = 0
        while stack:
            t, below_vertex = stack.pop()
            lower.append(below_vertex)
            if t == UNIT:
                upper.append(None)
                continue
            if not isinstance(t, tuple):
                raise ValueError(f"bad tree term {t!r}")
            v = n_vertices
            n_vertices += 1
            upper.append(v)
            for child in reversed(t):
                stack.append((child, v))
        return cls(lower, upper)

    # -- basic structure -----------------------------------------------------

    @property
    def n_edges(self):
        return len(self.lower)

    @property
    def n_vertices(self):
        return len(self._out)

    @property
    def edges(self):
        return range(self.n_edges)

    @property
    def vertices(self):
        return range(self.n_vertices)

    @property
    def root_vertex(self):
        return self.upper[self.root]

    @cached_property
    def leaves(self):
        return tuple(e for e in self.edges if self.upper[e] is None and e != self.root) or (
            (self.root,) if self.is_unit else ())

    @property
    def is_unit(self):
        return self.n_edges == 1

    def is_leaf(self, e):
        return self.upper[e] is None

    def out_edge(self, v):
        return self._out[v]

    def in_edges(self, v):
        return self._in[v]

    def children(self, e):
        """Edges directly above ``e`` (the inputs of its upper vertex)."""
        v = self.upper[e]
        return () if v is None else self._in[v]

    def parent_edge(self, e):
        v = self.lower[e]
        return None if v is None else self._out[v]

    @cached_property
    def stumps(self):
        return tuple(v for v in self.vertices if not self._in[v])

    @property
    def has_stumps(self):
        return bool(self.stumps)

    @cached_property
    def top_vertices(self):
        return tuple(v for v in self.vertices
                     if all(self.upper[e] is None for e in self._in[v]))

    @property
    def is_linear(self):
        return all(len(self._in[v]) == 1 for v in self.vertices)

    @cached_property
    def is_reduced(self):
        if self.has_stumps:
            return False
        tops = set(self.top_vertices)
        return all(
            sum(1 for e in self._in[v] if self.upper[e] is None) == (1 if v in tops else 0)
            for v in self.vertices)

    # -- order ---------------------------------------------------------------

    def edge_leq(self, e, f):
        """``e <= f``: ``e`` lies on the path from ``f`` down to the root."""
        return e in self._below[f]

    def vertex_leq(self, v, w):
        return self._out[v] in self._below[self._out[w]]

    def down_edges(self, e):
        return self._below[e]

    def branch_path(self, leaf):
        """Edges from the root up to ``leaf``, in order."""
        return tuple(sorted(self._below[leaf], key=lambda e: len(self._below[e])))

    def vertices_above(self, e):
        """Vertices ``v`` with ``out_edge(v) >= e``."""
        return tuple(v for v in self.vertices if e in self._below[self._out[v]])

    # -- canonical form ------------------------------------------------------

    @cached_property
    def _codes(self):
        codes = [None] * self.n_edges
        for e in reversed(self._preorder):
            v = self.upper[e]
            if v is None:
                codes[e] = UNIT
            else:
                codes[e] = "(" + "".join(sorted(codes[c] for c in self._in[v])) + ")"
        return tuple(codes)

    def subtree_code(self, e):
        """Canonical code of the subtree standing on edge ``e``."""
        return self._codes[e]

    @property
    def code(self):
        return self._codes[self.root]

    def sorted_children(self, e):
        """Children of ``e`` ordered by canonical code, ties broken by id."""
        return tuple(sorted(self.children(e), key=lambda c: (self._codes[c], c)))

    def term(self, e=None):
        e = self.root if e is None else e
        v = self.upper[e]
        if v is None:
            return UNIT
        return tuple(self.term(c) for c in self._in[v])

    def render(self, e=None):
        """Tree-grammar text in stored child order (``parse_tree`` inverts this)."""
        return render_term(self.term(e))

    def same_labelling(self, other):
        return self is other or (self.lower == other.lower and self.upper == other.upper)

    def __eq__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return self.code == other.code

    def __hash__(self):
        return hash(self.code)

    def __repr__(self):
        return f"Tree({self.render()!r})"

    # -- export --------------------------------------------------------------

    def to_json(self):
        return {
            "edges": [{"id": e, "parent_vertex": self.lower[e], "child_vertex": self.upper[e]}
                      for e in self.edges],
            "root": self.root,
        }

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        edges = sorted(data["edges"], key=lambda d: d["id"])
        if [d["id"] for d in edges] != list(range(len(edges))):
            raise ValueError("edge ids must be 0..n-1")
        tree = cls([d["parent_vertex"] for d in edges], [d["child_vertex"] for d in edges])
        if tree.root != data["root"]:
            raise ValueError("declared root does not match the edge list")
        return tree

    # -- posets --------------------------------------------------------------

    @cached_property
    def edge_poset(self):
        return FinitePoset(self.edges, self.edge_leq)

    @cached_property
    def vertex_poset(self):
        return FinitePoset(self.vertices, self.vertex_leq)


def render_term(term):
    if term == UNIT:
        return UNIT
    return "(" + " ".join(render_term(t) for t in term) + ")"


def parse_tree(text):
    """Parse the tree grammar; whitespace between tokens is ignored."""
    if isinstance(text, bytes):
        data = text
    else:
        data = text.encode("utf-8")
    pos = 0
    n = len(data)

    def skip():
        nonlocal pos
        while pos < n and data[pos] in b" \t\r\n":
            pos += 1

    def parse_one():
        nonlocal pos
        skip()
        if pos >= n:
            raise TreeSyntaxError("unexpected end of input", pos)
        ch = data[pos]
        if ch == ord("e"):
            pos += 1
            return UNIT
        if ch == ord("("):
            pos += 1
            children = []
            while True:
                skip()
                if pos >= n:
                    raise TreeSyntaxError("unclosed '('", pos)
                if data[pos] == ord(")"):
                    pos += 1
                    return tuple(children)
                children.append(parse_one())
        raise TreeSyntaxError(f"unexpected character {chr(ch)!r}", pos)

    skip()
    if pos >= n:
        raise TreeSyntaxError("empty input", pos)
    term = parse_one()
    skip()
    if pos != n:
        raise TreeSyntaxError("trailing input", pos)
    return Tree.from_term(term)


def as_tree(t):
    return t if isinstance(t, Tree) else parse_tree(t)


# -- standard families ------------------------------------------------------

def unit_tree():
    return Tree.from_term(UNIT)


def linear_tree(n):
    """``L_n``: ``n`` unary vertices in a chain."""
    term = UNIT
    for _ in range(n):
        term = (term,)
    return Tree.from_term(term)


def corolla(m):
    return Tree.from_term((UNIT,) * m)


def binary_tree(p):
    """``B_p``: the full binary tree all of whose branches have ``p`` vertices."""
    term = UNIT
    for _ in range(p):
        term = (term, term)
    return Tree.from_term(term)


def graft(subtrees):
    """Corolla ``C_m`` with ``subtrees`` grafted on its leaves."""
    return Tree.from_term(tuple(as_tree(s).term() for s in subtrees))


# -- decompositions ---------------------------------------------------------

def decompose(t):
    """``None`` for the unit tree, else ``(m, subtrees)`` with ``t = C_m[subtrees]``.

    Subtrees come sorted by canonical code.
    """
    if t.is_unit:
        return None
    kids = t.sorted_children(t.root)
    return len(kids), [Tree.from_term(t.term(c)) for c in kids]


def branches(t):
    """The branch below each leaf, as a linear tree."""
    return [linear_tree(len(t.branch_path(leaf)) - 1) for leaf in t.leaves]


def edge_poset(t):
    return t.edge_poset


def vertex_poset(t):
    return t.vertex_poset


def reduce(t):
    """Keep exactly one leaf on each top vertex and drop every other leaf.

    Vertex ids are preserved.  The unit tree is returned unchanged.
    """
    if t.has_stumps:
        raise ValueError("reduce() needs a stump-free tree; prune_stumps() first")
    if t.is_unit:
        return t

    def build(e):
        v = t.upper[e]
        inner = [c for c in t.in_edges(v) if t.upper[c] is not None]
        if not inner:
            return (UNIT,)
        return tuple(build(c) for c in inner)

    return Tree.from_term(build(t.root))


def prune_stumps(t):
    """Remove every stump vertex, turning its outgoing edge into a leaf.

    Returns ``(pruned, stump_leaves)``.  Edge ids are shared between ``t``
    and ``pruned``, and ``stump_leaves`` is the set of leaves of ``pruned``
    that carried a stump in ``t``.  A tree whose only vertex is a stump is
    rejected.
    """
    stumps = set(t.stumps)
    if not stumps:
        return t, frozenset()
    if t.root_vertex in stumps:
        raise ValueError("degenerate tree: a single stump on the root edge")
    keep = [v for v in t.vertices if v not in stumps]
    renumber = {v: i for i, v in enumerate(keep)}
    upper = [None if v is None or v in stumps else renumber[v] for v in t.upper]
    lower = [None if v is None else renumber[v] for v in t.lower]
    stump_leaves = frozenset(t.out_edge(v) for v in stumps)
    return Tree(lower, upper), stump_leaves


# -- statistics -------------------------------------------------------------

def height(t):
    """Number of vertices on the longest branch."""
    return max((len(t.down_edges(t.out_edge(v))) for v in t.vertices), default=0)


def subtree_size(t, v):
    """``|S_v|``: number of vertices at or above ``v``."""
    return len(t.vertices_above(t.out_edge(v)))


def tree_factorial(t):
    """Product over vertices ``v`` of ``|S_v|``."""
    return math.prod(subtree_size(t, v) for v in t.vertices)


def canonical_form(t):
    return t.code


# -- automorphisms ----------------------------------------------------------

def isomorphism(a, b):
    """An edge map ``a -> b`` realising an isomorphism, or ``None``."""
    if a.code != b.code:
        return None
    mapping = {}
    stack = [(a.root, b.root)]
    while stack:
        x, y = stack.pop()
        mapping[x] = y
        stack.extend(zip(a.sorted_children(x), b.sorted_children(y)))
    return mapping


def tree_automorphisms(t):
    """``(order, generators)`` of the automorphism group of ``t``.

    Generators are edge permutations (tuples indexed by edge id), one
    transposition of adjacent equal subtrees for every vertex and every
    group of isomorphic children.  Edges rather than vertices are used so
    that swapping two leaves of one vertex is visible.
    """
    order = 1
    generators = []
    identity = tuple(t.edges)
    for v in t.vertices:
        groups = {}
        for c in t.in_edges(v):
            groups.setdefault(t.subtree_code(c), []).append(c)
        for same in groups.values():
            order *= math.factorial(len(same))
            for x, y in zip(same, same[1:]):
                perm = list(identity)
                for src, dst in [(x, y), (y, x)]:
                    for e_src, e_dst in _embed_subtree_iso(t, src, dst).items():
                        perm[e_src] = e_dst
                generators.append(tuple(perm))
    return order, generators


def _embed_subtree_iso(t, x, y):
    mapping = {}
    stack = [(x, y)]
    while stack:
        p, q = stack.pop()
        mapping[p] = q
        stack.extend(zip(t.sorted_children(p), t.sorted_children(q)))
    return mapping


def vertex_action(t, edge_perm):
    """The vertex permutation induced by an edge automorphism."""
    return tuple(t.upper[edge_perm[t.out_edge(v)]] for v in t.vertices)


# -- generating small trees -------------------------------------------------

@lru_cache(maxsize=None)
def _terms_with_edges(k):
    if k == 1:
        return (UNIT,)
    result = []
    for parts in _partitions(k - 1):
        pools = [sorted(set(_terms_with_edges(p)), key=render_term) for p in parts]
        result.extend(_multiset_products(parts, pools))
    return tuple(sorted(set(result), key=render_term))


@lru_cache(maxsize=None)
def _reduced_terms(n):
    """Reduced trees with ``n`` vertices, as terms (``n >= 1``)."""
    if n == 1:
        return ((UNIT,),)
    result = []
    for parts in _partitions(n - 1):
        pools = [sorted(set(_reduced_terms(p)), key=render_term) for p in parts]
        result.extend(_multiset_products(parts, pools))
    return tuple(sorted(set(result), key=render_term))


def _partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def _multiset_products(parts, pools):
    counts = Counter(parts)
    per_size = []
    for size, mult in sorted(counts.items()):
        pool = pools[parts.index(size)]
        per_size.append(list(combinations_with_replacement(pool, mult)))
    results = []

    def rec(i, acc):
        if i == len(per_size):
            results.append(_canonical_term(tuple(acc)))
            return
        for combo in per_size[i]:
            rec(i + 1, acc + list(combo))

    rec(0, [])
    return results


def _canonical_term(term):
    if term == UNIT:
        return UNIT
    return tuple(sorted((_canonical_term(t) for t in term), key=render_term))


def trees_with_edges(k):
    """All stump-free trees with exactly ``k`` edges, one per isomorphism class."""
    return [Tree.from_term(t) for t in _terms_with_edges(k)]


def reduced_trees(n):
    """All reduced trees with exactly ``n`` vertices (the unit tree for ``n == 0``)."""
    if n == 0:
        return [unit_tree()]
    return [Tree.from_term(t) for t in _reduced_terms(n)]


def random_tree(max_vertices, rng=None, leaf_prob=0.3):
    """A random stump-free tree with between 1 and ``max_vertices`` vertices.

    Vertices are attached one at a time to a uniformly chosen earlier vertex;
    top vertices then get one or two leaves and the others a leaf with
    probability ``leaf_prob``.
    """
    rng = rng if rng is not None else random.Random()
    n = rng.randint(1, max_vertices)
    kids = [[] for _ in range(n)]
    for v in range(1, n):
        kids[rng.randrange(v)].append(v)

    def term(v):
        sub = [term(c) for c in kids[v]]
        if not kids[v]:
            sub += [UNIT] * rng.randint(1, 2)
        elif rng.random() < leaf_prob:
            sub.append(UNIT)
        rng.shuffle(sub)
        return tuple(sub)

    return Tree.from_term(term(0))
