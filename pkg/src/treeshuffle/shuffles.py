"""Shuffles of two trees.

A shuffle of ``S`` and ``T`` is a tree ``A`` whose edges are pairs
``(s, t)`` of edge ids.  It is stored as its edge-pair set plus the parent
of every non-root pair.  Above an internal pair ``(s, t)`` sit either the
pairs ``(s_i, t)`` for the inputs ``s_i`` of the vertex above ``s`` (an
*S-step*, drawn white) or the pairs ``(s, t_j)`` (a *T-step*, drawn black).

Three independent tests of shuffle-hood are provided:

* :func:`verify_definition` checks the local step condition at every vertex;
* :func:`verify_branches` checks that each leaf-to-root path is a classical
  shuffle of the matching branches;
* :func:`verify_maximality` ignores the stored tree structure and asks
  whether the bare subset of ``E(S) x E(T)`` is a maximal treelike subset
  whose maximal elements are the leaf pairs.

:func:`brute_force_shuffles` finds all shuffles by searching subsets and
serves as the oracle for :func:`enumerate_shuffles`.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product

from .counting import count_shuffles
from .errors import ResourceLimitError
from .tree import Tree, as_tree, prune_stumps

S_STEP = "S"
T_STEP = "T"
DEFAULT_MAX_SHUFFLES = 10 ** 6


def pair_leq(S, T, p, q):
    return S.edge_leq(p[0], q[0]) and T.edge_leq(p[1], q[1])


class PairOrder:
    """The product order on ``E(S) x E(T)`` as up- and down-bitmasks over an indexing of the pairs."""

    def __init__(self, S, T):
        self.pairs = list(product(S.edges, T.edges))
        self.index = {p: i for i, p in enumerate(self.pairs)}
        n = len(self.pairs)
        self.up = [0] * n
        self.down = [0] * n
        for i, p in enumerate(self.pairs):
            for j, q in enumerate(self.pairs):
                if pair_leq(S, T, p, q):
                    self.up[i] |= 1 << j
                    self.down[j] |= 1 << i
        self.rank = [bin(m).count("1") for m in self.down]
        self.leaf_mask = self.mask(product(S.leaves, T.leaves))

    def mask(self, subset):
        m = 0
        for p in subset:
            m |= 1 << self.index[p]
        return m

    @staticmethod
    def members(m):
        out = []
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def maximal(self, m):
        return [i for i in self.members(m) if self.up[i] & m == 1 << i]

    def treelike(self, m):
        """Least element, and every down-segment of a maximal element is a chain."""
        items = self.members(m)
        if not items or not any(self.up[i] & m == m for i in items):
            return False
        for top in self.maximal(m):
            seg = self.down[top] & m
            for i in self.members(seg):
                if (self.up[i] | self.down[i]) & seg != seg:
                    return False
        return True


@lru_cache(maxsize=512)
def _pair_order(s_key, t_key):
    return PairOrder(Tree(*s_key), Tree(*t_key))


def pair_order(S, T):
    return _pair_order((S.lower, S.upper), (T.lower, T.upper))


@dataclass(frozen=True, eq=False)
class PairTree:
    """A tree whose edges are labelled by pairs in ``E(S) x E(T)``.

    ``parent`` maps each pair to the pair below it (``None`` for the root).
    """

    S: object
    T: object
    edges: frozenset
    parent: dict = field(repr=False)

    @classmethod
    def from_edges(cls, S, T, edges):
        """Attach the tree structure induced by the product order.

        Raises ``ValueError`` when that order is not treelike.
        """
        edges = frozenset(edges)
        order = pair_order(S, T)
        m = order.mask(edges)
        if not order.treelike(m):
            raise ValueError("induced order on the edge pairs is not treelike")
        parent = {}
        for p in edges:
            i = order.index[p]
            below = order.members(order.down[i] & m & ~(1 << i))
            parent[p] = order.pairs[max(below, key=order.rank.__getitem__)] if below else None
        return cls(S, T, edges, parent)

    @cached_property
    def root(self):
        roots = [p for p, q in self.parent.items() if q is None]
        return roots[0] if len(roots) == 1 else None

    @cached_property
    def children(self):
        kids = {p: [] for p in self.edges}
        for p, q in self.parent.items():
            if q is not None and q in kids:
                kids[q].append(p)
        return {p: tuple(sorted(c)) for p, c in kids.items()}

    @cached_property
    def leaves(self):
        return frozenset(p for p, c in self.children.items() if not c)

    def leaf_pairs(self):
        return frozenset(product(self.S.leaves, self.T.leaves))

    def path_to_root(self, p):
        path = [p]
        while self.parent[path[-1]] is not None:
            path.append(self.parent[path[-1]])
        return path[::-1]

    def same_pair(self, other):
        return self.S.same_labelling(other.S) and self.T.same_labelling(other.T)

    def __eq__(self, other):
        if not isinstance(other, PairTree):
            return NotImplemented
        return self.edges == other.edges and self.same_pair(other)

    def __hash__(self):
        return hash(self.edges)

    def __len__(self):
        return len(self.edges)


class Shuffle(PairTree):
    """A shuffle of ``S`` and ``T``; equality is by edge-pair set."""

    @cached_property
    def kind(self):
        """``S_STEP`` or ``T_STEP`` for each internal pair."""
        kinds = {}
        for p, kids in self.children.items():
            if kids:
                kinds[p] = S_STEP if all(k[1] == p[1] for k in kids) else T_STEP
        return kinds

    def branch_word(self, leaf_s, leaf_t):
        """The interleaving word read along the branch ending at ``(leaf_s, leaf_t)``."""
        return BranchShuffle(tuple(self.kind[p] for p in self.path_to_root((leaf_s, leaf_t))[:-1]))

    def picture(self, stumps=None):
        """Planar colour code: ``w(...)`` for S-steps, ``b(...)`` for T-steps, ``e`` for leaves.

        Children appear in the stored order of ``S`` and ``T``.  ``stumps``
        optionally maps leaf pairs to ``"S"``, ``"T"`` or ``"ST"``, drawn as
        ``w()``, ``b()`` and ``o()``.
        """
        stumps = stumps or {}
        marks = {S_STEP: "w()", T_STEP: "b()", "ST": "o()"}

        def code(p):
            if p not in self.kind:
                return marks[stumps[p]] if p in stumps else "e"
            s, t = p
            if self.kind[p] == S_STEP:
                kids = [(c, t) for c in self.S.children(s)]
                letter = "w"
            else:
                kids = [(s, c) for c in self.T.children(t)]
                letter = "b"
            return letter + "(" + " ".join(code(k) for k in kids) + ")"

        return code(self.root)

    def __repr__(self):
        return f"Shuffle({self.S.render()!r}, {self.T.render()!r}, {len(self.edges)} edges)"


@dataclass(frozen=True)
class BranchShuffle:
    """A classical shuffle of two linear orders, as a word over ``{S, T}``."""

    word: tuple

    def __post_init__(self):
        word = tuple(self.word)
        if any(x not in (S_STEP, T_STEP) for x in word):
            raise ValueError(f"bad letter in interleaving word {word!r}")
        object.__setattr__(self, "word", word)

    @property
    def s_steps(self):
        return self.word.count(S_STEP)

    @property
    def t_steps(self):
        return self.word.count(T_STEP)

    def __str__(self):
        return "".join(self.word)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a shuffle check; falsy on failure, with the first failing condition in ``reason``."""

    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


PASS = Verdict(True)


# -- construction -------------------------------------------------------------

def shuffle_from_choices(S, T, choose):
    """Grow a shuffle from the root, asking ``choose(s, t)`` for the step wherever both steps are possible."""
    parent = {(S.root, T.root): None}
    stack = [(S.root, T.root)]
    while stack:
        s, t = stack.pop()
        s_leaf, t_leaf = S.is_leaf(s), T.is_leaf(t)
        if s_leaf and t_leaf:
            continue
        if t_leaf or (not s_leaf and choose(s, t) == S_STEP):
            kids = [(c, t) for c in S.children(s)]
        else:
            kids = [(s, c) for c in T.children(t)]
        for k in kids:
            parent[k] = (s, t)
            stack.append(k)
    return Shuffle(S, T, frozenset(parent), parent)


def _check_pair(S, T):
    S, T = as_tree(S), as_tree(T)
    if S.has_stumps or T.has_stumps:
        raise ValueError("trees with stumps go through shuffles_with_stumps()")
    return S, T


def enumerate_shuffles(S, T, max_shuffles=DEFAULT_MAX_SHUFFLES, threads=1):
    """All shuffles of ``S`` and ``T``, bottom first, in canonical order.

    Follows the recursive decomposition: shuffles starting with the root
    vertex of ``S`` come before those starting with the root of ``T``, and
    within each summand the factors (one per child, children sorted by
    canonical code) vary lexicographically.  This order is a linear
    extension of the lattice order, so the first element is the bottom and
    the last is the top.
    """
    S, T = _check_pair(S, T)
    if max_shuffles is not None:
        n = count_shuffles(S, T)
        if n > max_shuffles:
            raise ResourceLimitError(f"{n} shuffles exceed the cap of {max_shuffles}")

    def summand(kind, memo):
        s, t = S.root, T.root
        if kind == S_STEP:
            kids = [(c, t) for c in S.sorted_children(s)]
        else:
            kids = [(s, c) for c in T.sorted_children(t)]
        return _combine(kids, (s, t), memo)

    def _combine(kids, p, memo):
        factors = [_bodies(k, memo) for k in kids]
        stem = tuple((k, p) for k in kids)
        return [stem + tuple(x for body in combo for x in body) for combo in product(*factors)]

    def _bodies(p, memo):
        hit = memo.get(p)
        if hit is not None:
            return hit
        s, t = p
        out = []
        if not S.is_leaf(s):
            out.extend(_combine([(c, t) for c in S.sorted_children(s)], p, memo))
        if not T.is_leaf(t):
            out.extend(_combine([(s, c) for c in T.sorted_children(t)], p, memo))
        if not out:
            out = [()]
        memo[p] = out
        return out

    root = (S.root, T.root)
    if S.is_unit and T.is_unit:
        bodies = [()]
    elif S.is_unit:
        bodies = summand(T_STEP, {})
    elif T.is_unit:
        bodies = summand(S_STEP, {})
    elif threads > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            left = pool.submit(summand, S_STEP, {})
            right = pool.submit(summand, T_STEP, {})
            bodies = left.result() + right.result()
    else:
        memo = {}
        bodies = summand(S_STEP, memo) + summand(T_STEP, memo)

    result = []
    for body in bodies:
        parent = {root: None}
        parent.update(body)
        result.append(Shuffle(S, T, frozenset(parent), parent))
    return result


def bottom_shuffle(S, T):
    """Copies of ``T`` on top of ``S``."""
    S, T = as_tree(S), as_tree(T)
    return shuffle_from_choices(S, T, lambda s, t: S_STEP)


def top_shuffle(S, T):
    """Copies of ``S`` on top of ``T``."""
    S, T = as_tree(S), as_tree(T)
    return shuffle_from_choices(S, T, lambda s, t: T_STEP)


def transpose(A):
    """The same shuffle seen in ``Sh(T, S)``."""
    parent = {(t, s): (None if q is None else (q[1], q[0])) for (s, t), q in A.parent.items()}
    return type(A)(A.T, A.S, frozenset(parent), parent)


# -- verification -------------------------------------------------------------

def _structure(S, T, A):
    pairs = pair_order(S, T).index
    if not A.edges:
        return Verdict(False, "(1) no edges")
    if A.parent.keys() != A.edges:
        return Verdict(False, "structure: parent map does not cover the edges")
    stray = [p for p in A.edges if p not in pairs]
    if stray:
        return Verdict(False, f"(1) label {stray[0]} is not in E(S) x E(T)")
    roots = [p for p, q in A.parent.items() if q is None]
    if len(roots) != 1:
        return Verdict(False, f"structure: {len(roots)} roots")
    reaches_root = set()
    for p in A.edges:
        walk = []
        q = p
        while q is not None and q not in reaches_root:
            if q in walk or q not in A.parent:
                return Verdict(False, "structure: parent links do not form a tree")
            walk.append(q)
            q = A.parent[q]
        reaches_root.update(walk)
    return PASS


def _root_and_leaves(S, T, A):
    if A.root != (S.root, T.root):
        return Verdict(False, f"(2) root is {A.root}, expected {(S.root, T.root)}")
    expected = A.leaf_pairs()
    if A.leaves != expected:
        missing = sorted(expected - A.leaves)
        extra = sorted(A.leaves - expected)
        detail = f"missing {missing[0]}" if missing else f"unexpected leaf {extra[0]}"
        return Verdict(False, f"(3) leaves are not the leaf pairs: {detail}")
    return PASS


def verify_definition(S, T, A):
    """Conditions (1)-(4): pair labels, root pair, leaf pairs, and the local step rule."""
    for check in (_structure, _root_and_leaves):
        v = check(S, T, A)
        if not v:
            return v
    for p, kids in A.children.items():
        if not kids:
            continue
        s, t = p
        kids = set(kids)
        if not S.is_leaf(s) and kids == {(c, t) for c in S.children(s)}:
            continue
        if not T.is_leaf(t) and kids == {(s, c) for c in T.children(t)}:
            continue
        return Verdict(False, f"(4) edges above {p} are neither an S-step nor a T-step")
    return PASS


def verify_branches(S, T, A):
    """Conditions (1)-(3) plus: every leaf-pair branch is a classical shuffle of its two branches."""
    for check in (_structure, _root_and_leaves):
        v = check(S, T, A)
        if not v:
            return v
    for ls in S.leaves:
        next_s = _successor_map(S.branch_path(ls))
        for lt in T.leaves:
            next_t = _successor_map(T.branch_path(lt))
            path = A.path_to_root((ls, lt))
            for (s, t), (s2, t2) in zip(path, path[1:]):
                if t2 == t and next_s.get(s) == s2:
                    continue
                if s2 == s and next_t.get(t) == t2:
                    continue
                return Verdict(False, f"(4') branch to {(ls, lt)} steps from {(s, t)} to {(s2, t2)}")
    return PASS


def _successor_map(path):
    return dict(zip(path, path[1:]))


def treelike(S, T, edges):
    """Whether the product order restricted to ``edges`` is treelike."""
    order = pair_order(S, T)
    return order.treelike(order.mask(edges))


def verify_maximality(S, T, A):
    """The subset ``A.edges`` is treelike, has the leaf pairs as maximal elements, and is maximal with that.

    Only the edge set is used.  Maximality is tested by single-element
    extensions: if some superset qualified, so would ``A`` plus any one of
    its extra elements.
    """
    edges = set(A.edges if isinstance(A, PairTree) else A)
    order = pair_order(S, T)
    stray = [p for p in edges if p not in order.index]
    if stray:
        return Verdict(False, f"(1) label {stray[0]} is not in E(S) x E(T)")
    m = order.mask(edges)

    def qualifies(x):
        return order.treelike(x) and sum(1 << i for i in order.maximal(x)) == order.leaf_mask

    if not order.treelike(m):
        return Verdict(False, "(1) induced order is not treelike")
    if sum(1 << i for i in order.maximal(m)) != order.leaf_mask:
        return Verdict(False, "(2) maximal elements are not the leaf pairs")
    for i, x in enumerate(order.pairs):
        if not m >> i & 1 and qualifies(m | 1 << i):
            return Verdict(False, f"(3) adding {x} keeps conditions (1) and (2)")
    return PASS


def verify_all(S, T, A):
    return verify_definition(S, T, A), verify_branches(S, T, A), verify_maximality(S, T, A)


# -- oracle ---------------------------------------------------------------------

def treelike_candidates(S, T, cap=24):
    """Every subset of ``E(S) x E(T)`` that is treelike and contains all leaf pairs as its maxima.

    Exhaustive search over subsets, pruned by the (monotone) requirement
    that no two incomparable chosen pairs lie below a common leaf pair.
    Subsets are handled as bitmasks over the pairs and returned as
    frozensets.
    """
    S, T = as_tree(S), as_tree(T)
    if S.n_edges * T.n_edges > cap:
        raise ResourceLimitError(
            f"|E(S)|*|E(T)| = {S.n_edges * T.n_edges} exceeds the brute-force cap {cap}")
    order = pair_order(S, T)
    pairs, up, leaf_mask = order.pairs, order.up, order.leaf_mask
    n = len(pairs)
    others = [i for i in range(n) if not leaf_mask >> i & 1]
    # i and j clash when incomparable but both below some leaf pair
    clash = [0] * n
    for i in others:
        for j in others:
            if i != j and not (up[i] >> j & 1 or up[j] >> i & 1) and up[i] & up[j] & leaf_mask:
                clash[i] |= 1 << j
    found = []

    def search(k, chosen):
        if k == len(others):
            # chains below leaves are automatic; still need a least element
            if any(chosen >> i & 1 and up[i] & chosen == chosen for i in range(n)):
                found.append(chosen)
            return
        i = others[k]
        if not clash[i] & chosen:
            search(k + 1, chosen | 1 << i)
        search(k + 1, chosen)

    search(0, leaf_mask)
    return [frozenset(pairs[i] for i in range(n) if m >> i & 1) for m in found]


def brute_force_shuffles(S, T, cap=24):
    """Shuffles found as the inclusion-maximal members of :func:`treelike_candidates`."""
    S, T = as_tree(S), as_tree(T)
    candidates = sorted(treelike_candidates(S, T, cap), key=len, reverse=True)
    maxima = []
    for c in candidates:
        if not any(c < m for m in maxima):
            maxima.append(c)
    return [Shuffle.from_edges(S, T, m) for m in maxima]


# -- extension, stumps ------------------------------------------------------------

def extend_branch_shuffle(S, T, leaf_s, leaf_t, word):
    """A shuffle of ``S`` and ``T`` whose branch to ``(leaf_s, leaf_t)`` reads ``word``.

    Off that branch every free choice is an S-step.
    """
    S, T = _check_pair(S, T)
    word = word if isinstance(word, BranchShuffle) else BranchShuffle(tuple(word))
    path_s, path_t = S.branch_path(leaf_s), T.branch_path(leaf_t)
    if word.s_steps != len(path_s) - 1 or word.t_steps != len(path_t) - 1:
        raise ValueError(
            f"word {word} is not an interleaving of branches with "
            f"{len(path_s) - 1} and {len(path_t) - 1} vertices")
    forced = {}
    i = j = 0
    for letter in word.word:
        forced[(path_s[i], path_t[j])] = letter
        if letter == S_STEP:
            i += 1
        else:
            j += 1
    return shuffle_from_choices(S, T, lambda s, t: forced.get((s, t), S_STEP))


@dataclass(frozen=True)
class StumpedShuffle:
    """A shuffle of the pruned trees together with the stumps put back on its leaf pairs.

    ``stumps`` maps a leaf pair to ``"S"`` (stump of ``S``, white), ``"T"``
    (black) or ``"ST"`` (both).
    """

    shuffle: Shuffle
    stumps: dict = field(hash=False)

    def picture(self):
        return self.shuffle.picture(self.stumps)


def shuffles_with_stumps(S, T, max_shuffles=DEFAULT_MAX_SHUFFLES):
    """Shuffles of trees that may have stumps, via the pruned trees.

    Pruning keeps edge ids, so leaf pairs of the pruned shuffle name the
    same edges as in ``S`` and ``T``.
    """
    S, T = as_tree(S), as_tree(T)
    S0, stumps_s = prune_stumps(S)
    T0, stumps_t = prune_stumps(T)
    result = []
    for A in enumerate_shuffles(S0, T0, max_shuffles=max_shuffles):
        marks = {}
        for ls, lt in product(S0.leaves, T0.leaves):
            tag = ("S" if ls in stumps_s else "") + ("T" if lt in stumps_t else "")
            if tag:
                marks[(ls, lt)] = tag
        result.append(StumpedShuffle(A, marks))
    return result
