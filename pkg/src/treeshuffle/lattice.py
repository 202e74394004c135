"""The lattice of shuffles.

A shuffle is determined by which vertices of ``T`` it pushes below which
vertices of ``S``.  Recording the pairs ``(v, w)`` with ``w`` below ``v``
gives an upward-closed subset of ``V(S) x V(T)^op``, where
``(v, w) <= (v', w')`` iff ``v <= v'`` in ``S`` and ``w >= w'`` in ``T``.
Every open set arises from exactly one shuffle, so ``Sh(S, T)`` is the
distributive lattice of open sets ordered by inclusion.  A covering step
adds one pair to the open set; on trees it is a percolation step, which
moves one black (T) vertex down through a white (S) vertex.
"""

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from .errors import ResourceLimitError
from .poset import FinitePoset, cycles
from .shuffles import (S_STEP, T_STEP, Shuffle, bottom_shuffle, enumerate_shuffles,
                       shuffle_from_choices, top_shuffle)
from .tree import Tree, as_tree, isomorphism, reduce, tree_automorphisms

AUT_POSET_CAP = 30


class PairPoset(FinitePoset):
    """``V(S) x V(T)^op`` with its product order."""

    def __init__(self, S, T):
        self.S, self.T = S, T
        elements = [(v, w) for v in S.vertices for w in T.vertices]
        super().__init__(elements, lambda p, q: S.vertex_leq(p[0], q[0]) and T.vertex_leq(q[1], p[1]))


@lru_cache(maxsize=256)
def _pair_poset(s_key, t_key):
    return PairPoset(Tree(*s_key), Tree(*t_key))


def _key(t):
    return (t.lower, t.upper)


def pair_poset(S, T):
    return _pair_poset(_key(S), _key(T))


@dataclass(frozen=True, eq=False)
class OpenSet:
    """An upward-closed subset of a :class:`PairPoset`, stored as its antichain of minimal elements."""

    poset: PairPoset = field(repr=False)
    minimal: frozenset

    @classmethod
    def from_members(cls, poset, members):
        members = frozenset(members)
        unknown = [x for x in members if x not in poset]
        if unknown:
            raise ValueError(f"{unknown[0]} is not a vertex pair of this tree pair")
        if not poset.is_upset(members):
            raise ValueError("subset is not upward closed")
        return cls(poset, poset.minimal(members))

    @classmethod
    def generated(cls, poset, generators):
        return cls(poset, poset.minimal(poset.upset(generators)))

    @cached_property
    def members(self):
        return self.poset.upset(self.minimal)

    def __contains__(self, x):
        return any(self.poset.leq(m, x) for m in self.minimal)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def _check(self, other):
        if self.poset is not other.poset:
            raise ValueError("open sets belong to different tree pairs")

    def __or__(self, other):
        self._check(other)
        return OpenSet(self.poset, self.poset.minimal(self.minimal | other.minimal))

    def __and__(self, other):
        self._check(other)
        return OpenSet(self.poset, self.poset.minimal(self.members & other.members))

    def __le__(self, other):
        self._check(other)
        return self.members <= other.members

    def __eq__(self, other):
        if not isinstance(other, OpenSet):
            return NotImplemented
        return self.poset is other.poset and self.minimal == other.minimal

    def __hash__(self):
        return hash(self.minimal)

    def __repr__(self):
        return f"OpenSet({sorted(self.minimal)})"


# -- the isomorphism ---------------------------------------------------------------

def to_open_set(A):
    """The pairs ``(v, w)`` such that the T-vertex ``w`` sits below the S-vertex ``v`` in ``A``.

    A T-step at ``(s, t)`` introduces ``w = upper(t)``; every S-vertex whose
    outgoing edge lies at or above ``s`` is still to come, hence above ``w``.
    """
    S, T = A.S, A.T
    poset = pair_poset(S, T)
    members = set()
    for (s, t), kind in A.kind.items():
        if kind == T_STEP:
            w = T.upper[t]
            members.update((v, w) for v in S.vertices_above(s))
    return OpenSet.from_members(poset, members)


def from_open_set(S, T, U):
    """The shuffle whose open set is ``U``; inverse of :func:`to_open_set`.

    ``U`` may be an :class:`OpenSet` or any iterable of vertex pairs; it
    must be upward closed.
    """
    S, T = as_tree(S), as_tree(T)
    poset = pair_poset(S, T)
    if not isinstance(U, OpenSet):
        U = OpenSet.from_members(poset, U)
    elif U.poset is not poset:
        raise ValueError("open set belongs to a different tree pair")
    members = U.members
    return shuffle_from_choices(
        S, T, lambda s, t: T_STEP if (S.upper[s], T.upper[t]) in members else S_STEP)


def percolation_successors(A):
    """Shuffles reached from ``A`` by one percolation step.

    At a white vertex ``(s, t)`` all of whose children ``(s_i, t)`` are black
    with the same T-vertex, the black vertex moves down: ``(s_i, t)`` is
    replaced by ``(s, t_j)`` and ``(s_i, t_j)`` is re-attached above it.
    """
    out = []
    for p, kind in sorted(A.kind.items()):
        if kind != S_STEP:
            continue
        kids = A.children[p]
        if not all(A.kind.get(k) == T_STEP for k in kids):
            continue
        s, t = p
        t_kids = A.T.children(t)
        parent = dict(A.parent)
        for k in kids:
            del parent[k]
        for tj in t_kids:
            parent[(s, tj)] = p
            for k in kids:
                parent[(k[0], tj)] = (s, tj)
        out.append(Shuffle(A.S, A.T, frozenset(parent), parent))
    return out


# -- lattice operations --------------------------------------------------------------

def _same_pair(A, B):
    if not A.same_pair(B):
        raise ValueError("shuffles belong to different tree pairs")


def leq(A, B):
    _same_pair(A, B)
    return to_open_set(A) <= to_open_set(B)


def meet(A, B):
    _same_pair(A, B)
    return from_open_set(A.S, A.T, to_open_set(A) & to_open_set(B))


def join(A, B):
    _same_pair(A, B)
    return from_open_set(A.S, A.T, to_open_set(A) | to_open_set(B))


def bottom(S, T):
    return bottom_shuffle(S, T)


def top(S, T):
    return top_shuffle(S, T)


@dataclass
class HasseDiagram:
    """Shuffles in canonical order and the covering pairs ``(i, j)`` with ``nodes[i] < nodes[j]``."""

    nodes: list
    edges: list

    def to_dot(self):
        lines = ["digraph hasse {", "  rankdir=BT;", "  node [shape=box, fontname=monospace];"]
        for i, A in enumerate(self.nodes):
            label = " ".join(f"{v},{w}" for v, w in sorted(to_open_set(A).minimal)) or "{}"
            lines.append(f'  n{i} [label="{i}: {label}"];')
        for i, j in self.edges:
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def hasse(S, T, max_shuffles=None):
    """Hasse diagram of ``Sh(S, T)``, built from percolation steps."""
    kwargs = {} if max_shuffles is None else {"max_shuffles": max_shuffles}
    nodes = enumerate_shuffles(S, T, **kwargs)
    index = {A: i for i, A in enumerate(nodes)}
    edges = sorted((i, index[B]) for i, A in enumerate(nodes) for B in percolation_successors(A))
    return HasseDiagram(nodes, edges)


def open_set_covers(shuffles):
    """Pairs ``(i, j)`` whose open sets differ by exactly one added element."""
    shuffles = list(shuffles)
    if not shuffles:
        return []
    opens = [to_open_set(A).members for A in shuffles]
    where = {U: i for i, U in enumerate(opens)}
    elements = pair_poset(shuffles[0].S, shuffles[0].T).elements
    pairs = []
    for i, U in enumerate(opens):
        for x in elements:
            if x not in U:
                j = where.get(U | {x})
                if j is not None:
                    pairs.append((i, j))
    return sorted(pairs)


# -- category structure ----------------------------------------------------------------

@dataclass(frozen=True)
class ShuffleMorphism:
    """A shuffle in ``Sh(S, T)`` read as a union-preserving map from open sets of ``V(T)`` to those of ``V(S)``.

    A vertex ``w`` of ``T`` goes to its fibre ``{v | (v, w) in U}``.
    """

    shuffle: Shuffle

    @property
    def domain(self):
        return self.shuffle.T

    @property
    def codomain(self):
        return self.shuffle.S

    @cached_property
    def fibres(self):
        result = {w: set() for w in self.domain.vertices}
        for v, w in to_open_set(self.shuffle).members:
            result[w].add(v)
        return {w: frozenset(vs) for w, vs in result.items()}

    def fibre(self, w):
        return self.fibres[w]

    def apply(self, W):
        """Image of an up-set ``W`` of ``V(T)``."""
        out = set()
        for w in W:
            out |= self.fibres[w]
        return frozenset(out)


def _vertex_map(a, b):
    """Vertex relabelling ``a -> b`` along an isomorphism of equal-shape trees."""
    if a.same_labelling(b):
        return {v: v for v in a.vertices}
    edges = isomorphism(a, b)
    if edges is None:
        raise ValueError("middle trees differ: cannot compose")
    return {v: b.upper[edges[a.out_edge(v)]] for v in a.vertices}


def compose(f, g):
    """``f`` in ``Sh(S, T)`` after ``g`` in ``Sh(R, S)``, giving a shuffle in ``Sh(R, T)``.

    Open set ``{(r, t) | r in U^g_s for some s in U^f_t}``.
    """
    relabel = _vertex_map(f.S, g.T)
    f_fibres = ShuffleMorphism(f).fibres
    g_fibres = ShuffleMorphism(g).fibres
    members = set()
    for t, ss in f_fibres.items():
        for s in ss:
            members.update((r, t) for r in g_fibres[relabel[s]])
    return from_open_set(g.S, f.T, members)


def identity_shuffle(S):
    """The unit of composition on ``S``: open set ``{(v, w) | v >= w}``."""
    S = as_tree(S)
    return from_open_set(S, S, [(v, w) for v in S.vertices for w in S.vertices
                                if S.vertex_leq(w, v)])


# -- automorphisms ----------------------------------------------------------------------

@dataclass(frozen=True)
class AutGroup:
    order: int
    generators: list = field(hash=False)


def poset_automorphisms(S, T, cap=AUT_POSET_CAP):
    """Automorphism group of ``V(S_red) x V(T_red)^op``, by exhaustive backtracking.

    Generators are returned as lists of cycles of vertex pairs.
    """
    S, T = reduce(as_tree(S)), reduce(as_tree(T))
    poset = pair_poset(S, T)
    if len(poset) > cap:
        raise ResourceLimitError(f"pair poset of size {len(poset)} exceeds automorphism cap {cap}")
    order, gens = poset.automorphism_group(max_size=cap)
    named = [[tuple(poset.elements[i] for i in c) for c in cycles(g)] for g in gens]
    return AutGroup(order, named)


@dataclass(frozen=True)
class AutReport:
    S: object
    T: object
    aut_S: int
    aut_T: int
    aut_shuffles: int
    exceptional: bool

    @property
    def expected(self):
        return 2 if self.exceptional else self.aut_S * self.aut_T

    @property
    def consistent(self):
        return self.aut_shuffles == self.expected

    def __str__(self):
        tail = "  (linear S = T: swap exchanges the two trees)" if self.exceptional else ""
        verdict = "ok" if self.consistent else "MISMATCH"
        return (f"|Aut S| = {self.aut_S}, |Aut T| = {self.aut_T}, "
                f"|Aut Sh(S,T)| = {self.aut_shuffles}: {verdict}{tail}")


def check_aut_theorem(S, T, cap=AUT_POSET_CAP):
    """Compare ``|Aut Sh(S, T)|`` with ``|Aut S| * |Aut T|`` on the reduced trees.

    The exception is ``S = T`` linear with at least two vertices, where the
    lattice has an extra symmetry of order 2.
    """
    S_red, T_red = reduce(as_tree(S)), reduce(as_tree(T))
    group = poset_automorphisms(S_red, T_red, cap)
    exceptional = S_red.is_linear and T_red.is_linear and S_red == T_red and S_red.n_vertices >= 2
    return AutReport(S_red, T_red, tree_automorphisms(S_red)[0], tree_automorphisms(T_red)[0],
                     group.order, exceptional)
