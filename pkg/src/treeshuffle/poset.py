"""Small finite posets.

The posets met in this package (edge and vertex posets of trees, and the
product ``V(S) x V(T)^op``) have at most a few hundred elements, so the
order is simply tabulated as up-sets and down-sets, each stored both as a
frozenset and as an integer bitmask.
"""

from itertools import combinations

import numpy as np

from .errors import ResourceLimitError


class FinitePoset:
    """A finite partial order given by its elements and a ``leq`` predicate.

    The predicate is evaluated once per pair at construction time.
    """

    def __init__(self, elements, leq):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        n = len(self.elements)
        up_mask = [0] * n
        down_mask = [0] * n
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                if i == j or leq(x, y):
                    up_mask[i] |= 1 << j
                    down_mask[j] |= 1 << i
        self._up_mask = up_mask
        self._down_mask = down_mask
        self._up = [self._from_mask(m) for m in up_mask]
        self._down = [self._from_mask(m) for m in down_mask]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __repr__(self):
        return f"{type(self).__name__}({len(self)} elements)"

    def _from_mask(self, mask):
        return frozenset(self.elements[i] for i in range(len(self.elements)) if mask >> i & 1)

    def mask(self, subset):
        m = 0
        for x in subset:
            m |= 1 << self.index[x]
        return m

    def leq(self, x, y):
        return bool(self._up_mask[self.index[x]] >> self.index[y] & 1)

    def lt(self, x, y):
        return x != y and self.leq(x, y)

    def up(self, x):
        """The principal up-set ``{y | x <= y}`` (the basic open ``B(x)``)."""
        return self._up[self.index[x]]

    def down(self, x):
        return self._down[self.index[x]]

    def covers(self):
        """All pairs ``(x, y)`` with ``x < y`` and nothing strictly between."""
        result = []
        for x in self.elements:
            strict = self.up(x) - {x}
            for y in strict:
                if not any(self.lt(z, y) for z in strict if z != y):
                    result.append((x, y))
        return sorted(result, key=lambda p: (self.index[p[0]], self.index[p[1]]))

    def minimal(self, subset=None):
        subset = self.elements if subset is None else subset
        subset = set(subset)
        return frozenset(x for x in subset if not any(self.lt(y, x) for y in subset))

    def maximal(self, subset=None):
        subset = self.elements if subset is None else subset
        subset = set(subset)
        return frozenset(x for x in subset if not any(self.lt(x, y) for y in subset))

    def is_upset(self, subset):
        m = self.mask(subset)
        return all(self._up_mask[i] & m == self._up_mask[i]
                   for i in range(len(self)) if m >> i & 1)

    def upset(self, generators):
        """Smallest up-set containing ``generators``."""
        m = 0
        for x in generators:
            m |= self._up_mask[self.index[x]]
        return self._from_mask(m)

    def is_chain(self, subset):
        return all(self.leq(x, y) or self.leq(y, x) for x, y in combinations(subset, 2))

    def dual(self):
        return FinitePoset(self.elements, lambda x, y: self.leq(y, x))

    def count_upsets_brute(self, max_size=22):
        """Count up-sets by testing every subset (vectorised over bitmasks)."""
        n = len(self)
        if n > max_size:
            raise ResourceLimitError(f"poset of size {n} exceeds brute-force cap {max_size}")
        masks = np.arange(1 << n, dtype=np.int64)
        ok = np.ones(1 << n, dtype=bool)
        for i in range(n):
            up = self._up_mask[i]
            ok &= ((masks >> i) & 1 == 0) | ((masks & up) == up)
        return int(ok.sum())

    def upsets_brute(self, max_size=22):
        """All up-sets as frozensets, found by testing every subset."""
        n = len(self)
        if n > max_size:
            raise ResourceLimitError(f"poset of size {n} exceeds brute-force cap {max_size}")
        masks = np.arange(1 << n, dtype=np.int64)
        ok = np.ones(1 << n, dtype=bool)
        for i in range(n):
            up = self._up_mask[i]
            ok &= ((masks >> i) & 1 == 0) | ((masks & up) == up)
        return [self._from_mask(int(m)) for m in masks[ok]]

    # -- automorphisms -------------------------------------------------------

    def _refined_colours(self):
        n = len(self)
        up_covers = [[] for _ in range(n)]
        down_covers = [[] for _ in range(n)]
        for x, y in self.covers():
            up_covers[self.index[x]].append(self.index[y])
            down_covers[self.index[y]].append(self.index[x])
        colours = [(bin(self._up_mask[i]).count("1"), bin(self._down_mask[i]).count("1"))
                   for i in range(n)]
        while True:
            signature = [
                (colours[i],
                 tuple(sorted(colours[j] for j in up_covers[i])),
                 tuple(sorted(colours[j] for j in down_covers[i])))
                for i in range(n)
            ]
            relabel = {s: k for k, s in enumerate(sorted(set(signature)))}
            refined = [relabel[s] for s in signature]
            if len(set(refined)) == len(set(colours)):
                return refined, up_covers, down_covers
            colours = refined

    def automorphisms(self, limit=None):
        """Every order automorphism, as tuples ``p`` with ``p[i]`` the image index of element ``i``.

        Backtracking over candidates restricted by a colour refinement on the
        cover graph; every partial map is checked against all previously
        assigned elements in both directions of the order.
        """
        n = len(self)
        if n == 0:
            return [()]
        colours, up_covers, down_covers = self._refined_colours()
        # assign in an order where each new element touches assigned ones
        order = []
        seen = set()
        for start in sorted(range(n), key=lambda i: (colours.count(colours[i]), i)):
            if start in seen:
                continue
            queue = [start]
            seen.add(start)
            while queue:
                i = queue.pop(0)
                order.append(i)
                for j in sorted(up_covers[i] + down_covers[i]):
                    if j not in seen:
                        seen.add(j)
                        queue.append(j)
        by_colour = {}
        for i, c in enumerate(colours):
            by_colour.setdefault(c, []).append(i)
        up = self._up_mask
        image = [-1] * n
        used = [False] * n
        found = []

        def extend(k):
            if limit is not None and len(found) >= limit:
                return
            if k == n:
                found.append(tuple(image))
                return
            i = order[k]
            for j in by_colour[colours[i]]:
                if used[j]:
                    continue
                consistent = True
                for a in order[:k]:
                    fa = image[a]
                    if (up[i] >> a & 1) != (up[j] >> fa & 1) or (up[a] >> i & 1) != (up[fa] >> j & 1):
                        consistent = False
                        break
                if consistent:
                    image[i] = j
                    used[j] = True
                    extend(k + 1)
                    used[j] = False
                    image[i] = -1

        extend(0)
        return found

    def automorphism_group(self, max_size=30):
        if len(self) > max_size:
            raise ResourceLimitError(f"poset of size {len(self)} exceeds automorphism cap {max_size}")
        elements = self.automorphisms()
        return len(elements), generating_set(elements)


def compose_perms(p, q):
    """``p`` after ``q``."""
    return tuple(p[i] for i in q)


def permutation_closure(generators, n):
    identity = tuple(range(n))
    group = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for h in generators:
                gh = compose_perms(h, g)
                if gh not in group:
                    group.add(gh)
                    nxt.append(gh)
        frontier = nxt
    return group


def generating_set(elements):
    """A small generating set for the permutation group ``elements``, chosen greedily."""
    elements = sorted(elements)
    if not elements:
        return []
    n = len(elements[0])
    gens = []
    group = {tuple(range(n))}
    for p in elements:
        if p not in group:
            gens.append(p)
            group = permutation_closure(gens, n)
    return gens


def cycles(perm):
    """Non-trivial cycles of an index permutation."""
    seen = set()
    result = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cycle = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cycle.append(j)
            seen.add(j)
            j = perm[j]
        result.append(tuple(cycle))
    return result
