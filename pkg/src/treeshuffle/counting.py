"""Counting shuffles without listing them.

Counts are memoised on pairs of canonical codes, so isomorphic subtrees
share work.  All arithmetic is exact: counts are Python ints and the
polynomial ``P_S`` has Fraction coefficients.
"""

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

from .polynomial import CountPolynomial, discrete_sum
from .tree import UNIT, as_tree, height, prune_stumps


@lru_cache(maxsize=None)
def split_code(code):
    """Canonical codes of the subtrees grafted on the root vertex."""
    if code == UNIT:
        return ()
    parts = []
    depth = 0
    start = 1
    for i in range(1, len(code) - 1):
        ch = code[i]
        if ch == "(":
            if depth == 0:
                start = i
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                parts.append(code[start:i + 1])
        elif depth == 0:
            parts.append(UNIT)
    return tuple(parts)


class ShuffleCounter:
    """A memo table for ``sh(S, T)`` keyed on unordered pairs of canonical codes.

    Safe to share between threads; a separate instance gives identical
    results.
    """

    def __init__(self, memo=None):
        self.memo = dict(memo or {})
        self._lock = threading.Lock()

    def count(self, S, T):
        S, T = _pruned(S), _pruned(T)
        return self.count_codes(S.code, T.code)

    def count_codes(self, a, b):
        if a == UNIT or b == UNIT:
            return 1
        key = (a, b) if a <= b else (b, a)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        left = math.prod(self.count_codes(c, b) for c in split_code(a))
        right = math.prod(self.count_codes(a, c) for c in split_code(b))
        value = left + right
        with self._lock:
            self.memo[key] = value
        return value

    def load(self, path):
        """Merge a memo file: one ``code_a code_b count`` triple per line."""
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                parts = line.split()
                if len(parts) == 3:
                    a, b, n = parts
                    key = (a, b) if a <= b else (b, a)
                    self.memo[key] = int(n)

    def dump(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            for (a, b), n in sorted(self.memo.items()):
                fh.write(f"{a} {b} {n}\n")


_default_counter = ShuffleCounter()


def _pruned(t):
    t = as_tree(t)
    if t.has_stumps:
        t, _ = prune_stumps(t)
    return t


def count_shuffles(S, T, counter=None):
    """``sh(S, T)``; trees with stumps are counted through their pruned forms."""
    return (counter or _default_counter).count(S, T)


def linear_count(p, q):
    """``sh(L_p, L_q)``, which is the binomial coefficient ``C(p + q, p)``."""
    return math.comb(p + q, p)


@lru_cache(maxsize=None)
def binary_count(p, q):
    """``sh(B_p, B_q)`` from ``beta(p, q) = beta(p-1, q)^2 + beta(p, q-1)^2``."""
    if p == 0 or q == 0:
        return 1
    return binary_count(p - 1, q) ** 2 + binary_count(p, q - 1) ** 2


@dataclass(frozen=True)
class BoundsTriple:
    lower: int
    upper_sharp: int
    upper_coarse: int


def _binom(n, k):
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def _branch_heights(t):
    return [len(t.branch_path(leaf)) - 1 for leaf in t.leaves]


def count_bounds(S, T):
    """Lower bound from the two tallest branches, and two upper bounds from all branch pairs.

    ``|alpha|`` is the number of vertices on the branch ``alpha``.
    """
    S, T = _pruned(S), _pruned(T)
    hs, ht = height(S), height(T)
    lower = math.comb(hs + ht, hs)
    pairs = [(a, b) for a in _branch_heights(S) for b in _branch_heights(T)]
    coarse = math.prod(math.comb(a + b, b) for a, b in pairs)
    if S.is_unit and T.is_unit:
        # neither root can go first; the one shuffle is the unit tree itself
        sharp = 1
    else:
        sharp = (math.prod(_binom(a - 1 + b, b) for a, b in pairs)
                 + math.prod(_binom(a + b - 1, a) for a, b in pairs))
    return BoundsTriple(lower, sharp, coarse)


_polynomials = {UNIT: CountPolynomial.constant(1)}
_poly_lock = threading.Lock()


def _polynomial_for_code(code):
    hit = _polynomials.get(code)
    if hit is not None:
        return hit
    product = CountPolynomial.constant(1)
    for child in split_code(code):
        product = product * _polynomial_for_code(child)
    poly = discrete_sum(product)
    with _poly_lock:
        _polynomials[code] = poly
    return poly


def shuffle_polynomial(S):
    """``P_S`` with ``P_S(n) = sh(S, L_n)``.

    For ``S = C_m[S_1, ..., S_m]`` the recursion on the linear side gives
    ``P_S(n) = sum_{k <= n} prod_i P_{S_i}(k)``.
    """
    S = as_tree(S)
    if S.has_stumps:
        raise ValueError("shuffle_polynomial() needs a stump-free tree")
    return _polynomial_for_code(S.code)
