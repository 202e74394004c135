"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL ...`` line (shown even
without ``-s``) and then asserts.  The whole module takes a few minutes,
most of it in the exhaustive three-way check of criterion 6.
"""

import math
import random
import time
from fractions import Fraction
from itertools import product

import networkx as nx
import pytest

from conftest import (CRANCH_S, CRANCH_T, PAIR14_S, PAIR14_S_RED, PAIR14_T, STUMP_PICTURES,
                      STUMP_S, STUMP_T, random_pair, squash)
from treeshuffle.counting import count_bounds, count_shuffles, shuffle_polynomial
from treeshuffle.geometry import chains_cover_check, intersect_shuffles
from treeshuffle.lattice import (bottom, check_aut_theorem, compose, from_open_set, hasse,
                                 identity_shuffle, join, leq, meet, open_set_covers, pair_poset,
                                 percolation_successors, to_open_set, top)
from treeshuffle.shuffles import (Shuffle, brute_force_shuffles, enumerate_shuffles,
                                  shuffles_with_stumps, treelike_candidates, verify_branches,
                                  verify_definition, verify_maximality)
from treeshuffle.tree import (binary_tree, linear_tree, reduced_trees,
                              tree_factorial, trees_with_edges, unit_tree)

PR_S = CRANCH_S
PR_R = "(((e))((e)))"


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def test_criterion_01_golden_counts(report):
    problems = []
    for S in (PAIR14_S, PAIR14_S_RED):
        c, e = count_shuffles(S, PAIR14_T), len(enumerate_shuffles(S, PAIR14_T))
        if c != 14 or e != 14:
            problems.append(f"{S}: count {c}, enumerated {e}")
    start = time.perf_counter()
    e = len(enumerate_shuffles(CRANCH_S, CRANCH_T))
    elapsed = time.perf_counter() - start
    c = count_shuffles(CRANCH_S, CRANCH_T)
    if c != 3089 or e != 3089:
        problems.append(f"3089 pair: count {c}, enumerated {e}")
    if elapsed >= 10:
        problems.append(f"enumeration took {elapsed:.1f} s")
    report(1, not problems, f"14 and 3089 (enumeration {elapsed:.2f} s) {problems or ''}")


def test_criterion_02_linear_identity(report):
    bad = [(p, q) for p in range(11) for q in range(11)
           if count_shuffles(linear_tree(p), linear_tree(q)) != math.comb(p + q, p)]
    report(2, not bad, f"C(p+q,p) for 0 <= p,q <= 10, mismatches {bad}")


def test_criterion_03_binary_recursion(report):
    beta = {}
    for p in range(5):
        for q in range(5):
            beta[p, q] = 1 if p == 0 or q == 0 else beta[p - 1, q] ** 2 + beta[p, q - 1] ** 2
    bad = [(p, q) for p in range(5) for q in range(5)
           if count_shuffles(binary_tree(p), binary_tree(q)) != beta[p, q]]
    report(3, not bad, f"beta(4,4) = {beta[4, 4]}, mismatches {bad}")


def test_criterion_04_bounds(report):
    rng = random.Random(404)
    bad = []
    for _ in range(100):
        S, T = random_pair(rng, 8)
        b, c = count_bounds(S, T), count_shuffles(S, T)
        if not b.lower <= c <= b.upper_sharp <= b.upper_coarse:
            bad.append((S.render(), T.render(), b, c))
    lower = count_bounds(PAIR14_S, PAIR14_T).lower
    report(4, not bad and lower == 6, f"100 random pairs, {len(bad)} violations; lower = {lower}")


def test_criterion_05_polynomial_theorem(report):
    # every vertex poset with <= 7 vertices comes from a reduced tree; the
    # trees with <= 8 edges add non-reduced shapes with the same posets
    family = [t for n in range(8) for t in reduced_trees(n)]
    family += [t for k in range(1, 9) for t in trees_with_edges(k) if t.n_vertices <= 7]
    bad = []
    for S in family:
        P = shuffle_polynomial(S)
        if P.degree != S.n_vertices or P.leading != Fraction(1, tree_factorial(S)):
            bad.append((S.render(), "degree/leading"))
        elif any(P(n) != count_shuffles(S, linear_tree(n)) for n in range(7)):
            bad.append((S.render(), "values"))
    P_S, P_R = shuffle_polynomial(PR_S), shuffle_polynomial(PR_R)
    closed = all(P_S(n) == sum(math.comb(k + 2, 2) ** 2 for k in range(n + 1)) for n in range(8))
    ok = not bad and P_S.coefficients == P_R.coefficients and closed
    report(5, ok, f"{len(family)} trees, failures {bad[:3]}; P_R = P_S: "
                  f"{P_S.coefficients == P_R.coefficients}")


def _three_way_family():
    by_edges = {k: trees_with_edges(k) for k in range(1, 7)}
    for a, b in product(range(1, 7), repeat=2):
        if a * b <= 24:
            for S in by_edges[a]:
                for T in by_edges[b]:
                    yield S, T


def test_criterion_06_three_way_equivalence(report):
    pairs = candidates = 0
    bad = []
    for S, T in _three_way_family():
        pairs += 1
        shuffles = set(enumerate_shuffles(S, T))
        accepted = (set(), set(), set())
        for X in treelike_candidates(S, T):
            candidates += 1
            A = Shuffle.from_edges(S, T, X)
            for k, check in enumerate((verify_definition, verify_branches, verify_maximality)):
                if check(S, T, A):
                    accepted[k].add(A)
        brute = set(brute_force_shuffles(S, T))
        if not accepted[0] == accepted[1] == accepted[2] == brute == shuffles:
            bad.append((S.render(), T.render()))
    report(6, not bad, f"{pairs} pairs, {candidates} treelike candidates, disagreements {bad[:3]}")


def _poset_family():
    trees = [unit_tree()] + [t for n in range(1, 9) for t in reduced_trees(n)]
    for S in trees:
        for T in trees:
            if S.n_vertices * T.n_vertices <= 16:
                yield S, T


def test_criterion_07_open_sets(report):
    pairs = shuffles_seen = 0
    bad = []
    for S, T in _poset_family():
        pairs += 1
        shuffles = enumerate_shuffles(S, T)
        shuffles_seen += len(shuffles)
        if len(shuffles) != pair_poset(S, T).count_upsets_brute():
            bad.append((S.render(), T.render(), "count"))
            continue
        if any(from_open_set(S, T, to_open_set(A)) != A for A in shuffles):
            bad.append((S.render(), T.render(), "round trip"))
            continue
        index = {A: i for i, A in enumerate(shuffles)}
        steps = sorted((i, index[B]) for i, A in enumerate(shuffles)
                       for B in percolation_successors(A))
        if not hasse(S, T).edges == steps == open_set_covers(shuffles):
            bad.append((S.render(), T.render(), "hasse"))
    report(7, not bad, f"{pairs} pairs, {shuffles_seen} shuffles, failures {bad[:3]}")


def test_criterion_08_lattice_laws(report):
    rng = random.Random(808)
    pairs = []
    while len(pairs) < 20:
        S, T = random_pair(rng, 5)
        if 10 <= count_shuffles(S, T) <= 5000:
            pairs.append((S, T))
    bad = []
    for S, T in pairs:
        shuffles = enumerate_shuffles(S, T)
        if bottom(S, T) != min(shuffles, key=lambda A: len(to_open_set(A))) or \
                top(S, T) != max(shuffles, key=lambda A: len(to_open_set(A))) or \
                not all(leq(bottom(S, T), A) and leq(A, top(S, T)) for A in shuffles):
            bad.append((S.render(), T.render(), "bounds"))
        for _ in range(200):
            A, B, C = (rng.choice(shuffles) for _ in range(3))
            laws = (meet(A, B) == meet(B, A), join(A, B) == join(B, A),
                    meet(A, meet(B, C)) == meet(meet(A, B), C),
                    join(A, join(B, C)) == join(join(A, B), C),
                    meet(A, join(A, B)) == A, join(A, meet(A, B)) == A,
                    meet(A, join(B, C)) == join(meet(A, B), meet(A, C)),
                    join(A, meet(B, C)) == meet(join(A, B), join(A, C)))
            if not all(laws):
                bad.append((S.render(), T.render(), laws.index(False)))
    report(8, not bad, f"20 pairs x 200 triples, failures {bad[:3]}")


def test_criterion_09_category_laws(report):
    # one representative per vertex poset with <= 3 vertices
    trees = [t for n in range(4) for t in reduced_trees(n)]
    N = range(len(trees))
    sh = {(i, j): enumerate_shuffles(trees[i], trees[j]) for i in N for j in N}
    index = {(i, j): {A: k for k, A in enumerate(sh[i, j])} for i in N for j in N}
    # comp[r, s, t][a, b] = index of sh[s,t][a] o sh[r,s][b] in sh[r,t]
    comp = {}
    for r, s, t in product(N, repeat=3):
        comp[r, s, t] = {(a, b): index[r, t][compose(f, g)]
                         for a, f in enumerate(sh[s, t]) for b, g in enumerate(sh[r, s])}
    triples = 0
    assoc_bad = 0
    for q, r, s, t in product(N, repeat=4):
        for a, b, c in product(range(len(sh[s, t])), range(len(sh[r, s])), range(len(sh[q, r]))):
            triples += 1
            left = comp[q, r, t][comp[r, s, t][a, b], c]
            right = comp[q, s, t][a, comp[q, r, s][b, c]]
            assoc_bad += left != right
    unit_bad = 0
    for s, t in product(N, repeat=2):
        for f in sh[s, t]:
            unit_bad += compose(f, identity_shuffle(trees[s])) != f
            unit_bad += compose(identity_shuffle(trees[t]), f) != f
    lattice_ops = {}

    def op(fn, r, t, x, y):
        # fn applied to sh[r,t][x], sh[r,t][y], as an index
        key = (fn, r, t, x, y)
        if key not in lattice_ops:
            lattice_ops[key] = index[r, t][fn(sh[r, t][x], sh[r, t][y])]
        return lattice_ops[key]

    join_bad = meet_kept = meet_total = 0
    for r, s, t in product(N, repeat=3):
        C, nf, ng = comp[r, s, t], len(sh[s, t]), len(sh[r, s])
        for a1, a2, b in product(range(nf), range(nf), range(ng)):
            join_bad += C[op(join, s, t, a1, a2), b] != op(join, r, t, C[a1, b], C[a2, b])
            meet_total += 1
            meet_kept += C[op(meet, s, t, a1, a2), b] == op(meet, r, t, C[a1, b], C[a2, b])
        for a, b1, b2 in product(range(nf), range(ng), range(ng)):
            join_bad += C[a, op(join, r, s, b1, b2)] != op(join, r, t, C[a, b1], C[a, b2])
            meet_total += 1
            meet_kept += C[a, op(meet, r, s, b1, b2)] == op(meet, r, t, C[a, b1], C[a, b2])
    ok = not (assoc_bad or unit_bad or join_bad)
    report(9, ok, f"{triples} triples (assoc failures {assoc_bad}), unit failures {unit_bad}, "
                  f"join failures {join_bad}; meets preserved in {meet_kept}/{meet_total} (recorded)")


def _lattice_autos(S, T):
    h = hasse(S, T)
    g = nx.DiGraph()
    g.add_nodes_from(range(len(h.nodes)))
    g.add_edges_from(h.edges)
    return sum(1 for _ in nx.algorithms.isomorphism.DiGraphMatcher(g, g).isomorphisms_iter())


def test_criterion_10_automorphisms(report):
    trees = [t for n in range(1, 6) for t in reduced_trees(n)]
    bad = []
    checked = exceptional = graph_checked = 0
    for S, T in product(trees, repeat=2):
        r = check_aut_theorem(S, T)
        checked += 1
        exceptional += r.exceptional
        if r.exceptional != (S.is_linear and S == T and S.n_vertices >= 2) or not r.consistent:
            bad.append((S.render(), T.render(), str(r)))
        elif count_shuffles(S, T) <= 60:
            # independent count on the lattice's own Hasse graph
            graph_checked += 1
            if _lattice_autos(S, T) != r.aut_shuffles:
                bad.append((S.render(), T.render(), "graph"))
    report(10, not bad, f"{checked} reduced pairs ({exceptional} exceptional, {graph_checked} "
                        f"also counted on the Hasse graph), failures {bad[:3]}")


def test_criterion_11_stumps(report):
    decorated = shuffles_with_stumps(STUMP_S, STUMP_T)
    got = sorted(squash(d.picture()) for d in decorated)
    want = sorted(squash(p) for p in STUMP_PICTURES)
    report(11, len(decorated) == 3 and got == want, f"{len(decorated)} decorated shuffles, "
                                                    f"pictures match: {got == want}")


def test_criterion_12_geometry(report):
    pairs = intersections = 0
    bad = []
    for S, T in _three_way_family():
        pairs += 1
        if not chains_cover_check(S, T):
            bad.append((S.render(), T.render(), "chains"))
        shuffles = enumerate_shuffles(S, T)
        root, leaves = (S.root, T.root), set(product(S.leaves, T.leaves))
        for i, A in enumerate(shuffles):
            for B in shuffles[i + 1:]:
                intersections += 1
                X = intersect_shuffles(A, B)
                if X.root != root or set(X.leaves) != leaves:
                    bad.append((S.render(), T.render(), "intersection"))
    report(12, not bad, f"{pairs} pairs, {intersections} pairwise intersections, failures {bad[:3]}")
