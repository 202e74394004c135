"""JSON and DOT serialisation of trees and shuffles."""

import json

from .shuffles import S_STEP, Shuffle
from .tree import Tree


def tree_to_json(t):
    return t.to_json()


def tree_from_json(data):
    return Tree.from_json(data)


def shuffle_to_json(A):
    """``{"S", "T", "edges", "parent"}`` with parent keys written ``"s,t"``."""
    return {
        "S": A.S.to_json(),
        "T": A.T.to_json(),
        "edges": [list(p) for p in sorted(A.edges)],
        "parent": {f"{s},{t}": (None if q is None else list(q))
                   for (s, t), q in sorted(A.parent.items())},
    }


def shuffle_from_json(data):
    """Rebuild a shuffle without validating it (see the verifiers for that)."""
    if isinstance(data, str):
        data = json.loads(data)
    S, T = Tree.from_json(data["S"]), Tree.from_json(data["T"])
    edges = frozenset((int(s), int(t)) for s, t in data["edges"])
    parent = {}
    if "parent" in data:
        for key, q in data["parent"].items():
            s, t = (int(x) for x in key.split(","))
            parent[(s, t)] = None if q is None else (int(q[0]), int(q[1]))
    else:
        return Shuffle.from_edges(S, T, edges)
    return Shuffle(S, T, edges, parent)


def dumps_shuffle(A):
    return json.dumps(shuffle_to_json(A), sort_keys=True, separators=(",", ":"))


def tree_to_dot(t, name="tree"):
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle, label=\"\", width=0.15];"]
    lines.append("  root [shape=point];")
    for v in t.vertices:
        lines.append(f"  v{v};")
    for e in t.edges:
        lo = "root" if t.lower[e] is None else f"v{t.lower[e]}"
        if t.upper[e] is None:
            lines.append(f"  l{e} [shape=point];")
            hi = f"l{e}"
        else:
            hi = f"v{t.upper[e]}"
        lines.append(f'  {lo} -> {hi} [label="{e}", arrowhead=none];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def shuffle_to_dot(A, stumps=None, name="shuffle"):
    """Draw a shuffle: S-step vertices as open circles, T-step vertices filled.

    ``stumps`` (leaf pair -> ``"S"``/``"T"``/``"ST"``) adds stump vertices
    on those leaves: open, filled, or double circles.
    """
    stumps = stumps or {}
    lines = [f"digraph {name} {{", "  rankdir=BT;",
             '  node [shape=circle, label="", width=0.18, style=filled];',
             "  root [shape=point];"]

    def node(p):
        return f"p{p[0]}_{p[1]}"

    for p in sorted(A.edges):
        kind = A.kind.get(p)
        if kind is not None:
            fill = "white" if kind == S_STEP else "black"
            lines.append(f"  {node(p)} [fillcolor={fill}];")
        elif p in stumps:
            mark = stumps[p]
            if mark == "ST":
                lines.append(f"  {node(p)} [shape=doublecircle, fillcolor=white, width=0.12];")
            else:
                fill = "white" if mark == "S" else "black"
                lines.append(f"  {node(p)} [fillcolor={fill}, width=0.12];")
        else:
            lines.append(f"  {node(p)} [shape=point];")
    for p in sorted(A.edges):
        q = A.parent[p]
        lo = "root" if q is None else node(q)
        lines.append(f'  {lo} -> {node(p)} [label="{p[0]},{p[1]}", arrowhead=none];')
    lines.append("}")
    return "\n".join(lines) + "\n"
