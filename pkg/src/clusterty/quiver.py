"""Annotated quivers: skew-symmetric exchange matrices with per-vertex
sign (+/-) and type (circle/filled) marks, matrix mutation, simultaneous
mutation of pairwise non-adjacent sets, and column relabeling.

Vertex labels are hashable tuples; annotations are attached to labels and
are not transported by any operation here.
"""

from __future__ import annotations

import json

import numpy as np


class UnknownVertex(KeyError):
    pass


class NonCommutingSet(ValueError):
    pass


class InvalidPermutation(ValueError):
    pass


CIRCLE = "o"
FILLED = "f"


class AnnotatedQuiver:
    def __init__(self, vertices, B, sign, ctype):
        self.vertices = tuple(vertices)
        self._pos = {v: i for i, v in enumerate(self.vertices)}
        if len(self._pos) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        B = np.asarray(B, dtype=np.int64)
        if B.shape != (len(self.vertices),) * 2:
            raise ValueError("B shape does not match vertex count")
        if not np.array_equal(B, -B.T):
            raise ValueError("B is not skew-symmetric")
        self.B = B
        self.sign = dict(sign)
        self.ctype = dict(ctype)
        for v in self.vertices:
            if self.sign.get(v) not in (1, -1):
                raise ValueError(f"missing/bad sign for {v!r}")
            if self.ctype.get(v) not in (CIRCLE, FILLED):
                raise ValueError(f"missing/bad type for {v!r}")

    def index(self, v):
        try:
            return self._pos[v]
        except KeyError:
            raise UnknownVertex(v) from None

    def b(self, u, v):
        return int(self.B[self.index(u), self.index(v)])

    @property
    def n(self):
        return len(self.vertices)

    def arrows(self):
        """Multiset of arrows as (source, target, multiplicity)."""
        out = []
        for i in range(self.n):
            for j in range(self.n):
                if self.B[i, j] > 0:
                    out.append((self.vertices[i], self.vertices[j],
                                int(self.B[i, j])))
        return out

    def __eq__(self, other):
        if not isinstance(other, AnnotatedQuiver):
            return NotImplemented
        return (self.vertices == other.vertices
                and np.array_equal(self.B, other.B)
                and self.sign == other.sign and self.ctype == other.ctype)

    def __repr__(self):
        return f"AnnotatedQuiver({self.n} vertices, {int(np.abs(self.B).sum()) // 2} arrows)"


def mutate_matrix(Q, k):
    """Matrix mutation at vertex k (annotations untouched)."""
    i = Q.index(k)
    B = Q.B
    col = B[:, i]
    row = B[i, :]
    adj = (np.abs(col)[:, None] * row[None, :]
           + col[:, None] * np.abs(row)[None, :]) // 2
    Bn = B + adj
    Bn[i, :] = -B[i, :]
    Bn[:, i] = -B[:, i]
    return AnnotatedQuiver(Q.vertices, Bn, Q.sign, Q.ctype)


def check_non_adjacent(Q, S):
    """Sorted vertex indices of S; raises NonCommutingSet if two members
    are joined by an arrow."""
    idx = sorted(Q.index(v) for v in set(S))
    for p, i in enumerate(idx):
        for j in idx[p + 1:]:
            if Q.B[i, j] != 0:
                raise NonCommutingSet(
                    f"{Q.vertices[i]!r} and {Q.vertices[j]!r} are adjacent")
    return idx


def composite_mutate(Q, S):
    """Mutate simultaneously at a pairwise non-adjacent vertex set S.

    Raises NonCommutingSet if two members are joined by an arrow.  The
    result is independent of ordering; members are applied in vertex-order.
    """
    out = Q
    for i in check_non_adjacent(Q, S):
        out = mutate_matrix(out, Q.vertices[i])
    return out


def transform(Q, w, opp=False):
    """Relabel arrows by a permutation of the circle columns.

    w maps circle-column indices bijectively to circle-column indices; the
    filled column is fixed.  Arrows move with the relabeling
    (B'[w(u)][w(v)] = B[u][v]); with opp=True all arrows are additionally
    reversed.  Sign and type annotations stay attached to the vertex labels
    and are not transported.
    """
    cols = {v[0] for v in Q.vertices if Q.ctype[v] == CIRCLE}
    if set(w.keys()) != cols or set(w.values()) != cols:
        raise InvalidPermutation(
            f"w must permute the circle columns {sorted(cols)}")

    def move(v):
        c, m = v
        return (w[c], m) if c in cols else v

    perm = [Q.index(move(v)) for v in Q.vertices]
    n = Q.n
    Bn = np.zeros_like(Q.B)
    for i in range(n):
        for j in range(n):
            Bn[perm[i], perm[j]] = Q.B[i, j]
    if opp:
        Bn = -Bn
    return AnnotatedQuiver(Q.vertices, Bn, Q.sign, Q.ctype)


def _label_str(v):
    return ":".join(str(p) for p in v)


def to_json(Q):
    """JSON-serializable dict: vertices, B, sign, ctype."""
    return {
        "vertices": [list(v) for v in Q.vertices],
        "B": Q.B.tolist(),
        "sign": {_label_str(v): ("+" if Q.sign[v] > 0 else "-")
                 for v in Q.vertices},
        "ctype": {_label_str(v): Q.ctype[v] for v in Q.vertices},
    }


def from_json(data):
    vertices = [tuple(v) for v in data["vertices"]]
    sign = {v: (1 if data["sign"][_label_str(v)] == "+" else -1)
            for v in vertices}
    ctype = {v: data["ctype"][_label_str(v)] for v in vertices}
    return AnnotatedQuiver(vertices, np.array(data["B"]), sign, ctype)


def to_dot(Q):
    """Graphviz digraph; nodes labeled "(i,m)[sign,type]", one edge per arrow."""
    lines = ["digraph quiver {"]
    ids = {}
    for v in Q.vertices:
        nid = "n_" + "_".join(str(p).replace("-", "m") for p in v)
        ids[v] = nid
        s = "+" if Q.sign[v] > 0 else "-"
        t = "o" if Q.ctype[v] == CIRCLE else "*"
        shape = "circle" if Q.ctype[v] == CIRCLE else "point"
        label = "(" + ",".join(str(p) for p in v) + f")[{s},{t}]"
        lines.append(f'  {nid} [label="{label}", shape={shape}];')
    for u, v, mult in Q.arrows():
        for _ in range(mult):
            lines.append(f"  {ids[u]} -> {ids[v]};")
    lines.append("}")
    return "\n".join(lines)


def dumps(Q, fmt="json"):
    if fmt == "json":
        return json.dumps(to_json(Q), indent=2)
    if fmt == "dot":
        return to_dot(Q)
    raise ValueError(f"unknown format {fmt!r}")
