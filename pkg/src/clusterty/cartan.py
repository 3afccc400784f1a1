"""Generalized Cartan matrices: validation, symmetrizers, Dynkin graphs,
even-block analysis, sign/color decompositions, bipartite doubling.

Vertex labels are 1-based integers for freshly validated matrices; the
doubling construction introduces string labels like "2+"/"2-".
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction


class NotCartan(ValueError):
    pass


class NotSymmetrizable(ValueError):
    pass


class Decomposable(ValueError):
    pass


class NoValidColoring(ValueError):
    pass


def _label_key(v):
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


class CartanData:
    """A symmetrizable generalized Cartan matrix with its minimal symmetrizer."""

    def __init__(self, labels, C, D):
        self.labels = tuple(labels)
        self.r = len(self.labels)
        self.C = [list(row) for row in C]
        self.D = tuple(D)
        self.t = math.lcm(*self.D) if self.D else 1
        self._pos = {a: i for i, a in enumerate(self.labels)}
        self.t_a = tuple(self.t // d for d in self.D)

    def index(self, a):
        return self._pos[a]

    def d(self, a):
        return self.D[self._pos[a]]

    def ta(self, a):
        return self.t_a[self._pos[a]]

    def entry(self, a, b):
        return self.C[self._pos[a]][self._pos[b]]

    def neighbors(self, a):
        i = self._pos[a]
        return tuple(b for j, b in enumerate(self.labels)
                     if j != i and self.C[i][j] != 0)

    def edges(self):
        out = []
        for i, a in enumerate(self.labels):
            for j in range(i + 1, self.r):
                if self.C[i][j] != 0:
                    out.append((a, self.labels[j]))
        return out

    def is_connected(self):
        if not self.labels:
            return True
        seen = {self.labels[0]}
        stack = [self.labels[0]]
        while stack:
            for b in self.neighbors(stack.pop()):
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return len(seen) == self.r

    def __eq__(self, other):
        if not isinstance(other, CartanData):
            return NotImplemented
        return (self.labels == other.labels and self.C == other.C
                and self.D == other.D)

    def __repr__(self):
        return f"CartanData(labels={self.labels}, D={self.D}, t={self.t})"


def validate_cartan(matrix, labels=None):
    """Check the generalized-Cartan axioms and compute the minimal symmetrizer.

    Raises NotCartan for shape/sign violations, NotSymmetrizable when no
    positive diagonal D makes DC symmetric.
    """
    r = len(matrix)
    coerced = []
    for row in matrix:
        if len(row) != r:
            raise NotCartan("matrix is not square")
        out = []
        for x in row:
            if not isinstance(x, numbers.Integral):
                raise NotCartan(f"non-integer entry {x!r}")
            out.append(int(x))
        coerced.append(out)
    matrix = coerced
    for i in range(r):
        if matrix[i][i] != 2:
            raise NotCartan(f"diagonal entry C[{i}][{i}] = {matrix[i][i]} != 2")
        for j in range(r):
            if i != j:
                if matrix[i][j] > 0:
                    raise NotCartan(f"positive off-diagonal C[{i}][{j}]")
                if (matrix[i][j] == 0) != (matrix[j][i] == 0):
                    raise NotCartan(f"zero pattern asymmetric at ({i},{j})")

    # propagate d-ratios along edges: d_i C_ij = d_j C_ji
    frac = [None] * r
    for start in range(r):
        if frac[start] is not None:
            continue
        frac[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(r):
                if i == j or matrix[i][j] == 0:
                    continue
                want = frac[i] * Fraction(matrix[i][j], matrix[j][i])
                if frac[j] is None:
                    frac[j] = want
                    stack.append(j)
                elif frac[j] != want:
                    raise NotSymmetrizable("inconsistent cycle ratios")
    # scale each connected component to coprime positive integers
    comp = {}
    for start in range(r):
        if start in comp:
            continue
        members = [start]
        comp[start] = start
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(r):
                if i != j and matrix[i][j] != 0 and j not in comp:
                    comp[j] = start
                    members.append(j)
                    stack.append(j)
        denom = math.lcm(*(frac[i].denominator for i in members))
        vals = [frac[i] * denom for i in members]
        g = math.gcd(*(int(v) for v in vals))
        for i, v in zip(members, vals):
            frac[i] = int(v) // g
    D = [int(frac[i]) for i in range(r)]
    if labels is None:
        labels = tuple(range(1, r + 1))
    return CartanData(labels, matrix, D)


def is_tamely_laced(cd):
    """C_ij < -1 must force d_i = 1 and C_ji = -1."""
    for i in range(cd.r):
        for j in range(cd.r):
            if i != j and cd.C[i][j] < -1:
                if cd.D[i] != 1 or cd.C[j][i] != -1:
                    return False
    return True


class DynkinGraph:
    """Undirected diagram of a Cartan matrix with edge multiplicities."""

    def __init__(self, cd):
        self.vertices = cd.labels
        self.d = {a: cd.d(a) for a in cd.labels}
        self.edges = cd.edges()
        self._mult = {}
        for a, b in self.edges:
            m = max(-cd.entry(a, b), -cd.entry(b, a))
            # orientation: multiple arrows point toward the d=1 endpoint
            head = a if cd.d(a) < cd.d(b) else b
            self._mult[frozenset((a, b))] = (m, head if m > 1 else None)

    def multiplicity(self, a, b):
        return self._mult[frozenset((a, b))][0]

    def arrow_head(self, a, b):
        return self._mult[frozenset((a, b))][1]


def dynkin_graph(cd):
    return DynkinGraph(cd)


class BlockDecomposition:
    def __init__(self, even_blocks, block_bipartite, shrunk_vertices,
                 shrunk_edges, shrunk_bipartite):
        self.even_blocks = even_blocks          # list of frozensets
        self.block_bipartite = block_bipartite  # list of bool
        self.shrunk_vertices = shrunk_vertices  # labels + ('block', i)
        self.shrunk_edges = shrunk_edges
        self.shrunk_bipartite = shrunk_bipartite


def _bipartite(vertices, adjacency):
    color = {}
    for v in vertices:
        if v in color:
            continue
        color[v] = 0
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adjacency(u):
                if w not in color:
                    color[w] = 1 - color[u]
                    stack.append(w)
                elif color[w] == color[u]:
                    return False, color
    return True, color


def analyze_blocks(cd):
    """Even blocks, the shrunken diagram, and bipartiteness of both."""
    if not cd.is_connected():
        raise Decomposable("diagram is not connected")
    even = [a for a in cd.labels if cd.d(a) % 2 == 0]
    even_set = set(even)
    blocks = []
    seen = set()
    for a in sorted(even, key=_label_key):
        if a in seen:
            continue
        blk = {a}
        stack = [a]
        while stack:
            u = stack.pop()
            for w in cd.neighbors(u):
                if w in even_set and w not in blk:
                    blk.add(w)
                    stack.append(w)
        seen |= blk
        assert len({cd.d(v) for v in blk}) == 1
        blocks.append(frozenset(blk))

    block_of = {}
    for i, blk in enumerate(blocks):
        for v in blk:
            block_of[v] = i

    def blk_adj(i):
        def inner(u):
            return [w for w in cd.neighbors(u) if w in blocks[i]]
        return inner
    block_bip = [_bipartite(sorted(blk, key=_label_key), blk_adj(i))[0]
                 for i, blk in enumerate(blocks)]

    shrunk_vertices = [a for a in cd.labels if a not in block_of]
    shrunk_vertices += [("block", i) for i in range(len(blocks))]

    def node_of(v):
        return ("block", block_of[v]) if v in block_of else v
    shrunk_edges = set()
    for a, b in cd.edges():
        na, nb = node_of(a), node_of(b)
        if na != nb:
            shrunk_edges.add(frozenset((na, nb)))
    adj = {v: set() for v in shrunk_vertices}
    for e in shrunk_edges:
        u, w = tuple(e)
        adj[u].add(w)
        adj[w].add(u)
    shrunk_bip = _bipartite(shrunk_vertices, lambda u: adj[u])[0]
    edge_list = sorted((tuple(sorted(e, key=_label_key)) for e in shrunk_edges),
                       key=lambda e: tuple(_label_key(v) for v in e))
    return BlockDecomposition(blocks, block_bip, shrunk_vertices, edge_list, shrunk_bip)


class SignColoring:
    """I = I+ u I- decomposition plus alpha/beta colors on even-d vertices."""

    def __init__(self, sign, color):
        self.sign = dict(sign)    # label -> +1 / -1
        self.color = dict(color)  # label -> 'a' / 'b' (alpha / beta)

    def __repr__(self):
        return f"SignColoring(sign={self.sign}, color={self.color})"


def sign_color(cd, signs=None, colors=None):
    """Deterministic valid sign/color assignment, honoring optional overrides.

    Rules on each edge (a,b): both d odd -> opposite signs; any d even ->
    equal signs; both d even -> different colors.  Defaults: the lowest
    label of each component gets +; the lowest label of each even block
    gets color 'a'.
    """
    sign = {}
    if signs:
        for a, s in signs.items():
            if a not in cd._pos:
                raise NoValidColoring(f"unknown vertex {a!r} in signs")
            sign[a] = s if s in (1, -1) else (1 if s == "+" else -1)

    def opposite_required(a, b):
        return cd.d(a) % 2 == 1 and cd.d(b) % 2 == 1

    order = sorted(cd.labels, key=_label_key)
    for start in order:
        if start in sign:
            continue
        # seed from any already-assigned vertex in this component, else +
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in cd.neighbors(u):
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seeds = [v for v in comp if v in sign]
        if not seeds:
            sign[min(comp, key=_label_key)] = 1
        stack = [v for v in comp if v in sign]
        while stack:
            u = stack.pop()
            for w in cd.neighbors(u):
                want = -sign[u] if opposite_required(u, w) else sign[u]
                if w not in sign:
                    sign[w] = want
                    stack.append(w)
    # full validation (covers overrides and odd cycles)
    for a, b in cd.edges():
        want_opposite = opposite_required(a, b)
        if (sign[a] != sign[b]) != want_opposite:
            raise NoValidColoring(f"sign condition fails on edge ({a},{b})")

    color = {}
    if colors:
        for a, c in colors.items():
            if a not in cd._pos or cd.d(a) % 2 == 1:
                raise NoValidColoring(f"color given for non-even vertex {a!r}")
            if c not in ("a", "b"):
                raise NoValidColoring(f"bad color {c!r}")
            color[a] = c
    even = [a for a in cd.labels if cd.d(a) % 2 == 0]
    placed = set(color)
    for start in sorted(even, key=_label_key):
        if start in color:
            continue
        blk = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in cd.neighbors(u):
                if cd.d(w) % 2 == 0 and w not in blk:
                    blk.add(w)
                    stack.append(w)
        if not (blk & placed):
            color[min(blk, key=_label_key)] = "a"
        stack = [v for v in blk if v in color]
        while stack:
            u = stack.pop()
            for w in cd.neighbors(u):
                if cd.d(w) % 2 == 0:
                    want = "b" if color[u] == "a" else "a"
                    if w not in color:
                        color[w] = want
                        stack.append(w)
        placed |= blk
    for a, b in cd.edges():
        if cd.d(a) % 2 == 0 and cd.d(b) % 2 == 0 and color[a] == color[b]:
            raise NoValidColoring(f"color condition fails on edge ({a},{b})")
    return SignColoring(sign, color)


def extend_diagram(cd):
    """Make every even block and the shrunken diagram bipartite by doubling.

    Returns (extended CartanData, provenance: new label -> original label).
    If nothing needs doubling the input is returned with identity provenance.
    """
    blocks = analyze_blocks(cd)
    provenance = {a: a for a in cd.labels}
    current = cd

    if not blocks.shrunk_bipartite:
        current, provenance = _double_all(current, blocks, provenance)
        blocks = analyze_blocks(current)

    while not all(blocks.block_bipartite):
        i = blocks.block_bipartite.index(False)
        current, provenance = _double_block(current, blocks.even_blocks[i],
                                            provenance)
        blocks = analyze_blocks(current)
    return current, provenance


def doubled_set(cd, provenance):
    """Even-d vertices produced by doubling: these keep only their
    odd-numbered columns in the quiver construction."""
    return frozenset(v for v in cd.labels
                     if cd.d(v) % 2 == 0 and provenance.get(v) != v)


def _suffixed(a, s):
    return f"{a}{s}"


def _double_all(cd, blocks, provenance):
    """Bipartite double of the whole diagram, restoring even blocks per sheet.

    Edges inside one even block stay within a sheet; all other edges cross
    sheets.
    """
    block_of = {}
    for i, blk in enumerate(blocks.even_blocks):
        for v in blk:
            block_of[v] = i
    new_labels = []
    for a in cd.labels:
        new_labels.append(_suffixed(a, "+"))
        new_labels.append(_suffixed(a, "-"))
    pos = {v: i for i, v in enumerate(new_labels)}
    n = len(new_labels)
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    D = [0] * n
    for a in cd.labels:
        for s in "+-":
            D[pos[_suffixed(a, s)]] = cd.d(a)
    for a, b in cd.edges():
        same_sheet = (a in block_of and b in block_of
                      and block_of[a] == block_of[b])
        for s, o in (("+", "-"), ("-", "+")):
            sb = s if same_sheet else o
            i, j = pos[_suffixed(a, s)], pos[_suffixed(b, sb)]
            C[i][j] = cd.entry(a, b)
            C[j][i] = cd.entry(b, a)
    prov = {}
    for a in cd.labels:
        for s in "+-":
            prov[_suffixed(a, s)] = provenance[a]
    return CartanData(new_labels, C, D), prov


def _double_block(cd, block, provenance):
    """Replace one even block by its bipartite double.

    Internal block edges cross sheets; external neighbors attach to both
    copies.
    """
    new_labels = []
    for a in cd.labels:
        if a in block:
            new_labels.append(_suffixed(a, "+"))
            new_labels.append(_suffixed(a, "-"))
        else:
            new_labels.append(a)
    pos = {v: i for i, v in enumerate(new_labels)}
    n = len(new_labels)
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    D = [0] * n
    for a in cd.labels:
        if a in block:
            for s in "+-":
                D[pos[_suffixed(a, s)]] = cd.d(a)
        else:
            D[pos[a]] = cd.d(a)

    def put(u, v, cuv, cvu):
        C[pos[u]][pos[v]] = cuv
        C[pos[v]][pos[u]] = cvu

    for a, b in cd.edges():
        ina, inb = a in block, b in block
        if ina and inb:
            put(_suffixed(a, "+"), _suffixed(b, "-"),
                cd.entry(a, b), cd.entry(b, a))
            put(_suffixed(a, "-"), _suffixed(b, "+"),
                cd.entry(a, b), cd.entry(b, a))
        elif inb:
            for s in "+-":
                put(a, _suffixed(b, s), cd.entry(a, b), cd.entry(b, a))
        elif ina:
            for s in "+-":
                put(_suffixed(a, s), b, cd.entry(a, b), cd.entry(b, a))
        else:
            put(a, b, cd.entry(a, b), cd.entry(b, a))
    prov = {}
    for a in cd.labels:
        if a in block:
            for s in "+-":
                prov[_suffixed(a, s)] = provenance[a]
        else:
            prov[a] = provenance[a]
    return CartanData(new_labels, C, D), prov
