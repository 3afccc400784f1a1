"""Builders for the level-l quivers attached to tamely laced Cartan data,
their mutation schedules, and the index embeddings into vertex/time points.

Rank-2 ladders use flat labels (i, m): columns 1..t are circle columns of
height l-1, column t+1 is the filled column of height t*l-1.  General tree
diagrams use labels (a, c, m): Dynkin vertex a, its c-th column, row m;
vertex a owns d_a columns of height (t/d_a)*l - 1 each.

The periodic mutation schedule has period 2t; batch p is a pairwise
non-adjacent vertex set (possibly empty).
"""

from __future__ import annotations

from .cartan import SignColoring, sign_color, validate_cartan
from .quiver import CIRCLE, FILLED, AnnotatedQuiver, composite_mutate


class InvalidParams(ValueError):
    pass


class InvalidColoring(ValueError):
    pass


class ParityMismatch(ValueError):
    pass


# ---------------------------------------------------------------- rank 2

def rank2_cartan(t):
    """CartanData for the rank-2 matrix [[2,-1],[-t,2]] (D = (t,1))."""
    if t < 1:
        raise InvalidParams(f"t must be >= 1, got {t}")
    return validate_cartan([[2, -1], [-t, 2]])


def rank2_sign_coloring(t):
    """The sign/color convention the rank-2 ladder formulas are written in:
    odd t uses (-,+), even t uses (+,+) with the heavy vertex colored alpha.
    """
    if t % 2 == 1:
        return SignColoring({1: -1, 2: 1}, {})
    return SignColoring({1: 1, 2: 1}, {1: "a"})


def rank2_quiver(t, l):
    """The initial level-l ladder quiver for [[2,-1],[-t,2]].

    Signs: circle (i,m) is + iff i+m is odd; filled (t+1,r) is + iff r is
    odd.  Verticals run + -> - on circle columns and odd -> even on the
    filled column.  Circle (i,m) fans into filled rows centered at t*m.
    """
    if t < 1 or l < 2:
        raise InvalidParams(f"need t >= 1 and l >= 2, got t={t}, l={l}")
    vertices = [(i, m) for i in range(1, t + 1) for m in range(1, l)]
    vertices += [(t + 1, r) for r in range(1, t * l)]
    pos = {v: k for k, v in enumerate(vertices)}
    n = len(vertices)
    B = [[0] * n for _ in range(n)]

    def add(u, v):
        B[pos[u]][pos[v]] += 1
        B[pos[v]][pos[u]] -= 1

    sign = {}
    ctype = {}
    for i in range(1, t + 1):
        for m in range(1, l):
            sign[(i, m)] = 1 if (i + m) % 2 == 1 else -1
            # for t = 1 both underlying vertices are unit-scale, so every
            # column is of filled type and nothing is left to permute
            ctype[(i, m)] = CIRCLE if t > 1 else FILLED
    for r in range(1, t * l):
        sign[(t + 1, r)] = 1 if r % 2 == 1 else -1
        ctype[(t + 1, r)] = FILLED
    # verticals: from the + vertex of each consecutive pair
    for i in range(1, t + 1):
        for m in range(1, l - 1):
            u, v = (i, m), (i, m + 1)
            add(u, v) if sign[u] > 0 else add(v, u)
    for r in range(1, t * l - 1):
        u, v = (t + 1, r), (t + 1, r + 1)
        add(u, v) if r % 2 == 1 else add(v, u)
    # fans
    for i in range(1, t + 1):
        for m in range(1, l):
            center = t * m
            half = (t - i) if m % 2 == 1 else (i - 1)
            for r in range(center - half, center + half + 1):
                if r % 2 == 1:
                    add((i, m), (t + 1, r))
                else:
                    add((t + 1, r), (i, m))
    return AnnotatedQuiver(vertices, B, sign, ctype)


def _machine_batch(d, phi, p, nrows, cols=None):
    """Circle columns of a d-column machine scheduled at batch p with phase
    offset phi, as (column, row) pairs.  Rows are 1..nrows."""
    q = (p + phi) % (2 * d)
    if q < d:
        s, qq = 1, q
    else:
        s, qq = -1, q - d
    if d % 2 == 1:
        ks = {qq + 1 if qq % 2 == 0 else d - qq}
    else:
        if q % 2 == 1:
            return set()
        ks = {qq + 1, d - qq}
    if cols is not None:
        ks &= set(cols)
    out = set()
    for k in ks:
        want = 1 if s > 0 else 0
        out |= {(k, m) for m in range(1, nrows + 1) if (k + m) % 2 == want}
    return out


def _filled_batch(phi, p, nrows):
    """Rows of a filled column scheduled at batch p with phase offset phi."""
    want = 1 if (p + phi) % 2 == 0 else 0
    return {m for m in range(1, nrows + 1) if m % 2 == want}


class Schedule:
    """A periodic mutation schedule: batch(p) for any integer p."""

    def __init__(self, period, batches):
        assert len(batches) == period
        self.period = period
        self._batches = [frozenset(b) for b in batches]

    def batch(self, p):
        return self._batches[p % self.period]

    def __eq__(self, other):
        if not isinstance(other, Schedule):
            return NotImplemented
        return self.period == other.period and self._batches == other._batches


def rank2_schedule(t, l):
    """Period-2t schedule for the rank-2 ladder."""
    if t < 1 or l < 2:
        raise InvalidParams(f"need t >= 1 and l >= 2, got t={t}, l={l}")
    batches = []
    for p in range(2 * t):
        batch = {(i, m) for i, m in _machine_batch(t, 0, p, l - 1)}
        batch |= {(t + 1, r) for r in _filled_batch(0, p, t * l - 1)}
        batches.append(batch)
    return Schedule(2 * t, batches)


def rank2_state(t, l, n0):
    """The ladder after n0 schedule steps (n0 may be negative)."""
    Q = rank2_quiver(t, l)
    sched = rank2_schedule(t, l)
    if n0 >= 0:
        for p in range(n0):
            Q = composite_mutate(Q, sched.batch(p))
    else:
        for p in range(-1, n0 - 1, -1):
            Q = composite_mutate(Q, sched.batch(p))
    return Q


def _compose(f, g):
    """Permutation f after g (both dicts on the same domain)."""
    return {c: f[g[c]] for c in g}

def rank2_w(t, p):
    """Column permutation w_p identifying the state after p steps with a
    relabeling of the initial ladder (combined with arrow reversal for odd
    p).  w_p is the alternating product of p factors starting with r+.
    """
    if t == 1:
        return {}
    if t % 2 == 1:
        rp = {c: c for c in range(1, t + 1)}
        for c in range(2, t, 2):
            rp[c], rp[c + 1] = c + 1, c
        rm = {c: c for c in range(1, t + 1)}
        for c in range(1, t, 2):
            rm[c], rm[c + 1] = c + 1, c
    else:
        rp = {c: c for c in range(1, t + 1)}
        for c in range(2, t - 1, 2):
            rp[c], rp[c + 1] = c + 1, c
        rm = {c: c for c in range(1, t + 1)}
        for c in range(1, t + 1, 2):
            rm[c], rm[c + 1] = c + 1, c
    w = {c: c for c in range(1, t + 1)}
    for q in range(p):
        r = rp if q % 2 == 0 else rm
        w = _compose(w, r)
    return w


# ---------------------------------------------------------------- trees

_ALPHA, _BETA = "a", "b"


def _phase(d, eps, col):
    """Schedule phase offset of a Dynkin vertex, by (d, sign, color)."""
    if d == 1:
        return 0 if eps > 0 else 1
    if d % 2 == 1:
        return 0 if eps < 0 else d
    if eps > 0:
        return 0 if col == _ALPHA else d
    return 2 * d - 1 if col == _ALPHA else d - 1


def _vertex_sign(d, eps, col, c, m):
    """Printed sign of column-c row-m of a Dynkin vertex."""
    if d == 1:
        return 1 if (m % 2 == 1) == (eps > 0) else -1
    if d % 2 == 1:
        flip = eps > 0
    else:
        flip = col == _BETA
    plus = (c + m) % 2 == 1
    return 1 if plus != flip else -1


def _check_coloring(cd, sc):
    for a in cd.labels:
        if sc.sign.get(a) not in (1, -1):
            raise InvalidColoring(f"vertex {a!r} has no sign")
        if cd.d(a) % 2 == 0 and sc.color.get(a) not in (_ALPHA, _BETA):
            raise InvalidColoring(f"even vertex {a!r} has no color")
    for a, b in cd.edges():
        da, db = cd.d(a), cd.d(b)
        odd_pair = da % 2 == 1 and db % 2 == 1
        if odd_pair and sc.sign[a] == sc.sign[b]:
            raise InvalidColoring(f"edge ({a},{b}) needs opposite signs")
        if not odd_pair and sc.sign[a] != sc.sign[b]:
            raise InvalidColoring(f"edge ({a},{b}) needs equal signs")
        if da % 2 == 0 and db % 2 == 0 and sc.color[a] == sc.color[b]:
            raise InvalidColoring(f"edge ({a},{b}) needs different colors")


def default_sign_coloring(cd):
    """Canonical rank-2 convention when applicable, else the deterministic
    assignment from the diagram."""
    if cd.r == 2 and sorted(cd.D) == [1, cd.t]:
        heavy = cd.labels[0] if cd.d(cd.labels[0]) == cd.t else cd.labels[1]
        light = cd.labels[1] if heavy == cd.labels[0] else cd.labels[0]
        if cd.t % 2 == 1:
            return SignColoring({heavy: -1, light: 1}, {})
        return SignColoring({heavy: 1, light: 1}, {heavy: _ALPHA})
    return sign_color(cd)


def _columns(cd, a, doubled):
    d = cd.d(a)
    if a in doubled and d % 2 == 0:
        return tuple(range(1, d + 1, 2))
    return tuple(range(1, d + 1))


def _edge_machines(cd, sc, a, b):
    """Normalize an edge and describe its rank-2 machine runs.

    Returns (left, right, runs) where runs is a list of (t', l'-multiplier
    is implicit, state, column_map) descriptors; left owns the circle
    columns of each machine and right the filled column.
    """
    da, db = cd.d(a), cd.d(b)
    if da == db:
        d = da
        if d % 2 == 1:
            left, right = (a, b) if sc.sign[a] < 0 else (b, a)
        else:
            left, right = (a, b) if sc.color[a] == _ALPHA else (b, a)
        return left, right, [("copy", j, (j - 1) % 2) for j in range(1, d + 1)]
    if db > da:
        a, b = b, a
        da, db = db, da
    if db != 1 or da < 2:
        raise InvalidColoring(
            f"edge ({a},{b}) with d=({da},{db}) is not tamely laced")
    phi = _phase(da, sc.sign[a], sc.color.get(a))
    return a, b, [("machine", da, phi % (2 * da))]


def build_quiver(cd, l, sc=None, doubled=()):
    """Assemble the level-l quiver of a tamely laced tree diagram.

    Every Dynkin vertex contributes its columns with the sign rule given by
    (d, sign, color); every edge contributes crossing arrows read off a
    rank-2 machine in the state determined by the heavier endpoint (or
    ladder copies when the two d's agree).  Vertices listed in `doubled`
    keep only their odd-numbered columns.
    """
    if l < 2:
        raise InvalidParams(f"need l >= 2, got l={l}")
    if sc is None:
        sc = default_sign_coloring(cd)
    _check_coloring(cd, sc)
    t = cd.t
    doubled = set(doubled)

    vertices = []
    sign = {}
    ctype = {}
    rows = {}
    for a in cd.labels:
        d = cd.d(a)
        rows[a] = cd.ta(a) * l - 1
        for c in _columns(cd, a, doubled):
            for m in range(1, rows[a] + 1):
                v = (a, c, m)
                vertices.append(v)
                sign[v] = _vertex_sign(d, sc.sign[a], sc.color.get(a), c, m)
                ctype[v] = FILLED if d == 1 else CIRCLE
    pos = {v: k for k, v in enumerate(vertices)}
    n = len(vertices)
    B = [[0] * n for _ in range(n)]

    def add(u, v, w=1):
        B[pos[u]][pos[v]] += w
        B[pos[v]][pos[u]] -= w

    # verticals from the sign rule
    for a in cd.labels:
        for c in _columns(cd, a, doubled):
            for m in range(1, rows[a]):
                u, v = (a, c, m), (a, c, m + 1)
                add(u, v) if sign[u] > 0 else add(v, u)

    # crossing arrows per edge, read off machine states
    for a, b in cd.edges():
        left, right, runs = _edge_machines(cd, sc, a, b)
        lcols = set(_columns(cd, left, doubled))
        rcols = set(_columns(cd, right, doubled))
        for run in runs:
            if run[0] == "copy":
                _, j, state = run
                if j not in lcols:  # the whole copy is filtered out
                    continue
                assert j in rcols
                lp = rows[left] + 1
                M = rank2_state(1, lp, state)
                for (u, v, mult) in M.arrows():
                    if (u[0] == 1) == (v[0] == 1):
                        continue  # internal vertical
                    uu = (left, j, u[1]) if u[0] == 1 else (right, j, u[1])
                    vv = (left, j, v[1]) if v[0] == 1 else (right, j, v[1])
                    add(uu, vv, mult)
            else:
                _, tprime, state = run
                lp = t * l // tprime
                M = rank2_state(tprime, lp, state)
                for (u, v, mult) in M.arrows():
                    cu, cv = u[0] <= tprime, v[0] <= tprime
                    if cu == cv:
                        continue  # internal vertical
                    if (cu and u[0] not in lcols) or (cv and v[0] not in lcols):
                        continue
                    uu = (left, u[0], u[1]) if cu else (right, 1, u[1])
                    vv = (left, v[0], v[1]) if cv else (right, 1, v[1])
                    add(uu, vv, mult)
    return AnnotatedQuiver(vertices, B, sign, ctype)


def build_schedule(cd, l, sc=None, doubled=()):
    """Period-2t schedule for the tree quiver: the union over Dynkin
    vertices of their phase-shifted column batches."""
    if l < 2:
        raise InvalidParams(f"need l >= 2, got l={l}")
    if sc is None:
        sc = default_sign_coloring(cd)
    _check_coloring(cd, sc)
    t = cd.t
    doubled = set(doubled)
    batches = []
    for p in range(2 * t):
        batch = set()
        for a in cd.labels:
            d = cd.d(a)
            nrows = cd.ta(a) * l - 1
            phi = _phase(d, sc.sign[a], sc.color.get(a))
            cols = _columns(cd, a, doubled)
            if d == 1:
                batch |= {(a, 1, m) for m in _filled_batch(phi, p, nrows)}
            else:
                batch |= {(a, k, m)
                          for k, m in _machine_batch(d, phi, p, nrows, cols)}
        batches.append(batch)
    return Schedule(2 * t, batches)


def rank2_flatten(t):
    """Map tree labels of the 2-vertex diagram to flat rank-2 labels."""
    def flat(v):
        a, c, m = v
        return (c, m) if a == 1 else (t + 1, m)
    return flat


# ------------------------------------------------------------ embeddings

class Embedding:
    """Bijection between a parity class of (a, m, n) triples and the
    mutation points (vertex, time) of the schedule.

    kind 'x': labels carried by cluster variables; the image point sits at
    time n + d_a.  kind 'y': labels carried by coefficients; the image
    point sits at time n.
    """

    def __init__(self, cd, l, kind, sc=None, doubled=()):
        if kind not in ("x", "y"):
            raise InvalidParams(f"kind must be 'x' or 'y', got {kind!r}")
        if sc is None:
            sc = default_sign_coloring(cd)
        _check_coloring(cd, sc)
        self.cd = cd
        self.l = l
        self.kind = kind
        self.sc = sc
        self.doubled = set(doubled)

    def _shift(self, a):
        return self.cd.d(a) if self.kind == "x" else 0

    def contains(self, a, m, n):
        """Is (a, m, n) in the domain parity class?"""
        cd = self.cd
        if a not in cd._pos:
            return False
        if not 1 <= m <= cd.ta(a) * self.l - 1:
            return False
        d = cd.d(a)
        phi = _phase(d, self.sc.sign[a], self.sc.color.get(a))
        nn = n + self._shift(a)
        if d == 1:
            return (m + nn + phi) % 2 == 1
        return (d * m + nn + phi) % 2 == 0

    def __call__(self, a, m, n):
        """Map a parity-class triple to its (vertex, time) point."""
        if not self.contains(a, m, n):
            raise ParityMismatch(f"({a},{m},{n}) not in the {self.kind}-class")
        cd = self.cd
        d = cd.d(a)
        nn = n + self._shift(a)
        if d == 1:
            return ((a, 1, m), nn)
        phi = _phase(d, self.sc.sign[a], self.sc.color.get(a))
        j = ((d * m + nn + phi) % (2 * d)) // 2
        c = 2 * j + 1 if 2 * j + 1 <= d else 2 * d - 2 * j
        if a in self.doubled and d % 2 == 0 and c % 2 == 0:
            raise ParityMismatch(
                f"({a},{m},{n}) lands on a filtered column of {a!r}")
        return ((a, c, m), nn)

    def invert(self, vertex, n):
        """Map a (vertex, time) point back; raises ParityMismatch when the
        point is not in the image."""
        a, c, m = vertex
        idx = (a, m, n - self._shift(a))
        if not self.contains(*idx):
            raise ParityMismatch(f"point ({vertex},{n}) not in the image")
        got = self(*idx)
        if got[0] != vertex:
            raise ParityMismatch(f"point ({vertex},{n}) not in the image")
        return idx


def embed(cd, l, kind, sc=None, doubled=()):
    return Embedding(cd, l, kind, sc=sc, doubled=doubled)
