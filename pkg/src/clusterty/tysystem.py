"""Symbolic restricted T- and Y-system relations for tamely laced Cartan
data at level l.

Indices are triples (a, m, n): Dynkin vertex a, string 1 <= m <= (t/d_a)l-1,
integer time n (the rational time is n/t).  Relations are returned as
structured factor lists; boundary factors appear as the UNIT token (the
constant 1) in T-systems and the ZERO token (a vanishing coefficient,
i.e. the factor collapses to 1) in Y-systems.
"""

from __future__ import annotations

from collections import Counter
from typing import NamedTuple

from .builder import _phase


class IndexOutOfRange(ValueError):
    pass


class UnknownKind(ValueError):
    pass


class TYIndex(NamedTuple):
    a: object
    m: int
    n: int


class _Token:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


UNIT = _Token("UNIT")
ZERO = _Token("ZERO")


def check_index(cd, l, a, m):
    if a not in cd._pos:
        raise IndexOutOfRange(f"unknown vertex {a!r}")
    top = cd.ta(a) * l
    if not 1 <= m <= top - 1:
        raise IndexOutOfRange(f"m={m} outside 1..{top - 1} for vertex {a!r}")


def all_strings(cd, l):
    """All valid (a, m) pairs."""
    return [(a, m) for a in cd.labels for m in range(1, cd.ta(a) * l)]


def _t_or_unit(cd, l, b, m, n):
    top = cd.ta(b) * l
    if m == 0 or m == top:
        return UNIT
    if not 0 < m < top:
        raise IndexOutOfRange(f"m={m} outside 0..{top} for vertex {b!r}")
    return TYIndex(b, m, n)


def s_factors(cd, l, b, m, n):
    """Factor list of the sliding product S^(b)_m at time n.

    With m = d_b*m' + j (0 <= j < d_b) this is j factors at string m'+1 and
    d_b - j factors at string m', at times spread symmetrically around n.
    """
    db = cd.d(b)
    mp, j = divmod(m, db)
    out = []
    for k in range(1, j + 1):
        out.append(_t_or_unit(cd, l, b, mp + 1, n + (j + 1 - 2 * k)))
    for k in range(1, db - j + 1):
        out.append(_t_or_unit(cd, l, b, mp, n + (db - j + 1 - 2 * k)))
    return out


class TRelation(NamedTuple):
    idx: TYIndex
    lhs: tuple            # (T at n-d_a, T at n+d_a)
    first: tuple          # the two neighbor-string factors (may be UNIT)
    product: tuple        # factors of the Cartan-neighbor product term


def t_relation(cd, l, idx):
    """The T-system relation whose left side is T(a,m) at times n -+ d_a."""
    a, m, n = idx
    check_index(cd, l, a, m)
    d = cd.d(a)
    lhs = (TYIndex(a, m, n - d), TYIndex(a, m, n + d))
    first = (_t_or_unit(cd, l, a, m - 1, n), _t_or_unit(cd, l, a, m + 1, n))
    product = []
    for b in cd.neighbors(a):
        db = cd.d(b)
        if d == 1:
            product.extend(s_factors(cd, l, b, m, n))
        elif db == d:
            product.append(_t_or_unit(cd, l, b, m, n))
        else:
            assert db == 1
            product.append(_t_or_unit(cd, l, b, d * m, n))
    return TRelation(TYIndex(a, m, n), lhs, first, tuple(product))


def g_exponent(cd, l, a, m, n, b, k, v):
    """Multiplicity of T(a,m) at time n in the product term of the
    T-relation at (b,k,v)."""
    check_index(cd, l, a, m)
    rel = t_relation(cd, l, TYIndex(b, k, v))
    return sum(1 for f in rel.product
               if isinstance(f, TYIndex) and f == TYIndex(a, m, n))


def z_factors(cd, l, b, p, m, n):
    """Factor list of the block product Z^(b)_{p,m} at time n: strings
    p*m + j for |j| < p, each with p - |j| time-shifted factors; strings
    outside the valid range are dropped."""
    top = cd.ta(b) * l
    out = []
    for j in range(-p + 1, p):
        mm = p * m + j
        if not 1 <= mm <= top - 1:
            continue
        for k in range(1, p - abs(j) + 1):
            out.append(TYIndex(b, mm, n + (p - abs(j) + 1 - 2 * k)))
    return out


class YRelation(NamedTuple):
    idx: TYIndex
    lhs: tuple            # (Y at n-d_a, Y at n+d_a)
    den: tuple            # two (1 + Y^-1) factors (may be ZERO)
    num: tuple            # (1 + Y) factors, with multiplicity, direct route
    num_exp: dict         # TYIndex -> exponent, transpose-of-G route


def y_relation(cd, l, idx):
    """The Y-system relation whose left side is Y(a,m) at times n -+ d_a.

    The numerator is computed twice: directly from the block/neighbor
    products (num) and through the transpose of the T-system exponent
    matrix (num_exp).  Callers should check both agree.
    """
    a, m, n = idx
    check_index(cd, l, a, m)
    d = cd.d(a)
    top = cd.ta(a) * l
    lhs = (TYIndex(a, m, n - d), TYIndex(a, m, n + d))
    den = (ZERO if m - 1 == 0 else TYIndex(a, m - 1, n),
           ZERO if m + 1 == top else TYIndex(a, m + 1, n))
    num = []
    for b in cd.neighbors(a):
        db = cd.d(b)
        if d == 1:
            if m % db == 0:
                num.append(TYIndex(b, m // db, n))
        else:
            p = d // db
            if p == 1:
                num.append(TYIndex(b, m, n))
            else:
                num.extend(z_factors(cd, l, b, p, m, n))
    num_exp = {}
    for b in cd.neighbors(a):
        for k in range(1, cd.ta(b) * l):
            for v in range(n - cd.t, n + cd.t + 1):
                cnt = g_exponent(cd, l, a, m, n, b, k, v)
                if cnt:
                    num_exp[TYIndex(b, k, v)] = cnt
    return YRelation(TYIndex(a, m, n), lhs, den, tuple(num), num_exp)


_TRIPLE_KINDS = ("P+", "P-", "P'+", "P'-", "Q+", "Q-", "Q'+", "Q'-")


def parity(cd, l, idx, kind, sc=None):
    """Membership of (a, m, n) in one of the parity classes.

    Q-kinds need a sign/color decomposition sc; P-kinds are the rank-2
    classes and force the canonical rank-2 convention.
    """
    if kind not in _TRIPLE_KINDS:
        raise UnknownKind(kind)
    a, m, n = idx
    check_index(cd, l, a, m)
    if kind.startswith("P"):
        from .cartan import SignColoring
        if not (cd.r == 2 and sorted(cd.D) == [1, cd.t]):
            raise UnknownKind(f"{kind} requires rank-2 data")
        heavy = next(v for v in cd.labels if cd.d(v) == cd.t)
        light = next(v for v in cd.labels if v != heavy)
        if cd.t % 2 == 1:
            sc = SignColoring({heavy: -1, light: 1}, {})
        else:
            sc = SignColoring({heavy: 1, light: 1}, {heavy: "a"})
    elif sc is None:
        from .builder import default_sign_coloring
        sc = default_sign_coloring(cd)
    d = cd.d(a)
    phi = _phase(d, sc.sign[a], sc.color.get(a))
    primed = "'" in kind
    shift = 0 if primed else d
    nn = n + shift
    if d == 1:
        inplus = (m + nn + phi) % 2 == 1
    else:
        inplus = (d * m + nn + phi) % 2 == 0
    return inplus if kind.endswith("+") else not inplus


def point_parity(cd, l, vertex, n, kind, sc=None, doubled=()):
    """Membership of a (quiver vertex, time) point in the mutation-point
    classes: 'p+' tests the batch at time n, 'p-' the batch just before."""
    if kind not in ("p+", "p-"):
        raise UnknownKind(kind)
    from .builder import build_schedule
    sched = build_schedule(cd, l, sc=sc, doubled=doubled)
    p = n if kind == "p+" else n - 1
    return vertex in sched.batch(p)
