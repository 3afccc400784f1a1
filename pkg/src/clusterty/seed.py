"""Seeds: a quiver together with cluster variables x_v and (optionally)
coefficients y_v, mutated by the exchange rules in the universal semifield.

Two modes: "trivial" drops all coefficient factors from the x-exchange;
"with_coefficients" tracks y-variables as subtraction-free elements.
"""

from __future__ import annotations

from .poly import RationalFunction, SemifieldElement, divexact
from .quiver import check_non_adjacent, mutate_matrix

TRIVIAL = "trivial"
WITH_COEFFS = "with_coefficients"


class Seed:
    def __init__(self, quiver, x, y, mode, variables):
        self.quiver = quiver
        self.x = dict(x) if x is not None else None
        self.y = dict(y) if y is not None else None
        self.mode = mode
        self.variables = variables

    def __eq__(self, other):
        if not isinstance(other, Seed):
            return NotImplemented
        return (self.quiver == other.quiver and self.mode == other.mode
                and self.x == other.x and self.y == other.y)


def initial_seed(Q, mode=TRIVIAL, track_x=True):
    """Fresh variables x1..xN (and y1..yN in coefficient mode), numbered by
    vertex position.  track_x=False drops the cluster variables and evolves
    coefficients only (much cheaper for pure Y-system work)."""
    if mode not in (TRIVIAL, WITH_COEFFS):
        raise ValueError(f"unknown mode {mode!r}")
    if not track_x and mode == TRIVIAL:
        raise ValueError("trivial mode tracks nothing without x")
    n = Q.n
    xnames = [f"x{i + 1}" for i in range(n)]
    ynames = [f"y{i + 1}" for i in range(n)]
    variables = tuple(xnames + ynames) if mode == WITH_COEFFS else tuple(xnames)
    x = None
    if track_x:
        x = {v: RationalFunction.var(xnames[i], variables)
             for i, v in enumerate(Q.vertices)}
    y = None
    if mode == WITH_COEFFS:
        y = {v: SemifieldElement.var(ynames[i], variables)
             for i, v in enumerate(Q.vertices)}
    return Seed(Q, x, y, mode, variables)


def mutate_seed(s, k):
    """Seed mutation at vertex k."""
    Q = s.quiver
    ik = Q.index(k)
    B = Q.B
    x = None
    if s.x is not None:
        one = RationalFunction.const(1, s.variables)
        pos_prod = one
        neg_prod = one
        for j, v in enumerate(Q.vertices):
            b = int(B[j, ik])
            if b > 0:
                pos_prod = pos_prod * s.x[v] ** b
            elif b < 0:
                neg_prod = neg_prod * s.x[v] ** (-b)
        x = dict(s.x)
    y = None
    if s.mode == TRIVIAL:
        x[k] = (pos_prod + neg_prod) / s.x[k]
    else:
        yk = s.y[k]
        y = dict(s.y)
        one_plus = yk + 1
        yk_pow = {}
        op_pow = {}
        for j, v in enumerate(Q.vertices):
            if v == k:
                continue
            b = int(B[ik, j])
            if b == 0:
                continue
            yv = s.y[v]
            if b > 0:
                if b not in yk_pow:
                    yk_pow[b] = yk ** b
                yv = yv * yk_pow[b]
            if -b not in op_pow:
                op_pow[-b] = one_plus ** (-b)
            yv = yv * op_pow[-b]
            y[v] = yv
        y[k] = yk.inverse()
        if x is not None:
            # with y_k = nk/dk (any representative), clearing dk turns the
            # exchange ratio (y_k M+ + M-) / ((1 + y_k) x_k) into
            # (nk M+ + dk M-) / ((nk + dk) x_k); nk + dk never needs
            # expanding: its factorization follows from the one of 1 + y_k
            nk, dk = yk.witness()
            new_x = (pos_prod * nk + neg_prod * dk) / s.x[k]
            for a, e in sorted(_sum_factors(yk, one_plus).items(),
                               key=lambda kv: -kv[0].poly.num_terms()):
                for _ in range(e):
                    q = divexact(new_x.num, a.poly)
                    if q is not None:
                        new_x = RationalFunction(q, new_x.den, reduce=False)
                    else:
                        new_x = RationalFunction(new_x.num,
                                                 new_x.den * a.poly,
                                                 reduce=False)
            x[k] = new_x
    return Seed(mutate_matrix(Q, k), x, y, s.mode, s.variables)


def _sum_factors(yk, one_plus):
    """Atom factorization of num(y_k) + den(y_k), read off from 1 + y_k."""
    fac = {}
    for a, e in one_plus._fac.items():
        fac[a] = fac.get(a, 0) + e
    for a, e in yk._fac.items():
        if e < 0:
            fac[a] = fac.get(a, 0) - e
    bad = {a: e for a, e in fac.items() if e < 0}
    if bad:
        raise RuntimeError(f"inconsistent semifield factorization: {bad}")
    return {a: e for a, e in fac.items() if e}


def composite_mutate_seed(s, S):
    """Simultaneous seed mutation at a pairwise non-adjacent set.

    Sequential application in vertex order; non-adjacency (checked here)
    makes the result order-independent.
    """
    out = s
    for i in check_non_adjacent(s.quiver, S):
        out = mutate_seed(out, s.quiver.vertices[i])
    return out
