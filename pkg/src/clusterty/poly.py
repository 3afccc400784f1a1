"""Exact multivariate polynomial / rational function / semifield arithmetic.

Polynomials live in ZZ[v_1..v_n] over a fixed, ordered tuple of variable
names; terms are stored as a dict {dense exponent tuple: nonzero int}.  The
string form lists terms in graded-lexicographic descending order and
round-trips exactly through parse_polynomial / parse_rational.

RationalFunction keeps a reduced fraction (gcd(num, den) = 1, leading
coefficient of den positive).  SemifieldElement wraps a fraction built only
from +, *, / on variables and positive constants, so every value is
subtraction-free by construction; it additionally carries an unreduced
witness pair of nonnegative-coefficient polynomials.
"""

from __future__ import annotations

import heapq
import math
import random
import re

import numpy as np


class DivisionByZero(ZeroDivisionError):
    pass


def _key(exp):
    """Graded-lex ordering key for an exponent tuple."""
    return (sum(exp), exp)


def _mul_packed(ta, tb, nvars):
    """Vectorized product of two large term dicts.

    Packs every exponent vector into a single 64-bit word (per-variable bit
    widths sized for the product), forms all pairwise key sums and
    coefficient products in numpy, and combines duplicates.  Returns a term
    dict, or None when the exponents or coefficients cannot be certified to
    fit (the caller then runs the plain loop).
    """
    ka = np.fromiter((x for e in ta for x in e), dtype=np.int64,
                     count=len(ta) * nvars).reshape(len(ta), nvars)
    kb = np.fromiter((x for e in tb for x in e), dtype=np.int64,
                     count=len(tb) * nvars).reshape(len(tb), nvars)
    hi = ka.max(axis=0) + kb.max(axis=0)
    shifts = []
    pos = 0
    for i in range(nvars):
        shifts.append(pos)
        pos += int(hi[i]).bit_length() + 1
    if pos > 62:
        return None
    mult = np.array([1 << s for s in shifts], dtype=np.int64)
    keys = ((ka @ mult)[:, None] + (kb @ mult)[None, :]).ravel()
    amax = max(abs(c) for c in ta.values())
    bmax = max(abs(c) for c in tb.values())
    # each output coefficient is a sum of at most min(|a|,|b|) products;
    # within word size use machine ints, otherwise exact object arithmetic
    if amax * bmax * min(len(ta), len(tb)) < (1 << 62):
        va = np.fromiter(ta.values(), dtype=np.int64, count=len(ta))
        vb = np.fromiter(tb.values(), dtype=np.int64, count=len(tb))
        vals = (va[:, None] * vb[None, :]).ravel()
        uk, inv = np.unique(keys, return_inverse=True)
        acc = np.zeros(len(uk), dtype=np.int64)
        np.add.at(acc, inv, vals)
    else:
        va = np.array(list(ta.values()), dtype=object)
        vb = np.array(list(tb.values()), dtype=object)
        vals = (va[:, None] * vb[None, :]).ravel()
        uk, inv = np.unique(keys, return_inverse=True)
        acc = np.zeros(len(uk), dtype=object)
        np.add.at(acc, inv, vals)
    nz = np.array([i for i, c in enumerate(acc.tolist()) if c], dtype=np.intp) \
        if acc.dtype == object else acc.nonzero()[0]
    if len(nz) == 0:
        return {}
    shift_arr = np.array(shifts, dtype=np.int64)
    width_arr = np.array([(shifts[i + 1] if i + 1 < nvars else pos) - shifts[i]
                          for i in range(nvars)], dtype=np.int64)
    exps = (uk[nz, None] >> shift_arr) & ((np.int64(1) << width_arr) - 1)
    coeffs = acc[nz].tolist()
    return {tuple(e): c for e, c in zip(exps.tolist(), coeffs)}


class Polynomial:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables, terms):
        # terms must already be clean: no zero coefficients
        self.variables = variables
        self.terms = terms
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, variables):
        return cls(tuple(variables), {})

    @classmethod
    def const(cls, c, variables):
        variables = tuple(variables)
        if c == 0:
            return cls(variables, {})
        return cls(variables, {(0,) * len(variables): int(c)})

    @classmethod
    def var(cls, name, variables):
        variables = tuple(variables)
        i = variables.index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, {exp: 1})

    @classmethod
    def one(cls, variables):
        return cls.const(1, variables)

    # -- basic queries ----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self):
        if not self.terms:
            return 0
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def is_one(self):
        return self.is_constant() and self.constant_value() == 1

    def num_terms(self):
        return len(self.terms)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, i):
        """Degree in variable index i."""
        return max((e[i] for e in self.terms), default=0)

    def used_vars(self):
        """Indices of variables actually appearing."""
        used = set()
        for e in self.terms:
            for i, d in enumerate(e):
                if d:
                    used.add(i)
        return used

    def leading(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        if not self.terms:
            return None
        e = max(self.terms, key=_key)
        return e, self.terms[e]

    def content(self):
        """Positive gcd of the integer coefficients (0 for the zero poly)."""
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
            if g == 1:
                break
        return g

    def mapcoeffs(self, f):
        out = {}
        for e, c in self.terms.items():
            c2 = f(c)
            if c2:
                out[e] = c2
        return Polynomial(self.variables, out)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ValueError("mixed variable universes")
            return other
        if isinstance(other, int):
            return Polynomial.const(other, self.variables)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables,
                          {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return Polynomial.zero(self.variables)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        if len(a) * len(b) > 4096:
            out = _mul_packed(self.terms, other.terms, len(self.variables))
            if out is not None:
                return Polynomial(self.variables, out)
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(e, 0) + ca * cb
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Polynomial(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.one(self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_constant() and (
                not self.terms if other == 0 else self.constant_value() == other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables,
                               frozenset(self.terms.items())))
        return self._hash

    # -- printing ---------------------------------------------------------

    def _monomial_str(self, exp):
        parts = []
        for name, d in zip(self.variables, exp):
            if d == 1:
                parts.append(name)
            elif d > 1:
                parts.append(f"{name}^{d}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e in sorted(self.terms, key=_key, reverse=True):
            c = self.terms[e]
            mono = self._monomial_str(e)
            if mono:
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            else:
                body = str(abs(c))
            if not out:
                out.append(body if c > 0 else "-" + body)
            else:
                out.append(("+ " if c > 0 else "- ") + body)
        return " ".join(out)

    def __repr__(self):
        return f"Polynomial({self})"


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*([0-9]+|[A-Za-z_][A-Za-z_0-9']*|\^|\*|\+|-|\(|\)|/)")


def _tokenize(s):
    toks, pos = [], 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            if s[pos:].strip():
                raise ValueError(f"bad token at {s[pos:]!r}")
            break
        toks.append(m.group(1))
        pos = m.end()
    return toks


def parse_polynomial(s, variables):
    """Parse the canonical string form (sums of integer monomials)."""
    variables = tuple(variables)
    toks = _tokenize(s)
    result = Polynomial.zero(variables)
    i = 0
    sign = 1
    term = None
    expect_factor = True
    while i < len(toks):
        tok = toks[i]
        if tok in "+-" and not expect_factor:
            result = result + term
            term = None
            sign = 1 if tok == "+" else -1
            expect_factor = True
            i += 1
            continue
        if tok == "-" and expect_factor:
            sign = -sign
            i += 1
            continue
        if tok == "*":
            i += 1
            expect_factor = True
            continue
        if tok.isdigit():
            f = Polynomial.const(int(tok), variables)
        else:
            if tok not in variables:
                raise ValueError(f"unknown variable {tok!r}")
            f = Polynomial.var(tok, variables)
            if i + 2 < len(toks) and toks[i + 1] == "^":
                f = f ** int(toks[i + 2])
                i += 2
        term = f if term is None else term * f
        if sign < 0:
            term = -term
            sign = 1
        expect_factor = False
        i += 1
    if term is not None:
        result = result + term
    return result


def parse_rational(s, variables):
    """Parse "poly" or "(poly)/(poly)" back into a RationalFunction."""
    s = s.strip()
    m = re.fullmatch(r"\((.*)\)/\((.*)\)", s)
    if m:
        num = parse_polynomial(m.group(1), variables)
        den = parse_polynomial(m.group(2), variables)
        return RationalFunction(num, den)
    return RationalFunction(parse_polynomial(s, variables),
                            Polynomial.one(tuple(variables)))


# -- division and gcd ------------------------------------------------------

def divexact(f, g):
    """Exact multivariate division f / g, or None if g does not divide f.

    Remainder terms are consumed in graded-lex order via a lazy max-heap
    (stale entries are skipped), so large quotients stay n log n instead of
    rescanning the remainder for its leading term every round.
    """
    if g.is_zero():
        raise DivisionByZero("division by zero polynomial")
    if f.is_zero():
        return Polynomial.zero(f.variables)
    if g.is_one():
        return f
    ge, gc = g.leading()
    rem = dict(f.terms)
    qterms = {}
    nvars = len(f.variables)
    heap = [(-sum(e), tuple(-x for x in e)) for e in rem]
    heapq.heapify(heap)
    while heap:
        _, ne = heapq.heappop(heap)
        fe = tuple(-x for x in ne)
        fc = rem.get(fe)
        if fc is None:
            continue
        qe = tuple(fe[i] - ge[i] for i in range(nvars))
        if any(d < 0 for d in qe) or fc % gc:
            return None
        qc = fc // gc
        qterms[qe] = qc
        for e, c in g.terms.items():
            te = tuple(qe[i] + e[i] for i in range(nvars))
            old = rem.get(te)
            s = (old or 0) - qc * c
            if s:
                if old is None:
                    heapq.heappush(heap, (-sum(te), tuple(-x for x in te)))
                rem[te] = s
            else:
                rem.pop(te, None)
    return Polynomial(f.variables, qterms)


def _monomial_gcd_with(f, exp):
    """Componentwise min of exp with all exponents of f."""
    out = list(exp)
    for e in f.terms:
        for i, d in enumerate(e):
            if d < out[i]:
                out[i] = d
        if not any(out):
            break
    return tuple(out)


def _univariate(f, k):
    """Coefficient list (in variable k) of Polynomials free of k."""
    d = f.degree_in(k)
    coeffs = [dict() for _ in range(d + 1)]
    for e, c in f.terms.items():
        e2 = list(e)
        deg = e2[k]
        e2[k] = 0
        coeffs[deg][tuple(e2)] = c
    return [Polynomial(f.variables, t) for t in coeffs]


def _from_univariate(coeffs, k, variables):
    out = {}
    for deg, p in enumerate(coeffs):
        for e, c in p.terms.items():
            e2 = list(e)
            e2[k] += deg
            out[tuple(e2)] = c
    return Polynomial(variables, out)


def _uni_deg(coeffs):
    d = len(coeffs) - 1
    while d >= 0 and coeffs[d].is_zero():
        d -= 1
    return d


def _pseudo_rem(F, G, k, variables):
    """Pseudo-remainder of coefficient lists F by G in variable k."""
    dF, dG = _uni_deg(F), _uni_deg(G)
    lc = G[dG]
    R = list(F[:dF + 1])
    while True:
        dR = _uni_deg(R)
        if dR < dG:
            return R[:max(dR + 1, 1)]
        shift = dR - dG
        lr = R[dR]
        R = [c * lc for c in R]
        for i in range(dG + 1):
            R[shift + i] = R[shift + i] - lr * G[i]
        R = R[:dR]  # top coefficient cancels
        if not R:
            return [Polynomial.zero(variables)]


def _content_list(polys):
    """gcd of a list of polynomials (the content w.r.t. a main variable)."""
    g = None
    for p in polys:
        if p.is_zero():
            continue
        g = p if g is None else poly_gcd(g, p)
        if g.is_one():
            return g
    if g is None:
        return Polynomial.zero(polys[0].variables)
    return g


_CERT_PRIMES = (2147483647, 4294967311, 2305843009213693951, 1000000007)
_CERT_RNG = random.Random(0x5EED)


def _spec_coeffs(f, point, p, k):
    """Dense coefficient list of f in variable k with the other variables
    evaluated at point, everything mod p."""
    out = [0] * (f.degree_in(k) + 1)
    for e, c in f.terms.items():
        v = c % p
        if not v:
            continue
        for i, a in enumerate(point):
            if i == k:
                continue
            if e[i]:
                v = v * pow(a, e[i], p) % p
        out[e[k]] = (out[e[k]] + v) % p
    return out


def _uni_gcd_degree(A, B, p):
    """Degree of gcd of two univariate coefficient lists over F_p."""
    A, B = A[:], B[:]
    while A and A[-1] == 0:
        A.pop()
    while B and B[-1] == 0:
        B.pop()
    while B:
        inv = pow(B[-1], p - 2, p)
        while len(A) >= len(B):
            top = A[-1]
            if top:
                fac = top * inv % p
                off = len(A) - len(B)
                for i in range(len(B) - 1):
                    A[off + i] = (A[off + i] - fac * B[i]) % p
            A.pop()
        while A and A[-1] == 0:
            A.pop()
        A, B = B, A
    return len(A) - 1


def _certified_coprime(fp, gp, shared):
    """Sound modular certificate that gcd(fp, gp) is constant.

    For each shared variable, specialize the others at a random point mod a
    prime; if the degree in that variable survives for both inputs (so the
    leading coefficients did not vanish, and with them the gcd's), the mod-p
    univariate gcd bounds the true gcd's degree from above.  Degree 0
    everywhere plus primitivity forces gcd = 1.  False negatives only fall
    through to the remainder sequence; a True answer is never wrong.
    """
    for k in shared:
        certified = False
        positives = 0
        for attempt in range(5):
            p = _CERT_PRIMES[attempt % len(_CERT_PRIMES)]
            point = [_CERT_RNG.randrange(1, 1 << 30)
                     for _ in fp.variables]
            A = _spec_coeffs(fp, point, p, k)
            if A[-1] == 0:
                continue
            B = _spec_coeffs(gp, point, p, k)
            if B[-1] == 0:
                continue
            if _uni_gcd_degree(A, B, p) == 0:
                certified = True
                break
            positives += 1
            if positives >= 2:
                return False
        if not certified:
            return False
    return True


def poly_gcd(f, g):
    """GCD in ZZ[vars], normalized to positive leading coefficient.

    Content / primitive-part recursion with a primitive pseudo-remainder
    sequence in the main variable; monomial and disjoint-variable cases are
    short-circuited.
    """
    if f.is_zero():
        return _pos(g)
    if g.is_zero():
        return _pos(f)
    cf, cg = f.content(), g.content()
    c = math.gcd(cf, cg)
    fp = f.mapcoeffs(lambda x: x // cf)
    gp = g.mapcoeffs(lambda x: x // cg)
    if fp.is_constant() or gp.is_constant():
        return Polynomial.const(c, f.variables)
    if len(fp.terms) == 1:
        e = _monomial_gcd_with(gp, next(iter(fp.terms)))
        return Polynomial(f.variables, {e: c})
    if len(gp.terms) == 1:
        e = _monomial_gcd_with(fp, next(iter(gp.terms)))
        return Polynomial(f.variables, {e: c})
    if fp.terms == gp.terms:
        return _pos(fp.mapcoeffs(lambda x: x * c))
    # split off the monomial content; the rest of the gcd then never needs
    # to drag pure powers of the variables through the recursion
    nvars = len(f.variables)
    mf = _monomial_gcd_with(fp, next(iter(fp.terms)))
    mg = _monomial_gcd_with(gp, next(iter(gp.terms)))
    if any(mf) or any(mg):
        me = tuple(min(a, b) for a, b in zip(mf, mg))
        fp = Polynomial(f.variables,
                        {tuple(e[i] - mf[i] for i in range(nvars)): cc
                         for e, cc in fp.terms.items()})
        gp = Polynomial(f.variables,
                        {tuple(e[i] - mg[i] for i in range(nvars)): cc
                         for e, cc in gp.terms.items()})
        h = poly_gcd(fp, gp)
        h = Polynomial(f.variables,
                       {tuple(e[i] + me[i] for i in range(nvars)): cc
                        for e, cc in h.terms.items()})
        return _pos(h.mapcoeffs(lambda x: x * c))
    shared = fp.used_vars() & gp.used_vars()
    if not shared:
        return Polynomial.const(c, f.variables)
    # mutation steps divide exactly far more often than not, so probe for
    # outright divisibility before falling back to remainder sequences
    if fp.total_degree() >= gp.total_degree() and divexact(fp, gp) is not None:
        return _pos(gp.mapcoeffs(lambda x: x * c))
    if gp.total_degree() >= fp.total_degree() and divexact(gp, fp) is not None:
        return _pos(fp.mapcoeffs(lambda x: x * c))
    if min(len(fp.terms), len(gp.terms)) >= 16:
        # common factors on the mutation path are products of semifield
        # atoms: peel those first, then try to certify the rest coprime so
        # large inputs stay out of the remainder sequence
        peel = None
        small = min(len(fp.terms), len(gp.terms))
        for a in sorted((a for a in _ATOM_REGISTRY.values()
                         if a.poly.variables == f.variables
                         and 1 < a.poly.num_terms() <= small),
                        key=lambda a: -a.poly.num_terms()):
            while True:
                q1 = divexact(fp, a.poly)
                if q1 is None:
                    break
                q2 = divexact(gp, a.poly)
                if q2 is None:
                    break
                fp, gp = q1, q2
                peel = a.poly if peel is None else peel * a.poly
        if peel is not None:
            return _pos((peel * poly_gcd(fp, gp)).mapcoeffs(lambda x: x * c))
        if _certified_coprime(fp, gp, shared):
            return Polynomial.const(c, f.variables)
    k = min(shared, key=lambda i: min(fp.degree_in(i), gp.degree_in(i)))
    h = _gcd_main(fp, gp, k)
    return _pos(h.mapcoeffs(lambda x: x * c))


def _pos(f):
    lead = f.leading()
    if lead and lead[1] < 0:
        return -f
    return f


def _gcd_main(f, g, k):
    """GCD of primitive-content inputs using main variable k."""
    F, G = _univariate(f, k), _univariate(g, k)
    contF = _content_list(F)
    contG = _content_list(G)
    cont = poly_gcd(contF, contG)
    Fp = [divexact(p, contF) for p in F]
    Gp = [divexact(p, contG) for p in G]
    if _uni_deg(Fp) < _uni_deg(Gp):
        Fp, Gp = Gp, Fp
    variables = f.variables
    while True:
        dG = _uni_deg(Gp)
        R = _pseudo_rem(Fp, Gp, k, variables)
        if _uni_deg(R) < 0:
            break
        if _uni_deg(R) == 0:
            # coprime in k
            return cont
        contR = _content_list(R)
        Fp, Gp = Gp, [divexact(p, contR) for p in R]
    contG2 = _content_list(Gp)
    prim = [divexact(p, contG2) for p in Gp]
    return cont * _from_univariate(prim, k, variables)


class RationalFunction:
    """Reduced fraction of integer polynomials over a shared universe."""

    __slots__ = ("num", "den")

    def __init__(self, num, den, reduce=True):
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.variables != den.variables:
            raise ValueError("mixed variable universes")
        if reduce:
            num, den = self._reduced(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _reduced(num, den):
        if num.is_zero():
            return num, Polynomial.one(num.variables)
        g = poly_gcd(num, den)
        if not g.is_one():
            num = divexact(num, g)
            den = divexact(den, g)
        if den.leading()[1] < 0:
            num, den = -num, -den
        return num, den

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_poly(cls, p):
        return cls(p, Polynomial.one(p.variables), reduce=False)

    @classmethod
    def const(cls, c, variables):
        return cls.from_poly(Polynomial.const(c, variables))

    @classmethod
    def var(cls, name, variables):
        return cls.from_poly(Polynomial.var(name, variables))

    @property
    def variables(self):
        return self.num.variables

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_polynomial(self):
        return self.den.is_one()

    def size(self):
        return self.num.num_terms() + self.den.num_terms()

    # -- arithmetic (gcd-aware to keep intermediate blowup down) ----------

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.variables != self.variables:
                raise ValueError("mixed variable universes")
            return other
        if isinstance(other, Polynomial):
            return RationalFunction.from_poly(self._copoly(other))
        if isinstance(other, int):
            return RationalFunction.const(other, self.variables)
        return NotImplemented

    def _copoly(self, p):
        if p.variables != self.variables:
            raise ValueError("mixed variable universes")
        return p

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        na, da, nb, db = self.num, self.den, other.num, other.den
        g0 = poly_gcd(da, db)
        if g0.is_one():
            return RationalFunction(na * db + nb * da, da * db, reduce=False)
        da_r = divexact(da, g0)
        db_r = divexact(db, g0)
        t = na * db_r + nb * da_r
        g1 = poly_gcd(t, g0)
        if g1.is_one():
            return RationalFunction(t, da_r * db, reduce=False)
        return RationalFunction(divexact(t, g1),
                                da_r * divexact(db, g1), reduce=False)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalFunction.const(0, self.variables)
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        num = divexact(self.num, g1) * divexact(other.num, g2)
        den = divexact(self.den, g2) * divexact(other.den, g1)
        if den.leading()[1] < 0:
            num, den = -num, -den
        return RationalFunction(num, den, reduce=False)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        num, den = self.den, self.num
        if den.leading()[1] < 0:
            num, den = -num, -den
        return RationalFunction(num, den, reduce=False)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by zero")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n == 0:
            return RationalFunction.const(1, self.variables)
        base = self if n > 0 else self.inverse()
        n = abs(n)
        # reduced fraction stays reduced under powers
        return RationalFunction(base.num ** n, base.den ** n, reduce=False)

    def __eq__(self, other):
        if isinstance(other, (int, Polynomial)):
            other = self._coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        # cross-multiplication: robust to any normalization slip
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


class _Atom:
    """One multiplicative generator of the coefficient semifield: a fixed
    polynomial with positive coefficients.  Atoms are interned so that the
    same polynomial is always the same object."""

    __slots__ = ("poly", "order")

    def __init__(self, poly, order):
        self.poly = poly
        self.order = order


_ATOM_REGISTRY = {}


def _atom_for(poly):
    key = (poly.variables, frozenset(poly.terms.items()))
    a = _ATOM_REGISTRY.get(key)
    if a is None:
        a = _Atom(poly, len(_ATOM_REGISTRY))
        _ATOM_REGISTRY[key] = a
    return a


def _expand_product(factors, variables):
    """Multiply out [(poly, exponent >= 1), ...], smallest pieces first."""
    pieces = []
    for p, e in factors:
        pieces.append(p ** e)
    if not pieces:
        return Polynomial.one(variables)
    pieces.sort(key=lambda q: q.num_terms())
    acc = pieces[0]
    for p in pieces[1:]:
        acc = acc * p
    return acc


class SemifieldElement:
    """Subtraction-free rational function in the universal semifield.

    Only +, *, / (and integer powers) are provided, so any value reachable
    from variables and positive constants is subtraction-free by
    construction.  Values are held in factored form {atom: exponent} over
    interned positive polynomials: products, quotients and powers are
    exponent arithmetic, and addition mints one new atom from the expanded
    numerator.  The factored split num = prod(e>0), den = prod(e<0) is
    itself the nonnegative witness pair; nothing is ever run through a
    polynomial gcd on the mutation path.
    """

    __slots__ = ("_vars", "_fac", "_pair_cache", "_rf_cache")

    def __init__(self, variables, fac):
        self._vars = tuple(variables)
        self._fac = {a: e for a, e in fac.items() if e}
        self._pair_cache = None
        self._rf_cache = None

    @classmethod
    def var(cls, name, variables):
        return cls(variables, {_atom_for(Polynomial.var(name, variables)): 1})

    @classmethod
    def const(cls, c, variables):
        if c <= 0:
            raise ValueError("semifield constants must be positive")
        if c == 1:
            return cls(variables, {})
        return cls(variables, {_atom_for(Polynomial.const(c, variables)): 1})

    @classmethod
    def one(cls, variables):
        return cls(variables, {})

    @property
    def variables(self):
        return self._vars

    def factorization(self):
        """The value as {positive polynomial: integer exponent}."""
        return {a.poly: e for a, e in sorted(self._fac.items(),
                                             key=lambda kv: kv[0].order)}

    def witness(self):
        """Unreduced fraction (num, den), both with nonnegative coefficients."""
        return self._pair()

    def _pair(self):
        if self._pair_cache is None:
            pos = [(a.poly, e) for a, e in sorted(self._fac.items(),
                                                  key=lambda kv: kv[0].order)
                   if e > 0]
            neg = [(a.poly, -e) for a, e in sorted(self._fac.items(),
                                                   key=lambda kv: kv[0].order)
                   if e < 0]
            self._pair_cache = (_expand_product(pos, self._vars),
                                _expand_product(neg, self._vars))
        return self._pair_cache

    def witness_ok(self):
        wn, wd = self.witness()
        return all(c > 0 for c in wn.terms.values()) and \
            all(c > 0 for c in wd.terms.values())

    @property
    def rf(self):
        """The value as a reduced RationalFunction (computed on demand)."""
        if self._rf_cache is None:
            wn, wd = self._pair()
            self._rf_cache = RationalFunction(wn, wd)
        return self._rf_cache

    def size(self):
        """Terms of polynomial data materialized in the factored form."""
        return max((a.poly.num_terms() for a in self._fac), default=1)

    def _coerce(self, other):
        if isinstance(other, SemifieldElement):
            return other
        if isinstance(other, int):
            return SemifieldElement.const(other, self._vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n1, d1 = self._pair()
        n2, d2 = other._pair()
        # num expands once and becomes a fresh atom; den stays factored
        num = n1 * d2 + n2 * d1 if (not d1.is_one() or not d2.is_one()) \
            else n1 + n2
        fac = {}
        for src in (self._fac, other._fac):
            for a, e in src.items():
                if e < 0:
                    fac[a] = fac.get(a, 0) + e
        num = self._cancel(num, fac)
        if not num.is_one():
            na = _atom_for(num)
            fac[na] = fac.get(na, 0) + 1
        return SemifieldElement(self._vars, fac)

    def _cancel(self, num, fac):
        """Rewrite a freshly expanded numerator over the existing atoms,
        crediting fac.  Exchange-relation sums factor through earlier
        exchange numerators (often ones absent from the local denominators),
        so every known atom is probed; skipping this lets atom sizes
        snowball instead of growing one genuinely-new factor per step."""
        mins = None
        for e in num.terms:
            if mins is None:
                mins = list(e)
            else:
                mins = [m if m < x else x for m, x in zip(mins, e)]
            if not any(mins):
                break
        if mins and any(mins):
            nvars = len(self._vars)
            num = Polynomial(num.variables,
                             {tuple(e[i] - mins[i] for i in range(nvars)): c
                              for e, c in num.terms.items()})
            for i, m in enumerate(mins):
                if m:
                    a = _atom_for(Polynomial.var(self._vars[i], self._vars))
                    fac[a] = fac.get(a, 0) + m
        cands = sorted((a for a in _ATOM_REGISTRY.values()
                        if a.poly.variables == num.variables
                        and a.poly.num_terms() > 1),
                       key=lambda a: -a.poly.num_terms())
        deg = num.total_degree()
        for a in cands:
            if num.num_terms() <= 1:
                break
            ad = a.poly.total_degree()
            if ad > deg or a.poly.num_terms() > num.num_terms():
                continue
            while True:
                q = divexact(num, a.poly)
                if q is None:
                    break
                num = q
                deg -= ad
                fac[a] = fac.get(a, 0) + 1
        return num

    __radd__ = __add__

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        fac = dict(self._fac)
        for a, e in other._fac.items():
            fac[a] = fac.get(a, 0) + e
        return SemifieldElement(self._vars, fac)

    __rmul__ = __mul__

    def inverse(self):
        return SemifieldElement(self._vars,
                                {a: -e for a, e in self._fac.items()})

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n == 0:
            return SemifieldElement.one(self._vars)
        return SemifieldElement(self._vars,
                                {a: e * n for a, e in self._fac.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            if other <= 0:
                return False
            other = SemifieldElement.const(other, self._vars)
        if isinstance(other, SemifieldElement):
            if self._fac == other._fac:
                return True
            n1, d1 = self._pair()
            n2, d2 = other._pair()
            return n1 * d2 == n2 * d1
        if isinstance(other, RationalFunction):
            n1, d1 = self._pair()
            return n1 * other.den == other.num * d1
        return NotImplemented

    def __hash__(self):
        # values with different factorizations can be equal, so only the
        # variable universe may enter the hash
        return hash(("semifield", self._vars))

    def __str__(self):
        wn, wd = self._pair()
        if wd.is_one():
            return str(wn)
        return f"({wn})/({wd})"

    def __repr__(self):
        return f"SemifieldElement({self})"


# -- spec-level operations -------------------------------------------------

def arith(op, f, g):
    """Dispatch exact rational arithmetic; closed on SemifieldElements."""
    if op not in ("add", "mul", "div"):
        raise ValueError(f"unknown op {op!r}")
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    return f / g


def substitute(f, bindings):
    """Substitute variables in a Polynomial / RationalFunction.

    bindings maps variable name -> int | Polynomial | RationalFunction over
    the same universe; unbound variables pass through.
    """
    if isinstance(f, SemifieldElement):
        f = f.rf
    if isinstance(f, Polynomial):
        f = RationalFunction.from_poly(f)
    variables = f.variables
    table = []
    for i, name in enumerate(variables):
        if name in bindings:
            v = bindings[name]
            if isinstance(v, int):
                v = RationalFunction.const(v, variables)
            elif isinstance(v, Polynomial):
                v = RationalFunction.from_poly(v)
            table.append(v)
        else:
            table.append(RationalFunction.var(name, variables))
    def eval_poly(p):
        total = RationalFunction.const(0, variables)
        cache = {}
        for e, c in p.terms.items():
            term = RationalFunction.const(c, variables)
            for i, d in enumerate(e):
                if d:
                    if (i, d) not in cache:
                        cache[(i, d)] = table[i] ** d
                    term = term * cache[(i, d)]
            total = total + term
        return total
    num = eval_poly(f.num)
    den = eval_poly(f.den)
    if den.is_zero():
        raise DivisionByZero("denominator vanishes under substitution")
    return num / den


def is_laurent(f, vars_subset):
    """True iff reduced den = (monomial in vars_subset) x (poly free of them)."""
    if isinstance(f, SemifieldElement):
        f = f.rf
    if isinstance(f, Polynomial):
        return True
    variables = f.variables
    idx = [i for i, name in enumerate(variables) if name in vars_subset]
    den = f.den
    profile = None
    for e in den.terms:
        part = tuple(e[i] for i in idx)
        if profile is None:
            profile = part
        elif part != profile:
            return False
    return True
