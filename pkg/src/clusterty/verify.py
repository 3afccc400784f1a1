"""Run the periodic mutation schedule on a level-l quiver, harvest labeled
cluster variables/coefficients through the parity embeddings, and check
the induced T- and Y-system relations symbolically.

Reports are lists of JSON-ready dicts, one per relation, with status
"ok", "fail", "skipped" (a referenced label falls outside the window) or
"budget_exceeded" (a referenced label was not computed because a size
budget stopped the run).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .builder import build_quiver, build_schedule, embed, rank2_w
from .poly import RationalFunction, SemifieldElement
from .quiver import composite_mutate, transform
from .seed import TRIVIAL, WITH_COEFFS, composite_mutate_seed, initial_seed
from .tysystem import (TYIndex, UNIT, ZERO, all_strings, t_relation,
                       y_relation)


def _thread_map(fn, items):
    workers = int(os.environ.get("CLUSTER_TY_THREADS", "1"))
    if workers <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


class RunTrace:
    """Everything harvested from one schedule run."""

    def __init__(self, cd, l, mode, window, sc, doubled, labeled_x, labeled_y,
                 quivers, lo_reached, hi_reached, hi_target, budget):
        self.cd = cd
        self.l = l
        self.mode = mode
        self.window = window
        self.sc = sc
        self.doubled = doubled
        self.labeled_x = labeled_x
        self.labeled_y = labeled_y
        self.quivers = quivers
        self.lo_reached = lo_reached
        self.hi_reached = hi_reached
        self.hi_target = hi_target
        self.budget = budget


def _seed_size(s):
    if s.y is None:
        return 0
    return max(v.size() for v in s.y.values())


def run(cd, l, window=None, mode=TRIVIAL, sc=None, doubled=(), budget=None,
        track_x=True, reach_labels=True):
    """Mutate along the schedule over integer times covering `window`
    (default |n| <= 2t) and label the variables met at mutation points.

    labeled_x[(a,m,n)] is read from the seed at time n + d_a, labeled_y at
    time n.  In coefficient mode a size budget (maximum terms in any
    coefficient) may stop the run early; reached bounds are recorded.
    track_x=False runs the coefficient dynamics alone, which is much
    cheaper when only Y-relations are wanted.  reach_labels=False stops the
    forward walk at the window edge instead of overshooting by max(d) to
    pick up the last x-labels; relations touching those labels then report
    as skipped.  Trivial-mode variables grow exponentially in time, so on
    wider diagrams the overshoot steps can dwarf the whole windowed run.
    """
    t = cd.t
    if window is None:
        window = (-2 * t, 2 * t)
    n_lo, n_hi = window
    if n_lo > n_hi:
        raise ValueError("empty window")
    Q0 = build_quiver(cd, l, sc=sc, doubled=doubled)
    sched = build_schedule(cd, l, sc=sc, doubled=doubled)
    seeds = {0: initial_seed(Q0, mode, track_x=track_x)}
    hi_seed_target = (n_hi + max(cd.D)
                      if track_x and reach_labels else n_hi)
    hi_reached = 0
    for n in range(0, hi_seed_target):
        nxt = composite_mutate_seed(seeds[n], sched.batch(n))
        if budget is not None and mode == WITH_COEFFS and _seed_size(nxt) > budget:
            break
        seeds[n + 1] = nxt
        hi_reached = n + 1
    lo_reached = 0
    for n in range(0, n_lo, -1):
        prv = composite_mutate_seed(seeds[n], sched.batch(n - 1))
        if budget is not None and mode == WITH_COEFFS and _seed_size(prv) > budget:
            break
        seeds[n - 1] = prv
        lo_reached = n - 1

    emx = embed(cd, l, "x", sc=sc, doubled=doubled)
    emy = embed(cd, l, "y", sc=sc, doubled=doubled)
    labeled_x = {}
    labeled_y = {} if mode == WITH_COEFFS else None
    for a, m in all_strings(cd, l):
        for n in range(n_lo, n_hi + 1):
            if track_x and emx.contains(a, m, n):
                v, nh = emx(a, m, n)
                if lo_reached <= nh <= hi_reached:
                    labeled_x[TYIndex(a, m, n)] = seeds[nh].x[v]
            if labeled_y is not None and emy.contains(a, m, n):
                v, nh = emy(a, m, n)
                if lo_reached <= nh <= hi_reached:
                    labeled_y[TYIndex(a, m, n)] = seeds[nh].y[v]
    quivers = {n: s.quiver for n, s in seeds.items()}
    return RunTrace(cd, l, mode, window, sc, doubled, labeled_x, labeled_y,
                    quivers, lo_reached, hi_reached, hi_seed_target, budget)


def _fmt_idx(idx):
    return f"({idx.a},{idx.m},{idx.n})"


def _budget_hit(trace):
    return (trace.lo_reached > trace.window[0]
            or trace.hi_reached < trace.hi_target)


def verify_t(trace):
    """Check every T-system relation whose left side is labeled in the
    window.  In coefficient mode the relation carries the y-dressing of
    its index."""
    cd, l = trace.cd, trace.l
    reports = []
    emy = embed(cd, l, "y", sc=trace.sc, doubled=trace.doubled)
    candidates = []
    for a, m in all_strings(cd, l):
        for n in range(trace.window[0], trace.window[1] + 1):
            if emy.contains(a, m, n):
                candidates.append(TYIndex(a, m, n))

    def check(idx):
        rel = t_relation(cd, l, idx)
        lhs1, lhs2 = rel.lhs
        if lhs1 not in trace.labeled_x or lhs2 not in trace.labeled_x:
            return None
        vals = {}
        missing = []
        for f in rel.first + rel.product:
            if f is UNIT:
                continue
            if f in trace.labeled_x:
                vals[f] = trace.labeled_x[f]
            else:
                missing.append(f)
        if missing:
            status = "budget_exceeded" if _budget_hit(trace) else "skipped"
            return {"relation": _fmt_idx(idx), "status": status,
                    "missing": [_fmt_idx(f) for f in missing]}
        some = trace.labeled_x[lhs1]
        one_ = RationalFunction.const(1, some.num.variables)
        first = one_
        for f in rel.first:
            first = first * (one_ if f is UNIT else vals[f])
        prod = one_
        for f in rel.product:
            prod = prod * (one_ if f is UNIT else vals[f])
        lhs = trace.labeled_x[lhs1] * trace.labeled_x[lhs2]
        if trace.mode == TRIVIAL:
            rhs = first + prod
            ok = lhs == rhs
        else:
            if idx not in trace.labeled_y:
                status = "budget_exceeded" if _budget_hit(trace) else "skipped"
                return {"relation": _fmt_idx(idx), "status": status,
                        "missing": [_fmt_idx(idx)]}
            # dress with y/(1+y) and 1/(1+y) through the witness pair
            # y = nk/dk, clearing the common (nk + dk) denominator
            nk, dk = trace.labeled_y[idx].witness()
            rhs_num = prod * nk + first * dk
            ok = lhs * (nk + dk) == rhs_num
            rhs = None
        rep = {"relation": _fmt_idx(idx), "status": "ok" if ok else "fail"}
        if not ok:
            if rhs is None:
                rhs = rhs_num / RationalFunction.from_poly(nk + dk)
            rep["lhs"] = str(lhs)
            rep["rhs"] = str(rhs)
        return rep

    for rep in _thread_map(check, candidates):
        if rep is not None:
            reports.append(rep)
    return reports


def verify_y(trace):
    """Check every Y-system relation whose left side is labeled in the
    window; the numerator is evaluated through both construction routes
    and they must agree."""
    if trace.mode != WITH_COEFFS:
        raise ValueError("verify_y needs a with_coefficients trace")
    cd, l = trace.cd, trace.l
    emx = embed(cd, l, "x", sc=trace.sc, doubled=trace.doubled)
    candidates = []
    for a, m in all_strings(cd, l):
        for n in range(trace.window[0], trace.window[1] + 1):
            if emx.contains(a, m, n):
                candidates.append(TYIndex(a, m, n))

    def check(idx):
        rel = y_relation(cd, l, idx)
        lhs1, lhs2 = rel.lhs
        refs = [f for f in (lhs1, lhs2) if isinstance(f, TYIndex)]
        refs += [f for f in rel.den if f is not ZERO]
        refs += list(rel.num)
        refs += list(rel.num_exp)
        missing = [f for f in refs if f not in trace.labeled_y]
        if missing:
            status = "budget_exceeded" if _budget_hit(trace) else "skipped"
            return {"relation": _fmt_idx(idx), "status": status,
                    "missing": sorted({_fmt_idx(f) for f in missing})}
        y = {f: trace.labeled_y[f] for f in set(refs)}
        lhs = y[lhs1] * y[lhs2]
        den = None
        for f in rel.den:
            if f is not ZERO:
                fac = 1 + y[f].inverse()
                den = fac if den is None else den * fac
        num = None
        for f in rel.num:
            fac = 1 + y[f]
            num = fac if num is None else num * fac
        num_tg = None
        for f, e in rel.num_exp.items():
            fac = (1 + y[f]) ** e
            num_tg = fac if num_tg is None else num_tg * fac
        one = SemifieldElement.one(lhs.variables)
        num = one if num is None else num
        num_tg = one if num_tg is None else num_tg
        routes_agree = num == num_tg
        ok = routes_agree and (lhs * (one if den is None else den) == num)
        rep = {"relation": _fmt_idx(idx), "status": "ok" if ok else "fail",
               "routes_agree": routes_agree}
        if not ok:
            rep["lhs"] = str(lhs)
            rep["rhs"] = str(num) + " / " + str(den)
        return rep

    return [r for r in _thread_map(check, candidates) if r is not None]


def verify_periodicity(cd, l, sc=None, doubled=()):
    """Mutate through one full period of 2t batches and check the quiver
    returns to its start.  For rank-2 data every intermediate state is also
    matched against the column-relabeling (with arrow reversal at odd
    steps) of the initial ladder."""
    from .builder import rank2_quiver, rank2_schedule
    t = cd.t
    rank2 = cd.r == 2 and sorted(cd.D) == [1, t] and not doubled
    if rank2:
        Q0 = rank2_quiver(t, l)
        sched = rank2_schedule(t, l)
    else:
        Q0 = build_quiver(cd, l, sc=sc, doubled=doubled)
        sched = build_schedule(cd, l, sc=sc, doubled=doubled)
    steps = []
    Q = Q0
    ok = True
    for p in range(2 * t):
        Q = composite_mutate(Q, sched.batch(p))
        entry = {"step": p + 1}
        if rank2:
            expected = transform(Q0, rank2_w(t, p + 1), opp=(p + 1) % 2 == 1)
            entry["matches_relabeling"] = Q == expected
            ok = ok and entry["matches_relabeling"]
        steps.append(entry)
    closed = Q == Q0
    return {"period": 2 * t, "closed": closed, "steps": steps,
            "status": "ok" if (closed and ok) else "fail"}


def summarize(reports):
    """Counts by status for a list of relation reports."""
    out = {}
    for r in reports:
        out[r["status"]] = out.get(r["status"], 0) + 1
    return out
