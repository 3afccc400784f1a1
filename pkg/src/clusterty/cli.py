"""Command-line interface.

Exit codes: 0 on success/verified, 1 when a check or verification fails,
2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import builder, cartan, quiver, verify
from .seed import TRIVIAL, WITH_COEFFS


class _InputError(Exception):
    pass


def _load_spec(args):
    """Matrix plus optional signs/colors from --matrix or --input."""
    data = {}
    if getattr(args, "input", None):
        try:
            with open(args.input) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise _InputError(f"cannot read {args.input}: {e}")
        if not isinstance(data, dict) or "cartan" not in data:
            raise _InputError("input file must be an object with a 'cartan' key")
    elif getattr(args, "matrix", None):
        try:
            data = {"cartan": json.loads(args.matrix)}
        except json.JSONDecodeError as e:
            raise _InputError(f"bad --matrix JSON: {e}")
    else:
        raise _InputError("one of --matrix or --input is required")
    for key in ("signs", "colors"):
        val = getattr(args, key, None)
        if val:
            try:
                data[key] = json.loads(val)
            except json.JSONDecodeError as e:
                raise _InputError(f"bad --{key} JSON: {e}")
    return data


def _coerce_labels(d):
    if d is None:
        return None
    out = {}
    for k, v in d.items():
        try:
            k = int(k)
        except (TypeError, ValueError):
            pass
        out[k] = v
    return out


def _prepare(data, need_sc=True):
    """Validate, require tamely laced, extend non-bipartite diagrams, and
    resolve the sign/color decomposition."""
    try:
        cd = cartan.validate_cartan(data["cartan"])
    except (cartan.NotCartan, cartan.NotSymmetrizable) as e:
        raise _InputError(str(e))
    if not cartan.is_tamely_laced(cd):
        raise _InputError("matrix is not tamely laced")
    doubled = frozenset()
    if cd.r > 1:
        ext, prov = cartan.extend_diagram(cd)
        cd = ext
        doubled = cartan.doubled_set(cd, prov)
    if not need_sc:
        return cd, None, doubled
    signs = _coerce_labels(data.get("signs"))
    colors = _coerce_labels(data.get("colors"))
    if signs or colors:
        sc = cartan.sign_color(cd, signs=signs, colors=colors)
    else:
        sc = builder.default_sign_coloring(cd)
    return cd, sc, doubled


def _parse_window(text, t):
    if text is None:
        return (-2 * t, 2 * t)
    if ":" in text:
        lo, hi = text.split(":", 1)
        return (int(lo), int(hi))
    n = int(text)
    return (-abs(n), abs(n))


def _emit(args, payload, text_lines):
    if getattr(args, "format", "json") == "text":
        print("\n".join(text_lines))
    else:
        print(json.dumps(payload, indent=2))


def _cmd_check_cartan(args):
    data = _load_spec(args)
    try:
        cd = cartan.validate_cartan(data["cartan"])
    except (cartan.NotCartan, cartan.NotSymmetrizable) as e:
        raise _InputError(str(e))
    tame = cartan.is_tamely_laced(cd)
    payload = {"tamely_laced": tame, "D": list(cd.D), "t": cd.t, "rank": cd.r}
    diag = ",".join(str(d) for d in cd.D)
    line = (f"tamely laced, D=diag({diag}), t={cd.t}" if tame
            else "not tamely laced")
    _emit(args, payload, [line])
    return 0 if tame else 1


def _cmd_build_quiver(args):
    cd, sc, doubled = _prepare(_load_spec(args))
    Q = builder.build_quiver(cd, args.level, sc=sc, doubled=doubled)
    if args.format == "dot":
        print(quiver.to_dot(Q))
    elif args.format == "text":
        print(f"{Q.n} vertices, {sum(m for _, _, m in Q.arrows())} arrows")
    else:
        print(json.dumps(quiver.to_json(Q), indent=2))
    return 0


def _cmd_schedule(args):
    cd, sc, doubled = _prepare(_load_spec(args))
    sched = builder.build_schedule(cd, args.level, sc=sc, doubled=doubled)
    batches = [sorted(sched.batch(p)) for p in range(sched.period)]
    payload = {"period": sched.period,
               "batches": [[list(v) for v in b] for b in batches]}
    lines = [f"period {sched.period}"]
    for p, b in enumerate(batches):
        lines.append(f"batch {p}: " + " ".join(str(tuple(v)) for v in b))
    _emit(args, payload, lines)
    return 0


def _make_trace(args):
    cd, sc, doubled = _prepare(_load_spec(args))
    window = _parse_window(args.window, cd.t)
    mode = WITH_COEFFS if args.mode == "with_coefficients" else TRIVIAL
    return verify.run(cd, args.level, window=window, mode=mode, sc=sc,
                      doubled=doubled, budget=args.budget)


def _cmd_run(args):
    trace = _make_trace(args)
    payload = {
        "window": list(trace.window),
        "mode": trace.mode,
        "reached": [trace.lo_reached, trace.hi_reached],
        "labeled_x": {f"({a},{m},{n})": str(v)
                      for (a, m, n), v in sorted(trace.labeled_x.items(),
                                                 key=lambda kv: (str(kv[0][0]),) + tuple(map(int, kv[0][1:])))},
    }
    if trace.labeled_y is not None:
        payload["labeled_y"] = {f"({a},{m},{n})": str(v.rf)
                                for (a, m, n), v in sorted(trace.labeled_y.items(),
                                                           key=lambda kv: (str(kv[0][0]),) + tuple(map(int, kv[0][1:])))}
    lines = [f"{len(trace.labeled_x)} labeled variables on window {trace.window}"]
    _emit(args, payload, lines)
    return 0


def _finish_verify(args, reports):
    counts = verify.summarize(reports)
    payload = {"summary": counts, "relations": reports}
    lines = [f"{r['relation']}: {r['status']}" for r in reports]
    lines.append(" ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    _emit(args, payload, lines)
    return 1 if counts.get("fail") else 0


def _cmd_verify_t(args):
    return _finish_verify(args, verify.verify_t(_make_trace(args)))


def _cmd_verify_y(args):
    args.mode = "with_coefficients"
    return _finish_verify(args, verify.verify_y(_make_trace(args)))


def _cmd_verify_periodicity(args):
    cd, sc, doubled = _prepare(_load_spec(args))
    rep = verify.verify_periodicity(cd, args.level, sc=sc, doubled=doubled)
    lines = [f"period {rep['period']}: "
             + ("closed" if rep["closed"] else "NOT closed")]
    _emit(args, rep, lines)
    return 0 if rep["status"] == "ok" else 1


def _cmd_export(args):
    cd, sc, doubled = _prepare(_load_spec(args))
    Q = builder.build_quiver(cd, args.level, sc=sc, doubled=doubled)
    out = (quiver.to_dot(Q) if args.format == "dot"
           else json.dumps(quiver.to_json(Q), indent=2))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return 0


def _add_matrix_args(sp):
    sp.add_argument("--matrix", help="Cartan matrix as inline JSON")
    sp.add_argument("--input", help="JSON file with cartan/signs/colors")
    sp.add_argument("--signs", help="sign overrides as JSON, e.g. '{\"1\":\"+\"}'")
    sp.add_argument("--colors", help="color overrides as JSON, e.g. '{\"2\":\"a\"}'")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="clusterty",
        description="T/Y-system quivers for tamely laced Cartan matrices")
    sub = parser.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("check-cartan", help="validate and classify a matrix")
    _add_matrix_args(sp)
    sp.add_argument("--format", choices=["json", "text"], default="text")
    sp.set_defaults(fn=_cmd_check_cartan)

    sp = sub.add_parser("build-quiver", help="build the level-l quiver")
    _add_matrix_args(sp)
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--format", choices=["json", "dot", "text"], default="json")
    sp.set_defaults(fn=_cmd_build_quiver)

    sp = sub.add_parser("schedule", help="print the period-2t mutation schedule")
    _add_matrix_args(sp)
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--format", choices=["json", "text"], default="json")
    sp.set_defaults(fn=_cmd_schedule)

    for name, fn, needs_mode in (("run", _cmd_run, True),
                                 ("verify-t", _cmd_verify_t, True),
                                 ("verify-y", _cmd_verify_y, False)):
        sp = sub.add_parser(name)
        _add_matrix_args(sp)
        sp.add_argument("--level", type=int, required=True)
        sp.add_argument("--window", help="N or lo:hi (times n); default 2t")
        if needs_mode:
            sp.add_argument("--mode", choices=["trivial", "with_coefficients"],
                            default="trivial")
        sp.add_argument("--budget", type=int, default=None,
                        help="max terms per coefficient before stopping")
        sp.add_argument("--format", choices=["json", "text"], default="json")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("verify-periodicity")
    _add_matrix_args(sp)
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--format", choices=["json", "text"], default="json")
    sp.set_defaults(fn=_cmd_verify_periodicity)

    sp = sub.add_parser("export", help="write the quiver as dot or json")
    _add_matrix_args(sp)
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--format", choices=["dot", "json"], default="dot")
    sp.add_argument("--output", help="file path (default stdout)")
    sp.set_defaults(fn=_cmd_export)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (builder.InvalidParams, builder.InvalidColoring,
            cartan.NoValidColoring, cartan.Decomposable, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
