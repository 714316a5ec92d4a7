"""Command-line front end.

Subcommands: ``invariant`` builds one invariant and prints it,
``steenrod apply``/``steenrod milnor`` act on a parsed expression,
``closed-form`` evaluates one closed-form action, ``verify`` runs the
exact verification suites, and ``table`` prints an oracle-checked grid
of actions in symbolic (invariant-basis) form.

Exit codes: 0 on success, 1 when a verification cell fails, 2 on usage
or domain errors (bad indices, unparsable input, inadmissible operation).
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import closed_forms as cf
from .algebra import AlgebraContext, Element, render_text
from .duality import mixed_decompose
from .grammar import ParseError, parse_text, render_latex, to_json
from .invariants import L, Ltilde, M, Mtilde, Q, U, V
from .steenrod import bockstein, invariant_decompose, milnor_st, p_power
from .verify import DEFAULT_BUDGET, PROPERTY_CASES, SUITE_NAMES, run_suite


class UsageError(Exception):
    pass


def _prime(p: int) -> int:
    if p < 3 or p % 2 == 0 or any(p % d == 0 for d in range(3, int(p**0.5) + 1, 2)):
        raise UsageError("--p must be an odd prime, got %d" % p)
    return p


def _emit(el: Element, fmt: str) -> str:
    if fmt == "latex":
        return render_latex(el)
    if fmt == "json":
        return json.dumps(to_json(el))
    return render_text(el)


def _int_list(raw: str | None) -> tuple[int, ...]:
    if raw is None or not raw.strip():
        return ()
    try:
        return tuple(int(tok) for tok in raw.split(","))
    except ValueError:
        raise UsageError("expected a comma-separated integer list, got %r" % raw)


# ------------------------------------------------------------- invariant

def _cmd_invariant(args) -> int:
    p = _prime(args.p)
    idx = args.n if args.n is not None else args.k
    if idx is None:
        raise UsageError("--n (or --k) is required")
    if idx < 1:
        raise UsageError("index must be >= 1")
    ctx = AlgebraContext(p, idx)
    name, s = args.name, args.s
    if name in ("U", "V", "Ltilde") and s is not None:
        raise UsageError("--s does not apply to %s" % name)
    if name == "U":
        el = U(ctx, idx)
    elif name == "V":
        el = V(ctx, idx)
    elif name == "Ltilde":
        el = Ltilde(ctx, idx)
    elif name == "L":
        if s is not None and not 0 <= s <= idx:
            raise UsageError("L_{k,s} needs 0 <= s <= k")
        el = L(ctx, idx, s)
    elif name == "M":
        if s is None or not 0 <= s < idx:
            raise UsageError("M_{k,s} needs 0 <= s < k")
        el = M(ctx, idx, s)
    elif name == "Mtilde":
        if s is None or not -1 <= s < idx:
            raise UsageError("Mtilde_{n,s} needs -1 <= s < n")
        el = Mtilde(ctx, idx, s)
    else:  # Q
        if s is None or not 0 <= s <= idx:
            raise UsageError("Q_{n,s} needs 0 <= s <= n")
        el = Q(ctx, idx, s)
    print(_emit(el, args.format))
    return 0


# -------------------------------------------------------------- steenrod

def _parse_expr(text: str, p: int, pairs: int | None) -> Element:
    if pairs is None:
        seen = [int(i) for i in re.findall(r"[xy](\d+)", text)]
        if not seen:
            raise UsageError("cannot infer the generator count from %r; pass --pairs" % text)
        pairs = max(seen)
    if pairs < 1:
        raise UsageError("--pairs must be >= 1")
    return parse_text(text, AlgebraContext(p, pairs))


def _cmd_steenrod_apply(args) -> int:
    p = _prime(args.p)
    a = _parse_expr(args.expr, p, args.pairs)
    op = args.op.strip()
    m = re.fullmatch(r"P\^(\d+)", op)
    if m:
        out = p_power(int(m.group(1)), a)
    elif op in ("beta", "b"):
        out = bockstein(a)
    else:
        raise UsageError("--op must be 'P^r' or 'beta', got %r" % args.op)
    print(_emit(out, args.format))
    return 0


def _cmd_steenrod_milnor(args) -> int:
    p = _prime(args.p)
    S, R = _int_list(args.S), _int_list(args.R)
    if not R:
        raise UsageError("--R must list at least one entry")
    a = _parse_expr(args.expr, p, args.pairs)
    out = milnor_st(S, R, a, len(R))
    print(_emit(out, args.format))
    return 0


# ----------------------------------------------------------- closed-form

def _closed_form(family: str, p: int, r: int, n: int | None,
                 k: int | None, s: int | None) -> "cf.ClosedFormResult":
    if family in ("U", "V"):
        if k is None:
            raise UsageError("--k is required for family %s" % family)
        if k < 1:
            raise UsageError("--k must be >= 1")
        if s is not None:
            raise UsageError("--s does not apply to family %s" % family)
        ctx = AlgebraContext(p, k + 1)
        return (cf.power_on_u if family == "U" else cf.power_on_v)(r, k, ctx)
    if n is None:
        raise UsageError("--n is required for family %s" % family)
    if n < 1:
        raise UsageError("--n must be >= 1")
    ctx = AlgebraContext(p, n)
    if family == "M":
        if s is None or not -1 <= s < n:
            raise UsageError("family M needs -1 <= s < n")
        return cf.power_on_mtilde(r, n, s, ctx)
    if s is None or not 0 <= s < n:
        raise UsageError("family Q needs 0 <= s < n")
    return cf.power_on_q(r, n, s, ctx)


def _cmd_closed_form(args) -> int:
    p = _prime(args.p)
    if args.r < 0:
        raise UsageError("--r must be >= 0")
    res = _closed_form(args.family, p, args.r, args.n, args.k, args.s)
    if args.format == "json":
        print(json.dumps({
            "family": args.family, "p": p, "r": args.r,
            "n": args.n, "k": args.k, "s": args.s,
            "applicable": res.applicable, "condition": res.condition,
            "value": to_json(res.value),
        }))
    else:
        print(_emit(res.value, args.format))
    return 0


# ---------------------------------------------------------------- verify

def _cmd_verify(args) -> int:
    p_values = _int_list(args.p) or None
    if p_values:
        for p in p_values:
            _prime(p)
    rep = run_suite(
        args.suite,
        p_values=p_values,
        max_n=args.max_n,
        grid=args.grid,
        seed=args.seed,
        budget=args.budget,
        workers=args.workers,
        cases=args.cases,
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(rep, fh, indent=2)
            fh.write("\n")
    if args.format == "json":
        print(json.dumps(rep, indent=2))
    else:
        for c in rep["cells"]:
            line = "%-4s %s" % (c["status"], c["cell"])
            if c.get("reason"):
                line += "  (%s)" % c["reason"]
            if c["status"] == "FAIL" and "lhs" in c:
                line += "  lhs=%s rhs=%s" % (c["lhs"], c["rhs"])
            print(line)
        n = rep["counts"]
        print("suite=%s pass=%d fail=%d skip=%d (%.3fs)"
              % (rep["suite"], n["pass"], n["fail"], n["skip"], rep["seconds"]))
    return 1 if rep["counts"]["fail"] else 0


# ----------------------------------------------------------------- table

def _pow_str(base: str, e: int, latex: bool) -> str:
    if e == 1:
        return base
    return "%s^{%d}" % (base, e) if latex else "%s^%d" % (base, e)


def _sym_term(p: int, n: int, S: tuple, H: tuple, eps: int, m: int,
              c: int, latex: bool) -> str:
    mt = "\\tilde M_{%d,%d}" if latex else "Mt_{%d,%d}"
    lt = "\\tilde L_%d" if latex else "Lt_%d"
    parts = [mt % (n, s) for s in S]
    # fold even Ltilde powers into Q_{n,0} = Ltilde^2 for readability
    q0, odd = divmod(H[0], 2) if H else (0, 0)
    if odd:
        parts.append(lt % n)
    for i, e in enumerate((q0,) + tuple(H[1:])):
        if e:
            parts.append(_pow_str("Q_{%d,%d}" % (n, i), e, latex))
    if eps:
        parts.append("U_%d" % (n + 1))
    if m:
        parts.append(_pow_str("V_%d" % (n + 1), m, latex))
    if c != 1 or not parts:
        parts.insert(0, str(c))
    return (" " if latex else "*").join(parts)


def _symbolic(value: Element, n: int, mixed: bool, latex: bool) -> str:
    """Render over the invariant (or mixed U/V) monomial basis."""
    if value.is_zero():
        return "0"
    if mixed:
        coords = mixed_decompose(value, n)
    else:
        exp = invariant_decompose(value, n)
        coords = {(s_, h_, 0, 0): exp.scalar(s_, h_) for (s_, h_) in exp.entries}
    terms = [_sym_term(value.ctx.p, n, S, H, eps, m, coords[(S, H, eps, m)], latex)
             for (S, H, eps, m) in sorted(coords)]
    return " + ".join(terms)


def _table_cells(family: str, p: int, idx: int, rmax: int):
    """Yield (r, s_or_None, ClosedFormResult, target Element)."""
    if family in ("U", "V"):
        ctx = AlgebraContext(p, idx + 1)
        target = U(ctx, idx + 1) if family == "U" else V(ctx, idx + 1)
        fn = cf.power_on_u if family == "U" else cf.power_on_v
        for r in range(rmax + 1):
            yield r, None, fn(r, idx, ctx), target
        return
    ctx = AlgebraContext(p, idx)
    svals = range(-1, idx) if family == "M" else range(idx)
    for r in range(rmax + 1):
        for s in svals:
            if family == "M":
                yield r, s, cf.power_on_mtilde(r, idx, s, ctx), Mtilde(ctx, idx, s)
            else:
                yield r, s, cf.power_on_q(r, idx, s, ctx), Q(ctx, idx, s)


def _cmd_table(args) -> int:
    p = _prime(args.p)
    family = args.family
    idx = args.n if args.n is not None else args.k
    if idx is None:
        raise UsageError("--n (or --k) is required")
    if idx < 1:
        raise UsageError("index must be >= 1")
    if args.max_r is not None:
        rmax = args.max_r
    elif family == "Q":
        rmax = p**idx - 1
    elif family == "V":
        rmax = p**idx
    else:  # largest r any branch admits
        rmax = (p**idx - 1) // 2
    latex = args.format == "latex"
    mixed = family in ("U", "V")
    grid: dict[int, dict] = {}
    for r, s, res, target in _table_cells(family, p, idx, rmax):
        entry = _symbolic(res.value, idx, mixed, latex)
        ok = res.value == p_power(r, target)
        if not ok:
            entry = "MISMATCH(%s)" % entry
        grid.setdefault(r, {})[s] = {"symbolic": entry, "verified": ok}
    svals = [None] if mixed else (
        list(range(-1, idx)) if family == "M" else list(range(idx)))
    if args.format == "json":
        rows = [{"r": r, "cells": [
            {"s": s, **grid[r][s]} for s in svals]} for r in sorted(grid)]
        print(json.dumps({"family": family, "p": p, "index": idx, "rows": rows}))
        return 0
    header = ["r"] + (["%s_%d" % (family, idx + 1)] if mixed
                      else ["s=%d" % s for s in svals])
    body = [[str(r)] + [grid[r][s]["symbolic"] for s in svals] for r in sorted(grid)]
    if latex:
        print("\\begin{array}{%s}" % ("c" * len(header)))
        print(" & ".join(header) + " \\\\")
        for row in body:
            print(" & ".join(row) + " \\\\")
        print("\\end{array}")
        return 0
    widths = [max(len(line[i]) for line in [header] + body) for i in range(len(header))]
    for line in [header] + body:
        print("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip())
    return 0


# ------------------------------------------------------------------ main

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dicksonmui",
        description="Exact modular-invariant constructions and Steenrod "
                    "operation checks over odd primes.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_fmt(q, latex=True):
        choices = ["text", "json"] + (["latex"] if latex else [])
        q.add_argument("--format", choices=choices, default="text")

    q = sub.add_parser("invariant", help="construct one invariant")
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--name", required=True,
                   choices=["L", "M", "Ltilde", "Mtilde", "Q", "U", "V"])
    q.add_argument("--n", type=int)
    q.add_argument("--k", type=int, help="alias for --n")
    q.add_argument("--s", type=int)
    add_fmt(q)
    q.set_defaults(func=_cmd_invariant)

    st = sub.add_parser("steenrod", help="apply an operation to an expression")
    stsub = st.add_subparsers(dest="mode", required=True)
    q = stsub.add_parser("apply", help="P^r or the Bockstein")
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--op", required=True, help="P^r or beta")
    q.add_argument("--expr", required=True)
    q.add_argument("--pairs", type=int, help="generator pairs (default: inferred)")
    add_fmt(q)
    q.set_defaults(func=_cmd_steenrod_apply)
    q = stsub.add_parser("milnor", help="Milnor-basis St^{S,R}")
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--S", default="", help="comma list, e.g. 0,2 (default empty)")
    q.add_argument("--R", required=True, help="comma list, e.g. 1,0")
    q.add_argument("--expr", required=True)
    q.add_argument("--pairs", type=int)
    add_fmt(q)
    q.set_defaults(func=_cmd_steenrod_milnor)

    q = sub.add_parser("closed-form", help="one closed-form action P^r")
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--family", required=True, choices=["U", "M", "V", "Q"])
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--n", type=int)
    q.add_argument("--k", type=int)
    q.add_argument("--s", type=int)
    add_fmt(q)
    q.set_defaults(func=_cmd_closed_form)

    q = sub.add_parser("verify", help="run a verification suite")
    q.add_argument("--suite", required=True, choices=list(SUITE_NAMES) + ["all"])
    q.add_argument("--p", help="comma list of odd primes, e.g. 3,5")
    q.add_argument("--max-n", type=int, dest="max_n")
    q.add_argument("--grid", choices=["small", "full"], default="small")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="raw-monomial budget per cell; larger cells are skipped")
    q.add_argument("--workers", type=int)
    q.add_argument("--cases", type=int, default=PROPERTY_CASES,
                   help="randomized cases per property cell")
    q.add_argument("--out", help="also write the JSON report to this file")
    add_fmt(q, latex=False)
    q.set_defaults(func=_cmd_verify)

    q = sub.add_parser("table", help="oracle-checked grid of P^r actions")
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--family", required=True, choices=["U", "M", "V", "Q"])
    q.add_argument("--n", type=int)
    q.add_argument("--k", type=int, help="alias for --n")
    q.add_argument("--max-r", type=int, dest="max_r")
    add_fmt(q)
    q.set_defaults(func=_cmd_table)
    return ap


def main(argv: "list[str] | None" = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (ParseError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
