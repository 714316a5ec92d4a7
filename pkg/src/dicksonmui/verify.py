"""Exact verification suites with budget-aware scheduling.

Every suite is a flat list of independent cells.  A cell compares two
exactly computed quantities — construction against oracle, closed form
against the Cartan expansion, pairing against pairing — or runs a batch
of seeded property checks.  Cells report PASS/FAIL/SKIP rows; a SKIP
always carries a reason (usually the raw-monomial budget) and is never
silent.

Cells are dispatched to a process pool when the worker count exceeds
one; report rows keep the deterministic build order regardless of
completion order.
"""

from __future__ import annotations

import itertools
import math
import os
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from . import closed_forms as cf
from . import duality
from .algebra import AlgebraContext, Element, render_text
from .arith import mu_mod, seq_stats, st_operation_degree
from .grammar import from_json, parse_text, render_latex, to_json
from .invariants import (
    Ltilde,
    Mtilde,
    Q,
    Q_recursion,
    U,
    V,
    V_product,
    apply_matrix,
    dimension,
    gl_generators,
    sl_generators,
)
from .steenrod import (
    admissible_indices,
    basis_element,
    bockstein,
    compose_check,
    d_star_p,
    milnor_st,
    p_power,
    total_power,
)
from .algebra import embed, relabel

SUITE_NAMES = ("core", "invariants", "steenrod", "closed-forms", "duality")
DEFAULT_BUDGET = 200_000
WORKERS_ENV = "DICKSONMUI_WORKERS"
PROPERTY_CASES = 1000


def _mc(nvars: int, ydeg: int) -> int:
    """Homogeneous monomial count — the raw-monomial budget currency."""
    if ydeg < 0:
        return 0
    return math.comb(ydeg + nvars - 1, nvars - 1)


def _eq_row(lhs: Element, rhs: Element) -> dict:
    if lhs == rhs:
        return {"status": "PASS"}
    return {"status": "FAIL", "lhs": render_text(lhs), "rhs": render_text(rhs)}


def _fmt(t: Sequence[int]) -> str:
    return ",".join(str(v) for v in t)


def _subsets(n: int):
    for size in range(n + 1):
        yield from itertools.combinations(range(n), size)


# ------------------------------------------------------------- invariants


def _cell_q_recursion(p: int, n: int, s: int) -> dict:
    ctx = AlgebraContext(p, n)
    return _eq_row(Q(ctx, n, s), Q_recursion(ctx, n, s))


def _cell_v_product(p: int, k: int) -> dict:
    ctx = AlgebraContext(p, k)
    return _eq_row(V(ctx, k), V_product(ctx, k))


def _cell_q_base(p: int, n: int) -> dict:
    ctx = AlgebraContext(p, n)
    return _eq_row(Q(ctx, n, 0), Ltilde(ctx, n) ** 2)


def _cell_q_top(p: int, n: int) -> dict:
    ctx = AlgebraContext(p, n)
    return _eq_row(Q(ctx, n, n), ctx.one())


def _cell_gl_invariance(p: int, n: int, s: int, gi: int) -> dict:
    ctx = AlgebraContext(p, n)
    a = Q(ctx, n, s)
    return _eq_row(apply_matrix(a, gl_generators(n, p)[gi]), a)


def _cell_sl_invariance(p: int, n: int, name: str, s: int, gi: int) -> dict:
    ctx = AlgebraContext(p, n)
    a = Ltilde(ctx, n) if name == "L" else Mtilde(ctx, n, s)
    return _eq_row(apply_matrix(a, sl_generators(n, p)[gi]), a)


def _flag_stabilizer_generators(k: int, p: int) -> list:
    """Transvections I + E_ij that fix the last pair's flag (j != k-1):
    the invariance group of U_k and V_k, which mix y_k only upward."""
    return [g for g in sl_generators(k, p)
            if all(g[i][k - 1] == int(i == k - 1) for i in range(k))]


def _cell_flag_invariance(p: int, k: int, name: str, gi: int) -> dict:
    ctx = AlgebraContext(p, k)
    a = U(ctx, k) if name == "U" else V(ctx, k)
    return _eq_row(apply_matrix(a, _flag_stabilizer_generators(k, p)[gi]), a)


def _invariant_tasks(p_values, max_n):
    tasks = []
    for p in p_values:
        for n in range(1, max_n + 1):
            base = _mc(n, p**n - 1)
            for s in range(n + 1):
                tasks.append(_task("invariants", "Q-recursion/p%d/n%d/s%d" % (p, n, s),
                                   "q_recursion", (p, n, s), 4 * base))
            tasks.append(_task("invariants", "V-product/p%d/k%d" % (p, n),
                               "v_product", (p, n), _mc(n, p ** (n - 1)) * 4))
            tasks.append(_task("invariants", "Q-base/p%d/n%d" % (p, n),
                               "q_base", (p, n), base))
            tasks.append(_task("invariants", "Q-top/p%d/n%d" % (p, n),
                               "q_top", (p, n), 1))
            glgen = gl_generators(n, p)
            slgen = sl_generators(n, p)
            gl_est = base * p**n
            for s in range(n):
                for gi in range(len(glgen)):
                    tasks.append(_task("invariants", "GL/p%d/n%d/s%d/g%d" % (p, n, s, gi),
                                       "gl_invariance", (p, n, s, gi), gl_est))
            sl_targets = [("L", -1)] + [("M", s) for s in range(n)]
            sl_est = _mc(n, p**n) * p**n
            for name, s in sl_targets:
                for gi in range(len(slgen)):
                    tasks.append(_task("invariants", "SL/p%d/n%d/%s%d/g%d" % (p, n, name, s, gi),
                                       "sl_invariance", (p, n, name, s, gi), sl_est))
            if n >= 2:
                flag_est = _mc(n, p ** (n - 1) * 2) * p**n
                for name in ("U", "V"):
                    for gi in range(len(_flag_stabilizer_generators(n, p))):
                        tasks.append(_task(
                            "invariants", "flag/p%d/k%d/%s/g%d" % (p, n, name, gi),
                            "flag_invariance", (p, n, name, gi), flag_est))
    return tasks


# --------------------------------------------------------------- steenrod

_NAMED = ("x", "y", "y^2", "x*y", "y^3", "U2", "V2")


def _named_element(p: int, name: str) -> Element:
    one = AlgebraContext(p, 1)
    if name == "x":
        return one.x(1)
    if name == "y":
        return one.y(1)
    if name == "y^2":
        return one.y(1, 2)
    if name == "x*y":
        return one.x(1) * one.y(1)
    if name == "y^3":
        return one.y(1, 3)
    two = AlgebraContext(p, 2)
    if name == "U2":
        return U(two, 2)
    if name == "V2":
        return V(two, 2)
    raise ValueError("unknown element name %r" % name)


def assemble_from_milnor(n: int, a: Element) -> Element:
    """Rebuild the n-block power-map image of ``a`` from its extracted
    Milnor operation values — the round trip behind the extraction."""
    ctx = a.ctx
    p, q = ctx.p, a.degree()
    big = AlgebraContext(p, ctx.m + n, block=ctx.block + n)
    shift = {i: i + n for i in range(1, ctx.m + 1)}
    scale0 = mu_mod(q, p, n)
    out = big.zero()
    for S, R in admissible_indices(q, n):
        st = milnor_st(S, R, a, n)
        if st.is_zero():
            continue
        stats = seq_stats(S, R, q, p)
        c = scale0 if stats.sign_exp % 2 == 0 else (p - scale0) % p
        head = embed(basis_element(p, n, S, (stats.r0,) + R[: n - 1]), big)
        out = out + head * relabel(st, big, shift).scalar_mul(c)
    return out


def _cell_milnor_vs_power(p: int, name: str, r: int) -> dict:
    a = _named_element(p, name)
    return _eq_row(milnor_st((), (r,), a, 1), p_power(r, a))


def _cell_milnor_inadmissible(p: int, name: str) -> dict:
    a = _named_element(p, name)
    r = a.degree() // 2 + 1
    try:
        milnor_st((), (r,), a, 1)
    except ValueError:
        return {"status": "PASS", "reason": "r=%d rejected as inadmissible" % r}
    return {"status": "FAIL", "reason": "r=%d beyond the excess bound was accepted" % r}


def _cell_reassemble(p: int, name: str, n: int) -> dict:
    a = _named_element(p, name)
    return _eq_row(assemble_from_milnor(n, a), d_star_p(n, a))


def _cell_compose(p: int, name: str, s: int, n: int) -> dict:
    a = _named_element(p, name)
    if compose_check(s, n, a):
        return {"status": "PASS"}
    return {"status": "FAIL", "reason": "staged power map disagrees at s=%d n=%d" % (s, n)}


def _steenrod_tasks(p_values, max_n):
    tasks = []
    for p in p_values:
        for name in _NAMED:
            a = _named_element(p, name)
            q = a.degree()
            for r in range(q // 2 + 1):
                tasks.append(_task("steenrod", "milnor-power/p%d/%s/r%d" % (p, name, r),
                                   "milnor_vs_power", (p, name, r),
                                   _mc(a.ctx.m + 1, q * p // 2 + 1)))
            tasks.append(_task("steenrod", "milnor-inadmissible/p%d/%s" % (p, name),
                               "milnor_inadmissible", (p, name), 10))
            for n in range(1, min(max_n, 2) + 1):
                tasks.append(_task("steenrod", "reassemble/p%d/%s/n%d" % (p, name, n),
                                   "reassemble", (p, name, n),
                                   2 * _mc(a.ctx.m + n, q * p**n // 2 + 1)))
            tasks.append(_task("steenrod", "compose/p%d/%s/s1n2" % (p, name),
                               "compose", (p, name, 1, 2),
                               2 * _mc(a.ctx.m + 2, q * p**2 // 2 + 1)))
    return tasks


# ------------------------------------------------------------ closed forms


def _cell_power_family(p: int, family: str, r: int, i1: int, i2: int) -> dict:
    if family == "U":
        ctx = AlgebraContext(p, i1 + 1)
        target, res = U(ctx, i1 + 1), cf.power_on_u(r, i1, ctx)
    elif family == "V":
        ctx = AlgebraContext(p, i1 + 1)
        target, res = V(ctx, i1 + 1), cf.power_on_v(r, i1, ctx)
    elif family == "M":
        ctx = AlgebraContext(p, i1)
        target, res = Mtilde(ctx, i1, i2), cf.power_on_mtilde(r, i1, i2, ctx)
    else:
        ctx = AlgebraContext(p, i1)
        target, res = Q(ctx, i1, i2), cf.power_on_q(r, i1, i2, ctx)
    row = _eq_row(res.value, p_power(r, target))
    if row["status"] == "PASS" and not res.applicable:
        row["reason"] = "zero branch: %s" % res.condition
    return row


def _cell_bracket(p: int, u: int, v: int) -> dict:
    ctx = AlgebraContext(p, 2)
    (l1, r1), (l2, r2) = cf.bracket_identities(u, v, ctx)
    if l1 == r1 and l2 == r2:
        return {"status": "PASS"}
    bad = "first" if l1 != r1 else "second"
    lhs, rhs = (l1, r1) if l1 != r1 else (l2, r2)
    return {"status": "FAIL", "reason": "%s identity" % bad,
            "lhs": render_text(lhs), "rhs": render_text(rhs)}


def _cell_rank1(p: int, S: tuple, R: tuple, eps: int, b: int) -> dict:
    ctx = AlgebraContext(p, 1)
    a = ctx.monomial((1,) if eps else (), (b,))
    return _eq_row(cf.st_on_rank1(S, R, eps, b, ctx), milnor_st(S, R, a, len(R)))


def _cell_u2(p: int, S: tuple, R: tuple) -> dict:
    ctx = AlgebraContext(p, 2)
    return _eq_row(cf.st_on_u2(S, R, ctx), milnor_st(S, R, U(ctx, 2), len(R)))


def _cell_v2(p: int, R: tuple) -> dict:
    ctx = AlgebraContext(p, 2)
    return _eq_row(cf.st_on_v2(R, ctx), milnor_st((), R, V(ctx, 2), len(R)))


def _cell_flag_mtilde(p: int, max_n: int) -> dict:
    diff = 0
    first = None
    for n in range(1, max_n + 1):
        ctx = AlgebraContext(p, n)
        for s in range(-1, n):
            top = dimension("Mtilde", p, n, s) // 2 + 3
            for r in range(top + 1):
                a = cf.power_on_mtilde(r, n, s, ctx, resolved=True)
                b = cf.power_on_mtilde(r, n, s, ctx, resolved=False)
                if a.value != b.value:
                    diff += 1
                    if first is None:
                        first = (n, s, r)
                        if a.value != p_power(r, Mtilde(ctx, n, s)):
                            return {"status": "FAIL",
                                    "reason": "resolved branch misses oracle at %s" % (first,)}
    return {"status": "PASS",
            "reason": "upper exterior terms frozen to resolved=True; literal display "
                      "deviates at %d cells, first at (n,s,r)=%s" % (diff, first)}


def _cell_flag_u2(p: int) -> dict:
    ctx = AlgebraContext(p, 2)
    diff = 0
    first = None
    for n in (1, 2):
        for R in itertools.product(range(p + 1), repeat=n):
            for u in range(n):
                if p - 1 - 2 * sum(R) < 0:
                    continue
                a = cf.st_on_u2((u,), R, ctx, resolved=True)
                b = cf.st_on_u2((u,), R, ctx, resolved=False)
                if a != b:
                    diff += 1
                    if first is None:
                        first = ((u,), R)
                        if a != milnor_st((u,), R, U(ctx, 2), n):
                            return {"status": "FAIL",
                                    "reason": "resolved case misses extraction at %s" % (first,)}
    return {"status": "PASS",
            "reason": "lower-index terms frozen to resolved=True; literal display "
                      "deviates at %d cells, first at (S,R)=%s" % (diff, first)}


def _cell_flag_v2(p: int) -> dict:
    ctx = AlgebraContext(p, 2)
    first = None
    for n in (1, 2):
        for R in itertools.product(range(p + 1), repeat=n):
            if 2 * p - 2 * sum(R) < 0:
                continue
            a = cf.st_on_v2(R, ctx, resolved=True)
            b = cf.st_on_v2(R, ctx, resolved=False)
            if a != b:
                first = R
                if a != milnor_st((), R, V(ctx, 2), n):
                    return {"status": "FAIL",
                            "reason": "frozen sign misses extraction at R=%s" % (first,)}
                break
        if first:
            break
    return {"status": "PASS",
            "reason": "mixed-case sign frozen to %d; opposite sign first disagrees "
                      "with the extraction at R=%s" % (cf.V2_MIXED_CASE_RESOLVED_SIGN, first)}


def _closed_form_tasks(p_values, max_n):
    tasks = []
    for p in p_values:
        lim = min(max_n, 2 if p == 3 else 1)
        for k in range(0, lim + 1):
            est = _mc(k + 1, p**k * p)
            for r in range(p**k // 2 + 4):
                tasks.append(_task("closed-forms", "power/U/p%d/k%d/r%d" % (p, k, r),
                                   "power_family", (p, "U", r, k, 0), est))
            for r in range(p**k + 4):
                tasks.append(_task("closed-forms", "power/V/p%d/k%d/r%d" % (p, k, r),
                                   "power_family", (p, "V", r, k, 0), est))
        for n in range(1, lim + 1):
            est = _mc(n, p**n * p)
            for s in range(-1, n):
                top = dimension("Mtilde", p, n, s) // 2 + 3
                for r in range(top + 1):
                    tasks.append(_task("closed-forms", "power/M/p%d/n%d/s%d/r%d" % (p, n, s, r),
                                       "power_family", (p, "M", r, n, s), est))
            for s in range(n + 1):
                top = dimension("Q", p, n, s) // 2 + 3
                for r in range(top + 1):
                    tasks.append(_task("closed-forms", "power/Q/p%d/n%d/s%d/r%d" % (p, n, s, r),
                                       "power_family", (p, "Q", r, n, s), est))
        vmax = 2 if p == 3 else 1
        for u in range(vmax + 1):
            for v in range(u, vmax + 1):
                tasks.append(_task("closed-forms", "bracket/p%d/u%dv%d" % (p, u, v),
                                   "bracket", (p, u, v), _mc(2, p**v)))
        for ln in (1, 2):
            for R in itertools.product(range(p), repeat=ln):
                for S in _subsets(ln):
                    for eps in (0, 1):
                        for b in range(5):
                            if eps + 2 * b - len(S) - 2 * sum(R) < 0:
                                continue
                            tasks.append(_task(
                                "closed-forms",
                                "rank1/p%d/S(%s)/R(%s)/e%d/b%d" % (p, _fmt(S), _fmt(R), eps, b),
                                "rank1", (p, S, R, eps, b), _mc(2, b * p**ln)))
        if p == 3:
            for ln in (1, 2):
                for R in itertools.product(range(p + 1), repeat=ln):
                    for S in list(_subsets(ln)):
                        if p - len(S) - 2 * sum(R) < 0:
                            continue
                        tasks.append(_task(
                            "closed-forms", "u2/p%d/S(%s)/R(%s)" % (p, _fmt(S), _fmt(R)),
                            "u2", (p, S, R), _mc(ln + 2, p**ln * p)))
                    if 2 * p - 2 * sum(R) >= 0:
                        tasks.append(_task("closed-forms", "v2/p%d/R(%s)" % (p, _fmt(R)),
                                           "v2", (p, R), _mc(ln + 2, p**ln * p)))
        tasks.append(_task("closed-forms", "flag/mtilde/p%d" % p, "flag_mtilde",
                           (p, lim), _mc(lim, p**lim * p) * 4))
    tasks.append(_task("closed-forms", "flag/u2/p3", "flag_u2", (3,), 40_000))
    tasks.append(_task("closed-forms", "flag/v2/p3", "flag_v2", (3,), 40_000))
    return tasks


# ---------------------------------------------------------------- duality

DUALITY_SHAPES = ((1, 1), (1, 2), (2, 1))


def _block_pairing(p: int, n: int, k: int, delta: int, Sp: tuple, Rp: tuple,
                   degmax: int) -> list[dict]:
    rows = []
    base = "pairing/p%d/n%dk%d/d%d/Sp(%s)/Rp(%s)" % (p, n, k, delta, _fmt(Sp), _fmt(Rp))
    for S in _subsets(k):
        for R in itertools.product(range(p**n + 2), repeat=k):
            if 2 * sum(R) + len(S) > (2 - delta) * p**n + 4:
                continue
            if st_operation_degree(S, R, p) > degmax:
                continue
            for e in (0, 1):
                for j in range(p**n + 2):
                    if e + 2 * j > (2 - delta) * p**n + 2:
                        continue
                    rep = duality.duality_case(p, n, k, delta, S, R, Sp, Rp, e, j)
                    row = {
                        "cell": "%s/S(%s)/R(%s)/e%d/j%d" % (base, _fmt(S), _fmt(R), e, j),
                        "status": rep["status"],
                        "params": {"p": p, "n": n, "k": k, "delta": delta,
                                   "S": list(S), "R": list(R), "Sp": list(Sp),
                                   "Rp": list(Rp), "e": e, "j": j, "s": rep["s"]},
                    }
                    if rep["reason"]:
                        row["reason"] = rep["reason"]
                    if rep["status"] == "FAIL":
                        row["lhs"], row["rhs"] = str(rep["lhs"]), str(rep["rhs"])
                    rows.append(row)
    return rows


def _cell_mq_expand(p: int, n: int, k: int, delta: int, s: int, S: tuple, R: tuple) -> dict:
    ctxn = AlgebraContext(p, n)
    target = Mtilde(ctxn, n, s) if delta else Q(ctxn, n, s)
    got = duality.expand_mq(p, n, k, delta, s, S, R)
    return _eq_row(got, milnor_st(S, R, target, k))


def _cell_uv_expand(p: int, n: int, k: int, delta: int, Sp: tuple, Rp: tuple) -> dict:
    big = AlgebraContext(p, k + 1)
    uv = U(big, k + 1) if delta else V(big, k + 1)
    got = duality.expand_uv(p, n, k, delta, Sp, Rp)
    return _eq_row(got, milnor_st(Sp, Rp, uv, n))


def _cell_mq_single(p: int, n: int, k: int, delta: int, s: int, r: int) -> dict:
    ctxn = AlgebraContext(p, n)
    R = (r,) + (0,) * (k - 1)
    got = duality.expand_mq(p, n, k, delta, s, (), R)
    res = (cf.power_on_mtilde(r, n, s, ctxn) if delta
           else cf.power_on_q(r, n, s, ctxn))
    return _eq_row(got, res.value)


def _cell_uv_single(p: int, n: int, k: int, delta: int, r: int) -> dict:
    big = AlgebraContext(p, k + 1)
    Rp = (r,) + (0,) * (n - 1)
    got = duality.expand_uv(p, n, k, delta, (), Rp)
    res = cf.power_on_u(r, k, big) if delta else cf.power_on_v(r, k, big)
    return _eq_row(got, res.value)


def _duality_tasks(p_values, grid):
    degmax = 40 if grid == "full" else 24
    tasks = []
    for p in p_values:
        shapes = DUALITY_SHAPES if p == 3 else ((1, 1),)
        dm = degmax if p == 3 else min(degmax, 24)
        for n, k in shapes:
            for delta in (0, 1):
                est = (_mc(n + k + 1, (2 - delta) * p**k * p**n // 2)
                       + 4 * _mc(k + 1, dm // 2))
                q_uv = (2 - delta) * p**k
                for Sp in _subsets(n):
                    for Rp in itertools.product(range(p**k + 2), repeat=n):
                        if st_operation_degree(Sp, Rp, p) + q_uv > dm:
                            continue
                        tasks.append(_task(
                            "duality",
                            "pairing/p%d/n%dk%d/d%d/Sp(%s)/Rp(%s)" % (
                                p, n, k, delta, _fmt(Sp), _fmt(Rp)),
                            "block_pairing", (p, n, k, delta, Sp, Rp, dm), est))
                        r0p = q_uv - len(Sp) - 2 * sum(Rp)
                        if r0p >= 0:
                            tasks.append(_task(
                                "duality",
                                "uv/p%d/n%dk%d/d%d/Sp(%s)/Rp(%s)" % (
                                    p, n, k, delta, _fmt(Sp), _fmt(Rp)),
                                "uv", (p, n, k, delta, Sp, Rp), est))
                ctxn = AlgebraContext(p, n)
                for s in range(-delta, n - delta + 1):
                    target = Mtilde(ctxn, n, s) if delta else Q(ctxn, n, s)
                    q = target.degree()
                    for S, R in admissible_indices(q, k):
                        if st_operation_degree(S, R, p) + q > dm:
                            continue
                        tasks.append(_task(
                            "duality",
                            "mq/p%d/n%dk%d/d%d/s%d/S(%s)/R(%s)" % (
                                p, n, k, delta, s, _fmt(S), _fmt(R)),
                            "mq", (p, n, k, delta, s, S, R), est))
                    for r in range(q // 2 + 1):
                        tasks.append(_task(
                            "duality",
                            "mqsingle/p%d/n%dk%d/d%d/s%d/r%d" % (p, n, k, delta, s, r),
                            "mq_single", (p, n, k, delta, s, r), est))
                for r in range(q_uv // 2 + 1):
                    tasks.append(_task(
                        "duality", "uvsingle/p%d/n%dk%d/d%d/r%d" % (p, n, k, delta, r),
                        "uv_single", (p, n, k, delta, r), est))
    return tasks


# -------------------------------------------------------------- properties


def _rand_monomial(rng: random.Random, ctx: AlgebraContext, max_e: int = 5) -> Element:
    xs = tuple(sorted(rng.sample(range(1, ctx.m + 1), rng.randint(0, min(ctx.m, 2)))))
    ys = tuple(rng.randint(0, max_e) for _ in range(ctx.m))
    return ctx.monomial(xs, ys, rng.randint(1, ctx.p - 1))


def _rand_element(rng: random.Random, ctx: AlgebraContext, terms: int = 2,
                  max_e: int = 5) -> Element:
    a = ctx.zero()
    for _ in range(rng.randint(1, terms)):
        a = a + _rand_monomial(rng, ctx, max_e)
    return a


def _cell_property(p: int, family: str, seed: int, cases: int) -> dict:
    rng = random.Random(seed)
    ctx = AlgebraContext(p, 2)
    for i in range(cases):
        if family == "commutativity":
            a, b = _rand_monomial(rng, ctx), _rand_monomial(rng, ctx)
            ba = b * a
            if a.degree() * b.degree() % 2:
                ba = ba.scalar_mul(p - 1)
            if a * b != ba:
                return {"status": "FAIL", "reason": "case %d: %s vs %s" % (
                    i, render_text(a), render_text(b))}
        elif family == "cartan":
            a, b = _rand_element(rng, ctx, 2, 3), _rand_element(rng, ctx, 2, 3)
            rmax = 2
            ta, tb = total_power(a, rmax), total_power(b, rmax)
            tab = total_power(a * b, rmax)
            for r in range(rmax + 1):
                want = ctx.zero()
                for u in range(r + 1):
                    want = want + ta[u] * tb[r - u]
                if tab[r] != want:
                    return {"status": "FAIL", "reason": "case %d r=%d: %s | %s" % (
                        i, r, render_text(a), render_text(b))}
            am = _rand_monomial(rng, ctx)
            prod_rule = bockstein(am) * b + am.scalar_mul(
                p - 1 if am.degree() % 2 else 1) * bockstein(b)
            if bockstein(am * b) != prod_rule:
                return {"status": "FAIL", "reason": "case %d: bockstein derivation" % i}
        elif family == "bockstein":
            a = _rand_element(rng, ctx, 3)
            if not bockstein(bockstein(a)).is_zero():
                return {"status": "FAIL", "reason": "case %d: %s" % (i, render_text(a))}
        elif family == "instability":
            a = _rand_monomial(rng, ctx)
            d = a.degree()
            if d % 2 == 0:
                # exterior factors square to zero, so the p-th power does too
                frob = ctx.zero() if next(iter(a))[0].xs else a**p
                if p_power(d // 2, a) != frob:
                    return {"status": "FAIL", "reason": "case %d: top power of %s" % (
                        i, render_text(a))}
            if not p_power(d // 2 + 1 + rng.randint(0, 2), a).is_zero():
                return {"status": "FAIL", "reason": "case %d: excess of %s" % (
                    i, render_text(a))}
        elif family == "degree":
            a = _rand_monomial(rng, ctx)
            r = rng.randint(0, 3)
            b = p_power(r, a)
            if not b.is_zero() and b.degree() != a.degree() + 2 * r * (p - 1):
                return {"status": "FAIL", "reason": "case %d: P^%d degree" % (i, r)}
            bb = bockstein(a)
            if not bb.is_zero() and bb.degree() != a.degree() + 1:
                return {"status": "FAIL", "reason": "case %d: bockstein degree" % i}
        elif family == "roundtrip":
            a = _rand_element(rng, ctx, 3)
            if parse_text(render_text(a), ctx) != a:
                return {"status": "FAIL", "reason": "case %d: text %s" % (
                    i, render_text(a))}
            if from_json(to_json(a), ctx) != a:
                return {"status": "FAIL", "reason": "case %d: json" % i}
            if not isinstance(render_latex(a), str):
                return {"status": "FAIL", "reason": "case %d: latex render" % i}
        else:
            return {"status": "FAIL", "reason": "unknown family %r" % family}
    return {"status": "PASS", "reason": "%d cases" % cases}


_PROPERTY_FAMILIES = ("commutativity", "cartan", "bockstein",
                      "instability", "degree", "roundtrip")


def _core_tasks(p_values, seed, cases):
    tasks = []
    batches = 5
    per = max(1, cases // batches)
    for p in p_values:
        for fi, family in enumerate(_PROPERTY_FAMILIES):
            for b in range(batches):
                cell_seed = seed * 1_000_003 + fi * 10_007 + b * 101 + p
                tasks.append(_task("core", "%s/p%d/b%d" % (family, p, b),
                                   "property", (p, family, cell_seed, per),
                                   per * 40))
    return tasks


# ------------------------------------------------------------- scheduling

_CELL_FNS = {
    "q_recursion": _cell_q_recursion,
    "v_product": _cell_v_product,
    "q_base": _cell_q_base,
    "q_top": _cell_q_top,
    "gl_invariance": _cell_gl_invariance,
    "sl_invariance": _cell_sl_invariance,
    "flag_invariance": _cell_flag_invariance,
    "milnor_vs_power": _cell_milnor_vs_power,
    "milnor_inadmissible": _cell_milnor_inadmissible,
    "reassemble": _cell_reassemble,
    "compose": _cell_compose,
    "power_family": _cell_power_family,
    "bracket": _cell_bracket,
    "rank1": _cell_rank1,
    "u2": _cell_u2,
    "v2": _cell_v2,
    "flag_mtilde": _cell_flag_mtilde,
    "flag_u2": _cell_flag_u2,
    "flag_v2": _cell_flag_v2,
    "block_pairing": _block_pairing,
    "mq": _cell_mq_expand,
    "uv": _cell_uv_expand,
    "mq_single": _cell_mq_single,
    "uv_single": _cell_uv_single,
    "property": _cell_property,
}


def _task(suite: str, cell: str, fn: str, args: tuple, est: int) -> dict:
    return {"suite": suite, "cell": cell, "fn": fn, "args": args, "est": int(est)}


def _execute(task: dict) -> list[dict]:
    fn = _CELL_FNS[task["fn"]]
    t0 = time.perf_counter()
    try:
        out = fn(*task["args"])
    except Exception as exc:  # a crashing cell is a failing cell
        out = {"status": "FAIL", "reason": "%s: %s" % (type(exc).__name__, exc)}
    dt = round(time.perf_counter() - t0, 4)
    rows = out if isinstance(out, list) else [out]
    final = []
    for r in rows:
        row = {"suite": task["suite"], "cell": r.pop("cell", task["cell"])}
        row.update(r)
        final.append(row)
    if len(final) == 1:
        final[0]["seconds"] = dt
    return final


def _worker_count(workers: "int | None") -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get(WORKERS_ENV, "")
    if env.strip():
        return max(1, int(env))
    return 1


def _run_tasks(tasks: list[dict], workers: int, budget: int) -> list[dict]:
    runnable = []
    for t in tasks:
        t["skip"] = t["est"] > budget
        if not t["skip"]:
            runnable.append(t)
    if workers > 1 and len(runnable) > 1:
        try:
            import multiprocessing as mp

            chunk = max(1, len(runnable) // (workers * 8))
            with ProcessPoolExecutor(
                max_workers=workers, mp_context=mp.get_context("fork")
            ) as pool:
                results = list(pool.map(_execute, runnable, chunksize=chunk))
        except (OSError, ValueError):
            results = [_execute(t) for t in runnable]
    else:
        results = [_execute(t) for t in runnable]
    it = iter(results)
    rows: list[dict] = []
    for t in tasks:
        if t["skip"]:
            rows.append({"suite": t["suite"], "cell": t["cell"], "status": "SKIP",
                         "reason": "budget: ~%d raw monomials > %d" % (t["est"], budget)})
        else:
            rows.extend(next(it))
    return rows


def run_suite(
    name: str,
    *,
    p_values: "Sequence[int] | None" = None,
    max_n: "int | None" = None,
    grid: str = "full",
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    workers: "int | None" = None,
    cases: int = PROPERTY_CASES,
) -> dict:
    """Run one verification suite (or ``all``) and return the report dict."""
    if name == "all":
        names = SUITE_NAMES
    elif name in SUITE_NAMES:
        names = (name,)
    else:
        raise ValueError("unknown suite %r (choose from %s or 'all')"
                         % (name, ", ".join(SUITE_NAMES)))
    if grid not in ("small", "full"):
        raise ValueError("grid must be 'small' or 'full'")
    tasks: list[dict] = []
    for nm in names:
        if nm == "invariants":
            tasks += _invariant_tasks(p_values or (3, 5), max_n or 3)
        elif nm == "steenrod":
            tasks += _steenrod_tasks(p_values or (3,), max_n or 2)
        elif nm == "closed-forms":
            tasks += _closed_form_tasks(p_values or (3, 5), max_n or 2)
        elif nm == "duality":
            tasks += _duality_tasks(p_values or (3,), grid)
        else:
            tasks += _core_tasks(p_values or (3,), seed, cases)
    w = _worker_count(workers)
    t0 = time.perf_counter()
    rows = _run_tasks(tasks, w, budget)
    counts = Counter(r["status"] for r in rows)
    return {
        "tool": "dicksonmui",
        "suite": name,
        "p_values": list(p_values) if p_values else None,
        "max_n": max_n,
        "grid": grid,
        "seed": seed,
        "budget": budget,
        "workers": w,
        "counts": {"pass": counts.get("PASS", 0), "fail": counts.get("FAIL", 0),
                   "skip": counts.get("SKIP", 0)},
        "seconds": round(time.perf_counter() - t0, 3),
        "cells": rows,
    }
