"""Adjointness checks pairing Steenrod actions on the two invariant families.

A Milnor operation applied to an n-pair invariant (Mtilde_{n,s} or
Q_{n,s}) pairs against dual basis functionals of the (k+1)-pair family
(U_{k+1}, V_{k+1}), and vice versa, up to an explicit sign and an index
bookkeeping rule: the left pairing can only be nonzero when e + 2j hits
-[-2p^s] for some s in -delta..n-delta.  This module evaluates both
pairings exactly over Z/p and compares them cell by cell; the expansion
helpers rebuild one side's operation values entirely from pairings
computed on the other side.

Dual functionals are coefficient extractions: m̃_S q̃_H reads off the
(S, H) coordinate in the invariant monomial basis, and the mixed
functional m̃_S q̃_H ⊗ u^e γ_j(v) reads the (S, H, e, j) coordinate in
the basis {Mtilde_S Qtilde^H U_{k+1}^e V_{k+1}^j} of the (k+1)-pair
algebra.  An index with a negative entry names no basis monomial, so its
functional annihilates everything.
"""

from __future__ import annotations

from typing import Sequence

from .algebra import AlgebraContext, Element, embed
from .arith import seq_stats, solve_exact
from .invariants import Q, U, V, Mtilde
from .steenrod import (
    NotInSpanError,
    _candidates,
    admissible_indices,
    basis_element,
    invariant_decompose,
    milnor_st,
)


def dim_bracket(p: int, s: int) -> int:
    """[-2p^s], extended by the convention -1 at s = -1."""
    if s < -1:
        raise ValueError("s must be >= -1")
    return -1 if s == -1 else -2 * p**s


# ---------------------------------------------------------------- pairings

_mixed_candidate_cache: dict[tuple, list] = {}


def _mixed_candidates(p: int, k: int, d: int, xcount: int) -> list:
    """Degree-d keys (S, H, eps, m) with len(S) + eps = xcount, paired with
    the raw term maps of Mtilde_S Qtilde^H U_{k+1}^eps V_{k+1}^m."""
    ck = (p, k, d, xcount)
    got = _mixed_candidate_cache.get(ck)
    if got is None:
        big = AlgebraContext(p, k + 1)
        got = []
        for eps in (0, 1):
            if eps > xcount:
                continue
            m = 0
            while True:
                rem = d - (eps + 2 * m) * p**k
                if rem < 0:
                    break
                for (S, H), _terms in _candidates(p, k, rem, xcount - eps):
                    elt = embed(basis_element(p, k, S, H), big)
                    if eps:
                        elt = elt * U(big, k + 1)
                    if m:
                        elt = elt * V(big, k + 1) ** m
                    got.append(((S, H, eps, m), elt.terms))
                m += 1
        _mixed_candidate_cache[ck] = got
    return got


_mixed_cache: dict[tuple[int, Element], dict] = {}


def mixed_decompose(a: Element, k: int) -> dict[tuple, int]:
    """Coordinates of a in {Mtilde_S Qtilde^H U_{k+1}^eps V_{k+1}^m}.

    a must be homogeneous over k+1 pairs and lie in the span (raises
    NotInSpanError otherwise).  Zero coordinates are omitted.
    """
    got = _mixed_cache.get((k, a))
    if got is not None:
        return got
    if a.is_zero():
        _mixed_cache[(k, a)] = {}
        return {}
    if a.ctx.m != k + 1:
        raise ValueError("element must live over k+1 generator pairs")
    if not a.is_homogeneous():
        raise ValueError("mixed decomposition needs a homogeneous element")
    p, d = a.ctx.p, a.degree()
    by_xcount: dict[int, dict] = {}
    for mono, c in a.terms.items():
        by_xcount.setdefault(len(mono.xs), {})[mono] = c
    out: dict[tuple, int] = {}
    for xc, target in by_xcount.items():
        cands = _mixed_candidates(p, k, d, xc)
        sol = solve_exact([terms for _, terms in cands], target, p)
        if sol is None:
            raise NotInSpanError("element is not in the mixed invariant span")
        for (key, _), cf in zip(cands, sol):
            if cf:
                out[key] = cf
    _mixed_cache[(k, a)] = out
    return out


def mixed_pairing(
    img: Element, k: int, S: Sequence[int], H: Sequence[int], eps: int, m: int
) -> int:
    """<m̃_S q̃_H ⊗ u^eps γ_m(v), img> over k+1 pairs."""
    if any(h < 0 for h in H) or m < 0:
        return 0
    return mixed_decompose(img, k).get((tuple(S), tuple(H), eps, m), 0)


_invariant_cache: dict[tuple[int, Element], object] = {}


def invariant_pairing(img: Element, n: int, S: Sequence[int], H: Sequence[int]) -> int:
    """<m̃_S q̃_H, img> for an n-pair invariant element img."""
    if any(h < 0 for h in H):
        return 0
    exp = _invariant_cache.get((n, img))
    if exp is None:
        exp = invariant_decompose(img, n)
        _invariant_cache[(n, img)] = exp
    return exp.scalar(tuple(S), tuple(H))


def pairing_sign_exp(
    p: int,
    n: int,
    k: int,
    delta: int,
    s: int,
    S: Sequence[int],
    R: Sequence[int],
    Sp: Sequence[int],
    Rp: Sequence[int],
) -> int:
    """Parity of the sign relating the two pairings (0 or 1)."""
    t, tp = len(S), len(Sp)
    h = (p - 1) // 2
    total = (
        seq_stats(S, R, 0, p).sign_exp
        + seq_stats(Sp, Rp, 0, p).sign_exp
        + s
        + delta
        + (t + dim_bracket(p, s)) * tp
        + n * h * k * delta
    )
    return total % 2


# ----------------------------------------------------------- duality cells


def _check_exterior(S: tuple, bound: int) -> None:
    if any(not 0 <= v < bound for v in S) or list(S) != sorted(set(S)):
        raise ValueError("exterior index must be strictly increasing in 0..%d" % (bound - 1))


def _matched_s(p: int, n: int, delta: int, e: int, j: int) -> "int | None":
    """The unique s in -delta..n-delta with e + 2j = -[-2p^s], if any."""
    for s in range(-delta, n - delta + 1):
        if e + 2 * j == -dim_bracket(p, s):
            return s
    return None


def duality_case(
    p: int,
    n: int,
    k: int,
    delta: int,
    S: Sequence[int],
    R: Sequence[int],
    Sp: Sequence[int],
    Rp: Sequence[int],
    e: int,
    j: int,
) -> dict:
    """Evaluate one duality cell; returns a report dict.

    status PASS means the two pairings agreed (or the left one vanished
    on a cell with no matching s); FAIL is a genuine inequality; SKIP
    marks cells where one side's operation is inadmissible, which forces
    the other side's dual index out of existence as well.
    """
    S, R, Sp, Rp = tuple(S), tuple(R), tuple(Sp), tuple(Rp)
    if len(R) != k or len(Rp) != n:
        raise ValueError("need len(R) = k and len(Rp) = n")
    if delta not in (0, 1) or e not in (0, 1) or j < 0:
        raise ValueError("delta, e must be 0/1 and j >= 0")
    _check_exterior(S, k)
    _check_exterior(Sp, n)
    rep = {
        "p": p, "n": n, "k": k, "delta": delta,
        "S": S, "R": R, "Sp": Sp, "Rp": Rp, "e": e, "j": j,
        "s": None, "status": "SKIP", "reason": "", "lhs": None, "rhs": None,
    }
    t, tp = len(S), len(Sp)
    r0p = (2 - delta) * p**k - tp - 2 * sum(Rp)
    if r0p < 0:
        rep["reason"] = "operation inadmissible on U/V; right dual index nonexistent"
        return rep
    big = AlgebraContext(p, k + 1)
    uv = U(big, k + 1) if delta else V(big, k + 1)
    img = milnor_st(Sp, Rp, uv, n)
    H = ((2 - delta) * p**n - e - 2 * j - t - 2 * sum(R),) + R[: k - 1]
    s = _matched_s(p, n, delta, e, j)
    rep["s"] = s
    if s is None:
        lhs = mixed_pairing(img, k, S, H, e, j)
        rep["lhs"], rep["rhs"] = lhs, 0
        rep["status"] = "PASS" if lhs == 0 else "FAIL"
        rep["reason"] = "no matching s; left pairing must vanish"
        return rep
    if H[0] < 0:
        # equivalently: St^{S,R} inadmissible on the matched M/Q target
        rep["reason"] = "operation inadmissible on M/Q; left dual index nonexistent"
        return rep
    ctxn = AlgebraContext(p, n)
    target = Mtilde(ctxn, n, s) if delta else Q(ctxn, n, s)
    lhs = mixed_pairing(img, k, S, H, e, j)
    rimg = milnor_st(S, R, target, k)
    rhs = invariant_pairing(rimg, n, Sp, (r0p,) + Rp[: n - 1])
    if pairing_sign_exp(p, n, k, delta, s, S, R, Sp, Rp):
        rhs = (p - rhs) % p
    rep["lhs"], rep["rhs"] = lhs, rhs
    rep["status"] = "PASS" if lhs == rhs else "FAIL"
    return rep


# ------------------------------------------------------------- expansions


def expand_mq(
    p: int, n: int, k: int, delta: int, s: int, S: Sequence[int], R: Sequence[int]
) -> Element:
    """St^{S,R}(Mtilde_{n,s} if delta else Q_{n,s}) rebuilt over n pairs,
    with every coefficient computed as a pairing on the U/V side.

    len(R) = k.  The operation must be admissible on the target (its
    degree-r0 entry nonnegative); otherwise ValueError.
    """
    S, R = tuple(S), tuple(R)
    if len(R) != k:
        raise ValueError("need len(R) = k")
    _check_exterior(S, k)
    lo = -delta
    if not lo <= s <= n - delta:
        raise ValueError("s out of range")
    t = len(S)
    H = ((2 - delta) * p**n + dim_bracket(p, s) - t - 2 * sum(R),) + R[: k - 1]
    if H[0] < 0:
        raise ValueError("operation inadmissible on the M/Q target")
    e, j = (1, 0) if s == -1 else (0, p**s)
    big = AlgebraContext(p, k + 1)
    uv = U(big, k + 1) if delta else V(big, k + 1)
    ctxn = AlgebraContext(p, n)
    q_uv = (2 - delta) * p**k
    total = ctxn.zero()
    for Sp, Rp in admissible_indices(q_uv, n):
        img = milnor_st(Sp, Rp, uv, n)
        if img.is_zero():
            continue
        c = mixed_pairing(img, k, S, H, e, j)
        if not c:
            continue
        if pairing_sign_exp(p, n, k, delta, s, S, R, Sp, Rp):
            c = p - c
        r0p = q_uv - len(Sp) - 2 * sum(Rp)
        total = total + basis_element(p, n, Sp, (r0p,) + Rp[: n - 1]).scalar_mul(c)
    return total


def expand_uv(
    p: int, n: int, k: int, delta: int, Sp: Sequence[int], Rp: Sequence[int]
) -> Element:
    """St^{S',R'}(U_{k+1} if delta else V_{k+1}) rebuilt over k+1 pairs,
    with every coefficient computed as a pairing on the M/Q side.

    len(Rp) = n.  The s = -1 stratum contributes through U_{k+1} (the
    Frobenius ladder starts one rung below V_{k+1}).
    """
    Sp, Rp = tuple(Sp), tuple(Rp)
    if len(Rp) != n:
        raise ValueError("need len(Rp) = n")
    _check_exterior(Sp, n)
    q_uv = (2 - delta) * p**k
    r0p = q_uv - len(Sp) - 2 * sum(Rp)
    if r0p < 0:
        raise ValueError("operation inadmissible on the U/V target")
    Hp = (r0p,) + Rp[: n - 1]
    big = AlgebraContext(p, k + 1)
    ctxn = AlgebraContext(p, n)
    total = big.zero()
    for s in range(-delta, n - delta + 1):
        target = Mtilde(ctxn, n, s) if delta else Q(ctxn, n, s)
        q_mq = target.degree()
        tail = U(big, k + 1) if s == -1 else V(big, k + 1) ** (p**s)
        for S, R in admissible_indices(q_mq, k):
            rimg = milnor_st(S, R, target, k)
            if rimg.is_zero():
                continue
            c = invariant_pairing(rimg, n, Sp, Hp)
            if not c:
                continue
            if pairing_sign_exp(p, n, k, delta, s, S, R, Sp, Rp):
                c = p - c
            t = len(S)
            H = (q_mq - t - 2 * sum(R),) + R[: k - 1]
            total = total + (embed(basis_element(p, k, S, H), big) * tail).scalar_mul(c)
    return total
