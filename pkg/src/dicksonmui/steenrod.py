"""Steenrod operations on E(x) (x) P(y), realized two independent ways.

The oracle realization is generator rules plus the Cartan formula:
``bockstein`` is the derivation with beta x = y, and ``total_power`` /
``p_power`` build P^r from P^0 = id, P^1 y = y^p, P^r x = 0 (r >= 1) by
convolving per-factor power series.  Instability (P^r z = 0 for
2r > deg z) falls out of the rules instead of being special-cased.

The structural realization is the power map ``d_star_p``: degree-wise it
substitutes each generator by a determinantal invariant over an enlarged
variable set (x -> (-h!)^n U_{n+1}, y -> V_{n+1}), multiplicative up to
the sign (-1)^{nh qr}.  Decomposing its output over the invariant
monomial basis of the new block (``invariant_decompose``) and rescaling
cofactors yields the Milnor-basis operations ``milnor_st``; the identity
milnor_st(emptyset, (r), a) == p_power(r, a) ties the realizations
together and is checked heavily in the tests.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .algebra import (
    AlgebraContext,
    Element,
    Monomial,
    embed,
    relabel,
    split_monomial,
)
from .arith import binom_mod, inv_mod, mu_mod, seq_stats, solve_exact
from .invariants import U, V, Ltilde, Mtilde, Q


class NotInSpanError(ValueError):
    """The element does not lie in the span of the invariant basis."""


def bockstein(a: Element) -> Element:
    """The degree-1 derivation with beta x_i = y_i and beta y_i = 0."""
    ctx = a.ctx
    out: dict[Monomial, int] = {}
    for mono, c in a:
        for pos, i in enumerate(mono.xs):
            # passing beta over `pos` earlier odd factors costs (-1)^pos
            cc = (ctx.p - c) if pos % 2 else c
            xs = mono.xs[:pos] + mono.xs[pos + 1 :]
            ys = list(mono.ys)
            ys[i - 1] += 1
            key = Monomial(xs, tuple(ys))
            v = (out.get(key, 0) + cc) % ctx.p
            if v:
                out[key] = v
            elif key in out:
                del out[key]
    return Element._make(ctx, out)


def total_power(a: Element, r_max: int) -> list[Element]:
    """The list [P^0 a, P^1 a, ..., P^{r_max} a].

    Each monomial is expanded factor by factor: the series of x_i is just
    [x_i], and the series of y_i^e has j-th entry C(e, j) y_i^{e+(p-1)j}.
    The per-monomial series are convolved, which is the Cartan formula.
    """
    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    ctx = a.ctx
    p = ctx.p
    out: list[dict[Monomial, int]] = [{} for _ in range(r_max + 1)]
    zero_ys = ctx._empty_ys()
    for mono, coeff in a:
        series: list[dict[Monomial, int]] = [{Monomial(mono.xs, zero_ys): coeff}]
        for i, e in enumerate(mono.ys):
            if e == 0:
                continue
            factor = []
            for j in range(min(e, r_max) + 1):
                cj = binom_mod(e, j, p)
                if cj:
                    factor.append((j, cj, e + (p - 1) * j))
            nxt: list[dict[Monomial, int]] = [
                {} for _ in range(min(len(series) - 1 + min(e, r_max), r_max) + 1)
            ]
            for r1, layer in enumerate(series):
                if not layer:
                    continue
                for j, cj, exp in factor:
                    r = r1 + j
                    if r > r_max:
                        break
                    dest = nxt[r]
                    for mo, c in layer.items():
                        ys = list(mo.ys)
                        ys[i] = exp
                        key = Monomial(mo.xs, tuple(ys))
                        v = (dest.get(key, 0) + c * cj) % p
                        if v:
                            dest[key] = v
                        elif key in dest:
                            del dest[key]
            series = nxt
        for r, layer in enumerate(series):
            dest = out[r]
            for key, c in layer.items():
                v = (dest.get(key, 0) + c) % p
                if v:
                    dest[key] = v
                elif key in dest:
                    del dest[key]
    return [Element._make(ctx, layer) for layer in out]


def p_power(r: int, a: Element) -> Element:
    """P^r(a) through the Cartan-formula oracle."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return total_power(a, r)[r]


def _h_factorial(ctx: AlgebraContext) -> int:
    return math.factorial(ctx.h) % ctx.p


def d_star_p(n: int, a: Element) -> Element:
    """The power map with an n-pair block.

    The result lives over n + m pairs: a fresh block is prepended as
    indices 1..n, the argument's generators shift up by n, and each shifted
    generator is replaced by its invariant image formed over the block plus
    its own pair (x_j -> (-h!)^n U_{n+1}, y_j -> V_{n+1}).  The map is
    multiplicative only up to (-1)^{nh qr}, so each monomial with k
    exterior factors first absorbs the sign (-1)^{nh k(k-1)/2}.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return a
    ctx = a.ctx
    big = AlgebraContext(ctx.p, ctx.m + n, block=ctx.block + n)
    scal = pow(-_h_factorial(ctx), n, ctx.p)
    mini = AlgebraContext(ctx.p, n + 1)
    u_img = U(mini, n + 1)
    v_img = V(mini, n + 1)
    x_images = {}
    y_images = {}
    for j in range(1, ctx.m + 1):
        imap = {i: i for i in range(1, n + 1)}
        imap[n + 1] = n + j
        x_images[n + j] = relabel(u_img, big, imap).scalar_mul(scal)
        y_images[n + j] = relabel(v_img, big, imap)
    flip = (n * ctx.h) % 2 == 1
    adjusted: dict[Monomial, int] = {}
    for mono, c in a:
        k = len(mono.xs)
        if flip and (k * (k - 1) // 2) % 2:
            c = ctx.p - c
        adjusted[mono] = c
    shift = {i: i + n for i in range(1, ctx.m + 1)}
    moved = relabel(Element._make(ctx, adjusted), big, shift)
    return moved.substitute(x_images, y_images)


def compose_check(s: int, n: int, a: Element) -> bool:
    """Whether applying the power map in two stages (s, then n-s) matches
    the single n-block application."""
    if not 0 <= s <= n:
        raise ValueError("need 0 <= s <= n")
    return d_star_p(n, a) == d_star_p(n - s, d_star_p(s, a))


# --- invariant-basis bookkeeping -------------------------------------------

Key = tuple[tuple[int, ...], tuple[int, ...]]

_basis_cache: dict[tuple, Element] = {}


def basis_element(p: int, n: int, S: Sequence[int], H: Sequence[int]) -> Element:
    """The invariant monomial Mtilde_{n,s1}..Mtilde_{n,sk} * Ltilde_n^{h0}
    * Q_{n,1}^{h1} .. Q_{n,n-1}^{h_{n-1}} over n pairs."""
    S, H = tuple(S), tuple(H)
    if len(H) != n:
        raise ValueError("H must have exactly n entries")
    if any(h < 0 for h in H):
        raise ValueError("H entries must be >= 0")
    if list(S) != sorted(set(S)) or any(not 0 <= s < n for s in S):
        raise ValueError("S must be strictly increasing within 0..n-1")
    key = (p, n, S, H)
    el = _basis_cache.get(key)
    if el is None:
        c = AlgebraContext(p, n)
        el = c.one()
        for s in S:
            el = el * Mtilde(c, n, s)
        if n:
            el = el * Ltilde(c, n) ** H[0]
            for i in range(1, n):
                el = el * Q(c, n, i) ** H[i]
        _basis_cache[key] = el
    return el


_candidate_cache: dict[tuple, list[tuple[Key, dict[Monomial, int]]]] = {}


def _candidates(p: int, n: int, d: int, xcount: int):
    """All basis keys (S, H) of degree d with |S| = xcount, paired with
    their raw term maps over n pairs."""
    ck = (p, n, d, xcount)
    got = _candidate_cache.get(ck)
    if got is None:
        got = []
        weights = [p**n - 1] + [2 * (p**n - p**i) for i in range(1, n)]
        for S in itertools.combinations(range(n), xcount):
            rem = d - sum(p**n - 2 * p**s for s in S)
            if rem < 0 or rem % 2:
                continue
            for H in _weighted_sums(weights, rem):
                el = basis_element(p, n, S, H)
                got.append(((S, H), dict(el.terms)))
        _candidate_cache[ck] = got
    return got


def _weighted_sums(weights: list[int], total: int) -> Iterator[tuple[int, ...]]:
    """All exponent tuples e with sum e_i * weights[i] == total."""
    if not weights:
        if total == 0:
            yield ()
        return
    w = weights[0]
    for e in range(total // w + 1):
        for rest in _weighted_sums(weights[1:], total - e * w):
            yield (e,) + rest


@dataclass(frozen=True)
class InvariantExpansion:
    """An element of a block-carrying algebra written over the invariant
    monomial basis of its leading n pairs.

    entries maps (S, H) to the cofactor over the trailing pairs; a purely
    invariant element has constant cofactors.
    """

    ctx: AlgebraContext
    n: int
    tail_ctx: AlgebraContext
    entries: dict[Key, Element]

    def cofactor(self, S: Sequence[int], H: Sequence[int]) -> Element:
        return self.entries.get((tuple(S), tuple(H)), self.tail_ctx.zero())

    def scalar(self, S: Sequence[int], H: Sequence[int]) -> int:
        """Constant-cofactor lookup (for fully invariant elements)."""
        el = self.cofactor(S, H)
        if len(el) > 1 or (len(el) == 1 and next(iter(el))[0].degree() != 0):
            raise ValueError("cofactor at %s,%s is not a scalar" % (S, H))
        return el.constant_term()

    def reassemble(self) -> Element:
        """Multiply every key back out and sum; inverse of decomposition."""
        out = self.ctx.zero()
        shift = {i: i + self.n for i in range(1, self.tail_ctx.m + 1)}
        for (S, H), tail in self.entries.items():
            base = embed(basis_element(self.ctx.p, self.n, S, H), self.ctx)
            out = out + base * relabel(tail, self.ctx, shift)
        return out


def invariant_decompose(a: Element, n: int) -> InvariantExpansion:
    """Write ``a`` as a sum of (invariant basis monomial over the leading n
    pairs) * (element over the trailing pairs).

    Works one trailing monomial at a time: the leading-block cofactor is
    solved exactly against all basis monomials of matching degree and
    exterior length.  Raises NotInSpanError when a residual remains.
    """
    ctx = a.ctx
    if not 0 <= n <= ctx.m:
        raise ValueError("block size must lie in 0..m")
    tail_ctx = AlgebraContext(ctx.p, ctx.m - n, block=max(ctx.block - n, 0))
    if n == 0:
        entries = {} if a.is_zero() else {((), ()): Element._make(tail_ctx, dict(a.terms))}
        return InvariantExpansion(ctx, 0, tail_ctx, entries)
    groups: dict[Monomial, dict[Monomial, int]] = {}
    for mono, c in a:
        head, tail = split_monomial(mono, n)
        groups.setdefault(tail, {})[head] = c
    entries: dict[Key, dict[Monomial, int]] = {}
    for tail, block in groups.items():
        by_shape: dict[tuple[int, int], dict[Monomial, int]] = {}
        for bm, c in block.items():
            by_shape.setdefault((bm.degree(), len(bm.xs)), {})[bm] = c
        for (d, xc), target in by_shape.items():
            cands = _candidates(ctx.p, n, d, xc)
            sol = solve_exact([terms for _, terms in cands], target, ctx.p) if cands else None
            if sol is None:
                raise NotInSpanError(
                    "block cofactor of degree %d is outside the invariant span" % d
                )
            for (key, _), coef in zip(cands, sol):
                if coef:
                    entries.setdefault(key, {})[tail] = coef
    final = {key: Element._make(tail_ctx, terms) for key, terms in entries.items()}
    return InvariantExpansion(ctx, n, tail_ctx, final)


# Power-map expansions are expensive and endlessly re-read during the
# Milnor sweeps; Elements hash by value, so (n, a) is a sound memo key.
_expansion_cache: dict[tuple[int, Element], InvariantExpansion] = {}


def power_expansion(n: int, a: Element) -> InvariantExpansion:
    key = (n, a)
    exp = _expansion_cache.get(key)
    if exp is None:
        exp = invariant_decompose(d_star_p(n, a), n)
        _expansion_cache[key] = exp
    return exp


def milnor_st(S: Sequence[int], R: Sequence[int], a: Element, n: "int | None" = None) -> Element:
    """The Milnor-basis operation St^{S,R} applied to homogeneous ``a``.

    Read off as the (S, (r0, r1, .., r_{n-1})) cofactor of the n-block
    power-map expansion of ``a``, rescaled by mu(q)^{-n} (-1)^{r(S,R)}
    where q = deg a.  Requires r0 = q - l(S) - 2 sum(R) >= 0; operations
    beyond that excess bound are not represented in the expansion.
    """
    S, R = tuple(S), tuple(R)
    if n is None:
        n = len(R)
    if len(R) != n:
        raise ValueError("R must have exactly n entries")
    if any(r < 0 for r in R):
        raise ValueError("R entries must be >= 0")
    if list(S) != sorted(set(S)) or any(not 0 <= s < n for s in S):
        raise ValueError("S must be strictly increasing within 0..n-1")
    if a.is_zero():
        return a
    q = a.degree()
    stats = seq_stats(S, R, q, a.ctx.p)
    if stats.r0 < 0:
        raise ValueError(
            "(S=%s, R=%s) is inadmissible in degree %d (r0 = %d)" % (S, R, q, stats.r0)
        )
    exp = power_expansion(n, a)
    tail = exp.cofactor(S, (stats.r0,) + R[: n - 1] if n else ())
    if tail.is_zero():
        return Element._make(a.ctx, {})
    scale = mu_mod(q, a.ctx.p, n)
    if stats.sign_exp % 2:
        scale = -scale % a.ctx.p
    return Element._make(a.ctx, dict(tail.scalar_mul(inv_mod(scale, a.ctx.p)).terms))


def admissible_indices(q: int, n: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All (S, R) with S inside 0..n-1, len(R) = n, and r0(q) >= 0."""
    for xc in range(n + 1):
        for S in itertools.combinations(range(n), xc):
            budget = (q - xc) // 2
            if budget < 0:
                continue
            for R in _bounded_tuples(n, budget):
                yield S, R


def _bounded_tuples(length: int, total_max: int) -> Iterator[tuple[int, ...]]:
    if length == 0:
        yield ()
        return
    for first in range(total_max + 1):
        for rest in _bounded_tuples(length - 1, total_max - first):
            yield (first,) + rest
