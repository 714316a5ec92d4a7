"""Exact sparse arithmetic in E(x_1,...,x_m) (x) P(y_1,...,y_m) over Z/p.

Scalars live in Z/p for an odd prime p.  The generators x_i are exterior
of degree 1 (x_i^2 = 0, x_i x_j = -x_j x_i) and the y_i are polynomial of
degree 2 and central.  An Element is an immutable finite sum of monomials

    c * x_{i_1} ... x_{i_k} * y_1^{e_1} ... y_m^{e_m},

stored as a map from Monomial to a nonzero residue in 1..p-1.  All
operations return new Elements; nothing here mutates shared state, so
values are safe to cache and to hash.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .arith import inv_mod, is_odd_prime


class ContextMismatchError(ValueError):
    """Operands live over different (p, m) generator contexts."""


class InexactDivisionError(ArithmeticError):
    """exact_div was asked for a quotient that does not exist."""


class Monomial(NamedTuple):
    """xs: strictly increasing exterior indices (1-based); ys: exponent vector."""

    xs: tuple[int, ...]
    ys: tuple[int, ...]

    def degree(self) -> int:
        return len(self.xs) + 2 * sum(self.ys)


def monomial_mul(a: Monomial, b: Monomial):
    """Graded product of monomials: (sign, Monomial), or None when it dies.

    The sign is the Koszul sign from moving the exterior factors of b past
    those of a into one increasing list; a repeated exterior index kills
    the product.
    """
    if not a.xs:
        merged = b.xs
        inversions = 0
    elif not b.xs:
        merged = a.xs
        inversions = 0
    else:
        out = []
        inversions = 0
        ia, na = 0, len(a.xs)
        for jb in b.xs:
            while ia < na and a.xs[ia] < jb:
                out.append(a.xs[ia])
                ia += 1
            if ia < na and a.xs[ia] == jb:
                return None
            # jb jumps over everything still unprocessed in a.xs
            inversions += na - ia
            out.append(jb)
        out.extend(a.xs[ia:])
        merged = tuple(out)
    ys = tuple(ea + eb for ea, eb in zip(a.ys, b.ys))
    return (-1 if inversions % 2 else 1), Monomial(merged, ys)


def monomial_sort_key(mono: Monomial):
    """Display order: total degree first, highest-index generators dominant."""
    return (mono.degree(), tuple(reversed(mono.ys)), tuple(reversed(mono.xs)))


def _grlex_key(mono: Monomial):
    # division order on purely polynomial monomials
    return (sum(mono.ys), mono.ys)


@dataclass(frozen=True)
class AlgebraContext:
    """The ambient algebra E(x_1..x_m) (x) P(y_1..y_m) over Z/p.

    ``block`` marks how many leading generator pairs form the invariant-side
    block when the context was produced by the power map; it is bookkeeping
    only and does not change the ring structure.
    """

    p: int
    m: int
    block: int = 0

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise ValueError("p must be an odd prime, got %r" % (self.p,))
        if self.m < 0:
            raise ValueError("m must be >= 0")
        if not 0 <= self.block <= self.m:
            raise ValueError("block must lie in 0..m")

    @property
    def h(self) -> int:
        return (self.p - 1) // 2

    def with_block(self, block: int) -> "AlgebraContext":
        return AlgebraContext(self.p, self.m, block)

    def _empty_ys(self) -> tuple[int, ...]:
        return (0,) * self.m

    def zero(self) -> "Element":
        return Element._make(self, {})

    def scalar(self, c: int) -> "Element":
        c %= self.p
        if not c:
            return self.zero()
        return Element._make(self, {Monomial((), self._empty_ys()): c})

    def one(self) -> "Element":
        return self.scalar(1)

    def x(self, i: int) -> "Element":
        self._check_index(i)
        return Element._make(self, {Monomial((i,), self._empty_ys()): 1})

    def y(self, i: int, e: int = 1) -> "Element":
        self._check_index(i)
        if e < 0:
            raise ValueError("negative exponent")
        if e == 0:
            return self.one()
        ys = [0] * self.m
        ys[i - 1] = e
        return Element._make(self, {Monomial((), tuple(ys)): 1})

    def monomial(self, xs: Iterable[int] = (), ys: Iterable[int] = (), c: int = 1) -> "Element":
        xs = tuple(xs)
        ys = tuple(ys)
        if len(ys) > self.m:
            raise ValueError("too many y exponents")
        ys = ys + (0,) * (self.m - len(ys))
        if any(e < 0 for e in ys):
            raise ValueError("negative exponent")
        if list(xs) != sorted(set(xs)):
            raise ValueError("exterior indices must be strictly increasing")
        for i in xs:
            self._check_index(i)
        c %= self.p
        if not c:
            return self.zero()
        return Element._make(self, {Monomial(xs, ys): c})

    def _check_index(self, i: int):
        if not 1 <= i <= self.m:
            raise ValueError("generator index %r outside 1..%d" % (i, self.m))


class Element:
    """An immutable element of E(x_1..x_m) (x) P(y_1..y_m) over Z/p."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: AlgebraContext, terms: Mapping[Monomial, int]):
        clean: dict[Monomial, int] = {}
        for mono, c in terms.items():
            c %= ctx.p
            if c:
                clean[mono] = c
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _make(cls, ctx: AlgebraContext, clean_terms: dict[Monomial, int]) -> "Element":
        # trusted constructor: residues already in 1..p-1
        self = object.__new__(cls)
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "terms", clean_terms)
        object.__setattr__(self, "_hash", None)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree_set(self) -> set[int]:
        return {mono.degree() for mono in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degree_set()) <= 1

    def degree(self) -> int:
        """Degree of a homogeneous element; 0 for the zero element."""
        degs = self.degree_set()
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError("element is not homogeneous: degrees %s" % sorted(degs))
        return degs.pop()

    def coefficient(self, mono: Monomial) -> int:
        return self.terms.get(mono, 0)

    def constant_term(self) -> int:
        return self.terms.get(Monomial((), self.ctx._empty_ys()), 0)

    def homogeneous_component(self, d: int) -> "Element":
        return Element._make(
            self.ctx, {m: c for m, c in self.terms.items() if m.degree() == d}
        )

    def is_polynomial(self) -> bool:
        return all(not mono.xs for mono in self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- ring operations -------------------------------------------------

    def _coerce(self, other) -> "Element | None":
        if isinstance(other, Element):
            if other.ctx != self.ctx:
                raise ContextMismatchError(
                    "contexts differ: %r vs %r" % (self.ctx, other.ctx)
                )
            return other
        if isinstance(other, int):
            return self.ctx.scalar(other)
        return None

    def __add__(self, other) -> "Element":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self.ctx.p
        out = dict(self.terms)
        for mono, c in other.terms.items():
            v = (out.get(mono, 0) + c) % p
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
        return Element._make(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        p = self.ctx.p
        return Element._make(self.ctx, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Element":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Element":
        return -(self - other)

    def __mul__(self, other) -> "Element":
        if isinstance(other, int):
            return self.scalar_mul(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self.ctx.p
        out: dict[Monomial, int] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                hit = monomial_mul(ma, mb)
                if hit is None:
                    continue
                sign, mono = hit
                v = (out.get(mono, 0) + sign * ca * cb) % p
                if v:
                    out[mono] = v
                else:
                    out.pop(mono, None)
        return Element._make(self.ctx, out)

    def __rmul__(self, other) -> "Element":
        if isinstance(other, int):
            return self.scalar_mul(other)
        return NotImplemented

    def scalar_mul(self, c: int) -> "Element":
        p = self.ctx.p
        c %= p
        if not c:
            return self.ctx.zero()
        return Element._make(self.ctx, {m: v * c % p for m, v in self.terms.items()})

    def __pow__(self, e: int) -> "Element":
        if e < 0:
            raise ValueError("negative power")
        if e == 0:
            return self.ctx.one()
        if e == 1:
            return self
        if not self.is_polynomial():
            # squares of exterior-bearing sums silently collapse; make the
            # caller expand such products explicitly via mul
            raise ValueError("pow with e >= 2 needs a purely polynomial element")
        return _poly_pow(self, e)

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == self.ctx.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self) -> int:
        hv = self._hash
        if hv is None:
            hv = hash((self.ctx, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", hv)
        return hv

    # -- substitution ------------------------------------------------------

    def substitute(
        self,
        x_images: "Mapping[int, Element] | None" = None,
        y_images: "Mapping[int, Element] | None" = None,
    ) -> "Element":
        """Apply the algebra map sending x_i, y_i to the given images.

        Unmapped generators stay fixed.  Every x-image must be a sum of
        odd-degree monomials and every y-image even, so Koszul reordering
        stays consistent.
        """
        ctx = self.ctx
        x_images = dict(x_images or {})
        y_images = dict(y_images or {})
        for i, img in x_images.items():
            ctx._check_index(i)
            if img.ctx != ctx:
                raise ContextMismatchError("x image lives in a different context")
            if any(mono.degree() % 2 == 0 for mono in img.terms):
                raise ValueError("image of x_%d must be odd" % i)
        for i, img in y_images.items():
            ctx._check_index(i)
            if img.ctx != ctx:
                raise ContextMismatchError("y image lives in a different context")
            if any(mono.degree() % 2 for mono in img.terms):
                raise ValueError("image of y_%d must be even" % i)
        # drop identity images so untouched factors stay inside one monomial
        x_images = {i: img for i, img in x_images.items() if img != ctx.x(i)}
        y_images = {i: img for i, img in y_images.items() if img != ctx.y(i)}
        if not x_images and not y_images:
            return self
        ypow_cache: dict[tuple[int, int], Element] = {}
        out = ctx.zero()
        for mono, c in self.terms.items():
            fixed_xs = tuple(i for i in mono.xs if i not in x_images)
            fixed_ys = tuple(
                e if (i + 1) not in y_images else 0 for i, e in enumerate(mono.ys)
            )
            # pull each mapped exterior factor to the front, keeping their
            # relative order; each move costs a sign per fixed odd factor
            # it jumps over
            sign = 1
            mapped = []
            fixed_seen = 0
            for i in mono.xs:
                if i in x_images:
                    if fixed_seen % 2:
                        sign = -sign
                    mapped.append(x_images[i])
                else:
                    fixed_seen += 1
            term = Element._make(ctx, {Monomial(fixed_xs, fixed_ys): c})
            for img in reversed(mapped):
                term = img * term
            for i, e in enumerate(mono.ys):
                idx = i + 1
                if e and idx in y_images:
                    key = (idx, e)
                    power = ypow_cache.get(key)
                    if power is None:
                        power = _even_pow(y_images[idx], e)
                        ypow_cache[key] = power
                    term = term * power
            out = out + term.scalar_mul(sign)
        return out

    # -- rendering ---------------------------------------------------------

    def __str__(self) -> str:
        return render_text(self)

    def __repr__(self) -> str:
        return "<Element p=%d m=%d %s>" % (self.ctx.p, self.ctx.m, render_text(self))


def _poly_pow(a: Element, e: int) -> Element:
    """a^e for purely polynomial a, with a Frobenius fast path mod p."""
    ctx = a.ctx
    p = ctx.p
    if e == 0:
        return ctx.one()
    if e >= p:
        frob = Element._make(
            ctx,
            {Monomial((), tuple(v * p for v in m.ys)): c for m, c in a.terms.items()},
        )
        out = _poly_pow(frob, e // p)
        rem = e % p
        if rem:
            out = out * _poly_pow(a, rem)
        return out
    out = ctx.one()
    base = a
    while e:
        if e & 1:
            out = out * base
        e >>= 1
        if e:
            base = base * base
    return out


def _even_pow(a: Element, e: int) -> Element:
    """Power of an even-degree element (may carry exterior pairs)."""
    if a.is_polynomial():
        return _poly_pow(a, e)
    out = a.ctx.one()
    base = a
    while e:
        if e & 1:
            out = out * base
        e >>= 1
        if e:
            base = base * base
    return out


def determinant(rows: Sequence[Sequence[Element]]) -> Element:
    """Determinant by cofactor expansion along the first row.

    Entries must be homogeneous and share one context.  Intended for
    matrices with at most one row of odd entries (expansion is then
    order-independent); that covers every matrix built here.
    """
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix has no context; use bracket helpers")
    ctx = rows[0][0].ctx
    for row in rows:
        if len(row) != n:
            raise ValueError("matrix must be square")
        for entry in row:
            if entry.ctx != ctx:
                raise ContextMismatchError("matrix entries in mixed contexts")
            if not entry.is_homogeneous():
                raise ValueError("matrix entries must be homogeneous")
    return _det(rows, ctx)


def _det(rows, ctx) -> Element:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    out = ctx.zero()
    for j in range(n):
        entry = rows[0][j]
        if entry.is_zero():
            continue
        minor = [[row[jj] for jj in range(n) if jj != j] for row in rows[1:]]
        sub = entry * _det(minor, ctx)
        out = out + (sub if j % 2 == 0 else -sub)
    return out


def exact_div(a: Element, b: Element) -> Element:
    """The exact quotient a / b of purely polynomial elements.

    Raises InexactDivisionError when b does not divide a; division is by
    leading-term elimination in graded-lex order.
    """
    if a.ctx != b.ctx:
        raise ContextMismatchError("exact_div across contexts")
    if not (a.is_polynomial() and b.is_polynomial()):
        raise ValueError("exact_div handles purely polynomial elements")
    if b.is_zero():
        raise ZeroDivisionError("division by the zero element")
    ctx = a.ctx
    p = ctx.p
    lead_b = max(b.terms, key=_grlex_key)
    cb_inv = inv_mod(b.terms[lead_b], p)
    rem = dict(a.terms)
    quo: dict[Monomial, int] = {}
    while rem:
        lead = max(rem, key=_grlex_key)
        diff = tuple(ea - eb for ea, eb in zip(lead.ys, lead_b.ys))
        if any(d < 0 for d in diff):
            raise InexactDivisionError("leading term not divisible")
        c = rem[lead] * cb_inv % p
        qmono = Monomial((), diff)
        quo[qmono] = c
        for mb, vb in b.terms.items():
            mono = Monomial((), tuple(d + e for d, e in zip(diff, mb.ys)))
            v = (rem.get(mono, 0) - c * vb) % p
            if v:
                rem[mono] = v
            else:
                rem.pop(mono, None)
    return Element._make(ctx, quo)


def relabel(a: Element, new_ctx: AlgebraContext, index_map: Mapping[int, int]) -> Element:
    """Push a through the generator renaming i -> index_map[i].

    The map must be injective on the indices a actually uses; unmapped
    indices are kept.  Exterior parts are re-sorted with the sign of the
    permutation this induces.
    """
    if new_ctx.p != a.ctx.p:
        raise ContextMismatchError("relabel cannot change p")
    out: dict[Monomial, int] = {}
    p = new_ctx.p
    for mono, c in a.terms.items():
        mapped = [index_map.get(i, i) for i in mono.xs]
        if len(set(mapped)) != len(mapped):
            raise ValueError("index map is not injective on exterior part")
        inversions = sum(
            1
            for i in range(len(mapped))
            for j in range(i + 1, len(mapped))
            if mapped[i] > mapped[j]
        )
        ys = [0] * new_ctx.m
        for i, e in enumerate(mono.ys):
            if e:
                tgt = index_map.get(i + 1, i + 1)
                if not 1 <= tgt <= new_ctx.m:
                    raise ValueError("mapped index %d outside target context" % tgt)
                if ys[tgt - 1]:
                    raise ValueError("index map is not injective on y part")
                ys[tgt - 1] = e
        for i in mapped:
            if not 1 <= i <= new_ctx.m:
                raise ValueError("mapped index %d outside target context" % i)
        mono2 = Monomial(tuple(sorted(mapped)), tuple(ys))
        v = (out.get(mono2, 0) + (-c if inversions % 2 else c)) % p
        if v:
            out[mono2] = v
        else:
            out.pop(mono2, None)
    return Element._make(new_ctx, out)


def embed(a: Element, new_ctx: AlgebraContext) -> Element:
    """Reinterpret a inside a context with at least as many generator pairs."""
    if new_ctx.p != a.ctx.p:
        raise ContextMismatchError("embed cannot change p")
    if new_ctx.m < a.ctx.m:
        raise ValueError("target context is too small")
    pad = (0,) * (new_ctx.m - a.ctx.m)
    return Element._make(
        new_ctx, {Monomial(m.xs, m.ys + pad): c for m, c in a.terms.items()}
    )


def with_block(a: Element, block: int) -> Element:
    """The same element over the same algebra, with the block marker reset."""
    return Element._make(a.ctx.with_block(block), dict(a.terms))


def split_monomial(mono: Monomial, n: int) -> tuple[Monomial, Monomial]:
    """Split into (leading n pairs, remaining pairs); no sign is incurred
    because exterior indices are stored in increasing order."""
    bxs = tuple(i for i in mono.xs if i <= n)
    xxs = tuple(i - n for i in mono.xs if i > n)
    return Monomial(bxs, mono.ys[:n]), Monomial(xxs, mono.ys[n:])


def render_text(a: Element) -> str:
    """Canonical text form, e.g. ``y2^3 + 2*y2*y1^2``; ``0`` when zero.

    Exterior factors lead in orientation order; polynomial factors follow
    highest index first, mirroring the term order.
    """
    if a.is_zero():
        return "0"
    bits = []
    for mono in sorted(a.terms, key=monomial_sort_key, reverse=True):
        c = a.terms[mono]
        factors = ["x%d" % i for i in mono.xs]
        for i in range(len(mono.ys), 0, -1):
            e = mono.ys[i - 1]
            if e == 1:
                factors.append("y%d" % i)
            elif e:
                factors.append("y%d^%d" % (i, e))
        if c != 1 or not factors:
            factors = [str(c)] + factors
        bits.append("*".join(factors))
    return " + ".join(bits)
