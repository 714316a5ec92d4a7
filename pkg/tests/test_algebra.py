"""Ring arithmetic: graded signs, exactness, context discipline."""

import pytest

from dicksonmui.algebra import (
    AlgebraContext,
    ContextMismatchError,
    InexactDivisionError,
    Monomial,
    embed,
    exact_div,
    relabel,
    render_text,
)


@pytest.fixture
def ctx():
    return AlgebraContext(3, 2)


def test_context_validation():
    with pytest.raises(ValueError):
        AlgebraContext(2, 1)
    with pytest.raises(ValueError):
        AlgebraContext(9, 1)
    with pytest.raises(ValueError):
        AlgebraContext(3, 2, block=3)
    assert AlgebraContext(7, 4).h == 3


def test_exterior_square_is_zero(ctx):
    x1 = ctx.x(1)
    assert (x1 * x1).is_zero()
    assert ((x1 + ctx.y(1)) * x1) == ctx.y(1) * x1


def test_anticommutation(ctx):
    x1, x2 = ctx.x(1), ctx.x(2)
    assert x1 * x2 == (x2 * x1).scalar_mul(-1)
    # odd * even commutes without sign
    assert x1 * ctx.y(2) == ctx.y(2) * x1


def test_square_of_odd_element_vanishes(ctx):
    # the two cross terms cancel through the Koszul sign
    a = ctx.x(1) * ctx.y(2) - ctx.x(2) * ctx.y(1)
    assert (a * a).is_zero()


def test_koszul_sign_diagonal(ctx):
    # x1 y1 has total degree 3, so the two products anticommute
    a = ctx.x(1) * ctx.y(1)
    b = ctx.x(2) * ctx.y(2)
    assert a * b == (b * a).scalar_mul(-1)
    assert a.degree() == 3


def test_degree_and_homogeneity(ctx):
    a = ctx.x(1) * ctx.y(2, 3)
    assert a.degree() == 7
    assert a.is_homogeneous()
    assert not (a + ctx.y(1)).is_homogeneous()
    assert ctx.zero().is_homogeneous()


def test_scalar_arithmetic(ctx):
    a = ctx.y(1).scalar_mul(5)
    assert a == ctx.y(1).scalar_mul(2)
    assert (a + a + a).is_zero()
    assert ctx.scalar(3).is_zero()
    assert ctx.one().constant_term() == 1


def test_pow_rules(ctx):
    y = ctx.y(1) + ctx.y(2)
    assert y**3 == ctx.y(1, 3) + ctx.y(2, 3)  # Frobenius mod 3
    assert y**0 == ctx.one()
    a = ctx.x(1) * ctx.y(1)
    assert a**1 == a
    # pow is reserved for polynomial elements; exterior squares go via mul
    with pytest.raises(ValueError):
        a**2
    assert (a * a).is_zero()


def test_even_products_with_exterior_pairs():
    ctx = AlgebraContext(3, 4)
    a = ctx.x(1) * ctx.x(2) + ctx.y(1) * ctx.y(2)
    sq = a * a
    # x1 x2 squares away, the cross terms survive
    cross = (ctx.x(1) * ctx.x(2) * ctx.y(1) * ctx.y(2)).scalar_mul(2)
    assert sq == cross + ctx.y(1, 2) * ctx.y(2, 2)


def test_context_mismatch(ctx):
    other = AlgebraContext(3, 3)
    with pytest.raises(ContextMismatchError):
        ctx.y(1) + other.y(1)
    with pytest.raises(ContextMismatchError):
        ctx.y(1) * other.y(1)


def test_exact_div(ctx):
    a = (ctx.y(1) + ctx.y(2)) * (ctx.y(1) + ctx.y(2, 2))
    assert exact_div(a, ctx.y(1) + ctx.y(2)) == ctx.y(1) + ctx.y(2, 2)
    with pytest.raises(InexactDivisionError):
        exact_div(ctx.y(1, 2) + ctx.y(2), ctx.y(1))
    with pytest.raises(ZeroDivisionError):
        exact_div(ctx.y(1), ctx.zero())


def test_relabel_needs_injective_map(ctx):
    big = AlgebraContext(3, 3)
    a = ctx.x(1) * ctx.y(2)
    moved = relabel(a, big, {1: 2, 2: 3})
    assert moved == big.x(2) * big.y(3)
    with pytest.raises(ValueError):
        relabel(ctx.x(1) * ctx.x(2), big, {1: 2})  # collides with kept x2
    with pytest.raises(ValueError):
        relabel(ctx.y(1) * ctx.y(2), big, {1: 2})


def test_relabel_tracks_exterior_reordering():
    ctx = AlgebraContext(3, 2)
    big = AlgebraContext(3, 2)
    a = ctx.x(1) * ctx.x(2)
    # swapping the two exterior indices costs a sign
    assert relabel(a, big, {1: 2, 2: 1}) == a.scalar_mul(-1)


def test_embed(ctx):
    big = AlgebraContext(3, 4)
    a = ctx.x(2) * ctx.y(1, 3)
    b = embed(a, big)
    assert b.ctx is big and b.degree() == a.degree()
    with pytest.raises(ValueError):
        embed(b, ctx)  # cannot shrink


def test_render_order(ctx):
    # higher total degree first, then higher-index generators dominate
    v2 = ctx.y(2, 3) + (ctx.y(2) * ctx.y(1, 2)).scalar_mul(2)
    assert render_text(v2) == "y2^3 + 2*y2*y1^2"
    assert render_text(ctx.zero()) == "0"
    assert render_text(ctx.one()) == "1"


def test_monomial_iteration(ctx):
    a = ctx.y(1).scalar_mul(2) + ctx.x(1)
    items = {mono: c for mono, c in a}
    assert items[Monomial((), (1, 0))] == 2
    assert items[Monomial((1,), (0, 0))] == 1
    assert len(a) == 2
