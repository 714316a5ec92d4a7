"""Invariant constructions against their independent product/recursion
oracles, plus linear-invariance under the relevant groups."""

import pytest

from dicksonmui.algebra import AlgebraContext, exact_div, render_text
from dicksonmui.invariants import (
    L,
    Ltilde,
    M,
    Mtilde,
    Q,
    U,
    V,
    all_gl_matrices,
    apply_matrix,
    dimension,
    gl_generators,
    is_invariant,
    Q_recursion,
    sl_generators,
    V_product,
)


def ctx3(m):
    return AlgebraContext(3, m)


def test_frozen_small_values():
    c2 = ctx3(2)
    assert render_text(V(c2, 2)) == "y2^3 + 2*y2*y1^2"
    assert render_text(U(c2, 2)) == "x1*y2 + 2*x2*y1"
    c1 = ctx3(1)
    assert render_text(Q(c1, 1, 0)) == "y1^2"
    assert Q(c1, 1, 1) == c1.one()
    assert render_text(Ltilde(c1, 1)) == "y1"
    assert render_text(Mtilde(c1, 1, 0)) == "x1"


def test_degrees_match_dimension():
    for p in (3, 5):
        ctx = AlgebraContext(p, 3)
        for n in (1, 2, 3):
            assert Ltilde(ctx, n).degree() == dimension("Ltilde", p, n) == p**n - 1
            for s in range(n):
                assert Q(ctx, n, s).degree() == 2 * (p**n - p**s)
                assert Mtilde(ctx, n, s).degree() == p**n - 2 * p**s
        for k in (1, 2, 3):
            assert U(ctx, k).degree() == p ** (k - 1)
            assert V(ctx, k).degree() == 2 * p ** (k - 1)


@pytest.mark.parametrize("p,n", [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2)])
def test_q_recursion_oracle(p, n):
    ctx = AlgebraContext(p, n)
    for s in range(n + 1):
        assert Q(ctx, n, s) == Q_recursion(ctx, n, s)


@pytest.mark.parametrize("p,k", [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2)])
def test_v_product_oracle(p, k):
    ctx = AlgebraContext(p, k)
    assert V(ctx, k) == V_product(ctx, k)


def test_q_edge_cases():
    ctx = ctx3(2)
    # bottom Q is the square of the top exterior-free invariant
    assert Q(ctx, 2, 0) == Ltilde(ctx, 2) ** 2
    assert Q(ctx, 2, 2) == ctx.one()


def test_v_divides_l():
    ctx = ctx3(3)
    for k in (2, 3):
        assert exact_div(L(ctx, k), L(ctx, k - 1)) == V(ctx, k)


def test_mtilde_minus_one_is_ltilde():
    ctx = AlgebraContext(5, 2)
    assert Mtilde(ctx, 2, -1) == Ltilde(ctx, 2)


def test_gl_invariance_of_q():
    for p, n in [(3, 2), (5, 2)]:
        ctx = AlgebraContext(p, n)
        for s in range(n):
            assert all(is_invariant(Q(ctx, n, s), g) for g in gl_generators(n, p))


def test_sl_invariance_of_twisted_families():
    ctx = ctx3(3)
    gens = sl_generators(3, 3)
    assert all(is_invariant(Ltilde(ctx, 3), g) for g in gens)
    for s in range(3):
        assert all(is_invariant(Mtilde(ctx, 3, s), g) for g in gens)


def test_u_is_not_sl_invariant_at_p5():
    # the flag-stabilizer is the right group for U_k; full SL_k moves it
    ctx = AlgebraContext(5, 2)
    u = U(ctx, 2)
    g = [[1, 1], [0, 1]]  # sends x1 to x1 + x2: moves the top flag step
    assert apply_matrix(u, g) != u
    # ... while the transvection fixing the top step fixes U
    assert apply_matrix(u, [[1, 0], [1, 1]]) == u


def test_exhaustive_gl2_at_p3():
    ctx = ctx3(2)
    q = Q(ctx, 2, 1)
    mats = list(all_gl_matrices(2, 3))
    assert len(mats) == 48  # |GL_2(F_3)|
    assert all(apply_matrix(q, g) == q for g in mats)


def test_apply_matrix_rejects_singular():
    ctx = ctx3(2)
    with pytest.raises(ValueError):
        apply_matrix(ctx.y(1), [[1, 1], [2, 2]])
    with pytest.raises(ValueError):
        apply_matrix(ctx.y(1), [[1, 0]])


def test_dimension_unknown_name():
    with pytest.raises(ValueError):
        dimension("W", 3, 1)
