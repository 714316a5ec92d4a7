"""Text/JSON/LaTeX serialization round trips."""

import json

import pytest

from dicksonmui.algebra import AlgebraContext, render_text
from dicksonmui.grammar import ParseError, from_json, parse_text, render_latex, to_json


@pytest.fixture
def ctx():
    return AlgebraContext(3, 2)


@pytest.mark.parametrize("text", [
    "0",
    "1",
    "2",
    "y1",
    "y2^3 + 2*y2*y1^2",
    "x1*y2 + 2*x2*y1",
    "x1*x2*y1^4",
    "2*x1",
])
def test_text_round_trip(ctx, text):
    assert render_text(parse_text(text, ctx)) == text


def test_parse_normalizes(ctx):
    # whitespace, coefficient folding, repeated monomials
    a = parse_text(" y1 + y1 +y1 ", ctx)
    assert a.is_zero()
    assert parse_text("y1 - y1", ctx).is_zero()
    assert parse_text("3*y1 + y2", ctx) == ctx.y(2)
    assert parse_text("y1*y1", ctx) == ctx.y(1, 2)


def test_parse_signs(ctx):
    assert parse_text("-y1", ctx) == ctx.y(1).scalar_mul(2)
    assert parse_text("y2 - 2*y1", ctx) == ctx.y(2) + ctx.y(1)


@pytest.mark.parametrize("bad", [
    "",
    "y0",
    "y3",      # outside m = 2
    "x1^2",
    "z1",
    "y1^-2",
    "1 + + y1",
])
def test_parse_errors(ctx, bad):
    with pytest.raises(ParseError):
        parse_text(bad, ctx)


def test_exterior_order_sign(ctx):
    # x2*x1 re-sorts with a sign
    assert parse_text("x2*x1", ctx) == (ctx.x(1) * ctx.x(2)).scalar_mul(-1)
    assert parse_text("x1*x2 + x2*x1", ctx).is_zero()


def test_json_round_trip(ctx):
    a = parse_text("x1*y2 + 2*x2*y1", ctx)
    data = to_json(a)
    assert data["p"] == 3 and data["m"] == 2
    assert from_json(data) == a
    assert from_json(json.loads(json.dumps(data)), ctx) == a


def test_json_rejects_mismatched_context(ctx):
    data = to_json(ctx.y(1))
    with pytest.raises(ValueError):
        from_json(data, AlgebraContext(5, 2))
    data["terms"][0]["y"] = [1]  # wrong vector length
    with pytest.raises(ValueError):
        from_json(data)


def test_latex(ctx):
    a = parse_text("y2^3 + 2*y2*y1^2", ctx)
    assert render_latex(a) == "y_{2}^{3} + 2 y_{2} y_{1}^{2}"
    assert render_latex(ctx.zero()) == "0"
    assert render_latex(ctx.x(1) * ctx.y(2)) == "x_{1} y_{2}"
