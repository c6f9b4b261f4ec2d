import math
import random

import numpy as np
import pytest

from fobw.expr import (
    BinOp,
    Call,
    ExpressionError,
    Expression,
    Neg,
    Num,
    TimeVar,
    parse_expression,
)


class TestEvaluation:
    def test_sum_with_sine(self):
        assert parse_expression("1 + sin(t)")(0.0) == pytest.approx(1.0)

    def test_scaled_cosine(self):
        assert parse_expression("0.5 * cos(0.79 * t)")(0.0) == pytest.approx(0.5)

    def test_power_right_associative(self):
        assert parse_expression("2 ^ 3 ^ 2")(0.0) == pytest.approx(512.0)

    def test_power_binds_tighter_than_unary_minus(self):
        assert parse_expression("-2 ^ 2")(0.0) == pytest.approx(-4.0)

    def test_negative_exponent(self):
        assert parse_expression("2 ^ -1")(0.0) == pytest.approx(0.5)

    def test_usual_precedence(self):
        assert parse_expression("2 + 3 * 4")(0.0) == pytest.approx(14.0)
        assert parse_expression("2 * 3 + 4")(0.0) == pytest.approx(10.0)
        assert parse_expression("(2 + 3) * 4")(0.0) == pytest.approx(20.0)

    def test_pi_constant(self):
        assert parse_expression("cos(pi * t)")(1.0) == pytest.approx(-1.0)

    def test_time_variable(self):
        expr = parse_expression("t / 2 + 1")
        assert expr(0.5) == pytest.approx(1.25)

    def test_array_evaluation(self):
        expr = parse_expression("sin(t) + t ^ 2")
        ts = np.array([0.0, 0.5, 1.0])
        assert np.allclose(expr(ts), np.sin(ts) + ts**2)


class TestErrors:
    def test_empty_source(self):
        with pytest.raises(ExpressionError):
            parse_expression("   ")

    def test_unknown_identifier_with_offset(self):
        with pytest.raises(ExpressionError) as err:
            parse_expression("1 + bogus")
        assert err.value.offset == 4

    def test_dangling_operator(self):
        with pytest.raises(ExpressionError):
            parse_expression("1 +")

    def test_function_requires_parentheses(self):
        with pytest.raises(ExpressionError):
            parse_expression("sin t")

    def test_unexpected_character(self):
        with pytest.raises(ExpressionError) as err:
            parse_expression("1 + $")
        assert err.value.offset == 4

    def test_trailing_tokens(self):
        with pytest.raises(ExpressionError):
            parse_expression("1 2")


def random_tree(rng, depth):
    if depth == 0:
        return rng.choice([Num(round(rng.uniform(0.1, 5.0), 3)), TimeVar()])
    kind = rng.choice(["bin", "neg", "call", "leaf"])
    if kind == "leaf":
        return random_tree(rng, 0)
    if kind == "neg":
        return Neg(random_tree(rng, depth - 1))
    if kind == "call":
        return Call(rng.choice(["sin", "cos"]), random_tree(rng, depth - 1))
    op = rng.choice(["+", "-", "*", "/", "^"])
    left = random_tree(rng, depth - 1)
    right = random_tree(rng, depth - 1)
    if op == "^":
        # keep powers numeric-exponent so values stay real and bounded
        right = Num(round(rng.uniform(0.0, 3.0), 2))
    return BinOp(op, left, right)


class TestRoundTrip:
    def test_print_parse_identity(self):
        rng = random.Random(1234)
        ts = [rng.uniform(0.01, 1.0) for _ in range(10)]
        for _ in range(200):
            tree = random_tree(rng, 3)
            printed = Expression(tree, "<generated>").to_source()
            reparsed = parse_expression(printed)
            for t in ts:
                a = Expression(tree, "<generated>")(t)
                b = reparsed(t)
                if math.isnan(a):
                    assert math.isnan(b)
                else:
                    assert a == b

    def test_source_is_reparseable_text(self):
        expr = parse_expression("-(1 + sin(t)) ^ 2 / 3")
        again = parse_expression(expr.to_source())
        for t in (0.1, 0.7):
            assert expr(t) == again(t)
