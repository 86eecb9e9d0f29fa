import random
from fractions import Fraction

import pytest

from distinv.engine import BUILTIN_CONJECTURES
from distinv.exceptions import EvaluationError
from distinv.exceptions import ExprSyntaxError
from distinv.exceptions import UnknownIdentifier
from distinv.expr import Add
from distinv.expr import Div
from distinv.expr import Mul
from distinv.expr import Neg
from distinv.expr import Number
from distinv.expr import Sub
from distinv.expr import Var
from distinv.expr import eval_expr
from distinv.expr import parse_expr
from distinv.expr import print_expr
from distinv.families import closed_form
from distinv.families import make_path
from distinv.invariants import PROFILE_VARIABLES
from distinv.invariants import invariant_profile


class TestParse:

    def test_precedence(self):
        assert parse_expr('n - 1 * m') == \
            Sub(Var('n'), Mul(Number(1), Var('m')))
        assert parse_expr('n - m - 1') == \
            Sub(Sub(Var('n'), Var('m')), Number(Fraction(1)))

    def test_rational_literal(self):
        assert parse_expr('3/4') == Number(Fraction(3, 4))
        assert parse_expr('3 / 4 * n') == Mul(Number(Fraction(3, 4)), Var('n'))
        # Only INT / INT is a literal
        assert parse_expr('n/4') == Div(Var('n'), Number(Fraction(4)))
        assert parse_expr('1/(4*n-4)') == Div(
            Number(Fraction(1)),
            Sub(Mul(Number(Fraction(4)), Var('n')), Number(Fraction(4))))

    def test_negation(self):
        assert parse_expr('-n') == Neg(Var('n'))
        assert parse_expr('--3/4') == Neg(Neg(Number(Fraction(3, 4))))
        assert parse_expr('m - -n') == Sub(Var('m'), Neg(Var('n')))

    def test_bound_structure(self):
        ast = parse_expr('(3*n+1)/4 * (n-1)/n - n/2')
        assert isinstance(ast, Sub)
        assert ast.right == Div(Var('n'), Number(Fraction(2)))
        assert isinstance(ast.left, Div)
        assert ast.left.right == Var('n')

    def test_every_profile_variable(self):
        for name in PROFILE_VARIABLES:
            assert parse_expr(f' {name} ') == Var(name)

    @pytest.mark.parametrize(
        'text,column',
        [
            ('n +', 4),
            ('n $ 2', 3),
            ('(n', 3),
            (')', 1),
            ('', 1),
            ('n n', 3),
            ('n / 0', 3),
            ('1/0', 2),
            ('2 * (n - 1) / (0)', 13),
        ]
    )
    def test_syntax_errors(self, text, column):
        with pytest.raises(ExprSyntaxError) as exc_info:
            parse_expr(text)
        assert exc_info.value.column == column
        assert f'column {column}' in str(exc_info.value)

    def test_unknown_identifier(self):
        with pytest.raises(UnknownIdentifier) as exc_info:
            parse_expr('radius + girth')
        assert exc_info.value.column == 10
        # Still a syntax error, and a ValueError, for callers
        assert isinstance(exc_info.value, ExprSyntaxError)
        assert isinstance(exc_info.value, ValueError)


class TestPrint:

    @pytest.mark.parametrize(
        'text,printed',
        [
            ('n - (n - 1)', 'n - (n - 1)'),
            ('(n - 1) - n', 'n - 1 - n'),
            ('(n + 1) * m', '(n + 1) * m'),
            ('3/4*n', '3/4 * n'),
            ('n/2', 'n / (2)'),
            ('n / (m / 2)', 'n / (m / (2))'),
            ('-(n - m)', '-(n - m)'),
            ('- 3', '-3'),
        ]
    )
    def test_printed(self, text, printed):
        assert print_expr(parse_expr(text)) == printed

    def test_round_trip_generated(self):
        '''Printed text parses back to the same tree, over a reproducible
        stream of random trees.
        '''
        rng = random.Random(1)

        def generate(depth):
            if depth == 0 or rng.random() < 0.25:
                if rng.random() < 0.5:
                    return Var(rng.choice(PROFILE_VARIABLES))
                return Number(Fraction(rng.randint(1, 9), rng.randint(1, 4)))
            if rng.random() < 0.15:
                return Neg(generate(depth - 1))
            node_type = rng.choice((Add, Sub, Mul, Div))
            return node_type(generate(depth - 1), generate(depth - 1))

        for __ in range(10_000):
            ast = generate(5)
            assert parse_expr(print_expr(ast)) == ast


class TestEvaluate:

    def test_profile(self):
        profile = invariant_profile(make_path(5))
        assert eval_expr(parse_expr('remoteness - radius'), profile) == \
            Fraction(1, 2)
        assert eval_expr(parse_expr('avg_ecc - remoteness'), profile) == \
            Fraction(7, 10)
        assert eval_expr(parse_expr('m / (n - 1)'), profile) == 1

    def test_mapping(self):
        bound = parse_expr('(3*n+1)/4 * (n-1)/n - n/2')
        assert eval_expr(bound, {'n': 5}) == Fraction(7, 10)

    def test_unbound(self):
        with pytest.raises(EvaluationError):
            eval_expr(parse_expr('radius'), {'n': 5})

    def test_division_by_zero(self):
        with pytest.raises(EvaluationError):
            eval_expr(parse_expr('1 / (n - 5)'), {'n': 5})

    def test_bad_bindings(self):
        with pytest.raises(TypeError):
            eval_expr(parse_expr('n'), 5)

    @pytest.mark.parametrize(
        'conjecture_id,quantity_id',
        [
            ('con2-graphs', 'con2_bound'),
            ('con3-graphs', 'con3_bound'),
        ]
    )
    def test_catalog_bounds_match_closed_forms(
            self, conjecture_id, quantity_id):
        spec = BUILTIN_CONJECTURES[conjecture_id]
        for n in range(max(3, spec.min_n), 21):
            assert spec.bound_for(n) == closed_form(quantity_id, n)
