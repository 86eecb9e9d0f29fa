'''A tiny arithmetic language over invariant names, evaluated exactly.

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := INT | INT '/' INT | IDENT | '(' expr ')' | '-' factor

INT '/' INT directly inside a factor is a rational literal, so bounds
like 3/4 can be written as they would be by hand. Operators are left
associative; whitespace is ignored.
'''
import dataclasses
import logging
import re
from fractions import Fraction
from typing import Mapping

from distinv.exceptions import EvaluationError
from distinv.exceptions import ExprSyntaxError
from distinv.exceptions import UnknownIdentifier
from distinv.invariants import InvariantProfile
from distinv.invariants import PROFILE_VARIABLES
from distinv.invariants import profile_bindings
from distinv.utils import rat_to_str

logger = logging.getLogger(__name__)

_TOKEN_PATTERN = re.compile(
    r'\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)'
    r'|(?P<op>[-+*/()]))')


@dataclasses.dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    # 1-based
    column: int


class ExprAst:
    precedence = 3

    def evaluate(self, bindings):
        raise NotImplementedError()


@dataclasses.dataclass(frozen=True)
class Number(ExprAst):
    '''Non-negative rational literal; negation is always a Neg node.'''
    value: Fraction

    def evaluate(self, bindings):
        return self.value

    def __str__(self):
        if self.value.denominator == 1:
            return str(self.value.numerator)
        return rat_to_str(self.value)


@dataclasses.dataclass(frozen=True)
class Var(ExprAst):
    name: str

    def evaluate(self, bindings):
        try:
            return Fraction(bindings[self.name])
        except KeyError as exc:
            raise EvaluationError(f'{self.name} is unbound') from exc

    def __str__(self):
        return self.name


@dataclasses.dataclass(frozen=True)
class Neg(ExprAst):
    operand: ExprAst

    def evaluate(self, bindings):
        return -self.operand.evaluate(bindings)

    def __str__(self):
        if isinstance(self.operand, _Binary):
            return f'-({self.operand})'
        return f'-{self.operand}'


@dataclasses.dataclass(frozen=True)
class _Binary(ExprAst):
    left: ExprAst
    right: ExprAst
    symbol = '?'

    def _wrap_right(self):
        return self.right.precedence <= self.precedence

    def __str__(self):
        left = str(self.left)
        if self.left.precedence < self.precedence:
            left = f'({left})'
        right = str(self.right)
        if self._wrap_right():
            right = f'({right})'
        return f'{left} {self.symbol} {right}'


class Add(_Binary):
    precedence = 1
    symbol = '+'

    def evaluate(self, bindings):
        return self.left.evaluate(bindings) + self.right.evaluate(bindings)


class Sub(_Binary):
    precedence = 1
    symbol = '-'

    def evaluate(self, bindings):
        return self.left.evaluate(bindings) - self.right.evaluate(bindings)


class Mul(_Binary):
    precedence = 2
    symbol = '*'

    def evaluate(self, bindings):
        return self.left.evaluate(bindings) * self.right.evaluate(bindings)


class Div(_Binary):
    precedence = 2
    symbol = '/'

    def _wrap_right(self):
        # "n / 2 / 3" would read back with a 2/3 literal
        return isinstance(self.right, Number) or super()._wrap_right()

    def evaluate(self, bindings):
        denominator = self.right.evaluate(bindings)
        if denominator == 0:
            raise EvaluationError(f'division by zero in {self}')
        return self.left.evaluate(bindings) / denominator


def _tokenize(text):
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].isspace():
            break

        match = _TOKEN_PATTERN.match(text, position)
        if match is None:
            column = len(text) - len(text[position:].lstrip()) + 1
            raise ExprSyntaxError(
                f'unexpected character {text[column - 1]!r}', column)

        kind = match.lastgroup
        tokens.append(_Token(kind, match.group(kind), match.start(kind) + 1))
        position = match.end()

    tokens.append(_Token('end', '', len(text) + 1))
    return tokens


class _Parser:

    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.index = 0

    @property
    def current(self):
        return self.tokens[self.index]

    def _peek(self, offset=1):
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def _take(self):
        token = self.current
        self.index += 1
        return token

    def _expect(self, text):
        token = self._take()
        if token.text != text:
            raise ExprSyntaxError(
                f'expected {text!r}, got {token.text or "end of input"!r}',
                token.column)
        return token

    def parse(self):
        ast = self._expr()
        if self.current.kind != 'end':
            raise ExprSyntaxError(
                f'unexpected {self.current.text!r}', self.current.column)
        return ast

    def _expr(self):
        ast = self._term()
        while self.current.text in ('+', '-'):
            node_type = Add if self._take().text == '+' else Sub
            ast = node_type(ast, self._term())
        return ast

    def _term(self):
        ast = self._factor()
        while self.current.text in ('*', '/'):
            operator = self._take()
            right = self._factor()
            if operator.text == '*':
                ast = Mul(ast, right)
            else:
                if isinstance(right, Number) and right.value == 0:
                    raise ExprSyntaxError(
                        'division by constant zero', operator.column)
                ast = Div(ast, right)
        return ast

    def _factor(self):
        token = self.current
        if token.kind == 'int':
            self._take()
            if self.current.text == '/' and self._peek().kind == 'int':
                slash = self._take()
                denominator = int(self._take().text)
                if denominator == 0:
                    raise ExprSyntaxError(
                        'division by constant zero', slash.column)
                return Number(Fraction(int(token.text), denominator))
            return Number(Fraction(int(token.text)))

        if token.kind == 'ident':
            self._take()
            if token.text not in PROFILE_VARIABLES:
                raise UnknownIdentifier(
                    f'unknown identifier {token.text!r}', token.column)
            return Var(token.text)

        if token.text == '-':
            self._take()
            return Neg(self._factor())

        if token.text == '(':
            self._take()
            ast = self._expr()
            self._expect(')')
            return ast

        raise ExprSyntaxError(
            f'unexpected {token.text or "end of input"!r}', token.column)


def parse_expr(text):
    return _Parser(text).parse()


def print_expr(ast):
    '''Text that parses back to the same tree.'''
    return str(ast)


def eval_expr(ast, profile):
    '''Evaluates against an InvariantProfile, or against a plain name to
    value mapping (eg just n, for bound formulas).
    '''
    if isinstance(profile, InvariantProfile):
        bindings = profile_bindings(profile)
    elif isinstance(profile, Mapping):
        bindings = profile
    else:
        raise TypeError('profile must be an InvariantProfile or a mapping')

    return ast.evaluate(bindings)
