'''Contains all exceptions used internally to distinv in a single
location with no internal dependencies. This makes it a lot easier to
avoid accidental circular imports in exception handling logic.
'''


class DistInvException(Exception):
    '''The base class for all of our internal exceptions. You can catch
    this to handle all expected errors from within distinv; anything
    that would leak through that catch would be a distinv bug.
    '''


class InvalidGraph(DistInvException, ValueError):
    '''Raised when a vertex count / edge list does not describe a simple
    undirected graph on 0..n-1: out-of-range vertices, self-loops or
    duplicate edges.
    '''


class DisconnectedGraph(DistInvException):
    '''Raised by anything that needs distances when some vertex cannot
    be reached.
    '''


class NotATree(DistInvException):
    '''Raised by tree-only operations (edge splits, diametric
    decompositions, transformations) on graphs with a cycle.
    '''


class NotAnEdge(DistInvException, ValueError):
    pass


class CanonicalCapExceeded(DistInvException):
    '''General (non-tree) canonical codes search over vertex orderings,
    so they are only available up to a configured order.
    '''


class DegenerateGraph(DistInvException):
    '''Normalized transmissions divide by n-1, so they don't exist for
    the single vertex graph.
    '''


class FamilyDomainError(DistInvException, ValueError):
    '''Raised when a family constructor is asked for an order outside
    of the family's domain (eg a cycle on two vertices).
    '''


class ClosedFormDomainError(DistInvException, ValueError):
    '''Raised when a closed form is evaluated at an n whose parity or
    residue it doesn't cover.
    '''


class PreconditionFailed(DistInvException):
    '''Raised by a transformation rule when the graph doesn't satisfy
    one of the rule's preconditions. Drivers catch this to dispatch the
    next rule, so it carries which rule and which condition failed.
    '''

    def __init__(self, rule_id, condition):
        super().__init__(f'{rule_id}: precondition {condition} fails')
        self.rule_id = rule_id
        self.condition = condition


class CapExceeded(DistInvException):
    '''Raised when an enumeration or search is asked for an order above
    its class cap.
    '''


class ExprSyntaxError(DistInvException, ValueError):
    '''Invariant expression could not be parsed. column is 1-based.'''

    def __init__(self, message, column):
        super().__init__(f'{message} (column {column})')
        self.message = message
        self.column = column


class UnknownIdentifier(ExprSyntaxError):
    pass


class EvaluationError(DistInvException, ArithmeticError):
    '''Division by zero or an unbound variable at evaluation time.'''


class CodecError(DistInvException, ValueError):
    '''Base class for graph text format errors.'''


class Graph6DecodeError(CodecError):
    pass


class EdgeListError(CodecError):
    '''Edge list document errors. line is 1-based, or None when the
    problem isn't tied to a single line.
    '''

    def __init__(self, message, line=None):
        if line is None:
            super().__init__(message)
        else:
            super().__init__(f'line {line}: {message}')
        self.line = line


class ReportWriteError(DistInvException, OSError):
    '''Failed to write a report sink. The path is kept so the CLI can
    say which one.
    '''

    def __init__(self, path):
        super().__init__(f'could not write report to {path}')
        self.path = path
