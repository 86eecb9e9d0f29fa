'''Extremal search over enumerated graph classes, and the catalog of
built-in conjectures checked against it.

Searches fan out over worker threads with trio. Each chunk of the class
reduces to its best value plus the graphs attaining it; merging two
partial results is associative and commutative, and witnesses are
sorted by canonical code at the end, so the worker count never changes
a result.
'''
import dataclasses
import functools
import logging
from fractions import Fraction
from typing import Mapping
from typing import Optional
from typing import Tuple

import trio

from distinv.config import get_settings
from distinv.enumeration import GraphClass
from distinv.exceptions import CapExceeded
from distinv.exceptions import FamilyDomainError
from distinv.expr import ExprAst
from distinv.expr import eval_expr
from distinv.expr import parse_expr
from distinv.families import FAMILIES
from distinv.graph import Graph
from distinv.graph import canonical_code
from distinv.invariants import invariant_profile
from distinv.utils import CanonicalCode

logger = logging.getLogger(__name__)

DIRECTIONS = ('max', 'min')
# Chunks per worker; more than one keeps workers busy when chunks differ
# in cost
_CHUNKS_PER_JOB = 4


@dataclasses.dataclass(frozen=True)
class ExtremalResult:
    n: int
    class_id: str
    objective: str
    direction: str
    extremal_value: Fraction
    witnesses: Tuple[CanonicalCode, ...]
    witness_graphs: Tuple[Graph, ...]
    class_size: int

    @property
    def tie_count(self):
        return len(self.witnesses)


def _as_ast(objective):
    if isinstance(objective, ExprAst):
        return objective
    return parse_expr(objective)


def _improves(value, best, direction):
    if direction == 'max':
        return value > best
    return value < best


def _evaluate_chunk(graphs, ast, direction):
    '''Best value in the chunk and every graph attaining it.'''
    best = None
    attaining = []
    for g in graphs:
        value = eval_expr(ast, invariant_profile(g))
        if best is None or _improves(value, best, direction):
            best, attaining = value, [g]
        elif value == best:
            attaining.append(g)
    return best, attaining


def _merge(direction, left, right):
    if _improves(right[0], left[0], direction):
        return right
    if _improves(left[0], right[0], direction):
        return left
    return left[0], left[1] + right[1]


def _chunks(items, jobs):
    size = max(1, -(-len(items) // (jobs * _CHUNKS_PER_JOB)))
    return [items[start:start + size] for start in range(0, len(items), size)]


async def search_extremal(graph_class, objective, direction, *, jobs=None):
    '''Exact extremum of objective (an expression or its text) over every
    graph of graph_class, with all witnesses.
    '''
    if direction not in DIRECTIONS:
        raise ValueError(f'direction must be one of {DIRECTIONS}')

    ast = _as_ast(objective)
    if jobs is None:
        jobs = get_settings().jobs

    graphs = await trio.to_thread.run_sync(graph_class.graphs)
    limiter = trio.CapacityLimiter(jobs)
    partials = []

    async def evaluate(chunk):
        partials.append(await trio.to_thread.run_sync(
            _evaluate_chunk, chunk, ast, direction, limiter=limiter))

    try:
        async with trio.open_nursery() as nursery:
            for chunk in _chunks(graphs, jobs):
                nursery.start_soon(evaluate, chunk)
    except trio.MultiError as exc:
        # Several chunks failing on one objective fail the same way
        raise exc.exceptions[0] from exc

    value, attaining = functools.reduce(
        functools.partial(_merge, direction), partials)
    by_code = sorted(
        ((canonical_code(g), g) for g in attaining),
        key=lambda pair: pair[0])

    logger.info(
        'Searched %s for %s %s: %s with %d witness(es) of %d graphs',
        graph_class, direction, ast, value, len(by_code), len(graphs))
    return ExtremalResult(
        n=graph_class.n,
        class_id=graph_class.class_id,
        objective=str(ast),
        direction=direction,
        extremal_value=value,
        witnesses=tuple(code for code, __ in by_code),
        witness_graphs=tuple(g for __, g in by_code),
        class_size=len(graphs))


def _parity_key(mapping, n):
    if 'any' in mapping:
        return 'any'
    return 'odd' if n % 2 else 'even'


@dataclasses.dataclass(frozen=True)
class ConjectureSpec:
    '''A claimed extremal family (per parity, or 'any'), optionally with
    a claimed bound written in terms of n. family_overrides replaces the
    claimed family at single orders where it is known to lose.
    '''
    conjecture_id: str
    class_id: str
    objective: str
    direction: str
    claimed_families: Mapping[str, str]
    min_n: int
    description: str
    bounds: Optional[Mapping[str, str]] = None
    family_overrides: Mapping[int, str] = dataclasses.field(
        default_factory=dict)

    def family_for(self, n):
        if n in self.family_overrides:
            return self.family_overrides[n]
        return self.claimed_families.get(
            _parity_key(self.claimed_families, n))

    def bound_for(self, n):
        if not self.bounds:
            return None
        text = self.bounds.get(_parity_key(self.bounds, n))
        if text is None:
            return None
        return eval_expr(parse_expr(text), {'n': Fraction(n)})


_LBAR_PI = 'avg_distance - proximity'
_ECC_RHO = 'avg_ecc - remoteness'
_RHO_R = 'remoteness - radius'
# K_{1,4} beats the three-leg spider at n = 5
_SMALL_STAR = {5: 'spider4'}

_BUILTINS = (
    ConjectureSpec(
        conjecture_id='con1-trees',
        class_id='tree',
        objective=_LBAR_PI,
        direction='max',
        claimed_families={'any': 'spider3'},
        family_overrides=_SMALL_STAR,
        min_n=4,
        description='avg_distance - proximity is maximum over trees for '
                    'three paths of almost equal length with a common end'),
    ConjectureSpec(
        conjecture_id='con1-graphs',
        class_id='connected',
        objective=_LBAR_PI,
        direction='max',
        claimed_families={'any': 'spider3'},
        family_overrides=_SMALL_STAR,
        min_n=4,
        description='the same maximum over all connected graphs'),
    ConjectureSpec(
        conjecture_id='con2-trees',
        class_id='tree',
        objective=_ECC_RHO,
        direction='max',
        claimed_families={'any': 'path'},
        bounds={'even': '(n-2)/4', 'odd': 'n/4 - (2*n+1)/(4*n)'},
        min_n=3,
        description='avg_ecc - remoteness is maximum over trees for the '
                    'path'),
    ConjectureSpec(
        conjecture_id='con2-graphs',
        class_id='connected',
        objective=_ECC_RHO,
        direction='max',
        claimed_families={'even': 'cycle'},
        bounds={
            'odd': '(3*n+1)/4 * (n-1)/n - n/2',
            'even': '(n-1)/4 - 1/(4*n-4)',
        },
        min_n=3,
        description='avg_ecc - remoteness over connected graphs is at '
                    'most the bound, with equality for even cycles'),
    ConjectureSpec(
        conjecture_id='con3-trees',
        class_id='tree',
        objective=_RHO_R,
        direction='min',
        claimed_families={'odd': 'path', 'even': 'broom'},
        min_n=3,
        description='remoteness - radius is minimum over trees for the '
                    'path (odd n) and the broom (even n)'),
    ConjectureSpec(
        conjecture_id='con3-graphs',
        class_id='connected',
        objective=_RHO_R,
        direction='min',
        claimed_families={'odd': 'crossed_cycle', 'even': 'cycle'},
        bounds={'odd': '(3-n)/4', 'even': 'n*n/(4*n-4) - n/2'},
        min_n=4,
        description='remoteness - radius over connected graphs is at least '
                    'the bound'),
)
BUILTIN_CONJECTURES = {spec.conjecture_id: spec for spec in _BUILTINS}


def evaluate_family(family_id, n, objective):
    '''Objective value on the family's member of order n.'''
    g = FAMILIES[family_id](n)
    return eval_expr(_as_ast(objective), invariant_profile(g))


@dataclasses.dataclass(frozen=True)
class ConjectureRow:
    n: int
    extremal_value: Fraction
    class_size: int
    witnesses: Tuple[CanonicalCode, ...]
    witness_graphs: Tuple[Graph, ...]
    family_id: Optional[str] = None
    family_value: Optional[Fraction] = None
    family_is_extremal: Optional[bool] = None
    bound_value: Optional[Fraction] = None
    bound_respected: Optional[bool] = None
    bound_tight: Optional[bool] = None

    @property
    def mismatch(self):
        return self.family_is_extremal is False or \
            self.bound_respected is False


@dataclasses.dataclass(frozen=True)
class ConjectureReport:
    conjecture_id: str
    rows: Tuple[ConjectureRow, ...]

    @property
    def mismatches(self):
        return tuple(row.n for row in self.rows if row.mismatch)


def _row_for(spec, result):
    n = result.n
    row = {}
    family_id = spec.family_for(n)
    if family_id is not None:
        try:
            family_graph = FAMILIES[family_id](n)
        except FamilyDomainError:
            logger.debug('%s has no member at n=%d', family_id, n)
        else:
            row.update(
                family_id=family_id,
                family_value=eval_expr(
                    parse_expr(spec.objective),
                    invariant_profile(family_graph)),
                family_is_extremal=(
                    canonical_code(family_graph) in result.witnesses))

    bound = spec.bound_for(n)
    if bound is not None:
        if spec.direction == 'max':
            respected = result.extremal_value <= bound
        else:
            respected = result.extremal_value >= bound
        row.update(
            bound_value=bound,
            bound_respected=respected,
            bound_tight=result.extremal_value == bound)

    return ConjectureRow(
        n=n,
        extremal_value=result.extremal_value,
        class_size=result.class_size,
        witnesses=result.witnesses,
        witness_graphs=result.witness_graphs,
        **row)


async def verify_conjecture(spec, n_range, *, jobs=None, allow_large=False):
    '''Per-n verdicts for a conjecture over n_range. Orders below its
    minimum are skipped; this only reports, it never raises on a
    verdict.
    '''
    classes = [
        GraphClass(spec.class_id, n, allow_large=allow_large)
        for n in n_range
        if n >= spec.min_n]
    # Every cap is checked before any work starts
    for graph_class in classes:
        if graph_class.n > graph_class.cap:
            raise CapExceeded(
                f'{graph_class.class_id} enumeration is capped at '
                f'n={graph_class.cap}')

    rows = []
    for graph_class in classes:
        result = await search_extremal(
            graph_class, spec.objective, spec.direction, jobs=jobs)
        row = _row_for(spec, result)
        if row.mismatch:
            logger.warning(
                '%s fails at n=%d: extremal %s, family %s, bound %s',
                spec.conjecture_id, row.n, row.extremal_value,
                row.family_value, row.bound_value)
        rows.append(row)

    return ConjectureReport(conjecture_id=spec.conjecture_id, rows=tuple(rows))
