'''Constructors for the named extremal families, plus a registry of
their known closed-form invariant values, which the test suite checks
computed profiles against.

Vertex labelings are fixed per family (paths in path order, spiders
with the center at 0 and legs numbered outward one after the other)
so that anything downstream that tie-breaks by vertex id is
reproducible.
'''
import dataclasses
import logging
from fractions import Fraction
from typing import Callable
from typing import Dict
from typing import Optional
from typing import Tuple

from distinv.exceptions import ClosedFormDomainError
from distinv.exceptions import FamilyDomainError
from distinv.graph import build_graph

logger = logging.getLogger(__name__)


def make_path(n):
    if n < 1:
        raise FamilyDomainError(f'paths need n >= 1, not {n}')
    return build_graph(n, [(v, v + 1) for v in range(n - 1)])


def make_cycle(n):
    if n < 3:
        raise FamilyDomainError(f'cycles need n >= 3, not {n}')
    return build_graph(n, [(v, (v + 1) % n) for v in range(n)])


def make_spider(legs):
    '''Center 0 with one pendant path per entry of legs. Leg i occupies
    a consecutive block of ids, nearest-to-center first.
    '''
    legs = tuple(legs)
    if not legs or min(legs) < 1:
        raise FamilyDomainError(f'spider legs must be positive, not {legs}')

    edges = []
    next_id = 1
    for length in legs:
        previous = 0
        for __ in range(length):
            edges.append((previous, next_id))
            previous = next_id
            next_id += 1

    return build_graph(next_id, edges)


def spider3_legs(n):
    '''Balanced partition of n-1 into three parts, longest first.'''
    q, r = divmod(n - 1, 3)
    return (q + 1,) * r + (q,) * (3 - r)


def make_spider3(n):
    if n < 4:
        raise FamilyDomainError(f'3-leg spiders need n >= 4, not {n}')
    return make_spider(spider3_legs(n))


def make_spider4(k):
    '''Four legs of length k, so n = 4k + 1.'''
    if k < 1:
        raise FamilyDomainError(f'4-leg spiders need k >= 1, not {k}')
    return make_spider((k,) * 4)


def make_broom(n):
    '''P_{n-1} on 0..n-2 with leaf n-1 hanging from its center. For odd
    n the path has two centers and we take the smaller one.
    '''
    if n < 4:
        raise FamilyDomainError(f'brooms need n >= 4, not {n}')
    edges = [(v, v + 1) for v in range(n - 2)]
    edges.append(((n - 2) // 2, n - 1))
    return build_graph(n, edges)


def make_crossed_cycle(n):
    '''C_n plus the chords (0, 2) and (1, 3).'''
    if n < 5:
        raise FamilyDomainError(f'crossed cycles need n >= 5, not {n}')
    edges = [(v, (v + 1) % n) for v in range(n)]
    edges.extend([(0, 2), (1, 3)])
    return build_graph(n, edges)


def _spider4_by_order(n):
    if n < 5 or (n - 1) % 4:
        raise FamilyDomainError(
            f'4-leg spiders need n = 4k + 1 with k >= 1, not {n}')
    return make_spider4((n - 1) // 4)


# Every family keyed by id, as a function of the order n
FAMILIES = {
    'path': make_path,
    'cycle': make_cycle,
    'spider3': make_spider3,
    'spider4': _spider4_by_order,
    'broom': make_broom,
    'crossed_cycle': make_crossed_cycle,
}


@dataclasses.dataclass(frozen=True)
class FamilySpec:
    family_id: str
    n: int

    def __post_init__(self):
        if self.family_id not in FAMILIES:
            raise FamilyDomainError(f'unknown family {self.family_id!r}')

    def build(self):
        return FAMILIES[self.family_id](self.n)

    def __str__(self):
        return f'{self.family_id}({self.n})'


def _parity(n):
    return 'odd' if n % 2 else 'even'


@dataclasses.dataclass(frozen=True)
class ClosedForm:
    '''A known exact value of some objective on some family.

    formulas maps 'odd' / 'even' / 'any' to a function of n. families
    says which family the value belongs to per parity; a parity with a
    formula but no family (eg the odd branch of con2_bound) is a bound
    without a claimed family, which we evaluate but never check against
    a profile.
    '''
    quantity_id: str
    objective: str
    formulas: Dict[str, Callable[[int], Fraction]]
    families: Dict[str, str]
    min_n: int
    source: str
    domain: Optional[Callable[[int], bool]] = None

    def _branch(self, n):
        if 'any' in self.formulas:
            return 'any'
        return _parity(n)

    def applies_to(self, n):
        if n < self.min_n:
            return False
        if self.domain is not None and not self.domain(n):
            return False
        return self._branch(n) in self.formulas

    def family_for(self, n):
        '''Family id this value is claimed for at n, or None.'''
        if not self.applies_to(n):
            return None
        return self.families.get(self._branch(n))

    def evaluate(self, n):
        if not self.applies_to(n):
            raise ClosedFormDomainError(
                f'{self.quantity_id} is not defined at n={n}')
        return Fraction(self.formulas[self._branch(n)](n))


def _con2_odd(n):
    return (Fraction(3 * n + 1, 4) * Fraction(n - 1, n) -
            Fraction(n, 2))


def _con2_even(n):
    return Fraction(n - 1, 4) - Fraction(1, 4 * n - 4)


def _con3_odd(n):
    return Fraction(3 - n, 4)


def _con3_even(n):
    return Fraction(n * n, 4 * n - 4) - Fraction(n, 2)


_CLOSED_FORMS = (
    ClosedForm(
        quantity_id='lbar_path',
        objective='avg_distance',
        formulas={'any': lambda n: Fraction(n + 1, 3)},
        families={'any': 'path'},
        min_n=2,
        source='average distance of a path'),
    ClosedForm(
        quantity_id='pi_path_odd',
        objective='proximity',
        formulas={'odd': lambda n: Fraction(n + 1, 4)},
        families={'odd': 'path'},
        min_n=3,
        source='proximity of an odd path'),
    ClosedForm(
        quantity_id='pi_path_even',
        objective='proximity',
        formulas={'even': lambda n: Fraction(n * n, 4 * (n - 1))},
        families={'even': 'path'},
        min_n=2,
        source='central transmission (n/2)^2 of an even path'),
    ClosedForm(
        quantity_id='lbar_spider4',
        objective='avg_distance',
        formulas={
            'any': lambda n: Fraction(5 * n * n + 14 * n - 3, 24 * n)},
        families={'any': 'spider4'},
        min_n=5,
        domain=lambda n: n % 4 == 1,
        source='average distance of four equal legs, from the Wiener index'
               ' (20k^3 + 24k^2 + 4k)/3 with n = 4k + 1'),
    ClosedForm(
        quantity_id='pi_spider4',
        objective='proximity',
        formulas={'any': lambda n: Fraction(n + 3, 8)},
        families={'any': 'spider4'},
        min_n=5,
        domain=lambda n: n % 4 == 1,
        source='proximity of four equal legs'),
    ClosedForm(
        quantity_id='ecc_minus_rho_path',
        objective='avg_ecc - remoteness',
        formulas={
            'even': lambda n: Fraction(n - 2, 4),
            'odd': lambda n: Fraction(n, 4) - Fraction(2 * n + 1, 4 * n),
        },
        families={'even': 'path', 'odd': 'path'},
        min_n=2,
        source='maximum of avg_ecc - remoteness over trees'),
    ClosedForm(
        quantity_id='rho_minus_r_path_odd',
        objective='remoteness - radius',
        formulas={'odd': lambda n: Fraction(1, 2)},
        families={'odd': 'path'},
        min_n=3,
        source='odd paths: end transmission n(n-1)/2 over n-1, radius'
               ' (n-1)/2'),
    ClosedForm(
        quantity_id='rho_minus_r_path_even',
        objective='remoteness - radius',
        formulas={'even': lambda n: Fraction(0)},
        families={'even': 'path'},
        min_n=2,
        source='even paths: end transmission n(n-1)/2 over n-1, radius n/2'),
    ClosedForm(
        quantity_id='rho_minus_r_broom_odd',
        objective='remoteness - radius',
        formulas={'odd': lambda n: Fraction(1, n - 1)},
        families={'odd': 'broom'},
        min_n=5,
        source='minimum of remoteness - radius over odd trees'),
    ClosedForm(
        quantity_id='rho_minus_r_broom_even',
        objective='remoteness - radius',
        formulas={'even': lambda n: Fraction(n, 2 * (n - 1))},
        families={'even': 'broom'},
        min_n=4,
        source='broom with the extra leaf on the center'),
    ClosedForm(
        quantity_id='con2_bound',
        objective='avg_ecc - remoteness',
        formulas={'odd': _con2_odd, 'even': _con2_even},
        families={'even': 'cycle'},
        min_n=3,
        source='upper bound on avg_ecc - remoteness over connected graphs'),
    ClosedForm(
        quantity_id='con3_bound',
        objective='remoteness - radius',
        formulas={'odd': _con3_odd, 'even': _con3_even},
        families={'odd': 'crossed_cycle', 'even': 'cycle'},
        min_n=4,
        source='lower bound on remoteness - radius over connected graphs'),
)
CLOSED_FORMS = {form.quantity_id: form for form in _CLOSED_FORMS}


def closed_form(quantity_id, n):
    try:
        form = CLOSED_FORMS[quantity_id]
    except KeyError as exc:
        raise ClosedFormDomainError(
            f'unknown closed form {quantity_id!r}') from exc

    return form.evaluate(n)
