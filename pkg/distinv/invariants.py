'''Exact distance invariants. Everything rational is a Fraction; nothing
in here ever touches a float.
'''
import collections
import dataclasses
import logging
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping
from typing import Tuple

from distinv.exceptions import DegenerateGraph
from distinv.exceptions import NotATree
from distinv.graph import distance_matrix
from distinv.graph import edge_split
from distinv.graph import is_tree

logger = logging.getLogger(__name__)

# Names usable as variables in invariant expressions, in display order
PROFILE_VARIABLES = (
    'avg_distance',
    'proximity',
    'remoteness',
    'avg_ecc',
    'radius',
    'diameter',
    'n',
    'm',
)


@dataclasses.dataclass(frozen=True)
class InvariantProfile:
    n: int
    m: int
    ecc_of: Tuple[int, ...]
    radius: int
    diameter: int
    avg_ecc: Fraction
    transmission_of: Tuple[int, ...]
    pi_of: Tuple[Fraction, ...]
    proximity: Fraction
    remoteness: Fraction
    avg_distance: Fraction
    centers: Tuple[int, ...]
    centroids: Tuple[int, ...]


@dataclasses.dataclass(frozen=True)
class DiametricDecomposition:
    '''A diametric path v_0..v_D of a tree, plus which path vertex each
    other vertex hangs from. component_of maps every vertex to an index
    into path (path vertices map to their own index); component_sizes
    counts only the non-path vertices hanging from each v_i.
    '''
    path: Tuple[int, ...]
    component_of: Mapping[int, int]
    component_sizes: Tuple[int, ...]

    def __post_init__(self):
        # Read-only view over a private copy
        object.__setattr__(
            self, 'component_of',
            MappingProxyType(dict(self.component_of)))

    @property
    def diameter(self):
        return len(self.path) - 1

    def members(self, i):
        '''Non-path vertices hanging from path[i], sorted.'''
        return tuple(sorted(
            v for v, index in self.component_of.items()
            if index == i and v != self.path[i]))

    def reversed(self):
        '''The same decomposition read from the other end of the path.'''
        last = self.diameter
        return DiametricDecomposition(
            path=tuple(reversed(self.path)),
            component_of={
                v: last - index for v, index in self.component_of.items()},
            component_sizes=tuple(reversed(self.component_sizes)))


def _argmin(values):
    best = min(values)
    return tuple(v for v, value in enumerate(values) if value == best)


def invariant_profile(g):
    '''Computes every invariant from a single distance matrix. Raises
    DegenerateGraph for the single vertex graph, since normalized
    transmissions divide by n-1.
    '''
    if g.n < 2:
        raise DegenerateGraph('invariant profiles need at least 2 vertices')

    dm = distance_matrix(g)
    n = g.n
    ecc_of = tuple(max(row) for row in dm.d)
    transmission_of = dm.row_sums()
    pi_of = tuple(Fraction(t, n - 1) for t in transmission_of)

    return InvariantProfile(
        n=n,
        m=g.m,
        ecc_of=ecc_of,
        radius=min(ecc_of),
        diameter=max(ecc_of),
        avg_ecc=Fraction(sum(ecc_of), n),
        transmission_of=transmission_of,
        pi_of=pi_of,
        proximity=min(pi_of),
        remoteness=max(pi_of),
        avg_distance=Fraction(sum(transmission_of), n * (n - 1)),
        centers=_argmin(ecc_of),
        centroids=_argmin(pi_of))


def profile_bindings(profile):
    '''Variable bindings for evaluating invariant expressions.'''
    return {
        'avg_distance': profile.avg_distance,
        'proximity': profile.proximity,
        'remoteness': profile.remoteness,
        'avg_ecc': profile.avg_ecc,
        'radius': Fraction(profile.radius),
        'diameter': Fraction(profile.diameter),
        'n': Fraction(profile.n),
        'm': Fraction(profile.m),
    }


def centroid(g):
    '''Centroidal vertices, sorted. On trees this uses the edge-split
    characterization: v is centroidal iff every edge at v leaves at
    least n/2 vertices on v's side. Anything else falls back to the
    argmin of the normalized transmission.
    '''
    if g.n == 1:
        return (0,)

    if not is_tree(g):
        return invariant_profile(g).centroids

    result = []
    for v in range(g.n):
        for w in g.neighbors(v):
            split = edge_split(g, (v, w))
            if 2 * split.n_u < g.n:
                break
        else:
            result.append(v)

    return tuple(result)


def center_set(g):
    dm = distance_matrix(g)
    return _argmin([max(row) for row in dm.d])


def wiener_index(g):
    '''Sum of distances over unordered pairs.'''
    return sum(distance_matrix(g).row_sums()) // 2


def is_caterpillar(g):
    '''A tree whose non-leaf vertices induce a path.'''
    if not is_tree(g):
        return False

    inner = {v for v in range(g.n) if g.degree(v) > 1}
    return all(
        sum(1 for w in g.neighbors(v) if w in inner) <= 2
        for v in inner)


def diametric_decomposition(g):
    '''Decomposes a tree along its diametric path whose endpoint pair
    (u, v), u < v, is lexicographically smallest; the path starts at u.
    '''
    if not is_tree(g):
        raise NotATree('diametric decompositions are only defined on trees')

    dm = distance_matrix(g)
    diameter = max(max(row) for row in dm.d)
    start, end = min(
        (u, v)
        for u in range(g.n)
        for v in range(u, g.n)
        if dm[u, v] == diameter)

    # Walk from end back to start along strictly decreasing distance. In a
    # tree the next vertex is unique.
    path = [end]
    while path[-1] != start:
        here = path[-1]
        path.append(next(
            w for w in g.neighbors(here)
            if dm[start, w] == dm[start, here] - 1))
    path.reverse()

    component_of = {v: i for i, v in enumerate(path)}
    queue = collections.deque(path)
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w not in component_of:
                component_of[w] = component_of[u]
                queue.append(w)

    sizes = [0] * len(path)
    for v, index in component_of.items():
        if v != path[index]:
            sizes[index] += 1

    return DiametricDecomposition(
        path=tuple(path),
        component_of=component_of,
        component_sizes=tuple(sizes))
