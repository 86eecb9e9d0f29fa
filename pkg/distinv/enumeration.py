'''Exhaustive, isomorphism-free enumeration of the graph classes that
searches and verifications run over: free trees, caterpillars and
small connected graphs.

Each class is memoized per n through distinv.cache, keyed by canonical
code, and always handed out sorted by canonical code, so anything that
reduces over a class sees the same order every time.
'''
import dataclasses
import itertools
import logging
import random

from distinv.cache import UpsertOnlyCache
from distinv.cache import cacheable
from distinv.cache import collect_through_cache
from distinv.config import get_settings
from distinv.exceptions import CapExceeded
from distinv.exceptions import InvalidGraph
from distinv.graph import build_graph
from distinv.graph import canonical_code
from distinv.graph import rooted_tree_code
from distinv.invariants import is_caterpillar

logger = logging.getLogger(__name__)

GRAPH_CLASSES = ('tree', 'caterpillar', 'connected')


def class_cap(class_id, *, allow_large=False):
    settings = get_settings()
    if class_id in ('tree', 'caterpillar'):
        return settings.tree_cap
    if class_id == 'connected':
        if allow_large:
            return settings.connected_override_cap
        return settings.connected_cap
    raise ValueError(f'unknown graph class {class_id!r}')


def _check_order(class_id, n, cap):
    if not isinstance(n, int) or n < 1:
        raise InvalidGraph(f'vertex count must be a positive int, not {n!r}')
    if n > cap:
        raise CapExceeded(f'{class_id} enumeration is capped at n={cap}')


def _level_sequences(n):
    '''Canonical level sequences of all rooted trees on n vertices, in
    decreasing lexicographic order, starting from the path. Each rooted
    tree comes up exactly once.
    '''
    levels = list(range(n))
    while True:
        yield tuple(levels)

        p = max((i for i in range(n) if levels[i] > 1), default=None)
        if p is None:
            return

        q = max(i for i in range(p) if levels[i] == levels[p] - 1)
        gap = p - q
        for i in range(p, n):
            levels[i] = levels[i - gap]


def _tree_from_levels(levels):
    '''Vertex i hangs from the last earlier vertex one level up.'''
    last_at_level = {}
    edges = []
    for v, level in enumerate(levels):
        if level:
            edges.append((last_at_level[level - 1], v))
        last_at_level[level] = v
    return build_graph(len(levels), edges)


def _root_branch_sizes(levels):
    '''Sizes of the subtrees hanging from the root, with the index of
    each subtree's top vertex.
    '''
    branches = []
    for v, level in enumerate(levels):
        if level == 1:
            branches.append([v, 0])
        if level >= 1:
            branches[-1][1] += 1
    return branches


@cacheable(UpsertOnlyCache, cache_key=canonical_code)
def _centroid_rooted_trees(n):
    '''Free trees as the rooted trees whose root is a centroid. When a
    tree has two centroids only the rooting with the larger rooted code
    is kept, unless both rootings are the same rooted tree.
    '''
    for levels in _level_sequences(n):
        branches = _root_branch_sizes(levels)
        if any(2 * size > n for __, size in branches):
            continue

        tree = _tree_from_levels(levels)
        halves = [top for top, size in branches if 2 * size == n]
        if halves:
            (other,) = halves
            if rooted_tree_code(tree, 0) < rooted_tree_code(tree, other):
                continue

        yield tree


@cacheable(UpsertOnlyCache, cache_key=canonical_code)
def _augmented_connected(n):
    '''Every connected graph on n vertices has a vertex whose removal
    keeps it connected, so adding a vertex with every nonempty
    neighborhood to each connected graph on n-1 vertices reaches all of
    them. Duplicates collapse on the cache key.
    '''
    if n == 1:
        yield build_graph(1, [])
        return

    for smaller in collect_through_cache(_augmented_connected, n - 1).values():
        for size in range(1, n):
            for neighborhood in itertools.combinations(range(n - 1), size):
                yield build_graph(
                    n,
                    list(smaller.edges()) +
                    [(v, n - 1) for v in neighborhood])


def _sorted_class(generator, n):
    items = collect_through_cache(generator, n)
    return tuple(items[code] for code in sorted(items))


def free_trees(n):
    '''One tree per isomorphism class on n vertices, sorted by
    canonical code.
    '''
    _check_order('tree', n, class_cap('tree'))
    return _sorted_class(_centroid_rooted_trees, n)


def caterpillars(n):
    _check_order('caterpillar', n, class_cap('caterpillar'))
    return tuple(
        tree for tree in _sorted_class(_centroid_rooted_trees, n)
        if is_caterpillar(tree))


def connected_graphs(n, *, allow_large=False):
    '''One connected graph per isomorphism class on n vertices, sorted
    by canonical code. Above the connected cap only with allow_large.
    '''
    _check_order(
        'connected', n, class_cap('connected', allow_large=allow_large))
    return _sorted_class(_augmented_connected, n)


_GENERATORS = {
    'tree': free_trees,
    'caterpillar': caterpillars,
    'connected': connected_graphs,
}


@dataclasses.dataclass(frozen=True)
class GraphClass:
    class_id: str
    n: int
    allow_large: bool = False

    def __post_init__(self):
        if self.class_id not in _GENERATORS:
            raise ValueError(f'unknown graph class {self.class_id!r}')

    @property
    def cap(self):
        return class_cap(self.class_id, allow_large=self.allow_large)

    def graphs(self):
        if self.class_id == 'connected':
            return connected_graphs(self.n, allow_large=self.allow_large)
        return _GENERATORS[self.class_id](self.n)

    def __str__(self):
        return f'{self.class_id}({self.n})'


def sample_class(graph_class, k, seed):
    '''Reproducible random sample of k graphs of the class (all of them
    if there are fewer), kept in canonical code order.
    '''
    graphs = graph_class.graphs()
    rng = random.Random(seed)
    chosen = sorted(rng.sample(range(len(graphs)), min(k, len(graphs))))
    logger.debug(
        'Sampled %d of %d graphs from %s', len(chosen), len(graphs),
        graph_class)
    return tuple(graphs[i] for i in chosen)
