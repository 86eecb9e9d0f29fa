'''Immutable simple graphs on vertices 0..n-1, BFS distances, tree
predicates and canonical codes. Nothing in here ever mutates a graph:
transformations build new ones with Graph.with_edges.
'''
import collections
import dataclasses
import logging
from typing import FrozenSet
from typing import Iterable
from typing import Sequence
from typing import Tuple

from distinv.config import get_settings
from distinv.exceptions import CanonicalCapExceeded
from distinv.exceptions import DisconnectedGraph
from distinv.exceptions import InvalidGraph
from distinv.exceptions import NotAnEdge
from distinv.exceptions import NotATree
from distinv.utils import CanonicalCode

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def _normalize_edge(u, v):
    return (u, v) if u < v else (v, u)


@dataclasses.dataclass(frozen=True)
class Graph:
    '''Always construct these through build_graph (or the family
    constructors), which validate; the dataclass itself trusts its
    adjacency to be sorted, symmetric and loop-free.
    '''
    n: int
    adjacency: Tuple[Tuple[int, ...], ...]

    @property
    def m(self):
        return sum(len(neighbors) for neighbors in self.adjacency) // 2

    def edges(self):
        '''All edges as (u, v) with u < v, sorted.'''
        return tuple(
            (u, v)
            for u, neighbors in enumerate(self.adjacency)
            for v in neighbors
            if u < v)

    def neighbors(self, v):
        return self.adjacency[v]

    def degree(self, v):
        return len(self.adjacency[v])

    def has_edge(self, u, v):
        return 0 <= u < self.n and v in self.adjacency[u]

    def leaves(self):
        return tuple(v for v in range(self.n) if self.degree(v) == 1)

    def degree_sequence(self):
        return tuple(sorted(
            (len(neighbors) for neighbors in self.adjacency), reverse=True))

    def is_connected(self):
        seen = _reachable(self, 0)
        return len(seen) == self.n

    def with_edges(self, *, remove: Iterable[Edge] = (),
                   add: Iterable[Edge] = ()):
        '''Returns a new graph with the edges in remove deleted and the
        edges in add inserted (in that order). Removing a non-edge
        raises NotAnEdge; adding an existing edge raises InvalidGraph.
        '''
        edges = set(self.edges())
        for u, v in remove:
            key = _normalize_edge(u, v)
            if key not in edges:
                raise NotAnEdge(f'({u}, {v}) is not an edge')
            edges.remove(key)

        return build_graph(self.n, sorted(edges) + list(add))

    def relabel(self, permutation: Sequence[int]):
        '''Returns the isomorphic copy where vertex v becomes
        permutation[v].
        '''
        if sorted(permutation) != list(range(self.n)):
            raise InvalidGraph('relabeling must be a permutation of 0..n-1')

        return build_graph(
            self.n,
            [(permutation[u], permutation[v]) for u, v in self.edges()])


@dataclasses.dataclass(frozen=True)
class DistanceMatrix:
    n: int
    d: Tuple[Tuple[int, ...], ...]

    def __getitem__(self, uv):
        u, v = uv
        return self.d[u][v]

    def row_sums(self):
        return tuple(sum(row) for row in self.d)


@dataclasses.dataclass(frozen=True)
class EdgeSplit:
    '''The two sides of a tree with one edge deleted. side_u is the
    vertex set of the component containing edge[0].
    '''
    edge: Edge
    side_u: FrozenSet[int]
    n_u: int
    n_v: int


def build_graph(n, edges: Iterable[Edge]):
    '''Validates and builds a Graph on vertices 0..n-1.'''
    if not isinstance(n, int) or n < 1:
        raise InvalidGraph(f'vertex count must be a positive int, not {n!r}')

    adjacency = [set() for __ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidGraph(
                f'edge ({u}, {v}): vertex out of range 0..{n - 1}')
        if u == v:
            raise InvalidGraph(f'edge ({u}, {v}) is a self-loop')
        if v in adjacency[u]:
            raise InvalidGraph(f'edge ({u}, {v}) is a duplicate')

        adjacency[u].add(v)
        adjacency[v].add(u)

    return Graph(
        n=n, adjacency=tuple(tuple(sorted(nbrs)) for nbrs in adjacency))


def _reachable(g, source, *, skip_edge=None):
    seen = {source}
    queue = collections.deque([source])
    while queue:
        u = queue.popleft()
        for v in g.adjacency[u]:
            if skip_edge is not None and _normalize_edge(u, v) == skip_edge:
                continue
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def bfs_distances(g, v):
    '''Hop counts from v to every vertex. Raises DisconnectedGraph if
    anything is unreachable.
    '''
    dist = [-1] * g.n
    dist[v] = 0
    queue = collections.deque([v])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)

    if min(dist) < 0:
        raise DisconnectedGraph(
            f'vertex {dist.index(-1)} unreachable from {v}')

    return dist


def distance_matrix(g):
    return DistanceMatrix(
        n=g.n, d=tuple(tuple(bfs_distances(g, v)) for v in range(g.n)))


def is_tree(g):
    return g.m == g.n - 1 and g.is_connected()


def edge_split(g, e: Edge):
    if not is_tree(g):
        raise NotATree('edge splits are only defined on trees')

    u, v = e
    if not g.has_edge(u, v):
        raise NotAnEdge(f'({u}, {v}) is not an edge')

    side_u = frozenset(_reachable(g, u, skip_edge=_normalize_edge(u, v)))
    return EdgeSplit(
        edge=(u, v), side_u=side_u, n_u=len(side_u), n_v=g.n - len(side_u))


def tree_centers(g):
    '''Center(s) of a tree by repeatedly stripping leaves. One or two
    vertices; two means they're adjacent.
    '''
    degree = [g.degree(v) for v in range(g.n)]
    layer = [v for v in range(g.n) if degree[v] <= 1]
    remaining = g.n
    while remaining > 2:
        remaining -= len(layer)
        next_layer = []
        for leaf in layer:
            for w in g.adjacency[leaf]:
                degree[w] -= 1
                if degree[w] == 1:
                    next_layer.append(w)
        layer = next_layer

    return tuple(sorted(layer))


def rooted_tree_code(g, root):
    '''Parenthesized encoding of the tree hanging from root, with child
    encodings sorted so that isomorphic rooted trees agree.
    '''
    parent = {root: None}
    order = [root]
    for u in order:
        for w in g.adjacency[u]:
            if w not in parent:
                parent[w] = u
                order.append(w)

    child_codes = collections.defaultdict(list)
    for u in reversed(order):
        code = '(' + ''.join(sorted(child_codes[u])) + ')'
        if parent[u] is None:
            return code
        child_codes[parent[u]].append(code)


def _refine(g, colors):
    '''Colour refinement until stable. Colours are ranks of a key whose
    first component is the old colour, so the order of existing cells
    is preserved and only split further.
    '''
    while True:
        keys = [
            (colors[v], tuple(sorted(colors[w] for w in g.adjacency[v])))
            for v in range(g.n)]
        ranking = {key: rank for rank, key in enumerate(sorted(set(keys)))}
        refined = [ranking[key] for key in keys]
        if len(ranking) == len(set(colors)):
            return refined
        colors = refined


def _individualize(colors, v):
    keys = [(color, 0 if w == v else 1) for w, color in enumerate(colors)]
    ranking = {key: rank for rank, key in enumerate(sorted(set(keys)))}
    return [ranking[key] for key in keys]


def _pack_adjacency(g, order):
    '''Adjacency bits in graph6 pair order, (0,1),(0,2),(1,2),(0,3)...,
    for the graph relabeled so that order[i] becomes vertex i. Packed
    big-endian, so byte comparison is bit-string comparison.
    '''
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if g.has_edge(order[i], order[j]) else 0)

    packed = bytearray()
    for start in range(0, len(bits), 8):
        chunk = bits[start:start + 8]
        chunk += [0] * (8 - len(chunk))
        byte = 0
        for bit in chunk:
            byte = (byte << 1) | bit
        packed.append(byte)
    return bytes(packed)


def _are_twins(g, u, v):
    return (set(g.adjacency[u]) - {v}) == (set(g.adjacency[v]) - {u})


def _general_code(g):
    best = None
    stack = [_refine(g, [0] * g.n)]
    while stack:
        colors = stack.pop()
        counts = collections.Counter(colors)
        open_cells = [color for color, size in counts.items() if size > 1]
        if not open_cells:
            order = sorted(range(g.n), key=colors.__getitem__)
            candidate = _pack_adjacency(g, order)
            if best is None or candidate < best:
                best = candidate
            continue

        target = min(open_cells)
        representatives = []
        for v in range(g.n):
            if colors[v] != target:
                continue
            # Swapping twins within one cell is an automorphism that keeps
            # the partition, so their branches produce the same codes
            if any(_are_twins(g, v, rep) for rep in representatives):
                continue
            representatives.append(v)

        for v in representatives:
            stack.append(_refine(g, _individualize(colors, v)))

    return best


def canonical_code(g, *, cap=None):
    '''Isomorphism-invariant code. Trees of any order are encoded
    rooted at their center(s), taking the smaller encoding when there
    are two. Other graphs are searched over refined vertex orderings
    for the smallest adjacency bitstring, which is only allowed up to
    the canonical cap (DIT_CANONICAL_CAP by default).
    '''
    if is_tree(g):
        encoding = min(rooted_tree_code(g, c) for c in tree_centers(g))
        return CanonicalCode(b'T' + encoding.encode('ascii'))

    if cap is None:
        cap = get_settings().canonical_cap
    if g.n > cap:
        raise CanonicalCapExceeded(
            f'canonical codes for non-trees are capped at n={cap}')

    return CanonicalCode(b'G' + bytes([g.n]) + _general_code(g))
