'''Executable tree transformations with traces, and the three driver
loops that apply them until a terminal family is reached.

Every rule is a pure function from a graph to a TransformTrace. Rules
check their preconditions first and raise PreconditionFailed (naming
the failed condition) before touching anything, so drivers can use a
failed rule as a dispatch signal. Claims are the inequalities and
identities the rule is supposed to guarantee, evaluated exactly on the
before/after profiles; a trace with a false claim is a counterexample,
not an error, so rules never raise on them.

Tie-breaking is always by smallest vertex id, and diametric paths come
from invariants.diametric_decomposition, so the same input always gives
the same trace.
'''
import collections
import dataclasses
import logging
from fractions import Fraction
from typing import Any
from typing import Dict
from typing import Optional

from distinv.exceptions import DisconnectedGraph
from distinv.exceptions import NotATree
from distinv.exceptions import PreconditionFailed
from distinv.families import make_broom
from distinv.families import make_path
from distinv.families import make_spider3
from distinv.families import make_spider4
from distinv.graph import Graph
from distinv.graph import bfs_distances
from distinv.graph import build_graph
from distinv.graph import canonical_code
from distinv.graph import distance_matrix
from distinv.graph import is_tree
from distinv.invariants import InvariantProfile
from distinv.invariants import centroid
from distinv.invariants import diametric_decomposition
from distinv.invariants import invariant_profile
from distinv.invariants import is_caterpillar

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


def lbar_minus_pi(profile):
    return profile.avg_distance - profile.proximity


def ecc_minus_rho(profile):
    return profile.avg_ecc - profile.remoteness


def rho_minus_r(profile):
    return profile.remoteness - profile.radius


@dataclasses.dataclass(frozen=True)
class TransformTrace:
    '''One application of a rule. locals holds whatever the rule
    computed along the way (distances, partition sizes, moved vertices,
    bounds); claims maps each guaranteed relation to whether it held.
    claimed_delta, where a rule has one, is the guaranteed lower bound
    on the change of the rule's objective.

    checkpoint is only ever set by the remoteness - radius driver.
    '''
    rule_id: str
    before: Graph
    after: Graph
    before_profile: InvariantProfile
    after_profile: InvariantProfile
    locals: Dict[str, Any]
    preconditions: Dict[str, bool]
    claims: Dict[str, bool]
    claimed_delta: Optional[Fraction] = None
    checkpoint: bool = False

    @property
    def holds(self):
        return all(self.claims.values())


class _Preconditions(dict):
    '''Records each checked condition; the first false one raises.'''

    def __init__(self, rule_id):
        super().__init__()
        self.rule_id = rule_id

    def require(self, condition, ok):
        self[condition] = bool(ok)
        if not ok:
            raise PreconditionFailed(self.rule_id, condition)


def _require_tree(g):
    if not is_tree(g):
        raise NotATree('transformations are only defined on trees')


def _is_path(g):
    return is_tree(g) and all(g.degree(v) <= 2 for v in range(g.n))


def _trace(rule_id, g, after, pre, local_values, claims_for, *,
           before_profile=None, after_profile=None, claimed_delta=None):
    '''Builds the trace, computing claims from both profiles. The trace
    keeps its own copy of local_values.
    '''
    if before_profile is None:
        before_profile = invariant_profile(g)
    if after_profile is None:
        after_profile = invariant_profile(after)
    claims = claims_for(before_profile, after_profile)
    trace = TransformTrace(
        rule_id=rule_id,
        before=g,
        after=after,
        before_profile=before_profile,
        after_profile=after_profile,
        locals=dict(local_values),
        preconditions=dict(pre),
        claims=claims,
        claimed_delta=claimed_delta)

    logger.debug('%s applied: %s', rule_id, local_values)
    if not trace.holds:
        logger.warning(
            '%s claim failed: %s',
            rule_id, [name for name, ok in claims.items() if not ok])
    return trace


def _walk_pendant(g, hub, first):
    '''Walks the pendant path leaving hub through first. Returns its
    length and its far end.
    '''
    previous, here, length = hub, first, 1
    while g.degree(here) == 2:
        previous, here = here, next(
            w for w in g.neighbors(here) if w != previous)
        length += 1
    return length, here


def _off_path_neighbors(g, v, on_path):
    return [w for w in g.neighbors(v) if w not in on_path]


def t1_leaf_merge(g):
    '''Moves the shortest pendant path at the branching vertex v
    furthest from a centroidal vertex u onto the end of the next
    shortest one. Case I is u != v; Case II (u == v, so g is a spider)
    additionally needs at least four leaves.
    '''
    pre = _Preconditions('t1')
    _require_tree(g)
    branching = [v for v in range(g.n) if g.degree(v) >= 3]
    pre.require('has_branching_vertex', branching)

    dm = distance_matrix(g)
    u, v = None, None
    for candidate in centroid(g):
        furthest = min(branching, key=lambda b: (-dm[candidate, b], b))
        if u is None or dm[candidate, furthest] > dm[u, v]:
            u, v = candidate, furthest

    toward_u = None
    if u != v:
        toward_u = next(
            w for w in g.neighbors(v) if dm[u, w] == dm[u, v] - 1)

    legs = sorted(
        _walk_pendant(g, v, x) + (x,)
        for x in g.neighbors(v)
        if x != toward_u)
    # legs are (length, far end, first vertex); sorting by far end breaks
    # ties the same way as by first vertex, since legs are disjoint paths
    legs.sort(key=lambda leg: (leg[0], leg[2]))

    case = 'I' if u != v else 'II'
    if case == 'II':
        pre.require('four_leaves', len(g.leaves()) >= 4)

    (d2, __, x2), (d1, y1, __) = legs[0], legs[1]
    n = g.n
    pre.require('half_bound', 2 * (n - d1 - d2 - 1) >= n)

    after = g.with_edges(remove=[(v, x2)], add=[(x2, y1)])
    bound = Fraction(d1 * d2, n - 1) * (Fraction(2 * (n - d1 - d2 - 1), n) - 1)
    local_values = {
        'case': case, 'u': u, 'v': v, 'x2': x2, 'y1': y1,
        'd1': d1, 'd2': d2, 'bound': bound}

    def claims_for(before, after_profile):
        gain = lbar_minus_pi(after_profile) - lbar_minus_pi(before)
        return {
            'objective_non_decreasing': gain >= 0,
            'gain_at_least_bound': gain >= bound,
            'centroid_transmission': (
                after_profile.pi_of[u] ==
                before.pi_of[u] + Fraction(d1 * d2, n - 1)),
            'avg_distance_identity': (
                after_profile.avg_distance ==
                before.avg_distance +
                Fraction(2 * d1 * d2 * (n - d1 - d2 - 1), n * (n - 1))),
            'one_fewer_leaf': len(after.leaves()) == len(g.leaves()) - 1,
        }

    return _trace(
        't1', g, after, pre, local_values, claims_for,
        claimed_delta=max(bound, Fraction(0)))


def _spider_legs(g, hub):
    '''(length, far end) per leg, in neighbor order.'''
    return [_walk_pendant(g, hub, x) for x in g.neighbors(hub)]


def t2_balance(g):
    '''On a 3-leg spider whose center is its centroid, moves the far
    leaf of the longest leg onto the end of the shortest leg.
    '''
    pre = _Preconditions('t2')
    _require_tree(g)
    branching = [v for v in range(g.n) if g.degree(v) >= 3]
    pre.require(
        'three_leg_spider',
        len(branching) == 1 and len(g.leaves()) == 3)

    u = branching[0]
    n = g.n
    legs = _spider_legs(g, u)
    pre.require('legs_below_half', all(2 * length < n for length, __ in legs))

    d1, v1 = min(legs, key=lambda leg: (-leg[0], leg[1]))
    d2, v2 = min(legs, key=lambda leg: (leg[0], leg[1]))
    pre.require('unbalanced', d1 > d2 + 1)

    (v1_parent,) = g.neighbors(v1)
    after = g.with_edges(remove=[(v1, v1_parent)], add=[(v1, v2)])
    shift = d1 - d2 - 1
    remaining = n - d1 - d2 - 1
    local_values = {
        'u': u, 'v1': v1, 'v2': v2, 'd1': d1, 'd2': d2,
        'remaining': remaining,
        'legs_before': tuple(sorted(length for length, __ in legs)),
        'legs_after': tuple(sorted(
            length for length, __ in _spider_legs(after, u))),
    }

    def claims_for(before, after_profile):
        squares_before = sum(x * x for x in local_values['legs_before'])
        squares_after = sum(x * x for x in local_values['legs_after'])
        return {
            'objective_non_decreasing': (
                lbar_minus_pi(after_profile) >= lbar_minus_pi(before)),
            'centroid_transmission': (
                after_profile.pi_of[u] ==
                before.pi_of[u] - Fraction(shift, n - 1)),
            'avg_distance_identity': (
                after_profile.avg_distance ==
                before.avg_distance -
                Fraction(2 * shift * remaining, n * (n - 1))),
            'remaining_at_most_half': 2 * remaining <= n,
            'legs_more_balanced': squares_after < squares_before,
        }

    return _trace('t2', g, after, pre, local_values, claims_for)


def t3_bfs_reduce(g):
    '''Replaces a connected graph by its BFS tree rooted at the smallest
    centroidal vertex. Trees come back unchanged.
    '''
    pre = _Preconditions('t3')
    if not g.is_connected():
        raise DisconnectedGraph('BFS reduction needs a connected graph')
    pre.require('connected', True)

    before_profile = invariant_profile(g)
    root = before_profile.centroids[0]
    parent = {root: None}
    queue = collections.deque([root])
    while queue:
        here = queue.popleft()
        for w in g.neighbors(here):
            if w not in parent:
                parent[w] = here
                queue.append(w)

    after = build_graph(
        g.n, [(parent[v], v) for v in range(g.n) if v != root])
    local_values = {'root': root, 'removed_edges': g.m - after.m}

    def claims_for(before, after_profile):
        return {
            'spanning_tree': is_tree(after),
            'root_transmission_preserved': (
                after_profile.pi_of[root] == before.pi_of[root]),
            'proximity_non_increasing': (
                after_profile.proximity <= before.proximity),
            'avg_distance_non_decreasing': (
                after_profile.avg_distance >= before.avg_distance),
            'objective_non_decreasing': (
                lbar_minus_pi(after_profile) >= lbar_minus_pi(before)),
        }

    return _trace(
        't3', g, after, pre, local_values, claims_for,
        before_profile=before_profile)


def t4_leaf_to_diameter_end(g):
    '''When every branching vertex of the diametric path sits in its
    near half, moves the smallest off-path leaf to the far end v_D.
    '''
    pre = _Preconditions('t4')
    _require_tree(g)
    decomposition = diametric_decomposition(g)
    diameter = decomposition.diameter
    ends = {decomposition.path[0], decomposition.path[-1]}
    candidates = [w for w in g.leaves() if w not in ends]
    pre.require('leaf_off_path', candidates)

    oriented, j = None, None
    for option in (decomposition, decomposition.reversed()):
        branch_indices = [
            i for i, v in enumerate(option.path) if g.degree(v) >= 3]
        if 2 * max(branch_indices) <= diameter:
            oriented, j = option, max(branch_indices)
            break
    pre.require('far_half_bare', oriented is not None)

    n = g.n
    far_end = oriented.path[-1]
    w = min(candidates)
    (w_parent,) = g.neighbors(w)
    d_w = bfs_distances(g, far_end)[w]
    after = g.with_edges(remove=[(w, w_parent)], add=[(far_end, w)])

    ecc_gain = Fraction(2 * n - diameter - 1, 2 * n)
    remoteness_gain = Fraction(2 * n - diameter - 3, 2 * (n - 1))
    strict_gain = Fraction(diameter + 1, 2 * n * (n - 1))
    before_profile = invariant_profile(g)
    after_profile = invariant_profile(after)
    local_values = {
        'j': j, 'w': w, 'd_w': d_w, 'diameter': diameter,
        'far_end': far_end, 'ecc_gain_bound': ecc_gain,
        'remoteness_gain_bound': remoteness_gain,
        'remoteness_at_far_end': (
            before_profile.remoteness == before_profile.pi_of[far_end]),
        'remoteness_identity': (
            after_profile.remoteness ==
            before_profile.pi_of[far_end] +
            Fraction(n - d_w - 1, n - 1)),
    }

    def claims_for(before, after_profile):
        gain = ecc_minus_rho(after_profile) - ecc_minus_rho(before)
        return {
            'diameter_plus_one': after_profile.diameter == diameter + 1,
            'leaf_far_from_end': 2 * d_w >= diameter + 2,
            'ecc_bound': after_profile.avg_ecc >= before.avg_ecc + ecc_gain,
            'remoteness_bound': (
                after_profile.remoteness <=
                before.remoteness + remoteness_gain),
            'objective_non_decreasing': gain >= 0,
            'gain_at_least_bound': gain >= strict_gain,
        }

    return _trace(
        't4', g, after, pre, local_values, claims_for,
        before_profile=before_profile, after_profile=after_profile,
        claimed_delta=strict_gain)


def _subtree_through(g, root, first):
    '''Vertices reached from first without passing through root.'''
    seen = {first}
    queue = collections.deque([first])
    while queue:
        here = queue.popleft()
        for w in g.neighbors(here):
            if w != root and w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def t5_split_branches(g):
    '''For the closest pair of branching vertices v_j, v_k of the
    diametric path with j <= D/2 < k: everything at v_j except w_j and
    v_{j+1} is moved onto w_j (the smallest off-path neighbor of v_j),
    v_{j-1} included, and symmetrically at v_k. The diameter grows by 2.
    '''
    pre = _Preconditions('t5')
    _require_tree(g)
    decomposition = diametric_decomposition(g)
    path = decomposition.path
    diameter = decomposition.diameter
    branch_indices = [
        i for i in range(1, diameter) if g.degree(path[i]) >= 3]
    pairs = [
        (k - j, j, k)
        for j in branch_indices
        for k in branch_indices
        if 2 * j <= diameter < 2 * k]
    pre.require('branch_pair', pairs)

    __, j, k = min(pairs)
    on_path = set(path)
    vj, vk = path[j], path[k]
    wj = min(_off_path_neighbors(g, vj, on_path))
    wk = min(_off_path_neighbors(g, vk, on_path))
    moved_j = [x for x in g.neighbors(vj) if x not in (wj, path[j + 1])]
    moved_k = [x for x in g.neighbors(vk) if x not in (wk, path[k - 1])]
    after = g.with_edges(
        remove=[(x, vj) for x in moved_j] + [(x, vk) for x in moved_k],
        add=[(x, wj) for x in moved_j] + [(x, wk) for x in moved_k])

    n = g.n
    x2_set = _subtree_through(g, vj, wj)
    x4_set = _subtree_through(g, vk, wk)
    x3_set = {
        v for v, index in decomposition.component_of.items()
        if j < index < k} | {vj, vk}
    x1_set = {
        v for v, index in decomposition.component_of.items()
        if index < j or (index == j and v != vj and v not in x2_set)}
    x1, x2, x3, x4 = len(x1_set), len(x2_set), len(x3_set), len(x4_set)
    x5 = n - x1 - x2 - x3 - x4

    deltas = {
        'delta1': Fraction(2 * x1 + x2 + x3 + x4 + 2 * x5, n),
        'delta2': Fraction(-x2 + x3 + x4 + 2 * x5, n - 1),
        'delta3': Fraction(-x1 + x5, n - 1),
        'delta4': Fraction(x1 + x5, n - 1),
        'delta2_mirrored': Fraction(-x4 + x3 + x2 + 2 * x1, n - 1),
        'delta3_mirrored': Fraction(-x5 + x1, n - 1),
    }
    local_values = {
        'j': j, 'k': k, 'w_j': wj, 'w_k': wk,
        'x1': x1, 'x2': x2, 'x3': x3, 'x4': x4, 'x5': x5,
        **deltas,
    }

    def claims_for(before, after_profile):
        delta1 = deltas['delta1']
        return {
            'diameter_plus_two': after_profile.diameter == diameter + 2,
            'ecc_identity': after_profile.avg_ecc == before.avg_ecc + delta1,
            'delta1_dominates': all(
                delta1 >= value for value in deltas.values()),
            'per_vertex_gap_non_decreasing': all(
                after_profile.avg_ecc - after_profile.pi_of[v] >=
                before.avg_ecc - before.pi_of[v]
                for v in range(n)),
            'objective_non_decreasing': (
                ecc_minus_rho(after_profile) >= ecc_minus_rho(before)),
        }

    return _trace('t5', g, after, pre, local_values, claims_for)


def _deepest_inner_vertex(g, decomposition):
    '''Finds the first component (by path index) of height at least 2,
    and in it the non-leaf vertex furthest from the path, smallest id on
    ties. Returns (vertex, its leaf children, its parent), or None for a
    caterpillar.
    '''
    for i, root in enumerate(decomposition.path):
        depth = {root: 0}
        queue = collections.deque([root])
        while queue:
            here = queue.popleft()
            for w in g.neighbors(here):
                if w not in depth and decomposition.component_of[w] == i and \
                        w not in decomposition.path:
                    depth[w] = depth[here] + 1
                    queue.append(w)

        inner = [
            v for v in depth
            if v != root and g.degree(v) >= 2]
        if inner:
            v = min(inner, key=lambda x: (-depth[x], x))
            children = sorted(
                w for w in g.neighbors(v) if depth.get(w) == depth[v] + 1)
            (parent,) = [
                w for w in g.neighbors(v) if depth.get(w) == depth[v] - 1]
            return v, tuple(children), parent

    return None


def t6_caterpillarize(g, *, allow_identity=False):
    '''Repeatedly moves the leaf children of the deepest off-path
    non-leaf vertex onto its parent, until g is a caterpillar.
    '''
    pre = _Preconditions('t6')
    _require_tree(g)
    before_profile = invariant_profile(g)

    if is_caterpillar(g):
        if not allow_identity:
            pre.require('not_caterpillar', False)

        return _trace(
            't6', g, g, pre, {'identity': True, 'steps': ()},
            lambda before, after_profile: {
                'diameter_preserved': True,
                'radius_preserved': True,
                'remoteness_non_increasing': True,
                'caterpillar_reached': True,
            },
            before_profile=before_profile)

    pre['not_caterpillar'] = True
    current = g
    steps = []
    step_remoteness = [before_profile.remoteness]
    while True:
        found = _deepest_inner_vertex(
            current, diametric_decomposition(current))
        if found is None:
            break

        v, children, parent = found
        current = current.with_edges(
            remove=[(w, v) for w in children],
            add=[(w, parent) for w in children])
        steps.append({'v': v, 'leaves': children, 'u': parent})
        step_remoteness.append(invariant_profile(current).remoteness)

    local_values = {'identity': False, 'steps': tuple(steps)}

    def claims_for(before, after_profile):
        return {
            'diameter_preserved': after_profile.diameter == before.diameter,
            'radius_preserved': after_profile.radius == before.radius,
            'remoteness_non_increasing': (
                after_profile.remoteness <= before.remoteness),
            'remoteness_non_increasing_each_step': all(
                later <= earlier
                for earlier, later in zip(
                    step_remoteness, step_remoteness[1:])),
            'caterpillar_reached': is_caterpillar(current),
        }

    return _trace(
        't6', g, current, pre, local_values, claims_for,
        before_profile=before_profile)


def _centroid_orientation(g, decomposition, centroids, *, mode):
    '''Finds an orientation of the diametric path in which the
    centroid(s) sit at v_j (and v_{j+1}) and the remaining spine is bare
    in the sense of mode: 'far' means deg(v_k) <= 2 for all k > j,
    'others' means for every k outside {j, j+1}. Returns
    (decomposition, j) or None.
    '''
    for option in (decomposition, decomposition.reversed()):
        index = {v: i for i, v in enumerate(option.path)}
        if any(c not in index for c in centroids):
            return None

        positions = sorted(index[c] for c in centroids)
        j = positions[0]
        if len(positions) == 2 and positions[1] != j + 1:
            return None

        if mode == 'far':
            bare = range(j + 1, len(option.path))
        else:
            bare = [
                k for k in range(len(option.path))
                if k not in (j, j + len(positions) - 1)]

        if all(g.degree(option.path[k]) <= 2 for k in bare):
            return option, j

    return None


def _require_extension_shape(pre, g, *, pair):
    _require_tree(g)
    pre.require('caterpillar', is_caterpillar(g))
    pre.require('not_path', not _is_path(g))
    centroids = centroid(g)
    if pair:
        pre.require('two_centroids', len(centroids) == 2)
    else:
        pre.require('single_centroid', len(centroids) == 1)
    return centroids


def t7_extend_single_centroid(g):
    '''Single centroid v_j with a bare far side. If v_j has degree 2, a
    leaf w is spliced into v_{j-1} v_j. Otherwise a leaf w of v_j is
    spliced into v_j v_{j+1}, and enough other leaves of v_j follow it
    onto w that both sides stay within (n-1)/2.
    '''
    pre = _Preconditions('t7')
    centroids = _require_extension_shape(pre, g, pair=False)
    found = _centroid_orientation(
        g, diametric_decomposition(g), centroids, mode='far')
    pre.require('far_side_bare', found is not None)

    decomposition, j = found
    path = decomposition.path
    on_path = set(path)
    vj = path[j]
    n = g.n
    local_values = {'j': j}

    if g.degree(vj) == 2:
        ends = {path[0], path[-1]}
        w = min(leaf for leaf in g.leaves() if leaf not in ends)
        (w_parent,) = g.neighbors(w)
        after = g.with_edges(
            remove=[(w, w_parent), (path[j - 1], vj)],
            add=[(path[j - 1], w), (w, vj)])
        local_values.update(case='degree_two', w=w)
        split_claims = {}

    else:
        w = min(_off_path_neighbors(g, vj, on_path))
        others = sorted(
            x for x in _off_path_neighbors(g, vj, on_path) if x != w)
        left = sum(
            1 + size for size in decomposition.component_sizes[:j])
        right = sum(
            1 + size for size in decomposition.component_sizes[j + 1:])
        limit = (n - 1) // 2
        moved = []
        for x in others:
            if right + len(moved) >= limit:
                break
            moved.append(x)

        left_size = left + len(others) - len(moved)
        right_size = right + len(moved)
        after = g.with_edges(
            remove=[(vj, path[j + 1])] + [(vj, x) for x in moved],
            add=[(w, path[j + 1])] + [(w, x) for x in moved])
        local_values.update(
            case='branching', w=w, moved=tuple(moved),
            left_size=left_size, right_size=right_size)
        split_claims = {
            'left_within_half': 2 * left_size <= n - 1,
            'right_within_half': 2 * right_size <= n - 1,
        }

    def claims_for(before, after_profile):
        return {
            'diameter_plus_one': after_profile.diameter == before.diameter + 1,
            'remoteness_within_half': (
                after_profile.remoteness <= before.remoteness + HALF),
            **split_claims,
        }

    return _trace(
        't7', g, after, pre, local_values, claims_for, claimed_delta=HALF)


def t8_extend_two_centroids(g):
    '''Centroid pair v_j, v_{j+1} with a bare far side: the smallest
    off-path leaf is spliced in between them.
    '''
    pre = _Preconditions('t8')
    centroids = _require_extension_shape(pre, g, pair=True)
    found = _centroid_orientation(
        g, diametric_decomposition(g), centroids, mode='far')
    pre.require('far_side_bare', found is not None)

    decomposition, j = found
    path = decomposition.path
    ends = {path[0], path[-1]}
    candidates = [leaf for leaf in g.leaves() if leaf not in ends]
    pre.require('leaf_off_path', candidates)

    w = min(candidates)
    (w_parent,) = g.neighbors(w)
    vj, vj1 = path[j], path[j + 1]
    after = g.with_edges(
        remove=[(w, w_parent), (vj, vj1)], add=[(vj, w), (w, vj1)])
    after_profile = invariant_profile(after)
    local_values = {
        'j': j, 'w': w,
        'remoteness_at_far_end': (
            after_profile.remoteness == after_profile.pi_of[path[-1]]),
    }

    def claims_for(before, after_profile):
        return {
            'diameter_plus_one': after_profile.diameter == before.diameter + 1,
            'remoteness_within_half': (
                after_profile.remoteness <= before.remoteness + HALF),
        }

    return _trace(
        't8', g, after, pre, local_values, claims_for,
        after_profile=after_profile, claimed_delta=HALF)


def t9_rebalance_centroid_leaves(g):
    '''Centroid pair of unequal degrees, rest of the spine bare: the
    off-path leaves of the centroid closer to its path end move over to
    the other centroid.
    '''
    pre = _Preconditions('t9')
    centroids = _require_extension_shape(pre, g, pair=True)
    found = _centroid_orientation(
        g, diametric_decomposition(g), centroids, mode='others')
    pre.require('others_bare', found is not None)

    decomposition, j = found
    diameter = decomposition.diameter
    pre.require(
        'unequal_degrees',
        g.degree(decomposition.path[j]) != g.degree(decomposition.path[j + 1]))

    if j > diameter - j - 1:
        decomposition, j = decomposition.reversed(), diameter - j - 1
    path = decomposition.path
    d1, d2 = j, diameter - j - 1
    vj, vj1 = path[j], path[j + 1]
    moved = sorted(_off_path_neighbors(g, vj, set(path)))
    after = g.with_edges(
        remove=[(x, vj) for x in moved], add=[(x, vj1) for x in moved])
    local_values = {'j': j, 'd1': d1, 'd2': d2, 'moved': tuple(moved)}

    def claims_for(before, after_profile):
        return {
            'd1_less_than_d2': d1 < d2,
            'diameter_preserved': after_profile.diameter == before.diameter,
            'remoteness_non_increasing': (
                after_profile.remoteness <= before.remoteness),
        }

    return _trace('t9', g, after, pre, local_values, claims_for)


def t10_double_extend_equal(g):
    '''Centroid pair of equal degrees, rest of the spine bare: one leaf
    from each centroid is spliced in between them (v_j w1 w2 v_{j+1}),
    then the remaining leaves of v_j / v_{j+1} are rehung onto w1 / w2.
    '''
    pre = _Preconditions('t10')
    centroids = _require_extension_shape(pre, g, pair=True)
    found = _centroid_orientation(
        g, diametric_decomposition(g), centroids, mode='others')
    pre.require('others_bare', found is not None)

    decomposition, j = found
    path = decomposition.path
    vj, vj1 = path[j], path[j + 1]
    pre.require('equal_degrees', g.degree(vj) == g.degree(vj1))

    on_path = set(path)
    leaves_j = sorted(_off_path_neighbors(g, vj, on_path))
    leaves_j1 = sorted(_off_path_neighbors(g, vj1, on_path))
    pre.require('pendant_leaves', leaves_j and leaves_j1)

    w1, rest1 = leaves_j[0], leaves_j[1:]
    w2, rest2 = leaves_j1[0], leaves_j1[1:]
    step = g.with_edges(
        remove=[(vj1, w2), (vj, vj1)], add=[(w1, w2), (w2, vj1)])
    after = step.with_edges(
        remove=[(x, vj) for x in rest1] + [(x, vj1) for x in rest2],
        add=[(x, w1) for x in rest1] + [(x, w2) for x in rest2])
    step_profile = invariant_profile(step)
    after_profile = invariant_profile(after)
    local_values = {
        'j': j, 'd1': j, 'd2': decomposition.diameter - j - 1,
        'w1': w1, 'w2': w2, 'rehung': tuple(rest1 + rest2),
        'step_diameter': step_profile.diameter,
        'step_radius': step_profile.radius,
        'step_remoteness': step_profile.remoteness,
        'rehang_keeps_radius': after_profile.radius == step_profile.radius,
        'rehang_keeps_remoteness': (
            after_profile.remoteness == step_profile.remoteness),
    }

    def claims_for(before, after_profile):
        return {
            'diameter_plus_two': step_profile.diameter == before.diameter + 2,
            'radius_plus_one': step_profile.radius == before.radius + 1,
            'remoteness_within_one': (
                step_profile.remoteness <= before.remoteness + 1),
            'objective_non_increasing': (
                rho_minus_r(after_profile) <= rho_minus_r(before)),
        }

    return _trace(
        't10', g, after, pre, local_values, claims_for,
        after_profile=after_profile)


def _extension_applies(g):
    '''Whether t7, t8 or t9/t10 can be dispatched on a non-path
    caterpillar without shifting leaves first.
    '''
    centroids = centroid(g)
    decomposition = diametric_decomposition(g)
    if _centroid_orientation(g, decomposition, centroids, mode='far'):
        return True
    if len(centroids) == 2:
        return _centroid_orientation(
            g, decomposition, centroids, mode='others') is not None
    return False


def shift_leaves(g):
    '''Moves one leaf from the leftmost leaf-bearing spine vertex v_k to
    v_{k+1} and one from the rightmost v_l to v_{l-1}, repeatedly, until
    one of the single extensions applies. Any caterpillar where none
    applies has leaves on both sides of its centroid(s), so l >= k + 2
    and the sum of squared distances from the path ends strictly drops.
    '''
    pre = _Preconditions('shift')
    _require_tree(g)
    pre.require('caterpillar', is_caterpillar(g))
    pre.require('not_path', not _is_path(g))
    pre.require('no_extension_applies', not _extension_applies(g))

    current = g
    moves = []
    while not _extension_applies(current):
        path = diametric_decomposition(current).path
        on_path = set(path)
        bearing = [
            i for i in range(1, len(path) - 1)
            if _off_path_neighbors(current, path[i], on_path)]
        k, l = bearing[0], bearing[-1]
        leaf_k = min(_off_path_neighbors(current, path[k], on_path))
        leaf_l = min(_off_path_neighbors(current, path[l], on_path))
        current = current.with_edges(
            remove=[(leaf_k, path[k]), (leaf_l, path[l])],
            add=[(leaf_k, path[k + 1]), (leaf_l, path[l - 1])])
        moves.append({'leaf': leaf_k, 'from': k, 'to': k + 1})
        moves.append({'leaf': leaf_l, 'from': l, 'to': l - 1})

    def claims_for(before, after_profile):
        return {
            'diameter_preserved': after_profile.diameter == before.diameter,
            'radius_preserved': after_profile.radius == before.radius,
            'remoteness_non_increasing': (
                after_profile.remoteness <= before.remoteness),
        }

    return _trace('shift', g, current, pre, {'moves': tuple(moves)},
                  claims_for)


RULES = {
    't1': t1_leaf_merge,
    't2': t2_balance,
    't3': t3_bfs_reduce,
    't4': t4_leaf_to_diameter_end,
    't5': t5_split_branches,
    't6': t6_caterpillarize,
    't7': t7_extend_single_centroid,
    't8': t8_extend_two_centroids,
    't9': t9_rebalance_centroid_leaves,
    't10': t10_double_extend_equal,
    'shift': shift_leaves,
}


def _terminal_comparison(g, candidates, objective, *, maximize):
    '''Compares g with each (family id, graph) candidate on objective.
    Returns an END trace moving to the best candidate (first listed wins
    ties), or None if g is already as good as all of them.
    '''
    before_profile = invariant_profile(g)
    current = objective(before_profile)
    profiles = {
        family_id: (graph, invariant_profile(graph))
        for family_id, graph in candidates}
    values = {
        family_id: objective(profile)
        for family_id, (__, profile) in profiles.items()}

    pick = max if maximize else min
    best_id = pick(values, key=values.__getitem__)
    if values[best_id] == current:
        return None

    best_graph, best_profile = profiles[best_id]
    if maximize:
        improves = values[best_id] > current
    else:
        improves = values[best_id] < current

    logger.info(
        'Terminal comparison moves to %s: %s -> %s',
        best_id, current, values[best_id])
    return TransformTrace(
        rule_id='END',
        before=g,
        after=best_graph,
        before_profile=before_profile,
        after_profile=best_profile,
        locals={'values': values, 'chosen': best_id, 'current': current},
        preconditions={},
        claims={'objective_improves': improves})


def drive_max_avgdist_minus_proximity(g):
    '''Leaf merges (t1) and balancing (t2) until a path, a balanced
    3-leg spider or a balanced 4-leg spider is reached, then a terminal
    comparison against the other terminal families.
    '''
    _require_tree(g)
    n = g.n
    traces = []
    current = g
    if n >= 4:
        spider3_code = canonical_code(make_spider3(n))
        while not _is_path(current) and \
                canonical_code(current) != spider3_code:
            try:
                trace = t1_leaf_merge(current)
            except PreconditionFailed:
                if len(current.leaves()) != 3:
                    # Four equal legs; nothing merges without losing
                    break
                trace = t2_balance(current)

            traces.append(trace)
            current = trace.after

        candidates = [('spider3', make_spider3(n))]
        if n % 4 == 1:
            candidates.append(('spider4', make_spider4((n - 1) // 4)))
        candidates.append(('path', make_path(n)))
        terminal = _terminal_comparison(
            current, candidates, lbar_minus_pi, maximize=True)
        if terminal is not None:
            traces.append(terminal)

    logger.info(
        'avg_distance - proximity driver finished after %d steps',
        len(traces))
    return traces


def drive_max_ecc_minus_remoteness(g):
    '''t4 while the far half of the diametric path is bare, t5
    otherwise, until g is a path.
    '''
    _require_tree(g)
    traces = []
    current = g
    while not _is_path(current):
        try:
            trace = t4_leaf_to_diameter_end(current)
        except PreconditionFailed:
            trace = t5_split_branches(current)
        traces.append(trace)
        current = trace.after

    logger.info(
        'avg_ecc - remoteness driver finished after %d steps', len(traces))
    return traces


def _single_extension(g):
    if len(centroid(g)) == 1:
        return [t7_extend_single_centroid(g)]

    try:
        return [t8_extend_two_centroids(g)]
    except PreconditionFailed:
        pass

    try:
        return [t10_double_extend_equal(g)]
    except PreconditionFailed as exc:
        if exc.condition != 'equal_degrees':
            raise

    first = t9_rebalance_centroid_leaves(g)
    return [first] + _single_extension(first.after)


def drive_min_remoteness_minus_radius(g):
    '''Caterpillar reduction (t6), then diameter extensions (shifting
    leaves first where needed) until a path, then a terminal comparison
    against the broom. Traces right after a radius increase, and the
    last trace, are marked as checkpoints.
    '''
    _require_tree(g)
    n = g.n
    traces = []
    current = g
    if not is_caterpillar(current):
        traces.append(t6_caterpillarize(current))
        current = traces[-1].after

    while not _is_path(current):
        if not _extension_applies(current):
            traces.append(shift_leaves(current))
            current = traces[-1].after

        for trace in _single_extension(current):
            traces.append(trace)
            current = trace.after

    candidates = [('path', make_path(n))]
    if n >= 4:
        candidates.append(('broom', make_broom(n)))
    if n >= 2:
        terminal = _terminal_comparison(
            current, candidates, rho_minus_r, maximize=False)
        if terminal is not None:
            traces.append(terminal)

    marked = [
        dataclasses.replace(
            trace,
            checkpoint=(
                trace.after_profile.radius > trace.before_profile.radius))
        for trace in traces]
    if marked:
        marked[-1] = dataclasses.replace(marked[-1], checkpoint=True)

    logger.info(
        'remoteness - radius driver finished after %d steps', len(marked))
    return marked


DRIVERS = {
    'lbar-pi': drive_max_avgdist_minus_proximity,
    'ecc-rho': drive_max_ecc_minus_remoteness,
    'rho-r': drive_min_remoteness_minus_radius,
}


def checkpoint_values(g, traces):
    '''remoteness - radius of g and of every checkpoint trace's result.'''
    values = [rho_minus_r(invariant_profile(g))]
    values.extend(
        rho_minus_r(trace.after_profile)
        for trace in traces
        if trace.checkpoint)
    return values
