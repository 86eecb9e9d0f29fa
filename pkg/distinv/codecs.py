'''Text formats for graphs: graph6 (single-byte header only, so n <= 62)
and a plain edge list with '#' comments.
'''
import logging

from distinv.exceptions import EdgeListError
from distinv.exceptions import Graph6DecodeError
from distinv.exceptions import InvalidGraph
from distinv.graph import build_graph

logger = logging.getLogger(__name__)

GRAPH6_MAX_N = 62
_OFFSET = 63
FORMATS = ('edgelist', 'graph6')


def _pairs(n):
    '''Upper triangle in graph6 order: (0,1), (0,2), (1,2), (0,3), ...'''
    for j in range(1, n):
        for i in range(j):
            yield i, j


def _group_count(n):
    return -(-(n * (n - 1) // 2) // 6)


def encode_graph6(g):
    if g.n > GRAPH6_MAX_N:
        raise InvalidGraph(
            f'graph6 is only supported up to n={GRAPH6_MAX_N}')

    bits = [1 if g.has_edge(i, j) else 0 for i, j in _pairs(g.n)]
    bits += [0] * (-len(bits) % 6)
    chars = [chr(g.n + _OFFSET)]
    for start in range(0, len(bits), 6):
        value = 0
        for bit in bits[start:start + 6]:
            value = (value << 1) | bit
        chars.append(chr(value + _OFFSET))
    return ''.join(chars)


def decode_graph6(text):
    text = text.strip()
    if not text:
        raise Graph6DecodeError('empty graph6 string')

    try:
        raw = text.encode('ascii')
    except UnicodeEncodeError as exc:
        raise Graph6DecodeError(
            f'character {exc.start} is not ASCII') from exc

    for position, byte in enumerate(raw):
        if not _OFFSET <= byte <= 126:
            raise Graph6DecodeError(
                f'byte {position} out of range 63..126')

    n = raw[0] - _OFFSET
    if n == 0:
        raise Graph6DecodeError('graph6 string describes an empty graph')
    if n > GRAPH6_MAX_N:
        raise Graph6DecodeError(
            f'graph6 is only supported up to n={GRAPH6_MAX_N}')

    groups = raw[1:]
    expected = _group_count(n)
    if len(groups) < expected:
        raise Graph6DecodeError(
            f'truncated bit field: {len(groups)} of {expected} groups')
    if len(groups) > expected:
        raise Graph6DecodeError(
            f'{len(groups) - expected} trailing bytes after the bit field')

    bits = []
    for byte in groups:
        value = byte - _OFFSET
        bits.extend((value >> shift) & 1 for shift in range(5, -1, -1))

    edges = [pair for pair, bit in zip(_pairs(n), bits) if bit]
    return build_graph(n, edges)


def read_graph6_lines(text):
    '''Decodes one graph per non-empty line.'''
    return tuple(
        decode_graph6(line) for line in text.splitlines() if line.strip())


def _parse_ints(content, count, line):
    fields = content.split()
    if len(fields) != count:
        raise EdgeListError(
            f'expected {count} integer(s), got {content!r}', line)
    try:
        return [int(field) for field in fields]
    except ValueError as exc:
        raise EdgeListError(f'not an integer: {content!r}', line) from exc


def read_edgelist(text):
    '''First non-comment line is n, then one "u v" edge per line.'''
    n = None
    edges = []
    seen = set()
    for line_number, line in enumerate(text.splitlines(), start=1):
        content = line.strip()
        if not content or content.startswith('#'):
            continue

        if n is None:
            (n,) = _parse_ints(content, 1, line_number)
            if n < 1:
                raise EdgeListError(
                    f'vertex count must be positive, not {n}', line_number)
            continue

        u, v = _parse_ints(content, 2, line_number)
        for vertex in (u, v):
            if not 0 <= vertex < n:
                raise EdgeListError(
                    f'vertex {vertex} out of range 0..{n - 1}', line_number)
        if u == v:
            raise EdgeListError(f'self-loop at {u}', line_number)

        key = (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListError(f'duplicate edge {u} {v}', line_number)
        seen.add(key)
        edges.append(key)

    if n is None:
        raise EdgeListError('missing vertex count')

    return build_graph(n, edges)


def write_edgelist(g):
    lines = [str(g.n)]
    lines.extend(f'{u} {v}' for u, v in g.edges())
    return '\n'.join(lines) + '\n'


def read_graphs(text, fmt):
    '''All graphs in a document: one for an edge list, one per line for
    graph6.
    '''
    if fmt == 'edgelist':
        return (read_edgelist(text),)
    if fmt == 'graph6':
        return read_graph6_lines(text)
    raise ValueError(f'unknown graph format {fmt!r}')


def write_graph(g, fmt):
    if fmt == 'edgelist':
        return write_edgelist(g)
    if fmt == 'graph6':
        return encode_graph6(g) + '\n'
    raise ValueError(f'unknown graph format {fmt!r}')
