import io
import json

import pytest

from distinv.cli import EXIT_MISMATCH
from distinv.cli import EXIT_OK
from distinv.cli import EXIT_USAGE
from distinv.cli import run_cli
from distinv.codecs import read_edgelist
from distinv.config import TOOL_VERSION
from distinv.families import make_spider3
from distinv.graph import canonical_code

P5_PROFILE = '''\
n 5
m 4
radius 2
diameter 4
avg_ecc 16/5
proximity 3/2
remoteness 5/2
avg_distance 2/1
centers 2
centroids 2
'''

STAR_SEARCH = [
    'search', '--class', 'tree', '--n', '5',
    '--expr', 'avg_distance - proximity', '--maximize',
]


def _run(capsys, argv):
    status = run_cli(argv)
    captured = capsys.readouterr()
    return status, captured.out, captured.err


class TestInvariants:

    def test_family(self, capsys):
        status, out, __ = _run(
            capsys, ['invariants', '--family', 'path', '--n', '5'])
        assert status == EXIT_OK
        assert out == P5_PROFILE

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr(
            'sys.stdin', io.StringIO('5\n0 1\n1 2\n2 3\n3 4\n'))
        status, out, __ = _run(capsys, ['invariants', '--input', '-'])
        assert status == EXIT_OK
        assert out == P5_PROFILE

    def test_graph6_file(self, capsys, tmp_path):
        path = tmp_path / 'graphs.g6'
        path.write_text('DhC\nCl\n')
        status, out, __ = _run(
            capsys,
            ['invariants', '--input', str(path), '--format', 'graph6'])
        assert status == EXIT_OK
        assert out.startswith(P5_PROFILE)
        assert out.count('\nn ') == 1

    def test_json(self, capsys):
        status, out, __ = _run(
            capsys,
            ['invariants', '--family', 'path', '--n', '5', '--json'])
        assert status == EXIT_OK

        data = json.loads(out)
        assert data['kind'] == 'invariants'
        assert data['tool_version'] == TOOL_VERSION
        assert data['command'] == [
            'invariants', '--family', 'path', '--n', '5', '--json']
        assert data['profiles'][0]['remoteness'] == '5/2'

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / 'profile.txt'
        status, out, __ = _run(
            capsys,
            ['invariants', '--family', 'path', '--n', '5',
             '--output', str(path)])
        assert status == EXIT_OK
        assert out == ''
        assert path.read_text() == P5_PROFILE

    def test_bad_edge_list(self, capsys, tmp_path):
        path = tmp_path / 'bad.txt'
        path.write_text('3\n0 7\n')
        status, __, err = _run(capsys, ['invariants', '--input', str(path)])
        assert status == EXIT_USAGE
        assert 'distinv: error: line 2: ' in err

    def test_missing_input_file(self, capsys, tmp_path):
        status, __, err = _run(
            capsys,
            ['invariants', '--input', str(tmp_path / 'missing.txt')])
        assert status == EXIT_USAGE
        assert err.startswith('distinv: error: ')

    def test_needs_a_graph(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            run_cli(['invariants'])
        assert exc_info.value.code == EXIT_USAGE

        with pytest.raises(SystemExit):
            run_cli(['invariants', '--family', 'path'])


class TestFamily:

    def test_graph6(self, capsys):
        status, out, __ = _run(
            capsys,
            ['family', '--family', 'cycle', '--n', '4', '--format', 'graph6'])
        assert status == EXIT_OK
        assert out == 'Cl\n'

    def test_edge_list(self, capsys):
        status, out, __ = _run(
            capsys, ['family', '--family', 'spider3', '--n', '9'])
        assert status == EXIT_OK
        assert canonical_code(read_edgelist(out)) == \
            canonical_code(make_spider3(9))

    def test_json(self, capsys):
        status, out, __ = _run(
            capsys, ['family', '--family', 'broom', '--n', '7', '--json'])
        assert status == EXIT_OK
        data = json.loads(out)
        assert data['family'] == 'broom(7)'
        assert data['profiles'][0]['n'] == 7

    def test_domain_error(self, capsys):
        status, __, err = _run(
            capsys, ['family', '--family', 'spider4', '--n', '6'])
        assert status == EXIT_USAGE
        assert '4-leg spiders' in err

    def test_unknown_family(self):
        with pytest.raises(SystemExit) as exc_info:
            run_cli(['family', '--family', 'wheel', '--n', '6'])
        assert exc_info.value.code == EXIT_USAGE


class TestEnumerate:

    def test_count_only(self, capsys):
        status, out, __ = _run(
            capsys,
            ['enumerate', '--class', 'tree', '--n', '7', '--count-only'])
        assert status == EXIT_OK
        assert out == '11\n'

    def test_graph6_stream(self, capsys):
        status, out, __ = _run(
            capsys,
            ['enumerate', '--class', 'connected', '--n', '4',
             '--format', 'graph6'])
        assert status == EXIT_OK
        lines = out.splitlines()
        assert len(lines) == 6

    def test_sample_json(self, capsys):
        argv = ['enumerate', '--class', 'tree', '--n', '10',
                '--sample', '4', '--seed', '3', '--json']
        __, first, __ = _run(capsys, argv)
        __, second, __ = _run(capsys, argv)
        assert first == second

        enumeration = json.loads(first)['enumeration']
        assert enumeration['count'] == 4
        assert len(enumeration['graphs']) == 4

    def test_cap(self, capsys):
        status, __, err = _run(
            capsys, ['enumerate', '--class', 'connected', '--n', '9'])
        assert status == EXIT_USAGE
        assert 'distinv: error: ' in err


class TestSearch:

    def test_text(self, capsys):
        status, out, __ = _run(capsys, STAR_SEARCH)
        assert status == EXIT_OK
        first, *witnesses = out.splitlines()
        assert first == 'max 3/5'
        assert len(witnesses) == 1

    def test_minimize(self, capsys):
        status, out, __ = _run(
            capsys,
            ['search', '--class', 'tree', '--n', '7',
             '--expr', 'remoteness - radius', '--minimize'])
        assert status == EXIT_OK
        assert out.splitlines()[0] == 'min 1/6'

    def test_jobs_do_not_change_the_report(self, capsys):
        __, single, __ = _run(
            capsys, STAR_SEARCH + ['--json', '--jobs', '1'])
        __, several, __ = _run(
            capsys, STAR_SEARCH + ['--json', '--jobs=3'])
        assert single == several
        assert '--jobs' not in json.loads(single)['command']

    def test_timing(self, capsys):
        __, out, __ = _run(capsys, STAR_SEARCH + ['--json', '--timing'])
        assert json.loads(out)['timing_seconds'] >= 0

    def test_csv(self, capsys, tmp_path):
        path = tmp_path / 'witnesses.csv'
        status, out, __ = _run(capsys, STAR_SEARCH + ['--csv', str(path)])
        assert status == EXIT_OK
        assert out.startswith('max 3/5\n')

        header, row = path.read_text().splitlines()
        assert header == 'canonical_code,graph6,value'
        assert row.endswith(',3/5')

    @pytest.mark.parametrize(
        'expr',
        [
            'avg_distance -',
            'girth',
            '1 / (n - 5)',
        ]
    )
    def test_bad_expression(self, capsys, expr):
        status, __, err = _run(
            capsys,
            ['search', '--class', 'tree', '--n', '5',
             '--expr', expr, '--maximize'])
        assert status == EXIT_USAGE
        assert err.startswith('distinv: error: ')

    def test_needs_direction(self):
        with pytest.raises(SystemExit) as exc_info:
            run_cli(['search', '--class', 'tree', '--n', '5', '--expr', 'n'])
        assert exc_info.value.code == EXIT_USAGE


class TestVerify:

    def test_holds(self, capsys):
        status, out, __ = _run(
            capsys,
            ['verify', '--conjecture', 'con1-trees', '--min-n', '4',
             '--max-n', '7', '--assert'])
        assert status == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == 'n=4 extremal 1/2 family spider3 ok'
        assert lines[1] == 'n=5 extremal 3/5 family spider4 ok'
        assert len(lines) == 4

    def test_mismatch(self, capsys, caplog):
        argv = ['verify', '--conjecture', 'con3-trees',
                '--min-n', '3', '--max-n', '6']
        status, out, __ = _run(capsys, argv)
        assert status == EXIT_OK
        assert 'FAILS' in out

        with caplog.at_level('WARNING', logger='distinv.cli'):
            status, __, __ = _run(capsys, argv + ['--assert'])
        assert status == EXIT_MISMATCH
        assert 'con3-trees mismatches at n in [4, 5, 6]' in caplog.text

    def test_json_and_csv(self, capsys, tmp_path):
        path = tmp_path / 'report.csv'
        status, out, __ = _run(
            capsys,
            ['verify', '--conjecture', 'con2-trees', '--min-n', '4',
             '--max-n', '6', '--json', '--csv', str(path)])
        assert status == EXIT_OK

        conjecture = json.loads(out)['conjecture']
        assert conjecture['conjecture_id'] == 'con2-trees'
        assert [row['n'] for row in conjecture['rows']] == [4, 5, 6]
        assert len(path.read_text().splitlines()) == 4

    def test_empty_range(self):
        with pytest.raises(SystemExit) as exc_info:
            run_cli(['verify', '--conjecture', 'con1-trees',
                     '--min-n', '6', '--max-n', '4'])
        assert exc_info.value.code == EXIT_USAGE

    def test_cap(self, capsys):
        status, __, __ = _run(
            capsys,
            ['verify', '--conjecture', 'con1-graphs', '--min-n', '4',
             '--max-n', '8'])
        assert status == EXIT_USAGE


class TestTransform:

    def test_driver(self, capsys):
        status, out, __ = _run(
            capsys,
            ['transform', '--family', 'path', '--n', '9',
             '--driver', 'lbar-pi', '--assert'])
        assert status == EXIT_OK
        trace_line, edge_list = out.split('\n', 1)
        assert trace_line == 'END holds'
        assert canonical_code(read_edgelist(edge_list)) == \
            canonical_code(make_spider3(9))

    def test_checkpoint_values(self, capsys):
        status, out, __ = _run(
            capsys,
            ['transform', '--family', 'path', '--n', '7',
             '--driver', 'rho-r', '--json'])
        assert status == EXIT_OK
        data = json.loads(out)
        assert data['checkpoint_values'] == ['1/2', '1/6']
        assert [trace['rule_id'] for trace in data['traces']] == ['END']

    def test_rule(self, capsys):
        status, out, __ = _run(
            capsys,
            ['transform', '--family', 'broom', '--n', '6',
             '--rule', 't4', '--format', 'graph6'])
        assert status == EXIT_OK
        assert out.splitlines()[0] == 't4 holds'

    def test_identity_caterpillar(self, capsys):
        argv = ['transform', '--family', 'path', '--n', '5', '--rule', 't6']
        status, __, __ = _run(capsys, argv)
        assert status == EXIT_USAGE

        status, out, __ = _run(capsys, argv + ['--allow-identity'])
        assert status == EXIT_OK
        assert out.startswith('t6 ')

    def test_precondition(self, capsys):
        status, __, err = _run(
            capsys,
            ['transform', '--family', 'path', '--n', '7', '--rule', 't1'])
        assert status == EXIT_USAGE
        assert 'has_branching_vertex' in err

    def test_not_a_tree(self, capsys):
        status, __, __ = _run(
            capsys,
            ['transform', '--family', 'cycle', '--n', '6',
             '--driver', 'rho-r'])
        assert status == EXIT_USAGE

    def test_rule_or_driver(self):
        with pytest.raises(SystemExit):
            run_cli(['transform', '--family', 'path', '--n', '5'])
        with pytest.raises(SystemExit):
            run_cli(['transform', '--family', 'path', '--n', '5',
                     '--rule', 't1', '--driver', 'rho-r'])


class TestMisc:

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            run_cli(['--version'])
        assert exc_info.value.code == 0
        assert capsys.readouterr().out == f'distinv {TOOL_VERSION}\n'

    def test_bad_jobs(self):
        with pytest.raises(SystemExit) as exc_info:
            run_cli(STAR_SEARCH + ['--jobs', '0'])
        assert exc_info.value.code == EXIT_USAGE

    def test_no_csv_table(self, capsys):
        status, __, err = _run(
            capsys,
            ['invariants', '--family', 'path', '--n', '5', '--csv', '-'])
        assert status == EXIT_USAGE
        assert 'no CSV table' in err

    def test_unwritable_report(self, capsys, tmp_path):
        status, __, err = _run(
            capsys,
            STAR_SEARCH + ['--json', '--output',
                           str(tmp_path / 'missing' / 'out.json')])
        assert status == EXIT_USAGE
        assert 'could not write report' in err

    def test_log_level(self, capsys):
        status, __, __ = _run(capsys, STAR_SEARCH + ['--log-level', 'debug'])
        assert status == EXIT_OK

        with pytest.raises(SystemExit):
            run_cli(STAR_SEARCH + ['--log-level', 'chatty'])
