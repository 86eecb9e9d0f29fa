import json
from fractions import Fraction

import pydantic
import pytest

from distinv.codecs import encode_graph6
from distinv.config import TOOL_VERSION
from distinv.engine import BUILTIN_CONJECTURES
from distinv.engine import search_extremal
from distinv.engine import verify_conjecture
from distinv.enumeration import GraphClass
from distinv.exceptions import ReportWriteError
from distinv.families import make_cycle
from distinv.families import make_path
from distinv.families import make_spider4
from distinv.graph import canonical_code
from distinv.report import ConjectureReportModel
from distinv.report import ConjectureRowModel
from distinv.report import ExtremalModel
from distinv.report import ProfileModel
from distinv.report import ReportDocument
from distinv.report import ReportSink
from distinv.report import TraceModel
from distinv.report import render_csv
from distinv.report import render_json
from distinv.report import write_report
from distinv.transforms import DRIVERS
from distinv.utils import CanonicalCode

CONJECTURE_HEADER = (
    'n,extremal_value,bound_value,family_id,family_value,'
    'family_is_extremal,bound_respected,bound_tight,class_size,witnesses')


def _profile_document():
    return ReportDocument(
        command=['invariants', '--family', 'path', '--n', '5'],
        kind='invariants',
        profiles=[ProfileModel.from_graph(make_path(5))])


def _conjecture_document():
    rows = [
        ConjectureRowModel(
            n=3,
            extremal_value=Fraction(1, 6),
            class_size=2,
            witnesses=[canonical_code(make_path(3))],
            witnesses_graph6=['Bg'],
            bound_value=Fraction(1, 6),
            bound_respected=True,
            bound_tight=True),
        ConjectureRowModel(
            n=4,
            extremal_value='1/2',
            class_size=6,
            witnesses=[canonical_code(make_cycle(4))],
            witnesses_graph6=['Cl'],
            family_id='cycle',
            family_value='1/2',
            family_is_extremal=True,
            bound_value='1/2',
            bound_respected=True,
            bound_tight=False),
    ]
    conjecture = ConjectureReportModel(
        conjecture_id='con2-graphs',
        description='largest avg_ecc - remoteness over connected graphs',
        class_id='connected',
        objective='avg_ecc - remoteness',
        direction='max',
        rows=rows,
        mismatches=[])
    return ReportDocument(
        command=['verify'], kind='verify', conjecture=conjecture)


class TestModels:

    def test_profile(self):
        model = ProfileModel.from_graph(make_path(5))
        assert model.canonical_code == canonical_code(make_path(5))
        assert model.graph6 == 'DhC'
        assert model.ecc_of == [4, 3, 2, 3, 4]
        assert model.remoteness == Fraction(5, 2)
        assert model.avg_distance == 2

    def test_profile_without_code(self):
        model = ProfileModel.from_graph(make_cycle(11))
        assert model.canonical_code is None
        assert model.graph6 == encode_graph6(make_cycle(11))

    def test_canonical_cap_from_environment(self, monkeypatch):
        monkeypatch.setenv('DIT_CANONICAL_CAP', '4')
        assert ProfileModel.from_graph(make_cycle(5)).canonical_code is None
        # Trees are never capped
        assert ProfileModel.from_graph(make_path(12)).canonical_code \
            is not None

    def test_rational_fields(self):
        row = ConjectureRowModel(
            n=4, extremal_value='3/6', class_size=2,
            witnesses=[], witnesses_graph6=[])
        assert row.extremal_value == Fraction(1, 2)
        assert row.bound_value is None

        with pytest.raises(pydantic.ValidationError):
            ConjectureRowModel(
                n=4, extremal_value=True, class_size=2,
                witnesses=[], witnesses_graph6=[])

        with pytest.raises(pydantic.ValidationError):
            ConjectureRowModel(
                n=4, extremal_value='1/0', class_size=2,
                witnesses=[], witnesses_graph6=[])

    def test_models_are_frozen(self):
        model = ProfileModel.from_graph(make_path(3))
        with pytest.raises(TypeError):
            model.n = 4

    def test_trace(self):
        (terminal,) = DRIVERS['lbar-pi'](make_path(9))
        model = TraceModel.from_trace(terminal)
        assert model.rule_id == 'END'
        assert model.holds
        assert model.before.n == model.after.n == 9
        assert model.claims == {'objective_improves': True}


class TestRenderJson:

    def test_rationals_as_strings(self):
        data = json.loads(render_json(_profile_document()))
        (profile,) = data['profiles']
        assert profile['remoteness'] == '5/2'
        assert profile['avg_distance'] == '2/1'
        assert profile['pi_of'] == ['5/2', '7/4', '3/2', '7/4', '5/2']
        assert profile['radius'] == 2

    def test_layout(self):
        text = render_json(_profile_document())
        assert text.endswith('}\n')

        data = json.loads(text)
        assert list(data) == sorted(data)
        assert data['tool_version'] == TOOL_VERSION
        assert data['kind'] == 'invariants'
        # None fields are left out entirely
        assert 'timing_seconds' not in data
        assert 'extremal' not in data

    def test_canonical_code_as_base58(self):
        data = json.loads(render_json(_profile_document()))
        code = data['profiles'][0]['canonical_code']
        assert CanonicalCode.validate(code) == canonical_code(make_path(5))

    def test_missing_code_is_omitted(self):
        document = ReportDocument(
            command=[], kind='invariants',
            profiles=[ProfileModel.from_graph(make_cycle(11))])
        (profile,) = json.loads(render_json(document))['profiles']
        assert 'canonical_code' not in profile
        assert profile['graph6'] == encode_graph6(make_cycle(11))

    def test_parses_back(self):
        document = _profile_document()
        assert ReportDocument.parse_raw(render_json(document)) == document

    def test_trace_locals(self):
        (terminal,) = DRIVERS['lbar-pi'](make_path(9))
        document = ReportDocument(
            command=[], kind='transform',
            traces=[TraceModel.from_trace(terminal)])
        (trace,) = json.loads(render_json(document))['traces']
        assert trace['locals']['chosen'] == 'spider3'
        assert trace['locals']['values'] == {
            'spider3': '23/24', 'spider4': '17/18', 'path': '5/6'}
        assert 'claimed_delta' not in trace

    def test_deterministic(self):
        assert render_json(_conjecture_document()) == \
            render_json(_conjecture_document())


class TestRenderCsv:

    def test_conjecture_table(self):
        assert render_csv(_conjecture_document()).splitlines() == [
            CONJECTURE_HEADER,
            '3,1/6,1/6,,,,true,true,2,Bg',
            '4,1/2,1/2,cycle,1/2,true,true,false,6,Cl',
        ]

    async def test_verified_conjecture(self):
        spec = BUILTIN_CONJECTURES['con1-trees']
        report = await verify_conjecture(spec, range(4, 7))
        document = ReportDocument(
            command=['verify'], kind='verify',
            conjecture=ConjectureReportModel.from_report(spec, report))

        header, *lines = render_csv(document).splitlines()
        assert header == CONJECTURE_HEADER
        assert [line.split(',')[0] for line in lines] == ['4', '5', '6']

        fields = lines[1].split(',')
        assert fields[1:6] == ['3/5', '', 'spider4', '3/5', 'true']
        assert fields[9] == encode_graph6(report.rows[1].witness_graphs[0])

    async def test_extremal_table(self):
        result = await search_extremal(
            GraphClass('tree', 5), 'avg_distance - proximity', 'max')
        document = ReportDocument(
            command=['search'], kind='search',
            extremal=ExtremalModel.from_result(result))

        (witness,) = result.witness_graphs
        assert render_csv(document).splitlines() == [
            'canonical_code,graph6,value',
            f'{canonical_code(make_spider4(1))},{encode_graph6(witness)},3/5',
        ]

    def test_no_table(self):
        with pytest.raises(ValueError):
            render_csv(_profile_document())


class TestWriteReport:

    def test_stdout(self, capsys):
        document = _profile_document()
        write_report(document, [ReportSink('json')])
        assert capsys.readouterr().out == render_json(document)

    def test_several_sinks(self, capsys, tmp_path, caplog):
        document = _conjecture_document()
        path = tmp_path / 'table.csv'
        with caplog.at_level('INFO', logger='distinv.report'):
            write_report(
                document,
                [ReportSink('json'), ReportSink('csv', str(path))])

        assert capsys.readouterr().out == render_json(document)
        assert path.read_text(encoding='utf-8') == render_csv(document)
        assert f'Wrote csv report to {path}' in caplog.text

    def test_unwritable(self, tmp_path):
        path = str(tmp_path / 'missing' / 'report.json')
        with pytest.raises(ReportWriteError) as exc_info:
            write_report(_profile_document(), [ReportSink('json', path)])

        assert exc_info.value.path == path
        assert isinstance(exc_info.value, OSError)
