'''Report documents: pydantic models over profiles, traces, search
results and conjecture reports, rendered as JSON (sorted keys, every
rational as "p/q") or as CSV tables.
'''
import csv
import dataclasses
import io
import logging
import sys
from fractions import Fraction
from typing import Any
from typing import Dict
from typing import List
from typing import Optional

import pydantic

from distinv.codecs import GRAPH6_MAX_N
from distinv.codecs import encode_graph6
from distinv.config import TOOL_VERSION
from distinv.exceptions import CanonicalCapExceeded
from distinv.exceptions import ReportWriteError
from distinv.graph import canonical_code
from distinv.invariants import invariant_profile
from distinv.utils import CanonicalCode
from distinv.utils import Rational
from distinv.utils import rat_to_str

logger = logging.getLogger(__name__)


class _ReportModel(pydantic.BaseModel):

    class Config:
        json_encoders = {Fraction: rat_to_str, CanonicalCode: str}
        allow_mutation = False


def _graph6_or_none(g):
    return encode_graph6(g) if g.n <= GRAPH6_MAX_N else None


class ProfileModel(_ReportModel):
    n: int
    m: int
    canonical_code: Optional[CanonicalCode]
    graph6: Optional[str]
    ecc_of: List[int]
    radius: int
    diameter: int
    avg_ecc: Rational
    transmission_of: List[int]
    pi_of: List[Rational]
    proximity: Rational
    remoteness: Rational
    avg_distance: Rational
    centers: List[int]
    centroids: List[int]

    @classmethod
    def from_graph(cls, g, profile=None):
        '''Non-tree graphs above the canonical cap get no code.'''
        if profile is None:
            profile = invariant_profile(g)
        try:
            code = canonical_code(g)
        except CanonicalCapExceeded as exc:
            logger.debug('No canonical code for the profile', exc_info=exc)
            code = None

        return cls(
            canonical_code=code,
            graph6=_graph6_or_none(g),
            **dataclasses.asdict(profile))


class TraceModel(_ReportModel):
    rule_id: str
    before: ProfileModel
    after: ProfileModel
    preconditions: Dict[str, bool]
    claims: Dict[str, bool]
    holds: bool
    claimed_delta: Optional[Rational]
    checkpoint: bool
    locals: Dict[str, Any]

    @classmethod
    def from_trace(cls, trace):
        return cls(
            rule_id=trace.rule_id,
            before=ProfileModel.from_graph(trace.before, trace.before_profile),
            after=ProfileModel.from_graph(trace.after, trace.after_profile),
            preconditions=trace.preconditions,
            claims=trace.claims,
            holds=trace.holds,
            claimed_delta=trace.claimed_delta,
            checkpoint=trace.checkpoint,
            locals=trace.locals)


class ExtremalModel(_ReportModel):
    n: int
    class_id: str
    objective: str
    direction: str
    extremal_value: Rational
    class_size: int
    tie_count: int
    witnesses: List[CanonicalCode]
    witnesses_graph6: List[str]

    @classmethod
    def from_result(cls, result):
        return cls(
            n=result.n,
            class_id=result.class_id,
            objective=result.objective,
            direction=result.direction,
            extremal_value=result.extremal_value,
            class_size=result.class_size,
            tie_count=result.tie_count,
            witnesses=list(result.witnesses),
            witnesses_graph6=[
                encode_graph6(g) for g in result.witness_graphs])


class ConjectureRowModel(_ReportModel):
    n: int
    extremal_value: Rational
    class_size: int
    witnesses: List[CanonicalCode]
    witnesses_graph6: List[str]
    family_id: Optional[str]
    family_value: Optional[Rational]
    family_is_extremal: Optional[bool]
    bound_value: Optional[Rational]
    bound_respected: Optional[bool]
    bound_tight: Optional[bool]


class ConjectureReportModel(_ReportModel):
    conjecture_id: str
    description: str
    class_id: str
    objective: str
    direction: str
    rows: List[ConjectureRowModel]
    mismatches: List[int]

    @classmethod
    def from_report(cls, spec, report):
        rows = []
        for row in report.rows:
            fields = {
                field.name: getattr(row, field.name)
                for field in dataclasses.fields(row)
                if field.name not in ('witnesses', 'witness_graphs')}
            rows.append(ConjectureRowModel(
                witnesses=list(row.witnesses),
                witnesses_graph6=[
                    encode_graph6(g) for g in row.witness_graphs],
                **fields))

        return cls(
            conjecture_id=spec.conjecture_id,
            description=spec.description,
            class_id=spec.class_id,
            objective=spec.objective,
            direction=spec.direction,
            rows=rows,
            mismatches=list(report.mismatches))


class EnumerationModel(_ReportModel):
    class_id: str
    n: int
    count: int
    graphs: Optional[List[str]]


class ReportDocument(_ReportModel):
    tool_version: str = TOOL_VERSION
    command: List[str]
    kind: str
    timing_seconds: Optional[float]
    family: Optional[str]
    profiles: Optional[List[ProfileModel]]
    traces: Optional[List[TraceModel]]
    checkpoint_values: Optional[List[Rational]]
    extremal: Optional[ExtremalModel]
    conjecture: Optional[ConjectureReportModel]
    enumeration: Optional[EnumerationModel]


def render_json(document):
    return document.json(exclude_none=True, sort_keys=True, indent=2) + '\n'


def _render_rational(value):
    return '' if value is None else rat_to_str(value)


def _render_flag(value):
    return '' if value is None else str(value).lower()


def render_csv(document):
    '''Per-n table for conjecture reports, witness table for searches.'''
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')

    if document.conjecture is not None:
        writer.writerow([
            'n', 'extremal_value', 'bound_value', 'family_id',
            'family_value', 'family_is_extremal', 'bound_respected',
            'bound_tight', 'class_size', 'witnesses'])
        for row in document.conjecture.rows:
            writer.writerow([
                row.n,
                rat_to_str(row.extremal_value),
                _render_rational(row.bound_value),
                row.family_id or '',
                _render_rational(row.family_value),
                _render_flag(row.family_is_extremal),
                _render_flag(row.bound_respected),
                _render_flag(row.bound_tight),
                row.class_size,
                ' '.join(row.witnesses_graph6)])

    elif document.extremal is not None:
        writer.writerow(['canonical_code', 'graph6', 'value'])
        extremal = document.extremal
        rows = zip(extremal.witnesses, extremal.witnesses_graph6)
        for code, graph6 in rows:
            writer.writerow(
                [str(code), graph6, rat_to_str(extremal.extremal_value)])

    else:
        raise ValueError(f'no CSV table for {document.kind} reports')

    return buffer.getvalue()


_RENDERERS = {'json': render_json, 'csv': render_csv}


@dataclasses.dataclass(frozen=True)
class ReportSink:
    '''Where one rendering goes. A path of None means stdout.'''
    fmt: str
    path: Optional[str] = None


def write_report(document, sinks):
    for sink in sinks:
        text = _RENDERERS[sink.fmt](document)
        if sink.path is None:
            sys.stdout.write(text)
            continue

        try:
            with open(sink.path, 'w', encoding='utf-8', newline='') as f:
                f.write(text)
        except OSError as exc:
            raise ReportWriteError(sink.path) from exc

        logger.info('Wrote %s report to %s', sink.fmt, sink.path)
