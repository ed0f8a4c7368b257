import json
import logging
from pathlib import Path
from typing import NamedTuple, Optional, Union

import pydantic

from app.core.errors import InstanceValidationError, ParseError
from app.models import (
    CompareRowDoc,
    CompareTableDoc,
    InstanceDoc,
    PreconditionsDoc,
    ReportDoc,
    ScalarBoundDoc,
    Section5Doc,
    SuiteResultDoc,
)
from app.services.bounds import BoundReport, CompareRow
from app.services.catalog import format_cycles, parse_cycles
from app.services.permutations import PermGroup, Subgroup, closure, is_normal
from app.services.verification import SuiteResult

logger = logging.getLogger(__name__)


class Instance(NamedTuple):
    G: PermGroup
    H: Subgroup
    N: Optional[Subgroup]
    label: str


def load_instance(doc: InstanceDoc) -> Instance:
    """Build and validate (G, H, N) from a document; failures name the violated condition."""
    degree = doc.degree
    group_gens = [parse_cycles(text, degree) for text in doc.group_gens]
    h_gens = [parse_cycles(text, degree) for text in doc.subgroup_H_gens]
    G = closure(degree, group_gens)

    missing = [format_cycles(g) for g in h_gens if g not in G]
    if missing:
        raise InstanceValidationError("H-not-in-G", f"Generators of H outside G: {missing}")
    H = Subgroup.generated(G, h_gens)

    N = None
    if doc.normal_N_gens is not None:
        n_gens = [parse_cycles(text, degree) for text in doc.normal_N_gens]
        missing = [format_cycles(g) for g in n_gens if g not in G]
        if missing:
            raise InstanceValidationError("N-not-in-G", f"Generators of N outside G: {missing}")
        N = Subgroup.generated(G, n_gens)
        if not H.members <= N.members:
            raise InstanceValidationError("H-not-in-N", "H is not contained in N")
        if not is_normal(G, N):
            raise InstanceValidationError("N-not-normal", "N is not normal in G")

    logger.info(f"Loaded instance {doc.label!r}: |G|={G.order}, |H|={H.order}, |N|={N.order if N else '-'}")
    return Instance(G, H, N, doc.label)


def parse_instance(text: str) -> InstanceDoc:
    try:
        return InstanceDoc.model_validate_json(text)
    except pydantic.ValidationError as e:
        logger.error(f"Instance document rejected: {e}")
        raise ParseError(f"Invalid instance document: {e.errors(include_url=False)}")


def load_instance_file(path: Union[str, Path]) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"Cannot read instance file {path}: {e}")
    return load_instance(parse_instance(text))


def _dump(doc: pydantic.BaseModel) -> str:
    return json.dumps(doc.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"


def report_document(report: BoundReport) -> ReportDoc:
    section5 = None
    if report.section5 is not None:
        details = report.section5
        section5 = Section5Doc(
            quotient_generators=[format_cycles(t) for t in details.quotient_generators],
            representatives=[format_cycles(g) for g in details.representatives],
            H_prime_order=details.H_prime_order,
            m=details.m,
            transversal=[format_cycles(n) for n in details.transversal],
        )
    return ReportDoc(
        provenance=report.provenance,
        label=report.label,
        bound=report.bound,
        generating_tuple=[format_cycles(g) for g in report.generating_tuple],
        dropped_from_H=[format_cycles(g) for g in report.dropped],
        stabilizer_indices=list(report.stabilizer_indices),
        index_G_H=report.index_G_H,
        rank_M=report.rank_M,
        faithful=report.faithful,
        valid=report.valid,
        preconditions=PreconditionsDoc(
            core_trivial=report.preconditions.core_trivial,
            condition_ii=report.preconditions.condition_ii,
            generates_over_H=report.preconditions.generates_over_H,
        ),
        csa_bound=report.csa_bound,
        section5=section5,
        note=report.note,
    )


def emit_report(report: BoundReport) -> str:
    return _dump(report_document(report))


def parse_report(text: str) -> ReportDoc:
    try:
        return ReportDoc.model_validate_json(text)
    except pydantic.ValidationError as e:
        raise ParseError(f"Invalid report document: {e.errors(include_url=False)}")


def emit_scalar(provenance: str, bound: int, label: str = "", **parameters: int) -> str:
    return _dump(ScalarBoundDoc(provenance=provenance, label=label, bound=bound, parameters=parameters))


def parse_scalar(text: str) -> ScalarBoundDoc:
    try:
        return ScalarBoundDoc.model_validate_json(text)
    except pydantic.ValidationError as e:
        raise ParseError(f"Invalid bound document: {e.errors(include_url=False)}")


def compare_document(p: int, rows: list[CompareRow]) -> CompareTableDoc:
    return CompareTableDoc(
        p=p,
        rows=[
            CompareRowDoc(
                p=row.p,
                s=row.s,
                n=row.n,
                procesi=row.procesi,
                eq1_all_n=row.eq1_all_n,
                eq1_odd_n=row.eq1_odd_n,
                prior_mr=row.prior_mr,
                new=row.new,
                min_prior=row.min_prior,
                minimum=row.minimum,
            )
            for row in rows
        ],
    )


def emit_table(p: int, rows: list[CompareRow]) -> str:
    return _dump(compare_document(p, rows))


def parse_table(text: str) -> CompareTableDoc:
    try:
        return CompareTableDoc.model_validate_json(text)
    except pydantic.ValidationError as e:
        raise ParseError(f"Invalid table document: {e.errors(include_url=False)}")


def emit_suite(result: SuiteResult) -> str:
    # elapsed time stays out of the document so reruns are byte-identical
    return _dump(
        SuiteResultDoc(
            suite=result.name,
            max_order=result.max_order,
            passed=result.passed,
            checked=result.checked,
            counts=dict(sorted(result.counts.items())),
            failures=result.failures,
        )
    )


def parse_suite(text: str) -> SuiteResultDoc:
    try:
        return SuiteResultDoc.model_validate_json(text)
    except pydantic.ValidationError as e:
        raise ParseError(f"Invalid suite document: {e.errors(include_url=False)}")
