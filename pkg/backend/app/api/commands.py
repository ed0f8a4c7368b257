import argparse
import logging
from typing import List

from app.core.errors import ParseError
from app.models import ReportDoc
from app.services.bounds import (
    compare_table,
    csa_setup,
    optimal_thm_h_bound,
    pgl_bound,
    section5_bound,
    thm_h_bound,
)
from app.services.catalog import parse_cycles
from app.services.storage import (
    Instance,
    emit_report,
    emit_scalar,
    emit_suite,
    emit_table,
    load_instance_file,
    parse_report,
    parse_scalar,
    parse_table,
)
from app.services.verification import run_suite

logger = logging.getLogger(__name__)


def _report_lines(doc: ReportDoc) -> List[str]:
    lines = [
        f"label              {doc.label or '-'}",
        f"provenance         {doc.provenance}",
        f"bound              {doc.bound}",
        f"generating tuple   {' '.join(doc.generating_tuple)}",
    ]
    if doc.dropped_from_H:
        lines.append(f"dropped (in H)     {' '.join(doc.dropped_from_H)}")
    lines += [
        f"[G:S_i]            {' '.join(str(i) for i in doc.stabilizer_indices)}",
        f"[G:H]              {doc.index_G_H}",
        f"rank(M)            {doc.rank_M}",
        f"faithful           {'yes' if doc.faithful else 'no'}",
        f"valid              {'yes' if doc.valid else 'no'}",
    ]
    if doc.csa_bound is not None:
        lines.append(f"normal-subgroup    {doc.csa_bound}")
    if doc.section5 is not None:
        s5 = doc.section5
        lines += [
            f"G/N generators     {' '.join(s5.quotient_generators)}",
            f"representatives    {' '.join(s5.representatives)}",
            f"|H'|, m            {s5.H_prime_order}, {s5.m}",
        ]
    lines.append(f"note               {doc.note}")
    return lines


def _print_report(report, fmt: str):
    text = emit_report(report)
    if fmt == "json":
        print(text, end="")
        return
    # the table is a view of the same document the json format prints
    for line in _report_lines(parse_report(text)):
        print(line)


def _load(args: argparse.Namespace) -> Instance:
    instance = load_instance_file(args.instance)
    logger.info(f"Instance {args.instance}: |G|={instance.G.order}, [G:H]={instance.G.order // instance.H.order}")
    return instance


def _require_normal(instance: Instance, verb: str):
    if instance.N is None:
        logger.error(f"bound {verb} needs an instance with normal_N")
        raise ParseError(f"bound {verb} needs normal_N in the instance document")


def bound_thm_h(args: argparse.Namespace) -> int:
    instance = _load(args)
    if args.gens:
        gens = [parse_cycles(text, instance.G.degree) for text in args.gens]
    else:
        gens = list(instance.G.generators)
        logger.info("No --gens given; using the generators of G")
    report = thm_h_bound(instance.G, instance.H, gens, label=instance.label)
    _print_report(report, args.format)
    return 0


def bound_optimal(args: argparse.Namespace) -> int:
    instance = _load(args)
    report = optimal_thm_h_bound(instance.G, instance.H, args.max_s, label=instance.label)
    _print_report(report, args.format)
    return 0


def bound_csa(args: argparse.Namespace) -> int:
    instance = _load(args)
    _require_normal(instance, "csa")
    G, H, N = instance.G, instance.H, instance.N
    setup = csa_setup(G, H, N)
    text = emit_scalar(
        "csa",
        setup.bound,
        label=instance.label,
        r=setup.r,
        index_G_H=G.order // H.order,
        index_N_H=N.order // H.order,
    )
    if args.format == "json":
        print(text, end="")
    else:
        print(parse_scalar(text).bound)
    return 0


def bound_section5(args: argparse.Namespace) -> int:
    instance = _load(args)
    _require_normal(instance, "section5")
    report = section5_bound(instance.G, instance.H, instance.N, label=instance.label)
    _print_report(report, args.format)
    return 0


def bound_pgl(args: argparse.Namespace) -> int:
    text = emit_scalar("pgl", pgl_bound(args.p, args.s), p=args.p, s=args.s, n=args.p ** args.s)
    if args.format == "json":
        print(text, end="")
    else:
        print(parse_scalar(text).bound)
    return 0


def table_compare(args: argparse.Namespace) -> int:
    text = emit_table(args.p, compare_table(args.p, args.s_max))
    if args.format == "json":
        print(text, end="")
        return 0
    header = ("s", "n", "n^2", "n^2-3n+1", "(n-1)(n-2)/2", "p^(2s-1)-n+1", "new", "min prior")
    print("  ".join(f"{h:>14}" for h in header))
    for row in parse_table(text).rows:
        cells = (
            row.s,
            row.n,
            row.procesi,
            row.eq1_all_n,
            "-" if row.eq1_odd_n is None else row.eq1_odd_n,
            row.prior_mr,
            row.new,
            row.min_prior,
        )
        print("  ".join(f"{c:>14}" for c in cells))
    return 0


def verify(args: argparse.Namespace) -> int:
    result = run_suite(args.suite, max_order=args.max_order, seed=args.seed)
    if args.format == "json":
        print(emit_suite(result), end="")
    else:
        status = "PASS" if result.passed else "FAIL"
        counts = ", ".join(f"{k}={v}" for k, v in sorted(result.counts.items()))
        print(f"{result.name}: {status} ({result.checked} checks up to order {result.max_order}; {counts})")
        for failure in result.failures:
            print(f"  {failure}")
    # a failed suite means a checked claim does not hold
    return 0 if result.passed else 1
