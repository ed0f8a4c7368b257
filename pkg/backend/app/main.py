import argparse
import logging
import sys
from typing import Optional, Sequence

from app.api import commands
from app.core.config import settings
from app.core.errors import ParseError, ToolkitError
from app.services.verification import SUITES

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """Argument errors are document errors (exit 3), not argparse's exit 2."""

    def error(self, message):
        raise ParseError(message)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--cap", type=int, help="largest group order a closure may reach")
    common.add_argument("--search-cap", type=int, help="most candidates a search may examine")
    common.add_argument("--seed", type=int, help="seed for randomized checks")
    common.add_argument("--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"))
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(
        prog="edbounds",
        description="Upper bounds on the essential dimension of G/H-crossed products",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    bound = verbs.add_parser("bound", help="compute a bound")
    kinds = bound.add_subparsers(dest="kind", required=True)

    thm_h = kinds.add_parser("thm-h", parents=[common], help="generating-tuple bound for a given tuple")
    thm_h.add_argument("--instance", required=True)
    thm_h.add_argument("--gens", nargs="+", metavar="CYCLES", help='tuple elements, e.g. "(1 2 3)"')
    thm_h.set_defaults(handler=commands.bound_thm_h)

    optimal = kinds.add_parser("optimal", parents=[common], help="best generating-tuple bound up to a tuple size")
    optimal.add_argument("--instance", required=True)
    optimal.add_argument("--max-s", type=int, required=True)
    optimal.set_defaults(handler=commands.bound_optimal)

    csa = kinds.add_parser("csa", parents=[common], help="normal-subgroup bound r[G:H][N:H] - [G:H] + 1")
    csa.add_argument("--instance", required=True)
    csa.set_defaults(handler=commands.bound_csa)

    section5 = kinds.add_parser("section5", parents=[common], help="explicit tuple realizing the normal-subgroup bound")
    section5.add_argument("--instance", required=True)
    section5.set_defaults(handler=commands.bound_section5)

    pgl = kinds.add_parser("pgl", parents=[common], help="closed form for PGL_n, n = p^s")
    pgl.add_argument("--p", type=int, required=True)
    pgl.add_argument("--s", type=int, required=True)
    pgl.set_defaults(handler=commands.bound_pgl)

    table = verbs.add_parser("table", help="comparison tables")
    tables = table.add_subparsers(dest="kind", required=True)
    compare = tables.add_parser("compare", parents=[common], help="PGL_n bounds for n = p^2 .. p^s_max")
    compare.add_argument("--p", type=int, required=True)
    compare.add_argument("--s-max", type=int, required=True)
    compare.set_defaults(handler=commands.table_compare)

    verify = verbs.add_parser("verify", parents=[common], help="run a verification suite")
    verify.add_argument("--suite", choices=SUITES, required=True)
    verify.add_argument("--max-order", type=int)
    verify.set_defaults(handler=commands.verify)

    return parser


def _configure(args: argparse.Namespace):
    settings.reset()
    settings.update(
        ORDER_CAP=args.cap,
        SEARCH_CAP=args.search_cap,
        RANDOM_SEED=args.seed,
        LOG_LEVEL=args.log_level,
    )
    try:
        settings.validate()
    except (RuntimeError, ValueError) as e:
        raise ParseError(str(e))

    # results go to stdout, logs to stderr
    level = getattr(logging, settings.LOG_LEVEL.upper())
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(level)


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _configure(args)
        logger.info(f"Running {args.verb} {getattr(args, 'kind', '')}".rstrip())
        return args.handler(args)
    except ToolkitError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else 0
    except Exception as e:
        logger.error(f"Unexpected failure: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
