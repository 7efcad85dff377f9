"""Command-line harness: evaluation, conversion and verification suites.

    python -m eisenstein_mmv.main eval-l --index "L{ks=[2];alphas=[2];t=0}" --tau 1i
    python -m eisenstein_mmv.main verify --suite haberland --grid small --out report.json
"""

import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from eisenstein_mmv.engines.eisenstein import modular_defect, precision_self_test
from eisenstein_mmv.engines.integrals import int_eval_certified
from eisenstein_mmv.engines.lseries import export_coefficients, l_coeffs_dp, l_eval_certified, tau_power
from eisenstein_mmv.engines.rewrite import int_to_l, l_to_int, stuffle_product
from eisenstein_mmv.shared_libraries.core_algebra import (
    LSERIES,
    TAU_INTEGRAL,
    Generator,
    format_formal_sum,
    parse_generator,
)
from eisenstein_mmv.shared_libraries.errors import EngineError, InvalidIndexError, PrecisionSelfTestError
from eisenstein_mmv.shared_libraries.precision import format_complex, format_real, parse_complex
from eisenstein_mmv.shared_libraries.report_utils import emit
from eisenstein_mmv.suites.common import GRIDS, fs_eval
from eisenstein_mmv.suites.runner import run_suite, suite_names

load_dotenv()

logger = logging.getLogger(__name__)

SELFTEST_TAUS = ("1i", "0.3+1.1i", "-0.45+0.9i")


def build_parser() -> argparse.ArgumentParser:
    engine = argparse.ArgumentParser(add_help=False)
    engine.add_argument("--digits", type=int, help="working precision in decimal digits")
    engine.add_argument("--eps", type=float, help="target truncation error")
    engine.add_argument("--nmax", type=int, help="hard cap on the summation index")
    engine.add_argument("--grid", choices=GRIDS, help="suite grid size")
    engine.add_argument("--format", dest="output_format", choices=("json", "csv"), help="report format")
    engine.add_argument("--workers", type=int, help="worker processes for suites")

    parser = argparse.ArgumentParser(prog="eisenstein-mmv", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    eval_l = commands.add_parser("eval-l", parents=[engine], help="evaluate an L-series generator")
    eval_l.add_argument("--index", required=True, help='e.g. "L{ks=[2,3];alphas=[1,2];t=0}"')
    eval_l.add_argument("--tau", required=True, help='point in the upper half-plane, e.g. "0.5+2i"')
    eval_l.add_argument("--coeffs-out", help="also write c(1..N) of the truncation as CSV")

    eval_int = commands.add_parser("eval-int", parents=[engine], help="evaluate a tau^j Int generator")
    eval_int.add_argument("--index", required=True, help='e.g. "I{ks=[2,3];alphas=[1,2];taupow=0}"')
    eval_int.add_argument("--tau", required=True)

    convert = commands.add_parser("convert", parents=[engine], help="rewrite between L-series and integrals")
    convert.add_argument("--dir", dest="direction", required=True, choices=("int2l", "l2int"))
    convert.add_argument("--index", required=True)

    stuffle = commands.add_parser("stuffle", parents=[engine], help="stuffle product of two L-series")
    stuffle.add_argument("--left", required=True)
    stuffle.add_argument("--right", required=True)
    stuffle.add_argument("--tau", help="also evaluate both sides at this point")

    verify = commands.add_parser("verify", parents=[engine], help="run a verification suite")
    verify.add_argument("--suite", required=True, choices=suite_names())
    verify.add_argument("--out", help='report path; "-" or omitted writes to stdout')

    commands.add_parser("selftest", parents=[engine], help="precision and modularity self-tests")
    return parser


def _expect(g: Generator, kind: str, text: str) -> Generator:
    if g.kind != kind:
        raise InvalidIndexError(f"expected an {kind}-generator, got {text!r}")
    return g


def _eval_l(args, settings) -> int:
    g = _expect(parse_generator(args.index), LSERIES, args.index)
    value, bound, n = l_eval_certified(g.index, parse_complex(args.tau), settings.to_budget())
    print(f"value: {format_complex(value)}")
    print(f"bound: {format_real(bound, 6)}")
    print(f"terms: {n}")
    if args.coeffs_out:
        export_coefficients(l_coeffs_dp(g.index.with_t(0), max(n, 1)), args.coeffs_out)
    return 0


def _eval_int(args, settings) -> int:
    g = _expect(parse_generator(args.index), TAU_INTEGRAL, args.index)
    tau = parse_complex(args.tau)
    value, bound, n = int_eval_certified(g.index, tau, settings.to_budget())
    factor = tau_power(tau, g.tau_power)
    print(f"value: {format_complex(factor * value)}")
    print(f"bound: {format_real(abs(factor) * bound, 6)}")
    print(f"terms: {n}")
    return 0


def _convert(args, settings) -> int:
    if args.direction == "int2l":
        g = _expect(parse_generator(args.index), TAU_INTEGRAL, args.index)
        print(format_formal_sum(int_to_l(g.index, g.tau_power)))
    else:
        g = _expect(parse_generator(args.index), LSERIES, args.index)
        print(format_formal_sum(l_to_int(g)))
    return 0


def _stuffle(args, settings) -> int:
    g1 = _expect(parse_generator(args.left), LSERIES, args.left)
    g2 = _expect(parse_generator(args.right), LSERIES, args.right)
    product = stuffle_product(g1, g2)
    print(format_formal_sum(product))
    if args.tau:
        budget = settings.to_budget()
        tau = parse_complex(args.tau)
        lhs = l_eval_certified(g1.index, tau, budget)[0] * l_eval_certified(g2.index, tau, budget)[0]
        print(f"lhs: {format_complex(lhs)}")
        print(f"rhs: {format_complex(fs_eval(product, tau, budget))}")
    return 0


def _verify(args, settings) -> int:
    report = run_suite(args.suite, settings.GRID, settings)
    emit(report, settings.OUTPUT_FORMAT, args.out)
    if report.exit_code:
        logger.error("suite %s: %d of %d cases failed", args.suite, report.summary.failed, report.summary.total)
    return report.exit_code


def _selftest(args, settings) -> int:
    budget = settings.to_budget()
    print(f"|E_6(i)|: {format_real(precision_self_test(budget), 6)}")
    threshold = 10.0 ** (-(settings.DIGITS - 10))
    for text in SELFTEST_TAUS:
        for k in (2, 3, 4):
            defect = modular_defect(k, parse_complex(text), budget)
            print(f"modular defect k={k} tau={text}: {format_real(defect, 6)}")
            if not defect < threshold:
                raise PrecisionSelfTestError(f"modular defect of E_{2 * k} at {text} exceeds {threshold:g}")
    return 0


_COMMANDS = {
    "eval-l": _eval_l,
    "eval-int": _eval_int,
    "convert": _convert,
    "stuffle": _stuffle,
    "verify": _verify,
    "selftest": _selftest,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        from config.settings import Settings

        settings = Settings.get_settings().with_overrides(
            DIGITS=args.digits,
            EPS=args.eps,
            NMAX=args.nmax,
            GRID=args.grid,
            OUTPUT_FORMAT=args.output_format,
            WORKERS=args.workers,
        )
        logging.basicConfig(level=settings.LOG_LEVEL)
        settings.apply_precision()
        return _COMMANDS[args.command](args, settings)
    except (EngineError, ValidationError, ValueError) as e:
        logger.error("%s failed: %s", args.command, e, exc_info=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
