"""Suite registry and the case runner.

Cases run in worker processes: mpmath keeps its working precision in a
process-wide context that some routines (incomplete gamma, quadrature node
generation) raise and restore, so threads would race on it.
"""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import TYPE_CHECKING, Dict, List

from eisenstein_mmv import __version__
from eisenstein_mmv.engines.quadrature import warm_quadrature
from eisenstein_mmv.shared_libraries.errors import EngineError, SingularExponentError, UnknownSuiteError
from eisenstein_mmv.shared_libraries.precision import configure_precision
from eisenstein_mmv.shared_libraries.report_utils import failed, skipped
from eisenstein_mmv.shared_libraries.schema import CaseResult, EngineInfo, Summary, VerificationReport
from eisenstein_mmv.suites import algebra, modular, oracles
from eisenstein_mmv.suites.common import GRIDS, CaseContext, CasePlan, SuiteDefinition

if TYPE_CHECKING:
    from config.settings import Settings

logger = logging.getLogger(__name__)

SUITES: Dict[str, SuiteDefinition] = {**algebra.SUITES, **modular.SUITES, **oracles.SUITES}


def suite_names() -> List[str]:
    return sorted(SUITES)


def get_suite(name: str) -> SuiteDefinition:
    try:
        return SUITES[name]
    except KeyError:
        raise UnknownSuiteError(f"unknown suite {name!r}; choose from {', '.join(suite_names())}") from None


def run_case(suite: str, plan: CasePlan, context: CaseContext) -> CaseResult:
    """Evaluate one case; singular tuples are skipped, engine refusals fail the case."""
    try:
        result = get_suite(suite).check(plan, context)
    except SingularExponentError as e:
        result = skipped(plan.id, plan.parameters, str(e))
    except EngineError as e:
        logger.error("case %s raised %s: %s", plan.id, type(e).__name__, e)
        result = failed(plan.id, plan.parameters, f"{type(e).__name__}: {e}")
    logger.debug("case %s: pass=%s abs_err=%s %s", result.id, result.passed, result.abs_err, result.notes)
    return result


def run_suite(name: str, grid: str, settings: "Settings") -> VerificationReport:
    """Plan the suite on a grid, run every case and assemble the ordered report.

    Raises:
        UnknownSuiteError: for an unregistered suite or grid name.
    """
    suite = get_suite(name)
    if grid not in GRIDS:
        raise UnknownSuiteError(f"unknown grid {grid!r}; choose from {', '.join(GRIDS)}")
    settings.apply_precision()
    context = CaseContext(budget=settings.to_budget(), quad_degree=settings.QUAD_DEGREE)
    plans = suite.plan(grid)
    logger.info("suite %s (%s grid): %d cases on %d workers", name, grid, len(plans), settings.WORKERS)

    results: List[CaseResult] = []
    if settings.WORKERS <= 1 or len(plans) <= 1:
        for plan in plans:
            results.append(run_case(name, plan, context))
    else:
        warm_quadrature(context.quad_degree)
        with ProcessPoolExecutor(
            max_workers=settings.WORKERS,
            initializer=configure_precision,
            initargs=(settings.DIGITS,),
        ) as executor:
            futures = [executor.submit(run_case, name, plan, context) for plan in plans]
            for future in as_completed(futures):
                results.append(future.result())

    cases = sorted(results, key=lambda c: c.id)
    summary = Summary.of(cases)
    logger.info(
        "suite %s finished: %d passed, %d failed, %d skipped",
        name,
        summary.passed,
        summary.failed,
        summary.skipped_singular,
    )
    return VerificationReport(
        suite=name,
        cases=cases,
        summary=summary,
        engine=EngineInfo(
            digits=settings.DIGITS,
            eps=settings.EPS,
            n_max=settings.NMAX,
            version=__version__,
            grid=grid,
            quad_degree=settings.QUAD_DEGREE,
        ),
    )
