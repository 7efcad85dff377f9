"""Independent quadrature oracle for iterated integrals of depth <= 2.

Integrals run along the vertical line Re tau = Re(start), either to i inf
(truncated at a height H with a certified tail bound) or to a finite end point.
Panels widen geometrically away from the start; a path starting at the cusp 0 is
graded toward 0 instead. Each panel is then compared against the next Gauss-Legendre
degree and halved until the two rules agree.
"""

import logging
from functools import lru_cache
from typing import Any, Callable, List, Literal, NamedTuple, Optional, Sequence, Tuple

import mpmath
from mpmath import mp, mpc, mpf
from mpmath.calculus.quadrature import GaussLegendre
from pydantic import BaseModel, ConfigDict, Field

from eisenstein_mmv.engines.eisenstein import eis_constant, eis_cusp_eval_inverted
from eisenstein_mmv.shared_libraries.errors import DivergentIntegralError, OracleLimitError
from eisenstein_mmv.shared_libraries.precision import TruncationBudget, power_geometric_tail, to_hp

logger = logging.getLogger(__name__)

Nodes = Tuple[Tuple[mpf, mpf], ...]


class IntegrandFactor(BaseModel):
    """One factor f(t) t^(alpha-1) of the integrand.

    Attributes:
        kind: "cusp" for E^0_{2k}, "const" for E^inf_{2k}, "unit" for 1.
        k: Half-weight (ignored for "unit").
        alpha: Exponent selector.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["cusp", "const", "unit"]
    k: int = Field(2, ge=2)
    alpha: int = 1


class PathSpec(BaseModel):
    """Vertical integration path.

    Attributes:
        start: Lower end point (Im >= 0; Im = 0 only for the cusp 0).
        end: Finite upper end point on the same vertical line, or None for i inf.
        height_cap: Truncation height H for infinite paths; chosen from the budget if None.
        first_panel: Width of the panel next to the start.
        degree: mpmath Gauss-Legendre degree (3 * 2^(degree-1) nodes per panel).
        max_panels: Panel budget, refined panels included.
        tolerance: Accepted disagreement between the two rules over the whole path,
            relative to max(1, |panel value|); derived from the budget if None.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    start: Any
    end: Optional[Any] = None
    height_cap: Optional[float] = None
    first_panel: float = Field(1 / 16, gt=0)
    degree: int = Field(5, ge=2, le=10)
    max_panels: int = Field(200, ge=1)
    tolerance: Optional[float] = Field(None, gt=0)


class QuadResult(BaseModel):
    """Outcome of one oracle call.

    Attributes:
        value: Integral over the truncated path.
        tail_bound: Certified bound on the part above the truncation height; 0 for finite paths.
        panels: Panels after refinement.
        error_estimate: Disagreement between the two rules, summed over panels.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    value: Any
    tail_bound: Any
    panels: int
    error_estimate: Any = 0


@lru_cache(maxsize=None)
def standard_nodes(degree: int, prec: int) -> Nodes:
    """Gauss-Legendre nodes and weights on [-1, 1].

    mpmath raises its working precision while computing nodes, so call this from
    the main thread before starting workers (see ``warm_quadrature``).
    """
    nodes = GaussLegendre(mp).get_nodes(mpf(-1), mpf(1), degree, prec)
    return tuple((mpf(x), mpf(w)) for x, w in nodes)


def warm_quadrature(degree: int) -> None:
    standard_nodes(degree, mp.prec)
    standard_nodes(degree + 1, mp.prec)


def _mapped(nodes: Nodes, a: mpf, b: mpf) -> List[Tuple[mpf, mpf]]:
    half = (b - a) / 2
    mid = (b + a) / 2
    return [(mid + half * x, half * w) for x, w in nodes]


def cusp_tail_majorant(k: int, alpha: int, x: mpf, height: mpf) -> mpf:
    """Bound on int_H^inf |E^0_{2k}(x+iy)| |x+iy|^(alpha-1) dy for alpha >= 1."""
    base = abs(x) + height
    slack = 2 * mp.pi - mpf(max(alpha - 1, 0)) / base
    if slack <= 0:
        return mpmath.inf
    q = mpmath.exp(-2 * mp.pi * height)
    return power_geometric_tail(2 * k, q, 0) * base ** max(alpha - 1, 0) / slack


def _integrand(factor: IntegrandFactor, x: mpf, budget: TruncationBudget) -> Callable[[mpf], mpc]:
    i = mpc(0, 1)
    if factor.kind == "cusp":
        k = factor.k

        def f(y):
            tau = mpc(x, y)
            return eis_cusp_eval_inverted(k, tau, budget) * tau ** (factor.alpha - 1) * i

    elif factor.kind == "const":
        c = to_hp(eis_constant(factor.k))

        def f(y):
            return c * mpc(x, y) ** (factor.alpha - 1) * i

    else:

        def f(y):
            return mpc(x, y) ** (factor.alpha - 1) * i

    return f


def _panel_edges(path: PathSpec, y0: mpf, top: mpf) -> List[mpf]:
    if y0 == 0:
        edges = [top]
        while edges[-1] > top * mpf(2) ** -30:
            edges.append(edges[-1] / 2)
        edges.append(mpf(0))
        edges.reverse()
    else:
        edges = [y0]
        width = mpf(path.first_panel)
        while edges[-1] < top:
            edges.append(min(edges[-1] + width, top))
            width *= 2
    if len(edges) - 1 > path.max_panels:
        raise OracleLimitError(f"path needs {len(edges) - 1} panels, budget is {path.max_panels}")
    return edges


def _choose_height(factors: Sequence[IntegrandFactor], x: mpf, y0: mpf, budget: TruncationBudget) -> mpf:
    height = mpf(int(y0) + 2)
    while _tail_bound(factors, x, y0, height, budget) >= budget.eps_hp / 10:
        height += 1
        if height > y0 + 200:
            raise OracleLimitError("no truncation height meets the tail budget")
    return height


def _inner_growth(factor: IntegrandFactor, x: mpf, y0: mpf) -> Tuple[mpf, int]:
    """(C, e) with |int_{y0}^{y} f| <= C (|x| + y)^e for every y >= y0."""
    if factor.kind == "cusp":
        return cusp_tail_majorant(factor.k, factor.alpha, x, y0), 0
    c = abs(to_hp(eis_constant(factor.k))) if factor.kind == "const" else mpf(1)
    if factor.alpha >= 1:
        return c, factor.alpha
    return c * y0 ** (factor.alpha - 1), 1


def _tail_bound(factors: Sequence[IntegrandFactor], x: mpf, y0: mpf, height: mpf, budget: TruncationBudget) -> mpf:
    top = factors[-1]
    if len(factors) == 1:
        return cusp_tail_majorant(top.k, top.alpha, x, height)
    scale, growth = _inner_growth(factors[0], x, y0)
    return scale * cusp_tail_majorant(top.k, top.alpha + growth, x, height)


class _Panel(NamedTuple):
    a: mpf
    b: mpf
    totals: List[mpc]
    diffs: List[mpf]


def _panel_sum(f: Callable[[mpf], mpc], nodes: Nodes, a: mpf, b: mpf) -> mpc:
    return sum((w * f(y) for y, w in _mapped(nodes, a, b)), mpc(0))


def _refine(
    funcs: Sequence[Callable[[mpf], mpc]], edges: List[mpf], path: PathSpec, budget: TruncationBudget
) -> List[_Panel]:
    """Halve panels until degree d and d+1 agree for every factor.

    Raises:
        OracleLimitError: when agreement needs more than ``path.max_panels`` panels.
    """
    coarse_nodes = standard_nodes(path.degree, mp.prec)
    fine_nodes = standard_nodes(path.degree + 1, mp.prec)
    if path.tolerance is not None:
        tol = mpf(path.tolerance)
    else:
        tol = max(budget.eps_hp, mpf(10) ** (-(mp.dps - 8)))
    panel_tol = tol / path.max_panels

    pending = list(zip(edges, edges[1:]))
    accepted: List[_Panel] = []
    while pending:
        a, b = pending.pop()
        fine = [_panel_sum(f, fine_nodes, a, b) for f in funcs]
        diffs = [abs(_panel_sum(f, coarse_nodes, a, b) - g) for f, g in zip(funcs, fine)]
        if all(d <= panel_tol * max(1, abs(g)) for d, g in zip(diffs, fine)):
            accepted.append(_Panel(a, b, fine, diffs))
            continue
        if len(accepted) + len(pending) + 2 > path.max_panels:
            raise OracleLimitError(
                f"rules still disagree by {mpmath.nstr(max(diffs), 3)} on [{mpmath.nstr(a, 5)}, {mpmath.nstr(b, 5)}]"
                f" with the panel budget of {path.max_panels} spent"
            )
        mid = (a + b) / 2
        pending.extend([(mid, b), (a, mid)])
    accepted.sort(key=lambda p: p.a)
    if len(accepted) > len(edges) - 1:
        logger.debug("refined %d panels into %d", len(edges) - 1, len(accepted))
    return accepted


def quad_oracle(factors: Sequence[IntegrandFactor], path: PathSpec, budget: TruncationBudget) -> QuadResult:
    """Nested Gauss-Legendre over t_1 < ... < t_r on the path; factors listed bottom to top.

    Raises:
        DivergentIntegralError: for an infinite path whose top factor is not a cusp part,
            or a cusp factor with alpha < 1 on an infinite path.
        OracleLimitError: when the panel budget is exhausted.
    """
    factors = list(factors)
    if not 1 <= len(factors) <= 2:
        raise OracleLimitError(f"quadrature oracle handles depth 1 or 2, got {len(factors)}")
    start = mpc(path.start)
    x, y0 = start.real, start.imag
    if y0 < 0:
        raise ValueError("path must start in the closed upper half-plane")
    tail = mpf(0)
    if path.end is None:
        if factors[-1].kind != "cusp" or any(f.kind == "cusp" and f.alpha < 1 for f in factors):
            raise DivergentIntegralError("infinite paths need an exponentially damped top factor")
        if y0 == 0:
            raise ValueError("infinite paths must start inside the upper half-plane")
        top = mpf(path.height_cap) if path.height_cap is not None else _choose_height(factors, x, y0, budget)
        tail = _tail_bound(factors, x, y0, top, budget)
    else:
        end = mpc(path.end)
        if end.real != x or end.imag <= y0:
            raise ValueError("finite paths must go straight up")
        top = end.imag

    nodes = standard_nodes(path.degree, mp.prec)
    funcs = [_integrand(f, x, budget) for f in factors]
    panels = _refine(funcs, _panel_edges(path, y0, top), path, budget)

    if len(funcs) == 1:
        value = sum((p.totals[0] for p in panels), mpc(0))
        error = sum((p.diffs[0] for p in panels), mpf(0))
        return QuadResult(value=value, tail_bound=tail, panels=len(panels), error_estimate=error)

    lower, upper = funcs
    # suffix[p]: integral of the upper factor over panels p+1..end
    suffix = [mpc(0)] * len(panels)
    for p in range(len(panels) - 2, -1, -1):
        suffix[p] = suffix[p + 1] + panels[p + 1].totals[1]
    value = mpc(0)
    for p, panel in enumerate(panels):
        for y, w in _mapped(nodes, panel.a, panel.b):
            partial = sum(wi * upper(yi) for yi, wi in _mapped(nodes, y, panel.b))
            value += w * lower(y) * (partial + suffix[p])
    lower_mass = sum(abs(p.totals[0]) for p in panels)
    upper_mass = sum(abs(p.totals[1]) for p in panels)
    error = sum(p.diffs[0] * upper_mass + p.diffs[1] * lower_mass for p in panels)
    logger.debug("double quadrature over %d panels", len(panels))
    return QuadResult(value=value, tail_bound=tail, panels=len(panels), error_estimate=error)
