"""Length <= 2 multiple modular values of Eisenstein series.

All integrals are based at tau = i, the fixed point of S: tau -> -1/tau.

    R(f_1, .., f_r; a_1, .., a_r) = integral over i < t_1 < ... < t_r < i inf
    T(f_1, .., f_r; a_1, .., a_r) = integral over 0 < t_1 < ... < t_r < i

of prod f_j(t_j) t_j^(a_j - 1) dt_j, where each f_j is a cusp part E^0_{2k} or a
constant term E^inf_{2k}. Divergent T-integrals are regularized by analytic
continuation in the exponents, realized through the inversion tau -> -1/tau.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, List, Literal, Sequence, Tuple, Union

import mpmath
from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict, model_validator

from eisenstein_mmv.engines.eisenstein import SIEVE, bernoulli, eis_constant
from eisenstein_mmv.engines.integrals import int_eval
from eisenstein_mmv.engines.quadrature import IntegrandFactor, PathSpec, quad_oracle
from eisenstein_mmv.shared_libraries.core_algebra import CompositeIndex, make_index
from eisenstein_mmv.shared_libraries.errors import (
    DivergentIntegralError,
    InvalidIndexError,
    SingularExponentError,
)
from eisenstein_mmv.shared_libraries.precision import TruncationBudget, i_power, to_hp, truncation_order

logger = logging.getLogger(__name__)

CUSP_THEN_CONST = "cusp-then-const"
CONST_THEN_CUSP = "const-then-cusp"

Scalar = Union[Fraction, mpc, mpf]


def _i() -> mpc:
    return mpc(0, 1)


def _two_pi_i() -> mpc:
    return 2 * mp.pi * _i()


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


class FactorSymbol(BaseModel):
    """A factor of an iterated integral: the cusp part or the constant term of E_{2k}.

    Attributes:
        kind: "cusp" for E^0_{2k}, "const" for E^inf_{2k}.
        k: Half-weight.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["cusp", "const"]
    k: int


def cusp(k: int) -> FactorSymbol:
    return FactorSymbol(kind="cusp", k=k)


def const(k: int) -> FactorSymbol:
    return FactorSymbol(kind="const", k=k)


class BiPolynomial:
    """Homogeneous polynomial sum c_{a,b} X^a Y^b of fixed degree."""

    __slots__ = ("degree", "_coeffs")

    def __init__(self, degree: int, coeffs: Dict[Tuple[int, int], Scalar] = None):
        self.degree = degree
        self._coeffs: Dict[Tuple[int, int], Scalar] = {}
        for (a, b), c in (coeffs or {}).items():
            if a < 0 or b < 0 or a + b != degree:
                raise ValueError(f"monomial X^{a}Y^{b} is not of degree {degree}")
            if c != 0:
                self._coeffs[(a, b)] = c

    def coefficient(self, x_power: int, y_power: int) -> Scalar:
        if x_power + y_power != self.degree:
            raise ValueError(f"monomial X^{x_power}Y^{y_power} is not of degree {self.degree}")
        return self._coeffs.get((x_power, y_power), Fraction(0))

    def terms(self) -> List[Tuple[Tuple[int, int], Scalar]]:
        return sorted(self._coeffs.items(), reverse=True)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiPolynomial):
            return NotImplemented
        return self.degree == other.degree and self._coeffs == other._coeffs

    __hash__ = None

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*X^{a}*Y^{b}" for (a, b), c in self.terms()) or "0"
        return f"BiPolynomial({body})"


class MonomialCoefficientRequest(BaseModel):
    """Selects the coefficient of prod X_j^(2k_j - a_j - 1) Y_j^(a_j - 1).

    Attributes:
        ks: One or two half-weights.
        alphas: Exponent selectors, 1 <= a_j <= 2k_j - 1.
    """

    model_config = ConfigDict(frozen=True)

    ks: Tuple[int, ...]
    alphas: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_range(self) -> "MonomialCoefficientRequest":
        if len(self.ks) not in (1, 2) or len(self.ks) != len(self.alphas):
            raise ValueError(f"need one or two (k, alpha) pairs, got {self.ks}, {self.alphas}")
        for k, a in zip(self.ks, self.alphas):
            if k < 2:
                raise ValueError(f"half-weight must be >= 2, got {k}")
            if not 1 <= a <= 2 * k - 1:
                raise ValueError(f"alpha must lie in 1..{2 * k - 1} for k={k}, got {a}")
        return self

    @property
    def depth(self) -> int:
        return len(self.ks)

    @property
    def weight_exponent(self) -> int:
        return sum(2 * k for k in self.ks) - self.depth

    def reflected(self) -> "MonomialCoefficientRequest":
        return request(self.ks, [2 * k - a for k, a in zip(self.ks, self.alphas)])

    def swapped(self) -> "MonomialCoefficientRequest":
        return request(self.ks[::-1], self.alphas[::-1])

    def binomial(self) -> int:
        out = 1
        for k, a in zip(self.ks, self.alphas):
            out *= comb(2 * k - 2, a - 1)
        return out


def request(ks: Sequence[int], alphas: Sequence[int]) -> MonomialCoefficientRequest:
    return MonomialCoefficientRequest(ks=tuple(ks), alphas=tuple(alphas))


# ---------- DEPTH-ONE PRIMITIVES ----------


def T_const_closed(k: int, alpha: int) -> mpc:
    """T(E^inf_{2k}; alpha) = E^inf_{2k} i^alpha / alpha."""
    if alpha == 0:
        raise SingularExponentError("T of a constant diverges logarithmically", alpha)
    return to_hp(eis_constant(k)) * i_power(alpha) / alpha


@lru_cache(maxsize=None)
def _r_cusp_gamma(k: int, beta: int, budget: TruncationBudget, prec: int) -> mpc:
    x = mpmath.exp(-2 * mp.pi)
    n_cut = truncation_order(2 * k, x, budget)
    if beta > 1:
        # Gamma(beta, y) <= 2 y^(beta-1) e^(-y) needs y >= 2(beta-1)
        n_cut = max(n_cut, int(mpmath.ceil((beta - 1) / mp.pi)))
    sigma = SIEVE.table_hp(2 * k - 1, max(n_cut, 1))
    total = mpf(0)
    for n in range(1, n_cut + 1):
        y = 2 * mp.pi * n
        total += sigma[n] * y ** (-beta) * mpmath.gammainc(beta, y)
    return i_power(beta) * total


def R_cusp_gamma(k: int, beta: int, budget: TruncationBudget) -> mpc:
    """R(E^0_{2k}; beta) for any integer beta as
    sum_n sigma(n) i^beta (2 pi n)^(-beta) Gamma(beta, 2 pi n)."""
    return _r_cusp_gamma(k, beta, budget, mp.prec)


@lru_cache(maxsize=None)
def _rho(k: int, beta: int, budget: TruncationBudget, prec: int) -> mpc:
    if beta >= 1:
        return int_eval(make_index([k], [beta]), _i(), budget)
    return _r_cusp_gamma(k, beta, budget, prec)


def rho(k: int, beta: int, budget: TruncationBudget) -> mpc:
    """R(E^0_{2k}; beta): closed exp-poly form for beta >= 1, incomplete gamma otherwise."""
    return _rho(k, beta, budget, mp.prec)


@lru_cache(maxsize=None)
def _t_cusp_reg(k: int, m: int, budget: TruncationBudget, prec: int) -> mpc:
    if m in (0, 2 * k):
        raise SingularExponentError(f"T(E^0_{2 * k}; m) is singular", m)
    a = 2 * k - m
    return _sign(m) * (rho(k, a, budget) - T_const_closed(k, a)) - T_const_closed(k, m)


def T_cusp_reg(k: int, m: int, budget: TruncationBudget) -> mpc:
    """Regularized T(E^0_{2k}; m) = (-1)^m [R(E^0; 2k-m) - T(E^inf; 2k-m)] - T(E^inf; m)."""
    return _t_cusp_reg(k, m, budget, mp.prec)


def T_cusp_quadrature(k: int, m: int, budget: TruncationBudget, degree: int = 5) -> mpc:
    """T(E^0_{2k}; m) for m > 2k, where the integral converges at 0, by direct quadrature."""
    if m <= 2 * k:
        raise DivergentIntegralError(f"T(E^0_{2 * k}; {m}) diverges at 0; use T_cusp_reg")
    path = PathSpec(start=mpc(0), end=_i(), degree=degree)
    return quad_oracle([IntegrandFactor(kind="cusp", k=k, alpha=m)], path, budget).value


def T_mixed_reduce(
    kind: str,
    k_cusp: int,
    k_const: int,
    alpha_cusp: int,
    beta: int,
    budget: TruncationBudget,
) -> mpc:
    """T-integrals mixing one cusp part and one constant term.

    cusp-then-const: T(E^0, E^inf; alpha, beta) = (c/beta)[i^beta T(alpha) - T(alpha+beta)]
    const-then-cusp: T(E^inf, E^0; beta, alpha) = (c/beta) T(alpha+beta)
    """
    if beta == 0:
        raise SingularExponentError("constant factor with exponent 0", beta)
    c = to_hp(eis_constant(k_const)) / beta
    if kind == CUSP_THEN_CONST:
        inner = T_cusp_reg(k_cusp, alpha_cusp, budget)
        return c * (i_power(beta) * inner - T_cusp_reg(k_cusp, alpha_cusp + beta, budget))
    if kind == CONST_THEN_CUSP:
        return c * T_cusp_reg(k_cusp, alpha_cusp + beta, budget)
    raise ValueError(f"unknown mixed kind {kind!r}")


def t_bracket(fn, upper: int, lower: int) -> mpc:
    """The bracket [upper; lower] of an exponent slot: fn(upper) - fn(lower)."""
    return fn(upper) - fn(lower)


def T_const_const(k1: int, k2: int, beta1: int, beta2: int, exponent_rule: str = "sum") -> mpc:
    """T(E^inf_1, E^inf_2; b1, b2) = c1 c2 i^(b1+b2) / (b1 (b1+b2)).

    ``exponent_rule="product"`` evaluates the variant with i^(b1*b2); it is kept
    only for the oracle comparison.
    """
    if beta1 == 0:
        raise SingularExponentError("inner constant with exponent 0", beta1)
    if beta1 + beta2 == 0:
        raise SingularExponentError("total constant exponent 0", beta1 + beta2)
    power = beta1 + beta2 if exponent_rule == "sum" else beta1 * beta2
    c = to_hp(eis_constant(k1) * eis_constant(k2))
    return c * i_power(power) / (beta1 * (beta1 + beta2))


# ---------- R FROM i TO i inf ----------


def R_iter(factors: Sequence[FactorSymbol], alphas: Sequence[int], budget: TruncationBudget) -> mpc:
    """R(f_1, .., f_r; a_1, .., a_r) for r <= 2, factors listed from i upward.

    Raises:
        DivergentIntegralError: when a stage is not damped toward i inf.
    """
    factors = list(factors)
    alphas = list(alphas)
    if len(factors) != len(alphas) or not 1 <= len(factors) <= 2:
        raise InvalidIndexError(f"R needs one or two factors with matching exponents, got {factors}, {alphas}")
    kinds = tuple(f.kind for f in factors)
    if kinds == ("cusp",):
        return rho(factors[0].k, alphas[0], budget)
    if kinds == ("const",):
        a = alphas[0]
        if a >= 0:
            raise DivergentIntegralError(f"R(E^inf; {a}) diverges")
        return -to_hp(eis_constant(factors[0].k)) * i_power(a) / a
    (f1, f2), (a1, a2) = factors, alphas
    if kinds == ("cusp", "cusp"):
        if a1 < 1 or a2 < 1:
            raise InvalidIndexError(f"R(E^0, E^0) is evaluated for exponents >= 1, got {a1}, {a2}")
        return int_eval(make_index([f1.k, f2.k], [a1, a2]), _i(), budget)
    if kinds == ("const", "cusp"):
        if a1 == 0:
            raise SingularExponentError("inner constant with exponent 0", a1)
        c = to_hp(eis_constant(f1.k)) / a1
        return c * (rho(f2.k, a1 + a2, budget) - i_power(a1) * rho(f2.k, a2, budget))
    if kinds == ("cusp", "const"):
        if a2 >= 0:
            raise DivergentIntegralError(f"R(E^0, E^inf; {a1}, {a2}) diverges")
        return -to_hp(eis_constant(f2.k)) / a2 * rho(f1.k, a1 + a2, budget)
    if a2 >= 0 or a1 + a2 >= 0:
        raise DivergentIntegralError(f"R(E^inf, E^inf; {a1}, {a2}) diverges")
    c = to_hp(eis_constant(f1.k) * eis_constant(f2.k))
    return c * i_power(a1 + a2) / (a2 * (a1 + a2))


# ---------- EICHLER AND COCYCLE COEFFICIENTS ----------


def I_coeff(req: MonomialCoefficientRequest, budget: TruncationBudget) -> mpc:
    """Coefficient of the iterated Eichler integral from i to i inf."""
    p = _sign(sum(req.alphas)) * _two_pi_i() ** req.weight_exponent * req.binomial()
    if req.depth == 1:
        (k,), (a,) = req.ks, req.alphas
        return p * (rho(k, a, budget) - T_const_closed(k, a))
    (k1, k2), (a1, a2) = req.ks, req.alphas
    bracket = (
        R_iter([cusp(k1), cusp(k2)], [a1, a2], budget)
        + R_iter([const(k1), cusp(k2)], [a1, a2], budget)
        - R_iter([const(k2), cusp(k1)], [a2, a1], budget)
        - rho(k1, a1, budget) * T_const_closed(k2, a2)
        + T_const_const(k2, k1, a2, a1)
    )
    return p * bracket


def S_coeff(req: MonomialCoefficientRequest, budget: TruncationBudget) -> mpc:
    """Coefficient of the cocycle C_S."""
    if req.depth == 1:
        (k,), (a,) = req.ks, req.alphas
        return I_coeff(req, budget) - _sign(a - 1) * I_coeff(request([k], [2 * k - a]), budget)
    (k1, k2), (a1, a2) = req.ks, req.alphas
    return (
        I_coeff(req, budget)
        - _sign(a1 + a2) * I_coeff(req.reflected(), budget)
        - _sign(a1 - 1) * I_coeff(request([k1], [2 * k1 - a1]), budget) * S_coeff(request([k2], [a2]), budget)
    )


def e0_cocycle_S(k: int) -> BiPolynomial:
    """Rational cocycle (2k-2)!/2 sum_i b_{2i}/(2i)! b_{2k-2i}/(2k-2i)! X^(2i-1) Y^(2k-2i-1)."""
    if k < 2:
        raise InvalidIndexError(f"half-weight must be >= 2, got {k}")
    lead = Fraction(factorial(2 * k - 2), 2)
    coeffs = {}
    for i in range(1, k):
        c = bernoulli(2 * i) / factorial(2 * i) * bernoulli(2 * k - 2 * i) / factorial(2 * k - 2 * i)
        coeffs[(2 * i - 1, 2 * k - 2 * i - 1)] = lead * c
    return BiPolynomial(2 * k - 2, coeffs)


def zeta_odd(s: int, budget: TruncationBudget) -> mpf:
    """zeta(s) for odd s >= 3 by Euler-Maclaurin.

    Direct sum to N-1, the integral and midpoint corrections N^(1-s)/(s-1) + N^(-s)/2,
    then Bernoulli corrections until the next one is below eps; the remainder is
    bounded by that first omitted correction.
    """
    if s < 3 or s % 2 == 0:
        raise InvalidIndexError(f"zeta_odd needs an odd s >= 3, got {s}")
    n = 20 + mp.dps
    big = mpf(n)
    total = mpmath.fsum(mpf(m) ** -s for m in range(1, n))
    total += big ** (1 - s) / (s - 1) + big ** (-s) / 2
    rising = mpf(s)
    j = 1
    while True:
        term = to_hp(bernoulli(2 * j)) / factorial(2 * j) * rising * big ** (-s - 2 * j + 1)
        if abs(term) < budget.eps_hp:
            return total
        total += term
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        j += 1


def haberland_rhs(k: int, alpha: int, budget: TruncationBudget) -> mpc:
    """(2 pi i)^(2k-1) e0 coefficient at X^(2k-a-1) Y^(a-1) + (2k-2)!/2 zeta(2k-1)(d_{a,1} - d_{a,2k-1})."""
    coefficient = e0_cocycle_S(k).coefficient(2 * k - alpha - 1, alpha - 1)
    value = _two_pi_i() ** (2 * k - 1) * to_hp(coefficient)
    delta = (1 if alpha == 1 else 0) - (1 if alpha == 2 * k - 1 else 0)
    if delta:
        value += delta * mpf(factorial(2 * k - 2)) / 2 * zeta_odd(2 * k - 1, budget)
    return value


# ---------- REGULARIZED VALUES AT 0 ----------


def _check_int0_depth2(index: CompositeIndex) -> Tuple[int, int, int, int]:
    (k1, k2), (a1, a2) = index.ks, index.alphas
    for k, a in ((k1, a1), (k2, a2)):
        if not 1 <= a <= 2 * k - 1:
            raise InvalidIndexError(f"alpha must lie in 1..{2 * k - 1} for k={k}, got {a}")
    m = a1 + a2
    if m in (2 * k1, 2 * k2):
        raise SingularExponentError("regularized value is singular at a1 + a2 = 2k", m)
    return k1, k2, a1, a2


def _int0_depth1(index: CompositeIndex, budget: TruncationBudget) -> mpc:
    (k,), (m,) = index.ks, index.alphas
    return rho(k, m, budget) + T_cusp_reg(k, m, budget)


def int0_reg(index: CompositeIndex, budget: TruncationBudget) -> mpc:
    """Regularized Int(index)(0) for depth 1 or 2, split at i."""
    if index.depth == 1:
        return _int0_depth1(index, budget)
    if index.depth != 2:
        raise InvalidIndexError(f"regularized values at 0 are limited to depth 2, got {index.depth}")
    k1, k2, a1, a2 = _check_int0_depth2(index)
    m = a1 + a2
    r12 = R_iter([cusp(k1), cusp(k2)], [a1, a2], budget)
    r21 = R_iter([cusp(k2), cusp(k1)], [2 * k2 - a2, 2 * k1 - a1], budget)
    a_zero = -T_cusp_reg(k1, a1, budget) * rho(k2, a2, budget)

    def cusp_const(gamma: int) -> mpc:
        return T_mixed_reduce(CUSP_THEN_CONST, k1, k2, a1, gamma, budget)

    def const_cusp(gamma: int) -> mpc:
        return T_mixed_reduce(CONST_THEN_CUSP, k2, k1, a2, gamma, budget)

    a_prime = -t_bracket(cusp_const, a2 - 2 * k2, a2) - t_bracket(const_cusp, a1 - 2 * k1, a1)
    a_inf = mpc(0)
    for g1, s1 in ((a1 - 2 * k1, 1), (a1, -1)):
        for g2, s2 in ((a2 - 2 * k2, 1), (a2, -1)):
            a_inf += s1 * s2 * T_const_const(k1, k2, g1, g2)
    return r12 + _sign(m) * r21 - a_zero - a_prime - a_inf


def int0_reg_inverted(index: CompositeIndex, budget: TruncationBudget) -> mpc:
    """Depth-2 regularized value by inverting T(E^0_1, E^0_2) directly.

    Under tau = -1/w each letter E^0(tau) tau^(a-1) dtau becomes
    (-1)^(a-1)[E^0(w) w^(2k-a-1) + c w^(2k-a-1) - c w^(-a-1)] dw, and the T-integral
    turns into an R-integral with the letters reversed.
    """
    k1, k2, a1, a2 = _check_int0_depth2(index)
    m = a1 + a2
    b1, b2 = 2 * k1 - a1, 2 * k2 - a2
    c1, c2 = to_hp(eis_constant(k1)), to_hp(eis_constant(k2))
    r21 = R_iter([cusp(k2), cusp(k1)], [b2, b1], budget)
    first = [(b1, 1), (-a1, -1)]
    second = [(b2, 1), (-a2, -1)]
    m1 = sum(s * (-c1 / g) * rho(k2, b2 + g, budget) for g, s in first)
    m2 = sum(s * (c2 / g) * (rho(k1, b1 + g, budget) - i_power(g) * rho(k1, b1, budget)) for g, s in second)
    konst = mpc(0)
    for g1, s1 in first:
        for g2, s2 in second:
            konst += s1 * s2 * c1 * c2 * i_power(g1 + g2) / (g1 * (g1 + g2))
    t12 = _sign(m) * (r21 + m1 + m2 + konst)
    r12 = R_iter([cusp(k1), cusp(k2)], [a1, a2], budget)
    return t12 + r12 + T_cusp_reg(k1, a1, budget) * rho(k2, a2, budget)


def l_value_at_zero(k: int, m: int) -> mpc:
    """Mellin value Int(E^0_{2k}; m)(0) = i^m (m-1)! (2 pi)^(-m) zeta(m) zeta(m-2k+1)."""
    if m < 2 or m == 2 * k:
        raise SingularExponentError("Mellin value needs m >= 2 and m != 2k", m)
    return i_power(m) * factorial(m - 1) * (2 * mp.pi) ** (-m) * mpmath.zeta(m) * mpmath.zeta(m - 2 * k + 1)


# ---------- FIRST DIFFERENCE ----------

PRINTED = "printed"
REDERIVED = "rederived"


def first_difference_lhs(req: MonomialCoefficientRequest, budget: TruncationBudget) -> mpc:
    return S_coeff(req, budget) - S_coeff(req.swapped(), budget)


def first_difference_rhs(req: MonomialCoefficientRequest, variant: str, budget: TruncationBudget) -> mpc:
    """Right-hand side assembled from regularized values at 0.

    ``printed`` carries -b/(2k a) weights and the constant
    b1 b2 (a2 - a1)/(8 k1 k2 a1 a2 (a1 + a2)); ``rederived`` has +b/(2k a) weights
    and no constant term.
    """
    if req.depth != 2:
        raise InvalidIndexError("the first-difference identity is a depth-2 statement")
    (k1, k2), (a1, a2) = req.ks, req.alphas
    m = a1 + a2
    prefactor = _sign(m) * _two_pi_i() ** req.weight_exponent * req.binomial()
    j12 = int0_reg(make_index([k1, k2], [a1, a2]), budget)
    j21 = int0_reg(make_index([k2, k1], [a2, a1]), budget)
    j1 = int0_reg(make_index([k1], [m]), budget)
    j2 = int0_reg(make_index([k2], [m]), budget)
    w1 = to_hp(bernoulli(2 * k1) / (2 * k1 * a1))
    w2 = to_hp(bernoulli(2 * k2) / (2 * k2 * a2))
    if variant == PRINTED:
        constant = bernoulli(2 * k1) * bernoulli(2 * k2) * (a2 - a1) / Fraction(8 * k1 * k2 * a1 * a2 * m)
        return prefactor * (j12 - w2 * j1 - (j21 - w1 * j2) + to_hp(constant))
    if variant == REDERIVED:
        return prefactor * (j12 - j21 + w2 * j1 - w1 * j2)
    raise ValueError(f"unknown first-difference variant {variant!r}")
