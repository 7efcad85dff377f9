"""Closed-form evaluation of iterated Eisenstein tau-integrals.

    Int(k_1..k_r; a_1..a_r)(tau) = int_{tau < t_1 < ... < t_r < i inf}
                                   prod E^0_{2k_j}(t_j) t_j^(a_j - 1) dt_j

Each layer is carried as an ``ExpPoly``, a finite sum of polynomials in t times
exp(2 pi i n t), on which tail integration is exact.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Sequence, Tuple

import mpmath
from mpmath import mp, mpc, mpf

from eisenstein_mmv.engines.eisenstein import SIEVE, nome
from eisenstein_mmv.engines.lseries import coefficient_degree
from eisenstein_mmv.engines.rewrite import int_to_l
from eisenstein_mmv.shared_libraries.core_algebra import CompositeIndex, falling_factorial
from eisenstein_mmv.shared_libraries.errors import DivergentIntegralError, InvalidIndexError
from eisenstein_mmv.shared_libraries.precision import (
    TruncationBudget,
    format_complex,
    power_geometric_tail,
    to_hp,
    truncation_order,
)

logger = logging.getLogger(__name__)

MAX_DEPTH = 6

Poly = Tuple[mpc, ...]


def _trim(poly: Sequence) -> Poly:
    coeffs = [mpc(c) for c in poly]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _poly_add(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    return _trim([a[i] + (b[i] if i < len(b) else 0) for i in range(len(a))])


def _poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [mpc(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_eval(poly: Poly, t: mpc) -> mpc:
    acc = mpc(0)
    for c in reversed(poly):
        acc = acc * t + c
    return acc


def _two_pi_i_n(n: int) -> mpc:
    return 2 * mp.pi * n * mpc(0, 1)


class ExpPoly:
    """f(t) = sum_n P_n(t) exp(2 pi i n t) with complex polynomial coefficients.

    Immutable; frequencies with a vanishing polynomial are not stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Sequence] = None):
        normalized: Dict[int, Poly] = {}
        for n, poly in (terms or {}).items():
            if n < 0:
                raise ValueError(f"frequencies must be nonnegative, got {n}")
            poly = _trim(poly)
            if poly:
                normalized[int(n)] = poly
        self._terms = normalized

    @classmethod
    def from_cusp_series(cls, k: int, n_cut: int) -> "ExpPoly":
        """E^0_{2k} truncated after frequency n_cut."""
        sigma = SIEVE.table_hp(2 * k - 1, max(n_cut, 1))
        return cls({n: (sigma[n],) for n in range(1, n_cut + 1)})

    @property
    def frequencies(self) -> List[int]:
        return sorted(self._terms)

    def poly(self, n: int) -> Poly:
        return self._terms.get(n, ())

    def is_zero(self) -> bool:
        return not self._terms

    def scale(self, c) -> "ExpPoly":
        c = mpc(c)
        return ExpPoly({n: [c * x for x in p] for n, p in self._terms.items()})

    def add(self, other: "ExpPoly") -> "ExpPoly":
        merged = dict(self._terms)
        for n, p in other._terms.items():
            merged[n] = _poly_add(merged.get(n, ()), p)
        return ExpPoly(merged)

    def mul_power(self, m: int) -> "ExpPoly":
        """Multiply by t^m, m >= 0."""
        if m < 0:
            raise ValueError("only nonnegative powers of t stay inside ExpPoly")
        return ExpPoly({n: (mpc(0),) * m + p for n, p in self._terms.items()})

    def mul(self, other: "ExpPoly", n_cut: int = None) -> "ExpPoly":
        """Product, dropping frequencies above n_cut when given."""
        out: Dict[int, Poly] = {}
        mine = self.frequencies
        theirs = other.frequencies
        for a in mine:
            for b in theirs:
                n = a + b
                if n_cut is not None and n > n_cut:
                    break
                out[n] = _poly_add(out.get(n, ()), _poly_mul(self._terms[a], other._terms[b]))
        return ExpPoly(out)

    def derivative(self) -> "ExpPoly":
        """d/dt of (P e^{lambda t}) is (P' + lambda P) e^{lambda t}."""
        out = {}
        for n, p in self._terms.items():
            lam = _two_pi_i_n(n)
            dp = [i * p[i] for i in range(1, len(p))]
            out[n] = _poly_add(tuple(dp), tuple(lam * c for c in p))
        return ExpPoly(out)

    def evaluate(self, t: mpc) -> mpc:
        t = mpc(t)
        total = mpc(0)
        for n, p in self._terms.items():
            total += _poly_eval(p, t) * mpmath.expjpi(2 * n * t)
        return total

    def max_abs_difference(self, other: "ExpPoly") -> mpf:
        diff = self.add(other.scale(-1))
        return max((abs(c) for n in diff.frequencies for c in diff.poly(n)), default=mpf(0))

    def dump(self) -> str:
        """One line "n; c0, c1, ..." per frequency."""
        lines = []
        for n in self.frequencies:
            lines.append(f"{n}; " + ", ".join(format_complex(c) for c in self._terms[n]))
        return "\n".join(lines)


def elem_exp_tail(n: int, alpha: int, a: mpc) -> mpc:
    """int_a^{i inf} exp(2 pi i n t) t^(alpha-1) dt in closed form."""
    if n < 1 or alpha < 1:
        raise InvalidIndexError(f"elem_exp_tail needs n >= 1 and alpha >= 1, got {n}, {alpha}")
    a = mpc(a)
    if a.imag <= 0:
        raise ValueError(f"base point must lie in the upper half-plane, got {a}")
    lam = _two_pi_i_n(n)
    total = mpc(0)
    for j in range(alpha):
        term = falling_factorial(alpha - 1, j) * a ** (alpha - 1 - j) / lam ** (j + 1)
        total += -term if j % 2 else term
    return -mpmath.expjpi(2 * n * a) * total


def exppoly_tail_integral(f: ExpPoly, alpha: int) -> ExpPoly:
    """g(t) = int_t^{i inf} f(s) s^(alpha-1) ds, termwise.

    Raises:
        DivergentIntegralError: if f has a nonzero frequency-0 part.
    """
    if alpha < 1:
        raise InvalidIndexError(f"tail integration needs alpha >= 1, got {alpha}")
    if f.poly(0):
        raise DivergentIntegralError("frequency-0 part is nonzero; the tail integral diverges")
    out = {}
    for n in f.frequencies:
        lam = _two_pi_i_n(n)
        shifted = f.mul_power(alpha - 1).poly(n)
        g = [mpc(0)] * len(shifted)
        for p, c in enumerate(shifted):
            if c == 0:
                continue
            lam_pow = lam
            for j in range(p + 1):
                term = c * falling_factorial(p, j) / lam_pow
                g[p - j] += term if j % 2 else -term
                lam_pow *= lam
        out[n] = g
    return ExpPoly(out)


def _check_integral_index(index: CompositeIndex) -> None:
    if index.depth > MAX_DEPTH:
        raise InvalidIndexError(f"iterated integrals are limited to depth {MAX_DEPTH}, got {index.depth}")


@lru_cache(maxsize=None)
def _conversion_weight(index: CompositeIndex) -> Fraction:
    """Sum of |coefficients| of the L-series expansion of Int(index)."""
    return sum((abs(c) for _, c in int_to_l(index)), Fraction(0))


@lru_cache(maxsize=256)
def _int_exppoly(index: CompositeIndex, n_cut: int, prec: int) -> ExpPoly:
    layers = list(zip(index.ks, index.alphas))
    k, alpha = layers[-1]
    g = exppoly_tail_integral(ExpPoly.from_cusp_series(k, n_cut), alpha)
    for k, alpha in reversed(layers[:-1]):
        f = ExpPoly.from_cusp_series(k, n_cut).mul(g, n_cut)
        g = exppoly_tail_integral(f, alpha)
    return g


def int_frequency_cut(index: CompositeIndex, tau: mpc, budget: TruncationBudget) -> Tuple[int, mpf]:
    """Frequency cut N and the certified bound on everything dropped above it.

    Frequencies <= N of the layered product are exact, so the error is the
    q-tail of the L-series expansion: at most W * sum_{m>N} m^D |q|^m, with W
    the l1-norm of the conversion coefficients times max(1, |tau|)^(sum alpha).
    """
    x = abs(nome(tau))
    weight = to_hp(_conversion_weight(index)) * max(mpf(1), abs(mpc(tau))) ** sum(index.alphas)
    degree = coefficient_degree(index)
    n = truncation_order(degree, x, budget, weight)
    return n, weight * power_geometric_tail(degree, x, n)


def int_eval_certified(index: CompositeIndex, tau: mpc, budget: TruncationBudget) -> Tuple[mpc, mpf, int]:
    """Value, certified tail bound and frequency cut of Int(index)(tau)."""
    tau = mpc(tau)
    if tau.imag <= 0:
        raise ValueError(f"tau must lie in the upper half-plane, got {tau}")
    if index.depth == 0:
        return mpc(1), mpf(0), 0
    _check_integral_index(index)
    n, bound = int_frequency_cut(index, tau, budget)
    if n == 0:
        return mpc(0), bound, 0
    g = _int_exppoly(index.with_t(0), n, mp.prec)
    return g.evaluate(tau), bound, n


def int_eval(index: CompositeIndex, tau: mpc, budget: TruncationBudget) -> mpc:
    """Int(index)(tau); depth 0 gives 1."""
    value, _, _ = int_eval_certified(index, tau, budget)
    return value
