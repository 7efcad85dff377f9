"""Multiple Eisenstein L-series.

    L^(t)(k_1..k_r; a_1..a_r)(tau) = tau^t (2 pi i)^(-sum a) sum_m c(m) q^m

with c(m) the sum over compositions n_1 + ... + n_r = m of
prod sigma_{2k_j-1}(n_j) / prod (n_j + ... + n_r)^(a_j).
"""

import itertools
import logging
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

import mpmath
import pandas as pd
from mpmath import mp, mpc, mpf

from eisenstein_mmv.engines.eisenstein import SIEVE, nome
from eisenstein_mmv.shared_libraries.core_algebra import CompositeIndex, format_rational
from eisenstein_mmv.shared_libraries.errors import InvalidIndexError, OracleLimitError
from eisenstein_mmv.shared_libraries.precision import (
    TruncationBudget,
    power_geometric_tail,
    to_hp,
    truncation_order,
)

logger = logging.getLogger(__name__)

BRUTEFORCE_MAX_DEPTH = 4
BRUTEFORCE_MAX_ORDER = 200
LOW_TAU_WARNING = 0.1


class LCoefficients:
    """Exact coefficients c(1..N) of L^(0) for one index.

    Attributes:
        index: The index, with t normalized to 0.
        n: Truncation order N.
        coeffs: c(m) for m = 1..N, stored at position m-1.
    """

    __slots__ = ("index", "n", "coeffs")

    def __init__(self, index: CompositeIndex, n: int, coeffs: Tuple[Fraction, ...]):
        self.index = index
        self.n = n
        self.coeffs = tuple(coeffs)

    def c(self, m: int) -> Fraction:
        return self.coeffs[m - 1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LCoefficients):
            return NotImplemented
        return (self.index, self.n, self.coeffs) == (other.index, other.n, other.coeffs)

    __hash__ = None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"m": list(range(1, self.n + 1)), "c": [format_rational(c) for c in self.coeffs]}
        )


def _check_series_index(index: CompositeIndex, n: int) -> CompositeIndex:
    if index.depth < 1:
        raise InvalidIndexError("coefficient tables need depth >= 1")
    if n < 1:
        raise InvalidIndexError(f"truncation order must be >= 1, got {n}")
    return index.with_t(0)


@lru_cache(maxsize=256)
def _dp(index: CompositeIndex, n: int) -> LCoefficients:
    sigmas = [SIEVE.table(2 * k - 1, n) for k in index.ks]
    alphas = index.alphas
    r = index.depth
    # s[m] = S_j(m); s[0] unused
    s: List[Fraction] = [Fraction(0)] + [
        Fraction(sigmas[r - 1][m], m ** alphas[r - 1]) for m in range(1, n + 1)
    ]
    for j in range(r - 2, -1, -1):
        sig = sigmas[j]
        nxt = [Fraction(0)] * (n + 1)
        for m in range(2, n + 1):
            acc = sum((sig[i] * s[m - i] for i in range(1, m)), Fraction(0))
            nxt[m] = acc / m ** alphas[j]
        s = nxt
    return LCoefficients(index, n, tuple(s[1:]))


def l_coeffs_dp(index: CompositeIndex, n: int) -> LCoefficients:
    """c(1..N) by the backward recursion over partial sums, O(r N^2) exact operations."""
    return _dp(_check_series_index(index, n), n)


def l_coeffs_bruteforce(index: CompositeIndex, n: int) -> LCoefficients:
    """c(1..N) by enumerating every composition; reference for ``l_coeffs_dp``."""
    index = _check_series_index(index, n)
    if index.depth > BRUTEFORCE_MAX_DEPTH or n > BRUTEFORCE_MAX_ORDER:
        raise OracleLimitError(
            f"brute force limited to depth <= {BRUTEFORCE_MAX_DEPTH} and N <= {BRUTEFORCE_MAX_ORDER},"
            f" got depth {index.depth}, N {n}"
        )
    r = index.depth
    sigmas = [SIEVE.table(2 * k - 1, n) for k in index.ks]
    coeffs = []
    for m in range(1, n + 1):
        total = Fraction(0)
        for cuts in itertools.combinations(range(1, m), r - 1):
            bounds = (0,) + cuts + (m,)
            parts = [bounds[j + 1] - bounds[j] for j in range(r)]
            numerator = 1
            denominator = 1
            tail = m
            for j in range(r):
                numerator *= sigmas[j][parts[j]]
                denominator *= tail ** index.alphas[j]
                tail -= parts[j]
            total += Fraction(numerator, denominator)
        coeffs.append(total)
    return LCoefficients(index, n, tuple(coeffs))


def coefficient_degree(index: CompositeIndex) -> int:
    """Exponent D of the majorant c(m) <= m^D."""
    return 2 * index.upper_weight + index.depth - 1


@lru_cache(maxsize=256)
def _coeffs_hp(index: CompositeIndex, n: int, prec: int) -> Tuple[mpf, ...]:
    return tuple(to_hp(c) for c in l_coeffs_dp(index, n).coeffs)


def tau_power(tau: mpc, t: int) -> mpc:
    out = mpc(1)
    for _ in range(t):
        out *= tau
    return out


def l_eval_certified(index: CompositeIndex, tau: mpc, budget: TruncationBudget) -> Tuple[mpc, mpf, int]:
    """Value, certified tail bound and truncation order of L^(t)(index)(tau)."""
    tau = mpc(tau)
    if index.depth == 0:
        return tau_power(tau, index.t), mpf(0), 0
    if tau.imag < LOW_TAU_WARNING:
        logger.warning("Im tau = %s is small; the q-series needs many terms", mpmath.nstr(tau.imag, 5))
    q = nome(tau)
    x = abs(q)
    weight = sum(index.alphas)
    prefactor = (2 * mp.pi * mpc(0, 1)) ** (-weight) * tau_power(tau, index.t)
    scale = abs(prefactor)
    degree = coefficient_degree(index)
    n = truncation_order(degree, x, budget, scale)
    bound = scale * power_geometric_tail(degree, x, n)
    if n == 0:
        return mpc(0), bound, 0
    coeffs = _coeffs_hp(index.with_t(0), n, mp.prec)
    acc = mpc(0)
    for c in reversed(coeffs):
        acc = acc * q + c
    return prefactor * acc * q, bound, n


def l_eval(index: CompositeIndex, tau: mpc, budget: TruncationBudget) -> mpc:
    """L^(t)(index)(tau); depth 0 gives tau^t (1 when t = 0)."""
    value, _, _ = l_eval_certified(index, tau, budget)
    return value


def export_coefficients(coeffs: LCoefficients, path: str) -> None:
    """Write (m, c(m)) rows as CSV with c(m) rendered "p/q"."""
    coeffs.to_frame().to_csv(path, index=False)
    logger.info("wrote %d coefficients of %s to %s", coeffs.n, coeffs.index, path)
