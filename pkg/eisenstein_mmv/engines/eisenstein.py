"""Divisor sums, Bernoulli numbers and Hecke-normalized Eisenstein series.

E_{2k}(tau) = E^inf_{2k} + E^0_{2k}(tau) with constant term -b_{2k}/(4k) and cusp
part sum_{n>0} sigma_{2k-1}(n) q^n, q = exp(2 pi i tau).
"""

import logging
import threading
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Tuple

import mpmath
from mpmath import mp, mpc, mpf

from eisenstein_mmv.shared_libraries.errors import InvalidIndexError, PrecisionSelfTestError
from eisenstein_mmv.shared_libraries.precision import TruncationBudget, to_hp, truncation_order

logger = logging.getLogger(__name__)

# beyond this a single sigma is computed by trial division instead of a sieve
_SIEVE_LIMIT = 2_000_000


def _sieve(w: int, size: int) -> List[int]:
    table = [0] * size
    for d in range(1, size):
        p = d**w
        for m in range(d, size, d):
            table[m] += p
    return table


class DivisorSieve:
    """Shared memo of sigma_w(0..N) tables, grown on demand.

    Tables are replaced wholesale under a lock and never mutated after being
    published, so readers need no lock.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._tables: Dict[int, List[int]] = {}
        self._hp_tables: Dict[Tuple[int, int], List[mpf]] = {}

    def table(self, w: int, n: int) -> List[int]:
        current = self._tables.get(w)
        if current is not None and len(current) > n:
            return current
        with self._lock:
            current = self._tables.get(w)
            if current is None or len(current) <= n:
                size = max(n + 1, 2 * len(current) if current else 64)
                logger.debug("sieving sigma_%d up to %d", w, size - 1)
                current = _sieve(w, size)
                self._tables[w] = current
        return current

    def table_hp(self, w: int, n: int) -> List[mpf]:
        """sigma_w as working-precision floats; keyed by precision too."""
        key = (w, mp.prec)
        current = self._hp_tables.get(key)
        if current is not None and len(current) > n:
            return current
        exact = self.table(w, n)
        with self._lock:
            current = self._hp_tables.get(key)
            if current is None or len(current) <= n:
                current = [mpf(v) for v in exact]
                self._hp_tables[key] = current
        return current


SIEVE = DivisorSieve()


def divisor_sigma(w: int, n: int) -> int:
    """Exact sum of d**w over the divisors d of n."""
    if w < 3 or w % 2 == 0:
        raise InvalidIndexError(f"divisor power must be odd and >= 3, got {w}")
    if n < 1:
        raise InvalidIndexError(f"divisor_sigma needs n >= 1, got {n}")
    if n > _SIEVE_LIMIT:
        total = 0
        d = 1
        while d * d <= n:
            if n % d == 0:
                total += d**w
                if d * d != n:
                    total += (n // d) ** w
            d += 1
        return total
    return SIEVE.table(w, n)[n]


@lru_cache(maxsize=None)
def _bernoulli_table(m: int) -> Tuple[Fraction, ...]:
    # sum_{j=0}^{n} C(n+1, j) b_j = 0, b_0 = 1, b_1 = -1/2
    values = [Fraction(1)]
    for n in range(1, m + 1):
        s = sum(comb(n + 1, j) * values[j] for j in range(n))
        values.append(-s / (n + 1))
    return tuple(values)


def bernoulli(m: int) -> Fraction:
    """Exact Bernoulli number b_m for even m >= 2."""
    if m < 2 or m % 2:
        raise InvalidIndexError(f"bernoulli needs an even index >= 2, got {m}")
    return _bernoulli_table(m)[m]


def eis_constant(k: int) -> Fraction:
    """Constant term E^inf_{2k} = -b_{2k}/(4k)."""
    if k < 2:
        raise InvalidIndexError(f"half-weight must be >= 2, got {k}")
    return -bernoulli(2 * k) / (4 * k)


def nome(tau: mpc) -> mpc:
    tau = mpc(tau)
    if tau.imag <= 0:
        raise ValueError(f"tau must lie in the upper half-plane, got {tau}")
    return mpmath.expjpi(2 * tau)


def cusp_truncation(k: int, tau: mpc, budget: TruncationBudget) -> int:
    """Certified truncation order for E^0_{2k} at tau, using sigma_{2k-1}(n) <= n^{2k}."""
    return truncation_order(2 * k, abs(nome(tau)), budget)


def eis_cusp_eval(k: int, tau: mpc, budget: TruncationBudget) -> mpc:
    """Cusp part E^0_{2k}(tau), truncated with a certified tail below eps.

    Raises:
        TruncationError: if Im tau is too small for the budget.
    """
    if k < 2:
        raise InvalidIndexError(f"half-weight must be >= 2, got {k}")
    q = nome(tau)
    n = truncation_order(2 * k, abs(q), budget)
    if n == 0:
        return mpc(0)
    sigma = SIEVE.table_hp(2 * k - 1, n)
    acc = mpc(0)
    for m in range(n, 0, -1):
        acc = acc * q + sigma[m]
    return acc * q


def eis_eval(k: int, tau: mpc, budget: TruncationBudget) -> mpc:
    return to_hp(eis_constant(k)) + eis_cusp_eval(k, tau, budget)


def eis_cusp_eval_inverted(k: int, tau: mpc, budget: TruncationBudget) -> mpc:
    """Cusp part near the real axis via E^0(tau) = tau^{-2k}(c + E^0(-1/tau)) - c.

    Used when |tau| < 1, where -1/tau lies higher in the half-plane.
    """
    tau = mpc(tau)
    if abs(tau) >= 1:
        return eis_cusp_eval(k, tau, budget)
    scale = abs(tau) ** (2 * k)
    inner = budget.model_copy(update={"eps": max(float(budget.eps_hp * scale), 1e-300)})
    c = to_hp(eis_constant(k))
    w = -1 / tau
    return tau ** (-2 * k) * (c + eis_cusp_eval(k, w, inner)) - c


def modular_defect(k: int, tau: mpc, budget: TruncationBudget) -> mpf:
    """|E_{2k}(-1/tau) - tau^{2k} E_{2k}(tau)|; zero up to truncation and rounding."""
    tau = mpc(tau)
    return abs(eis_eval(k, -1 / tau, budget) - tau ** (2 * k) * eis_eval(k, tau, budget))


def precision_self_test(budget: TruncationBudget) -> mpf:
    """Check E_6(i) = 0 at the working precision and return |E_6(i)|."""
    value = abs(eis_eval(3, mpc(0, 1), budget))
    threshold = mpf(10) ** (-(mp.dps - 5))
    if not value < threshold:
        raise PrecisionSelfTestError(
            f"|E_6(i)| = {mpmath.nstr(value, 5)} exceeds {mpmath.nstr(threshold, 3)} at {mp.dps} digits"
        )
    logger.info("precision self-test passed: |E_6(i)| = %s", mpmath.nstr(value, 5))
    return value
