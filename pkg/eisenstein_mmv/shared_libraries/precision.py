"""Working precision, complex literals and certified tail bounds."""

import logging
import re
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict, Field

from eisenstein_mmv.shared_libraries.errors import TruncationError

logger = logging.getLogger(__name__)

DEFAULT_DIGITS = 40

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"^[+-]?{_NUM}$")
_PURE_IMAG = re.compile(rf"^(?P<im>[+-]?(?:{_NUM})?)i$")
_FULL = re.compile(rf"^(?P<re>[+-]?{_NUM})(?P<im>[+-](?:{_NUM})?)i$")

_I_POWERS = ((1, 0), (0, 1), (-1, 0), (0, -1))


class TruncationBudget(BaseModel):
    """Truncation settings shared by every series and integral evaluation.

    Attributes:
        eps: Target absolute error of a truncated sum.
        n_max: Hard cap on the summation index.
    """

    model_config = ConfigDict(frozen=True)

    eps: float = Field(1e-45, gt=0)
    n_max: int = Field(20000, ge=1)

    @property
    def eps_hp(self) -> mpf:
        return mpf(self.eps)


def configure_precision(digits: int = DEFAULT_DIGITS) -> None:
    """Set the global working precision (significant decimal digits)."""
    if digits < 15:
        raise ValueError(f"working precision must be at least 15 digits, got {digits}")
    mp.dps = digits
    logger.debug("working precision set to %d digits", digits)


def i_power(n: int) -> mpc:
    """Exact i**n for any integer n."""
    re_part, im_part = _I_POWERS[n % 4]
    return mpc(re_part, im_part)


def _imag_part(text: str) -> mpf:
    if text in ("", "+"):
        return mpf(1)
    if text == "-":
        return mpf(-1)
    return mpf(text)


def parse_complex(text: str) -> mpc:
    """Parse "a+bi", "bi" or "a" at the working precision."""
    s = text.strip().replace(" ", "")
    if _REAL.match(s):
        return mpc(mpf(s), 0)
    match = _FULL.match(s)
    if match:
        return mpc(mpf(match.group("re")), _imag_part(match.group("im")))
    match = _PURE_IMAG.match(s)
    if match:
        return mpc(0, _imag_part(match.group("im")))
    raise ValueError(f"not a complex literal: {text!r}")


def format_real(x: Union[mpf, int, float], digits: int = None) -> str:
    return mpmath.nstr(mpf(x), digits or mp.dps)


def format_complex(z: Union[mpc, mpf, int, float], digits: int = None) -> str:
    """Render z as "a+bi" with ``digits`` significant digits per part."""
    z = mpc(z)
    digits = digits or mp.dps
    real = mpmath.nstr(z.real, digits)
    imag = mpmath.nstr(z.imag, digits)
    if not imag.startswith("-"):
        imag = "+" + imag
    return f"{real}{imag}i"


def power_geometric_tail(degree: int, x: mpf, n: int) -> mpf:
    """Upper bound for sum_{m>n} m**degree * x**m.

    Returns +inf while the term ratio ((m+1)/m)**degree * x at m = n+1 is not
    below one.
    """
    if x == 0:
        return mpf(0)
    m = n + 1
    ratio = (mpf(m + 1) / m) ** degree * x
    if ratio >= 1:
        return mpmath.inf
    return mpf(m) ** degree * x**m / (1 - ratio)


def truncation_order(
    degree: int,
    x: mpf,
    budget: TruncationBudget,
    scale: mpf = 1,
) -> int:
    """Smallest N with scale * sum_{m>N} m**degree * x**m < eps.

    Raises:
        TruncationError: if no N <= n_max meets the bound.
    """
    eps = budget.eps_hp
    scale = mpf(scale)

    def good(n: int) -> bool:
        return scale * power_geometric_tail(degree, x, n) < eps

    if good(0):
        return 0
    hi = 1
    while not good(hi):
        if hi >= budget.n_max:
            raise TruncationError(
                f"tail bound {budget.eps} not reached within n_max={budget.n_max}"
                f" (ratio {mpmath.nstr(x, 6)}, degree {degree})"
            )
        hi = min(2 * hi, budget.n_max)
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if good(mid):
            hi = mid
        else:
            lo = mid
    return hi


def to_hp(value: Union[Fraction, int, float, mpf]) -> mpf:
    """Exact rational to working-precision float (mpmath does not take Fraction)."""
    if isinstance(value, Fraction):
        return mpf(value.numerator) / value.denominator
    return mpf(value)
