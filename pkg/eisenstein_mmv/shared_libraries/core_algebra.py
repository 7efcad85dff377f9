"""Exact-rational index symbols and formal linear combinations.

Every series and integral in the engine is named by a ``CompositeIndex``; the
rewrite maps act on ``FormalSum`` objects whose coefficients are exact
``fractions.Fraction`` values.
"""

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Literal, Mapping, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from eisenstein_mmv.shared_libraries.errors import InvalidIndexError

Letter = Tuple[int, int]
Word = Tuple[Letter, ...]

LSERIES = "L"
TAU_INTEGRAL = "I"

_KIND_ORDER = {LSERIES: 0, TAU_INTEGRAL: 1}


class CompositeIndex(BaseModel):
    """The symbol (k_1..k_r; alpha_1..alpha_r; t).

    Attributes:
        ks: Half-weights k_i >= 2; the forms have weight 2k_i.
        alphas: Exponent selectors alpha_i >= 1.
        t: Power of tau carried by an L-series (zero for integrals).
    """

    model_config = ConfigDict(frozen=True)

    ks: Tuple[int, ...] = ()
    alphas: Tuple[int, ...] = ()
    t: int = Field(0, ge=0)

    @property
    def depth(self) -> int:
        return len(self.ks)

    @property
    def upper_weight(self) -> int:
        return sum(self.ks)

    @property
    def word(self) -> Word:
        return tuple(zip(self.ks, self.alphas))

    def with_t(self, t: int) -> "CompositeIndex":
        return make_index(self.ks, self.alphas, t)


def make_index(ks: Sequence[int], alphas: Sequence[int], t: int = 0) -> CompositeIndex:
    """Validate and build a composite index.

    Raises:
        InvalidIndexError: on mismatched lengths, k_i < 2, alpha_i < 1 or t < 0.
    """
    ks = tuple(int(k) for k in ks)
    alphas = tuple(int(a) for a in alphas)
    if len(ks) != len(alphas):
        raise InvalidIndexError(f"ks and alphas differ in length: {ks} vs {alphas}")
    for k in ks:
        if k < 2:
            raise InvalidIndexError(f"half-weight must be >= 2, got {k}")
    for a in alphas:
        if a < 1:
            raise InvalidIndexError(f"alpha must be >= 1, got {a}")
    if t < 0:
        raise InvalidIndexError(f"tau power must be >= 0, got {t}")
    return CompositeIndex(ks=ks, alphas=alphas, t=t)


def index_from_word(word: Iterable[Letter], t: int = 0) -> CompositeIndex:
    word = tuple(word)
    return make_index([k for k, _ in word], [a for _, a in word], t)


class Generator(BaseModel):
    """A basis element: an L-series L^(t)(...) or tau^j * Int(...).

    Attributes:
        kind: "L" for L-series, "I" for tau-power times iterated integral.
        index: The composite index; its ``t`` is only meaningful for "L".
        tau_power: The exponent j of tau^j * Int(...); zero for "L".
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["L", "I"]
    index: CompositeIndex
    tau_power: int = Field(0, ge=0)

    @property
    def length(self) -> int:
        return self.index.depth

    @property
    def upper_weight(self) -> int:
        return self.index.upper_weight

    @property
    def lower_weight(self) -> int:
        shift = self.index.t if self.kind == LSERIES else self.tau_power
        return shift + sum(self.index.alphas)

    def sort_key(self) -> tuple:
        shift = self.index.t if self.kind == LSERIES else self.tau_power
        return (_KIND_ORDER[self.kind], self.index.ks, self.index.alphas, shift)

    def __str__(self) -> str:
        return format_generator(self)


def lseries(ks: Sequence[int], alphas: Sequence[int], t: int = 0) -> Generator:
    return Generator(kind=LSERIES, index=make_index(ks, alphas, t))


def tau_integral(ks: Sequence[int], alphas: Sequence[int], tau_power: int = 0) -> Generator:
    if tau_power < 0:
        raise InvalidIndexError(f"tau power must be >= 0, got {tau_power}")
    return Generator(kind=TAU_INTEGRAL, index=make_index(ks, alphas, 0), tau_power=tau_power)


def _as_rational(value: Union[int, Fraction, str]) -> Fraction:
    if isinstance(value, str):
        return parse_rational(value)
    return Fraction(value)


class FormalSum:
    """Finite rational combination of generators with no zero coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Generator, Union[int, Fraction]]] = None):
        normalized: Dict[Generator, Fraction] = {}
        for g, c in (terms or {}).items():
            c = _as_rational(c)
            if c:
                normalized[g] = c
        self._terms = normalized

    @classmethod
    def of(cls, generator: Generator, coefficient: Union[int, Fraction] = 1) -> "FormalSum":
        return cls({generator: coefficient})

    @classmethod
    def unit(cls, kind: str = LSERIES) -> "FormalSum":
        return cls.of(Generator(kind=kind, index=CompositeIndex()))

    def coefficient(self, generator: Generator) -> Fraction:
        return self._terms.get(generator, Fraction(0))

    def items(self) -> List[Tuple[Generator, Fraction]]:
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key())

    def generators(self) -> List[Generator]:
        return [g for g, _ in self.items()]

    def scale(self, c: Union[int, Fraction]) -> "FormalSum":
        c = Fraction(c)
        return FormalSum({g: c * v for g, v in self._terms.items()})

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[Generator, Fraction]]:
        return iter(self.items())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return fs_combine(self, other, 1)

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return fs_combine(self, other, -1)

    def __neg__(self) -> "FormalSum":
        return self.scale(-1)

    def __rmul__(self, c: Union[int, Fraction]) -> "FormalSum":
        return self.scale(c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalSum):
            return NotImplemented
        return fs_equal(self, other)

    __hash__ = None

    def __repr__(self) -> str:
        return f"FormalSum({format_formal_sum(self)!r})"

    # filtration degrees; the empty sum sits in degree 0
    @property
    def length(self) -> int:
        return max((g.length for g in self._terms), default=0)

    @property
    def upper_weight(self) -> int:
        return max((g.upper_weight for g in self._terms), default=0)

    @property
    def lower_weight(self) -> int:
        return max((g.lower_weight for g in self._terms), default=0)


def fs_combine(a: FormalSum, b: FormalSum, c: Union[int, Fraction] = 1) -> FormalSum:
    """Return a + c*b with zero coefficients pruned."""
    c = Fraction(c)
    merged: Dict[Generator, Fraction] = dict(a._terms)
    for g, v in b._terms.items():
        merged[g] = merged.get(g, Fraction(0)) + c * v
    return FormalSum(merged)


def fs_equal(a: FormalSum, b: FormalSum) -> bool:
    return a._terms == b._terms


def fs_sum(sums: Iterable[FormalSum]) -> FormalSum:
    acc: Dict[Generator, Fraction] = {}
    for s in sums:
        for g, v in s._terms.items():
            acc[g] = acc.get(g, Fraction(0)) + v
    return FormalSum(acc)


def falling_factorial(n: int, j: int) -> int:
    """n!/(n-j)! as an exact integer product."""
    out = 1
    for m in range(n - j + 1, n + 1):
        out *= m
    return out


def factorial_ratio(a: int, b: int) -> Fraction:
    """a!/b! exactly, for a, b >= 0."""
    if a >= b:
        return Fraction(falling_factorial(a, a - b))
    return Fraction(1, falling_factorial(b, b - a))


# ---------- TEXTUAL SYNTAX ----------

_INT_LIST = r"\[\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\]"
_GENERATOR = re.compile(
    rf"^(?P<kind>[LI])\{{\s*ks\s*=\s*(?P<ks>{_INT_LIST})\s*;\s*alphas\s*=\s*(?P<alphas>{_INT_LIST})"
    rf"\s*;\s*(?P<shift_name>t|taupow)\s*=\s*(?P<shift>-?\d+)\s*\}}$"
)
_TERM = re.compile(r"^(?P<coef>[+-]?\d+(?:/\d+)?)\s*\*\s*(?P<gen>[LI]\{.*\})$")


def _parse_int_list(text: str) -> List[int]:
    inner = text.strip()[1:-1].strip()
    return [int(x) for x in inner.split(",")] if inner else []


def _format_int_list(values: Sequence[int]) -> str:
    return "[" + ",".join(str(v) for v in values) + "]"


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a rational literal: {text!r}") from e


def format_generator(g: Generator) -> str:
    ks = _format_int_list(g.index.ks)
    alphas = _format_int_list(g.index.alphas)
    if g.kind == LSERIES:
        return f"L{{ks={ks};alphas={alphas};t={g.index.t}}}"
    return f"I{{ks={ks};alphas={alphas};taupow={g.tau_power}}}"


def parse_generator(text: str) -> Generator:
    """Parse "L{ks=[..];alphas=[..];t=..}" or "I{ks=[..];alphas=[..];taupow=..}"."""
    match = _GENERATOR.match(text.strip())
    if not match:
        raise InvalidIndexError(f"not a generator literal: {text!r}")
    kind = match.group("kind")
    expected = "t" if kind == LSERIES else "taupow"
    if match.group("shift_name") != expected:
        raise InvalidIndexError(f"{kind}-generators carry {expected}=, got {text!r}")
    ks = _parse_int_list(match.group("ks"))
    alphas = _parse_int_list(match.group("alphas"))
    shift = int(match.group("shift"))
    if kind == LSERIES:
        return lseries(ks, alphas, shift)
    return tau_integral(ks, alphas, shift)


def format_formal_sum(fs: FormalSum) -> str:
    if not fs:
        return "0"
    return " + ".join(f"{format_rational(c)}*{format_generator(g)}" for g, c in fs.items())


def parse_formal_sum(text: str) -> FormalSum:
    text = text.strip()
    if text == "0":
        return FormalSum()
    terms: Dict[Generator, Fraction] = {}
    for chunk in text.split(" + "):
        match = _TERM.match(chunk.strip())
        if not match:
            raise ValueError(f"not a formal-sum term: {chunk!r}")
        g = parse_generator(match.group("gen"))
        terms[g] = terms.get(g, Fraction(0)) + parse_rational(match.group("coef"))
    return FormalSum(terms)
