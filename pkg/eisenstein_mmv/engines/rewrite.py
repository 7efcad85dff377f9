"""Exact rewrite maps between iterated integrals and L-series.

Conventions (checked numerically by the ``roundtrip`` and ``oracle-cross`` suites):

* ``int_to_l`` integrates layer by layer from the top: with A_j = a_j + t_{j+1}
  (t_{r+1} = 0), each layer picks i_j in 1..A_j with weight
  (-1)^{i_j} (A_j - 1)!/(A_j - i_j)! and leaves t_j = A_j - i_j powers of tau
  for the layer below; the result is L^(t_1)(ks; i_1..i_r).
* ``l_to_int`` expands the partial-sum denominators with binomials C(a_j - 1, i_j)
  and the overall factor prod (-1)^{a_j}/(a_j - 1)!, emitting
  tau^(t + i_1) Int(ks; a_j - i_j + i_{j+1}).
"""

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial
from typing import Dict, Iterator, Tuple

from eisenstein_mmv.shared_libraries.core_algebra import (
    LSERIES,
    TAU_INTEGRAL,
    CompositeIndex,
    FormalSum,
    Generator,
    Word,
    falling_factorial,
    fs_sum,
    index_from_word,
    lseries,
    tau_integral,
)
from eisenstein_mmv.shared_libraries.errors import InvalidIndexError


def shuffle_words(u: Word, v: Word) -> Iterator[Word]:
    """Every interleaving of u and v, with multiplicity."""
    if not u:
        yield tuple(v)
        return
    if not v:
        yield tuple(u)
        return
    for w in shuffle_words(u[1:], v):
        yield (u[0],) + w
    for w in shuffle_words(u, v[1:]):
        yield (v[0],) + w


def shuffle_product(u: Word, v: Word) -> FormalSum:
    """Shuffle product of two letter words as a sum of Int generators."""
    counts = Counter(shuffle_words(tuple(u), tuple(v)))
    return FormalSum({tau_integral(*_split(w)): c for w, c in counts.items()})


def _split(word: Word) -> Tuple[list, list]:
    return [k for k, _ in word], [a for _, a in word]


def int_to_l(index: CompositeIndex, tau_power: int = 0) -> FormalSum:
    """Expand tau^tau_power * Int(index) into L-series generators."""
    if index.depth == 0:
        return FormalSum.of(lseries([], [], tau_power))
    ks, alphas = index.ks, index.alphas
    terms: Dict[Generator, Fraction] = {}

    def walk(j: int, t_next: int, coef: int, chosen: Tuple[int, ...]) -> None:
        if j < 0:
            g = lseries(ks, chosen, t_next + tau_power)
            terms[g] = terms.get(g, Fraction(0)) + coef
            return
        top = alphas[j] + t_next
        for i in range(1, top + 1):
            c = falling_factorial(top - 1, i - 1)
            walk(j - 1, top - i, coef * (-c if i % 2 else c), (i,) + chosen)

    walk(index.depth - 1, 0, 1, ())
    return FormalSum(terms)


def l_to_int(g: Generator) -> FormalSum:
    """Expand an L-series generator into tau^j * Int(...) generators."""
    if g.kind != LSERIES:
        raise InvalidIndexError(f"l_to_int expects an L-series generator, got {g}")
    index = g.index
    if index.depth == 0:
        return FormalSum.of(tau_integral([], [], index.t))
    alphas = index.alphas
    r = index.depth
    prefactor = Fraction(1)
    for a in alphas:
        prefactor *= Fraction((-1) ** a, factorial(a - 1))
    terms: Dict[Generator, Fraction] = {}
    for shifts in product(*(range(a) for a in alphas)):
        coef = prefactor * (-1) ** sum(shifts)
        for a, i in zip(alphas, shifts):
            coef *= comb(a - 1, i)
        new_alphas = []
        for j in range(r):
            nxt = shifts[j + 1] if j + 1 < r else 0
            shifted = alphas[j] - shifts[j] + nxt
            assert shifted >= 1, "shifted exponent left the admissible range"
            new_alphas.append(shifted)
        out = tau_integral(index.ks, new_alphas, index.t + shifts[0])
        terms[out] = terms.get(out, Fraction(0)) + coef
    return FormalSum(terms)


def int_to_l_sum(fs: FormalSum) -> FormalSum:
    """Linear extension of ``int_to_l``; L-series terms pass through."""
    parts = []
    for g, c in fs:
        part = int_to_l(g.index, g.tau_power) if g.kind == TAU_INTEGRAL else FormalSum.of(g)
        parts.append(part.scale(c))
    return fs_sum(parts)


def l_to_int_sum(fs: FormalSum) -> FormalSum:
    """Linear extension of ``l_to_int``; integral terms pass through."""
    parts = []
    for g, c in fs:
        part = l_to_int(g) if g.kind == LSERIES else FormalSum.of(g)
        parts.append(part.scale(c))
    return fs_sum(parts)


@lru_cache(maxsize=None)
def _stuffle_words(u: Word, v: Word) -> Tuple[Tuple[Word, Fraction], ...]:
    if not u:
        return ((v, Fraction(1)),)
    if not v:
        return ((u, Fraction(1)),)
    (ka, a), (kb, b) = u[0], v[0]
    out: Dict[Word, Fraction] = {}
    for c in range(1, a + b):
        d = a + b - c
        left = comb(c - 1, a - 1)
        if left:
            for w, x in _stuffle_words(u[1:], ((kb, d),) + v[1:]):
                key = ((ka, c),) + w
                out[key] = out.get(key, Fraction(0)) + left * x
        right = comb(c - 1, b - 1)
        if right:
            for w, x in _stuffle_words(((ka, d),) + u[1:], v[1:]):
                key = ((kb, c),) + w
                out[key] = out.get(key, Fraction(0)) + right * x
    return tuple(out.items())


def stuffle_product(g1: Generator, g2: Generator) -> FormalSum:
    """Product of two L^(0) series via partial fractions on the top partial sums.

    1/(M^a N^b) = sum_{c+d=a+b} [C(c-1, a-1)/((M+N)^c N^d) + C(c-1, b-1)/((M+N)^c M^d)]
    """
    for g in (g1, g2):
        if g.kind != LSERIES or g.index.t != 0:
            raise InvalidIndexError(f"stuffle expects L-series generators with t=0, got {g}")
    terms = {
        Generator(kind=LSERIES, index=index_from_word(w)): c
        for w, c in _stuffle_words(g1.index.word, g2.index.word)
    }
    return FormalSum(terms)
