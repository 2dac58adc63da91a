"""Majorization and deterministic LOCC convertibility of Schmidt spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Iterable

from .errors import ParameterError
from .spectrum_core import BoundarySpectrum, neg_log

__all__ = [
    "SchmidtSpectrum",
    "ConversionVerdict",
    "expand",
    "uniform",
    "majorizes",
    "nielsen_max_entangled_check",
    "max_distillable_dim",
    "e1_bits",
    "e1_integer_bits",
]


class SchmidtSpectrum(tuple):
    """Nonincreasing probability vector of exact rationals summing to one."""

    def __new__(cls, probs: Iterable):
        values = sorted((Fraction(p) for p in probs), reverse=True)
        if not values:
            raise ParameterError("Schmidt spectrum must be nonempty")
        if values[-1] < 0:
            raise ParameterError("Schmidt coefficients must be nonnegative")
        if sum(values) != 1:
            raise ParameterError(f"Schmidt coefficients sum to {sum(values)}, not 1")
        return super().__new__(cls, values)

    def __repr__(self) -> str:
        return f"SchmidtSpectrum({', '.join(str(p) for p in self)})"

    @property
    def largest(self) -> Fraction:
        return self[0]


@dataclass(frozen=True)
class ConversionVerdict:
    possible: bool
    witness_K: int | None = None

    def __post_init__(self):
        if self.possible != (self.witness_K is None):
            raise ValueError("a verdict carries a witness exactly when conversion fails")


def expand(spec: BoundarySpectrum) -> SchmidtSpectrum:
    """Flatten multiplets into ``(S+1)**2`` entries, each ``sigma`` repeated ``2 sigma + 1`` times."""
    return SchmidtSpectrum(spec.eigenvalues())


def uniform(M: int) -> SchmidtSpectrum:
    """Schmidt spectrum of the ``M x M`` maximally entangled state."""
    if M < 1:
        raise ParameterError(f"dimension must be >= 1, got {M}")
    return SchmidtSpectrum([Fraction(1, M)] * M)


def _prefix_sums(values, n: int) -> list[Fraction]:
    padded = list(values) + [Fraction(0)] * (n - len(values))
    return list(accumulate(padded))


def majorizes(a: SchmidtSpectrum, b: SchmidtSpectrum) -> bool:
    """True iff ``a`` is majorized by ``b``, i.e. ``a -> b`` is possible by LOCC.

    Compares prefix sums after zero-padding the shorter vector.
    """
    n = max(len(a), len(b))
    return all(x <= y for x, y in zip(_prefix_sums(a, n), _prefix_sums(b, n)))


def nielsen_max_entangled_check(spec: SchmidtSpectrum, M: int) -> ConversionVerdict:
    """Can ``spec`` be converted deterministically to the ``M x M`` maximally entangled state?

    Checks every prefix ``sum_{k<=K} alpha_k <= K/M`` for ``K = 1..M`` and
    cross-checks the answer against the largest-coefficient test
    ``alpha_1 <= 1/M``.
    """
    if isinstance(M, bool) or not isinstance(M, int) or M < 1:
        raise ParameterError(f"target dimension M must be a positive integer, got {M!r}")
    witness = None
    for K, partial in enumerate(_prefix_sums(spec, M)[:M], start=1):
        if partial > Fraction(K, M):
            witness = K
            break
    shortcut = spec.largest <= Fraction(1, M)
    if shortcut != (witness is None):
        raise AssertionError(
            f"prefix test ({witness=}) disagrees with largest-coefficient test for M={M}")
    return ConversionVerdict(possible=witness is None, witness_K=witness)


def max_distillable_dim(spec: SchmidtSpectrum) -> int:
    """Largest ``M`` with ``alpha_1 <= 1/M``, i.e. ``floor(1 / alpha_1)``."""
    return math.floor(1 / spec.largest)


def e1_bits(spec: SchmidtSpectrum) -> float:
    """Continuous single-copy entanglement ``-log2 alpha_1``."""
    return neg_log(spec.largest, 2)


def e1_integer_bits(spec: SchmidtSpectrum) -> float:
    """``log2`` of the largest distillable maximally entangled dimension."""
    return math.log2(max_distillable_dim(spec))
