"""Closed-form block spectrum of the spin-S valence-bond-solid chain.

The reduced density matrix of L contiguous bulk spins is diagonal in the
total spin ``sigma`` of the two effective boundary spin-S/2's, so the whole
spectrum is ``S + 1`` multiplet eigenvalues ``p_sigma`` with degeneracy
``2 sigma + 1``.  Every eigenvalue is a finite sum over the isotropic tensor
channels ``l = 0..S`` of the transfer eigenvalue ``lambda(l) ** (L + 1)``
times a boundary polynomial evaluated at ``X(sigma) = s_0 . s_{L+1}``.

All of it is exact rational arithmetic (:class:`fractions.Fraction`);
floats appear only when a logarithm is taken.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ParameterError

__all__ = [
    "MultipletLevel",
    "BoundarySpectrum",
    "EntanglementReport",
    "check_spin",
    "check_length",
    "transfer_eigenvalue",
    "legendre_coefficient",
    "legendre_polynomial",
    "boundary_polynomial",
    "boundary_polynomials",
    "multiplet_X",
    "channel_weight",
    "spectrum",
    "largest_eigenvalue",
    "parity_rule_argmax",
    "single_copy_entanglement",
    "von_neumann_entropy",
    "spectrum_entropy",
    "neg_log",
    "asymptotic_e1",
    "e1_gap",
    "vn_gap",
    "entanglement_report",
]

log = logging.getLogger(__name__)


def check_spin(S) -> int:
    if isinstance(S, bool) or not isinstance(S, int):
        raise ParameterError(f"spin S must be an integer, got {S!r}")
    if S < 1:
        raise ParameterError(f"spin S must be >= 1, got {S}")
    return S


def check_length(L) -> int:
    if isinstance(L, bool) or not isinstance(L, int):
        raise ParameterError(f"block length L must be an integer, got {L!r}")
    if L < 1:
        raise ParameterError(f"block length L must be >= 1, got {L}")
    return L


def _check_index(S: int, value, name: str) -> int:
    check_spin(S)
    if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value <= S:
        raise ParameterError(f"{name} must be an integer in [0, {S}], got {value!r}")
    return value


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def transfer_eigenvalue(S: int, l: int) -> Fraction:
    """Eigenvalue of the bond transfer operator in tensor channel ``l``.

    ``(-1)**l * S! (S+1)! / ((S-l)! (S+l+1)!)``; equals 1 for ``l = 0`` and
    has magnitude below one otherwise.
    """
    _check_index(S, l, "l")
    f = math.factorial
    return Fraction((-1) ** l * f(S) * f(S + 1), f(S - l) * f(S + l + 1))


@lru_cache(maxsize=None)
def legendre_coefficient(S: int, l: int) -> Fraction:
    """Coefficient of ``P_l(x)`` in the expansion of ``((1 + x) / 2) ** S``."""
    _check_index(S, l, "l")
    f = math.factorial
    return Fraction((2 * l + 1) * f(S) * f(S), f(S - l) * f(S + l + 1))


def legendre_polynomial(l: int, x) -> Fraction:
    """Exact ``P_l(x)`` from Bonnet's three-term recurrence."""
    if l < 0:
        raise ParameterError(f"Legendre degree must be >= 0, got {l}")
    x = Fraction(x)
    prev, cur = Fraction(1), x
    if l == 0:
        return prev
    for n in range(1, l):
        prev, cur = cur, ((2 * n + 1) * x * cur - n * prev) / (n + 1)
    return cur


def boundary_polynomials(S: int, X) -> list[Fraction]:
    """``[I_0(X), ..., I_S(X)]`` for the two boundary spins, with 4*pi scaled out.

    ``I_0 = 1``, ``I_1 = 3X / (S/2 + 1)**2`` and the three-term recurrence

        I_{j+1} = (2j+3)/(S+j+2)**2 * (4X/(j+1) + j) * I_j
                  - j/(j+1) * (2j+3)/(2j-1) * ((S-j+1)/(S+j+2))**2 * I_{j-1}
    """
    check_spin(S)
    X = Fraction(X)
    values = [Fraction(1), 3 * X / (Fraction(S, 2) + 1) ** 2]
    for j in range(1, S):
        a = Fraction(2 * j + 3, (S + j + 2) ** 2) * (4 * X / (j + 1) + j)
        b = (Fraction(j, j + 1) * Fraction(2 * j + 3, 2 * j - 1)
             * Fraction(S - j + 1, S + j + 2) ** 2)
        values.append(a * values[j] - b * values[j - 1])
    return values[: S + 1]


def boundary_polynomial(S: int, j: int, X) -> Fraction:
    _check_index(S, j, "j")
    return boundary_polynomials(S, X)[j]


def multiplet_X(S: int, sigma: int) -> Fraction:
    """``s_0 . s_{L+1}`` on the total-spin-``sigma`` multiplet of the two ends."""
    _check_index(S, sigma, "sigma")
    half = Fraction(S, 2)
    return Fraction(sigma * (sigma + 1), 2) - half * (half + 1)


@lru_cache(maxsize=None)
def channel_weight(S: int, j: int) -> Fraction:
    """Weight of tensor channel ``j`` in every multiplet eigenvalue.

    Equal to ``[(S+j+1)! (S-j)! / (S+1)!**2] ** 2``.  This is the value that
    makes channel ``j`` contribute ``(2j+1) / (S+1)**2 * lambda(j)**(L+1)`` on
    the maximal multiplet ``sigma = S``, which in turn makes the spectrum
    trace to one; see ``tests/test_spectrum_core.py`` for both identities.
    """
    _check_index(S, j, "j")
    f = math.factorial
    return Fraction(f(S + j + 1) * f(S - j), f(S + 1) ** 2) ** 2


@lru_cache(maxsize=None)
def _channel_table(S: int) -> tuple[tuple[Fraction, ...], ...]:
    # table[sigma][j] = channel_weight(S, j) * I_j(X(sigma))
    return tuple(
        tuple(channel_weight(S, j) * value
              for j, value in enumerate(boundary_polynomials(S, multiplet_X(S, sigma))))
        for sigma in range(S + 1)
    )


# ---------------------------------------------------------------------------
# Spectrum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultipletLevel:
    sigma: int
    degeneracy: int
    eigenvalue: Fraction


@dataclass(frozen=True)
class BoundarySpectrum:
    """Multiplet-resolved spectrum of the block reduced density matrix.

    ``raw_trace`` is the trace of the channel sum before normalization.  It
    is exactly one whenever the channel weights are right, and is kept as a
    diagnostic.
    """

    spin: int
    length: int
    levels: tuple[MultipletLevel, ...]
    raw_trace: Fraction = Fraction(1)

    @property
    def trace(self) -> Fraction:
        return sum((lvl.degeneracy * lvl.eigenvalue for lvl in self.levels), Fraction(0))

    def eigenvalues(self) -> list[Fraction]:
        """All ``(S+1)**2`` eigenvalues with multiplicity, nonincreasing."""
        out = [lvl.eigenvalue for lvl in self.levels for _ in range(lvl.degeneracy)]
        out.sort(reverse=True)
        return out


def spectrum(S: int, L: int) -> BoundarySpectrum:
    """Exact multiplet spectrum ``{sigma: p_sigma}`` of a block of ``L`` spins."""
    check_spin(S)
    check_length(L)
    powers = [transfer_eigenvalue(S, j) ** (L + 1) for j in range(S + 1)]
    raw = [sum((w * p for w, p in zip(row, powers)), Fraction(0))
           for row in _channel_table(S)]
    total = sum(((2 * sigma + 1) * r for sigma, r in enumerate(raw)), Fraction(0))
    if total != 1:
        log.warning("spectrum(S=%d, L=%d): raw trace %s != 1, renormalizing", S, L, total)
    levels = tuple(
        MultipletLevel(sigma=sigma, degeneracy=2 * sigma + 1, eigenvalue=r / total)
        for sigma, r in enumerate(raw)
    )
    return BoundarySpectrum(spin=S, length=L, levels=levels, raw_trace=total)


def largest_eigenvalue(spec: BoundarySpectrum) -> tuple[int, Fraction]:
    """``(sigma*, Lambda_1)``: the largest multiplet eigenvalue.

    Exact comparison; ties go to the smaller ``sigma``.
    """
    best = spec.levels[0]
    for lvl in spec.levels[1:]:
        if lvl.eigenvalue > best.eigenvalue:
            best = lvl
    return best.sigma, best.eigenvalue


def parity_rule_argmax(S: int, L: int) -> int:
    """The multiplet the closed-form derivation asserts is largest:
    ``sigma = S`` for even ``L`` and ``sigma = 0`` for odd ``L``.

    Only used for auditing; :func:`largest_eigenvalue` never relies on it.
    """
    check_spin(S)
    check_length(L)
    return S if L % 2 == 0 else 0


# ---------------------------------------------------------------------------
# Entanglement measures
# ---------------------------------------------------------------------------

def _log(x: float, base: float) -> float:
    return math.log(x) / math.log(base)


def neg_log(q: Fraction, base: float = 2) -> float:
    """``-log(q)`` for a positive rational whose parts may not fit a double."""
    if base == 2:
        return math.log2(q.denominator) - math.log2(q.numerator)
    return (math.log(q.denominator) - math.log(q.numerator)) / math.log(base)


def single_copy_entanglement(S: int, L: int, base: float = 2) -> float:
    """``E_1 = -log Lambda_1`` (bits by default)."""
    _, lam1 = largest_eigenvalue(spectrum(S, L))
    return neg_log(lam1, base)


def spectrum_entropy(spec: BoundarySpectrum, base: float = 2) -> float:
    """``-sum (2 sigma + 1) p log p`` over the multiplets; zero levels are skipped."""
    total = 0.0
    for lvl in spec.levels:
        if lvl.eigenvalue == 0:
            continue
        total += lvl.degeneracy * float(lvl.eigenvalue) * neg_log(lvl.eigenvalue, base)
    return total


def von_neumann_entropy(S: int, L: int, base: float = 2) -> float:
    return spectrum_entropy(spectrum(S, L), base)


def asymptotic_e1(S: int, base: float = 2) -> float:
    """Saturation value ``2 log(S + 1)``."""
    check_spin(S)
    return 2 * _log(S + 1, base)


def _excess(S: int, p: Fraction) -> Fraction:
    # (S+1)**2 p - 1: relative deviation of p from the flat value.
    return (S + 1) ** 2 * p - 1


def e1_gap(spec: BoundarySpectrum, base: float = 2) -> float:
    """``2 log(S+1) - E_1``, evaluated as ``log1p`` of an exact excess.

    Subtracting two floats would lose every digit once the gap falls below
    machine epsilon, which happens well inside the usual sweep range.
    """
    _, lam1 = largest_eigenvalue(spec)
    return math.log1p(float(_excess(spec.spin, lam1))) / math.log(base)


def _log1p_minus_x(x: float) -> float:
    if abs(x) < 1e-3:
        # alternating series; truncation error below x**8
        return sum((-1) ** (k + 1) * x ** k / k for k in range(7, 1, -1))
    return math.log1p(x) - x


def vn_gap(spec: BoundarySpectrum, base: float = 2) -> float:
    """``2 log(S+1) - S_vN``, the relative entropy to the flat spectrum.

    With ``d = 2 sigma + 1`` and ``p = (1 + delta) / (S+1)**2`` the gap is
    ``sum d p delta + sum d p (log1p(delta) - delta)``.  The first sum is
    exact and second order in ``delta`` (the linear terms cancel), so it is
    taken in rationals; the second is handled term by term.
    """
    S = spec.spin
    quadratic = sum((lvl.degeneracy * lvl.eigenvalue * _excess(S, lvl.eigenvalue)
                     for lvl in spec.levels), Fraction(0))
    rest = 0.0
    for lvl in spec.levels:
        if lvl.eigenvalue == 0:
            # p log p -> 0 while p * delta = 0 already sits in the exact part
            continue
        rest += lvl.degeneracy * float(lvl.eigenvalue) * _log1p_minus_x(
            float(_excess(S, lvl.eigenvalue)))
    return (float(quadratic) + rest) / math.log(base)


@dataclass(frozen=True)
class EntanglementReport:
    spin: int
    length: int
    e1: float
    vn_entropy: float
    largest_sigma: int
    largest_eigenvalue: Fraction
    asymptote: float
    e1_gap: float
    vn_gap: float
    base: float = 2


def entanglement_report(S: int, L: int, base: float = 2) -> EntanglementReport:
    spec = spectrum(S, L)
    sigma_star, lam1 = largest_eigenvalue(spec)
    return EntanglementReport(
        spin=S,
        length=L,
        e1=neg_log(lam1, base),
        vn_entropy=spectrum_entropy(spec, base),
        largest_sigma=sigma_star,
        largest_eigenvalue=lam1,
        asymptote=asymptotic_e1(S, base),
        e1_gap=e1_gap(spec, base),
        vn_gap=vn_gap(spec, base),
        base=base,
    )
