"""Brute-force reference: the VBS state as an explicit dense vector.

The state is assembled bond by bond.  Each bond carries a singlet of two
spin-S/2's, each bulk site projects its pair of spin-S/2's onto total spin
S, and the two chain ends keep a bare spin-S/2.  Everything here is double
precision.  It referees the closed forms in :mod:`.spectrum_core` and is
deliberately independent of them.

Site ``0`` and site ``N + 1`` are the spin-S/2 ends, sites ``1..N`` the bulk.
Single-site bases are ordered ``m = j, j-1, ..., -j``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, prod

import numpy as np
from sympy import Rational
from sympy.physics.wigner import clebsch_gordan

from .errors import ParameterError, ResourceError
from .spectrum_core import check_spin

__all__ = [
    "DEFAULT_MAX_AMPLITUDES",
    "MAX_AMPLITUDES_ENV",
    "DenseState",
    "BlockSelection",
    "SpinOperatorTriple",
    "spin_operators",
    "singlet_pair",
    "symmetric_projector",
    "vbs_size",
    "build_vbs",
    "aklt_projector",
    "annihilation_residuals",
    "verify_ground_state",
    "reduced_spectrum",
    "end_spin_density_matrix",
    "multiplet_populations",
    "coherent_state",
    "coherent_overlap_deviation",
]

DEFAULT_MAX_AMPLITUDES = 10**7
MAX_AMPLITUDES_ENV = "AKLT_ORACLE_MAX_AMPLITUDES"

EIGENVALUE_CUTOFF = 1e-12


def _two_j(j) -> int:
    twice = Fraction(j) * 2
    if twice.denominator != 1 or twice < 0:
        raise ParameterError(f"spin must be a nonnegative multiple of 1/2, got {j!r}")
    return int(twice)


def max_amplitudes() -> int:
    raw = os.environ.get(MAX_AMPLITUDES_ENV)
    return int(raw) if raw else DEFAULT_MAX_AMPLITUDES


@dataclass(frozen=True)
class DenseState:
    site_dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (prod(self.site_dims),):
            raise ParameterError(
                f"amplitude vector of shape {self.amplitudes.shape} does not match "
                f"site dimensions {self.site_dims}")

    @property
    def n_bulk(self) -> int:
        return len(self.site_dims) - 2

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.site_dims)

    def normalized(self) -> DenseState:
        return DenseState(self.site_dims, self.amplitudes / np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class BlockSelection:
    """Contiguous bulk sites ``first..last`` (inclusive, 1-based)."""

    first: int
    last: int

    def __post_init__(self):
        if not 1 <= self.first <= self.last:
            raise ParameterError(f"invalid block [{self.first}, {self.last}]")

    @property
    def length(self) -> int:
        return self.last - self.first + 1


@dataclass(frozen=True)
class SpinOperatorTriple:
    sz: np.ndarray
    splus: np.ndarray
    sminus: np.ndarray

    @property
    def sx(self) -> np.ndarray:
        return (self.splus + self.sminus) / 2

    @property
    def sy(self) -> np.ndarray:
        return (self.splus - self.sminus) / 2j

    def casimir(self) -> np.ndarray:
        return self.sz @ self.sz + (self.splus @ self.sminus + self.sminus @ self.splus) / 2


def spin_operators(j) -> SpinOperatorTriple:
    tj = _two_j(j)
    m = (tj - 2 * np.arange(tj + 1)) / 2  # j, j-1, ..., -j
    jj = tj / 2
    sz = np.diag(m)
    # <m+1| S+ |m> = sqrt(j(j+1) - m(m+1))
    up = np.sqrt(jj * (jj + 1) - m[1:] * (m[1:] + 1))
    splus = np.diag(up, k=1)
    return SpinOperatorTriple(sz=sz, splus=splus, sminus=splus.T.copy())


def _heisenberg(j1, j2) -> np.ndarray:
    a, b = spin_operators(j1), spin_operators(j2)
    return (np.kron(a.sz, b.sz)
            + (np.kron(a.splus, b.sminus) + np.kron(a.sminus, b.splus)) / 2)


def singlet_pair(j) -> np.ndarray:
    """Two-site singlet ``sum_m (-1)**(j-m) / sqrt(2j+1) |j,m>|j,-m>``.

    Returned as a ``(2j+1, 2j+1)`` amplitude matrix; ``.ravel()`` gives the
    two-site vector.
    """
    tj = _two_j(j)
    if tj == 0:
        raise ParameterError("singlet needs j > 0")
    d = tj + 1
    amp = np.zeros((d, d))
    for a in range(d):
        # j - m_a = a
        amp[a, d - 1 - a] = (-1) ** a / np.sqrt(d)
    return amp


@lru_cache(maxsize=None)
def _cg(two_j1: int, two_m1: int, two_j2: int, two_m2: int, two_J: int, two_M: int) -> float:
    r = lambda t: Rational(t, 2)  # noqa: E731
    return float(clebsch_gordan(r(two_j1), r(two_j2), r(two_J), r(two_m1), r(two_m2), r(two_M)))


@lru_cache(maxsize=None)
def _symmetric_projector(S: int) -> np.ndarray:
    d = S + 1
    P = np.zeros((2 * S + 1, d * d))
    for row in range(2 * S + 1):
        two_M = 2 * S - 2 * row
        for a in range(d):
            for b in range(d):
                two_ma, two_mb = S - 2 * a, S - 2 * b
                if two_ma + two_mb == two_M:
                    P[row, a * d + b] = _cg(S, two_ma, S, two_mb, 2 * S, two_M)
    P.setflags(write=False)
    return P


def symmetric_projector(S: int) -> np.ndarray:
    """Isometry ``(2S+1) x (S+1)**2`` from the spin-S sector of two spin-S/2's onto a spin-S site."""
    check_spin(S)
    return _symmetric_projector(S).copy()


def vbs_size(S: int, N: int) -> int:
    return (S + 1) ** 2 * (2 * S + 1) ** N


def build_vbs(S: int, N: int) -> DenseState:
    """Normalized VBS state on ``N`` bulk spin-S sites plus two spin-S/2 ends.

    Raises :class:`ResourceError` when the vector would exceed the size
    guard (``AKLT_ORACLE_MAX_AMPLITUDES``, default ``10**7``).
    """
    check_spin(S)
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise ParameterError(f"number of bulk sites N must be >= 1, got {N!r}")
    size, limit = vbs_size(S, N), max_amplitudes()
    if size > limit:
        raise ResourceError(
            f"VBS state for S={S}, N={N} needs {size} amplitudes (limit {limit}; "
            f"set {MAX_AMPLITUDES_ENV} to override)")
    d = S + 1
    bond, site = _vbs_tensors(S)
    psi = bond  # [end0, dangling virtual]
    for _ in range(N):
        psi = np.tensordot(psi, site, axes=([-1], [1]))
    amps = psi.reshape(-1)
    amps = amps / np.linalg.norm(amps)
    return DenseState((d,) + (2 * S + 1,) * N + (d,), amps)


def aklt_projector(j1, j2, J) -> np.ndarray:
    """Projector onto total spin ``J`` of two spins ``j1``, ``j2``.

    Lagrange interpolation in ``x = S_1 . S_2``, whose eigenvalue on the
    total-``K`` sector is ``[K(K+1) - j1(j1+1) - j2(j2+1)] / 2``.
    """
    t1, t2, tJ = _two_j(j1), _two_j(j2), _two_j(J)
    allowed = range(abs(t1 - t2), t1 + t2 + 1, 2)
    if tJ not in allowed:
        raise ParameterError(f"J={J} is not a valid total spin for j1={j1}, j2={j2}")

    def x(tK):
        return (tK * (tK + 2) - t1 * (t1 + 2) - t2 * (t2 + 2)) / 8

    dot = _heisenberg(Fraction(t1, 2), Fraction(t2, 2))
    eye = np.eye(dot.shape[0])
    out = eye.copy()
    for tK in allowed:
        if tK != tJ:
            out = out @ (dot - x(tK) * eye) / (x(tJ) - x(tK))
    return out


def _apply_pair(state: DenseState, site: int, op: np.ndarray) -> np.ndarray:
    dims = state.site_dims
    d1, d2 = dims[site], dims[site + 1]
    t = state.tensor()
    out = np.tensordot(op.reshape(d1, d2, d1, d2), t, axes=([2, 3], [site, site + 1]))
    return np.moveaxis(out, [0, 1], [site, site + 1])


def annihilation_residuals(state: DenseState) -> list[tuple[str, float]]:
    """Norms ``||P |state>||`` for every projector term of the AKLT Hamiltonian.

    Bulk bonds use total spins ``S+1..2S``; the two end bonds (spin S/2 with
    spin S) use ``S/2+1..3S/2``.
    """
    dims = state.site_dims
    S = (dims[1] - 1) // 2
    half = Fraction(S, 2)
    out = []
    for J in range(S + 1, 2 * S + 1):
        proj = aklt_projector(S, S, J)
        for i in range(1, len(dims) - 2):
            out.append((f"bulk({i},{i + 1}) J={J}",
                        float(np.linalg.norm(_apply_pair(state, i, proj)))))
    n_last = len(dims) - 2
    for tJ in range(S + 2, 3 * S + 1, 2):
        J = Fraction(tJ, 2)
        out.append((f"end(0,1) J={J}",
                    float(np.linalg.norm(_apply_pair(state, 0, aklt_projector(half, S, J))))))
        out.append((f"end({n_last},{n_last + 1}) J={J}",
                    float(np.linalg.norm(_apply_pair(state, n_last, aklt_projector(S, half, J))))))
    return out


def verify_ground_state(S: int, N: int, tol: float = 1e-10) -> bool:
    """True iff every projector term annihilates the constructed VBS state."""
    return all(r <= tol for _, r in annihilation_residuals(build_vbs(S, N)))


def reduced_spectrum(state: DenseState, block: BlockSelection) -> list[float]:
    """Nonzero eigenvalues of the block's reduced density matrix, nonincreasing.

    The density matrix is formed on whichever side of the cut is smaller.
    """
    if block.last > state.n_bulk:
        raise ParameterError(
            f"block [{block.first}, {block.last}] exceeds the {state.n_bulk} bulk sites")
    dims = state.site_dims
    inside = list(range(block.first, block.last + 1))
    outside = [k for k in range(len(dims)) if k not in inside]
    d_in = prod(dims[k] for k in inside)
    mat = np.transpose(state.tensor(), inside + outside).reshape(d_in, -1)
    rho = mat @ mat.conj().T if mat.shape[0] <= mat.shape[1] else mat.T @ mat.conj()
    evals = np.linalg.eigvalsh(rho)
    evals = evals[evals >= EIGENVALUE_CUTOFF]
    return sorted(evals.tolist(), reverse=True)


def _vbs_tensors(S: int) -> tuple[np.ndarray, np.ndarray]:
    d = S + 1
    bond = singlet_pair(Fraction(S, 2))
    P = _symmetric_projector(S).reshape(2 * S + 1, d, d)
    # site tensor: physical m, left virtual l, right end of the outgoing bond
    return bond, np.einsum("mlr,re->mle", P, bond)


def end_spin_density_matrix(S: int, N: int) -> np.ndarray:
    """Reduced density matrix of the two end spins of the ``N``-site chain.

    Obtained by tracing out the bulk one site at a time, so memory stays at
    ``(S+1)**4`` regardless of ``N``.  Its nonzero spectrum is that of the
    block of all ``N`` bulk sites.  Index order is ``(end0, endN+1)``.
    """
    check_spin(S)
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise ParameterError(f"number of bulk sites N must be >= 1, got {N!r}")
    bond, site = _vbs_tensors(S)
    env = np.einsum("al,bk->albk", bond, bond)  # [end0, l ; end0', l']
    for _ in range(N):
        env = np.einsum("albk,mlr,mks->arbs", env, site, site)
    d = S + 1
    rho = env.reshape(d * d, d * d)
    return rho / np.trace(rho)


def multiplet_populations(S: int, N: int) -> list[float]:
    """Per-state eigenvalue ``tr(P_sigma rho) / (2 sigma + 1)`` for ``sigma = 0..S``,
    where ``rho`` is :func:`end_spin_density_matrix` and ``P_sigma`` projects
    the two ends onto total spin ``sigma``."""
    rho = end_spin_density_matrix(S, N)
    half = Fraction(S, 2)
    return [float(np.trace(aklt_projector(half, half, sigma) @ rho)) / (2 * sigma + 1)
            for sigma in range(S + 1)]


def coherent_state(S, theta: float, phi: float) -> np.ndarray:
    """Spin coherent state ``sum_m u**(S+m) v**(S-m) sqrt(C(2S, S+m)) |S,m>``.

    ``u = exp(i phi/2) cos(theta/2)``, ``v = exp(-i phi/2) sin(theta/2)``.
    With ``S_y = (S+ - S-)/2i`` this is the top eigenvector of ``n . S`` for
    ``n`` at polar angle ``theta`` and azimuth ``-phi``; overlap magnitudes
    only see ``cos(phi - phi')`` and are unaffected.
    """
    tj = _two_j(S)
    u = np.exp(0.5j * phi) * np.cos(theta / 2)
    v = np.exp(-0.5j * phi) * np.sin(theta / 2)
    k = tj - np.arange(tj + 1)  # S + m
    coeffs = np.sqrt([comb(tj, int(n)) for n in k])
    return u ** k * v ** (tj - k) * coeffs


def coherent_overlap_deviation(S, angles) -> float:
    """Largest ``| |<a|b>| - ((1 + a.b)/2)**S |`` over all pairs in ``angles``."""
    tj = _two_j(S)
    worst = 0.0
    for th1, ph1 in angles:
        a = coherent_state(S, th1, ph1)
        n1 = np.array([np.sin(th1) * np.cos(ph1), np.sin(th1) * np.sin(ph1), np.cos(th1)])
        for th2, ph2 in angles:
            b = coherent_state(S, th2, ph2)
            n2 = np.array([np.sin(th2) * np.cos(ph2), np.sin(th2) * np.sin(ph2), np.cos(th2)])
            expected = max(0.0, (1 + n1 @ n2) / 2) ** (tj / 2)
            worst = max(worst, abs(abs(np.vdot(a, b)) - expected))
    return worst
