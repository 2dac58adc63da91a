"""Exit criteria, one test per criterion, each at its stated tolerance.

Every test records a PASS/FAIL line that is repeated in the pytest terminal
summary.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np

from aklt_entanglement import oracle
from aklt_entanglement import spectrum_core as core
from aklt_entanglement.cli import main
from aklt_entanglement.majorization import SchmidtSpectrum, expand, nielsen_max_entangled_check
from aklt_entanglement.oracle import BlockSelection
from aklt_entanglement.spectrum_core import (
    asymptotic_e1,
    e1_gap,
    largest_eigenvalue,
    parity_rule_argmax,
    single_copy_entanglement,
    spectrum,
    spectrum_entropy,
    transfer_eigenvalue,
    von_neumann_entropy,
)


def _clear_caches():
    for fn in (core.transfer_eigenvalue, core.legendre_coefficient,
               core.channel_weight, core._channel_table):
        fn.cache_clear()


def test_saturation(acceptance):
    _clear_caches()
    start = time.perf_counter()
    worst_e1 = worst_vn = 0.0
    for S in range(1, 7):
        target = asymptotic_e1(S)
        worst_e1 = max(worst_e1, abs(single_copy_entanglement(S, 200) - target))
        worst_vn = max(worst_vn, abs(von_neumann_entropy(S, 200) - target))
    elapsed = time.perf_counter() - start
    ok = worst_e1 < 1e-9 and worst_vn < 1e-9 and elapsed < 5.0
    acceptance("saturation", ok,
               f"S=1..6, L=200: max|E1-2log2(S+1)|={worst_e1:.3g}, "
               f"max|S_vN-2log2(S+1)|={worst_vn:.3g} (tol 1e-9), {elapsed:.2f}s (limit 5s)")
    assert ok


def test_oracle_equivalence(acceptance):
    start = time.perf_counter()
    worst, mismatched = 0.0, []
    for S in (1, 2):
        for L in range(1, 7):
            brute = oracle.reduced_spectrum(oracle.build_vbs(S, L), BlockSelection(1, L))
            exact = [float(p) for p in expand(spectrum(S, L)) if p > 0]
            if len(brute) != len(exact):
                mismatched.append((S, L))
                continue
            worst = max(worst, float(np.max(np.abs(np.subtract(brute, exact)))))
    elapsed = time.perf_counter() - start
    ok = not mismatched and worst <= 1e-10 and elapsed < 60.0
    acceptance("oracle_equivalence", ok,
               f"S in {{1,2}}, L=N in 1..6: max deviation {worst:.3g} (tol 1e-10), "
               f"rank mismatches {mismatched}, {elapsed:.2f}s (limit 60s)")
    assert ok


def test_n_independence(acceptance):
    S, L = 1, 3
    spectra = {}
    for N in (3, 4, 5, 6):
        state = oracle.build_vbs(S, N)
        for first in range(1, N - L + 2):
            spectra[(N, first)] = oracle.reduced_spectrum(state, BlockSelection(first, first + L - 1))
    ref = spectra[(3, 1)]
    same_rank = all(len(v) == len(ref) for v in spectra.values())
    worst = max(float(np.max(np.abs(np.subtract(v, ref)))) for v in spectra.values()) \
        if same_rank else math.inf
    ok = worst <= 1e-10
    acceptance("n_independence", ok,
               f"S=1, L=3, N in 3..6, every block position: max deviation {worst:.3g} (tol 1e-10)")
    assert ok


def test_ground_state(acceptance):
    worst, failed = 0.0, []
    for S in (1, 2):
        for N in range(2, 6):
            residuals = [r for _, r in oracle.annihilation_residuals(oracle.build_vbs(S, N))]
            worst = max([worst] + residuals)
            if not oracle.verify_ground_state(S, N):
                failed.append((S, N))
    ok = not failed and worst <= 1e-10
    acceptance("ground_state", ok,
               f"S in {{1,2}}, N in 2..5: max annihilation norm {worst:.3g} (tol 1e-10), "
               f"failures {failed}")
    assert ok


def test_exact_invariants(acceptance):
    problems = []
    for S in range(1, 11):
        flat = Fraction(1, (S + 1) ** 2)
        target = asymptotic_e1(S)
        for L in range(1, 51):
            spec = spectrum(S, L)
            if spec.trace != 1:
                problems.append((S, L, "trace"))
            if any(lvl.eigenvalue < 0 for lvl in spec.levels):
                problems.append((S, L, "negative"))
            _, lam1 = largest_eigenvalue(spec)
            if lam1 < flat:
                problems.append((S, L, "pigeonhole"))
            e1 = core.neg_log(lam1)
            vn = spectrum_entropy(spec)
            if not (0 <= e1 <= vn + 1e-12 and vn <= target + 1e-12):
                problems.append((S, L, "ordering"))
    ok = not problems
    acceptance("exact_invariants", ok,
               f"S=1..10, L=1..50: exact trace 1, p>=0, Lambda1>=1/(S+1)^2, "
               f"E1<=S_vN<=2log2(S+1) (tol 1e-12); violations {problems[:5]}")
    assert ok


def test_exponential_rate(acceptance):
    worst = 0.0
    for S in (1, 2, 3):
        expected = float(transfer_eigenvalue(S, 1) ** 2)
        for L in range(20, 41):
            ratio = e1_gap(spectrum(S, L + 2)) / e1_gap(spectrum(S, L))
            worst = max(worst, abs(ratio / expected - 1))
    ok = worst <= 0.05
    acceptance("exponential_rate", ok,
               f"S in {{1,2,3}}, L in 20..40: max relative deviation of eps(L+2)/eps(L) "
               f"from (S/(S+2))^2 = {worst:.3g} (tol 0.05)")
    assert ok


def test_majorization_suite(acceptance, capsys):
    rng = random.Random(20061)
    disagreements = 0
    for _ in range(1000):
        n = rng.randint(1, 12)
        weights = [rng.randint(0, 20) for _ in range(n)]
        if rng.random() < 0.2:
            weights = [rng.randint(1, 3)] * n  # exact-boundary cases
        if sum(weights) == 0:
            weights[0] = 1
        total = sum(weights)
        spec = SchmidtSpectrum(Fraction(w, total) for w in weights)
        M = rng.randint(1, 15)
        prefix_ok = nielsen_max_entangled_check(spec, M).possible
        if prefix_ok != (spec[0] <= Fraction(1, M)):
            disagreements += 1

    verdicts = {}
    for M in (3, 4):
        assert main(["convert", "--spin", "1", "--length", "2", "--target", str(M)]) == 0
        out = capsys.readouterr().out.splitlines()
        header, row = out[0].split(","), out[1].split(",")
        verdicts[M] = dict(zip(header, row))["possible"]
    ok = disagreements == 0 and verdicts == {3: "true", 4: "false"}
    acceptance("majorization_suite", ok,
               f"1000 random spectra: {disagreements} prefix/shortcut disagreements; "
               f"convert S=1 L=2: M=3 -> {verdicts[3]}, M=4 -> {verdicts[4]}")
    assert ok


def test_coherent_overlap(acceptance):
    thetas = np.linspace(0.0, np.pi, 5)
    phis = np.linspace(0.0, 2 * np.pi, 5, endpoint=False)
    grid = [(float(t), float(p)) for t in thetas for p in phis]
    worst = max(oracle.coherent_overlap_deviation(S, grid) for S in (1, 2, 3))
    ok = worst <= 1e-12
    acceptance("coherent_overlap", ok,
               f"S in {{1,2,3}}, all pairs on 5x5 (theta, phi) grid: "
               f"max deviation {worst:.3g} (tol 1e-12)")
    assert ok


def _dense_argmax(S, L):
    # multiplicity of the top eigenvalue identifies the multiplet
    evals = oracle.reduced_spectrum(oracle.build_vbs(S, L), BlockSelection(1, L))
    top = sum(1 for e in evals if abs(e - evals[0]) < 1e-10)
    return (top - 1) // 2


def test_parity_audit(acceptance):
    observed, mismatches, dense_checked = {}, [], 0
    for S in (1, 2, 3):
        for L in range(1, 13):
            sigma_star, _ = largest_eigenvalue(spectrum(S, L))
            pops = oracle.multiplet_populations(S, L)
            oracle_star = int(np.argmax(pops))
            if oracle.vbs_size(S, L) <= 10**6:
                dense_checked += 1
                if _dense_argmax(S, L) != oracle_star:
                    mismatches.append((S, L, "dense"))
            observed[(S, L)] = sigma_star
            if sigma_star != oracle_star:
                mismatches.append((S, L))
    rule_agree = sum(observed[k] == parity_rule_argmax(*k) for k in observed)
    pattern = {S: "".join(str(observed[(S, L)]) for L in range(1, 13)) for S in (1, 2, 3)}
    ok = not mismatches
    acceptance("parity_audit", ok,
               f"closed-form argmax matches oracle in {len(observed) - len(mismatches)}/"
               f"{len(observed)} cases ({dense_checked} also by dense diagonalization); "
               f"observed sigma* for L=1..12: {pattern}")
    # reported, not asserted
    acceptance("parity_audit_vs_stated_rule", True,
               f"stated rule (sigma=S for even L, 0 for odd L) agrees in "
               f"{rule_agree}/{len(observed)} cases; observed is sigma=S for odd L, "
               f"0 for even L (documented discrepancy)")
    assert ok
