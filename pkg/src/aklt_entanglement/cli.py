"""Command-line front end.

Usage:
    aklt-entanglement spectrum --spin 1 --length 2
    aklt-entanglement sweep --spin 3 --lmax 60 --format json
    aklt-entanglement verify --spin 2 --max-length 4
    aklt-entanglement convert --spin 1 --length 2 --target 3

Exit codes: 0 success, 2 bad parameters, 3 oracle size guard exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import majorization, oracle
from .errors import ParameterError, ResourceError
from .spectrum_core import check_length, check_spin, entanglement_report, spectrum

EXIT_OK = 0
EXIT_BAD_PARAMS = 2
EXIT_RESOURCE = 3

SPECTRUM_FIELDS = ["spin", "length", "sigma", "degeneracy",
                   "eigenvalue_num", "eigenvalue_den", "eigenvalue"]
SWEEP_FIELDS = ["spin", "length", "e1_bits", "vn_bits", "asymptote_bits",
                "e1_gap", "vn_gap", "sigma_star"]
VERIFY_FIELDS = ["check", "passed", "max_deviation", "tolerance"]
CONVERT_FIELDS = ["spin", "length", "target", "possible", "witness_k",
                  "max_distillable_dim", "largest_num", "largest_den",
                  "e1_bits", "e1_integer_bits"]

log = logging.getLogger(__name__)


def decimal(x) -> float:
    """Round to 15 significant digits."""
    return float(f"{float(x):.15g}")


def _unit_fields(fields: list[str], nats: bool) -> list[str]:
    return [f.replace("_bits", "_nats") for f in fields] if nats else fields


# ---------------------------------------------------------------------------
# Row builders
# ---------------------------------------------------------------------------

def spectrum_rows(S: int, L: int) -> tuple[list[dict], Fraction]:
    spec = spectrum(S, L)
    rows = [
        {
            "spin": S,
            "length": L,
            "sigma": lvl.sigma,
            "degeneracy": lvl.degeneracy,
            "eigenvalue_num": lvl.eigenvalue.numerator,
            "eigenvalue_den": lvl.eigenvalue.denominator,
            "eigenvalue": decimal(lvl.eigenvalue),
        }
        for lvl in spec.levels
    ]
    return rows, spec.trace


def sweep_row(S: int, L: int, nats: bool = False) -> dict:
    rep = entanglement_report(S, L, base=math.e if nats else 2)
    row = {
        "spin": S,
        "length": L,
        "e1_bits": decimal(rep.e1),
        "vn_bits": decimal(rep.vn_entropy),
        "asymptote_bits": decimal(rep.asymptote),
        "e1_gap": decimal(rep.e1_gap),
        "vn_gap": decimal(rep.vn_gap),
        "sigma_star": rep.largest_sigma,
    }
    return dict(zip(_unit_fields(list(row), nats), row.values()))


def _sweep_task(args):
    return sweep_row(*args)


def sweep_rows(S: int, lengths: list[int], nats: bool = False, jobs: int = 1) -> list[dict]:
    tasks = [(S, L, nats) for L in lengths]
    if jobs > 1:
        # map preserves submission order, so output stays deterministic
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_task, tasks))
    return [_sweep_task(t) for t in tasks]


def convert_row(S: int, L: int, M: int, nats: bool = False) -> dict:
    schmidt = majorization.expand(spectrum(S, L))
    verdict = majorization.nielsen_max_entangled_check(schmidt, M)
    scale = math.log(2) if nats else 1.0
    row = {
        "spin": S,
        "length": L,
        "target": M,
        "possible": verdict.possible,
        "witness_k": verdict.witness_K,
        "max_distillable_dim": majorization.max_distillable_dim(schmidt),
        "largest_num": schmidt.largest.numerator,
        "largest_den": schmidt.largest.denominator,
        "e1_bits": decimal(majorization.e1_bits(schmidt) * scale),
        "e1_integer_bits": decimal(majorization.e1_integer_bits(schmidt) * scale),
    }
    return dict(zip(_unit_fields(list(row), nats), row.values()))


def _angle_grid(n_theta: int = 5, n_phi: int = 5) -> list[tuple[float, float]]:
    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    return [(float(t), float(p)) for t in thetas for p in phis]


def verify_rows(S: int, max_length: int, tol: float = 1e-10,
                coherent_tol: float = 1e-12) -> list[dict]:
    """Run the oracle suite; one row per check."""
    check_spin(S)
    check_length(max_length)
    need = oracle.vbs_size(S, max_length)
    if need > oracle.max_amplitudes():
        raise ResourceError(
            f"S={S}, N={max_length} needs {need} amplitudes "
            f"(limit {oracle.max_amplitudes()}; set {oracle.MAX_AMPLITUDES_ENV} to override)")

    states = {N: oracle.build_vbs(S, N) for N in range(1, max_length + 1)}
    rows = []

    def add(name, deviation, tolerance, ok=None):
        passed = deviation <= tolerance if ok is None else ok and deviation <= tolerance
        rows.append({"check": name, "passed": bool(passed),
                     "max_deviation": decimal(deviation), "tolerance": tolerance})

    # closed form vs brute force, L = N
    worst, shapes_ok, rank_ok = 0.0, True, True
    for N, state in states.items():
        brute = oracle.reduced_spectrum(state, oracle.BlockSelection(1, N))
        exact = [float(p) for p in spectrum(S, N).eigenvalues() if p > 0]
        rank_ok &= len(brute) <= (S + 1) ** 2
        if len(brute) != len(exact):
            shapes_ok = False
            continue
        worst = max(worst, float(np.max(np.abs(np.array(brute) - np.array(exact)))))
    add("oracle_equivalence", worst, tol, shapes_ok)
    add("spectrum_rank", 0.0, tol, rank_ok)

    # block spectrum does not depend on the total chain length
    L = min(3, max_length)
    ref = oracle.reduced_spectrum(states[L], oracle.BlockSelection(1, L))
    worst, shapes_ok = 0.0, True
    for N in range(L + 1, max_length + 1):
        other = oracle.reduced_spectrum(states[N], oracle.BlockSelection(1, L))
        if len(other) != len(ref):
            shapes_ok = False
            continue
        worst = max(worst, float(np.max(np.abs(np.array(other) - np.array(ref)))))
    add(f"n_independence_L{L}", worst, tol, shapes_ok)

    worst = 0.0
    for N in range(2, max_length + 1):
        worst = max([worst] + [r for _, r in oracle.annihilation_residuals(states[N])])
    add("ground_state", worst, tol)

    add("coherent_overlap", oracle.coherent_overlap_deviation(S, _angle_grid()), coherent_tol)
    return rows


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.15g}"
    return v


def render(rows: list[dict], fields: list[str], fmt: str, extra: dict | None = None) -> str:
    if fmt == "json":
        payload = dict(extra or {})
        payload["rows"] = rows
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_value(v) for k, v in row.items()})
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    rows, trace = spectrum_rows(args.spin, args.length)
    extra = {"command": "spectrum", "spin": args.spin, "length": args.length,
             "trace": str(trace)}
    _emit(render(rows, SPECTRUM_FIELDS, args.format, extra), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    check_spin(args.spin)
    if args.step < 1:
        raise ParameterError(f"--step must be >= 1, got {args.step}")
    check_length(args.lmin)
    lengths = list(range(args.lmin, args.lmax + 1, args.step))
    if not lengths:
        raise ParameterError(f"empty length range {args.lmin}..{args.lmax}")
    rows = sweep_rows(args.spin, lengths, nats=args.nats, jobs=args.jobs)
    extra = {"command": "sweep", "spin": args.spin, "unit": "nats" if args.nats else "bits"}
    _emit(render(rows, _unit_fields(SWEEP_FIELDS, args.nats), args.format, extra), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.tol <= 0 or args.coherent_tol <= 0:
        raise ParameterError("tolerances must be positive")
    rows = verify_rows(args.spin, args.max_length, args.tol, args.coherent_tol)
    ok = all(r["passed"] for r in rows)
    extra = {"command": "verify", "spin": args.spin, "max_length": args.max_length,
             "passed": ok}
    _emit(render(rows, VERIFY_FIELDS, args.format, extra), args.out)
    return EXIT_OK if ok else 1


def cmd_convert(args) -> int:
    check_spin(args.spin)
    check_length(args.length)
    if args.target < 1:
        raise ParameterError(f"--target must be >= 1, got {args.target}")
    row = convert_row(args.spin, args.length, args.target, nats=args.nats)
    extra = {"command": "convert"}
    _emit(render([row], _unit_fields(CONVERT_FIELDS, args.nats), args.format, extra), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aklt-entanglement",
        description="Exact block entanglement of the spin-S AKLT chain.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--spin", type=int, required=True, help="bulk spin S (>= 1)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="write to this path instead of stdout")

    p = sub.add_parser("spectrum", help="multiplet spectrum of one block")
    common(p)
    p.add_argument("--length", type=int, required=True, help="block length L (>= 1)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="E1, von Neumann entropy and gaps over a range of L")
    common(p)
    p.add_argument("--lmin", type=int, default=1)
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--nats", action="store_true", help="natural logarithms instead of bits")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="brute-force oracle checks")
    common(p)
    p.add_argument("--max-length", type=int, default=6)
    p.add_argument("--tol", type=float, default=1e-10,
                   help="tolerance for spectra and annihilation norms")
    p.add_argument("--coherent-tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("convert", help="LOCC conversion to an M x M maximally entangled state")
    common(p)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--target", type=int, required=True, help="target dimension M")
    p.add_argument("--nats", action="store_true")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_PARAMS
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
