"""Command-line front end.

Subcommands:

  resonances  enumerate and audit resonances on an index range
  compare     fit the enumerated drift against the asymptotic law
  scatter     reflection/transmission scan and phase-derivative peaks
  validate    profile sanity checks, transform residual, oracle cross-check

Exit codes: 0 success, 1 computation reported failures, 2 bad usage or
unreadable profile.  Output files are canonical: CSV floats carry 17
significant digits, JSON reports embed the tolerances, library versions,
and a hash of the profile + options so runs can be compared byte-wise.
Results do not depend on --jobs; it only caps the evaluation batch size.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from pathlib import Path

import numpy as np
import scipy

from . import __version__, asymptotics, liouville, resonances, scattering
from .errors import CaseError, DomainError, ProfileError, RootFindError
from .profile import SmoothnessTag, classify_smoothness, endpoint_data, load_profile
from .wronskian import WronskianEvaluator, transfer_matrix_wronskian

_CASE_FLAGS = {"i": SmoothnessTag.CASE_I, "ii": SmoothnessTag.CASE_II,
               "iii": SmoothnessTag.CASE_III}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", required=True, type=Path,
                        help="profile description file (INI grammar)")
    common.add_argument("--tol", type=float, default=1e-10,
                        help="relative integration tolerance (default 1e-10)")
    common.add_argument("--out", type=Path, default=Path("."),
                        help="output directory (default: current)")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="table format for the main artifact")
    common.add_argument("--jobs", type=int,
                        default=int(os.environ.get("STRATRES_JOBS", "0")),
                        help="evaluation batch cap, 0 = unlimited "
                             "(env STRATRES_JOBS); never changes results")

    p = argparse.ArgumentParser(prog="stratres",
                                description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("resonances", parents=[common],
                        help="enumerate and audit resonances")
    pr.add_argument("--n-lo", type=int, required=True)
    pr.add_argument("--n-hi", type=int, required=True)
    pr.add_argument("--force-case", choices=sorted(_CASE_FLAGS))
    pr.add_argument("--no-audit", action="store_true",
                    help="skip the argument-principle audit")

    pc = sub.add_parser("compare", parents=[common],
                        help="fit enumerated drift against the asymptotic law")
    pc.add_argument("--n-lo", type=int, required=True)
    pc.add_argument("--n-hi", type=int, required=True)
    pc.add_argument("--force-case", choices=sorted(_CASE_FLAGS))
    pc.add_argument("--n-fit-min", type=int, default=10,
                    help="smallest |n| included in the drift fit")

    ps = sub.add_parser("scatter", parents=[common],
                        help="real-axis reflection scan and phase peaks")
    ps.add_argument("--omega-min", type=float, required=True)
    ps.add_argument("--omega-max", type=float, required=True)
    ps.add_argument("--omega-steps", type=int, default=2000)

    sub.add_parser("validate", parents=[common],
                   help="profile checks, transform residual, oracle cross-check")
    return p


def _load(args):
    try:
        return load_profile(args.profile)
    except (OSError, ProfileError) as exc:
        print(f"error: cannot load profile: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _config_hash(args, profile_path: Path) -> str:
    h = hashlib.sha256()
    h.update(profile_path.read_bytes())
    payload = {k: str(v) for k, v in sorted(vars(args).items())
               if k not in ("out",)}
    h.update(json.dumps(payload, sort_keys=True).encode())
    return h.hexdigest()[:16]


def _json_header(args) -> dict:
    return {
        "tool": "stratres",
        "version": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "rtol": args.tol,
        "atol": args.tol * 1e-2,
        "config_hash": _config_hash(args, args.profile),
    }


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _cmd_resonances(args) -> int:
    model = _load(args)
    opts = resonances.EnumerateOptions(
        rtol=args.tol, atol=args.tol * 1e-2,
        force_case=_CASE_FLAGS.get(args.force_case),
        audit=not args.no_audit)
    try:
        result = resonances.enumerate_resonances(model, args.n_lo, args.n_hi, opts)
    except (DomainError, RootFindError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    args.out.mkdir(parents=True, exist_ok=True)
    if args.format == "csv":
        out = args.out / "resonances.csv"
        resonances.write_resonance_csv(result, out)
    else:
        out = args.out / "resonances.json"
        payload = _json_header(args)
        payload.update(resonances.result_to_json_dict(result))
        _write_json(out, payload)
    for note in result.notices:
        print(f"note: {note}")
    for n, msg in sorted(result.failures.items()):
        print(f"fail n={n}: {msg}", file=sys.stderr)
    print(f"{len(result.resonances)} resonances written to {out} "
          f"(case {result.case.value}, completeness "
          f"{'ok' if result.completeness_ok else result.completeness_ok})")
    return 0 if result.ok else 1


def _cmd_compare(args) -> int:
    model = _load(args)
    opts = resonances.EnumerateOptions(
        rtol=args.tol, atol=args.tol * 1e-2,
        force_case=_CASE_FLAGS.get(args.force_case))
    try:
        result = resonances.enumerate_resonances(model, args.n_lo, args.n_hi, opts)
    except (DomainError, RootFindError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if result.asymptotic is None:
        print("error: no asymptotic law available for this profile",
              file=sys.stderr)
        return 1
    try:
        report = asymptotics.compare(result.resonances, result.asymptotic,
                                     n_fit_min=args.n_fit_min)
    except (CaseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    args.out.mkdir(parents=True, exist_ok=True)
    if args.format == "csv":
        out = args.out / "compare.csv"
        report.write_gap_csv(out)
    else:
        out = args.out / "compare.json"
        payload = _json_header(args)
        payload.update(report.to_json_dict())
        _write_json(out, payload)
    print(f"drift fit: slope {report.slope:.6g} (expected "
          f"{report.expected_slope:.6g}), intercept {report.intercept:.6g} "
          f"(expected {report.expected_intercept:.6g}); written to {out}")
    return 0 if result.ok else 1


def _cmd_scatter(args) -> int:
    model = _load(args)
    if not (0.0 < args.omega_min < args.omega_max) or args.omega_steps < 2:
        print("error: need 0 < --omega-min < --omega-max and --omega-steps >= 2",
              file=sys.stderr)
        return 2
    omegas = np.linspace(args.omega_min, args.omega_max, args.omega_steps)
    try:
        scan = scattering.reflection_scan(model, omegas, rtol=args.tol,
                                          atol=args.tol * 1e-2)
        dsigma = scattering.phase_derivative(model, omegas, rtol=args.tol,
                                             atol=args.tol * 1e-2)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    args.out.mkdir(parents=True, exist_ok=True)
    spectrum = args.out / "spectrum.csv"
    scattering.dump_spectrum_csv(scan, spectrum)
    try:
        peaks = scattering.detect_peaks(omegas, dsigma)
        report = scattering.estimate_tau(peaks)
    except RootFindError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = args.out / "peaks.json"
    payload = _json_header(args)
    payload.update(report.to_json_dict())
    _write_json(out, payload)
    print(f"{len(peaks)} peaks, tau_hat = {report.tau_hat:.9g} "
          f"(gap spread {report.gap_spread:.3g}); wrote {spectrum} and {out}")
    return 0


def _cmd_validate(args) -> int:
    model = _load(args)
    failures = []
    data = endpoint_data(model)
    case = classify_smoothness(data)
    tau = liouville.travel_time(model)
    print(f"profile ok: h = {model.h:.6g}, tau = {tau:.6g}, "
          f"smoothness case {case.tag.value}")

    if model.layer.stack is None or len(model.layer.stack) == 1:
        chart = liouville.liouville_map(model)
        omega_chk = complex(4.0 * math.pi / tau, -0.5 / tau)
        resid = liouville.verify_transform(model, chart, omega_chk)
        print(f"transform residual at omega = {omega_chk:.4g}: {resid:.3e}")
        if resid > 1e-6:
            failures.append(f"transform residual {resid:.3e} exceeds 1e-6")
    else:
        print("transform residual skipped: the normal-form check needs a "
              "twice-differentiable layer, not a stack")

    if model.layer.stack is not None:
        ev = WronskianEvaluator(model, rtol=args.tol, atol=args.tol * 1e-2)
        probes = np.array([1.5, 4.0 + 0.7j, 9.0 - 2.0j]) * (math.pi / tau)
        probes = probes.astype(complex)
        probes = np.where(probes.imag > 0, probes.conj(), probes)
        num = ev.wronskian_many(probes)
        ora = transfer_matrix_wronskian(model, probes)
        gap = float(np.max(np.abs(num - ora) / np.abs(ora)))
        print(f"piecewise-constant oracle agreement: {gap:.3e}")
        if gap > 1e-8:
            failures.append(f"oracle disagreement {gap:.3e} exceeds 1e-8")

    for msg in failures:
        print(f"fail: {msg}", file=sys.stderr)
    return 1 if failures else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"resonances": _cmd_resonances, "compare": _cmd_compare,
                "scatter": _cmd_scatter, "validate": _cmd_validate}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
