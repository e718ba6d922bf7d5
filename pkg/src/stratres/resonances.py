"""Locate and index the zeros of the scaled Wronskian in the lower half-plane.

Strategy: leading-order asymptotic seeds, vectorized Newton refinement with
the variational derivative, then an argument-principle audit.  Winding
numbers are obtained by phase continuation along the contour (adaptively
refined until every step turns by less than one radian), which evaluates
the same integral (1/2 pi i) contour-int W'/W dw without needing the
derivative on the contour.  Adjacent audit boxes share their vertical
edges, so a whole lattice run is audited on one sampled grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import asymptotics as asy
from .errors import CaseError, DomainError, RootFindError
from .profile import (MediumModel, SmoothnessTag, classify_smoothness,
                      endpoint_data, DEFAULT_CLASSIFY_TOL)
from .wronskian import WronskianEvaluator

_PHASE_STEP_MAX = 1.0        # rad per contour segment after refinement
_WINDING_INT_TOL = 0.25      # max distance of winding sum from an integer
_MAX_REFINE_ROUNDS = 24


@dataclass(frozen=True)
class SearchBox:
    """Axis-aligned rectangle in the omega plane, im_hi <= 0."""

    re_lo: float
    re_hi: float
    im_lo: float
    im_hi: float

    def __post_init__(self):
        if not (self.re_lo < self.re_hi and self.im_lo < self.im_hi):
            raise ValueError("degenerate search box")
        if self.im_hi > 0.0:
            raise ValueError("search box must lie in the closed lower half-plane")

    def contains(self, omega: complex) -> bool:
        return (self.re_lo <= omega.real <= self.re_hi
                and self.im_lo <= omega.imag <= self.im_hi)


@dataclass(frozen=True)
class Resonance:
    """A refined zero of the Wronskian with its search diagnostics."""

    n: int
    omega: complex
    seed: complex
    newton_residual: float
    iterations: int
    multiplicity: int = 1
    residual_history: tuple = ()


class _ContourTooClose(Exception):
    """A contour point sits too close to a zero; retry with a perturbed box."""


# ---------------------------------------------------------------------------
# Phase-continuation winding numbers on a shared grid of boxes
# ---------------------------------------------------------------------------

class _Chain:
    """A directed polyline of contour samples with their W values."""

    def __init__(self, a: complex, b: complex, n: int):
        n = max(int(n), 2)
        t = np.linspace(0.0, 1.0, n)
        self.pts = a + (b - a) * t
        self.vals = None

    def dphi(self) -> np.ndarray:
        return np.angle(self.vals[1:] / self.vals[:-1])

    def total(self) -> float:
        return float(np.sum(self.dphi()))


def _refine_chains(evaluator, chains, span_scale):
    """Insert midpoints until every phase step is below _PHASE_STEP_MAX."""
    # initial evaluation in one batch
    pending = [ch for ch in chains if ch.vals is None]
    if pending:
        allpts = np.concatenate([ch.pts for ch in pending])
        vals = evaluator.wronskian_many(allpts)
        pos = 0
        for ch in pending:
            ch.vals = vals[pos:pos + len(ch.pts)]
            pos += len(ch.pts)

    for _ in range(_MAX_REFINE_ROUNDS):
        requests = []   # (chain, segment index)
        for ch in chains:
            bad = np.nonzero(np.abs(ch.dphi()) > _PHASE_STEP_MAX)[0]
            for i in bad:
                # a full-radian turn across a tiny segment means a zero is
                # within clearance distance of the contour
                if abs(ch.pts[i + 1] - ch.pts[i]) < 1e-6 * span_scale:
                    raise _ContourTooClose()
                requests.append((ch, int(i)))
        if not requests:
            return
        mids = np.array([0.5 * (ch.pts[i] + ch.pts[i + 1]) for ch, i in requests])
        vals = evaluator.wronskian_many(mids)
        # splice per chain, highest index first so positions stay valid
        by_chain = {}
        for (ch, i), mid, val in zip(requests, mids, vals):
            by_chain.setdefault(id(ch), (ch, []))[1].append((i, mid, val))
        for ch, items in by_chain.values():
            items.sort(reverse=True)
            pts = list(ch.pts)
            vs = list(ch.vals)
            for i, mid, val in items:
                pts.insert(i + 1, mid)
                vs.insert(i + 1, val)
            ch.pts = np.array(pts)
            ch.vals = np.array(vs)
    raise RootFindError("contour refinement did not settle "
                        f"in {_MAX_REFINE_ROUNDS} rounds")


def _grid_windings(evaluator, re_edges, im_lo, im_hi,
                   clearance_rel: float = 1e-6):
    """Winding numbers for the row of boxes delimited by ``re_edges``.

    Returns one (pre-rounding) winding value per box.  Raises
    _ContourTooClose when any contour sample is closer than the clearance
    threshold to a zero.
    """
    tau = evaluator.tau
    re_edges = np.asarray(re_edges, dtype=float)
    nbox = len(re_edges) - 1
    span = max(re_edges[-1] - re_edges[0], im_hi - im_lo)

    def density(length):
        # expected phase ~ 2 tau length from the e^{2 i w tau} factor
        return int(math.ceil(2.0 * tau * length / 0.7)) + 5

    bottoms, tops, verts = [], [], []
    for j in range(nbox):
        a, b = re_edges[j], re_edges[j + 1]
        n = density(b - a)
        bottoms.append(_Chain(a + 1j * im_lo, b + 1j * im_lo, n))
        tops.append(_Chain(a + 1j * im_hi, b + 1j * im_hi, n))
    for e in re_edges:
        n = density(im_hi - im_lo)
        verts.append(_Chain(e + 1j * im_lo, e + 1j * im_hi, n))

    chains = bottoms + tops + verts
    _refine_chains(evaluator, chains, span)

    windings = []
    for j in range(nbox):
        box_chains = (bottoms[j], tops[j], verts[j], verts[j + 1])
        mags = np.concatenate([np.abs(ch.vals) for ch in box_chains])
        if np.min(mags) < clearance_rel * np.median(mags):
            raise _ContourTooClose()
        total = (bottoms[j].total() + verts[j + 1].total()
                 - tops[j].total() - verts[j].total())
        windings.append(total / (2.0 * math.pi))
    return windings


def count_zeros(evaluator: WronskianEvaluator, box: SearchBox,
                clearance_rel: float = 1e-6, max_perturb: int = 3) -> int:
    """Number of zeros of What inside the box, by the argument principle.

    The contour is retried with a slightly expanded box (up to
    ``max_perturb`` times) when a sample falls too close to a zero.
    """
    cur = box
    worst = None
    for attempt in range(max_perturb + 1):
        try:
            (w,) = _grid_windings(evaluator, [cur.re_lo, cur.re_hi],
                                  cur.im_lo, cur.im_hi,
                                  clearance_rel=clearance_rel)
            nearest = round(w)
            if abs(w - nearest) <= _WINDING_INT_TOL:
                return int(nearest)
            # a non-integer winding means a zero sits on (or hugs) the
            # contour; treat it like a clearance failure and move the box
            worst = w
        except _ContourTooClose:
            pass
        d_re = 0.017 * (attempt + 1) * (cur.re_hi - cur.re_lo)
        d_im = 0.017 * (attempt + 1) * (cur.im_hi - cur.im_lo)
        cur = SearchBox(cur.re_lo - d_re, cur.re_hi + d_re,
                        cur.im_lo - d_im, min(cur.im_hi + d_im, 0.0))
    detail = f" (last winding {worst:.4f})" if worst is not None else ""
    raise RootFindError(
        f"contour stayed too close to a zero after {max_perturb} "
        f"perturbations of {box}{detail}")


# ---------------------------------------------------------------------------
# Newton refinement
# ---------------------------------------------------------------------------

def _newton_many(evaluator, seeds, tol: float = 1e-10, max_iter: int = 12):
    """Vectorized Newton iteration on What.

    Returns (omega, residual, iterations, history, error) per seed; the
    error string is None on success.  The residual is |What| measured
    relative to |dWhat/dw| * pi/tau, the local Wronskian scale across one
    resonance spacing.
    """
    seeds = np.asarray(seeds, dtype=complex)
    nseed = len(seeds)
    z = seeds.copy()
    errors: list = [None] * nseed
    iters = np.zeros(nseed, dtype=int)
    resid = np.full(nseed, np.inf)
    history: list = [[] for _ in range(nseed)]
    active = np.ones(nseed, dtype=bool)
    pi_tau = math.pi / evaluator.tau

    for it in range(max_iter):
        # drop iterates that left the admissible region
        bad = active & ((np.abs(z) < evaluator.omega_min)
                        | (z.imag < -evaluator.imax))
        for i in np.nonzero(bad)[0]:
            errors[i] = ("iterate entered the excluded region near omega = 0 "
                         "(not a resonance)" if abs(z[i]) < evaluator.omega_min
                         else "iterate left the configured scan depth")
            active[i] = False
        if not np.any(active):
            break
        idx = np.nonzero(active)[0]
        w, dw = evaluator.wronskian_and_derivative_many(z[idx])
        scale = np.abs(dw) * pi_tau
        zero_dw = scale == 0.0
        for k in np.nonzero(zero_dw)[0]:
            errors[idx[k]] = "vanishing Wronskian derivative (multiple zero?)"
            active[idx[k]] = False
        r = np.where(scale > 0, np.abs(w) / np.where(scale > 0, scale, 1.0), np.inf)
        for k, i in enumerate(idx):
            history[i].append(float(r[k]))
            resid[i] = float(r[k])
            iters[i] = it + 1
        converged = (r <= tol) & ~zero_dw
        step = np.where(zero_dw, 0.0, w / np.where(dw != 0, dw, 1.0))
        for k, i in enumerate(idx):
            if converged[k]:
                active[i] = False
            else:
                z[i] -= step[k]
    for i in np.nonzero(active)[0]:
        errors[i] = (f"Newton did not converge in {max_iter} iterations "
                     f"(best residual {resid[i]:.3e})")
    return z, resid, iters, history, errors


def refine(evaluator: WronskianEvaluator, seed: complex, tol: float = 1e-10,
           max_iter: int = 12, audit_multiplicity: bool = True) -> Resonance:
    """Newton-refine a single seed into a Resonance.

    Raises RootFindError when the iteration diverges, lands on the real
    axis or above (not a resonance), or enters the excluded region near
    omega = 0; the best iterate is attached to the exception.
    """
    z, resid, iters, history, errors = _newton_many(
        evaluator, [complex(seed)], tol=tol, max_iter=max_iter)
    if errors[0] is not None:
        raise RootFindError(errors[0], best=complex(z[0]))
    omega = complex(z[0])
    if omega.imag >= 0.0:
        raise RootFindError("not a resonance: refined zero has Im omega >= 0",
                            best=omega)
    mult = 1
    if audit_multiplicity:
        half = math.pi / (8.0 * evaluator.tau)
        box = SearchBox(omega.real - half, omega.real + half,
                        omega.imag - half,
                        omega.imag + min(half, 0.5 * abs(omega.imag)))
        mult = count_zeros(evaluator, box)
        if mult != 1:
            raise RootFindError(
                f"box-counted multiplicity {mult} != 1 at {omega}", best=omega)
    n = round(omega.real * evaluator.tau / math.pi)
    return Resonance(n=int(n), omega=omega, seed=complex(seed),
                     newton_residual=float(resid[0]), iterations=int(iters[0]),
                     multiplicity=mult, residual_history=tuple(history[0]))


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnumerateOptions:
    rtol: float = 1e-10
    atol: float = 1e-12
    newton_tol: float = 1e-10
    classify_tol: float = DEFAULT_CLASSIFY_TOL
    force_case: SmoothnessTag | None = None
    theta_variant: str = asy.DEFAULT_THETA_VARIANT
    audit: bool = True
    completeness: bool = True
    fallback_depth: float = 6.0       # in units of 1/tau, for unclassified profiles
    fallback_grid: tuple = (48, 36)


@dataclass
class EnumerationResult:
    resonances: list
    failures: dict
    case: SmoothnessTag
    asymptotic: asy.AsymptoticModel | None
    notices: list
    audit_counts: dict
    completeness_ok: bool | None

    @property
    def ok(self) -> bool:
        return not self.failures and (self.completeness_ok is not False)


def _fallback_seed(evaluator, box: SearchBox, grid=(48, 36)) -> complex:
    """Coarse |What| minimum inside the box, as a Newton seed."""
    re = np.linspace(box.re_lo, box.re_hi, grid[0])
    im = np.linspace(box.im_lo, box.im_hi, grid[1])
    rr, ii = np.meshgrid(re, im, indexing="ij")
    omegas = (rr + 1j * ii).ravel()
    vals = np.abs(evaluator.wronskian_many(omegas))
    return complex(omegas[int(np.argmin(vals))])


def _audit_depth(ims, tau):
    """Common imaginary band for the audit boxes, containing all zeros."""
    lo = min(ims) - max(1.0 / tau, 0.3 * abs(min(ims)))
    hi = max(-0.01 / tau, 0.5 * max(ims))
    return lo, hi


def enumerate_resonances(model: MediumModel, n_lo: int, n_hi: int,
                         options: EnumerateOptions | None = None) -> EnumerationResult:
    """One audited Resonance per lattice index in [n_lo, n_hi].

    Indices are seeded from the classified asymptotic law (or a coarse
    |What| scan for unclassified profiles), Newton-refined, and audited:
    a box of width pi/tau centered on each seed must contain exactly one
    zero that matches the refined value.  Per-index problems land in
    ``failures`` instead of aborting the run.
    """
    opts = options or EnumerateOptions()
    if n_lo > n_hi:
        raise ValueError("empty index range")
    ev = WronskianEvaluator(model, rtol=opts.rtol, atol=opts.atol)
    tau = ev.tau
    data = endpoint_data(model)
    if opts.force_case is not None:
        case = opts.force_case
    else:
        case = classify_smoothness(data, opts.classify_tol).tag

    notices: list = []
    am = None
    if case != SmoothnessTag.UNCLASSIFIED:
        try:
            am = asy.build_asymptotic_model(data, case, tau,
                                            theta_variant=opts.theta_variant)
        except CaseError as exc:
            notices.append(f"asymptotic model unavailable: {exc}")

    half = am is not None and asy.uses_half_lattice(am)
    ns = list(range(n_lo, n_hi + 1))
    if 0 in ns and not half:
        ns.remove(0)
        notices.append("n = 0 skipped (omega = 0 threshold)")

    def center(n):
        return math.pi * (n + 0.5) / tau if half else math.pi * n / tau

    # seeds
    seeds = {}
    if am is not None:
        for n in ns:
            seeds[n] = asy.asymptotic_resonance(am, n)
    else:
        depth = opts.fallback_depth / tau
        for n in ns:
            box = SearchBox(center(n) - math.pi / (2 * tau),
                            center(n) + math.pi / (2 * tau),
                            -depth, -0.05 / tau)
            seeds[n] = _fallback_seed(ev, box, grid=opts.fallback_grid)
        notices.append("seeds from coarse |W| scan (no asymptotic law)")

    def newton_pass(index_list):
        omega, resid, iters, history, errors = _newton_many(
            ev, [seeds[n] for n in index_list], tol=opts.newton_tol)
        bad, good = {}, {}
        for k, n in enumerate(index_list):
            if errors[k] is not None:
                bad[n] = errors[k]
            elif omega[k].imag >= 0.0:
                bad[n] = "not a resonance: refined zero has Im omega >= 0"
            else:
                good[n] = Resonance(
                    n=n, omega=complex(omega[k]), seed=complex(seeds[n]),
                    newton_residual=float(resid[k]), iterations=int(iters[k]),
                    residual_history=tuple(history[k]))
        return good, bad

    refined, failures = newton_pass(ns)
    for n in sorted(refined):
        if abs(refined[n].omega.real - center(n)) > math.pi / (2 * tau):
            failures[n] = ("refined zero "
                           f"{refined[n].omega:.6f} left its lattice column")
            del refined[n]

    if failures:
        # pre-asymptotic indices can defeat the leading-order seed; retry
        # those columns from a coarse |W| scan before reporting failure
        retry = sorted(failures)
        for n in retry:
            pred_im = seeds[n].imag
            box = SearchBox(center(n) - math.pi / (2 * tau),
                            center(n) + math.pi / (2 * tau),
                            min(pred_im, -1.0 / tau) - 2.0 / tau, -0.05 / tau)
            seeds[n] = _fallback_seed(ev, box, grid=opts.fallback_grid)
        good, bad = newton_pass(retry)
        for n, r in good.items():
            if abs(r.omega.real - center(n)) <= math.pi / (2 * tau):
                refined[n] = r
                del failures[n]
                notices.append(f"n = {n} recovered from a grid-scan seed")
        for n, msg in bad.items():
            failures[n] = f"no zero found in its lattice column ({msg})"

    audit_counts: dict = {}
    completeness_ok: bool | None = None
    if opts.audit and refined:
        ims = [r.omega.imag for r in refined.values()]
        im_lo, im_hi = _audit_depth(ims, tau)

        # contiguous runs of audited indices share their box edges
        audited = sorted(refined)
        runs = []
        run = [audited[0]]
        for n in audited[1:]:
            if n == run[-1] + 1:
                run.append(n)
            else:
                runs.append(run)
                run = [n]
        runs.append(run)

        total_expected = 0
        total_counted = 0
        for run in runs:
            edges = [center(run[0]) - math.pi / (2 * tau)] + \
                    [center(n) + math.pi / (2 * tau) for n in run]
            try:
                windings = _grid_windings(ev, edges, im_lo, im_hi)
                counts = []
                for w in windings:
                    nearest = round(w)
                    if abs(w - nearest) > _WINDING_INT_TOL:
                        raise RootFindError(f"non-integer winding {w:.4f}")
                    counts.append(int(nearest))
            except (_ContourTooClose, RootFindError):
                # grid sampling hit a zero; audit boxes one at a time
                counts = []
                for n in run:
                    box = SearchBox(center(n) - math.pi / (2 * tau),
                                    center(n) + math.pi / (2 * tau),
                                    im_lo, im_hi)
                    try:
                        counts.append(count_zeros(ev, box))
                    except RootFindError as exc:
                        counts.append(-1)
                        failures[n] = f"audit failed: {exc}"
            for n, cnt in zip(run, counts):
                audit_counts[n] = cnt
                box = SearchBox(center(n) - math.pi / (2 * tau),
                                center(n) + math.pi / (2 * tau), im_lo, im_hi)
                if cnt == 1 and not box.contains(refined[n].omega):
                    failures[n] = ("audit mismatch: refined zero "
                                   f"{refined[n].omega} left its lattice column")
                elif cnt >= 0 and cnt != 1:
                    failures[n] = f"audit mismatch: box count {cnt} != 1"
            if opts.completeness:
                union = SearchBox(edges[0], edges[-1], im_lo, im_hi)
                total_expected += sum(c for c in counts if c >= 0)
                total_counted += count_zeros(ev, union)
        if opts.completeness:
            completeness_ok = (total_counted == total_expected)
            if not completeness_ok:
                notices.append(
                    f"completeness audit: union box holds {total_counted} zeros, "
                    f"per-index boxes hold {total_expected}")

    # drop refined entries that later failed the audit
    resonances = [refined[n] for n in sorted(refined) if n not in failures]

    # conjugate-pair symmetry across n <-> -n (integer lattice only)
    if not half:
        by_n = {r.n: r for r in resonances}
        for n, r in by_n.items():
            if n > 0 and -n in by_n:
                gap = abs(by_n[-n].omega + r.omega.conjugate())
                if gap > 1e-8 * max(1.0, abs(r.omega)):
                    notices.append(
                        f"conjugate symmetry violated at |n|={n}: gap {gap:.3e}")

    return EnumerationResult(resonances=resonances, failures=failures,
                             case=case, asymptotic=am, notices=notices,
                             audit_counts=audit_counts,
                             completeness_ok=completeness_ok)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

def write_resonance_csv(result: EnumerationResult, path):
    """CSV table: n, Re omega, Im omega, seed, residual, audit flag."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("n,re_omega,im_omega,re_seed,im_seed,residual,audit_count\n")
        for r in result.resonances:
            cnt = result.audit_counts.get(r.n, "")
            fh.write(f"{r.n},{r.omega.real:.17g},{r.omega.imag:.17g},"
                     f"{r.seed.real:.17g},{r.seed.imag:.17g},"
                     f"{r.newton_residual:.17g},{cnt}\n")


def result_to_json_dict(result: EnumerationResult) -> dict:
    return {
        "case": result.case.value,
        "completeness_ok": result.completeness_ok,
        "notices": result.notices,
        "failures": {str(k): v for k, v in result.failures.items()},
        "resonances": [
            {"n": r.n, "re_omega": r.omega.real, "im_omega": r.omega.imag,
             "re_seed": r.seed.real, "im_seed": r.seed.imag,
             "residual": r.newton_residual, "iterations": r.iterations,
             "multiplicity": r.multiplicity,
             "audit_count": result.audit_counts.get(r.n)}
            for r in result.resonances
        ],
    }
