"""Verification harness: every library-level identity as a named check,
grouped into suites, with machine-readable JSON reports.

Report layout (schema 1):

    {"schema": 1, "suite": ..., "lattice": ..., "seed": ...,
     "checks": [{"name", "status", "max_error", "tolerance", "runtime_ms"}],
     "overall": "pass" | "fail"}

Reports are deterministic for a fixed seed and config except for the
runtime_ms fields.  Complex numbers are serialized as [re, im] pairs and
q-expansions as integer exponent numerators over a single shared
denominator.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import numpy as np

from . import fock, involutions, modular
from .errors import ConfigError, IllConditioned, LatticeFileError, ThetaTraceError
from .lattice import EvenLattice, load_lattice
from .qseries import (
    dedekind_eta,
    eisenstein_g2,
    eta_eval,
    g2_eval,
    jacobi_theta,
    p2_eval,
    theta_s_constant,
    weierstrass_p,
)
from .trace import TracePoint, insertion_counts_by_grade, t_phase, z_trace

DEFAULT_GRAM = ((4,),)
DEFAULT_LABEL = "builtin-norm4"
SUITES = ("special-functions", "theta-classical", "combinatorics", "npoint", "main-theorem")

EXACT_TOL = 0.5  # exact integer checks report max_error 0 or 1


@dataclass(frozen=True)
class RunConfig:
    lattice: EvenLattice
    lattice_label: str
    tight: bool  # built-in rank-one lattice gets the sharp tolerances
    seed: int = 0
    jobs: int = 1
    x_span: int = 4
    q_order: int = 6
    n_points: int = 20
    n_holdout: int = 20


def _mats():
    t, s = modular.T, modular.S
    return [("S", s), ("T", t), ("TST", t * s * t)]


def _sample_taus(seed: int, count: int, im_lo: float = 0.6, im_hi: float = 1.7):
    rng = np.random.default_rng(seed)
    return [
        complex(rng.uniform(-0.45, 0.45), rng.uniform(im_lo, im_hi))
        for _ in range(count)
    ]


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------


def check_eta_shift(cfg: RunConfig) -> float:
    w = cmath.exp(1j * cmath.pi / 12)
    return max(
        abs(eta_eval(tau + 1) - w * eta_eval(tau))
        for tau in _sample_taus(cfg.seed + 1, cfg.n_points)
    )


def check_eta_inversion(cfg: RunConfig) -> float:
    return max(
        abs(eta_eval(-1 / tau) - cmath.sqrt(-1j * tau) * eta_eval(tau))
        for tau in _sample_taus(cfg.seed + 2, cfg.n_points)
    )


def check_eta_series(cfg: RunConfig) -> float:
    series = dedekind_eta(36)
    return max(
        abs(eta_eval(tau) - series.eval_tau(tau))
        for tau in _sample_taus(cfg.seed + 3, 6, im_lo=0.9)
    )


def check_g2_at_i(cfg: RunConfig) -> float:
    return abs(g2_eval(1j) - math.pi)


def check_g2_law(cfg: RunConfig) -> float:
    worst = 0.0
    for _, alpha in _mats():
        f, d = alpha.f, alpha.d
        for tau in _sample_taus(cfg.seed + 4, 8):
            j = f * tau + d
            lhs = g2_eval(alpha.act_tau(tau))
            rhs = j * j * g2_eval(tau) - 2j * cmath.pi * f * j
            worst = max(worst, abs(lhs - rhs))
    return worst


def _p2_full(z: complex, tau: complex) -> complex:
    # periodicity-reducing evaluation path, defined for every non-lattice z
    return weierstrass_p(z, tau) + g2_eval(tau)


def check_weierstrass_law(cfg: RunConfig) -> float:
    rng = np.random.default_rng(cfg.seed + 5)
    worst = 0.0
    for _, alpha in _mats():
        f, d = alpha.f, alpha.d
        for tau in _sample_taus(cfg.seed + 6, 6):
            z = rng.uniform(0.12, 0.88) + rng.uniform(-0.4, 0.4) * tau
            j = f * tau + d
            lhs = weierstrass_p(z / j, alpha.act_tau(tau))
            worst = max(worst, abs(lhs - j * j * weierstrass_p(z, tau)))
    return worst


def check_p2_law(cfg: RunConfig) -> float:
    rng = np.random.default_rng(cfg.seed + 7)
    worst = 0.0
    for _, alpha in _mats():
        f, d = alpha.f, alpha.d
        for tau in _sample_taus(cfg.seed + 8, 6):
            z = rng.uniform(0.12, 0.88) + rng.uniform(-0.4, 0.4) * tau
            j = f * tau + d
            lhs = _p2_full(z / j, alpha.act_tau(tau))
            rhs = j * j * _p2_full(z, tau) - 2j * cmath.pi * f * j
            worst = max(worst, abs(lhs - rhs))
    return worst


def check_p2_annulus(cfg: RunConfig) -> float:
    rng = np.random.default_rng(cfg.seed + 9)
    worst = 0.0
    for tau in _sample_taus(cfg.seed + 10, 10, im_lo=0.5):
        z = rng.uniform(0.1, 0.9) + rng.uniform(-0.4, 0.4) * tau
        worst = max(worst, abs(p2_eval(z, tau) - _p2_full(z, tau)))
    return worst


# ---------------------------------------------------------------------------
# classical theta table
# ---------------------------------------------------------------------------


def check_theta_inversion_table(cfg: RunConfig) -> float:
    rng = np.random.default_rng(cfg.seed + 11)
    half = Fraction(1, 2)
    worst = 0.0
    for _ in range(cfg.n_points):
        tau = complex(rng.uniform(-0.45, 0.45), rng.uniform(0.5, 1.7))
        z = complex(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))
        front = cmath.sqrt(-1j * tau) * cmath.exp(1j * cmath.pi * z * z / tau)
        for h in (0, half):
            for k in (0, half):
                lhs = jacobi_theta(h, k, z / tau, -1 / tau)
                rhs = theta_s_constant(h, k) * front * jacobi_theta(k, h, z, tau)
                worst = max(worst, abs(lhs - rhs))
    return worst


def check_theta_shift_table(cfg: RunConfig) -> float:
    """tau -> tau+1 sends theta_{h,k} to e^{pi i h(1-h)} theta_{h,h+k-1/2}
    in characteristic conventions; verified here in the equivalent direct
    form theta_{h,k}(z, tau+1) = e^{pi i h^2} theta_{h,k'}(z, tau) with
    k' = k + h - 1/2 reduced mod 1 into {0, 1/2}."""
    rng = np.random.default_rng(cfg.seed + 12)
    half = Fraction(1, 2)
    worst = 0.0
    for _ in range(cfg.n_points):
        tau = complex(rng.uniform(-0.45, 0.45), rng.uniform(0.5, 1.7))
        z = complex(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))
        for h in (0, half):
            for k in (0, half):
                lhs = jacobi_theta(h, k, z, tau + 1)
                kp = (k + h + half) % 1
                phase = cmath.exp(1j * cmath.pi * float(h) ** 2)
                rhs = phase * jacobi_theta(h, kp, z, tau)
                worst = max(worst, abs(lhs - rhs))
    return worst


# ---------------------------------------------------------------------------
# combinatorics
# ---------------------------------------------------------------------------


def check_involution_recurrence(cfg: RunConfig) -> float:
    t = [1, 1]  # counts for n = 0, 1
    for n in range(2, 13):
        t.append(t[-1] + (n - 1) * t[-2])
    ok = all(
        len(involutions.list_involutions(n)) == t[n] for n in range(1, 13)
    )
    return 0.0 if ok else 1.0


def check_fixed_counts(cfg: RunConfig) -> float:
    for n in range(1, 13):
        for r in range(n % 2, n + 1, 2):
            p = (n - r) // 2
            if involutions.count_with_fixed(n, r) != involutions.closed_form_fixed_count(p, r):
                return 1.0
    return 0.0


def check_sign_lemma(cfg: RunConfig) -> float:
    for n in range(1, 9):
        for s in involutions.list_involutions(n):
            if not s.is_identity and not involutions.verify_sign_lemma(s):
                return 1.0
    return 0.0


def check_decomposition_products(cfg: RunConfig) -> float:
    for n in (2, 4, 6):
        for s in involutions.list_involutions(n):
            if s.is_identity:
                continue
            for parts in involutions.enumerate_decompositions(s):
                if not involutions.decomposition_is_valid(s, parts):
                    return 1.0
    return 0.0


def check_multinomial(cfg: RunConfig) -> float:
    ok = all(
        involutions.verify_multinomial_identity(p, r)
        for p in range(31)
        for r in range(31)
    )
    return 0.0 if ok else 1.0


def check_regroup(cfg: RunConfig) -> float:
    return 0.0 if involutions.exponential_regroup_check(12, 12)["equal"] else 1.0


# ---------------------------------------------------------------------------
# n-point traces on the literal module
# ---------------------------------------------------------------------------


def _insertion_vectors(dim: int) -> Tuple[tuple, tuple]:
    v1 = tuple(1.0 / (i + 1) for i in range(dim))
    v2 = tuple(0.6 / (i + 1) for i in range(dim))
    return v1, v2


def check_recursion_one(cfg: RunConfig) -> float:
    L = cfg.lattice
    v1, _ = _insertion_vectors(L.dim)
    rep = fock.verify_trace_recursion(L, L.cosets[0], [v1], 1, cfg.q_order)
    return rep["max_error"]


def check_recursion_two_first(cfg: RunConfig) -> float:
    L = cfg.lattice
    v1, v2 = _insertion_vectors(L.dim)
    rep = fock.verify_trace_recursion(
        L, L.cosets[0], [v1, v2], cfg.x_span, cfg.q_order
    )
    return rep["max_error"]


def check_recursion_two_mid(cfg: RunConfig) -> float:
    L = cfg.lattice
    v1, v2 = _insertion_vectors(L.dim)
    beta = L.cosets[len(L.cosets) // 2]
    rep = fock.verify_trace_recursion(L, beta, [v1, v2], cfg.x_span, cfg.q_order)
    return rep["max_error"]


def check_fock_census(cfg: RunConfig) -> float:
    L = cfg.lattice
    for beta in L.cosets:
        if fock.census_by_grade(L, beta, 6) != insertion_counts_by_grade(L, beta, 6):
            return 1.0
    return 0.0


def check_fock_phase_census(cfg: RunConfig) -> float:
    L = cfg.lattice
    a = tuple(Fraction(1, i + 3) for i in range(L.dim))
    for beta in L.cosets:
        lit = fock.group_census_by_phase(L, fock.census_by_grade(L, beta, 6), a)
        closed = fock.group_census_by_phase(L, insertion_counts_by_grade(L, beta, 6), a)
        if lit != closed:
            return 1.0
    return 0.0


# ---------------------------------------------------------------------------
# transition matrices
# ---------------------------------------------------------------------------


def check_t_phase(cfg: RunConfig) -> float:
    L = cfg.lattice
    pts = modular.sample_points(L.dim, cfg.n_points, cfg.seed + 13)
    worst = 0.0
    for beta in L.cosets:
        phase = t_phase(L, beta)
        for pt in pts:
            lhs = z_trace(L, beta, TracePoint(pt.a, pt.b, pt.tau + 1))
            shifted = tuple(x + y for x, y in zip(pt.a, pt.b))
            rhs = phase * z_trace(L, beta, TracePoint(shifted, pt.b, pt.tau))
            worst = max(worst, abs(lhs - rhs))
    return worst


def _fit(cfg: RunConfig, alpha) -> Tuple[modular.TransitionMatrix, dict]:
    return modular.fit_and_verify(
        cfg.lattice, alpha, seed=cfg.seed, n_holdout=cfg.n_holdout
    )


def check_fit_t_diagonal(cfg: RunConfig) -> float:
    fitted, _ = _fit(cfg, modular.T)
    gap = np.abs(fitted.as_array() - modular.t_matrix_prediction(cfg.lattice))
    return float(np.max(gap))


def check_holdout_t(cfg: RunConfig) -> float:
    _, rep = _fit(cfg, modular.T)
    return rep["max_error"]


def check_fit_s_moduli(cfg: RunConfig) -> float:
    fitted, _ = _fit(cfg, modular.S)
    target = 1.0 / math.sqrt(len(cfg.lattice.cosets))
    return float(np.max(np.abs(np.abs(fitted.as_array()) - target)))


def check_fit_s_oracle(cfg: RunConfig) -> float:
    fitted, _ = _fit(cfg, modular.S)
    gap = np.abs(fitted.as_array() - modular.s_matrix_prediction(cfg.lattice))
    return float(np.max(gap))


def check_holdout_s(cfg: RunConfig) -> float:
    _, rep = _fit(cfg, modular.S)
    return rep["max_error"]


def check_fit_identity(cfg: RunConfig) -> float:
    fitted, _ = _fit(cfg, modular.IDENTITY)
    m = len(cfg.lattice.cosets)
    return float(np.max(np.abs(fitted.as_array() - np.eye(m))))


def _cocycle(cfg: RunConfig, a, b) -> float:
    return modular.verify_cocycle(cfg.lattice, a, b, seed=cfg.seed + 17)["max_error"]


def check_cocycle_st(cfg: RunConfig) -> float:
    return _cocycle(cfg, modular.S, modular.T)


def check_cocycle_ts(cfg: RunConfig) -> float:
    return _cocycle(cfg, modular.T, modular.S)


def check_cocycle_ss(cfg: RunConfig) -> float:
    return _cocycle(cfg, modular.S, modular.S)


def check_random_words(cfg: RunConfig) -> float:
    worst = 0.0
    for word in modular.random_words(5, 6, cfg.seed + 19):
        alpha = modular.word_to_matrix(word)
        _, rep = modular.fit_and_verify(
            cfg.lattice, alpha, seed=cfg.seed + 23, n_holdout=cfg.n_holdout
        )
        worst = max(worst, rep["max_error"])
    return worst


def check_word_roundtrip(cfg: RunConfig) -> float:
    for word in modular.random_words(8, 6, cfg.seed + 29):
        alpha = modular.word_to_matrix(word)
        tokens, sign = modular.decompose_ST(alpha)
        back = modular.word_to_matrix(tokens)
        if back != (alpha if sign == 1 else -alpha):
            return 1.0
    return 0.0


# ---------------------------------------------------------------------------
# suite assembly
# ---------------------------------------------------------------------------

Check = Tuple[str, Callable[[RunConfig], float], float, float]
# (name, function, tight tolerance, generic tolerance)

SUITE_CHECKS = {
    "special-functions": [
        ("eta-shift", check_eta_shift, 1e-12, 1e-12),
        ("eta-inversion", check_eta_inversion, 1e-12, 1e-12),
        ("eta-series-consistency", check_eta_series, 1e-12, 1e-12),
        ("g2-at-i", check_g2_at_i, 1e-12, 1e-12),
        ("g2-transformation", check_g2_law, 1e-9, 1e-9),
        ("weierstrass-transformation", check_weierstrass_law, 1e-9, 1e-9),
        ("p2-transformation", check_p2_law, 1e-9, 1e-9),
        ("p2-annulus-consistency", check_p2_annulus, 1e-9, 1e-9),
    ],
    "theta-classical": [
        ("theta-inversion-table", check_theta_inversion_table, 1e-10, 1e-10),
        ("theta-shift-table", check_theta_shift_table, 1e-10, 1e-10),
    ],
    "combinatorics": [
        ("involution-recurrence", check_involution_recurrence, EXACT_TOL, EXACT_TOL),
        ("fixed-point-counts", check_fixed_counts, EXACT_TOL, EXACT_TOL),
        ("decomposition-products", check_decomposition_products, EXACT_TOL, EXACT_TOL),
        ("sign-lemma", check_sign_lemma, EXACT_TOL, EXACT_TOL),
        ("multinomial-identity", check_multinomial, EXACT_TOL, EXACT_TOL),
        ("exponential-regroup", check_regroup, EXACT_TOL, EXACT_TOL),
    ],
    "npoint": [
        ("recursion-one-insertion", check_recursion_one, 1e-9, 1e-9),
        ("recursion-two-insertions-first-coset", check_recursion_two_first, 1e-9, 1e-9),
        ("recursion-two-insertions-mid-coset", check_recursion_two_mid, 1e-9, 1e-9),
        ("fock-census", check_fock_census, EXACT_TOL, EXACT_TOL),
        ("fock-phase-census", check_fock_phase_census, EXACT_TOL, EXACT_TOL),
    ],
    "main-theorem": [
        ("t-phase-identity", check_t_phase, 1e-12, 1e-7),
        ("fit-t-diagonal", check_fit_t_diagonal, 1e-10, 1e-7),
        ("holdout-t", check_holdout_t, 1e-10, 1e-7),
        ("fit-s-moduli", check_fit_s_moduli, 1e-8, 1e-7),
        ("fit-s-oracle", check_fit_s_oracle, 1e-8, 1e-7),
        ("holdout-s", check_holdout_s, 1e-8, 1e-7),
        ("fit-identity", check_fit_identity, 1e-10, 1e-7),
        ("cocycle-st", check_cocycle_st, 1e-7, 1e-7),
        ("cocycle-ts", check_cocycle_ts, 1e-7, 1e-7),
        ("cocycle-ss", check_cocycle_ss, 1e-7, 1e-7),
        ("random-words-holdout", check_random_words, 1e-7, 1e-7),
        ("word-decomposition-roundtrip", check_word_roundtrip, EXACT_TOL, EXACT_TOL),
    ],
}


def _run_check(name: str, fn: Callable[[RunConfig], float], tol: float, cfg: RunConfig) -> dict:
    start = time.perf_counter()
    try:
        err = float(fn(cfg))
    except ThetaTraceError as exc:
        err = math.inf
        detail = f"{type(exc).__name__}: {exc}"
    else:
        detail = None
    entry = {
        "name": name,
        "status": "pass" if err <= tol else "fail",
        "max_error": err,
        "tolerance": tol,
        "runtime_ms": int((time.perf_counter() - start) * 1000),
    }
    if detail:
        entry["error"] = detail
    return entry


def run_suite(suite: str, cfg: RunConfig) -> dict:
    if suite == "all":
        names = list(SUITES)
    elif suite in SUITE_CHECKS:
        names = [suite]
    else:
        raise ConfigError(f"unknown suite {suite!r}")
    work: List[Tuple[str, Callable, float]] = []
    for s in names:
        for name, fn, tight_tol, generic_tol in SUITE_CHECKS[s]:
            work.append((name, fn, tight_tol if cfg.tight else generic_tol))
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = [pool.submit(_run_check, n, f, t, cfg) for n, f, t in work]
            checks = [f.result() for f in futures]
    else:
        checks = [_run_check(n, f, t, cfg) for n, f, t in work]
    overall = "pass" if all(c["status"] == "pass" for c in checks) else "fail"
    return {
        "schema": 1,
        "suite": suite,
        "lattice": cfg.lattice_label,
        "seed": cfg.seed,
        "checks": checks,
        "overall": overall,
    }


# ---------------------------------------------------------------------------
# fit / expand commands
# ---------------------------------------------------------------------------


def _parse_alpha(text: str) -> modular.UnimodularMatrix:
    try:
        a, b, f, d = (int(x) for x in text.split(","))
        return modular.UnimodularMatrix(a, b, f, d)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"--alpha must be four comma-separated integers with det 1: {exc}")


def _c(x: complex) -> list:
    return [x.real, x.imag]


def run_fit(cfg: RunConfig, alpha: modular.UnimodularMatrix) -> dict:
    fitted, rep = modular.fit_and_verify(
        cfg.lattice, alpha, seed=cfg.seed, n_holdout=cfg.n_holdout
    )
    return {
        "schema": 1,
        "suite": "fit",
        "lattice": cfg.lattice_label,
        "seed": cfg.seed,
        "alpha": [alpha.a, alpha.b, alpha.f, alpha.d],
        "cosets": [[str(x) for x in beta] for beta in cfg.lattice.cosets],
        "matrix": [[_c(v) for v in row] for row in fitted.entries],
        "fit_residual": fitted.fit_residual,
        "holdout_max_error": rep["max_error"],
        "n_holdout": rep["n_points"],
    }


def _series_terms(series, exact: bool) -> list:
    out = []
    for k, v in sorted(series.coeffs.items()):
        if exact:
            # counting and sign series: coefficients are exact small integers
            out.append([k, int(round(v.real)), 0])
        else:
            out.append([k, v.real, v.imag])
    return out


def run_expand(cfg: RunConfig, what: str, order: int, coset: int) -> dict:
    if what == "eta":
        series = dedekind_eta(order)
        terms = _series_terms(series, exact=True)
    elif what == "g2":
        series = eisenstein_g2(order)
        terms = _series_terms(series, exact=False)
    elif what == "theta-series":
        cosets = cfg.lattice.cosets
        if not (0 <= coset < len(cosets)):
            raise ConfigError(f"coset index {coset} out of range 0..{len(cosets) - 1}")
        series = cfg.lattice.theta_series(cosets[coset], order)
        terms = _series_terms(series, exact=True)
    else:
        raise ConfigError(f"unknown expansion target {what!r}")
    denom = series.denom
    return {
        "schema": 1,
        "suite": "expand",
        "what": what,
        "lattice": cfg.lattice_label,
        "order": order,
        "denom": denom,
        "terms": terms,
    }


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_config(args) -> RunConfig:
    if args.lattice:
        lat = load_lattice(args.lattice)
        label = lat.name or args.lattice
        tight = lat.gram == DEFAULT_GRAM
    else:
        lat = EvenLattice(DEFAULT_GRAM, name=DEFAULT_LABEL)
        label = DEFAULT_LABEL
        tight = True
    return RunConfig(
        lattice=lat,
        lattice_label=label,
        tight=tight,
        seed=args.seed,
        jobs=max(1, args.jobs),
    )


def _emit(report: dict, args) -> None:
    text = json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.human:
        _human_summary(report)


def _human_summary(report: dict) -> None:
    put = sys.stderr.write
    put(f"suite {report['suite']} on {report.get('lattice', '-')}\n")
    for c in report.get("checks", ()):
        put(
            f"  [{c['status']:>4}] {c['name']:40s} "
            f"max_error={c['max_error']:.3e} tol={c['tolerance']:.1e} "
            f"({c['runtime_ms']} ms)\n"
        )
    if "overall" in report:
        put(f"overall: {report['overall']}\n")
    if "fit_residual" in report:
        put(f"fit residual {report['fit_residual']:.3e}, holdout {report['holdout_max_error']:.3e}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="thetatrace",
        description="verify lattice module trace identities and transition matrices",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lattice", help="path to a lattice JSON file {name, gram}")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", help="write the JSON report to this path")
    common.add_argument("--human", action="store_true", help="also print a summary to stderr")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))

    f = sub.add_parser("fit", parents=[common], help="fit one transition matrix")
    f.add_argument("--alpha", required=True, help='matrix "a,b,f,d" with det 1')

    e = sub.add_parser("expand", parents=[common], help="print a q-expansion")
    e.add_argument("--what", required=True, choices=("eta", "g2", "theta-series"))
    e.add_argument("--order", type=int, default=8)
    e.add_argument("--coset", type=int, default=0)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _build_config(args)
        if args.command == "verify":
            report = run_suite(args.suite, cfg)
            _emit(report, args)
            return 0 if report["overall"] == "pass" else 1
        if args.command == "fit":
            alpha = _parse_alpha(args.alpha)
            try:
                report = run_fit(cfg, alpha)
            except IllConditioned as exc:
                sys.stderr.write(f"fit failed: {exc}\n")
                return 1
            _emit(report, args)
            return 0
        if args.command == "expand":
            report = run_expand(cfg, args.what, args.order, args.coset)
            _emit(report, args)
            return 0
    except (ConfigError, LatticeFileError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ThetaTraceError as exc:
        sys.stderr.write(f"verification aborted: {type(exc).__name__}: {exc}\n")
        return 1
    raise AssertionError("unreachable command dispatch")


if __name__ == "__main__":
    raise SystemExit(main())
