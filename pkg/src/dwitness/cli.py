"""Command line front end: reproducible verification runs with JSON reports.

Exit codes are scriptable: 0 means the run completed with nothing found,
1 means a mathematical finding (a positivity violation, a detected state,
a successful subtraction), 2 means a usage error.  Reports are canonical
JSON (sorted keys) so identical configurations produce byte-identical
output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import inequality, linalg, optimality, positivity
from .maps import DTypeMap, choi_matrix, map_to_json, max_entangled
from .perm import all_permutations, loop_decomposition, parse_permutation, to_text
from .positivity import SearchConfig, Status

TOLERANCES = {
    "violation": positivity.VIOLATION_TOL,
    "psd": positivity.PSD_TOL,
    "contraction": optimality.CONTRACTION_TOL,
    "reconstruction_residual": 1e-12,
    "scan_slack": 1e-9,
    "sum_reconstruction": 1e-14,
}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    t: Optional[float] = None
    pi: Optional[str] = None
    n: int = 3
    c: Optional[float] = None
    samples: int = 10000
    trials: int = 200
    seed: int = 42
    restarts: int = 100
    max_iters: int = 200
    spread: float = 3.0
    state: Optional[str] = None
    preset: Optional[str] = None
    subtraction: Optional[str] = None
    output: str = "-"

    def to_json(self) -> dict:
        out = {}
        for key, value in vars(self).items():
            if key == "output" or value is None:
                continue
            out[key] = value
        return out


def _base_report(cfg: RunConfig, claim: str) -> dict:
    return {"command": cfg.command, "config": cfg.to_json(),
            "tolerances": TOLERANCES, "claim": claim, "findings": []}


def _load_matrix(path: str) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return linalg.matrix_from_json(json.load(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except (ValueError, KeyError) as exc:
        raise UsageError(f"malformed matrix file {path}: {exc}") from exc


def _build_map(cfg: RunConfig) -> DTypeMap:
    if cfg.t is None or cfg.pi is None:
        raise UsageError("--t and --pi are required")
    if not 2 <= cfg.n <= 4:
        raise UsageError("--n must be 3 or 4 (2 allowed for experiments)")
    perm = parse_permutation(cfg.pi)
    if perm.n != cfg.n:
        raise UsageError(f"--pi has {perm.n} entries, --n is {cfg.n}")
    sub = _load_matrix(cfg.subtraction) if cfg.subtraction else None
    try:
        return DTypeMap(n=cfg.n, t=cfg.t, pi=perm, subtraction=sub)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _search_config(cfg: RunConfig) -> SearchConfig:
    return SearchConfig(restarts=cfg.restarts, max_iters=cfg.max_iters, seed=cfg.seed)


def _vector_json(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v).reshape(-1)]


def cmd_build_witness(cfg: RunConfig) -> dict:
    m = _build_map(cfg)
    w = choi_matrix(m)
    report = _base_report(cfg, "the Choi block matrix of the map is the induced Hermitian witness candidate")
    report["map"] = map_to_json(m)
    report["witness"] = {"dim_a": w.dim_a, "dim_b": w.dim_b,
                         "choi": linalg.matrix_to_json(w.choi),
                         "trace": float(np.trace(w.choi).real)}
    return report


def cmd_check_positivity(cfg: RunConfig) -> dict:
    m = _build_map(cfg)
    report = _base_report(cfg, "the map is positive exactly when t <= n / l(pi)")
    closed = None
    if m.subtraction is None:
        closed = positivity.closed_form_positive(m.n, m.t, m.pi)
        report["closed_form"] = {
            "status": (Status.CLOSED_FORM_POSITIVE if closed
                       else Status.CLOSED_FORM_NOT_POSITIVE).value,
            "positive": closed,
            "loop_length": loop_decomposition(m.pi).length,
            "threshold": m.n / loop_decomposition(m.pi).length,
        }
    verdict = positivity.numeric_block_positivity(choi_matrix(m), _search_config(cfg))
    report["numeric"] = {"status": verdict.status.value, "min_value": verdict.min_value,
                         "restarts": verdict.samples_used}
    if verdict.status is Status.VIOLATION_FOUND:
        e, f = verdict.witness_pair
        report["findings"].append({"type": "positivity-violation", "min_value": verdict.min_value,
                                   "left_vector": _vector_json(e), "right_vector": _vector_json(f)})
    if closed is not None:
        report["agreement"] = (verdict.status is Status.VIOLATION_FOUND) == (not closed)
    return report


def cmd_check_cp(cfg: RunConfig) -> dict:
    m = _build_map(cfg)
    report = _base_report(cfg, "the map is completely positive exactly when its Choi matrix is PSD")
    cp, min_eig = positivity.is_completely_positive(m)
    report["completely_positive"] = cp
    report["min_choi_eigenvalue"] = min_eig
    if not cp:
        report["findings"].append({"type": "negative-choi-eigenvalue", "value": min_eig})
    return report


def cmd_check_optimality(cfg: RunConfig) -> dict:
    m = _build_map(cfg)
    if m.n != 3:
        raise UsageError("the optimality verdict is implemented for n = 3")
    report = _base_report(cfg, "the witness is optimal exactly when t = 1 and the permutation is a 3-cycle")
    try:
        verdict = optimality.optimality_verdict(m.t, m.pi)
    except optimality.NotAWitness as exc:
        report["optimal"] = False
        report["reason"] = optimality.Reason.COMPLETELY_POSITIVE.value
        report["findings"].append({"type": "not-a-witness", "detail": str(exc)})
        return report
    report["optimal"] = verdict.optimal
    report["reason"] = verdict.reason.value
    if verdict.certificate is not None:
        report["certificate"] = linalg.matrix_to_json(verdict.certificate)
    if not verdict.optimal:
        finding = {"type": "optimality-obstruction", "reason": verdict.reason.value}
        if verdict.certificate is not None:
            finding["certificate"] = linalg.matrix_to_json(verdict.certificate)
        report["findings"].append(finding)
    return report


def cmd_decompose(cfg: RunConfig) -> dict:
    m = _build_map(cfg)
    if m.n != 3:
        raise UsageError("the decomposition is implemented for n = 3")
    report = _base_report(cfg, "the witness of a transposition map splits into PSD plus PPT parts")
    try:
        split = optimality.case2_split(m.t, m.pi)
    except (optimality.WrongLoopStructure, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    w = choi_matrix(m)
    total = split.positive_part + split.ppt_part
    sum_residual = float(np.max(np.abs(total - w.choi)))
    pos_min = float(linalg.hermitian_eig(split.positive_part).eigenvalues[0])
    ppt_ok = positivity.is_ppt(split.ppt_part, 3, 3)
    report["branch"] = split.branch.value
    report["positive_part"] = linalg.matrix_to_json(split.positive_part)
    report["ppt_part"] = linalg.matrix_to_json(split.ppt_part)
    report["checks"] = {"positive_part_min_eigenvalue": pos_min,
                        "positive_part_norm": float(np.linalg.norm(split.positive_part)),
                        "ppt_part_is_ppt": ppt_ok,
                        "sum_residual": sum_residual}
    if pos_min < -positivity.PSD_TOL:
        report["findings"].append({"type": "split-positive-part-not-psd", "value": pos_min})
    if not ppt_ok:
        report["findings"].append({"type": "split-ppt-part-not-ppt"})
    if sum_residual > TOLERANCES["sum_reconstruction"]:
        report["findings"].append({"type": "split-sum-mismatch", "value": sum_residual})
    return report


def cmd_certificate_sweep(cfg: RunConfig) -> dict:
    if cfg.t is None or cfg.c is None:
        raise UsageError("--t and --c are required")
    report = _base_report(cfg, "every local coefficient matrix of the subtracted map is contractive when c^2 <= 1-t")
    try:
        sweep = optimality.certificate_sweep(cfg.t, cfg.c, cfg.samples, cfg.seed)
    except optimality.OutOfCertificateRange as exc:
        raise UsageError(str(exc)) from exc
    except optimality.ContractionViolated as exc:
        report["findings"].append({"type": "contraction-violated", "gram_eigenvalue": exc.gram_eig,
                                   "x": _vector_json(exc.x)})
        return report
    report["sweep"] = sweep.to_json()
    return report


def cmd_verify_lemma24(cfg: RunConfig) -> dict:
    if cfg.t is None:
        raise UsageError("--t is required")
    if not 0.0 < cfg.t < 1.0:
        raise UsageError("--t must lie in (0, 1)")
    report = _base_report(cfg, "the constrained ratio stays >= 1-t; the polynomial side has minimum 0 at (1,1,1)")
    scan = inequality.constrained_scan(cfg.t, cfg.samples, spread=cfg.spread, seed=cfg.seed)
    lam = inequality.stationary_multiplier(cfg.t)
    residuals = inequality.lagrange_residual(cfg.t, (1.0, 1.0, 1.0), lam)
    rng = np.random.default_rng(cfg.seed)
    quartic_err = 0.0
    for _ in range(1000):
        x1 = float(np.exp(rng.uniform(-3, 3)))
        lhs, _ = inequality.quartic_factor_check(cfg.t, x1)
        quartic_err = max(quartic_err, abs(lhs - inequality.quartic_expanded(cfg.t, x1)))
    report["scan"] = scan.to_json()
    report["center_value"] = inequality.g_poly(cfg.t, 1.0, 1.0, 1.0)
    report["stationary_multiplier"] = lam
    report["stationary_residuals"] = [float(r) for r in residuals]
    report["quartic_identity_max_error"] = quartic_err
    if scan.min_g < -TOLERANCES["scan_slack"]:
        report["findings"].append({"type": "polynomial-negative", "min_g": scan.min_g,
                                   "argmin": list(scan.argmin)})
    if scan.min_f_gap < -TOLERANCES["scan_slack"]:
        report["findings"].append({"type": "ratio-gap-negative", "min_f_gap": scan.min_f_gap})
    if max(abs(r) for r in residuals) > 1e-12:
        report["findings"].append({"type": "stationarity-residual", "residuals": list(residuals)})
    if quartic_err > 1e-10:
        report["findings"].append({"type": "quartic-identity-error", "value": quartic_err})
    return report


def cmd_verify_subcases(cfg: RunConfig) -> dict:
    if cfg.t is None:
        raise UsageError("--t is required")
    if not 0.0 < cfg.t < 1.0:
        raise UsageError("--t must lie in (0, 1)")
    report = _base_report(cfg, "each zero-pattern bound on c^2 dominates 1-t")
    rng = np.random.default_rng(cfg.seed)
    t = cfg.t
    min_gap = float("inf")
    max_cross_err = 0.0
    for _ in range(cfg.samples):
        u = rng.uniform(-3, 3, 2)
        r1, r2 = float(np.exp(u[0])), float(np.exp(u[1]))
        r3 = 1.0 / (r1 * r2)
        bound, ge = inequality.subcase_bound("S2", t, (r1, r2, r3))
        min_gap = min(min_gap, bound - (1.0 - t))
        cross = inequality.f_ratio(t, 1.0 / r1, 1.0 / r2, 1.0 / r3)
        max_cross_err = max(max_cross_err, abs(bound - cross))
        if not ge:
            report["findings"].append({"type": "subcase-bound-below", "which": "S2", "r": [r1, r2, r3]})
        for which in ("S3", "S4", "S5"):
            r = float(np.exp(rng.uniform(-3, 3)))
            bound, ge = inequality.subcase_bound(which, t, r)
            min_gap = min(min_gap, bound - (1.0 - t))
            if not ge:
                report["findings"].append({"type": "subcase-bound-below", "which": which, "r": r})
    report["min_bound_gap"] = min_gap
    report["ratio_consistency_max_error"] = max_cross_err
    if max_cross_err > 1e-10:
        report["findings"].append({"type": "subcase-ratio-mismatch", "value": max_cross_err})
    return report


def cmd_zero_locus(cfg: RunConfig) -> dict:
    m = _build_map(cfg)
    report = _base_report(cfg, "annihilating product vectors of a boundary witness span a proper subspace")
    w = choi_matrix(m)
    config = SearchConfig(restarts=cfg.samples, max_iters=1, seed=cfg.seed)
    dimension, vectors = optimality.zero_locus_span(w, config)
    report["dimension"] = dimension
    report["full_dimension"] = w.dim_a * w.dim_b
    report["collected"] = len(vectors)
    report["spanning"] = dimension == w.dim_a * w.dim_b
    return report


def cmd_detect(cfg: RunConfig) -> dict:
    m = _build_map(cfg)
    report = _base_report(cfg, "a state with Tr(W rho) < 0 is detected as entangled")
    if (cfg.state is None) == (cfg.preset is None):
        raise UsageError("exactly one of --state or --preset is required")
    if cfg.preset is not None:
        if cfg.preset == "maximally-mixed":
            rho = np.eye(m.n * m.n, dtype=np.complex128) / (m.n * m.n)
        elif cfg.preset == "max-entangled":
            rho = max_entangled(m.n)
        else:
            raise UsageError(f"unknown preset {cfg.preset!r}")
    else:
        rho = _load_matrix(cfg.state)
    w = choi_matrix(m)
    try:
        value = optimality.detect_value(w, rho)
    except optimality.NotAState as exc:
        raise UsageError(str(exc)) from exc
    report["value"] = value
    report["detected"] = value < 0.0
    if value < 0.0:
        report["findings"].append({"type": "state-detected", "value": value})
    return report


def cmd_probe_subtraction(cfg: RunConfig) -> dict:
    m = _build_map(cfg)
    if m.n != 3:
        raise UsageError("the probe is implemented for n = 3")
    report = _base_report(cfg, "optimal witnesses admit no nonzero positivity-preserving subtraction")
    result = optimality.subtraction_probe(m, cfg.trials, cfg.seed)
    report["found"] = result.found
    report["trials"] = result.trials
    if result.found:
        report["best_scale"] = result.best_scale
        report["best_c"] = linalg.matrix_to_json(result.best_c)
        report["findings"].append({"type": "subtraction-found", "scale": result.best_scale,
                                   "matrix": linalg.matrix_to_json(result.best_c)})
    return report


def cmd_conjecture_probe(cfg: RunConfig) -> dict:
    if cfg.n not in (3, 4):
        raise UsageError("--n must be 3 or 4")
    n = cfg.n
    report = _base_report(cfg, "the general-n family is positive exactly when t <= n / l(pi)")
    grid_rows = []
    disagreements = 0
    config = SearchConfig(restarts=cfg.restarts, max_iters=cfg.max_iters, seed=cfg.seed)
    for perm in all_permutations(n):
        ell = loop_decomposition(perm).length
        threshold = n / ell
        points = [threshold * frac for frac in (0.25, 0.6, 1.0)]
        above = 1.05 * threshold
        if above <= n:
            points.append(above)
        for t in points:
            expected = positivity.closed_form_positive(n, t, perm)
            m = DTypeMap(n=n, t=t, pi=perm)
            verdict = positivity.numeric_block_positivity(choi_matrix(m), config)
            violated = verdict.status is Status.VIOLATION_FOUND
            agrees = violated == (not expected)
            if not agrees:
                disagreements += 1
                report["findings"].append({"type": "threshold-disagreement", "pi": to_text(perm),
                                           "t": t, "closed_form_positive": expected,
                                           "numeric_min": verdict.min_value})
            grid_rows.append({"pi": to_text(perm), "loop_length": ell, "t": round(t, 12),
                              "closed_form_positive": expected,
                              "numeric_min": verdict.min_value, "agrees": agrees})
    report["grid"] = grid_rows
    report["points_checked"] = len(grid_rows)
    report["disagreements"] = disagreements
    return report


HANDLERS = {
    "build-witness": cmd_build_witness,
    "check-positivity": cmd_check_positivity,
    "check-cp": cmd_check_cp,
    "check-optimality": cmd_check_optimality,
    "decompose": cmd_decompose,
    "certificate-sweep": cmd_certificate_sweep,
    "verify-lemma24": cmd_verify_lemma24,
    "verify-subcases": cmd_verify_subcases,
    "zero-locus": cmd_zero_locus,
    "detect": cmd_detect,
    "probe-subtraction": cmd_probe_subtraction,
    "conjecture-probe": cmd_conjecture_probe,
}


def _add_common(sub, *, t=False, pi=False, n=False, c=False, samples=None, trials=None,
                search=False, spread=False, state=False, subtraction=False):
    if t:
        sub.add_argument("--t", type=float, required=True, help="strength parameter")
    if pi:
        sub.add_argument("--pi", type=str, required=True, help='permutation images, e.g. "2,3,1"')
    if n:
        sub.add_argument("--n", type=int, default=3, help="dimension (3 or 4)")
    if c:
        sub.add_argument("--c", type=float, required=True, help="subtraction scale")
    if samples is not None:
        sub.add_argument("--samples", type=int, default=samples, help="number of random samples")
    if trials is not None:
        sub.add_argument("--trials", type=int, default=trials, help="number of probe trials")
    if search:
        sub.add_argument("--restarts", type=int, default=100, help="search restarts")
        sub.add_argument("--max-iters", type=int, default=200, help="search iteration cap")
    if spread:
        sub.add_argument("--spread", type=float, default=3.0, help="log-range of constraint sampling")
    if state:
        sub.add_argument("--state", type=str, default=None, help="density matrix JSON file")
        sub.add_argument("--preset", type=str, default=None,
                         help="built-in state: maximally-mixed or max-entangled")
    if subtraction:
        sub.add_argument("--subtraction", type=str, default=None, help="subtraction matrix JSON file")
    sub.add_argument("--seed", type=int, default=42, help="random seed")
    sub.add_argument("--output", type=str, default="-", help="report path, '-' for stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dwitness",
        description="Construct D-type map witnesses and verify their positivity and optimality properties.")
    subs = parser.add_subparsers(dest="command", required=True)
    _add_common(subs.add_parser("build-witness", help="emit the Choi matrix of a map"),
                t=True, pi=True, n=True, subtraction=True)
    _add_common(subs.add_parser("check-positivity", help="closed-form and numeric positivity"),
                t=True, pi=True, n=True, search=True, subtraction=True)
    _add_common(subs.add_parser("check-cp", help="complete positivity via the Choi spectrum"),
                t=True, pi=True, n=True, subtraction=True)
    _add_common(subs.add_parser("check-optimality", help="the optimality verdict"),
                t=True, pi=True)
    _add_common(subs.add_parser("decompose", help="PSD + PPT split for transposition maps"),
                t=True, pi=True)
    _add_common(subs.add_parser("certificate-sweep", help="contractivity sweep of local coefficients"),
                t=True, c=True, samples=10000)
    _add_common(subs.add_parser("verify-lemma24", help="scan the constraint inequality"),
                t=True, samples=100000, spread=True)
    _add_common(subs.add_parser("verify-subcases", help="per-zero-pattern bounds on c^2"),
                t=True, samples=10000)
    _add_common(subs.add_parser("zero-locus", help="span of annihilating product vectors"),
                t=True, pi=True, n=True, samples=100000)
    _add_common(subs.add_parser("detect", help="evaluate Tr(W rho)"),
                t=True, pi=True, n=True, state=True)
    _add_common(subs.add_parser("probe-subtraction", help="search for positivity-preserving subtractions"),
                t=True, pi=True, trials=200)
    _add_common(subs.add_parser("conjecture-probe", help="n=4 threshold grid consistency"),
                n=True, search=True)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for key in vars(cfg):
        if hasattr(args, key):
            setattr(cfg, key, getattr(args, key))
    return cfg


def _emit(report: dict, output: str) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config_from_args(args)
    try:
        report = HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report["pass"] = not report["findings"]
    _emit(report, cfg.output)
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
