"""Command-line front end: YAML configs in, versioned JSON reports out.

Exit codes: 0 = completed with no negative verdicts or witnesses,
2 = completed and the report embeds witnesses/certificates, 1 = error.
Reports are byte-identical across repeated runs of an equal config
(wall time excluded) and across worker counts.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np
import yaml

from . import classify as cl
from . import discs
from . import domains as dom
from . import exhaustion as exh
from . import expr as ex
from . import hulls
from . import reinhardt as rh
from . import report as rep
from .errors import ConfigError, FamilyLeavesDomain, LevikitError
from .selftest import run_selftest

_COMMON_KEYS = {"seed", "out", "workers", "tol"}
_ALLOWED_KEYS = {
    "classify": _COMMON_KEYS | {"domain", "samples", "tol_grad", "tol_eig"},
    "psh-test": _COMMON_KEYS | {"domain", "expression", "mode", "samples",
                                "quadrature", "metric"},
    "log-distance-probe": _COMMON_KEYS | {"domain", "metric", "trials"},
    "reinhardt": _COMMON_KEYS | {"domain", "trials"},
    "disc-probe": _COMMON_KEYS | {"domain", "disc_family", "interior", "boundary"},
    "hull": _COMMON_KEYS | {"kind", "points", "points_file", "is_complex",
                            "dimension", "queries", "functionals", "degree",
                            "random_count"},
    "exhaustion": _COMMON_KEYS | {"domain", "function", "metric", "sequences",
                                  "steps"},
    "derivative-selftest": _COMMON_KEYS | {"samples"},
}


def load_config_file(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except yaml.YAMLError as err:
        raise ConfigError(f"config file is not valid YAML: {err}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    return data


def _check_keys(command: str, cfg: dict) -> None:
    allowed = _ALLOWED_KEYS[command]
    for key in cfg:
        if key == "command":
            continue
        if key not in allowed:
            raise ConfigError(f"{key}: unknown key for command {command!r}")


def _require(cfg, key, path=None):
    if key not in cfg or cfg[key] is None:
        raise ConfigError(f"{path or key}: required field is missing")
    return cfg[key]


def _domain(cfg) -> tuple:
    spec = _require(cfg, "domain")
    if not isinstance(spec, dict):
        raise ConfigError("domain: must be a mapping")
    try:
        d = dom.domain_from_dict(spec)
    except (KeyError, ValueError, LevikitError) as err:
        raise ConfigError(f"domain: {err}") from None
    return d, dom.domain_to_dict(d)


# ---------------------------------------------------------------------------
# per-command runners: config -> (records, summary, has_witnesses, echo)

def _run_classify(cfg):
    d, domain_echo = _domain(cfg)
    samples = int(cfg.get("samples", 200))
    seed = int(cfg.get("seed", 0))
    workers = int(cfg.get("workers", 1))
    tol_grad = cfg.get("tol_grad")
    tol_eig = cfg.get("tol_eig")
    result = cl.classify_domain(d, samples, seed, tol_grad=tol_grad,
                                tol_eig=tol_eig, workers=workers)
    bset = dom.boundary_sample(d, samples, seed)
    records = []
    for i, (sample, pv) in enumerate(zip(bset.samples, result.verdicts)):
        rec = {"key": f"point-{i:04d}", "point": pv.point,
               "verdict": pv.verdict, "eigenvalues": pv.eigenvalues,
               "min_eigenvalue": pv.min_eigenvalue,
               "gradient_norm": pv.gradient_norm,
               "tol_eig": pv.tol_eig, "tol_grad": pv.tol_grad,
               "source": sample.source}
        if sample.face_index is not None:
            rec["face_index"] = sample.face_index
        records.append(rec)
    records.append({"key": "aggregate", "domain_verdict": result.domain_verdict,
                    "counts": result.counts})
    n = len(result.verdicts)
    strict = result.counts[cl.STRICTLY_PSEUDOCONVEX]
    if result.domain_verdict == cl.STRICTLY_PSEUDOCONVEX:
        summary = f"strictly pseudoconvex at {strict}/{n} points"
    elif result.domain_verdict == cl.LEVI_ONLY:
        summary = f"Levi pseudoconvex at {n}/{n} points ({strict} strictly)"
    else:
        bad = result.counts[cl.NOT_LEVI]
        summary = (f"{result.domain_verdict}: {bad}/{n} points fail Levi "
                   f"pseudoconvexity")
    echo = {"domain": domain_echo, "samples": samples, "seed": seed,
            "workers": workers, "tol_grad": tol_grad, "tol_eig": tol_eig}
    return records, summary, result.counts[cl.NOT_LEVI] > 0, echo


def _psh_records(verdict: cl.PshVerdict):
    records = []
    for i, v in enumerate(verdict.violations):
        records.append({"key": f"violation-{i:04d}", "point": v.point,
                        "direction": v.direction, "radius": v.radius,
                        "deficit": v.deficit})
    records.append({"key": "aggregate", "mode": verdict.mode,
                    "verdict": verdict.verdict, "tested": verdict.tested,
                    "skipped": verdict.skipped,
                    "violations": len(verdict.violations)})
    return records


def _run_psh_test(cfg):
    d, domain_echo = _domain(cfg)
    text = _require(cfg, "expression")
    f = ex.parse(text, d.dimension)
    mode = cfg.get("mode", "spectral")
    samples = int(cfg.get("samples", 200))
    seed = int(cfg.get("seed", 0))
    tol = float(cfg.get("tol", 1e-9))
    workers = int(cfg.get("workers", 1))
    metric = cfg.get("metric")
    if mode == "spectral":
        verdict = cl.psh_test_spectral(f, d, samples, seed, tol=tol,
                                       workers=workers)
    elif mode == "circle":
        quad = int(cfg.get("quadrature", cl.DEFAULT_QUADRATURE))
        verdict = cl.psh_test_circle_average(f, d, samples, seed, tol=tol,
                                             quadrature=quad, workers=workers,
                                             metric=metric)
    else:
        raise ConfigError(f"mode: expected 'spectral' or 'circle', got {mode!r}")
    records = _psh_records(verdict)
    summary = (f"{verdict.verdict} by {verdict.mode} "
               f"({verdict.tested} tested, {verdict.skipped} skipped, "
               f"{len(verdict.violations)} violations)")
    echo = {"domain": domain_echo, "expression": text, "mode": mode,
            "samples": samples, "seed": seed, "tol": tol, "workers": workers,
            "metric": metric}
    return records, summary, verdict.verdict == "NotPsh", echo


def _run_log_distance(cfg):
    d, domain_echo = _domain(cfg)
    metric = cfg.get("metric") or dom.natural_metric(d)
    trials = int(cfg.get("trials", 1000))
    seed = int(cfg.get("seed", 0))
    tol = float(cfg.get("tol", 1e-9))
    workers = int(cfg.get("workers", 1))
    result = cl.log_distance_probe(d, metric=metric, trials=trials, seed=seed,
                                   tol=tol, workers=workers)
    records = _psh_records(result.inner)
    records.append({"key": "conclusion", "conclusion": result.conclusion,
                    "metric": result.metric})
    summary = (f"{result.conclusion} via -ln d sub-mean-value criterion "
               f"({result.inner.tested} triples, "
               f"{len(result.inner.violations)} violations)")
    echo = {"domain": domain_echo, "metric": metric, "trials": trials,
            "seed": seed, "tol": tol, "workers": workers}
    return records, summary, result.conclusion == "NotPseudoconvex", echo


def _run_reinhardt(cfg):
    d, domain_echo = _domain(cfg)
    if not isinstance(d, dom.ReinhardtUnion):
        raise ConfigError("domain.variant: reinhardt command needs a "
                          "reinhardt_union domain")
    trials = int(cfg.get("trials", 10000))
    seed = int(cfg.get("seed", rh.DEFAULT_SEED))
    result = rh.not_domain_of_holomorphy_report(d, trials, seed)
    records = [{"key": "conclusion", "conclusion": result.conclusion,
                "reason": result.reason, "trials": result.trials}]
    if result.witness is not None:
        w = result.witness
        records.append({"key": "witness", "p": w.p, "q": w.q,
                        "midpoint": w.midpoint, "p_defect": w.p_defect,
                        "q_defect": w.q_defect,
                        "midpoint_defect": w.midpoint_defect})
    summary = f"{result.conclusion}: {result.reason}"
    echo = {"domain": domain_echo, "trials": trials, "seed": seed}
    return records, summary, result.witness is not None, echo


def _cvec(pairs, path):
    try:
        return tuple(complex(p[0], p[1]) for p in pairs)
    except (TypeError, IndexError):
        raise ConfigError(f"{path}: expected a list of [re, im] pairs") from None


def _disc_family(cfg, n):
    spec = _require(cfg, "disc_family")
    variant = spec.get("variant")
    j_min = int(spec.get("j_min", 2))
    j_max = int(spec.get("j_max", 20))
    j_values = list(range(j_min, j_max + 1))
    if variant == "hartogs":
        family, limit = discs.hartogs_family(float(spec.get("r", 1.0)),
                                             int(spec.get("dimension", n)),
                                             j_values)
        return family, limit, j_values, spec
    if variant == "affine_sweep":
        family, limit = discs.affine_sweep_family(
            _cvec(spec["from_center"], "disc_family.from_center"),
            _cvec(spec["to_center"], "disc_family.to_center"),
            _cvec(spec["direction"], "disc_family.direction"),
            float(spec.get("radius", 1.0)), j_values)
        return family, limit, j_values, spec
    if variant == "exp_twisted":
        family, limit = discs.exp_twisted_family(
            _cvec(spec["center"], "disc_family.center"),
            _cvec(spec["dir_primary"], "disc_family.dir_primary"),
            _cvec(spec["dir_secondary"], "disc_family.dir_secondary"),
            float(spec.get("r", 1.0)),
            [complex(c[0], c[1]) for c in spec["g_coefficients"]], j_values)
        return family, limit, j_values, spec
    raise ConfigError(f"disc_family.variant: unknown variant {variant!r}")


def _run_disc_probe(cfg):
    d, domain_echo = _domain(cfg)
    family, limit, j_values, family_echo = _disc_family(cfg, d.dimension)
    interior = int(cfg.get("interior", 256))
    boundary = int(cfg.get("boundary", 128))
    seed = int(cfg.get("seed", 0))
    echo = {"domain": domain_echo, "disc_family": family_echo,
            "interior": interior, "boundary": boundary, "seed": seed}
    try:
        result = discs.continuity_probe(d, family, limit_disc=limit,
                                        j_values=j_values, interior=interior,
                                        boundary=boundary, seed=seed)
    except FamilyLeavesDomain as err:
        records = [{"key": "inapplicable", "reason": str(err)}]
        return records, f"probe inapplicable: {err}", False, echo
    records = []
    for chk in result.per_index:
        records.append({"key": f"index-{chk.j:07d}", "j": chk.j,
                        "image_inside": chk.image_inside,
                        "boundary_inside": chk.boundary_inside})
    records.append({"key": "limit", "family": result.family_id,
                    "limit_boundary_inside": result.limit_boundary_inside,
                    "limit_points": result.limit_points})
    if result.violation:
        records.append({"key": "violation", "witness": result.witness})
        summary = (f"continuity principle violated: limit point escapes "
                   f"the domain")
    elif not result.limit_boundary_inside:
        summary = "limit boundary leaves the domain; no conclusion"
    else:
        summary = "no violation found"
    return records, summary, result.violation, echo


def _run_hull(cfg):
    kind = cfg.get("kind", "affine")
    is_complex = bool(cfg.get("is_complex", kind == "polynomial"))
    if "points_file" in cfg and cfg["points_file"]:
        pset = hulls.load_point_set(cfg["points_file"],
                                    int(_require(cfg, "dimension")),
                                    is_complex)
    else:
        rows = _require(cfg, "points")
        if is_complex:
            pts = np.array([[complex(p[0], p[1]) for p in row] for row in rows])
        else:
            pts = np.array(rows, dtype=float)
        pset = hulls.PointSet(pts, is_complex)
    queries = _require(cfg, "queries")
    seed = int(cfg.get("seed", 0))
    tol = float(cfg.get("tol", 1e-9))
    records = []
    outside = 0
    for i, q in enumerate(queries):
        if kind == "affine":
            query = np.asarray(q, dtype=float)
            res = hulls.affine_hull_membership(
                pset, query, functionals=int(cfg.get("functionals", 500)),
                seed=seed, tol=tol)
        elif kind == "polynomial":
            query = np.array([complex(p[0], p[1]) for p in q])
            res = hulls.polynomial_hull_membership(
                pset, query, degree=int(cfg.get("degree", 8)),
                family="monomials+random" if cfg.get("random_count") else "monomials",
                count=int(cfg.get("random_count", 0)), seed=seed, tol=tol)
        else:
            raise ConfigError(f"kind: expected 'affine' or 'polynomial', got {kind!r}")
        outside += res.verdict == "Outside"
        records.append({"key": f"query-{i:04d}", "query": res.query,
                        "verdict": res.verdict, "certificate": res.certificate,
                        "tested": res.tested, "best_margin": res.best_margin})
    bound = hulls.hull_boundedness_check(pset)
    records.append({"key": "bounds", "per_coordinate": bound.per_coordinate,
                    "bound": bound.bound})
    summary = (f"{outside}/{len(queries)} queries separated ({kind} family); "
               f"coordinate bound {bound.bound:.6g}")
    if is_complex:
        points_echo = [[[c.real, c.imag] for c in row] for row in pset.points]
    else:
        points_echo = [[float(v) for v in row] for row in pset.points]
    echo = {"kind": kind, "is_complex": is_complex, "points": points_echo,
            "queries": [rep.to_jsonable(q) for q in queries], "seed": seed,
            "tol": tol, "functionals": int(cfg.get("functionals", 500)),
            "degree": int(cfg.get("degree", 8)),
            "random_count": int(cfg.get("random_count", 0))}
    return records, summary, outside > 0, echo


def _run_exhaustion(cfg):
    d, domain_echo = _domain(cfg)
    function = cfg.get("function", exh.CANONICAL)
    if function not in (exh.CANONICAL, exh.NORM_SQUARED):
        function = ex.parse(function, d.dimension)
    metric = cfg.get("metric")
    sequences = int(cfg.get("sequences", 8))
    seed = int(cfg.get("seed", 0))
    steps = int(cfg.get("steps", 56))
    probe = exh.make_probe(d, function=function, metric=metric,
                           sequences=sequences, seed=seed, steps=steps)
    check = exh.exhaustion_blowup_check(probe)
    records = []
    for i, ((first, final, inc), values) in enumerate(
            zip(check.per_sequence, probe.values)):
        passed = (final > first + exh.BLOWUP_RISE and final > exh.BLOWUP_FLOOR
                  and inc)
        records.append({"key": f"sequence-{i:04d}", "first": first,
                        "final": final, "eventually_increasing": inc,
                        "passed": passed, "length": len(values)})
    records.append({"key": "aggregate", "passed": check.passed,
                    "function": probe.function_id})
    summary = (f"blow-up check {'passed' if check.passed else 'failed'} on "
               f"{len(probe.sequences)} approach sequences")
    echo = {"domain": domain_echo, "function": probe.function_id,
            "metric": metric, "sequences": sequences, "seed": seed,
            "steps": steps}
    return records, summary, not check.passed, echo


def _run_selftest(cfg):
    samples = int(cfg.get("samples", 50))
    seed = int(cfg.get("seed", 0))
    tol = float(cfg.get("tol", 1e-6))
    result = run_selftest(points_per_expr=samples, seed=seed, tolerance=tol)
    records = []
    for i, chk in enumerate(result.checks):
        records.append({"key": f"expression-{i:02d}", "text": chk.text,
                        "dimension": chk.dimension,
                        "derivatives_checked": chk.derivatives_checked,
                        "max_rel_error": chk.max_rel_error,
                        "worst_case": chk.worst_case})
    records.append({"key": "aggregate", "max_rel_error": result.max_rel_error,
                    "tolerance": tol, "passed": result.passed})
    summary = (f"derivative self-test {'passed' if result.passed else 'FAILED'}: "
               f"max relative error {result.max_rel_error:.3e} over "
               f"{len(result.checks)} expressions")
    echo = {"samples": samples, "seed": seed, "tol": tol}
    return records, summary, not result.passed, echo


_RUNNERS = {
    "classify": _run_classify,
    "psh-test": _run_psh_test,
    "log-distance-probe": _run_log_distance,
    "reinhardt": _run_reinhardt,
    "disc-probe": _run_disc_probe,
    "hull": _run_hull,
    "exhaustion": _run_exhaustion,
    "derivative-selftest": _run_selftest,
}


def run_command(command: str, cfg: dict) -> tuple[dict, int]:
    """Execute one command; returns (report, exit code)."""
    if command not in _RUNNERS:
        raise ConfigError(f"command: unknown command {command!r}")
    _check_keys(command, cfg)
    start = time.perf_counter()
    records, summary, has_witnesses, echo = _RUNNERS[command](cfg)
    wall = time.perf_counter() - start
    report = rep.build_report(command, echo, records, summary, has_witnesses,
                              wall)
    return report, 2 if has_witnesses else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="levikit",
        description="Desk-scale pseudoconvexity classification toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        p = sub.add_parser(name, help=f"run the {name} analysis")
        p.add_argument("--config", help="YAML config file")
        p.add_argument("--seed", type=int, help="override config seed")
        p.add_argument("--samples", type=int, help="override sample count")
        p.add_argument("--trials", type=int, help="override trial count")
        p.add_argument("--tol", type=float, help="override tolerance")
        p.add_argument("--metric", choices=[dom.EUCLIDEAN, dom.LINFTY],
                       help="override metric")
        p.add_argument("--workers", type=int, help="override worker count")
        p.add_argument("--out", help="report output path")
    v = sub.add_parser("verify", help="re-check every witness in a report")
    v.add_argument("report", help="path to a JSON report")
    args = parser.parse_args(argv)

    try:
        if args.command == "verify":
            report = rep.load_report(args.report)
            result = rep.verify_report(report)
            for key, reason in result.failures:
                print(f"FAIL {key}: {reason}")
            print(f"verify: {'pass' if result.passed else 'FAIL'} "
                  f"({result.checked} witnesses checked)")
            return 0 if result.passed else 2

        cfg = load_config_file(args.config) if args.config else {}
        if args.command != "derivative-selftest" and not cfg:
            raise ConfigError("--config: a config file is required")
        for key in ("seed", "samples", "trials", "tol", "metric", "workers",
                    "out"):
            val = getattr(args, key)
            if val is not None:
                cfg[key] = val
        out_path = cfg.pop("out", None)
        report, code = run_command(args.command, cfg)
        if out_path:
            rep.write_report(report, out_path)
        print(report["summary"])
        return code
    except LevikitError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
