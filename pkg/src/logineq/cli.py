"""Batch front end: verify | constants | heat.

Configs are versioned JSON with a strict schema (unknown keys are rejected).
Outputs are deterministic for a fixed config and seed, written atomically:
``reports.json`` + ``summary.csv`` for verification suites, ``constants.csv``
for constant tables, per-run trajectory CSVs and two-column gnuplot data
files for heat runs.

Exit codes: 0 success (no "violated" verdict), 2 config/validation error,
3 internal-consistency error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from . import constants as consts
from .errors import ConsistencyError, InputError, OptimizerError
from .families import (
    gaussian,
    graded_gaussian_family,
    load_family_file,
    make_family,
    standard_family,
)
from .fields import GridSpec, ScalarField, grid_for, lp_norm, sample
from .groups import (
    GroupDescriptor,
    default_quasi_norm,
    euclidean_lp_first_stratum_bound,
    euclidean_lp_norm,
    first_stratum_max_ratio,
    get_group,
    koranyi_norm,
)
from .heat import heat_evolve
from .inequalities import (
    GRID_REL_TOL,
    STRICT_REL_TOL,
    CKNParams,
    VerificationReport,
    check_gross,
    check_interp,
    check_jensen_step,
    check_log_ckn,
    check_log_gn,
    check_log_holder,
    check_log_sobolev_weighted,
    check_nash,
    empirical_sup,
)

SCHEMA_VERSION = 1

CASE_TAGS = (
    "interp", "log-holder", "log-sobolev", "log-sobolev-weighted", "log-gn",
    "log-ckn", "nash", "nash-weighted", "gross", "gross-weighted",
    "gross-euclidean-lp", "jensen-step",
)


# ---------------------------------------------------------------------------
# Config plumbing
# ---------------------------------------------------------------------------


def _check_keys(obj: dict, where: str, allowed, required=()):
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise InputError(f"{where}: unknown keys {unknown}")
    missing = sorted(set(required) - set(obj))
    if missing:
        raise InputError(f"{where}: missing required keys {missing}")


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read config {path}: {e}")
    except json.JSONDecodeError as e:
        raise InputError(f"config {path} is not valid JSON: {e}")
    if not isinstance(cfg, dict):
        raise InputError("config root must be an object")
    if cfg.get("schema_version") != SCHEMA_VERSION:
        raise InputError(
            f"config schema_version must be {SCHEMA_VERSION}, got {cfg.get('schema_version')!r}"
        )
    return cfg


def _atomic_write(path: str, data: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _fmt(x) -> str:
    return repr(float(x))


def resolve_norm(spec, group: GroupDescriptor):
    if spec in (None, "default"):
        return default_quasi_norm(group)
    if isinstance(spec, str):
        if spec == "koranyi":
            return koranyi_norm(group)
        if spec.startswith("koranyi:"):
            return koranyi_norm(group, c=float(spec.split(":", 1)[1]))
        if spec == "linf":
            return euclidean_lp_norm(math.inf)
        if spec.startswith("l"):
            return euclidean_lp_norm(float(spec[1:]))
    raise InputError(f"unknown quasi-norm spec {spec!r}")


# ---------------------------------------------------------------------------
# Constant resolution policy
# ---------------------------------------------------------------------------


class ConstantResolver:
    """Resolves "exact" / "estimate" / "empirical" / numeric constant sources.

    Estimated constants are lower bounds; before use on a right-hand side
    they are padded by the safety factor, and verifiers downgrade violations
    to "constant-refined" (see the inequalities module).
    """

    def __init__(self, groups: dict, grids: dict, seed: int,
                 safety: float = consts.DEFAULT_SAFETY,
                 q_points: int = 33, sweeps: int = 3):
        self.groups = groups
        self.grids = grids
        self.seed = seed
        self.safety = safety
        self.q_points = q_points
        self.sweeps = sweeps
        self._cache: dict = {}

    def _estimate_A(self, gname: str, p: float, a: float) -> consts.ConstantEstimate:
        key = ("A", gname, p, a)
        if key not in self._cache:
            group = self.groups[gname]
            grid = self.grids[gname]
            fam = graded_gaussian_family(group)
            gn = consts.estimate_log_sobolev_constant(
                group, p, a, fam, grid, q_points=self.q_points, sweeps=self.sweeps)
            fields = [sample(group, grid, f) for f in standard_family(group)]
            emp = consts.empirical_log_sobolev_constant(fields, p, a)
            best = gn if gn.value >= emp.value else emp
            self._cache[key] = consts.ConstantEstimate(
                best.value, "lower-bound", f"max({gn.provenance},{emp.provenance})")
        return self._cache[key]

    def log_sobolev(self, gname: str, p: float, a: float, source):
        if isinstance(source, (int, float)) and not isinstance(source, bool):
            return float(source)
        if source == "empirical":
            return "empirical"
        group = self.groups[gname]
        if source == "exact":
            if not (group.is_euclidean and p == 2 and a == 1):
                raise InputError(
                    f"no exact constant for {gname}, p={p}, a={a}; use 'estimate'")
            return consts.euclidean_log_sobolev_constant(group.dim)
        if source == "estimate":
            return self._estimate_A(gname, p, a).padded(self.safety)
        raise InputError(f"unknown constant source {source!r}")

    def gross_gamma(self, gname: str, source):
        group = self.groups[gname]
        if isinstance(source, (int, float)) and not isinstance(source, bool):
            return float(source)
        if source == "exact":
            if not group.is_euclidean:
                raise InputError(f"no exact normalization for {gname}; use 'estimate'")
            return consts.euclidean_gaussian_normalization(group.dim)
        if source == "estimate":
            A = self._estimate_A(gname, 2.0, 1.0).padded(self.safety)
            gamma = consts.gaussian_normalization(
                group.homogeneous_dim, group.first_stratum_dim, A.value)
            return consts.ConstantEstimate(gamma, "lower-bound", A.provenance)
        raise InputError(f"unknown normalization source {source!r}")

    def empirical_weighted_ls_constant(self, gname: str, fields, p, a, beta, qnorm,
                                       extra_fields=()) -> consts.ConstantEstimate:
        """sup over the family (plus tilt-shaped companions) of the minimal C."""
        reports = []
        for u in list(fields) + list(extra_fields):
            reports.append(check_log_sobolev_weighted(u, a, p, beta, qnorm, "empirical"))
        return empirical_sup(reports)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

_VERIFY_KEYS = ("schema_version", "seed", "tolerance_profile", "output_dir",
                "jobs", "constant_policy", "groups", "families", "cases")
_CASE_KEYS = ("tag", "group", "p", "q", "r", "a", "a1", "a2", "beta", "gamma",
              "delta", "norm", "lp", "constant", "gamma_source", "a_mix")


def _build_grids(cfg_groups: dict):
    groups, grids = {}, {}
    for gname, spec in cfg_groups.items():
        _check_keys(spec, f"groups.{gname}", ("half_widths", "points"),
                    ("half_widths", "points"))
        g = get_group(gname)
        groups[gname] = g
        grids[gname] = grid_for(g, spec["half_widths"], spec["points"])
    return groups, grids


def _build_families(cfg_fams: dict, groups, grids, seed: int):
    fams = {}
    for gname, spec in cfg_fams.items():
        if gname not in groups:
            raise InputError(f"families.{gname}: group not configured")
        _check_keys(spec, f"families.{gname}",
                    ("name", "file", "count", "components", "sigma_range",
                     "center_range"))
        if "file" in spec:
            formulas = load_family_file(spec["file"], groups[gname])
        else:
            kwargs = {k: spec[k] for k in ("components", "sigma_range", "center_range")
                      if k in spec}
            if "sigma_range" in kwargs:
                kwargs["sigma_range"] = tuple(kwargs["sigma_range"])
            formulas = make_family(spec.get("name", "standard"), groups[gname],
                                   count=spec.get("count", 0), seed=seed, **kwargs)
        fams[gname] = [sample(groups[gname], grids[gname], f) for f in formulas]
    return fams


def _interp_mix(p: float, r: float, q: float) -> float:
    if q == p:
        return 1.0
    return (1.0 / r - 1.0 / q) / (1.0 / p - 1.0 / q)


def _run_case(case: dict, group: GroupDescriptor, fields, resolver: ConstantResolver,
              rel_tol: float):
    tag = case["tag"]
    gname = case["group"]
    reports: list[VerificationReport] = []

    def weighted_ls_args():
        p, a, beta = case["p"], case["a"], case.get("beta", 0.0)
        qnorm = resolve_norm(case.get("norm"), group) if beta else None
        return p, a, beta, qnorm

    if tag == "interp":
        p, r, q = case["p"], case["r"], case["q"]
        a_mix = case.get("a_mix", _interp_mix(p, r, q))
        for u in fields:
            reports.append(check_interp(u, p, r, q, a_mix, rel_tol=rel_tol))
    elif tag == "log-holder":
        for u in fields:
            reports.append(check_log_holder(u, case["p"], case["q"], rel_tol=rel_tol))
    elif tag == "jensen-step":
        for u in fields:
            reports.append(check_jensen_step(u, rel_tol=rel_tol))
    elif tag in ("log-sobolev", "log-sobolev-weighted"):
        p, a, beta, qnorm = weighted_ls_args()
        constant = resolver.log_sobolev(gname, p, a, case.get("constant", "exact"))
        if constant == "empirical":
            pre = [check_log_sobolev_weighted(u, a, p, beta, qnorm, "empirical",
                                              rel_tol=rel_tol) for u in fields]
            constant = empirical_sup(pre)
        for u in fields:
            reports.append(check_log_sobolev_weighted(u, a, p, beta, qnorm, constant,
                                                      rel_tol=rel_tol))
    elif tag == "log-gn":
        a1, a2, p, q = case["a1"], case["a2"], case["p"], case["q"]
        constant = case.get("constant", "empirical")
        if constant == "empirical":
            pre = [check_log_gn(u, a1, a2, p, q, "empirical", rel_tol=rel_tol)
                   for u in fields]
            constant = empirical_sup(pre)
        for u in fields:
            reports.append(check_log_gn(u, a1, a2, p, q, constant, rel_tol=rel_tol))
    elif tag == "log-ckn":
        params = CKNParams(p=case["p"], r=case["r"], q=case["q"], delta=case["delta"],
                           a=case["a"], beta=case.get("beta", 0.0),
                           gamma=case.get("gamma", 0.0))
        qnorm = resolve_norm(case.get("norm"), group)
        constant = case.get("constant", "empirical")
        if constant == "empirical":
            pre = [check_log_ckn(u, params, qnorm, "empirical", rel_tol=rel_tol)
                   for u in fields]
            constant = empirical_sup(pre)
        for u in fields:
            reports.append(check_log_ckn(u, params, qnorm, constant, rel_tol=rel_tol))
    elif tag in ("nash", "nash-weighted"):
        a, beta = case["a"], case.get("beta", 0.0)
        qnorm = resolve_norm(case.get("norm"), group) if beta else None
        constant = case.get("constant", "exact")
        if constant == "exact":
            if a != 1:
                raise InputError("exact Nash constants are only wired for a=1")
            constant = resolver.log_sobolev(gname, 2.0, 1.0, "exact")
        elif constant == "estimate":
            constant = resolver.log_sobolev(gname, 2.0, a, "estimate")
        if constant == "empirical":
            pre = [check_nash(u, a, "empirical", beta=beta, qnorm=qnorm,
                              rel_tol=rel_tol) for u in fields]
            constant = empirical_sup(pre)
        for u in fields:
            reports.append(check_nash(u, a, constant, beta=beta, qnorm=qnorm,
                                      rel_tol=rel_tol))
    elif tag in ("gross", "gross-weighted", "gross-euclidean-lp"):
        beta = case.get("beta", 0.0)
        if tag == "gross-euclidean-lp":
            qnorm = euclidean_lp_norm(
                math.inf if case["lp"] == "inf" else float(case["lp"]))
        else:
            qnorm = resolve_norm(case.get("norm"), group) if beta else None
        source = case.get("gamma_source", "exact" if beta == 0.0 else "auto")
        if beta == 0.0:
            gamma = resolver.gross_gamma(gname, source)
        elif source == "auto":
            gamma = _weighted_gross_gamma(group, fields, beta, qnorm, case, resolver)
        else:
            gamma = resolver.gross_gamma(gname, source)
        for u in fields:
            reports.append(check_gross(u, gamma, beta=beta, qnorm=qnorm,
                                       rel_tol=rel_tol))
    else:
        raise InputError(f"unknown case tag {tag!r}; known: {CASE_TAGS}")
    return reports


def _weighted_gross_gamma(group, fields, beta, qnorm, case, resolver):
    """Normalization for the weighted Gross check: empirical weighted
    log-Sobolev constant (over the family and its tilt-shaped companions),
    padded, plus the first-stratum norm bound."""
    from .transforms import tilt

    extra = [tilt(u, 1.0) for u in fields]
    C = resolver.empirical_weighted_ls_constant(
        case["group"], fields, 2.0, 1.0, beta, qnorm, extra_fields=extra)
    Cpad = C.padded(resolver.safety)
    if case["tag"] == "gross-euclidean-lp":
        M = euclidean_lp_first_stratum_bound(
            group.dim, math.inf if case["lp"] == "inf" else float(case["lp"]))
    else:
        M = first_stratum_max_ratio(group, qnorm) * consts.NORM_BOUND_SAFETY
    gamma = consts.weighted_gaussian_normalization(
        group.homogeneous_dim, group.first_stratum_dim, beta, Cpad.value, M)
    return consts.ConstantEstimate(gamma, "lower-bound", Cpad.provenance)


def cmd_verify(cfg: dict, out_dir: str, jobs: int, seed: int, rel_tol: float) -> int:
    _check_keys(cfg, "config", _VERIFY_KEYS, ("schema_version", "groups", "cases"))
    groups, grids = _build_grids(cfg["groups"])
    families = _build_families(cfg.get("families", {}), groups, grids, seed)
    policy = cfg.get("constant_policy", {})
    _check_keys(policy, "constant_policy",
                ("safety_factor", "estimate_q_points", "estimate_sweeps"))
    resolver = ConstantResolver(
        groups, grids, seed,
        safety=policy.get("safety_factor", consts.DEFAULT_SAFETY),
        q_points=policy.get("estimate_q_points", 33),
        sweeps=policy.get("estimate_sweeps", 3),
    )

    cases = cfg["cases"]
    for i, case in enumerate(cases):
        _check_keys(case, f"cases[{i}]", _CASE_KEYS, ("tag", "group"))
        if case["tag"] not in CASE_TAGS:
            raise InputError(f"cases[{i}]: unknown tag {case['tag']!r}")
        if case["group"] not in groups:
            raise InputError(f"cases[{i}]: group {case['group']!r} not configured")

    def run(indexed):
        i, case = indexed
        gname = case["group"]
        fields = families.get(gname)
        if fields is None:
            fields = [sample(groups[gname], grids[gname], f)
                      for f in standard_family(groups[gname])]
            families[gname] = fields
        return _run_case(case, groups[gname], fields, resolver, rel_tol)

    # constant estimation is cached and must happen deterministically: warm
    # the ConstantResolver sequentially before fanning out
    results: list = [None] * len(cases)
    if jobs > 1:
        for i, case in enumerate(cases):
            if case.get("constant") == "estimate" or case.get("gamma_source") == "estimate":
                run((i, case))
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(run, enumerate(cases)))
    else:
        results = [run(x) for x in enumerate(cases)]

    os.makedirs(out_dir, exist_ok=True)
    rows = []
    json_reports = []
    any_violated = False
    for i, (case, reps) in enumerate(zip(cases, results)):
        for k, rep in enumerate(reps):
            any_violated = any_violated or rep.verdict == "violated"
            rows.append([i, case["group"], rep.tag, k, _fmt(rep.lhs), _fmt(rep.rhs),
                         _fmt(rep.slack), rep.verdict])
            json_reports.append({
                "case": i, "group": case["group"], "tag": rep.tag, "field": k,
                "params": {k2: v for k2, v in case.items() if k2 not in ("tag", "group")},
                "lhs": rep.lhs, "rhs": rep.rhs, "slack": rep.slack,
                "verdict": rep.verdict,
                "constant": None if rep.constant_value is None else {
                    "value": rep.constant_value,
                    "direction": rep.constant_direction,
                    "provenance": rep.constant_provenance,
                },
                "seed": seed, "rel_tol": rel_tol,
                "diagnostics": rep.diagnostics,
            })
    _atomic_write(os.path.join(out_dir, "reports.json"),
                  json.dumps(json_reports, indent=1, sort_keys=True))
    buf = io.StringIO()
    wr = csv.writer(buf)
    wr.writerow(["case", "group", "tag", "field", "lhs", "rhs", "slack", "verdict"])
    wr.writerows(rows)
    _atomic_write(os.path.join(out_dir, "summary.csv"), buf.getvalue())
    return 1 if any_violated else 0


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

_CONSTANTS_KEYS = ("schema_version", "seed", "output_dir", "groups", "constant_policy",
                   "tables")
_TABLE_KEYS = ("name", "group", "p", "q", "a", "beta", "method", "norm", "C", "M")


def cmd_constants(cfg: dict, out_dir: str, jobs: int, seed: int) -> int:
    _check_keys(cfg, "config", _CONSTANTS_KEYS, ("schema_version", "groups", "tables"))
    groups, grids = _build_grids(cfg["groups"])
    policy = cfg.get("constant_policy", {})
    _check_keys(policy, "constant_policy",
                ("safety_factor", "estimate_q_points", "estimate_sweeps"))
    resolver = ConstantResolver(
        groups, grids, seed,
        safety=policy.get("safety_factor", consts.DEFAULT_SAFETY),
        q_points=policy.get("estimate_q_points", 33),
        sweeps=policy.get("estimate_sweeps", 3),
    )
    rows = []
    for i, table in enumerate(cfg["tables"]):
        _check_keys(table, f"tables[{i}]", _TABLE_KEYS, ("name", "group"))
        name, gname = table["name"], table["group"]
        if gname not in groups:
            raise InputError(f"tables[{i}]: group {gname!r} not configured")
        group = groups[gname]
        p = table.get("p", 2.0)
        a = table.get("a", 1.0)
        q = table.get("q", "")
        beta = table.get("beta", "")
        if name in ("A", "A2"):
            if name == "A2":
                p = 2.0
            method = table.get("method", "exact" if group.is_euclidean else "estimate")
            if method == "exact":
                est = consts.euclidean_log_sobolev_constant(group.dim)
            elif method == "estimate":
                est = resolver._estimate_A(gname, p, a)
            else:
                raise InputError(f"tables[{i}]: unknown method {method!r}")
        elif name == "gamma":
            src = table.get("method", "exact" if group.is_euclidean else "estimate")
            got = resolver.gross_gamma(gname, src)
            est = got if isinstance(got, consts.ConstantEstimate) else \
                consts.ConstantEstimate(got, "exact", "closed-form")
        elif name == "M":
            qn = resolve_norm(table.get("norm"), group)
            try:
                val = first_stratum_max_ratio(group, qn)
                est = consts.ConstantEstimate(val, "lower-bound", "family-optimized")
            except OptimizerError as e:
                est = consts.ConstantEstimate(max(e.best, 1e-300), "lower-bound",
                                              "family-optimized+nonconverged")
        elif name == "d0":
            prob = consts.NehariProblem(group, p, float(table["q"]), a)
            est = consts.minimize_nehari_energy(
                prob, graded_gaussian_family(group), grids[gname])
        else:
            raise InputError(f"tables[{i}]: unknown constant {name!r}")
        rows.append([name, gname, _fmt(p), q if q == "" else _fmt(q), _fmt(a),
                     beta if beta == "" else _fmt(beta),
                     _fmt(est.value), est.direction, est.provenance])

    os.makedirs(out_dir, exist_ok=True)
    buf = io.StringIO()
    wr = csv.writer(buf)
    wr.writerow(["name", "group", "p", "q", "a", "beta", "value", "direction",
                 "provenance"])
    wr.writerows(rows)
    _atomic_write(os.path.join(out_dir, "constants.csv"), buf.getvalue())
    return 0


# ---------------------------------------------------------------------------
# heat
# ---------------------------------------------------------------------------

_HEAT_KEYS = ("schema_version", "seed", "output_dir", "groups", "constant_policy",
              "runs")
_RUN_KEYS = ("group", "initial", "t_final", "steps", "a2", "record_every")


def _initial_field(spec: dict, group, grid) -> ScalarField:
    _check_keys(spec, "initial", ("name", "alpha", "alpha_rest", "amplitude"),
                ("name",))
    if spec["name"] == "zero":
        return sample(group, grid, lambda *c: np.zeros(np.broadcast(*c).shape))
    if spec["name"] == "gaussian":
        kw = {k: spec[k] for k in ("alpha", "alpha_rest", "amplitude") if k in spec}
        return sample(group, grid, gaussian(group, **kw))
    raise InputError(f"unknown initial condition {spec['name']!r}")


def cmd_heat(cfg: dict, out_dir: str, jobs: int, seed: int) -> int:
    _check_keys(cfg, "config", _HEAT_KEYS, ("schema_version", "groups", "runs"))
    groups, grids = _build_grids(cfg["groups"])
    policy = cfg.get("constant_policy", {})
    _check_keys(policy, "constant_policy",
                ("safety_factor", "estimate_q_points", "estimate_sweeps"))
    resolver = ConstantResolver(
        groups, grids, seed,
        safety=policy.get("safety_factor", consts.DEFAULT_SAFETY),
        q_points=policy.get("estimate_q_points", 33),
        sweeps=policy.get("estimate_sweeps", 3),
    )
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    all_bounds_ok = True
    for i, run in enumerate(cfg["runs"]):
        _check_keys(run, f"runs[{i}]", _RUN_KEYS, ("group", "initial", "t_final"))
        gname = run["group"]
        if gname not in groups:
            raise InputError(f"runs[{i}]: group {gname!r} not configured")
        group, grid = groups[gname], grids[gname]
        u0 = _initial_field(run["initial"], group, grid)
        trivial = lp_norm(u0, 1.0) == 0.0
        a2_val = None
        if not trivial:
            a2_src = run.get("a2", "exact" if group.is_euclidean else "estimate")
            a2 = resolver.log_sobolev(gname, 2.0, 1.0, a2_src)
            a2_val = a2.value if isinstance(a2, consts.ConstantEstimate) else float(a2)
        traj = heat_evolve(u0, run["t_final"], steps=run.get("steps"),
                           a2=a2_val, record_every=run.get("record_every", 1))
        bound_ok = True if trivial else traj.bound_satisfied()
        all_bounds_ok = all_bounds_ok and bound_ok

        buf = io.StringIO()
        wr = csv.writer(buf)
        wr.writerow(["t", "l1", "l2", "bound", "min"])
        for k in range(len(traj.times)):
            b = "" if traj.bound is None else _fmt(traj.bound[k])
            wr.writerow([_fmt(traj.times[k]), _fmt(traj.l1[k]), _fmt(traj.l2[k]),
                         b, _fmt(traj.min_value[k])])
        _atomic_write(os.path.join(out_dir, f"heat_{i}_trajectory.csv"), buf.getvalue())
        for col, fname in (("l2", f"heat_{i}_l2.dat"), ("bound", f"heat_{i}_bound.dat")):
            series = getattr(traj, "l2") if col == "l2" else traj.bound
            if series is None:
                continue
            lines = [f"{_fmt(traj.times[k])} {_fmt(series[k])}"
                     for k in range(len(traj.times))]
            _atomic_write(os.path.join(out_dir, fname), "\n".join(lines) + "\n")
        rows.append([i, gname, "ok" if bound_ok else "bound-violated",
                     "leak-warning" if traj.leak_flag else "", _fmt(traj.leak),
                     _fmt(traj.dt)])
    buf = io.StringIO()
    wr = csv.writer(buf)
    wr.writerow(["run", "group", "bound", "warning", "leak", "dt"])
    wr.writerows(rows)
    _atomic_write(os.path.join(out_dir, "heat_summary.csv"), buf.getvalue())
    return 0 if all_bounds_ok else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="logineq",
        description="verify logarithmic functional inequalities on stratified groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("verify", "constants", "heat"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True)
        sp.add_argument("--out", default=None)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--tolerance-profile", choices=("strict", "grid"),
                        default="strict")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        out_dir = args.out or cfg.get("output_dir", "out")
        seed = args.seed if args.seed is not None else cfg.get("seed", 0)
        rel_tol = STRICT_REL_TOL if args.tolerance_profile == "strict" else GRID_REL_TOL
        if args.command == "verify":
            return cmd_verify(cfg, out_dir, args.jobs, seed, rel_tol)
        if args.command == "constants":
            return cmd_constants(cfg, out_dir, args.jobs, seed)
        return cmd_heat(cfg, out_dir, args.jobs, seed)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ConsistencyError as e:
        print(f"internal consistency error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
