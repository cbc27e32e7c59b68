"""One verifier per logarithmic inequality.

Every ``check_*`` function computes the two sides, the slack ``rhs - lhs``
and a verdict:

* ``holds``      slack >= -tol with tol = rel_tol * max(1, |rhs|);
* ``violated``   negative slack with a certain (exact/explicit) constant;
* ``constant-refined``  negative slack where the only uncertain ingredient is
  an estimated constant (a lower bound on the sharp one); the verdict asks
  for a refined constant rather than declaring the inequality false.

Constant-bearing checks also run in empirical mode (``constant="empirical"``),
returning the smallest constant making the inequality hold for the given
field; the supremum of those over a family is a lower bound on the sharp
constant.

The constant-free measure-space checks (interpolation, log-Holder, Jensen
step) also accept plain weighted atoms (DiscreteSample), which is how the
brute-force random suites drive them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .constants import ConstantEstimate
from .errors import InputError, UnsupportedOperationError
from .fields import (
    LEBESGUE,
    MeasureSpec,
    ScalarField,
    WeightSpec,
    boundary_decay,
    entropy,
    gradient_energy,
    horizontal_gradient,
    lp_norm,
    measure_density,
    quadrature_weights,
    semi_gaussian,
    sobolev_operator_norm,
    weight_power_values,
)
from .groups import GroupDescriptor, QuasiNorm

STRICT_REL_TOL = 1e-8
GRID_REL_TOL = 1e-3  # quadrature-dominated (stratified) cases

ConstantSource = Union[float, ConstantEstimate, str]


@dataclass(frozen=True)
class DiscreteSample:
    """Atoms of a finite measure space: |u| values and positive masses."""

    values: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        m = np.asarray(self.masses, dtype=float)
        if v.shape != m.shape:
            raise InputError("values and masses must have the same shape")
        if np.any(m <= 0):
            raise InputError("masses must be positive")
        object.__setattr__(self, "values", np.abs(v))
        object.__setattr__(self, "masses", m)


@dataclass
class VerificationReport:
    tag: str
    lhs: float
    rhs: float
    verdict: str
    constant_value: Optional[float] = None
    constant_direction: Optional[str] = None
    constant_provenance: Optional[str] = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


def _verdict(lhs: float, rhs: float, rel_tol: float, certain: bool) -> str:
    if rhs - lhs >= -rel_tol * max(1.0, abs(rhs)):
        return "holds"
    return "violated" if certain else "constant-refined"


def _resolve_constant(constant: ConstantSource):
    """-> (value or None-for-empirical, estimate-or-None, certain)."""
    if isinstance(constant, str):
        if constant != "empirical":
            raise InputError(f"unknown constant source {constant!r}")
        return None, None, False
    if isinstance(constant, ConstantEstimate):
        return constant.value, constant, constant.direction == "exact"
    value = float(constant)
    return value, ConstantEstimate(value, "exact", "explicit"), True


def _report(tag, lhs, rhs, rel_tol, est: Optional[ConstantEstimate], certain,
            diagnostics=None) -> VerificationReport:
    rep = VerificationReport(
        tag=tag, lhs=lhs, rhs=rhs,
        verdict=_verdict(lhs, rhs, rel_tol, certain),
        diagnostics=diagnostics or {},
    )
    if est is not None:
        rep.constant_value = est.value
        rep.constant_direction = est.direction
        rep.constant_provenance = est.provenance
    return rep


# ---------------------------------------------------------------------------
# Measure-space moments shared by field and discrete paths
# ---------------------------------------------------------------------------


def _as_samples(u, measure: MeasureSpec, weight: Optional[WeightSpec]):
    """Reduce either input kind to (|w u| values, integration masses)."""
    if isinstance(u, DiscreteSample):
        if weight is not None or measure.kind != "lebesgue":
            raise InputError("discrete samples carry their own measure")
        return u.values, u.masses
    w = quadrature_weights(u.grid)
    dens = measure_density(measure, u.group, u.grid)
    masses = w if dens is None else w * dens
    vals = np.abs(u.values)
    wp = weight_power_values(weight, u.group, u.grid, 1.0)
    if wp is not None:
        vals = vals * wp
    return vals.reshape(-1), masses.reshape(-1)


def _samples_lp(vals, masses, p: float) -> float:
    return float(np.sum(masses * vals**p)) ** (1.0 / p)


def _samples_entropy(vals, masses, p: float) -> float:
    s = masses * vals**p
    total = float(np.sum(s))
    if total <= 0:
        raise InputError("entropy of a zero sample")
    mask = s > 0
    acc = float(np.sum(s[mask] * np.log(vals[mask])))
    return (p / total) * acc - math.log(total)


# ---------------------------------------------------------------------------
# Constant-free checks
# ---------------------------------------------------------------------------


def check_interp(u, p: float, r: float, q: float, a_mix: float,
                 measure: MeasureSpec = LEBESGUE,
                 rel_tol: float = STRICT_REL_TOL) -> VerificationReport:
    """||u||_r <= ||u||_p^a ||u||_q^(1-a) with 1/r = a/p + (1-a)/q."""
    if not (1 < p <= r <= q):
        raise InputError(f"need 1 < p <= r <= q, got {(p, r, q)}")
    if not 0 <= a_mix <= 1:
        raise InputError(f"mixing parameter must lie in [0, 1], got {a_mix}")
    if abs(1.0 / r - (a_mix / p + (1 - a_mix) / q)) > 1e-12:
        raise InputError("exponent relation 1/r = a/p + (1-a)/q violated")
    vals, masses = _as_samples(u, measure, None)
    lhs = _samples_lp(vals, masses, r)
    rhs = _samples_lp(vals, masses, p) ** a_mix * _samples_lp(vals, masses, q) ** (1 - a_mix)
    return _report("interp", lhs, rhs, rel_tol, None, True)


def check_log_holder(u, p: float, q: float, measure: MeasureSpec = LEBESGUE,
                     weight: Optional[WeightSpec] = None,
                     rel_tol: float = STRICT_REL_TOL) -> VerificationReport:
    """Ent_p(w u) <= (q/(q-p)) log(||w u||_q^p / ||w u||_p^p)."""
    if not 1 < p < q < math.inf:
        raise InputError(f"need 1 < p < q < inf, got p={p}, q={q}")
    vals, masses = _as_samples(u, measure, weight)
    np_ = _samples_lp(vals, masses, p)
    if np_ <= 0:
        raise InputError("log-Holder check needs a nonzero field")
    lhs = _samples_entropy(vals, masses, p)
    rhs = (q / (q - p)) * math.log(_samples_lp(vals, masses, q) ** p / np_**p)
    return _report("log-holder", lhs, rhs, rel_tol, None, True)


def check_jensen_step(v, measure: MeasureSpec = LEBESGUE,
                      rel_tol: float = STRICT_REL_TOL) -> VerificationReport:
    """log(||v||_2^2 / ||v||_1) <= int (|v|^2/||v||_2^2) log|v|."""
    vals, masses = _as_samples(v, measure, None)
    n2 = _samples_lp(vals, masses, 2.0)
    n1 = float(np.sum(masses * vals))
    if n2 <= 0 or not math.isfinite(n1):
        raise InputError("Jensen step needs 0 < ||v||_2 and ||v||_1 < inf")
    lhs = math.log(n2**2 / n1)
    s = masses * vals**2
    mask = s > 0
    rhs = float(np.sum(s[mask] * np.log(vals[mask]))) / n2**2
    return _report("jensen-step", lhs, rhs, rel_tol, None, True)


# ---------------------------------------------------------------------------
# Log-Sobolev family
# ---------------------------------------------------------------------------


def _weighted_ls_exponent(Q: float, p: float, a: float, beta: float) -> float:
    """q = (Q - beta) p / (Q - a p); the weight power is -beta/q."""
    return (Q - beta) * p / (Q - a * p)


def check_log_sobolev_weighted(u: ScalarField, a: float, p: float, beta: float,
                               qnorm: Optional[QuasiNorm], constant: ConstantSource,
                               rel_tol: float = STRICT_REL_TOL,
                               scheme: str = "fd") -> VerificationReport:
    """Weighted log-Sobolev check:
    Ent_p(|x|^(-beta/q) u) <= ((Q-beta)/(ap-beta)) log(C ||u||_{H^a}^p / ||w u||_p^p).

    beta = 0 is exactly the unweighted inequality (same code path, no weight
    array is ever built)."""
    g = u.group
    Q = g.homogeneous_dim
    if beta >= a * p:
        raise InputError(
            f"need 0 <= beta < a*p (beta={beta}, a*p={a * p}): the borderline "
            "is the logarithmic-Hardy regime, which needs different methods"
        )
    if beta < 0:
        raise InputError(f"need beta >= 0, got {beta}")
    if beta > 0 and qnorm is None:
        raise InputError("a weighted check needs a quasi-norm")
    if not (0 < a and (Q > a * p or (g.is_euclidean and p == 2 and a == 1))):
        # Q <= a p has no exponent window; the Euclidean p=2, a=1 case is
        # classical in every dimension and is verified with the exact constant.
        raise InputError(f"order a={a} outside the admissible range for {g.name}, p={p}")
    if not g.is_euclidean and (a != 1 or p != 2):
        raise UnsupportedOperationError(
            f"on {g.name} only a=1, p=2 is supported (got a={a}, p={p})"
        )

    weight = None
    if beta > 0:
        q = _weighted_ls_exponent(Q, p, a, beta)
        weight = WeightSpec(qnorm, -beta / q)
    wnorm_p = lp_norm(u, p, weight=weight)
    if wnorm_p <= 0:
        raise InputError("zero field")
    lhs = entropy(u, p, weight=weight)
    op_norm = sobolev_operator_norm(u, a, p, scheme=scheme)
    prefactor = (Q - beta) / (a * p - beta)
    diag = {"boundary_decay": boundary_decay(u), "grid": list(u.grid.points)}

    cval, est, certain = _resolve_constant(constant)
    if cval is None:  # empirical mode: smallest admissible C for this field
        c_min = math.exp(lhs / prefactor) * wnorm_p**p / op_norm**p
        est = ConstantEstimate(c_min, "lower-bound", "empirical-sup")
        rhs = prefactor * math.log(est.value * op_norm**p / wnorm_p**p)
        return _report("log-sobolev-weighted" if beta else "log-sobolev",
                       lhs, rhs, rel_tol, est, False, diag)
    rhs = prefactor * math.log(cval * op_norm**p / wnorm_p**p)
    return _report("log-sobolev-weighted" if beta else "log-sobolev",
                   lhs, rhs, rel_tol, est, certain, diag)


def check_log_sobolev(u: ScalarField, a: float, p: float, constant: ConstantSource,
                      rel_tol: float = STRICT_REL_TOL,
                      scheme: str = "fd") -> VerificationReport:
    """Unweighted log-Sobolev: Ent_p(u) <= (Q/(ap)) log(A ||u||_{H^a}^p/||u||_p^p)."""
    return check_log_sobolev_weighted(u, a, p, 0.0, None, constant,
                                      rel_tol=rel_tol, scheme=scheme)


def check_log_gn(u: ScalarField, a1: float, a2: float, p: float, q: float,
                 constant: ConstantSource,
                 rel_tol: float = STRICT_REL_TOL) -> VerificationReport:
    """Two-operator logarithmic Gagliardo-Nirenberg check (abelian only):
    Ent_p(u) <= (q/(q-p)) log(C^(p/q) ||u||_{H^a1}^e1 ||u||_{H^a2}^e2 / ||u||_p^p)
    with e1 = (Q(q-p) - a2 p q)/((a1-a2) q), e2 = (a1 p q - Q(q-p))/((a1-a2) q).
    """
    g = u.group
    if not g.is_euclidean:
        raise UnsupportedOperationError("two-operator checks are abelian-only")
    if not (a1 > a2 > 0):
        raise InputError(f"need a1 > a2 > 0, got a1={a1}, a2={a2}")
    Q = g.homogeneous_dim
    if not (1 < p and (Q > a1 * p)):
        raise InputError(f"need 1 < p < Q/a1, got p={p}, Q={Q}, a1={a1}")
    lo = Q * p / (Q - a2 * p) if Q > a2 * p else math.inf
    hi = Q * p / (Q - a1 * p)
    if not (lo < q < hi) and not (Q <= a2 * p and p < q < hi):
        raise InputError(f"q={q} outside the admissible window ({lo}, {hi})")

    e1 = (Q * (q - p) - a2 * p * q) / ((a1 - a2) * q)
    e2 = (a1 * p * q - Q * (q - p)) / ((a1 - a2) * q)
    n_p = lp_norm(u, p)
    if n_p <= 0:
        raise InputError("zero field")
    lhs = entropy(u, p)
    h1 = sobolev_operator_norm(u, a1, p)
    h2 = sobolev_operator_norm(u, a2, p)
    ratio = h1**e1 * h2**e2 / n_p**p
    pref = q / (q - p)
    diag = {"norm_exponents": [e1, e2], "boundary_decay": boundary_decay(u)}

    cval, est, certain = _resolve_constant(constant)
    if cval is None:
        c_min = (math.exp(lhs / pref) / ratio) ** (q / p)
        est = ConstantEstimate(c_min, "lower-bound", "empirical-sup")
        rhs = pref * math.log(est.value ** (p / q) * ratio)
        return _report("log-gn", lhs, rhs, rel_tol, est, False, diag)
    rhs = pref * math.log(cval ** (p / q) * ratio)
    return _report("log-gn", lhs, rhs, rel_tol, est, certain, diag)


# ---------------------------------------------------------------------------
# Caffarelli-Kohn-Nirenberg
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CKNParams:
    """Parameters of the weighted interpolation inequality
    || |x|^gamma u ||_q <= C ||R^(a/nu) u||_r^delta || |x|^beta u ||_p^(1-delta)."""

    p: float
    r: float
    q: float
    delta: float
    a: float
    beta: float
    gamma: float

    def validate(self, Q: float) -> None:
        p, r, q, d, a, b, c = (self.p, self.r, self.q, self.delta, self.a,
                               self.beta, self.gamma)
        if not (1 < p < math.inf and 1 < r < math.inf):
            raise InputError("need 1 < p, r < inf")
        if not (0 < d <= 1):
            raise InputError(f"delta must lie in (0, 1], got {d}")
        if not q > p:
            raise InputError(f"need q > p for the entropy step, got q={q}, p={p}")
        if d != 1 and q > p / (1 - d) + 1e-12:
            raise InputError("need q <= p/(1-delta) when delta != 1")
        if not (0 < a * r < Q):
            raise InputError(f"need 0 < a r < Q, got a r = {a * r}")
        if d * q * (Q - a * r - b * r) > r * (Q + q * c - q * b) + 1e-12:
            raise InputError("first CKN balance inequality violated")
        if not (b * (1 - d) - d * a < c <= b * (1 - d) + 1e-15):
            raise InputError(
                f"gamma must lie in (beta(1-delta) - delta a, beta(1-delta)], got {c}"
            )
        bal = d * q * Q / (r * Q) + q * (b * (1 - d) - c - a * d) / Q + q * (1 - d) / p
        if abs(bal - 1.0) > 1e-12:
            raise InputError(f"CKN balance equation violated by {bal - 1.0:.3e}")


def check_log_ckn(u: ScalarField, params: CKNParams, qnorm: QuasiNorm,
                  constant: ConstantSource,
                  rel_tol: float = STRICT_REL_TOL) -> VerificationReport:
    """Logarithmic CKN check (abelian only, fractional operator is spectral)."""
    g = u.group
    if not g.is_euclidean:
        raise UnsupportedOperationError("CKN checks are abelian-only here")
    Q = g.homogeneous_dim
    params.validate(Q)
    wq = WeightSpec(qnorm, params.gamma) if params.gamma != 0 else None
    wb = WeightSpec(qnorm, params.beta) if params.beta != 0 else None
    n_gamma = lp_norm(u, params.p, weight=wq)
    if n_gamma <= 0:
        raise InputError("zero field")
    lhs = entropy(u, params.p, weight=wq)
    n_frac = sobolev_operator_norm(u, params.a, params.r)
    n_beta = lp_norm(u, params.p, weight=wb)
    ratio = (n_frac ** (params.delta * params.p)
             * n_beta ** ((1 - params.delta) * params.p) / n_gamma**params.p)
    pref = params.q / (params.q - params.p)
    diag = {"boundary_decay": boundary_decay(u)}

    cval, est, certain = _resolve_constant(constant)
    if cval is None:
        c_min = math.exp(lhs / pref) / ratio
        est = ConstantEstimate(c_min, "lower-bound", "empirical-sup")
        rhs = pref * math.log(est.value * ratio)
        return _report("log-ckn", lhs, rhs, rel_tol, est, False, diag)
    rhs = pref * math.log(cval * ratio)
    return _report("log-ckn", lhs, rhs, rel_tol, est, certain, diag)


# ---------------------------------------------------------------------------
# Nash
# ---------------------------------------------------------------------------


def check_nash(u: ScalarField, a: float, constant: ConstantSource,
               beta: float = 0.0, qnorm: Optional[QuasiNorm] = None,
               rel_tol: float = STRICT_REL_TOL,
               scheme: str = "fd") -> VerificationReport:
    """Weighted Nash check with w = |x|^(-beta(Q-2a)/(2(Q-beta))):
    ||w u||_2^(2 + theta) <= C ||w u||_1^theta ||u||_{H^a}^2,
    theta = 2(2a - beta)/(Q - beta)."""
    g = u.group
    Q = g.homogeneous_dim
    if beta < 0 or beta >= 2 * a:
        raise InputError(f"need 0 <= beta < 2a, got beta={beta}, a={a}")
    if 2 * a >= Q and not (g.is_euclidean and a == 1 and beta == 0):
        # the Euclidean a=1 case is the classical Nash inequality, valid in
        # every dimension with the same constant chain
        raise InputError(f"need 2a < Q on {g.name} (2a={2 * a}, Q={Q})")
    if beta > 0 and qnorm is None:
        raise InputError("a weighted check needs a quasi-norm")

    theta = 2 * (2 * a - beta) / (Q - beta)
    weight = WeightSpec(qnorm, -beta * (Q - 2 * a) / (2 * (Q - beta))) if beta > 0 else None
    n2 = lp_norm(u, 2.0, weight=weight)
    n1 = lp_norm(u, 1.0, weight=weight)
    if n2 <= 0:
        raise InputError("zero field")
    h = sobolev_operator_norm(u, a, 2.0, scheme=scheme)
    lhs = n2 ** (2 + theta)
    diag = {"exponent": 2 + theta, "boundary_decay": boundary_decay(u)}

    cval, est, certain = _resolve_constant(constant)
    if cval is None:
        c_min = lhs / (n1**theta * h**2)
        est = ConstantEstimate(c_min, "lower-bound", "empirical-sup")
        rhs = est.value * n1**theta * h**2
        return _report("nash-weighted" if beta else "nash",
                       lhs, rhs, rel_tol, est, False, diag)
    rhs = cval * n1**theta * h**2
    return _report("nash-weighted" if beta else "nash",
                   lhs, rhs, rel_tol, est, certain, diag)


# ---------------------------------------------------------------------------
# Gross (semi-Gaussian measure)
# ---------------------------------------------------------------------------

GROSS_NORMALIZATION_TOL = 1e-8


def check_gross(g_field: ScalarField, gamma: Union[float, ConstantEstimate],
                beta: float = 0.0, qnorm: Optional[QuasiNorm] = None,
                rel_tol: float = STRICT_REL_TOL,
                scheme: Optional[str] = None) -> VerificationReport:
    """Semi-Gaussian log-Sobolev check:
    int w^2 |g|^2 log(w |g|) dmu <= int |grad_H g|^2 dmu
    for ||w g||_{L2(mu)} = 1 (renormalized internally otherwise), with
    mu = gamma e^(-|x'|^2/2) dx' (x) dx'' and w = |x|^(-beta(Q-2)/(2(Q-beta))).

    Constant-free once gamma is fixed; if gamma derives from an estimated
    constant, violations report as constant-refined.
    """
    grp = g_field.group
    Q = grp.homogeneous_dim
    certain = not (isinstance(gamma, ConstantEstimate) and gamma.direction != "exact")
    gamma_est = gamma if isinstance(gamma, ConstantEstimate) else None
    gamma_val = gamma.value if isinstance(gamma, ConstantEstimate) else float(gamma)
    if not gamma_val > 0:
        raise InputError(f"need a positive measure normalization, got {gamma_val}")
    if beta < 0 or (beta > 0 and beta >= min(2, Q)):
        raise InputError(f"need 0 <= beta < 2 < Q, got beta={beta}, Q={Q}")
    if beta > 0 and qnorm is None:
        raise InputError("a weighted check needs a quasi-norm")
    if scheme is None:
        scheme = "spectral" if grp.is_euclidean else "fd"

    measure = semi_gaussian(gamma_val)
    weight = WeightSpec(qnorm, -beta * (Q - 2) / (2 * (Q - beta))) if beta > 0 else None
    norm = lp_norm(g_field, 2.0, measure=measure, weight=weight)
    if norm <= 0:
        raise InputError("zero field")
    factor = 1.0
    if abs(norm - 1.0) > GROSS_NORMALIZATION_TOL:
        factor = 1.0 / norm
        g_field = g_field.with_values(g_field.values * factor)
        norm = lp_norm(g_field, 2.0, measure=measure, weight=weight)
        if abs(norm - 1.0) > 1e-6:
            raise InputError(f"normalization failed, ||w g||_L2(mu) = {norm}")

    w = quadrature_weights(g_field.grid)
    dens = measure_density(measure, grp, g_field.grid)
    mod = np.abs(g_field.values)
    wp2 = weight_power_values(weight, grp, g_field.grid, 2.0)
    s = mod**2 * (w * dens) if wp2 is None else mod**2 * wp2 * (w * dens)
    mask = s > 0
    log_wg = np.zeros_like(s)
    if wp2 is None:
        log_wg[mask] = np.log(mod[mask])
    else:
        log_wg[mask] = np.log(mod[mask]) + 0.5 * np.log(wp2[mask])
    lhs = float(np.sum(s * log_wg))
    rhs = gradient_energy(g_field, measure=measure, scheme=scheme)
    tag = "gross-weighted" if beta else "gross"
    diag = {
        "normalization_factor": factor,
        "boundary_decay": boundary_decay(g_field),
        "grid": list(g_field.grid.points),
        "gamma": gamma_val,
    }
    return _report(tag, lhs, rhs, rel_tol, gamma_est, certain, diag)


# ---------------------------------------------------------------------------
# Empirical-sup aggregation
# ---------------------------------------------------------------------------


def empirical_sup(reports: Sequence[VerificationReport]) -> ConstantEstimate:
    """Smallest constant valid across the whole family: sup of the per-field
    minimal constants.  A lower bound on the sharp constant."""
    vals = [r.constant_value for r in reports if r.constant_value is not None]
    if not vals:
        raise InputError("no empirical constants to aggregate")
    return ConstantEstimate(max(vals), "lower-bound", "empirical-sup")
