"""Constants of the logarithmic inequalities.

The chain runs: a Nehari ground-state energy d0 (estimated by minimizing the
projected energy over a parametric family), the sharp Sobolev and
Gagliardo-Nirenberg constants as closed-form maps of d0, and the log-Sobolev
constant A as the minimum over an exponent grid of a power of the GN
constant.  Family minimization over-estimates d0, so every constant derived
from it is a lower bound on the sharp constant; verification policy pads such
estimates with a safety factor and treats residual violations as a signal to
refine the constant, not as a falsification.

Bound-direction bookkeeping lives in ConstantEstimate: "exact" (closed form),
"lower-bound" (on the sharp constant), "upper-bound-on-d0".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import optimize

from .errors import ConsistencyError, InputError
from .families import ParametricFamily
from .fields import GridSpec, ScalarField, lp_norm, sample, sobolev_operator_norm, entropy
from .groups import GroupDescriptor


@dataclass(frozen=True)
class ConstantEstimate:
    value: float
    direction: str  # exact | lower-bound | upper-bound-on-d0
    provenance: str  # closed-form | family-optimized | empirical-sup [+ flags]

    def __post_init__(self):
        if not (self.value > 0 and math.isfinite(self.value)):
            raise InputError(f"constant must be positive and finite, got {self.value}")

    def padded(self, safety: float) -> "ConstantEstimate":
        return replace(self, value=self.value * safety,
                       provenance=self.provenance + f"+safety:{safety:g}")


# ---------------------------------------------------------------------------
# Nehari problem: J(u) = N(u) - ||u||_q^q with N the sum of the two p-th
# power operator norms, I(u) = N(u)/p - ||u||_q^q / q.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NehariProblem:
    group: GroupDescriptor
    p: float
    q: float
    a1: float
    a2: float = 0.0
    scheme: str = "fd"  # gradient scheme when a=1 on a stratified group

    def __post_init__(self):
        if not (self.p > 1 and self.a1 > self.a2 >= 0):
            raise InputError("need p > 1 and a1 > a2 >= 0")
        Q = self.group.homogeneous_dim
        lo = self.p
        if Q > self.a2 * self.p:
            lo = Q * self.p / (Q - self.a2 * self.p)
        if not self.q > lo:
            raise InputError(f"q must exceed {lo} (got q={self.q})")
        if Q > self.a1 * self.p:
            hi = Q * self.p / (Q - self.a1 * self.p)
            if not self.q < hi:
                raise InputError(f"q must be below {hi} (got q={self.q})")
        # with Q <= a1 p the upper endpoint is +infinity

    def operator_energy(self, u: ScalarField) -> float:
        """N(u): sum of the two operator norms to the p-th power."""
        n1 = sobolev_operator_norm(u, self.a1, self.p, scheme=self.scheme)
        n2 = sobolev_operator_norm(u, self.a2, self.p, scheme=self.scheme)
        return n1**self.p + n2**self.p

    def q_mass(self, u: ScalarField) -> float:
        return lp_norm(u, self.q) ** self.q


def nehari_scale(u: ScalarField, prob: NehariProblem) -> float:
    """The unique t > 0 with J(t u) = 0."""
    qq = prob.q_mass(u)
    if qq <= 0:
        raise InputError("cannot project a zero field onto the Nehari manifold")
    return (prob.operator_energy(u) / qq) ** (1.0 / (prob.q - prob.p))


def nehari_energy(u: ScalarField, prob: NehariProblem) -> float:
    """I(t(u) u): the projected energy whose infimum is the ground-state level."""
    t = nehari_scale(u, prob)
    return (1.0 / prob.p - 1.0 / prob.q) * t**prob.q * prob.q_mass(u)


def sobolev_constant_from_energy(d0: float, p: float, q: float) -> float:
    """Best constant of the inhomogeneous Sobolev inequality from the energy
    level: ((p q / (q - p)) d0)^((p - q)/q)."""
    if not d0 > 0:
        raise InputError(f"energy level must be positive, got {d0}")
    return (p * q / (q - p) * d0) ** ((p - q) / q)


def gn_constant_from_energy(d0: float, p: float, q: float, a1: float, a2: float,
                            Q: float) -> float:
    """Best Gagliardo-Nirenberg constant from the ground-state energy level."""
    if not d0 > 0:
        raise InputError(f"energy level must be positive, got {d0}")
    g1 = a1 * p * q - Q * (q - p)
    g2 = Q * (q - p) - a2 * p * q
    if not (g1 > 0 and g2 > 0):
        raise InputError("exponent pair outside the Gagliardo-Nirenberg window")
    lead = (a1 - a2) * p * q / g1
    mid = (g2 / g1) ** ((a2 * p * q - Q * (q - p)) / ((a1 - a2) * p**2))
    tail = (g1 / ((a1 - a2) * (q - p)) * d0) ** ((p - q) / p)
    return lead * mid * tail


def sobolev_quotient(u: ScalarField, prob: NehariProblem,
                     homogeneous: bool = False) -> float:
    """||u||_q^p / N(u); with homogeneous=True, N is the a1-norm alone."""
    if homogeneous:
        denom = sobolev_operator_norm(u, prob.a1, prob.p, scheme=prob.scheme) ** prob.p
    else:
        denom = prob.operator_energy(u)
    return lp_norm(u, prob.q) ** prob.p / denom


PER_FUNCTION_ROUTE_TOL = 1e-10


def per_function_constant(u: ScalarField, prob: NehariProblem) -> ConstantEstimate:
    """The per-function Sobolev constant, cross-checked through two routes.

    Route 1 is the quotient ||u||_q^p / N(u); route 2 maps the projected
    energy I(t(u) u) through the best-constant formula.  They agree as an
    algebraic identity; disagreement means a broken norm implementation.
    """
    quot = sobolev_quotient(u, prob)
    mapped = sobolev_constant_from_energy(nehari_energy(u, prob), prob.p, prob.q)
    rel = abs(quot - mapped) / max(abs(quot), abs(mapped))
    if rel > PER_FUNCTION_ROUTE_TOL:
        raise ConsistencyError(
            f"per-function constant routes disagree: quotient={quot!r}, "
            f"energy-mapped={mapped!r}, rel={rel:.3e}"
        )
    return ConstantEstimate(quot, "lower-bound", "per-function")


# ---------------------------------------------------------------------------
# Family minimization of the ground-state energy
# ---------------------------------------------------------------------------


def _coordinate_descent(fun: Callable[[np.ndarray], float], x0: np.ndarray,
                        bounds, sweeps: int = 6, tol: float = 1e-10):
    """Cyclic coordinate descent with bounded golden-section line searches."""
    x = np.array(x0, dtype=float)
    fx = fun(x)
    converged = False
    for _ in range(sweeps):
        f_prev = fx
        for k in range(len(x)):
            def line(t, k=k):
                xt = x.copy()
                xt[k] = t
                return fun(xt)

            res = optimize.minimize_scalar(line, bounds=bounds[k], method="bounded",
                                           options={"xatol": 1e-9})
            if res.fun < fx:
                x[k] = res.x
                fx = res.fun
        if abs(f_prev - fx) <= tol * max(1.0, abs(fx)):
            converged = True
            break
    return x, fx, converged


def _minimize_energy(prob: NehariProblem, family: ParametricFamily, grid: GridSpec,
                     sweeps: int, x0: Optional[np.ndarray]):
    def fun(params):
        u = sample(prob.group, grid, family.build(params))
        return nehari_energy(u, prob)

    start = family.initial() if x0 is None else np.asarray(x0, dtype=float)
    return _coordinate_descent(fun, start, family.bounds, sweeps=sweeps)


def minimize_nehari_energy(prob: NehariProblem, family: ParametricFamily,
                           grid: GridSpec, sweeps: int = 6,
                           x0: Optional[np.ndarray] = None) -> ConstantEstimate:
    """min over the family of I(t(u) u); an upper bound on the true level."""
    _, val, converged = _minimize_energy(prob, family, grid, sweeps, x0)
    prov = "family-optimized" if converged else "family-optimized+nonconverged"
    return ConstantEstimate(val, "upper-bound-on-d0", prov)


def admissible_q_grid(Q: float, p: float, a: float, count: int = 33,
                      margin: float = 1e-3) -> np.ndarray:
    """Logarithmically spaced exponents strictly inside (p, Qp/(Q-ap))."""
    if not Q > a * p:
        raise InputError("exponent window is empty unless Q > a*p")
    hi = Q * p / (Q - a * p)
    return np.geomspace(p * (1 + margin), hi * (1 - margin), count)


def log_sobolev_constant_from_gn(group: GroupDescriptor, p: float, a: float,
                                 qs: Sequence[float], d0s: Sequence[float],
                                 direction: str = "lower-bound") -> ConstantEstimate:
    """A = min over the q-grid of C_GN(q)^(a p^2 / (Q (q - p)))."""
    if len(qs) == 0 or len(qs) != len(d0s):
        raise InputError("need matching, nonempty q and d0 arrays")
    Q = group.homogeneous_dim
    best = math.inf
    for q, d0 in zip(qs, d0s):
        c = gn_constant_from_energy(d0, p, q, a, 0.0, Q)
        best = min(best, c ** (a * p**2 / (Q * (q - p))))
    return ConstantEstimate(best, direction, "family-optimized")


def estimate_log_sobolev_constant(group: GroupDescriptor, p: float, a: float,
                                  family: ParametricFamily, grid: GridSpec,
                                  q_points: int = 33, sweeps: int = 4) -> ConstantEstimate:
    """Full chain: d0 curve over the q-grid, then the GN-route minimum.

    Warm-starts each exponent from the previous optimum; the result is a
    lower bound on the sharp constant (d0 is over-estimated)."""
    qs = admissible_q_grid(group.homogeneous_dim, p, a, count=q_points)
    d0s = []
    x0 = None
    flagged = False
    for q in qs:
        prob = NehariProblem(group, p, q, a)
        x0, val, converged = _minimize_energy(prob, family, grid, sweeps, x0)
        flagged = flagged or not converged
        d0s.append(val)
    out = log_sobolev_constant_from_gn(group, p, a, qs, d0s)
    if flagged:
        out = replace(out, provenance=out.provenance + "+nonconverged")
    return out


def empirical_log_sobolev_constant(fields: Sequence[ScalarField], p: float,
                                   a: float, scheme: str = "fd") -> ConstantEstimate:
    """sup over the family of the smallest A making the log-Sobolev bound hold:
    A_min(u) = exp(a p Ent_p(u) / Q) ||u||_p^p / ||u||_{H^a}^p."""
    if not fields:
        raise InputError("empty family")
    best = 0.0
    for u in fields:
        Q = u.group.homogeneous_dim
        ent = entropy(u, p)
        num = lp_norm(u, p) ** p
        den = sobolev_operator_norm(u, a, p, scheme=scheme) ** p
        best = max(best, math.exp(a * p * ent / Q) * num / den)
    return ConstantEstimate(best, "lower-bound", "empirical-sup")


# ---------------------------------------------------------------------------
# Closed forms and Gaussian normalizations
# ---------------------------------------------------------------------------


def euclidean_log_sobolev_constant(n: int) -> ConstantEstimate:
    """A = 2 / (pi e n): the classical constant of the L2 log-Sobolev
    inequality on R^n (attained by Gaussians)."""
    return ConstantEstimate(2.0 / (math.pi * math.e * n), "exact", "closed-form")


def euclidean_gaussian_normalization(n: int) -> float:
    return (2 * math.pi) ** (-n / 2)


def gaussian_normalization(Q: float, n1: float, A: float) -> float:
    """Normalization of the first-stratum Gaussian measure in the Gross
    inequality: (Q/4 * e^(2 n1/Q - 1) * A)^(Q/2)."""
    if not (Q >= n1 >= 1 and A > 0):
        raise InputError(f"need Q >= n1 >= 1 and A > 0 (got Q={Q}, n1={n1}, A={A})")
    return (0.25 * Q * math.exp(2 * n1 / Q - 1) * A) ** (Q / 2)


def weighted_gaussian_normalization(Q: float, n1: float, beta: float, C: float,
                                    M: float) -> float:
    """Weighted-measure normalization:
    ((Q-b)/(2(2-b)) * C * e^((n1 + M^2/2)(2-b)/(Q-b) - 1))^((Q-b)/(2-b)).

    At beta = 0 this does NOT reduce to gaussian_normalization: the weighted
    route keeps the extra e^(M^2/Q) factor from splitting the confinement
    term at the unit quasi-sphere.  Both normalizations are valid.
    """
    if beta >= 2:
        raise InputError(
            "beta >= 2 is the logarithmic-Hardy regime and needs different methods"
        )
    if not (0 <= beta < 2 < Q and C > 0 and M > 0):
        raise InputError(f"need 0 <= beta < 2 < Q, C > 0, M > 0 "
                         f"(got beta={beta}, Q={Q}, C={C}, M={M})")
    expo = (n1 + M**2 / 2) * (2 - beta) / (Q - beta) - 1
    inner = (Q - beta) / (2 * (2 - beta)) * C * math.exp(expo)
    return inner ** ((Q - beta) / (2 - beta))


# Safety pad applied to estimated (lower-bound) constants before they are used
# on the right-hand side of an inequality; see the verification policy.
DEFAULT_SAFETY = 1.25
# Numeric quasi-sphere maxima are certified lower bounds; inflate before use.
NORM_BOUND_SAFETY = 1.01
