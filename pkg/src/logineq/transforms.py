"""Executable proof machinery of the Gross equivalence.

The tilt f = gamma^(1/2) e^(-|x'|^2/4) g converts fields between the
semi-Gaussian world (g, measure gamma e^(-|x'|^2/2) dx' (x) dx'') and the
Lebesgue world (f).  The identities checked here:

* norm transfer:        ||g||_L2(mu) = ||f||_L2(dx);
* Dirichlet identity:   int |grad_H g|^2 dmu
                        = int |grad_H f|^2 dx + int (|x'|^2/4)|f|^2 dx - n1/2;
* integration by parts: Re int (d_i f)* x'_i f dx = -1/2 per first-stratum
  coordinate, and the mixed frame terms vanish;
* dilation optimization: min over eps of
  eps^2 E - (Q/2) log eps + (Q/4) log(Q A /(4 e)) equals (Q/4) log(A E).

The two sides of each identity are computed through independent code paths
(different measures and operators) so that the checks are not circular.  The
Lebesgue-side derivatives are spectral (the fields decay hard); the
semi-Gaussian side uses finite differences on g, which decays more slowly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .fields import (
    ScalarField,
    gradient_energy,
    lp_norm,
    quadrature_weights,
    semi_gaussian,
    spectral_partial,
)

NORMALIZATION_TOL = 1e-8


def _first_stratum_square(field: ScalarField) -> np.ndarray:
    mesh = field.grid.mesh()
    return sum(mesh[k] ** 2 for k in range(field.group.first_stratum_dim))


def tilt(g: ScalarField, gamma: float) -> ScalarField:
    """f = gamma^(1/2) e^(-|x'|^2/4) g."""
    if not gamma > 0:
        raise InputError(f"need gamma > 0, got {gamma}")
    s = _first_stratum_square(g)
    return g.with_values(math.sqrt(gamma) * np.exp(-s / 4.0) * g.values)


def untilt(f: ScalarField, gamma: float) -> ScalarField:
    """g = gamma^(-1/2) e^(+|x'|^2/4) f; inverse of tilt."""
    if not gamma > 0:
        raise InputError(f"need gamma > 0, got {gamma}")
    s = _first_stratum_square(f)
    return f.with_values(np.exp(s / 4.0) * f.values / math.sqrt(gamma))


@dataclass(frozen=True)
class TiltPair:
    g: ScalarField
    f: ScalarField
    gamma: float
    norm_residual: float  # | ||g||_L2(mu) - ||f||_L2 |


def make_tilt_pair(g: ScalarField, gamma: float) -> TiltPair:
    f = tilt(g, gamma)
    ng = lp_norm(g, 2.0, measure=semi_gaussian(gamma))
    nf = lp_norm(f, 2.0)
    res = abs(ng - nf)
    if res > NORMALIZATION_TOL * max(1.0, nf):
        raise InputError(f"norm transfer violated by {res}")
    return TiltPair(g=g, f=f, gamma=gamma, norm_residual=res)


def _require_normalized(f: ScalarField) -> None:
    n = lp_norm(f, 2.0)
    if abs(n - 1.0) > NORMALIZATION_TOL:
        raise InputError(f"field must be L2-normalized, got ||f||_2 = {n}")


def dirichlet_identity(f: ScalarField, gamma: float):
    """Both sides of the Dirichlet-form identity for ||f||_2 = 1.

    Left: semi-Gaussian quadrature of |grad_H g|^2 with g = untilt(f).
    Right: Lebesgue quadrature of |grad_H f|^2 + (|x'|^2/4)|f|^2 minus n1/2.
    Returns (lhs, rhs, residual)."""
    _require_normalized(f)
    g = untilt(f, gamma)
    lhs = gradient_energy(g, measure=semi_gaussian(gamma), scheme="fd")
    s = _first_stratum_square(f)
    w = quadrature_weights(f.grid)
    confinement = float(np.sum((s / 4.0) * np.abs(f.values) ** 2 * w))
    rhs = (gradient_energy(f, scheme="spectral") + confinement
           - f.group.first_stratum_dim / 2.0)
    return lhs, rhs, lhs - rhs


def parts_identities(f: ScalarField):
    """Residuals of the two integration-by-parts identities for ||f||_2 = 1.

    first[i]  = Re int (d_{x'_i} f)* x'_i f dx + 1/2          (should be 0)
    mixed[k]  = Re int p(x') (d_{x''_j} f)* x'_i f dx          (should be 0)
    with one mixed entry per frame term (i, j)."""
    _require_normalized(f)
    g = f.group
    grid = f.grid
    mesh = grid.mesh()
    w = quadrature_weights(grid)
    n1 = g.first_stratum_dim
    first = []
    mixed = []
    for i in range(n1):
        df = spectral_partial(f.values, grid.spacings[i], i)
        val = np.sum(np.conj(df) * mesh[i] * f.values * w)
        first.append(float(np.real(val)) + 0.5)
        if g.frame:
            for j, coeff in g.frame[i]:
                dpp = spectral_partial(f.values, grid.spacings[n1 + j], n1 + j)
                m = np.sum(coeff(*mesh) * np.conj(dpp) * mesh[i] * f.values * w)
                mixed.append(float(np.real(m)))
    return np.array(first), np.array(mixed)


@dataclass(frozen=True)
class DilationOptimum:
    eps: float
    bound: float          # minimized right-hand side
    closed_form: float    # (Q/4) log(A E)
    residual: float       # |bound - closed_form|


def optimize_dilation(f_or_energy, A: float, group=None) -> DilationOptimum:
    """Minimize eps^2 E - (Q/2) log eps + (Q/4) log(QA/(4e)) over eps > 0.

    Accepts a normalized field (its horizontal Dirichlet energy is computed
    spectrally on abelian groups, by finite differences otherwise) or a
    pre-computed energy E together with the group.  The closed-form minimizer
    is eps^2 = Q/(4E); plugging it back must reproduce (Q/4) log(A E).
    """
    if isinstance(f_or_energy, ScalarField):
        group = f_or_energy.group
        scheme = "spectral" if group.is_euclidean else "fd"
        E = gradient_energy(f_or_energy, scheme=scheme)
    else:
        if group is None:
            raise InputError("passing a raw energy requires the group")
        E = float(f_or_energy)
    if not E > 0:
        raise InputError("constant fields have no dilation optimum (E = 0)")
    Q = group.homogeneous_dim
    eps = math.sqrt(Q / (4.0 * E))
    bound = eps**2 * E - (Q / 2.0) * math.log(eps) + (Q / 4.0) * math.log(Q * A / (4 * math.e))
    closed = (Q / 4.0) * math.log(A * E)
    return DilationOptimum(eps=eps, bound=bound, closed_form=closed,
                           residual=abs(bound - closed))


def gross_slack_via_lebesgue(f: ScalarField, gamma: float) -> float:
    """The Gross slack of untilt(f), rewritten through the tilt identities:

    slack = int|grad_H f|^2 dx - int |f|^2 log|f| dx - n1/2 + (1/2) log gamma.

    Computed entirely with Lebesgue quadrature on f; comparing it against the
    semi-Gaussian slack of g = untilt(f) closes the equivalence chain
    numerically."""
    _require_normalized(f)
    w = quadrature_weights(f.grid)
    mod = np.abs(f.values)
    s = mod**2 * w
    mask = s > 0
    flogf = float(np.sum(s[mask] * np.log(mod[mask])))
    E = gradient_energy(f, scheme="spectral" if f.group.is_euclidean else "fd")
    return E - flogf - f.group.first_stratum_dim / 2.0 + 0.5 * math.log(gamma)
