"""Named test-function families.

A formula is a callable on the coordinate mesh arrays; families are lists of
formulas, generated deterministically from a seed.  The parametric family
used for energy minimization is graded-Gaussian: separate decay rates per
stratum, optionally multiplied by an even polynomial.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InputError
from .groups import GroupDescriptor, dilate_coords


def gaussian(group: GroupDescriptor, alpha: float = 0.5, alpha_rest: float | None = None,
             amplitude: float = 1.0, center: Sequence[float] | None = None):
    """exp(-alpha |x'|^2 - alpha_rest |x''|^2), optionally shifted."""
    if alpha_rest is None:
        alpha_rest = alpha
    n1 = group.first_stratum_dim
    c = np.zeros(group.dim) if center is None else np.asarray(center, dtype=float)

    def formula(*coords):
        s1 = sum((coords[k] - c[k]) ** 2 for k in range(n1))
        s2 = sum((coords[k] - c[k]) ** 2 for k in range(n1, group.dim))
        return amplitude * np.exp(-alpha * s1 - alpha_rest * s2)

    return formula


def gauss_poly(group: GroupDescriptor, alpha: float, poly_coeff: float,
               alpha_rest: float | None = None):
    """Gaussian times the even polynomial (1 + c |x|^2)."""
    base = gaussian(group, alpha, alpha_rest)

    def formula(*coords):
        r2 = sum(c_**2 for c_ in coords)
        return base(*coords) * (1.0 + poly_coeff * r2)

    return formula


def plateau(group: GroupDescriptor, radius: float = 1.5, sharpness: int = 8):
    """Smooth approximation of the indicator of a Euclidean ball."""

    def formula(*coords):
        r2 = sum(c**2 for c in coords) / radius**2
        return np.exp(-(r2**sharpness))

    return formula


def gaussian_mixture(group: GroupDescriptor, rng: np.random.Generator,
                     components: int = 3, sigma_range=(0.9, 1.4),
                     center_range: float = 2.0, amplitude_range=(0.3, 1.0)):
    """Positive mixture of isotropic Gaussians; decays fast on standard boxes."""
    ks = int(rng.integers(1, components + 1))
    params = []
    for _ in range(ks):
        c = rng.uniform(-center_range, center_range, size=group.dim)
        s = rng.uniform(*sigma_range)
        a = rng.uniform(*amplitude_range)
        params.append((c, s, a))

    def formula(*coords):
        out = 0.0
        for c, s, a in params:
            r2 = sum((coords[k] - c[k]) ** 2 for k in range(group.dim))
            out = out + a * np.exp(-r2 / (2 * s**2))
        return out

    return formula


def dilated(formula: Callable, group: GroupDescriptor, lam: float,
            lp_normalized: float | None = None) -> Callable:
    """x -> lam^(Q/p) * formula(dilate(lam, x)); the factor keeps ||.||_p fixed."""
    factor = 1.0 if lp_normalized is None else lam ** (group.homogeneous_dim / lp_normalized)

    def out(*coords):
        return factor * formula(*dilate_coords(group, lam, coords))

    return out


def scaled(formula: Callable, c: float) -> Callable:
    return lambda *coords: c * formula(*coords)


# ---------------------------------------------------------------------------
# Standard families
# ---------------------------------------------------------------------------


def standard_family(group: GroupDescriptor) -> list[Callable]:
    """Smooth, rapidly decaying functions used by default in verifications."""
    fams = [
        gaussian(group, 0.5),
        gaussian(group, 1.0),
        gaussian(group, 0.5, alpha_rest=1.0),
        gaussian(group, 1.5, alpha_rest=0.75),
        gauss_poly(group, 0.75, 0.5),
        gauss_poly(group, 1.0, 0.2),
    ]
    if group.dim <= 3:
        fams.append(plateau(group, radius=1.8, sharpness=6))
    return fams


def mixture_family(group: GroupDescriptor, count: int, seed: int,
                   **kwargs) -> list[Callable]:
    rng = np.random.default_rng(seed)
    return [gaussian_mixture(group, rng, **kwargs) for _ in range(count)]


_FAMILY_BUILDERS = {
    "standard": lambda group, count, seed, **kw: standard_family(group)[: count or None],
    "gaussian_mixture": mixture_family,
}


def make_family(name: str, group: GroupDescriptor, count: int = 0, seed: int = 0,
                **kwargs) -> list[Callable]:
    try:
        builder = _FAMILY_BUILDERS[name]
    except KeyError:
        raise InputError(f"unknown family {name!r}; known: {sorted(_FAMILY_BUILDERS)}")
    return builder(group, count, seed, **kwargs)


def load_family_file(path: str, group: GroupDescriptor) -> list[Callable]:
    """Plain-text family file: one formula per line, ``name key=value ...``."""
    out = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = shlex.split(line)
            name, kwargs = parts[0], {}
            for item in parts[1:]:
                if "=" not in item:
                    raise InputError(f"{path}:{lineno}: expected key=value, got {item!r}")
                k, v = item.split("=", 1)
                kwargs[k] = float(v)
            if name == "gaussian":
                out.append(gaussian(group, **kwargs))
            elif name == "gauss_poly":
                out.append(gauss_poly(group, **kwargs))
            elif name == "plateau":
                kwargs = {k: (int(v) if k == "sharpness" else v) for k, v in kwargs.items()}
                out.append(plateau(group, **kwargs))
            else:
                raise InputError(f"{path}:{lineno}: unknown formula {name!r}")
    if not out:
        raise InputError(f"family file {path} defines no formulas")
    return out


# ---------------------------------------------------------------------------
# Parametric family for energy minimization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParametricFamily:
    """A build(params) -> formula map with box bounds on the parameters."""

    name: str
    bounds: tuple[tuple[float, float], ...]
    build: Callable[[np.ndarray], Callable]

    @property
    def n_params(self) -> int:
        return len(self.bounds)

    def initial(self) -> np.ndarray:
        return np.array([0.5 * (lo + hi) for lo, hi in self.bounds])


def graded_gaussian_family(group: GroupDescriptor,
                           alpha_bounds=(0.08, 4.0)) -> ParametricFamily:
    """Centered Gaussians with one decay rate per stratum (dilation-closed)."""
    r = group.step
    bounds = tuple(alpha_bounds for _ in range(r))
    offsets = np.cumsum([0] + list(group.strata_dims))

    def build(params):
        def formula(*coords):
            expo = 0.0
            for s in range(r):
                block = sum(coords[k] ** 2 for k in range(offsets[s], offsets[s + 1]))
                expo = expo + params[s] * block
            return np.exp(-expo)

        return formula

    return ParametricFamily(name="graded-gaussian", bounds=bounds, build=build)


def graded_gauss_poly_family(group: GroupDescriptor,
                             alpha_bounds=(0.08, 4.0),
                             coeff_bounds=(0.0, 1.5)) -> ParametricFamily:
    """Graded Gaussians times (1 + c |x|^2); superset of the pure family."""
    base = graded_gaussian_family(group, alpha_bounds)
    bounds = base.bounds + (coeff_bounds,)

    def build(params):
        inner = base.build(params[:-1])
        c = params[-1]

        def formula(*coords):
            r2 = sum(cc**2 for cc in coords)
            return inner(*coords) * (1.0 + c * r2)

        return formula

    return ParametricFamily(name="graded-gauss-poly", bounds=bounds, build=build)
