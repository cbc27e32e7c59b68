"""Stratified group structure: products, dilations, strata, quasi-norms.

A group lives on ``R^n`` with coordinates split into strata of dimensions
``(n_1, ..., n_r)``.  The dilation scales stratum ``i`` by ``lambda**i`` and is
a group automorphism; the homogeneous dimension is ``Q = sum(i * n_i)``.
Built-ins are the abelian ``euclidean:n`` (one stratum, vector addition) and
the first Heisenberg group ``heisenberg:1`` with coordinates ``(x, y, t)``,
group law ``(x,y,t)*(x',y',t') = (x+x', y+y', t+t'+(x y' - y x')/2)`` and
horizontal frame ``X = d_x - (y/2) d_t``, ``Y = d_y + (x/2) d_t``.

Points are numpy arrays of shape ``(..., n)``; all operations are pure and
vectorized, so they are safe to call from any number of threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import optimize

from .errors import InputError, OptimizerError

# A frame term (j, coeff) contributes coeff(x') * d/dx''_j to a horizontal
# field; coeff receives the tuple of coordinate arrays of the full mesh.
FrameTerm = tuple[int, Callable[..., np.ndarray]]


@dataclass(frozen=True)
class GroupDescriptor:
    """A stratified group given by its polynomial law and horizontal frame."""

    name: str
    strata_dims: tuple[int, ...]
    product_rule: Callable[[np.ndarray, np.ndarray], np.ndarray]
    inverse_rule: Callable[[np.ndarray], np.ndarray]
    # frame[i] lists the second-and-higher stratum terms of the field X_i;
    # the d/dx'_i term is always present with coefficient 1.
    frame: tuple[tuple[FrameTerm, ...], ...] = field(default=())

    def __post_init__(self):
        if not self.strata_dims or any(d < 1 for d in self.strata_dims):
            raise InputError(f"strata dimensions must be positive, got {self.strata_dims}")
        if self.frame and len(self.frame) != self.strata_dims[0]:
            raise InputError("frame must provide one entry per first-stratum coordinate")

    @property
    def dim(self) -> int:
        return sum(self.strata_dims)

    @property
    def first_stratum_dim(self) -> int:
        return self.strata_dims[0]

    @property
    def step(self) -> int:
        return len(self.strata_dims)

    @property
    def homogeneous_dim(self) -> int:
        return sum((i + 1) * d for i, d in enumerate(self.strata_dims))

    @property
    def dilation_weights(self) -> tuple[int, ...]:
        w = []
        for i, d in enumerate(self.strata_dims):
            w.extend([i + 1] * d)
        return tuple(w)

    @property
    def is_euclidean(self) -> bool:
        return self.step == 1

    def identity(self) -> np.ndarray:
        return np.zeros(self.dim)


def _check_points(g: GroupDescriptor, *points: np.ndarray) -> None:
    for x in points:
        if np.shape(x)[-1] != g.dim:
            raise InputError(
                f"point has {np.shape(x)[-1]} coordinates, group {g.name} needs {g.dim}"
            )


def group_product(g: GroupDescriptor, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Group product a*b, vectorized over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_points(g, a, b)
    return g.product_rule(a, b)


def group_inverse(g: GroupDescriptor, a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    _check_points(g, a)
    return g.inverse_rule(a)


def dilate(g: GroupDescriptor, lam: float, x: np.ndarray) -> np.ndarray:
    """Anisotropic dilation: coordinate in stratum i scales by lam**i."""
    if not lam > 0:
        raise InputError(f"dilation parameter must be positive, got {lam}")
    x = np.asarray(x, dtype=float)
    _check_points(g, x)
    scale = np.array([lam**w for w in g.dilation_weights])
    return x * scale


def dilate_coords(g: GroupDescriptor, lam: float, coords: Sequence[np.ndarray]):
    """Dilation applied to a tuple of per-coordinate arrays (mesh form)."""
    if not lam > 0:
        raise InputError(f"dilation parameter must be positive, got {lam}")
    return tuple(c * lam**w for c, w in zip(coords, g.dilation_weights))


# ---------------------------------------------------------------------------
# Built-in groups
# ---------------------------------------------------------------------------

MAX_EUCLIDEAN_DIM = 8


def make_euclidean(n: int) -> GroupDescriptor:
    if not 1 <= n <= MAX_EUCLIDEAN_DIM:
        raise InputError(f"euclidean group supports 1 <= n <= {MAX_EUCLIDEAN_DIM}, got {n}")
    return GroupDescriptor(
        name=f"euclidean:{n}",
        strata_dims=(n,),
        product_rule=lambda a, b: a + b,
        inverse_rule=lambda a: -a,
    )


def _heis_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = a + b
    out[..., 2] += 0.5 * (a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0])
    return out


def make_heisenberg() -> GroupDescriptor:
    # X = d_x - (y/2) d_t, Y = d_y + (x/2) d_t; matches the chosen law.
    frame = (
        ((0, lambda x, y, t: -0.5 * y),),
        ((0, lambda x, y, t: 0.5 * x),),
    )
    return GroupDescriptor(
        name="heisenberg:1",
        strata_dims=(2, 1),
        product_rule=_heis_product,
        inverse_rule=lambda a: -a,
        frame=frame,
    )


_REGISTRY: dict[str, Callable[[], GroupDescriptor]] = {}


def register_group(name: str, factory: Callable[[], GroupDescriptor]) -> None:
    """Register a third-party group under an experiment-config name."""
    _REGISTRY[name] = factory


def get_group(name: str) -> GroupDescriptor:
    """Resolve a config name like ``euclidean:3`` or ``heisenberg:1``."""
    if name in _REGISTRY:
        return _REGISTRY[name]()
    kind, _, param = name.partition(":")
    if kind == "euclidean":
        return make_euclidean(int(param))
    if kind == "heisenberg":
        if param != "1":
            raise InputError("only heisenberg:1 is built in")
        return make_heisenberg()
    raise InputError(f"unknown group {name!r}")


# ---------------------------------------------------------------------------
# Homogeneous quasi-norms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuasiNorm:
    """A homogeneous quasi-norm: symmetric, 1-homogeneous under dilations,
    vanishing only at the identity."""

    kind: str
    param: float
    evaluator: Callable[..., np.ndarray]

    def __call__(self, *coords: np.ndarray) -> np.ndarray:
        return self.evaluator(*coords)


def euclidean_lp_norm(p: float) -> QuasiNorm:
    """l^p norm on an abelian group, p in [1, inf]."""
    if not (p >= 1 or p == math.inf):
        raise InputError(f"lp norm needs p >= 1, got {p}")

    if p == math.inf:
        def ev(*coords):
            out = abs(np.asarray(coords[0], dtype=float))
            for c in coords[1:]:
                out = np.maximum(out, abs(c))
            return out
    elif p == 2:
        def ev(*coords):
            return np.sqrt(sum(np.asarray(c, dtype=float) ** 2 for c in coords))
    else:
        def ev(*coords):
            return sum(abs(np.asarray(c, dtype=float)) ** p for c in coords) ** (1.0 / p)

    return QuasiNorm(kind="euclidean-lp", param=float(p), evaluator=ev)


def koranyi_norm(group: GroupDescriptor, c: float = 16.0) -> QuasiNorm:
    """Koranyi-type norm (|x'|^4 + c |x''|^2)^(1/4) on a step-2 group, c > 0."""
    if group.step != 2:
        raise InputError("koranyi norm is defined for step-2 groups")
    if not c > 0:
        raise InputError(f"koranyi coefficient must be positive, got {c}")
    n1 = group.first_stratum_dim

    def ev(*coords):
        s1 = sum(np.asarray(coords[k], dtype=float) ** 2 for k in range(n1))
        s2 = sum(np.asarray(coords[k], dtype=float) ** 2 for k in range(n1, group.dim))
        return (s1**2 + c * s2) ** 0.25

    return QuasiNorm(kind="koranyi", param=float(c), evaluator=ev)


def default_quasi_norm(group: GroupDescriptor) -> QuasiNorm:
    return euclidean_lp_norm(2) if group.is_euclidean else koranyi_norm(group)


def quasi_norm_points(qn: QuasiNorm, points: np.ndarray) -> np.ndarray:
    """Evaluate a quasi-norm on points of shape (..., n)."""
    points = np.asarray(points, dtype=float)
    return qn(*(points[..., k] for k in range(points.shape[-1])))


def euclidean_lp_first_stratum_bound(n: int, p: float) -> float:
    """Largest |x|_2 on the l^p unit sphere of R^n: max(n^(1/2 - 1/p), 1)."""
    if p == math.inf:
        return max(math.sqrt(n), 1.0)
    return max(n ** (0.5 - 1.0 / p), 1.0)


def first_stratum_max_ratio(
    g: GroupDescriptor,
    qn: QuasiNorm,
    n_starts: int = 48,
    seed: int = 0,
) -> float:
    """Maximum of the Euclidean first-stratum norm |x'| over the quasi-sphere.

    Found by multi-start Nelder-Mead on directions mapped onto the sphere by
    a dilation; the returned value is a certified lower bound on the true
    maximum (inflate it before using it as an upper bound).
    """
    n = g.dim
    n1 = g.first_stratum_dim
    weights = g.dilation_weights

    def objective(v: np.ndarray) -> float:
        r = float(np.linalg.norm(v))
        if r == 0.0 or not np.isfinite(r):
            return 0.0
        v = v / r
        q = float(quasi_norm_points(qn, v))
        if q <= 0 or not np.isfinite(q):
            return 0.0
        x = v * np.array([(1.0 / q) ** w for w in weights])
        return -float(np.linalg.norm(x[:n1]))

    rng = np.random.default_rng(seed)
    starts = [rng.standard_normal(n) for _ in range(n_starts)]
    starts.extend(np.eye(n))  # axis directions catch lp corners
    best = 0.0
    converged = False
    for v0 in starts:
        res = optimize.minimize(
            objective, v0, method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000},
        )
        if -res.fun > best:
            best = -res.fun
        converged = converged or bool(res.success)
    if not converged or best <= 0:
        raise OptimizerError(
            f"quasi-sphere maximization did not converge (best found {best})", best=best
        )
    return best


# ---------------------------------------------------------------------------
# Axiom checks (used by the test suite and by group registration)
# ---------------------------------------------------------------------------


def verify_quasi_norm_axioms(
    g: GroupDescriptor, qn: QuasiNorm, n_points: int = 10_000, seed: int = 0
) -> dict:
    """Max residuals of symmetry, homogeneity and definiteness on random points."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-3.0, 3.0, size=(n_points, g.dim))
    lams = rng.uniform(0.1, 10.0, size=n_points)
    v = quasi_norm_points(qn, pts)
    v_inv = quasi_norm_points(qn, group_inverse(g, pts))
    scale = np.stack([lams**w for w in g.dilation_weights], axis=-1)
    v_dil = quasi_norm_points(qn, pts * scale)
    sym = np.max(np.abs(v - v_inv) / np.maximum(v, 1e-300))
    hom = np.max(np.abs(v_dil - lams * v) / np.maximum(lams * v, 1e-300))
    ident = float(quasi_norm_points(qn, g.identity()))
    return {"symmetry": float(sym), "homogeneity": float(hom), "at_identity": ident}
