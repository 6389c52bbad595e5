"""Finite-difference kernel: derivatives, ranks, and linear solves.

Everything downstream measures derivatives through the three stencils in
this module, so conventions are fixed here once: `jacobian` is first-order
central, `mixed_second` is the four-point product stencil taking one
derivative in each argument slot, and all step sizes scale with the
coordinate magnitude in relative mode.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .errors import NonFiniteEvaluation, SingularMatrix

EPS = float(np.finfo(float).eps)
CBRT_EPS = float(EPS ** (1.0 / 3.0))
QUART_EPS = float(EPS ** 0.25)

VectorMap = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DiffConfig:
    """Knobs shared by every numeric routine.

    base_step is the central-difference step; in "relative" mode it is
    scaled per coordinate by max(1, |coordinate|).  sample_radius bounds
    the uniform ball around the identity that sample points are drawn
    from, rank_tol is the singular-value cutoff for numeric ranks, and
    rng_seed makes every sampling routine reproducible.
    """

    step_mode: str = "relative"
    base_step: float = CBRT_EPS
    sample_radius: float = 0.2
    sample_count: int = 20
    rank_tol: float = 1e-8
    rng_seed: int = 42

    def __post_init__(self) -> None:
        if self.step_mode not in ("relative", "absolute"):
            raise ValueError(f"unknown step_mode {self.step_mode!r}")
        if not (0.0 < self.base_step < 1.0):
            raise ValueError("base_step must lie in (0, 1)")
        if self.sample_radius <= 0.0:
            raise ValueError("sample_radius must be positive")
        if self.sample_count < 1:
            raise ValueError("sample_count must be at least 1")
        if not (0.0 < self.rank_tol < 1.0):
            raise ValueError("rank_tol must lie in (0, 1)")

    def replace(self, **kw) -> "DiffConfig":
        from dataclasses import replace as _replace

        return _replace(self, **kw)


def as_finite_array(x, context: str = "evaluation") -> np.ndarray:
    """Coerce to a float array, rejecting NaN/Inf entries."""
    a = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(a)):
        raise NonFiniteEvaluation(f"{context} produced a non-finite value")
    return a


def _steps(cfg: DiffConfig, at: np.ndarray, base: float) -> np.ndarray:
    if cfg.step_mode == "absolute":
        return np.full(at.shape, base)
    return base * np.maximum(1.0, np.abs(at))


def jacobian(f: VectorMap, at: Sequence[float], cfg: DiffConfig | None = None) -> np.ndarray:
    """Central-difference Jacobian of a vector map.

    Returns J with J[K][L] = d f^K / d x^L evaluated at `at`.
    """
    cfg = cfg or DiffConfig()
    x = as_finite_array(at, "jacobian point")
    h = _steps(cfg, x, cfg.base_step)
    cols = []
    for j in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[j] += h[j]
        xm[j] -= h[j]
        fp = np.asarray(f(xp), dtype=float).ravel()
        fm = np.asarray(f(xm), dtype=float).ravel()
        cols.append((fp - fm) / (2.0 * h[j]))
    out = np.column_stack(cols)
    # a NaN or Inf probe always survives the difference, so one check
    # on the assembled matrix covers every evaluation
    if not np.all(np.isfinite(out)):
        raise NonFiniteEvaluation("jacobian probe produced a non-finite value")
    return out


def mixed_second(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    at: tuple[Sequence[float], Sequence[float]],
    cfg: DiffConfig | None = None,
) -> np.ndarray:
    """One derivative in each slot of a two-argument map.

    Returns T with T[K][L][M] = d^2 f^K / d(first)^L d(second)^M via the
    four-point product stencil.  The stencil is second order, so the step
    is widened to at least eps**(1/4); a narrower first-derivative step
    would drown the estimate in roundoff.
    """
    cfg = cfg or DiffConfig()
    a = as_finite_array(at[0], "mixed_second point")
    b = as_finite_array(at[1], "mixed_second point")
    base = cfg.base_step if cfg.step_mode == "absolute" else max(cfg.base_step, QUART_EPS)
    ha = _steps(cfg, a, base)
    hb = _steps(cfg, b, base)
    q = as_finite_array(f(a, b), "mixed_second probe").ravel().size
    p = a.size
    out = np.empty((q, p, p))
    for L in range(p):
        ap = a.copy()
        am = a.copy()
        ap[L] += ha[L]
        am[L] -= ha[L]
        for M in range(p):
            bp = b.copy()
            bm = b.copy()
            bp[M] += hb[M]
            bm[M] -= hb[M]
            fpp = np.asarray(f(ap, bp), dtype=float).ravel()
            fpm = np.asarray(f(ap, bm), dtype=float).ravel()
            fmp = np.asarray(f(am, bp), dtype=float).ravel()
            fmm = np.asarray(f(am, bm), dtype=float).ravel()
            out[:, L, M] = (fpp - fpm - fmp + fmm) / (4.0 * ha[L] * hb[M])
    if not np.all(np.isfinite(out)):
        raise NonFiniteEvaluation("mixed_second probe produced a non-finite value")
    return out


def vf_commutator(
    field_a: VectorMap,
    field_b: VectorMap,
    at: Sequence[float],
    cfg: DiffConfig | None = None,
) -> np.ndarray:
    """Commutator of two vector fields at a point.

    Component form: (J_b a - J_a b) where J is the field Jacobian, which
    is the action of [field_a, field_b] on the coordinate functions.
    """
    cfg = cfg or DiffConfig()
    x = as_finite_array(at, "commutator point")
    ja = jacobian(field_a, x, cfg)
    jb = jacobian(field_b, x, cfg)
    va = as_finite_array(field_a(x), "field value").ravel()
    vb = as_finite_array(field_b(x), "field value").ravel()
    return jb @ va - ja @ vb


def numeric_rank(m, rank_tol: float = 1e-8) -> int:
    """Rank by singular values: count sigma_i > rank_tol * sigma_max."""
    a = as_finite_array(m, "rank input")
    if a.size == 0:
        return 0
    sigma = scipy.linalg.svdvals(np.atleast_2d(a))
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma > rank_tol * sigma[0]))


def invert(m, rank_tol: float = 1e-8) -> np.ndarray:
    """Inverse via row-pivoted elimination.

    Raises SingularMatrix when any pivot falls below rank_tol * max|m|,
    which is the same cutoff numeric_rank uses for its singular values.
    """
    a = as_finite_array(m, "invert input")
    a = np.atleast_2d(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("invert expects a square matrix")
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        raise SingularMatrix("zero matrix")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if np.min(pivots) <= rank_tol * scale:
        raise SingularMatrix(
            f"pivot {np.min(pivots):.3e} below {rank_tol:.1e} * {scale:.3e}"
        )
    return scipy.linalg.lu_solve((lu, piv), np.eye(a.shape[0]), check_finite=False)
