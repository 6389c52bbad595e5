"""Structure constants and the differential identities that pin them down.

The central object is the generator tensor: the mixed second derivative
of the composition law at the identity, taken once in each slot.  Its
antisymmetrized part gives the structure constants; the same constants
must reappear when measured away from the identity through the basic
operator fields, in the curl of the inverse operator field (the Maurer
equation), and in commutators of the invariant frame fields.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .group import GroupChart, check_rng, maxabs, psi_flavored, psi_pair, sample_points
from .numdiff import (
    QUART_EPS,
    DiffConfig,
    invert,
    jacobian,
    mixed_second,
    numeric_rank,
    vf_commutator,
)


@dataclass(frozen=True)
class GroupGenerators:
    """Generator tensor of a chart, measured along two routes.

    tensor[K][L][M] is the composition law differentiated once in the
    left slot (index L) and once in the right slot (index M) at the
    identity.  right_tensor[K][L][M] is the derivative of the right
    basic-operator field at the identity, measured by nested first-order
    differences; the two must agree up to a swap of the last two indices.
    """

    chart: GroupChart
    tensor: np.ndarray
    right_tensor: np.ndarray


@dataclass(frozen=True)
class StructureConstants:
    """Antisymmetrized generator tensor, c[U][T][V], for one flavor."""

    c: np.ndarray
    flavor: str


def group_generators(chart: GroupChart, cfg: DiffConfig | None = None) -> GroupGenerators:
    cfg = cfg or DiffConfig()
    e = chart.identity
    tensor = mixed_second(lambda a, b: chart.compose(a, b), (e, e), cfg)
    # Differentiating a field that is itself a finite difference needs a
    # wider outer step, or roundoff from the inner stencil dominates.
    outer = cfg.replace(base_step=max(cfg.base_step, QUART_EPS))
    dpsi = jacobian(lambda a: psi_pair(chart, a, cfg)[1].ravel(), e, outer)
    right_tensor = dpsi.reshape(chart.n, chart.n, chart.n)
    return GroupGenerators(chart, tensor, right_tensor)


def swap_residual(gens: GroupGenerators) -> float:
    """Left- and right-flavor generator tensors agree under index swap."""
    return maxabs(gens.tensor - np.transpose(gens.right_tensor, (0, 2, 1)))


def structure_constants(gens: GroupGenerators, flavor: str = "left") -> StructureConstants:
    t = gens.tensor
    c_left = np.transpose(t, (0, 2, 1)) - t
    if flavor == "left":
        return StructureConstants(c_left, "left")
    if flavor == "right":
        return StructureConstants(-c_left, "right")
    raise ValueError(f"unknown flavor {flavor!r}")


def bracket(constants: StructureConstants, alpha, beta) -> np.ndarray:
    """Algebra bracket of two tangent vectors under the given constants."""
    return np.einsum("utv,t,v->u", constants.c, np.asarray(alpha, float),
                     np.asarray(beta, float))


def antisymmetry_residual(constants: StructureConstants) -> float:
    return maxabs(constants.c + np.transpose(constants.c, (0, 2, 1)))


def jacobi_residual(constants: StructureConstants) -> float:
    """Cyclic contraction that must vanish for any set of constants."""
    c = constants.c
    term = np.einsum("wtv,xwu->tvux", c, c)
    total = term + np.transpose(term, (1, 2, 0, 3)) + np.transpose(term, (2, 0, 1, 3))
    return maxabs(total)


def _field_derivatives(chart: GroupChart, a: np.ndarray, flavor: str,
                       cfg: DiffConfig) -> tuple[np.ndarray, np.ndarray]:
    """Basic operator and its point derivative, (psi, dpsi[K][L][M]).

    Both come from one second-derivative stencil of the composition law,
    evaluated with the non-varying slot pinned at the identity.
    """
    e = chart.identity
    if flavor == "right":
        psi = jacobian(lambda b: chart.compose(a, b), e, cfg)
        t = mixed_second(lambda x, y: chart.compose(x, y), (a, e), cfg)
        dpsi = np.transpose(t, (0, 2, 1))
    elif flavor == "left":
        psi = jacobian(lambda x: chart.compose(x, a), e, cfg)
        t = mixed_second(lambda x, y: chart.compose(x, y), (e, a), cfg)
        dpsi = t
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    return psi, dpsi


def _lam_derivative(psi: np.ndarray, dpsi: np.ndarray, rank_tol: float
                    ) -> tuple[np.ndarray, np.ndarray]:
    """(lam, dlam) from (psi, dpsi) via the inverse-derivative identity."""
    lam = invert(psi, rank_tol)
    dlam = -np.einsum("ur,rsp,sv->uvp", lam, dpsi, lam)
    return lam, dlam


def structure_constants_at_point(chart: GroupChart, a, flavor: str,
                                 cfg: DiffConfig | None = None) -> np.ndarray:
    """Constants measured away from the identity.

    Contracts the curl of the inverse operator field with two copies of
    the basic operator; the result must not depend on the point.
    """
    cfg = cfg or DiffConfig()
    psi, dpsi = _field_derivatives(chart, np.asarray(a, float), flavor, cfg)
    _, dlam = _lam_derivative(psi, dpsi, cfg.rank_tol)
    antis = dlam - np.transpose(dlam, (0, 2, 1))
    return np.einsum("rt,pv,urp->utv", psi, psi, antis)


def constancy_residual(chart: GroupChart, flavor: str, cfg: DiffConfig | None = None,
                       points: int = 5) -> float:
    """Spread of point-measured constants across sampled points."""
    cfg = cfg or DiffConfig()
    rng = check_rng(cfg, f"constancy_{flavor}")
    pts = sample_points(chart, cfg, rng, points)
    base = structure_constants(group_generators(chart, cfg), flavor).c
    worst = 0.0
    for a in pts:
        worst = max(worst, maxabs(structure_constants_at_point(chart, a, flavor, cfg) - base))
    return worst


def maurer_residual(chart: GroupChart, flavor: str, cfg: DiffConfig | None = None,
                    constants: StructureConstants | None = None) -> float:
    """Max violation of the Maurer equation at sampled points.

    The curl of the inverse operator field must equal the structure
    constants contracted with two copies of that field.
    """
    cfg = cfg or DiffConfig()
    if constants is None:
        constants = structure_constants(group_generators(chart, cfg), flavor)
    if constants.flavor != flavor:
        raise ValueError("constants flavor does not match requested flavor")
    rng = check_rng(cfg, f"maurer_{flavor}")
    pts = sample_points(chart, cfg, rng, cfg.sample_count)
    worst = 0.0
    for a in pts:
        psi, dpsi = _field_derivatives(chart, a, flavor, cfg)
        lam, dlam = _lam_derivative(psi, dpsi, cfg.rank_tol)
        curl = dlam - np.transpose(dlam, (0, 2, 1))
        contracted = np.einsum("utv,tp,vr->upr", constants.c, lam, lam)
        worst = max(worst, maxabs(contracted - curl))
    return worst


def invariant_field_commutators(chart: GroupChart, flavor: str,
                                cfg: DiffConfig | None = None,
                                constants: StructureConstants | None = None
                                ) -> tuple[float, int]:
    """Frame-field commutators against the constants, plus the frame rank.

    Returns (max commutator residual, min frame rank over the samples).
    Column V of the basic operator field is the V-th invariant frame
    field; its commutators must reproduce the structure constants with
    the matching flavor, and the frame must stay full rank.
    """
    cfg = cfg or DiffConfig()
    if constants is None:
        constants = structure_constants(group_generators(chart, cfg), flavor)
    if constants.flavor != flavor:
        raise ValueError("constants flavor does not match requested flavor")
    rng = check_rng(cfg, f"field_commutators_{flavor}")
    pts = sample_points(chart, cfg, rng, cfg.sample_count)

    def frame_field(v: int):
        return lambda x: psi_flavored(chart, x, flavor, cfg)[:, v]

    worst = 0.0
    min_rank = chart.n
    for a in pts:
        psi = psi_flavored(chart, a, flavor, cfg)
        min_rank = min(min_rank, numeric_rank(psi, cfg.rank_tol))
        for t in range(chart.n):
            for v in range(t + 1, chart.n):
                measured = vf_commutator(frame_field(t), frame_field(v), a, cfg)
                expected = psi @ constants.c[:, t, v]
                worst = max(worst, maxabs(measured - expected))
    return worst, min_rank
