"""Group charts: composition-law derivatives and the identity check suite.

A group is given concretely as a coordinate chart: a dimension, a smooth
composition law on coordinate vectors, and the identity element.  All
operator fields are measured from the composition law by finite
differences; nothing here assumes a matrix group.

Conventions, fixed once for the whole package:

* the *left* shift Jacobian is the derivative of compose(a, b) in the
  left slot a, the *right* one in the right slot b;
* the basic operator `right` is the right-slot derivative at b = e (its
  column V is the right-invariant frame field), `left` the left-slot
  derivative at a = e; `left_inv`/`right_inv` are their matrix inverses.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NoConvergence, NonFiniteEvaluation, SingularMatrix
from .numdiff import DiffConfig, as_finite_array, invert, jacobian
from .report import CheckRecord, CheckReport

ComposeLaw = Callable[[np.ndarray, np.ndarray], np.ndarray]

_NEWTON_TOL = 1e-12
_NEWTON_MAX_ITER = 50
_DAMPING_FLOOR = 2.0 ** -20


@dataclass(eq=False)
class GroupChart:
    """A Lie group presented as a coordinate chart around its identity."""

    n: int
    compose: ComposeLaw
    identity: np.ndarray
    inverse_hint: Callable[[np.ndarray], np.ndarray] | None = None
    chart_radius: float = 1.0
    name: str = "custom"

    def __post_init__(self) -> None:
        self.identity = as_finite_array(self.identity, "chart identity")
        if self.identity.shape != (self.n,):
            raise ValueError("identity must be an n-vector")
        if self.chart_radius <= 0.0:
            raise ValueError("chart_radius must be positive")


@dataclass(frozen=True)
class ShiftJacobians:
    """Derivatives of compose(a, b) in each slot, evaluated at (a, b)."""

    left: np.ndarray
    right: np.ndarray


@dataclass(frozen=True)
class BasicOperators:
    """Slot derivatives of the composition law at the identity.

    right[K][L] = d compose(a, b)^K / d b^L at b = e, left[K][L] the
    mirror image; the _inv fields are their matrix inverses.
    """

    left: np.ndarray
    right: np.ndarray
    left_inv: np.ndarray
    right_inv: np.ndarray


def check_rng(cfg: DiffConfig, check_id: str) -> np.random.Generator:
    """Independent generator per check, stable across runs and platforms."""
    return np.random.default_rng((cfg.rng_seed % 2**63, zlib.crc32(check_id.encode())))


def maxabs(x) -> float:
    a = np.asarray(x, dtype=float)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def inverse(chart: GroupChart, a, cfg: DiffConfig | None = None) -> np.ndarray:
    """Coordinates of the group inverse of a.

    Uses the chart's closed-form hint when present, otherwise a damped
    Newton iteration on compose(a, x) = e seeded at the identity.
    """
    cfg = cfg or DiffConfig()
    a = as_finite_array(a, "inverse argument")
    e = chart.identity
    if chart.inverse_hint is not None:
        x = as_finite_array(chart.inverse_hint(a), "inverse hint")
        if maxabs(as_finite_array(chart.compose(a, x)) - e) <= 1e-10:
            return x
        # fall through to Newton polish on a sloppy hint
    else:
        x = e.copy()
    for _ in range(_NEWTON_MAX_ITER):
        r = as_finite_array(chart.compose(a, x), "inverse residual") - e
        rn = maxabs(r)
        if rn < _NEWTON_TOL:
            return x
        j = jacobian(lambda y: chart.compose(a, y), x, cfg)
        try:
            delta = np.linalg.solve(j, -r)
        except np.linalg.LinAlgError as exc:
            raise SingularMatrix("inverse Newton hit a singular shift Jacobian") from exc
        t = 1.0
        while t >= _DAMPING_FLOOR:
            xn = x + t * delta
            trial = np.asarray(chart.compose(a, xn), dtype=float)
            if np.all(np.isfinite(trial)) and maxabs(trial - e) < rn:
                x = xn
                break
            t *= 0.5
        else:
            raise NoConvergence("inverse Newton: no damping step improved the residual")
    raise NoConvergence(f"inverse Newton did not converge in {_NEWTON_MAX_ITER} iterations")


def sample_points(
    chart: GroupChart,
    cfg: DiffConfig,
    rng: np.random.Generator,
    count: int | None = None,
) -> np.ndarray:
    """Admissible sample points near the identity.

    Draws uniformly from the inf-norm ball of radius
    min(cfg.sample_radius, chart.chart_radius) and rejects points whose
    inverse fails or escapes the trust region.
    """
    count = count or cfg.sample_count
    radius = min(cfg.sample_radius, chart.chart_radius)
    out = np.empty((count, chart.n))
    got = 0
    attempts = 0
    while got < count:
        attempts += 1
        if attempts > 200 * count:
            raise NoConvergence("sampler rejected too many points; shrink sample_radius")
        a = chart.identity + rng.uniform(-radius, radius, chart.n)
        try:
            inv = inverse(chart, a, cfg)
            as_finite_array(chart.compose(a, inv))
            as_finite_array(chart.compose(inv, a))
        except (SingularMatrix, NoConvergence, NonFiniteEvaluation):
            continue
        if maxabs(inv - chart.identity) > chart.chart_radius:
            continue
        out[got] = a
        got += 1
    return out


def shift_jacobians(chart: GroupChart, a, b, cfg: DiffConfig | None = None) -> ShiftJacobians:
    """Both slot derivatives of the composition law at (a, b)."""
    cfg = cfg or DiffConfig()
    a = as_finite_array(a)
    b = as_finite_array(b)
    return ShiftJacobians(
        left=jacobian(lambda x: chart.compose(x, b), a, cfg),
        right=jacobian(lambda y: chart.compose(a, y), b, cfg),
    )


def _a_left(chart: GroupChart, a, b, cfg: DiffConfig) -> np.ndarray:
    return jacobian(lambda x: chart.compose(x, b), a, cfg)


def _a_right(chart: GroupChart, a, b, cfg: DiffConfig) -> np.ndarray:
    return jacobian(lambda y: chart.compose(a, y), b, cfg)


def psi_flavored(chart: GroupChart, a, flavor: str, cfg: DiffConfig) -> np.ndarray:
    """One basic operator at a: derivative of the named slot at the identity."""
    e = chart.identity
    if flavor == "left":
        return _a_left(chart, e, np.asarray(a, float), cfg)
    if flavor == "right":
        return _a_right(chart, np.asarray(a, float), e, cfg)
    raise ValueError(f"unknown flavor {flavor!r}")


def psi_pair(chart: GroupChart, a, cfg: DiffConfig) -> tuple[np.ndarray, np.ndarray]:
    """(left, right) basic operators at a, without the inverses."""
    a = as_finite_array(a)
    return psi_flavored(chart, a, "left", cfg), psi_flavored(chart, a, "right", cfg)


def basic_operators(chart: GroupChart, a, cfg: DiffConfig | None = None) -> BasicOperators:
    """Basic operators and their inverses at a point of the chart."""
    cfg = cfg or DiffConfig()
    left, right = psi_pair(chart, a, cfg)
    return BasicOperators(
        left=left,
        right=right,
        left_inv=invert(left, cfg.rank_tol),
        right_inv=invert(right, cfg.rank_tol),
    )


def check_chart_axioms(chart: GroupChart, cfg: DiffConfig | None = None,
                       tol_scale: float = 1.0) -> CheckReport:
    """Identity, associativity, inverse and basic-operator sanity checks."""
    cfg = cfg or DiffConfig()
    rpt = CheckReport(suite="chart_axioms", group=chart.name,
                      seed=cfg.rng_seed, fd_step=cfg.base_step)
    e = chart.identity
    eye = np.eye(chart.n)

    def run(check_id: str, arity: int, tol: float, residual) -> None:
        rng = check_rng(cfg, check_id)
        pts = sample_points(chart, cfg, rng, cfg.sample_count * arity)
        worst = 0.0
        for i in range(cfg.sample_count):
            args = [pts[i * arity + k] for k in range(arity)]
            worst = max(worst, residual(*args))
        rpt.add(CheckRecord.from_residual(check_id, worst, tol * tol_scale, cfg.sample_count))

    run("chart_identity_left", 1, 1e-10, lambda a: maxabs(chart.compose(e, a) - a))
    run("chart_identity_right", 1, 1e-10, lambda a: maxabs(chart.compose(a, e) - a))
    run("chart_associativity", 3, 1e-9, lambda a, b, c: maxabs(
        chart.compose(chart.compose(a, b), c) - chart.compose(a, chart.compose(b, c))))
    run("inverse_left", 1, 1e-8, lambda a: maxabs(chart.compose(inverse(chart, a, cfg), a) - e))
    run("inverse_right", 1, 1e-8, lambda a: maxabs(chart.compose(a, inverse(chart, a, cfg)) - e))
    run("inverse_roundtrip", 1, 1e-7, lambda a: maxabs(
        inverse(chart, inverse(chart, a, cfg), cfg) - a))

    ops_e = basic_operators(chart, e, cfg)
    rpt.add(CheckRecord.from_residual(
        "basic_ops_at_identity",
        max(maxabs(ops_e.left - eye), maxabs(ops_e.right - eye)),
        1e-7 * tol_scale, 1))
    return rpt


# --- the composition-law identity suite -----------------------------------
#
# Each entry is (check_id, number of sampled points, residual function).
# Residuals are exact consequences of associativity and the inverse law,
# so every one of them should vanish up to finite-difference error.


def _res_cocycle_left(chart, cfg, a, b, c):
    ab = chart.compose(a, b)
    bc = chart.compose(b, c)
    lhs = _a_left(chart, ab, c, cfg) @ _a_left(chart, a, b, cfg)
    return maxabs(lhs - _a_left(chart, a, bc, cfg))


def _res_cocycle_right(chart, cfg, a, b, c):
    ab = chart.compose(a, b)
    bc = chart.compose(b, c)
    lhs = _a_right(chart, a, bc, cfg) @ _a_right(chart, b, c, cfg)
    return maxabs(lhs - _a_right(chart, ab, c, cfg))


def _res_cocycle_mixed(chart, cfg, a, b, c):
    ab = chart.compose(a, b)
    bc = chart.compose(b, c)
    lhs = _a_right(chart, a, bc, cfg) @ _a_left(chart, b, c, cfg)
    return maxabs(lhs - _a_left(chart, ab, c, cfg) @ _a_right(chart, a, b, cfg))


def _res_inverse_operator_left(chart, cfg, a, b):
    ab = chart.compose(a, b)
    b_inv = inverse(chart, b, cfg)
    lhs = _a_left(chart, ab, b_inv, cfg) @ _a_left(chart, a, b, cfg)
    return maxabs(lhs - np.eye(chart.n))


def _res_inverse_operator_right(chart, cfg, b, c):
    bc = chart.compose(b, c)
    b_inv = inverse(chart, b, cfg)
    lhs = _a_right(chart, b_inv, bc, cfg) @ _a_right(chart, b, c, cfg)
    return maxabs(lhs - np.eye(chart.n))


def _res_lambda_left_closed_form(chart, cfg, a):
    ops = basic_operators(chart, a, cfg)
    return maxabs(ops.left_inv - _a_left(chart, a, inverse(chart, a, cfg), cfg))


def _res_lambda_right_closed_form(chart, cfg, a):
    ops = basic_operators(chart, a, cfg)
    return maxabs(ops.right_inv - _a_right(chart, inverse(chart, a, cfg), a, cfg))


def _res_factorization_left(chart, cfg, a, b):
    ab = chart.compose(a, b)
    psi_l_ab, _ = psi_pair(chart, ab, cfg)
    lam_l_a = invert(psi_pair(chart, a, cfg)[0], cfg.rank_tol)
    return maxabs(_a_left(chart, a, b, cfg) - psi_l_ab @ lam_l_a)


def _res_factorization_right(chart, cfg, a, b):
    ab = chart.compose(a, b)
    _, psi_r_ab = psi_pair(chart, ab, cfg)
    lam_r_b = invert(psi_pair(chart, b, cfg)[1], cfg.rank_tol)
    return maxabs(_a_right(chart, a, b, cfg) - psi_r_ab @ lam_r_b)


def _res_inverse_jacobian_left_route(chart, cfg, a):
    a_inv = inverse(chart, a, cfg)
    j_num = jacobian(lambda x: inverse(chart, x, cfg), a, cfg)
    psi_l_inv, _ = psi_pair(chart, a_inv, cfg)
    lam_r_a = invert(psi_pair(chart, a, cfg)[1], cfg.rank_tol)
    return maxabs(j_num + psi_l_inv @ lam_r_a)


def _res_inverse_jacobian_right_route(chart, cfg, a):
    a_inv = inverse(chart, a, cfg)
    j_num = jacobian(lambda x: inverse(chart, x, cfg), a, cfg)
    _, psi_r_inv = psi_pair(chart, a_inv, cfg)
    lam_l_a = invert(psi_pair(chart, a, cfg)[0], cfg.rank_tol)
    return maxabs(j_num + psi_r_inv @ lam_l_a)


def _res_quotient_left(chart, cfg, a, b):
    j_num = jacobian(lambda x: chart.compose(inverse(chart, x, cfg), b), a, cfg)
    w = chart.compose(inverse(chart, a, cfg), b)
    psi_l_w, _ = psi_pair(chart, w, cfg)
    lam_r_a = invert(psi_pair(chart, a, cfg)[1], cfg.rank_tol)
    return maxabs(j_num + psi_l_w @ lam_r_a)


def _res_quotient_right(chart, cfg, a, b):
    j_num = jacobian(lambda x: chart.compose(b, inverse(chart, x, cfg)), a, cfg)
    w = chart.compose(b, inverse(chart, a, cfg))
    _, psi_r_w = psi_pair(chart, w, cfg)
    lam_l_a = invert(psi_pair(chart, a, cfg)[0], cfg.rank_tol)
    return maxabs(j_num + psi_r_w @ lam_l_a)


def _res_triple_product_left_route(chart, cfg, a, b, c):
    ab = chart.compose(a, b)
    abc = chart.compose(ab, c)
    j_num = jacobian(lambda y: chart.compose(chart.compose(a, y), c), b, cfg)
    psi_l_abc, _ = psi_pair(chart, abc, cfg)
    lam_l_ab = invert(psi_pair(chart, ab, cfg)[0], cfg.rank_tol)
    psi_r_ab = psi_pair(chart, ab, cfg)[1]
    lam_r_b = invert(psi_pair(chart, b, cfg)[1], cfg.rank_tol)
    return maxabs(j_num - psi_l_abc @ lam_l_ab @ psi_r_ab @ lam_r_b)


def _res_triple_product_right_route(chart, cfg, a, b, c):
    bc = chart.compose(b, c)
    abc = chart.compose(a, bc)
    j_num = jacobian(lambda y: chart.compose(chart.compose(a, y), c), b, cfg)
    _, psi_r_abc = psi_pair(chart, abc, cfg)
    lam_r_bc = invert(psi_pair(chart, bc, cfg)[1], cfg.rank_tol)
    psi_l_bc = psi_pair(chart, bc, cfg)[0]
    lam_l_b = invert(psi_pair(chart, b, cfg)[0], cfg.rank_tol)
    return maxabs(j_num - psi_r_abc @ lam_r_bc @ psi_l_bc @ lam_l_b)


def _conjugate(chart, cfg, a, b):
    return chart.compose(chart.compose(a, b), inverse(chart, a, cfg))


def _res_conjugation_outer(chart, cfg, a, b):
    j_num = jacobian(lambda x: _conjugate(chart, cfg, x, b), a, cfg)
    w = _conjugate(chart, cfg, a, b)
    psi_l_w, psi_r_w = psi_pair(chart, w, cfg)
    lam_l_a = invert(psi_pair(chart, a, cfg)[0], cfg.rank_tol)
    return maxabs(j_num - (psi_l_w - psi_r_w) @ lam_l_a)


def _res_conjugation_inner_left(chart, cfg, a, b):
    j_num = jacobian(lambda y: _conjugate(chart, cfg, a, y), b, cfg)
    ab = chart.compose(a, b)
    w = _conjugate(chart, cfg, a, b)
    psi_l_w, _ = psi_pair(chart, w, cfg)
    lam_l_ab = invert(psi_pair(chart, ab, cfg)[0], cfg.rank_tol)
    psi_r_ab = psi_pair(chart, ab, cfg)[1]
    lam_r_b = invert(psi_pair(chart, b, cfg)[1], cfg.rank_tol)
    return maxabs(j_num - psi_l_w @ lam_l_ab @ psi_r_ab @ lam_r_b)


def _res_conjugation_inner_right(chart, cfg, a, b):
    j_num = jacobian(lambda y: _conjugate(chart, cfg, a, y), b, cfg)
    a_inv = inverse(chart, a, cfg)
    ba_inv = chart.compose(b, a_inv)
    w = _conjugate(chart, cfg, a, b)
    _, psi_r_w = psi_pair(chart, w, cfg)
    lam_r_bainv = invert(psi_pair(chart, ba_inv, cfg)[1], cfg.rank_tol)
    psi_l_bainv = psi_pair(chart, ba_inv, cfg)[0]
    lam_l_b = invert(psi_pair(chart, b, cfg)[0], cfg.rank_tol)
    return maxabs(j_num - psi_r_w @ lam_r_bainv @ psi_l_bainv @ lam_l_b)


def _res_adjoint_at_identity(chart, cfg, a):
    j_num = jacobian(lambda y: _conjugate(chart, cfg, a, y), chart.identity, cfg)
    psi_l_a, psi_r_a = psi_pair(chart, a, cfg)
    return maxabs(j_num - invert(psi_l_a, cfg.rank_tol) @ psi_r_a)


def _res_adjoint_flavor_symmetry(chart, cfg, a):
    a_inv = inverse(chart, a, cfg)
    psi_l_a, psi_r_a = psi_pair(chart, a, cfg)
    psi_l_inv, psi_r_inv = psi_pair(chart, a_inv, cfg)
    adj = invert(psi_l_a, cfg.rank_tol) @ psi_r_a
    return maxabs(adj - invert(psi_r_inv, cfg.rank_tol) @ psi_l_inv)


_SHIFT_CHECKS = (
    ("cocycle_left", 3, _res_cocycle_left),
    ("cocycle_right", 3, _res_cocycle_right),
    ("cocycle_mixed", 3, _res_cocycle_mixed),
    ("inverse_operator_left", 2, _res_inverse_operator_left),
    ("inverse_operator_right", 2, _res_inverse_operator_right),
    ("lambda_left_closed_form", 1, _res_lambda_left_closed_form),
    ("lambda_right_closed_form", 1, _res_lambda_right_closed_form),
    ("factorization_left", 2, _res_factorization_left),
    ("factorization_right", 2, _res_factorization_right),
    ("inverse_jacobian_left_route", 1, _res_inverse_jacobian_left_route),
    ("inverse_jacobian_right_route", 1, _res_inverse_jacobian_right_route),
    ("quotient_left", 2, _res_quotient_left),
    ("quotient_right", 2, _res_quotient_right),
    ("triple_product_left_route", 3, _res_triple_product_left_route),
    ("triple_product_right_route", 3, _res_triple_product_right_route),
    ("conjugation_outer", 2, _res_conjugation_outer),
    ("conjugation_inner_left", 2, _res_conjugation_inner_left),
    ("conjugation_inner_right", 2, _res_conjugation_inner_right),
    ("adjoint_at_identity", 1, _res_adjoint_at_identity),
    ("adjoint_flavor_symmetry", 1, _res_adjoint_flavor_symmetry),
)

SHIFT_CHECK_IDS = tuple(cid for cid, _, _ in _SHIFT_CHECKS)

_SHIFT_TOL = 1e-4


def verify_shift_identities(chart: GroupChart, cfg: DiffConfig | None = None,
                            tol_scale: float = 1.0) -> CheckReport:
    """Evaluate every composition-law identity at freshly sampled points.

    Each check draws its own deterministic sample set, so the report is
    reproducible for a fixed seed regardless of check order.
    """
    cfg = cfg or DiffConfig()
    rpt = CheckReport(suite="shift_identities", group=chart.name,
                      seed=cfg.rng_seed, fd_step=cfg.base_step)
    for check_id, arity, fn in _SHIFT_CHECKS:
        rng = check_rng(cfg, check_id)
        pts = sample_points(chart, cfg, rng, cfg.sample_count * arity)
        worst = 0.0
        for i in range(cfg.sample_count):
            args = [pts[i * arity + k] for k in range(arity)]
            worst = max(worst, fn(chart, cfg, *args))
        rpt.add(CheckRecord.from_residual(check_id, worst, _SHIFT_TOL * tol_scale,
                                          cfg.sample_count))
    return rpt
