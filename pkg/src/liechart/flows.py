"""One-parameter subgroups and the canonical coordinate of 1-d charts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LeftChart, ZeroPsi
from .group import GroupChart, check_rng, maxabs, psi_flavored, sample_points
from .numdiff import DiffConfig, as_finite_array, jacobian

_STEPS_PER_UNIT = 1000
_SIMPSON_TOL = 1e-9
_PSI_FLOOR = 1e-12


@dataclass(frozen=True)
class FlowResult:
    """RK4 path of a one-parameter subgroup, one state per step."""

    alpha: np.ndarray
    flavor: str
    t_grid: np.ndarray
    path: np.ndarray

    @property
    def endpoint(self) -> np.ndarray:
        return self.path[-1]


def one_param_subgroup(chart: GroupChart, alpha, t_end: float,
                       steps: int | None = None, flavor: str = "right",
                       cfg: DiffConfig | None = None) -> FlowResult:
    """Integrate the invariant flow c' = psi_flavor(c) alpha from the identity.

    Fixed-step RK4; raises LeftChart as soon as a state escapes the chart
    trust region.
    """
    cfg = cfg or DiffConfig()
    if flavor not in ("left", "right"):
        raise ValueError(f"unknown flavor {flavor!r}")
    alpha = as_finite_array(alpha, "flow direction")
    if alpha.shape != (chart.n,):
        raise ValueError("alpha must be an n-vector")
    if steps is None:
        steps = max(1, math.ceil(_STEPS_PER_UNIT * abs(t_end)))

    def rhs(c: np.ndarray) -> np.ndarray:
        return psi_flavored(chart, c, flavor, cfg) @ alpha

    h = t_end / steps
    path = np.empty((steps + 1, chart.n))
    c = chart.identity.copy()
    path[0] = c
    for i in range(steps):
        k1 = rhs(c)
        k2 = rhs(c + 0.5 * h * k1)
        k3 = rhs(c + 0.5 * h * k2)
        k4 = rhs(c + h * k3)
        c = c + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        c = as_finite_array(c, "flow state")
        if maxabs(c - chart.identity) > chart.chart_radius:
            raise LeftChart(f"flow left the trust region at t = {(i + 1) * h:.6g}")
        path[i + 1] = c
    return FlowResult(alpha=alpha, flavor=flavor,
                      t_grid=np.linspace(0.0, t_end, steps + 1), path=path)


def homomorphism_residual(chart: GroupChart, flow: FlowResult, pairs: int = 10) -> float:
    """Group law along the flow: c(t) c(s) must equal c(t+s).

    Uses stored path states only, so the residual reflects the integrator
    rather than interpolation error.
    """
    steps = flow.path.shape[0] - 1
    if steps < 2:
        return 0.0
    worst = 0.0
    stride = max(1, steps // pairs)
    for i in range(stride, steps, stride):
        j = steps - i
        combined = chart.compose(flow.path[i], flow.path[j])
        worst = max(worst, maxabs(combined - flow.path[steps]))
    return worst


def reparameterization_residual(chart: GroupChart, alpha, cfg: DiffConfig | None = None,
                                t_end: float = 1.0, flavor: str = "right") -> float:
    """Doubling the direction and halving the time lands on the same point."""
    cfg = cfg or DiffConfig()
    alpha = as_finite_array(alpha)
    a = one_param_subgroup(chart, alpha, t_end, flavor=flavor, cfg=cfg)
    b = one_param_subgroup(chart, 2.0 * alpha, t_end / 2.0, flavor=flavor, cfg=cfg)
    return maxabs(a.endpoint - b.endpoint)


def _adaptive_simpson(f, lo: float, hi: float, tol: float) -> float:
    flo, fhi = f(lo), f(hi)
    mid = 0.5 * (lo + hi)
    fmid = f(mid)
    whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(a: float, b: float, fa: float, fm: float, fb: float,
                s: float, eps: float, depth: int) -> float:
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        s_left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        s_right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        if depth >= 50 or abs(s_left + s_right - s) <= 15.0 * eps:
            return s_left + s_right + (s_left + s_right - s) / 15.0
        return (recurse(a, m, fa, flm, fm, s_left, eps / 2.0, depth + 1)
                + recurse(m, b, fm, frm, fb, s_right, eps / 2.0, depth + 1))

    if lo == hi:
        return 0.0
    return recurse(lo, hi, flo, fmid, fhi, whole, tol, 0)


def canonical_coordinate(chart: GroupChart, a, cfg: DiffConfig | None = None) -> float:
    """Additive coordinate of a 1-d chart.

    Integrates the reciprocal of the right basic operator from the
    identity to a; on this coordinate the composition law becomes plain
    addition.  Raises ZeroPsi if the operator vanishes along the way.
    """
    cfg = cfg or DiffConfig()
    if chart.n != 1:
        raise ValueError("canonical_coordinate is defined for 1-d charts only")
    a = as_finite_array(a, "canonical coordinate argument").ravel()
    e = float(chart.identity[0])
    target = float(a[0])

    def psi_at(tau: float) -> float:
        point = np.array([tau])
        return jacobian(lambda b: chart.compose(point, b), chart.identity, cfg)[0, 0]

    # A zero of the operator anywhere on the path makes the integral
    # divergent, so scan for sign changes before paying for quadrature.
    scan = np.array([psi_at(t) for t in np.linspace(e, target, 129)])
    if np.any(np.abs(scan) < _PSI_FLOOR) or np.any(np.sign(scan[:-1]) != np.sign(scan[1:])):
        raise ZeroPsi("basic operator vanishes on the integration path")

    def integrand(tau: float) -> float:
        psi = psi_at(tau)
        if abs(psi) < _PSI_FLOOR:
            raise ZeroPsi(f"basic operator vanished at tau = {tau:.6g}")
        return 1.0 / psi

    return _adaptive_simpson(integrand, e, target, _SIMPSON_TOL)


def additivity_residual(chart: GroupChart, cfg: DiffConfig | None = None) -> float:
    """The canonical coordinate turns composition into addition."""
    cfg = cfg or DiffConfig()
    rng = check_rng(cfg, "canonical_additivity")
    pts = sample_points(chart, cfg, rng, 2 * cfg.sample_count)
    worst = 0.0
    for i in range(cfg.sample_count):
        a, b = pts[2 * i], pts[2 * i + 1]
        lhs = canonical_coordinate(chart, chart.compose(a, b), cfg)
        rhs = canonical_coordinate(chart, a, cfg) + canonical_coordinate(chart, b, cfg)
        worst = max(worst, abs(lhs - rhs))
    return worst
