"""Linear representations of a chart group and their generator identities.

A representation is a smooth matrix-valued map f on the chart.  Two
compositions are supported: `side="left"` means f(compose(b, a)) =
f(b) f(a); `side="right"` reverses the matrix product.  The reversed
kind shows up naturally when a representation acts on row vectors, and
every identity below carries a side dispatch because conjugating the
matrices transposes the order of every product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .group import (
    GroupChart,
    basic_operators,
    check_rng,
    inverse,
    maxabs,
    sample_points,
)
from .numdiff import DiffConfig, as_finite_array, invert, jacobian
from .structure import StructureConstants


@dataclass(eq=False)
class RepChart:
    """Matrix representation attached to a group chart."""

    group: GroupChart
    m: int
    f: Callable[[np.ndarray], np.ndarray]
    side: str = "left"
    name: str = "rep"

    def __post_init__(self) -> None:
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        if self.m < 1:
            raise ValueError("representation dimension must be positive")

    def __call__(self, a) -> np.ndarray:
        out = as_finite_array(self.f(np.asarray(a, float)), "representation value")
        if out.shape != (self.m, self.m):
            raise ValueError(f"representation returned shape {out.shape}, "
                             f"expected {(self.m, self.m)}")
        return out


def rep_generators(rep: RepChart, cfg: DiffConfig | None = None) -> list[np.ndarray]:
    """Generator matrices: slot derivatives of f at the identity."""
    cfg = cfg or DiffConfig()
    d = jacobian(lambda a: rep(a).ravel(), rep.group.identity, cfg)
    return [d[:, col].reshape(rep.m, rep.m) for col in range(rep.group.n)]


def rep_axiom_residuals(rep: RepChart, cfg: DiffConfig | None = None
                        ) -> dict[str, float]:
    """Identity, homomorphism and inverse residuals at sampled points."""
    cfg = cfg or DiffConfig()
    chart = rep.group
    out: dict[str, float] = {}
    out["rep_identity"] = maxabs(rep(chart.identity) - np.eye(rep.m))

    rng = check_rng(cfg, "rep_homomorphism")
    pts = sample_points(chart, cfg, rng, 2 * cfg.sample_count)
    worst = 0.0
    for i in range(cfg.sample_count):
        b, a = pts[2 * i], pts[2 * i + 1]
        fa, fb = rep(a), rep(b)
        fab = rep(chart.compose(b, a))
        expected = fb @ fa if rep.side == "left" else fa @ fb
        worst = max(worst, maxabs(fab - expected))
    out["rep_homomorphism"] = worst

    rng = check_rng(cfg, "rep_inverse")
    pts = sample_points(chart, cfg, rng, cfg.sample_count)
    worst = 0.0
    for a in pts:
        worst = max(worst, maxabs(rep(inverse(chart, a, cfg)) - invert(rep(a), cfg.rank_tol)))
    out["rep_inverse"] = worst
    return out


def _pde_expected(rep: RepChart, fa: np.ndarray, gens: list[np.ndarray],
                  lam_left: np.ndarray) -> np.ndarray:
    """Stack of d f / d a^L predicted by the generator equation."""
    n = rep.group.n
    out = np.empty((rep.m, rep.m, n))
    for col in range(n):
        acc = np.zeros((rep.m, rep.m))
        for k in range(n):
            w = lam_left[k, col]
            if rep.side == "left":
                acc += w * (gens[k] @ fa)
            else:
                acc += w * (fa @ gens[k])
        out[:, :, col] = acc
    return out


def rep_pde_residual(rep: RepChart, cfg: DiffConfig | None = None,
                     gens: list[np.ndarray] | None = None) -> dict[str, float]:
    """Residual of the defining differential equation of the representation.

    Map form compares every entry of the slot derivative of f; vector
    form contracts with a random test vector first, which is the shape
    the equation takes when acting on a represented vector.
    """
    cfg = cfg or DiffConfig()
    chart = rep.group
    if gens is None:
        gens = rep_generators(rep, cfg)
    rng = check_rng(cfg, "rep_pde")
    pts = sample_points(chart, cfg, rng, cfg.sample_count)
    vec = rng.uniform(-1.0, 1.0, rep.m)
    worst_map = 0.0
    worst_vec = 0.0
    for a in pts:
        fa = rep(a)
        lam_left = basic_operators(chart, a, cfg).left_inv
        d = jacobian(lambda x: rep(x).ravel(), a, cfg).reshape(rep.m, rep.m, chart.n)
        expected = _pde_expected(rep, fa, gens, lam_left)
        worst_map = max(worst_map, maxabs(d - expected))
        if rep.side == "left":
            dv = jacobian(lambda x: rep(x) @ vec, a, cfg)
            ev = np.stack([expected[:, :, c] @ vec for c in range(chart.n)], axis=1)
        else:
            dv = jacobian(lambda x: vec @ rep(x), a, cfg)
            ev = np.stack([vec @ expected[:, :, c] for c in range(chart.n)], axis=1)
        worst_vec = max(worst_vec, maxabs(dv - ev))
    return {"rep_pde_map": worst_map, "rep_pde_vector": worst_vec}


def integrability_check(gens: list[np.ndarray], constants: StructureConstants,
                        side: str = "left") -> float:
    """Generator commutators against the structure constants.

    This is the compatibility condition that makes the defining equation
    solvable; it is pure matrix algebra once the generators are known.
    The reversed side swaps the lower index order of the constants.
    """
    if constants.flavor != "left":
        raise ValueError("integrability_check expects left-flavor constants")
    c = constants.c
    n = len(gens)
    worst = 0.0
    for k in range(n):
        for p in range(n):
            comm = gens[k] @ gens[p] - gens[p] @ gens[k]
            weights = c[:, p, k] if side == "left" else c[:, k, p]
            expected = sum(weights[t] * gens[t] for t in range(n))
            worst = max(worst, maxabs(comm - expected))
    return worst


def conjugate_rep(rep: RepChart) -> RepChart:
    """Pointwise matrix inverse, acting on the dual side."""
    other = "right" if rep.side == "left" else "left"
    return RepChart(group=rep.group, m=rep.m,
                    f=lambda a: invert(rep(a)),
                    side=other, name=f"conjugate({rep.name})")


def conjugate_generators_check(rep: RepChart, cfg: DiffConfig | None = None) -> float:
    """Generators of the conjugate are the negatives of the originals."""
    cfg = cfg or DiffConfig()
    g1 = rep_generators(rep, cfg)
    g2 = rep_generators(conjugate_rep(rep), cfg)
    return max(maxabs(a + b) for a, b in zip(g1, g2))


def conjugate_pairing_residual(rep: RepChart, cfg: DiffConfig | None = None) -> float:
    """A row vector moved by the conjugate pairs invariantly with a column."""
    cfg = cfg or DiffConfig()
    chart = rep.group
    conj = conjugate_rep(rep)
    rng = check_rng(cfg, "conjugate_pairing")
    pts = sample_points(chart, cfg, rng, cfg.sample_count)
    u = rng.uniform(-1.0, 1.0, rep.m)
    v = rng.uniform(-1.0, 1.0, rep.m)
    base = float(u @ v)
    worst = 0.0
    for a in pts:
        worst = max(worst, abs(float((u @ conj(a)) @ (rep(a) @ v)) - base))
    return worst


def conjugate_involution_residual(rep: RepChart, cfg: DiffConfig | None = None) -> float:
    """Conjugating twice returns the original representation."""
    cfg = cfg or DiffConfig()
    twice = conjugate_rep(conjugate_rep(rep))
    rng = check_rng(cfg, "conjugate_involution")
    pts = sample_points(rep.group, cfg, rng, cfg.sample_count)
    return max(maxabs(twice(a) - rep(a)) for a in pts)


def tensor_product(r1: RepChart, r2: RepChart) -> RepChart:
    """Kronecker product of two representations of the same chart."""
    if r1.group is not r2.group and r1.group.name != r2.group.name:
        raise ValueError("tensor_product needs representations of one group")
    if r1.side != r2.side:
        raise ValueError("tensor_product needs matching sides")
    return RepChart(group=r1.group, m=r1.m * r2.m,
                    f=lambda a: np.kron(r1(a), r2(a)), side=r1.side,
                    name=f"tensor({r1.name},{r2.name})")


def tensor_generators(g1: list[np.ndarray], g2: list[np.ndarray]) -> list[np.ndarray]:
    m1 = g1[0].shape[0]
    m2 = g2[0].shape[0]
    return [np.kron(a, np.eye(m2)) + np.kron(np.eye(m1), b) for a, b in zip(g1, g2)]


def direct_sum(r1: RepChart, r2: RepChart) -> RepChart:
    """Block-diagonal sum of two representations of the same chart."""
    if r1.group is not r2.group and r1.group.name != r2.group.name:
        raise ValueError("direct_sum needs representations of one group")
    if r1.side != r2.side:
        raise ValueError("direct_sum needs matching sides")
    m = r1.m + r2.m

    def f(a: np.ndarray) -> np.ndarray:
        out = np.zeros((m, m))
        out[:r1.m, :r1.m] = r1(a)
        out[r1.m:, r1.m:] = r2(a)
        return out

    return RepChart(group=r1.group, m=m, f=f, side=r1.side,
                    name=f"sum({r1.name},{r2.name})")


def direct_sum_generators(g1: list[np.ndarray], g2: list[np.ndarray]) -> list[np.ndarray]:
    out = []
    for a, b in zip(g1, g2):
        m1 = a.shape[0]
        m2 = b.shape[0]
        block = np.zeros((m1 + m2, m1 + m2))
        block[:m1, :m1] = a
        block[m1:, m1:] = b
        out.append(block)
    return out


def generator_transform(rep: RepChart, g, cfg: DiffConfig | None = None,
                        gens: list[np.ndarray] | None = None) -> list[np.ndarray]:
    """Generators conjugated by f(g) and reweighted by the adjoint matrix.

    The point g enters twice: through the matrix conjugation and through
    the adjoint weight built from the basic operators.  The two effects
    cancel, so the transformed generators must equal the originals at
    every g; on the reversed side the conjugation order flips too.
    """
    cfg = cfg or DiffConfig()
    chart = rep.group
    if gens is None:
        gens = rep_generators(rep, cfg)
    g = np.asarray(g, float)
    ops = basic_operators(chart, g, cfg)
    adjoint = ops.left_inv @ ops.right
    fg = rep(g)
    fg_inv = invert(fg, cfg.rank_tol)
    if rep.side == "left":
        conj = [fg_inv @ gen @ fg for gen in gens]
    else:
        conj = [fg @ gen @ fg_inv for gen in gens]
    out = []
    for p in range(chart.n):
        acc = np.zeros((rep.m, rep.m))
        for k in range(chart.n):
            acc += adjoint[k, p] * conj[k]
        out.append(acc)
    return out


def generator_transform_residual(rep: RepChart, cfg: DiffConfig | None = None,
                                 points: int = 5) -> float:
    """Constancy of the transformed generators across sampled points."""
    cfg = cfg or DiffConfig()
    gens = rep_generators(rep, cfg)
    rng = check_rng(cfg, "generator_transform")
    pts = sample_points(rep.group, cfg, rng, points)
    worst = 0.0
    for g in pts:
        moved = generator_transform(rep, g, cfg, gens)
        worst = max(worst, max(maxabs(a - b) for a, b in zip(moved, gens)))
    return worst


def mixed_identity_residual(rep: RepChart, cfg: DiffConfig | None = None,
                            gens: list[np.ndarray] | None = None) -> float:
    """Both inverse-operator weightings of the defining equation agree.

    The slot derivative of f can be written through either the left or
    the right inverse operator; the generator products swap sides
    between the two forms.
    """
    cfg = cfg or DiffConfig()
    chart = rep.group
    if gens is None:
        gens = rep_generators(rep, cfg)
    rng = check_rng(cfg, "rep_mixed_identity")
    pts = sample_points(chart, cfg, rng, cfg.sample_count)
    worst = 0.0
    for a in pts:
        fa = rep(a)
        ops = basic_operators(chart, a, cfg)
        for col in range(chart.n):
            left_form = np.zeros((rep.m, rep.m))
            right_form = np.zeros((rep.m, rep.m))
            for k in range(chart.n):
                wl = ops.left_inv[k, col]
                wr = ops.right_inv[k, col]
                if rep.side == "left":
                    left_form += wl * (gens[k] @ fa)
                    right_form += wr * (fa @ gens[k])
                else:
                    left_form += wl * (fa @ gens[k])
                    right_form += wr * (gens[k] @ fa)
            worst = max(worst, maxabs(left_form - right_form))
    return worst
