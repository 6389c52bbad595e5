"""Built-in charts and representations with closed-form reference data.

Matrix groups are flattened row-major: matrix entry (k, l) of an n-by-n
matrix lands at coordinate index k*n + l, and `vec(A X B) = kron(A, B.T)
vec(X)` under that flattening.  Every oracle below was derived by hand
from the stated composition law before the numeric code existed; the
test suite treats finite differences of the law as the ground truth and
these formulas as the independent second route.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import UnknownEntry
from .group import GroupChart
from .reps import RepChart, direct_sum, tensor_product

MatrixFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class OperatorOracles:
    """Closed forms for the operator fields of a catalog chart."""

    psi_left: MatrixFn
    psi_right: MatrixFn
    lam_left: MatrixFn
    lam_right: MatrixFn
    inverse: Callable[[np.ndarray], np.ndarray]
    generators: np.ndarray          # mixed second derivative of the law at (e, e)
    c_left: np.ndarray              # left-flavor structure constants


@dataclass(frozen=True)
class CatalogEntry:
    chart: GroupChart
    oracles: OperatorOracles


GROUP_NAMES = (
    "translation:1",
    "translation:2",
    "translation:3",
    "multiplicative",
    "affine",
    "gl:1",
    "gl:2",
    "gl:3",
)


def _translation(n: int) -> CatalogEntry:
    chart = GroupChart(
        n=n,
        compose=lambda a, b: a + b,
        identity=np.zeros(n),
        inverse_hint=lambda a: -a,
        chart_radius=1e9,
        name=f"translation:{n}",
    )
    eye = np.eye(n)
    oracles = OperatorOracles(
        psi_left=lambda a: eye.copy(),
        psi_right=lambda a: eye.copy(),
        lam_left=lambda a: eye.copy(),
        lam_right=lambda a: eye.copy(),
        inverse=lambda a: -a,
        generators=np.zeros((n, n, n)),
        c_left=np.zeros((n, n, n)),
    )
    return CatalogEntry(chart, oracles)


def _multiplicative() -> CatalogEntry:
    chart = GroupChart(
        n=1,
        compose=lambda a, b: a * b,
        identity=np.ones(1),
        inverse_hint=lambda a: 1.0 / a,
        chart_radius=2.5,
        name="multiplicative",
    )
    oracles = OperatorOracles(
        psi_left=lambda a: np.array([[a[0]]]),
        psi_right=lambda a: np.array([[a[0]]]),
        lam_left=lambda a: np.array([[1.0 / a[0]]]),
        lam_right=lambda a: np.array([[1.0 / a[0]]]),
        inverse=lambda a: 1.0 / a,
        generators=np.ones((1, 1, 1)),
        c_left=np.zeros((1, 1, 1)),
    )
    return CatalogEntry(chart, oracles)


def _affine_compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # x -> a1*x + a2 composed with x -> b1*x + b2, outer map applied last
    return np.array([a[0] * b[0], a[0] * b[1] + a[1]])


def _affine() -> CatalogEntry:
    chart = GroupChart(
        n=2,
        compose=_affine_compose,
        identity=np.array([1.0, 0.0]),
        inverse_hint=lambda a: np.array([1.0 / a[0], -a[1] / a[0]]),
        chart_radius=0.8,
        name="affine",
    )
    gens = np.zeros((2, 2, 2))
    gens[0, 0, 0] = 1.0      # d2(a1*b1)/da1 db1
    gens[1, 0, 1] = 1.0      # d2(a1*b2 + a2)/da1 db2
    c_left = np.zeros((2, 2, 2))
    c_left[1, 0, 1] = -1.0
    c_left[1, 1, 0] = 1.0
    oracles = OperatorOracles(
        psi_left=lambda a: np.array([[a[0], 0.0], [a[1], 1.0]]),
        psi_right=lambda a: np.array([[a[0], 0.0], [0.0, a[0]]]),
        lam_left=lambda a: np.array([[1.0 / a[0], 0.0], [-a[1] / a[0], 1.0]]),
        lam_right=lambda a: np.array([[1.0 / a[0], 0.0], [0.0, 1.0 / a[0]]]),
        inverse=lambda a: np.array([1.0 / a[0], -a[1] / a[0]]),
        generators=gens,
        c_left=c_left,
    )
    return CatalogEntry(chart, oracles)


def _gl_generators(n: int) -> np.ndarray:
    # d2 (a b)^(k,l) / d a^(i,j) d b^(m,p) = delta(k,i) delta(j,m) delta(p,l)
    d = n * n
    gens = np.zeros((d, d, d))
    for k in range(n):
        for l in range(n):
            for j in range(n):
                gens[k * n + l, k * n + j, j * n + l] = 1.0
    return gens


def _gl_c_left(n: int) -> np.ndarray:
    gens = _gl_generators(n)
    return np.transpose(gens, (0, 2, 1)) - gens


def _gl(n: int) -> CatalogEntry:
    eye = np.eye(n)

    def compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a.reshape(n, n) @ b.reshape(n, n)).ravel()

    chart = GroupChart(
        n=n * n,
        compose=compose,
        identity=eye.ravel().copy(),
        inverse_hint=lambda a: np.linalg.inv(a.reshape(n, n)).ravel(),
        chart_radius=5.0,
        name=f"gl:{n}",
    )
    oracles = OperatorOracles(
        psi_left=lambda a: np.kron(eye, a.reshape(n, n).T),
        psi_right=lambda a: np.kron(a.reshape(n, n), eye),
        lam_left=lambda a: np.kron(eye, np.linalg.inv(a.reshape(n, n)).T),
        lam_right=lambda a: np.kron(np.linalg.inv(a.reshape(n, n)), eye),
        inverse=lambda a: np.linalg.inv(a.reshape(n, n)).ravel(),
        generators=_gl_generators(n),
        c_left=_gl_c_left(n),
    )
    return CatalogEntry(chart, oracles)


@lru_cache(maxsize=None)
def _entry(name: str) -> CatalogEntry:
    if name.startswith("translation:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            raise UnknownEntry(f"bad translation dimension in {name!r}") from None
        if not (1 <= n <= 16):
            raise UnknownEntry(f"translation dimension out of range in {name!r}")
        return _translation(n)
    if name == "multiplicative":
        return _multiplicative()
    if name == "affine":
        return _affine()
    if name.startswith("gl:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            raise UnknownEntry(f"bad matrix dimension in {name!r}") from None
        if not (1 <= n <= 3):
            raise UnknownEntry(f"gl matrix dimension must be 1..3, got {name!r}")
        return _gl(n)
    raise UnknownEntry(f"unknown group {name!r}")


def get_group(name: str) -> GroupChart:
    return _entry(name).chart


def get_oracles(name: str) -> OperatorOracles:
    return _entry(name).oracles


# --- representations -------------------------------------------------------


def _trivial_rep(chart: GroupChart) -> RepChart:
    return RepChart(group=chart, m=1,
                    f=lambda a: np.ones((1, 1)), side="left", name="trivial")


def _gl_standard(chart: GroupChart, n: int) -> RepChart:
    return RepChart(group=chart, m=n,
                    f=lambda a: a.reshape(n, n).copy(), side="left", name="standard")


def _gl_conjugate(chart: GroupChart, n: int) -> RepChart:
    # acts on row vectors by u -> u a^-1, so the order of factors reverses
    return RepChart(group=chart, m=n,
                    f=lambda a: np.linalg.inv(a.reshape(n, n)), side="right",
                    name="conjugate")


def _affine_matrix_rep(chart: GroupChart) -> RepChart:
    def f(a: np.ndarray) -> np.ndarray:
        return np.array([[a[0], a[1]], [0.0, 1.0]])

    return RepChart(group=chart, m=2, f=f, side="left", name="matrix")


def _elementary(m: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((m, m))
    e[i, j] = 1.0
    return e


def _base_rep(group_name: str, rep_name: str) -> tuple[RepChart, list[np.ndarray] | None]:
    chart = get_group(group_name)
    if rep_name == "trivial":
        return _trivial_rep(chart), [np.zeros((1, 1)) for _ in range(chart.n)]
    if group_name.startswith("gl:"):
        n = int(group_name.split(":", 1)[1])
        if rep_name == "standard":
            oracle = [_elementary(n, k, l) for k in range(n) for l in range(n)]
            return _gl_standard(chart, n), oracle
        if rep_name == "conjugate":
            oracle = [-_elementary(n, k, l) for k in range(n) for l in range(n)]
            return _gl_conjugate(chart, n), oracle
    if group_name == "affine" and rep_name == "matrix":
        oracle = [_elementary(2, 0, 0), _elementary(2, 0, 1)]
        return _affine_matrix_rep(chart), oracle
    raise UnknownEntry(f"group {group_name!r} has no representation {rep_name!r}")


def _parse_composite(rep_name: str) -> tuple[str, str, str] | None:
    for prefix in ("tensor:", "sum:"):
        if rep_name.startswith(prefix):
            # split on the first comma only, so the right half may itself
            # be a composite name
            parts = rep_name[len(prefix):].split(",", 1)
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise UnknownEntry(f"{prefix[:-1]} takes two comma-separated names, got {rep_name!r}")
            return prefix[:-1], parts[0].strip(), parts[1].strip()
    return None


def get_rep(group_name: str, rep_name: str) -> RepChart:
    """Look up a representation, assembling tensor/sum composites on demand."""
    composite = _parse_composite(rep_name)
    if composite is None:
        return _base_rep(group_name, rep_name)[0]
    kind, left_name, right_name = composite
    left = get_rep(group_name, left_name)
    right = get_rep(group_name, right_name)
    if kind == "tensor":
        return tensor_product(left, right)
    return direct_sum(left, right)


def rep_generator_oracle(group_name: str, rep_name: str) -> list[np.ndarray] | None:
    """Hand-derived generator matrices, where the catalog knows them."""
    composite = _parse_composite(rep_name)
    if composite is None:
        return _base_rep(group_name, rep_name)[1]
    kind, left_name, right_name = composite
    g1 = rep_generator_oracle(group_name, left_name)
    g2 = rep_generator_oracle(group_name, right_name)
    if g1 is None or g2 is None:
        return None
    if kind == "tensor":
        m1 = g1[0].shape[0]
        m2 = g2[0].shape[0]
        return [np.kron(a, np.eye(m2)) + np.kron(np.eye(m1), b) for a, b in zip(g1, g2)]
    out = []
    for a, b in zip(g1, g2):
        m1 = a.shape[0]
        m2 = b.shape[0]
        block = np.zeros((m1 + m2, m1 + m2))
        block[:m1, :m1] = a
        block[m1:, m1:] = b
        out.append(block)
    return out
