import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from liechart.errors import NonFiniteEvaluation, SingularMatrix
from liechart.numdiff import (
    CBRT_EPS,
    DiffConfig,
    as_finite_array,
    invert,
    jacobian,
    mixed_second,
    numeric_rank,
    vf_commutator,
)

CFG = DiffConfig()


def test_config_defaults():
    assert CFG.step_mode == "relative"
    assert CFG.base_step == pytest.approx(CBRT_EPS)
    assert CFG.rng_seed == 42


def test_config_rejects_bad_values():
    with pytest.raises(ValueError):
        DiffConfig(step_mode="backward")
    with pytest.raises(ValueError):
        DiffConfig(base_step=0.0)
    with pytest.raises(ValueError):
        DiffConfig(sample_radius=-1.0)
    with pytest.raises(ValueError):
        DiffConfig(sample_count=0)


def test_config_replace_returns_modified_copy():
    other = CFG.replace(sample_count=7)
    assert other.sample_count == 7
    assert CFG.sample_count == 20
    assert other.base_step == CFG.base_step


def test_as_finite_array_passes_and_raises():
    out = as_finite_array([1.0, 2.0], "ok")
    assert out.dtype == float
    with pytest.raises(NonFiniteEvaluation):
        as_finite_array([1.0, np.nan], "bad")
    with pytest.raises(NonFiniteEvaluation):
        as_finite_array([np.inf], "bad")


def test_jacobian_linear_map_is_exact_to_roundoff():
    m = np.array([[2.0, -1.0], [0.5, 3.0], [1.0, 1.0]])
    jac = jacobian(lambda x: m @ x, np.array([0.3, -0.7]), CFG)
    assert jac.shape == (3, 2)
    assert np.max(np.abs(jac - m)) < 1e-9


def test_jacobian_quadratic_scalar():
    jac = jacobian(lambda x: np.array([x[0] ** 2]), np.array([1.5]), CFG)
    assert jac[0, 0] == pytest.approx(3.0, abs=1e-8)


def test_jacobian_absolute_step_mode():
    cfg = DiffConfig(step_mode="absolute", base_step=1e-6)
    jac = jacobian(lambda x: np.array([np.sin(x[0])]), np.array([0.4]), cfg)
    assert jac[0, 0] == pytest.approx(np.cos(0.4), abs=1e-7)


def test_jacobian_rejects_nonfinite_probe():
    def f(x):
        with np.errstate(invalid="ignore"):
            return np.array([np.sqrt(x[0])])

    with pytest.raises(NonFiniteEvaluation):
        jacobian(f, np.array([-1.0]), CFG)


def test_mixed_second_scalar_product():
    t = mixed_second(lambda a, b: np.array([a[0] * b[0]]),
                     (np.array([1.0]), np.array([1.0])), CFG)
    assert t.shape == (1, 1, 1)
    assert t[0, 0, 0] == pytest.approx(1.0, abs=1e-6)


def test_mixed_second_affine_law():
    # compose((a1,a2),(b1,b2)) = (a1 b1, a1 b2 + a2); at the identity (1,0)
    # the only nonzero mixed partials are d2/da1 db1 of the first output and
    # d2/da1 db2 of the second, both equal to 1.
    def law(a, b):
        return np.array([a[0] * b[0], a[0] * b[1] + a[1]])

    e = np.array([1.0, 0.0])
    t = mixed_second(law, (e, e), CFG)
    expected = np.zeros((2, 2, 2))
    expected[0, 0, 0] = 1.0
    expected[1, 0, 1] = 1.0
    assert np.max(np.abs(t - expected)) < 1e-6


def test_mixed_second_orders_axes_first_then_second():
    # f(a, b) = a0 * b1 has d2f/da0 db1 = 1 and every other entry zero,
    # pinning T[output][first][second] axis order.
    def f(a, b):
        return np.array([a[0] * b[1]])

    t = mixed_second(f, (np.zeros(2), np.zeros(2)), CFG)
    assert t.shape == (1, 2, 2)
    assert t[0, 0, 1] == pytest.approx(1.0, abs=1e-6)
    assert abs(t[0, 1, 0]) < 1e-6


def test_vf_commutator_linear_fields():
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    b = np.array([[1.0, 0.0], [0.0, -1.0]])
    x = np.array([0.4, 0.9])
    # For fields Ax and Bx the bracket field is (BA - AB) x.
    expected = (b @ a - a @ b) @ x
    got = vf_commutator(lambda p: a @ p, lambda p: b @ p, x, CFG)
    assert np.max(np.abs(got - expected)) < 1e-7


def test_vf_commutator_constant_fields_vanish():
    got = vf_commutator(lambda p: np.array([1.0, 2.0]),
                        lambda p: np.array([-3.0, 0.5]),
                        np.array([0.1, 0.2]), CFG)
    assert np.max(np.abs(got)) < 1e-9


@given(st.lists(st.integers(-3, 3), min_size=8, max_size=8))
def test_vf_commutator_antisymmetry(entries):
    a = np.array(entries[:4], dtype=float).reshape(2, 2)
    b = np.array(entries[4:], dtype=float).reshape(2, 2)
    x = np.array([0.3, -0.2])
    fwd = vf_commutator(lambda p: a @ p, lambda p: b @ p, x, CFG)
    rev = vf_commutator(lambda p: b @ p, lambda p: a @ p, x, CFG)
    assert np.max(np.abs(fwd + rev)) < 1e-6


def test_numeric_rank_examples():
    assert numeric_rank(np.array([[1.0, 2.0], [2.0, 4.0]])) == 1
    assert numeric_rank(np.eye(3)) == 3
    assert numeric_rank(np.zeros((2, 3))) == 0


@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6),
       st.sampled_from([0.5, 2.0, 10.0]))
def test_numeric_rank_scale_and_permutation_invariant(entries, scale):
    m = np.array(entries, dtype=float).reshape(2, 3)
    r = numeric_rank(m)
    assert numeric_rank(scale * m) == r
    assert numeric_rank(m[::-1]) == r


def test_invert_shear():
    out = invert(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert np.max(np.abs(out - np.array([[1.0, -1.0], [0.0, 1.0]]))) < 1e-12


def test_invert_singular_raises():
    with pytest.raises(SingularMatrix):
        invert(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(SingularMatrix):
        invert(np.zeros((2, 2)))


@given(st.lists(st.floats(-1.0, 1.0, allow_nan=False), min_size=9, max_size=9))
def test_invert_roundtrip_well_conditioned(entries):
    m = np.array(entries).reshape(3, 3) + 3.0 * np.eye(3)
    prod = invert(m) @ m
    assert np.max(np.abs(prod - np.eye(3))) < 1e-10
