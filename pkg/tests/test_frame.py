import itertools

import numpy as np
import pytest

from hnstruct import linalg
from hnstruct.errors import (
    DegenerateMetricError,
    DimensionMismatchError,
    FrameMismatchError,
    NotALieAlgebraError,
)
from hnstruct.frame import (
    braces,
    bracket,
    build_lie_frame,
    covariant,
    nabla_endo,
    structure_constants,
)
from hnstruct.instances import (
    example_brackets,
    example_instance,
    neutral_metric,
    standard_quaternion,
)
from hnstruct.tensors import Endo


def example_frame(lambdas=(1, 2, 3, 4), backend="rational"):
    inst = example_instance(lambdas)
    return build_lie_frame(4, linalg.convert(inst.C, backend), linalg.convert(inst.g, backend))


def e(i, n=4):
    v = linalg.zeros(n)
    v[i] = 1
    return v


def brute_jacobi(C):
    n = C.shape[0]

    def br(x, y):
        return sum(x[i] * y[j] * C[i, j] for i in range(n) for j in range(n))

    for i, j, k in itertools.product(range(n), repeat=3):
        x, y, z = e(i, n), e(j, n), e(k, n)
        if any(br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y))):
            return False
    return True


def koszul_oracle(F):
    """Levi-Civita coefficients from torsion-free + metric equations, solved by least squares."""
    n = F.n
    C = np.array(F.C, dtype=float)
    g = np.array(F.g, dtype=float)

    def idx(i, j, k):
        return (i * n + j) * n + k

    rows, rhs = [], []
    for i, j, k in itertools.product(range(n), repeat=3):
        r = np.zeros(n**3)
        r[idx(i, j, k)] += 1
        r[idx(j, i, k)] -= 1
        rows.append(r)
        rhs.append(C[i, j, k])
        r = np.zeros(n**3)
        for p in range(n):
            r[idx(i, j, p)] += g[p, k]
            r[idx(i, k, p)] += g[j, p]
        rows.append(r)
        rhs.append(0.0)
    sol, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    return sol.reshape(n, n, n)


def test_example_brackets_match_table():
    F = example_frame()
    assert list(bracket(F, e(0), e(2))) == [0, 2, 0, 4]
    assert list(bracket(F, e(1), e(3))) == [1, 0, 3, 0]
    assert list(bracket(F, e(2), e(1))) == [2, 0, 0, 3]


def test_bracket_is_antisymmetric(rng):
    F = example_frame((1, "1/2", -3, 2))
    for _ in range(5):
        x = linalg.as_array(rng.integers(-3, 4, 4).tolist())
        y = linalg.as_array(rng.integers(-3, 4, 4).tolist())
        assert not any(bracket(F, x, x))
        assert list(bracket(F, x, y)) == list(-bracket(F, y, x))


@pytest.mark.parametrize("lambdas", [(1, 0, 0, 0), (1, 2, 3, 4), (0, 1, 0, 0), ("-1/2", 3, 0, "5/7")])
def test_example_family_satisfies_jacobi(lambdas):
    assert brute_jacobi(example_frame(lambdas).C)


def test_jacobi_failure_reports_triple():
    C = structure_constants(3, [(0, 1, [0, 0, 1]), (1, 2, [1, 0, 0]), (0, 2, [1, 0, 0])])
    assert not brute_jacobi(C)
    with pytest.raises(NotALieAlgebraError) as info:
        build_lie_frame(3, C, linalg.identity(3))
    assert info.value.triple == (0, 1, 2)


def test_non_antisymmetric_constants_rejected():
    C = linalg.zeros((2, 2, 2))
    C[0, 1, 0] = 1
    with pytest.raises(NotALieAlgebraError):
        build_lie_frame(2, C, linalg.identity(2))


def test_degenerate_metric_rejected():
    g = linalg.as_array([[1, 1], [1, 1]])
    with pytest.raises(DegenerateMetricError):
        build_lie_frame(2, linalg.zeros((2, 2, 2)), g)


def test_shape_mismatch_rejected():
    with pytest.raises(DimensionMismatchError):
        build_lie_frame(4, linalg.zeros((3, 3, 3)), linalg.identity(4))
    with pytest.raises(DimensionMismatchError):
        structure_constants(4, [(0, 1, [1, 0])])
    with pytest.raises(DimensionMismatchError):
        bracket(example_frame(), e(0, 3), e(1))


def test_abelian_frame_has_zero_connection():
    F = build_lie_frame(4, linalg.zeros((4, 4, 4)), neutral_metric(1))
    assert linalg.is_zero(F.gamma)
    assert linalg.is_zero(F.braces_coeffs)
    assert F.left_invariant


def assert_levi_civita(F):
    gamma = F.gamma
    assert linalg.is_zero(gamma - gamma.transpose(1, 0, 2) - F.C)
    low = np.einsum("ijp,pk->ijk", gamma, F.g)
    assert linalg.is_zero(low + np.einsum("ikj->ijk", low))


def test_levi_civita_invariants_on_example_and_random(random_frames):
    for F in [example_frame((1, 0, 0, 0)), example_frame()] + random_frames:
        assert_levi_civita(F)


def test_gamma_matches_independent_solve(random_frames):
    for F in [example_frame((1, 0, 0, 0))] + random_frames[:3]:
        oracle = koszul_oracle(F)
        assert np.allclose(np.array(F.gamma, dtype=float), oracle, atol=1e-9)


def test_braces_from_independent_connection():
    F = example_frame((1, 0, 0, 0))
    oracle = koszul_oracle(F)
    expected = oracle[1, 3] + oracle[3, 1]
    assert np.allclose(np.array(braces(F, e(1), e(3)), dtype=float), expected)


def test_braces_symmetric_and_reconstruct_gamma(rng):
    F = example_frame((2, -1, "1/3", 1))
    for _ in range(5):
        x = linalg.as_array(rng.integers(-3, 4, 4).tolist())
        y = linalg.as_array(rng.integers(-3, 4, 4).tolist())
        assert list(braces(F, x, y)) == list(braces(F, y, x))
    for i, j in itertools.product(range(4), repeat=2):
        half = (braces(F, e(i), e(j)) + bracket(F, e(i), e(j))) / 2
        assert list(half) == list(covariant(F, e(i), e(j)))


def test_float_frame_agrees_with_rational():
    exact = example_frame((1, 2, 3, 4))
    approx = example_frame((1, 2, 3, 4), "float")
    assert approx.backend is linalg.FLOAT
    assert np.allclose(np.array(exact.gamma, dtype=float), approx.gamma)


def nabla_endo_oracle(F, M):
    n = F.n
    out = linalg.zeros((n, n, n))
    for i, j in itertools.product(range(n), repeat=2):
        out[i, j] = covariant(F, e(i, n), M @ e(j, n)) - M @ covariant(F, e(i, n), e(j, n))
    return out


def test_nabla_endo_matches_direct_expansion():
    F = example_frame()
    J2 = Endo(F, standard_quaternion(1)[1])
    d = nabla_endo(F, J2)
    assert not d.is_zero()
    assert np.array_equal(d.S, nabla_endo_oracle(F, J2.M))


def test_nabla_of_identity_vanishes(random_frames):
    for F in random_frames:
        assert nabla_endo(F, Endo.identity(F)).is_zero()


def test_nabla_endo_abelian_vanishes():
    F = build_lie_frame(4, linalg.zeros((4, 4, 4)), neutral_metric(1))
    assert nabla_endo(F, Endo(F, standard_quaternion(1)[0])).is_zero()


def test_nabla_endo_frame_mismatch():
    F1, F2 = example_frame(), example_frame((1, 0, 0, 0))
    with pytest.raises(FrameMismatchError):
        nabla_endo(F1, Endo.identity(F2))


def test_structure_constants_from_table():
    C = structure_constants(4, example_brackets((1, 2, 3, 4)))
    assert C[2, 1, 0] == 2 and C[1, 2, 0] == -2
