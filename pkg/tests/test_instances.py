import numpy as np
import pytest

from hnstruct import instances, linalg
from hnstruct.errors import GeneratorFailure, SingularMatrixError
from hnstruct.frame import bracket
from hnstruct.instances import (
    ALGEBRAS,
    example_g4,
    kaehler_instance,
    random_instance,
    random_lambdas,
    standard_quaternion,
)
from hnstruct.structure import assoc_six


def col(m, j):
    return list(m[:, j])


def test_standard_quaternion_m1():
    J1, J2, J3 = standard_quaternion(1)
    # J1 X1 = X2, J1 X2 = -X1
    assert col(J1, 0) == [0, 1, 0, 0]
    assert col(J1, 1) == [-1, 0, 0, 0]
    # J3 X4 = X1
    assert col(J3, 3) == [1, 0, 0, 0]
    assert col(J2, 0) == [0, 0, 1, 0]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_standard_quaternion_relations(m):
    J1, J2, J3 = standard_quaternion(m)
    I = linalg.identity(4 * m)
    for a, b, c in ((J1, J2, J3), (J2, J3, J1), (J3, J1, J2)):
        assert np.array_equal(b @ c, a)
        assert np.array_equal(c @ b, -a)
        assert np.array_equal(a @ a, -I)


def test_standard_quaternion_rejects_m0():
    with pytest.raises(ValueError):
        standard_quaternion(0)


def test_example_bracket_value():
    H = example_g4((1, 2, 3, 4))
    e = [linalg.identity(4)[i] for i in range(4)]
    assert list(bracket(H.frame, e[2], e[1])) == [2, 0, 0, 3]


def test_zero_lambdas_rejected():
    with pytest.raises(ValueError):
        example_g4((0, 0, 0, 0))
    with pytest.raises(ValueError):
        example_g4((1, 2, 3))


def test_example_float_backend():
    H = example_g4((1, 2, 3, 4), backend="float")
    assert H.backend is linalg.FLOAT


@pytest.mark.parametrize("seed", range(12))
def test_random_instance_is_valid(seed):
    inst = random_instance(seed)
    H = inst.build()
    g = inst.g
    J1, J2, J3 = inst.J
    assert np.array_equal(J1.T @ g @ J1, g)
    assert np.array_equal(J2.T @ g @ J2, -g)
    assert np.array_equal(J3.T @ g @ J3, -g)
    assert linalg.signature(H.frame.g) == (2, 2)
    assert inst.meta["seed"] == seed


def test_random_instance_dim8():
    inst = random_instance(4, m=2)
    H = inst.build()
    assert H.n == 8 and linalg.signature(H.frame.g) == (4, 4)
    assert len(inst.meta["algebras"]) == 2


def test_random_instance_is_deterministic():
    a, b = random_instance(11), random_instance(11)
    assert np.array_equal(a.C, b.C) and np.array_equal(a.g, b.g)
    assert all(np.array_equal(x, y) for x, y in zip(a.J, b.J))
    c = random_instance(12)
    assert not (np.array_equal(a.C, c.C) and np.array_equal(a.g, c.g))


@pytest.mark.parametrize("algebra", ALGEBRAS)
def test_each_curated_algebra_builds(algebra):
    H = random_instance(1, algebra=algebra).build()
    six = assoc_six(H)
    if algebra == "abelian":
        assert six.all_vanish


def test_unknown_algebra():
    with pytest.raises(ValueError):
        random_instance(0, algebra="nope")


def test_generator_failure(monkeypatch):
    def always_singular(rng, n):
        raise SingularMatrixError("forced")

    monkeypatch.setattr(instances, "_random_invertible", always_singular)
    with pytest.raises(GeneratorFailure):
        random_instance(0)


def test_kaehler_instance():
    H = kaehler_instance(2).build()
    assert H.n == 8 and assoc_six(H).all_vanish


def test_random_lambdas_nonzero():
    rng = np.random.default_rng(0)
    for _ in range(20):
        lam = random_lambdas(rng)
        assert len(lam) == 4 and any(lam)
