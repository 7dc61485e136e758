"""Concrete HN-metric structures: the 4-dimensional example family and random instances.

The example family is the Lie algebra with basis ``X_1..X_4`` and

    [X_1,X_3] = l2 X_2 + l4 X_4,   [X_2,X_4] = l1 X_1 + l3 X_3,
    [X_3,X_2] = l2 X_1 + l3 X_4,   [X_4,X_3] = l4 X_1 - l3 X_2,
    [X_4,X_1] = l1 X_2 + l4 X_3,   [X_1,X_2] = l2 X_3 - l1 X_4,

metric ``diag(1, 1, -1, -1)`` and the quaternionic triple returned by
:func:`standard_quaternion`.  Indices in code are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .errors import DegenerateMetricError, GeneratorFailure, SingularMatrixError
from .frame import build_lie_frame, structure_constants
from .linalg import RATIONAL, Backend
from .structure import HNStructure, build_hn

MAX_ATTEMPTS = 100
ENTRY_RANGE = 3

# images of X_1..X_4 under J_1, J_2, J_3 as (target index, sign)
_J_IMAGES = (
    ((1, 1), (0, -1), (3, -1), (2, 1)),
    ((2, 1), (3, 1), (0, -1), (1, -1)),
    ((3, -1), (2, 1), (1, -1), (0, 1)),
)


@dataclass(frozen=True, eq=False)
class Instance:
    """Raw frame data: structure constants, metric and the three ``J`` matrices.

    Generated instances are exact; instances read from float JSON are
    float.  :meth:`build` converts to the requested backend.
    """

    n: int
    C: np.ndarray
    g: np.ndarray
    J: tuple
    meta: dict = field(default_factory=dict, compare=False)

    def build(self, backend=RATIONAL) -> HNStructure:
        backend = Backend(backend)
        frame = build_lie_frame(
            self.n, linalg.convert(self.C, backend), linalg.convert(self.g, backend)
        )
        return build_hn(frame, *(linalg.convert(j, backend) for j in self.J))


def standard_quaternion(m: int, backend=RATIONAL) -> tuple:
    """Block-diagonal quaternionic triple on ``R^{4m}`` (matrices, column action)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    out = []
    for images in _J_IMAGES:
        mat = linalg.zeros((4 * m, 4 * m), backend)
        for block in range(m):
            o = 4 * block
            for j, (k, sign) in enumerate(images):
                mat[o + k, o + j] = sign
        out.append(linalg.as_array(mat, backend))
    return tuple(out)


def neutral_metric(m: int, backend=RATIONAL) -> np.ndarray:
    diag = [1, 1, -1, -1] * m
    return linalg.as_array(np.diag(diag), backend)


def example_brackets(lambdas) -> list:
    l1, l2, l3, l4 = lambdas
    z = 0
    return [
        (0, 2, [z, l2, z, l4]),
        (1, 3, [l1, z, l3, z]),
        (2, 1, [l2, z, z, l3]),
        (3, 2, [l4, -l3, z, z]),
        (3, 0, [z, l1, l4, z]),
        (0, 1, [z, z, l2, -l1]),
    ]


def _lambdas(lambdas) -> tuple:
    vals = tuple(linalg.to_scalar(v, RATIONAL) for v in lambdas)
    if len(vals) != 4:
        raise ValueError(f"expected four lambdas, got {len(vals)}")
    if all(v == 0 for v in vals):
        raise ValueError("lambdas must not all vanish")
    return vals


def example_instance(lambdas=(1, 2, 3, 4)) -> Instance:
    lam = _lambdas(lambdas)
    C = structure_constants(4, example_brackets(lam), RATIONAL)
    return Instance(4, C, neutral_metric(1), standard_quaternion(1),
                    {"source": "example", "lambdas": [str(v) for v in lam]})


def example_g4(lambdas=(1, 2, 3, 4), backend=RATIONAL) -> HNStructure:
    """The validated 4-dimensional example for the given ``(l1, l2, l3, l4) != 0``."""
    return example_instance(lambdas).build(backend)


def kaehler_instance(m: int = 1) -> Instance:
    """Abelian algebra with the standard triple: every fundamental tensor vanishes."""
    n = 4 * m
    return Instance(n, linalg.zeros((n, n, n)), neutral_metric(m), standard_quaternion(m),
                    {"source": "kaehler", "m": m})


# --- curated 4-dimensional Lie algebras -----------------------------------


def _algebra(name: str, rng: np.random.Generator) -> np.ndarray:
    if name == "abelian":
        return structure_constants(4, [])
    if name == "example":
        while True:
            lam = [int(v) for v in rng.integers(-ENTRY_RANGE, ENTRY_RANGE + 1, size=4)]
            if any(lam):
                return structure_constants(4, example_brackets(lam))
    if name == "heisenberg":
        return structure_constants(4, [(0, 1, [0, 0, 1, 0])])
    if name == "su2":
        return structure_constants(4, [(0, 1, [0, 0, 1, 0]), (1, 2, [1, 0, 0, 0]), (2, 0, [0, 1, 0, 0])])
    if name == "aff2":
        return structure_constants(4, [(0, 1, [0, 1, 0, 0]), (2, 3, [0, 0, 0, 1])])
    raise ValueError(f"unknown algebra {name!r}")


ALGEBRAS = ("abelian", "example", "heisenberg", "su2", "aff2")


def block_sum(blocks) -> np.ndarray:
    n = 4 * len(blocks)
    C = linalg.zeros((n, n, n))
    for b, blk in enumerate(blocks):
        o = 4 * b
        C[o:o + 4, o:o + 4, o:o + 4] = blk
    return C


def change_basis(C: np.ndarray, B: np.ndarray, B_inv: np.ndarray) -> np.ndarray:
    """Structure constants in the basis ``Y_i = B^p_i X_p``."""
    t = np.einsum("pi,pqr->iqr", B, C)
    t = np.einsum("qj,iqr->ijr", B, t)
    return np.einsum("kr,ijr->ijk", B_inv, t)


def _random_int_matrix(rng, n, symmetric=False) -> np.ndarray:
    a = rng.integers(-ENTRY_RANGE, ENTRY_RANGE + 1, size=(n, n))
    if symmetric:
        a = np.triu(a) + np.triu(a, 1).T
    return linalg.as_array(a.tolist())


def _random_invertible(rng, n):
    a = _random_int_matrix(rng, n)
    return a, linalg.mat_inverse(a)


def random_instance(seed: int, m: int = 1, algebra: str | None = None, coupled: bool = False) -> Instance:
    """A random HN-metric instance of dimension ``4m``, fully determined by ``seed``.

    ``J_a = A J_a^std A^-1`` for a random integer matrix ``A``; the metric
    ``g = (h + J1^T h J1 - J2^T h J2 - J3^T h J3) / 4`` averages a random
    symmetric ``h`` into an HN-compatible form.  The Lie algebra is a block
    sum of curated 4-dimensional algebras (``algebra`` pins all blocks to one
    name) written in the basis given by an independent random matrix ``B``,
    or by ``A^-1`` when ``coupled`` is set, in which case ``(C, J)`` is just a
    relabelling of the standard pair and only ``g`` is random.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = np.random.default_rng(seed)
    n = 4 * m
    std = standard_quaternion(m)
    for _attempt in range(MAX_ATTEMPTS):
        try:
            A, A_inv = _random_invertible(rng, n)
            names = [algebra or ALGEBRAS[int(rng.integers(len(ALGEBRAS)))] for _ in range(m)]
            C0 = block_sum([_algebra(name, rng) for name in names])
            if coupled:
                B, B_inv = A_inv, A
            else:
                B, B_inv = _random_invertible(rng, n)
        except SingularMatrixError:
            continue
        J = tuple(A @ s @ A_inv for s in std)
        h = _random_int_matrix(rng, n, symmetric=True)
        J1, J2, J3 = J
        g = (h + J1.T @ h @ J1 - J2.T @ h @ J2 - J3.T @ h @ J3) / 4
        try:
            linalg.signature(g)
        except DegenerateMetricError:
            continue
        C = change_basis(C0, B, B_inv)
        meta = {"source": "random", "seed": int(seed), "m": m, "algebras": names, "coupled": coupled}
        return Instance(n, C, g, J, meta)
    raise GeneratorFailure(f"no valid instance for seed {seed} after {MAX_ATTEMPTS} attempts")


def random_hn(seed: int, m: int = 1, backend=RATIONAL, **kwargs) -> HNStructure:
    return random_instance(seed, m, **kwargs).build(backend)


def random_lambdas(rng: np.random.Generator, size: int = 6) -> tuple:
    """Four small random rationals, not all zero."""
    while True:
        lam = tuple(
            Fraction(int(rng.integers(-size, size + 1)), int(rng.integers(1, size + 1)))
            for _ in range(4)
        )
        if any(lam):
            return lam


def random_endo_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    """Integer entries in [-3, 3], exact."""
    return _random_int_matrix(rng, n)
