"""Left-invariant frames on Lie groups.

A :class:`LieFrame` is a Lie algebra given by structure constants
``[X_i, X_j] = C^k_{ij} X_k`` together with a constant pseudo-Riemannian
metric ``g_ij``.  Because every field is left-invariant, the derivative terms
``X g(Y, Z)`` of the Koszul formula vanish and the Levi-Civita connection
reduces to

    2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y).

``LieFrame.left_invariant`` records that this reduction is in force.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DegenerateMetricError,
    DimensionMismatchError,
    FrameMismatchError,
    NotALieAlgebraError,
    SingularMatrixError,
)
from .linalg import RATIONAL, Backend
from .tensors import Endo, Tensor12, same_frame


@dataclass(frozen=True, eq=False)
class LieFrame:
    """Structure constants, metric and Levi-Civita coefficients of a frame.

    ``C[i, j, k] = C^k_{ij}``, ``gamma[i, j, k] = Gamma^k_{ij}`` with
    ``nabla_{X_i} X_j = Gamma^k_{ij} X_k``, and ``braces_coeffs`` holds the
    symmetric braces ``{X_i, X_j} = braces_coeffs[i, j, :]``.
    """

    n: int
    C: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    gamma: np.ndarray
    braces_coeffs: np.ndarray
    backend: Backend
    left_invariant: bool = True

    def basis(self, i: int) -> np.ndarray:
        e = linalg.zeros(self.n, self.backend)
        e[i] = 1
        return e

    @property
    def scale(self) -> float:
        """Largest magnitude among the defining data, for float tolerances."""
        return float(max(linalg.max_abs(a)[0] for a in (self.C, self.g, self.g_inv)))


def structure_constants(n: int, brackets, backend=RATIONAL) -> np.ndarray:
    """Dense ``C`` from a list of ``(i, j, [c_0, ..., c_{n-1}])`` with ``[X_i, X_j] = sum c_k X_k``."""
    c = linalg.zeros((n, n, n), backend)
    for i, j, vec in brackets:
        if not (0 <= i < n and 0 <= j < n):
            raise DimensionMismatchError(f"bracket index ({i}, {j}) out of range for n={n}")
        vec = linalg.as_array(vec, backend)
        if vec.shape != (n,):
            raise DimensionMismatchError(f"bracket [{i},{j}] has {vec.shape[0]} components, expected {n}")
        if i == j:
            if not linalg.is_zero(vec):
                raise NotALieAlgebraError(f"[X_{i}, X_{i}] must vanish", (i, i, None))
            continue
        c[i, j] = vec
        c[j, i] = -vec
    return c


def jacobi_violation(C: np.ndarray):
    """First triple ``(i, j, k)`` with ``i < j < k`` violating Jacobi, else ``None``."""
    n = C.shape[0]
    # A[i,j,k,:] = [X_i, [X_j, X_k]]
    a = np.einsum("jkl,ilm->ijkm", C, C)
    jac = a + np.einsum("jkim->ijkm", a) + np.einsum("kijm->ijkm", a)
    scale = float(linalg.max_abs(C)[0]) ** 2
    for i, j, k in itertools.combinations(range(n), 3):
        if not linalg.is_zero(jac[i, j, k], scale):
            return (i, j, k)
    return None


def koszul_gamma(C: np.ndarray, g: np.ndarray, g_inv: np.ndarray) -> np.ndarray:
    cl = np.einsum("ijk,kz->ijz", C, g)
    # g([X_i,X_j],X_z) - g([X_j,X_z],X_i) + g([X_z,X_i],X_j)
    low = (cl - np.einsum("jzi->ijz", cl) + np.einsum("zij->ijz", cl)) / 2
    return np.einsum("ijz,zk->ijk", low, g_inv)


def build_lie_frame(n: int, C, g) -> LieFrame:
    """Validate the algebra and metric and compute the Levi-Civita connection."""
    C = np.asarray(C)
    g = np.asarray(g)
    backend = linalg.backend_of(C, g)
    C = linalg.as_array(C, backend)
    g = linalg.as_array(g, backend)
    if C.shape != (n, n, n) or g.shape != (n, n):
        raise DimensionMismatchError(f"expected C {(n,) * 3} and g {(n, n)}, got {C.shape} and {g.shape}")
    scale = float(linalg.max_abs(C)[0])
    if not linalg.is_zero(C + C.transpose(1, 0, 2), scale):
        _, (i, j, _k) = linalg.max_abs(C + C.transpose(1, 0, 2))
        raise NotALieAlgebraError(f"structure constants not antisymmetric at ({i}, {j})", (i, j, None))
    bad = jacobi_violation(C)
    if bad is not None:
        raise NotALieAlgebraError(f"Jacobi identity fails for triple {bad}", bad)
    if not linalg.is_zero(g - g.T, float(linalg.max_abs(g)[0])):
        raise DimensionMismatchError("metric must be symmetric")
    try:
        g_inv = linalg.mat_inverse(g)
    except SingularMatrixError as exc:
        raise DegenerateMetricError("metric is degenerate") from exc
    gamma = koszul_gamma(C, g, g_inv)
    braces_coeffs = gamma + gamma.transpose(1, 0, 2)
    return LieFrame(n, C, g, g_inv, gamma, braces_coeffs, backend)


def _vec(F: LieFrame, x) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (F.n,):
        raise DimensionMismatchError(f"vector of shape {x.shape} on a {F.n}-dimensional frame")
    linalg.backend_of(x, F.g)
    return x


def bracket(F: LieFrame, x, y) -> np.ndarray:
    return np.einsum("i,j,ijk->k", _vec(F, x), _vec(F, y), F.C)


def braces(F: LieFrame, x, y) -> np.ndarray:
    """Symmetric braces ``{x, y} = nabla_x y + nabla_y x``."""
    return np.einsum("i,j,ijk->k", _vec(F, x), _vec(F, y), F.braces_coeffs)


def covariant(F: LieFrame, x, y) -> np.ndarray:
    """``nabla_x y`` for constant-coefficient fields."""
    return np.einsum("i,j,ijk->k", _vec(F, x), _vec(F, y), F.gamma)


def nabla_endo(F: LieFrame, J: Endo) -> Tensor12:
    """``(nabla_{X_i} J) X_j = nabla_i (J X_j) - J (nabla_i X_j)`` in components."""
    if not same_frame(F, J.frame):
        raise FrameMismatchError("endomorphism belongs to a different frame")
    m = J.M
    d = np.einsum("ipk,pj->ijk", F.gamma, m) - np.einsum("kp,ijp->ijk", m, F.gamma)
    return Tensor12(F, d)
