"""Connections with totally skew-symmetric torsion preserving an HN structure.

A candidate connection is ``nabla'_x y = nabla_x y + 1/2 T(x, y, .)^sharp``
with ``T`` a 3-form; the factor 1/2 makes the torsion of ``nabla'`` equal to
``T^sharp``.  Requiring ``nabla' J_a = 0`` for each preserved ``a`` is linear
in the ``C(n, 3)`` components ``T_ijk`` (``i < j < k``).  Lowered with ``g``,
the condition on basis fields reads

    F_a(X_i, X_j, X_k) + 1/2 T(X_i, J_a X_j, X_k) - 1/2 g(J_a T(X_i, X_j)^sharp, X_k) = 0,

and ``g(J_a w^sharp, z) = (g J_a g^-1)_{kr} w_r``.  Metric preservation is
automatic for a 3-form and is re-checked by :func:`verify_connection`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import HNError
from .linalg import SolutionSet
from .structure import HNStructure, fundamental
from .tensors import Residual, Tensor03, permutation_sign


@dataclass(frozen=True)
class TorsionProblem:
    H: HNStructure
    preserve: frozenset

    def __post_init__(self):
        preserve = frozenset(int(a) for a in self.preserve)
        if not preserve:
            raise ValueError("preserve must name at least one structure")
        if not preserve <= {1, 2, 3}:
            raise ValueError(f"preserve must be a subset of {{1, 2, 3}}, got {sorted(preserve)}")
        object.__setattr__(self, "preserve", preserve)


@dataclass(frozen=True, eq=False)
class TorsionResult:
    status: str
    T: Tensor03 | None
    family_dim: int
    solution: SolutionSet

    @property
    def exists(self) -> bool:
        return self.status != "none"

    def family_basis(self, H: HNStructure) -> list[Tensor03]:
        """3-forms spanning the homogeneous part of the solution set."""
        triples = list(itertools.combinations(range(H.n), 3))
        return [
            Tensor03.from_components(H.frame, dict(zip(triples, v, strict=True)))
            for v in self.solution.nullspace_basis
        ]

    def to_json(self) -> dict:
        out = {"status": self.status, "family_dim": self.family_dim, "T": []}
        if self.T is not None:
            rational = self.T.backend is linalg.RATIONAL
            out["T"] = [
                {"i": i, "j": j, "k": k, "value": str(v) if rational else float(v)}
                for (i, j, k), v in self.T.skew_components().items()
                if v != 0
            ]
        return out


class PreconditionError(HNError, ValueError):
    pass


def _sorted_slot(i, j, k, index):
    """Unknown index and sign for ``T_ijk``, or ``None`` if indices repeat."""
    if i == j or j == k or i == k:
        return None
    key = tuple(sorted((i, j, k)))
    return index[key], permutation_sign(tuple(key.index(v) for v in (i, j, k)))


def torsion_system(P: TorsionProblem):
    """Assemble ``A t = b`` for the skew torsion components ``t``."""
    H = P.H
    n = H.n
    g, g_inv = H.frame.g, H.frame.g_inv
    triples = list(itertools.combinations(range(n), 3))
    index = {t: a for a, t in enumerate(triples)}
    rows, rhs = [], []
    for alpha in sorted(P.preserve):
        m = H.j(alpha).M
        f = fundamental(H, alpha).T.T
        q = g @ m @ g_inv
        for i, j, k in itertools.product(range(n), repeat=3):
            row = linalg.zeros(len(triples), H.backend)
            for p in range(n):
                if m[p, j] != 0:
                    slot = _sorted_slot(i, p, k, index)
                    if slot:
                        row[slot[0]] += slot[1] * m[p, j] / 2
                if q[k, p] != 0:
                    slot = _sorted_slot(i, j, p, index)
                    if slot:
                        row[slot[0]] -= slot[1] * q[k, p] / 2
            rows.append(row)
            rhs.append(-f[i, j, k])
    if not rows:
        return linalg.zeros((0, len(triples)), H.backend), linalg.zeros(0, H.backend), triples
    a = np.array(rows)
    b = linalg.as_array(rhs, H.backend) if H.backend is linalg.RATIONAL else np.array(rhs, dtype=float)
    return a, b, triples


def solve_skew_torsion(P: TorsionProblem) -> TorsionResult:
    """Decide whether a skew-torsion connection preserving ``g`` and ``J_a`` exists."""
    a, b, triples = torsion_system(P)
    sol = linalg.solve_affine(a, b)
    if sol.is_empty:
        return TorsionResult("none", None, 0, sol)
    T = Tensor03.from_components(P.H.frame, dict(zip(triples, sol.particular, strict=True)))
    status = "unique" if sol.dim == 0 else "family"
    return TorsionResult(status, T, sol.dim, sol)


def connection_coefficients(H: HNStructure, T: Tensor03) -> np.ndarray:
    """``Gamma'^k_ij`` of ``nabla + 1/2 T^sharp``."""
    return H.frame.gamma + np.einsum("ijr,rk->ijk", T.T, H.frame.g_inv) / 2


def verify_connection(H: HNStructure, T: Tensor03, preserve) -> list[Residual]:
    """Residuals of skewness, ``nabla' g = 0``, ``nabla' J_a = 0`` and the torsion."""
    if not T.is_3form(max(float(T.max_abs()), H.scale)):
        raise PreconditionError("torsion form must be totally antisymmetric")
    t = T.T
    F = H.frame
    gp = connection_coefficients(H, T)
    low = np.einsum("ijp,pk->ijk", gp, F.g)
    out = [Residual.of("skew(T)", [T.antisymmetry_defect()], H.backend)]
    out.append(Residual.of("nabla'g=0", [low, np.einsum("ikj->ijk", low)]))
    for alpha in sorted(int(a) for a in preserve):
        m = H.j(alpha).M
        out.append(Residual.of(
            f"nabla'J{alpha}=0",
            [np.einsum("ipk,pj->ijk", gp, m), -np.einsum("kp,ijp->ijk", m, gp)],
        ))
    # torsion of nabla' lowered: g(nabla'_i X_j - nabla'_j X_i - [X_i, X_j], X_k) = T_ijk
    c_low = np.einsum("ijp,pk->ijk", F.C, F.g)
    out.append(Residual.of("torsion=T", [low, -np.einsum("jik->ijk", low), -c_low, -t]))
    return out
