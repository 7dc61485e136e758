"""Almost hypercomplex structures with Hermitian-Norden metrics.

An :class:`HNStructure` is a triple ``(J1, J2, J3)`` of almost complex
structures on a :class:`~hnstruct.frame.LieFrame` with

* ``J_a = J_b J_c = -J_c J_b`` for cyclic ``(a, b, c)`` and ``J_a^2 = -I``;
* ``g(x, y) = eps_a g(J_a x, J_a y)`` with ``eps = (+1, -1, -1)``: ``g`` is
  Hermitian for ``J1`` and Norden for ``J2``, ``J3``.

The verifiers in this module return :class:`~hnstruct.tensors.Residual`
rows labelled with the identity they check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .calculus import (
    assoc_nijenhuis_pair,
    barwedge_left,
    barwedge_right,
    nijenhuis_pair,
)
from .errors import (
    CompatibilityViolation,
    DegenerateMetricError,
    DimensionMismatchError,
    FrameMismatchError,
    G1PredicateDisagreement,
    QuaternionicViolation,
    SignatureViolation,
    StructureError,
    Theorem36Inconsistency,
)
from .frame import LieFrame, nabla_endo
from .tensors import Endo, Residual, Tensor03, Tensor12, require_same_frame, same_frame

EPS = (1, -1, -1)
CYCLIC = ((1, 2, 3), (2, 3, 1), (3, 1, 2))
PAIRS = ((1, 1), (2, 2), (3, 3), (1, 2), (2, 3), (3, 1))


def pair_label(a: int, b: int) -> str:
    return f"{{J{a},J{b}}}"


@dataclass(frozen=True)
class Violation:
    kind: str
    relation: str
    index: tuple | None = None

    def __str__(self):
        where = f" at {self.index}" if self.index is not None else ""
        return f"{self.kind}: {self.relation}{where}"


@dataclass(frozen=True, eq=False)
class HNStructure:
    frame: LieFrame
    J: tuple
    eps: tuple = EPS

    @property
    def n(self) -> int:
        return self.frame.n

    @property
    def backend(self):
        return self.frame.backend

    def j(self, alpha: int) -> Endo:
        """``J_alpha`` with 1-based ``alpha``."""
        return self.J[alpha - 1]

    def epsilon(self, alpha: int) -> int:
        return self.eps[alpha - 1]

    @property
    def scale(self) -> float:
        mags = [self.frame.scale, float(linalg.max_abs(self.frame.gamma)[0])]
        mags += [float(j.max_abs()) for j in self.J]
        return max(mags)


def _first_defect(diff: np.ndarray, scale: float):
    if linalg.is_zero(diff, scale):
        return None
    return linalg.max_abs(diff)[1]


def structure_violations(F: LieFrame, J1: Endo, J2: Endo, J3: Endo) -> list[Violation]:
    """Every violated relation of an HN-metric structure, in a stable order."""
    Js = {1: J1, 2: J2, 3: J3}
    for j in Js.values():
        if not same_frame(F, j.frame):
            raise FrameMismatchError("structure endomorphisms must live on the given frame")
    n = F.n
    out = []
    scale = max(float(j.max_abs()) for j in Js.values()) ** 2
    ident = linalg.identity(n, F.backend)
    for a in (1, 2, 3):
        where = _first_defect(Js[a].M @ Js[a].M + ident, scale)
        if where is not None:
            out.append(Violation("quaternionic-violation", f"J{a}^2 = -I", where))
    for a, b, c in CYCLIC:
        where = _first_defect(Js[b].M @ Js[c].M - Js[a].M, scale)
        if where is not None:
            out.append(Violation("quaternionic-violation", f"J{a} = J{b} J{c}", where))
        where = _first_defect(Js[c].M @ Js[b].M + Js[a].M, scale)
        if where is not None:
            out.append(Violation("quaternionic-violation", f"J{a} = -J{c} J{b}", where))
    gscale = scale * float(linalg.max_abs(F.g)[0])
    for a in (1, 2, 3):
        m = Js[a].M
        where = _first_defect(EPS[a - 1] * (m.T @ F.g @ m) - F.g, gscale)
        if where is not None:
            out.append(Violation("compatibility-violation", f"g(x,y) = eps_{a} g(J{a}x, J{a}y)", where))
    try:
        p, q = linalg.signature(F.g)
    except DegenerateMetricError:
        out.append(Violation("signature-violation", "metric is degenerate"))
    else:
        if (p, q) != (n // 2, n // 2):
            out.append(Violation("signature-violation", f"signature ({p}, {q}) is not neutral"))
    return out


_ERROR_BY_KIND = {
    "quaternionic-violation": QuaternionicViolation,
    "compatibility-violation": CompatibilityViolation,
    "signature-violation": SignatureViolation,
}


def build_hn(F: LieFrame, J1, J2, J3) -> HNStructure:
    """Validate ``(J1, J2, J3, g)`` exactly and bundle it.

    Raises the error class of the first violated relation; the exception
    carries the full list of violations.
    """
    if F.n % 4:
        raise DimensionMismatchError(f"an almost hypercomplex frame needs n = 4m, got n = {F.n}")
    Js = tuple(j if isinstance(j, Endo) else Endo(F, j) for j in (J1, J2, J3))
    violations = structure_violations(F, *Js)
    if violations:
        raise _ERROR_BY_KIND.get(violations[0].kind, StructureError)(violations)
    return HNStructure(F, Js)


# --- fundamental tensors --------------------------------------------------


@dataclass(frozen=True, eq=False)
class FundamentalTensor:
    """``F_alpha(x, y, z) = g((nabla_x J_alpha) y, z)``."""

    alpha: int
    T: Tensor03


def lower(H: HNStructure, S: Tensor12) -> Tensor03:
    """``T(x, y, z) = g(S(x, y), z)``."""
    require_same_frame(H.j(1), S)
    return Tensor03(H.frame, np.einsum("ijp,pk->ijk", S.S, H.frame.g))


def raise_index(H: HNStructure, T: Tensor03) -> Tensor12:
    """Inverse of :func:`lower`: ``S(x, y) = T(x, y, .)^sharp``."""
    require_same_frame(H.j(1), T)
    return Tensor12(H.frame, np.einsum("ijr,rk->ijk", T.T, H.frame.g_inv))


def fundamental(H: HNStructure, alpha: int) -> FundamentalTensor:
    nj = nabla_endo(H.frame, H.j(alpha))
    return FundamentalTensor(alpha, lower(H, nj))


def _twist_first(t, m):
    # t(M X_i, X_j, X_k)
    return np.einsum("pi,pjk->ijk", m, t)


def _twist_second(t, m):
    return np.einsum("pj,ipk->ijk", m, t)


def _twist_third(t, m):
    return np.einsum("pk,ijp->ijk", m, t)


def _swap12(t):
    return np.einsum("jik->ijk", t)


def fa_prop_residuals(H: HNStructure, FT: FundamentalTensor) -> list[Residual]:
    """``F(x,y,z) = -eps F(x,z,y) = -eps F(x,Jy,Jz)``."""
    f = FT.T.T
    e = H.epsilon(FT.alpha)
    m = H.j(FT.alpha).M
    a = FT.alpha
    return [
        Residual.of(f"Eq-Fa-prop:F{a}(x,y,z)=-eps*F{a}(x,z,y)", [f, e * np.einsum("ikj->ijk", f)]),
        Residual.of(
            f"Eq-Fa-prop:F{a}(x,y,z)=-eps*F{a}(x,Jy,Jz)",
            [f, e * _twist_third(_twist_second(f, m), m)],
        ),
    ]


# --- the six associated Nijenhuis tensors ---------------------------------


@dataclass(frozen=True, eq=False)
class AssocSix:
    tensors: dict
    norms: dict
    vanish: dict

    @property
    def all_vanish(self) -> bool:
        return all(self.vanish.values())

    @property
    def count_vanishing(self) -> int:
        return sum(self.vanish.values())

    def __getitem__(self, label: str) -> Tensor12:
        return self.tensors[label]

    def to_json(self) -> dict:
        rational = next(iter(self.tensors.values())).backend is linalg.RATIONAL
        return {
            label: {"max_abs": str(self.norms[label]) if rational else float(self.norms[label]),
                    "vanishes": self.vanish[label]}
            for label in self.tensors
        }


def six_tensors(H: HNStructure) -> dict:
    return {pair_label(a, b): assoc_nijenhuis_pair(H.j(a), H.j(b)) for a, b in PAIRS}


def assoc_six(H: HNStructure) -> AssocSix:
    """All six associated Nijenhuis tensors with norms and vanish flags.

    Raises :class:`Theorem36Inconsistency` if two or more vanish but not all.
    """
    tensors = six_tensors(H)
    scale = H.scale ** 3
    norms = {k: t.max_abs() for k, t in tensors.items()}
    vanish = {k: t.is_zero(scale) for k, t in tensors.items()}
    six = AssocSix(tensors, norms, vanish)
    if six.count_vanishing >= 2 and not six.all_vanish:
        zero = [k for k, v in vanish.items() if v]
        raise Theorem36Inconsistency(f"{', '.join(zero)} vanish but not all six do")
    return six


def verify_lemma_3_1(H: HNStructure) -> list[Residual]:
    """Ten identities relating the six associated tensors.

    The identity labelled ``Eq-2.12`` carries the ``{J2,J2}`` term that follows
    from subtracting the cyclic shift of ``Eq-2.10`` from itself:
    ``{J3,J3} = 1/2({J1,J1} + {J2,J2} + {J3,J1}⋏J2 - J2⋏{J3,J1}
    - {J2,J3}⋏J1 + J1⋏{J2,J3})``.
    """
    J1, J2, J3 = H.J
    t = six_tensors(H)
    n11, n22, n33 = t["{J1,J1}"], t["{J2,J2}"], t["{J3,J3}"]
    n12, n23, n31 = t["{J1,J2}"], t["{J2,J3}"], t["{J3,J1}"]
    R, L = barwedge_right, barwedge_left

    def half(s):
        return s / 2

    identities = {
        "Eq-2.2": [n31, -half(R(n11, J2)), -L(J1, n12)],
        "Eq-2.3": [n31, R(n12, J1), L(J1, n12), L(J2, n11)],
        "Eq-2.5": [L(J2, n11), half(R(n11, J2)), 2 * L(J1, n12), R(n12, J1)],
        "Eq-2.6": [n23, half(R(n22, J1)), L(J2, n12)],
        "Eq-2.7": [n23, -L(J1, n22), -R(n12, J2), -L(J2, n12)],
        "Eq-2.9": [L(J1, n22), half(R(n22, J1)), R(n12, J2), 2 * L(J2, n12)],
        "Eq-2.10": [n33, -n11, -R(n31, J2), -L(J3, n12), -L(J1, n23)],
        "Eq-2.12": [
            n33,
            -half(n11 + n22 + R(n31, J2) - L(J2, n31) - R(n23, J1) + L(J1, n23)),
        ],
        "Eq-2.13": [n11, -n22, R(n31, J2), L(J2, n31), 2 * L(J3, n12), R(n23, J1), L(J1, n23)],
        "Eq-2.15": [R(n22, J2), 2 * L(J2, n22)],
    }
    return [Residual.of(label, terms) for label, terms in identities.items()]


# --- expansions through the fundamental tensors ---------------------------


def _expansions(H: HNStructure, alpha: int):
    f = fundamental(H, alpha).T.T
    m = H.j(alpha).M
    e = H.epsilon(alpha)
    fjx = _twist_first(f, m)            # F(Jx, y, z)
    fjz = e * _twist_third(f, m)        # eps F(x, y, Jz)
    return fjx, fjz, _swap12(fjx), _swap12(fjz)


def verify_en_formulas(H: HNStructure, alpha: int) -> list[Residual]:
    """Compare ``[J,J]`` and ``{J,J}`` lowered with their ``F_alpha`` expansions."""
    j = H.j(alpha)
    nij = lower(H, nijenhuis_pair(j, j)).T
    ass = lower(H, assoc_nijenhuis_pair(j, j)).T
    a, b, c, d = _expansions(H, alpha)
    return [
        Residual.of(f"Eq-enu:alpha={alpha}", [nij, -a, -b, c, d]),
        Residual.of(f"Eq-enhat:alpha={alpha}", [ass, -a, -b, -c, -d]),
    ]


def verify_nn_nhat(H: HNStructure) -> Residual:
    """``{J1,J1}(x,y,z) = [J1,J1](z,x,y) + [J1,J1](z,y,x)``."""
    j1 = H.j(1)
    ass = lower(H, assoc_nijenhuis_pair(j1, j1)).T
    nij = lower(H, nijenhuis_pair(j1, j1)).T
    return Residual.of(
        "Eq-NN=Nhat",
        [ass, -np.einsum("zxy->xyz", nij), -np.einsum("zyx->xyz", nij)],
    )


# --- class membership -----------------------------------------------------


@dataclass(frozen=True)
class ClassReport:
    g1_j1: bool
    w3_j2: bool
    w3_j3: bool
    kaehler: tuple
    g1_polarization: bool
    g1_three_form: bool

    def to_json(self) -> dict:
        return {
            "G1(J1)": self.g1_j1,
            "W3(J2)": self.w3_j2,
            "W3(J3)": self.w3_j3,
            "Kaehler(J1)": self.kaehler[0],
            "Kaehler(J2)": self.kaehler[1],
            "Kaehler(J3)": self.kaehler[2],
        }


def g1_polarization_defect(H: HNStructure) -> np.ndarray:
    """``F1(x,y,z) + F1(y,x,z) - F1(J1x,J1y,z) - F1(J1y,J1x,z)`` on basis triples."""
    f = fundamental(H, 1).T.T
    m = H.j(1).M
    sym = f + _swap12(f)
    twisted = _twist_second(_twist_first(f, m), m)
    return sym - twisted - _swap12(twisted)


def w3_defect(H: HNStructure, alpha: int) -> np.ndarray:
    f = fundamental(H, alpha).T.T
    return f + np.einsum("jki->ijk", f) + np.einsum("kij->ijk", f)


def class_report(H: HNStructure) -> ClassReport:
    """Membership in G1(J1), W3(J2), W3(J3) and the Kähler classes.

    G1 is evaluated twice, by polarising the quadratic condition on ``F1`` and
    by testing whether the lowered ``[J1, J1]`` is a 3-form; the two must agree.
    """
    scale = H.scale ** 3
    fs = [fundamental(H, a).T for a in (1, 2, 3)]
    kaehler = tuple(f.is_zero(H.scale ** 2) for f in fs)
    by_polar = linalg.is_zero(g1_polarization_defect(H), scale)
    j1 = H.j(1)
    by_form = lower(H, nijenhuis_pair(j1, j1)).is_3form(scale)
    if by_polar != by_form:
        raise G1PredicateDisagreement(
            f"G1(J1) by polarization is {by_polar} but by the 3-form test is {by_form}"
        )
    return ClassReport(
        g1_j1=by_polar,
        w3_j2=linalg.is_zero(w3_defect(H, 2), scale),
        w3_j3=linalg.is_zero(w3_defect(H, 3), scale),
        kaehler=kaehler,
        g1_polarization=by_polar,
        g1_three_form=by_form,
    )
