"""Nijenhuis and associated Nijenhuis tensors of endomorphism pairs.

For left-invariant fields both the Lie bracket and the symmetric braces are
bilinear maps on the frame, so the two tensors share one formula

    2 P(X, Y) = (JK + KJ) B(X, Y)
                + B(JX, KY) - J B(KX, Y) - J B(X, KY)
                + B(KX, JY) - K B(JX, Y) - K B(X, JY),

with ``B`` the bracket (giving ``[J, K]``) or the braces (giving
``{J, K}``).  The stored tensors are ``[J, K]`` and ``{J, K}`` themselves,
so ``[J, J]`` and ``{J, J}`` come out without extra factors.

The operations ``S ⋏ L`` and ``L ⋏ S`` are the Frölicher-Nijenhuis
compositions ``(S ⋏ L)(X, Y) = S(LX, Y) + S(X, LY)`` and
``(L ⋏ S)(X, Y) = L(S(X, Y))``.
"""

from __future__ import annotations

import numpy as np

from .tensors import Endo, Residual, Tensor12, require_same_frame


def _pre_first(b: np.ndarray, m: np.ndarray) -> np.ndarray:
    # B(M X_i, X_j)
    return np.einsum("pi,pjk->ijk", m, b)


def _pre_second(b: np.ndarray, m: np.ndarray) -> np.ndarray:
    # B(X_i, M X_j)
    return np.einsum("qj,iqk->ijk", m, b)


def _post(m: np.ndarray, b: np.ndarray) -> np.ndarray:
    # M B(X_i, X_j)
    return np.einsum("kp,ijp->ijk", m, b)


def pair_form(b: np.ndarray, j: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Halved pair formula applied to the bilinear map with coefficients ``b``."""
    bj_ = _pre_first(b, j)
    bk_ = _pre_first(b, k)
    total = (
        _post(j @ k + k @ j, b)
        + _pre_second(bj_, k)
        + _pre_second(bk_, j)
        - _post(j, bk_ + _pre_second(b, k))
        - _post(k, bj_ + _pre_second(b, j))
    )
    return total / 2


def nijenhuis_pair(J: Endo, K: Endo) -> Tensor12:
    """The Nijenhuis tensor ``[J, K]``; antisymmetric in its arguments."""
    frame = require_same_frame(J, K)
    return Tensor12(frame, pair_form(frame.C, J.M, K.M))


def assoc_nijenhuis_pair(J: Endo, K: Endo) -> Tensor12:
    """The associated Nijenhuis tensor ``{J, K}`` built from the braces."""
    frame = require_same_frame(J, K)
    return Tensor12(frame, pair_form(frame.braces_coeffs, J.M, K.M))


def barwedge_right(S: Tensor12, L: Endo) -> Tensor12:
    """``(S ⋏ L)(X, Y) = S(LX, Y) + S(X, LY)``."""
    frame = require_same_frame(S, L)
    return Tensor12(frame, _pre_first(S.S, L.M) + _pre_second(S.S, L.M))


def barwedge_left(L: Endo, S: Tensor12) -> Tensor12:
    """``(L ⋏ S)(X, Y) = L(S(X, Y))``."""
    frame = require_same_frame(L, S)
    return Tensor12(frame, _post(L.M, S.S))


def verify_lemma_2_1(J: Endo, K: Endo, L: Endo) -> Residual:
    """Residual of ``{J,KL} + {K,JL} = {J,K}⋏L + J⋏{K,L} + K⋏{J,L}``."""
    require_same_frame(J, K, L)
    an = assoc_nijenhuis_pair
    return Residual.of(
        "Eq-1.6",
        [
            an(J, K @ L),
            an(K, J @ L),
            -barwedge_right(an(J, K), L),
            -barwedge_left(J, an(K, L)),
            -barwedge_left(K, an(J, L)),
        ],
    )


def verify_barwedge_identities(S: Tensor12, J: Endo, K: Endo) -> list[Residual]:
    """Residuals of the two composition rules for ``⋏``.

    ``(S⋏J)⋏K - (S⋏K)⋏J = S⋏JK - S⋏KJ`` and ``(J⋏S)⋏K = J⋏(S⋏K)``.
    """
    bw_r, bw_l = barwedge_right, barwedge_left
    commutator = Residual.of(
        "Eq-1.7",
        [bw_r(bw_r(S, J), K), -bw_r(bw_r(S, K), J), -bw_r(S, J @ K), bw_r(S, K @ J)],
    )
    assoc = Residual.of("Eq-1.8", [bw_r(bw_l(J, S), K), -bw_l(J, bw_r(S, K))])
    return [commutator, assoc]


def verify_identity_pairs(J: Endo, K: Endo) -> list[Residual]:
    """``{J,I} = {I,K} = 0`` and both symmetries of ``{J,K}``."""
    identity = Endo.identity(J.frame)
    an = assoc_nijenhuis_pair
    jk = an(J, K)
    return [
        Residual.of("Eq-1.1a:{J,I}", [an(J, identity)]),
        Residual.of("Eq-1.1a:{I,K}", [an(identity, K)]),
        Residual.of("Eq-sym:{J,K}={K,J}", [jk, -an(K, J)]),
        Residual.of("sym-args:{J,K}(X,Y)={J,K}(Y,X)", [jk, -jk.swap_args()]),
    ]
