"""Frame-component tensors: endomorphisms, (1,2)- and (0,3)-tensors.

Index conventions (0-based, frame components):

* ``Endo.M[k, j] = M^k_j`` so that ``(J x)^k = M^k_j x^j``.
* ``Tensor12.S[i, j, k] = S^k_{ij}`` meaning ``S(X_i, X_j) = S^k_{ij} X_k``.
* ``Tensor03.T[i, j, k] = T(X_i, X_j, X_k)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatchError, FrameMismatchError
from .linalg import Backend


def same_frame(a, b) -> bool:
    if a is b:
        return True
    return (
        a.n == b.n
        and a.backend is b.backend
        and np.array_equal(a.C, b.C)
        and np.array_equal(a.g, b.g)
    )


def require_same_frame(*objs):
    frame = objs[0].frame
    for obj in objs[1:]:
        if not same_frame(frame, obj.frame):
            raise FrameMismatchError("operands live on different Lie frames")
    return frame


class _Linear:
    """Vector-space arithmetic shared by the tensor types."""

    _field = ""

    @property
    def data(self) -> np.ndarray:
        return getattr(self, self._field)

    @property
    def backend(self) -> Backend:
        return self.frame.backend

    def _new(self, data):
        return type(self)(self.frame, data)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        require_same_frame(self, other)
        return self._new(self.data + other.data)

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        require_same_frame(self, other)
        return self._new(self.data - other.data)

    def __neg__(self):
        return self._new(-self.data)

    def __mul__(self, c):
        if isinstance(c, _Linear):
            return NotImplemented
        return self._new(self.data * linalg.check_scalar(c, self.backend))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self._new(self.data / linalg.check_scalar(c, self.backend))

    def max_abs(self):
        return linalg.max_abs(self.data)[0]

    def is_zero(self, scale=0.0) -> bool:
        return linalg.is_zero(self.data, scale)

    def equals(self, other) -> bool:
        require_same_frame(self, other)
        scale = max(self.max_abs(), other.max_abs())
        return linalg.is_zero(self.data - other.data, scale)


def _coerce(obj, field, shape, what):
    arr = np.asarray(getattr(obj, field))
    if linalg.array_backend(arr) is None:
        arr = linalg.as_array(arr, obj.frame.backend)
    if arr.shape != shape:
        raise DimensionMismatchError(f"{what} has shape {arr.shape}, expected {shape}")
    linalg.backend_of(arr, obj.frame.g)
    object.__setattr__(obj, field, arr)


@dataclass(frozen=True, eq=False)
class Endo(_Linear):
    """A left-invariant (1,1)-tensor field."""

    frame: object
    M: np.ndarray
    _field = "M"

    def __post_init__(self):
        _coerce(self, "M", (self.frame.n,) * 2, "endomorphism")

    @classmethod
    def identity(cls, frame):
        return cls(frame, linalg.identity(frame.n, frame.backend))

    @classmethod
    def zero(cls, frame):
        return cls(frame, linalg.zeros((frame.n, frame.n), frame.backend))

    def __matmul__(self, other):
        if isinstance(other, Endo):
            require_same_frame(self, other)
            return Endo(self.frame, self.M @ other.M)
        return NotImplemented

    def __call__(self, x):
        x = np.asarray(x)
        if x.shape != (self.frame.n,):
            raise DimensionMismatchError(f"vector of length {x.shape} on a {self.frame.n}-frame")
        return self.M @ x


@dataclass(frozen=True, eq=False)
class Tensor12(_Linear):
    """A left-invariant (1,2)-tensor field ``S(X_i, X_j) = S[i, j, :]``."""

    frame: object
    S: np.ndarray
    _field = "S"

    def __post_init__(self):
        _coerce(self, "S", (self.frame.n,) * 3, "(1,2)-tensor")

    @classmethod
    def zero(cls, frame):
        return cls(frame, linalg.zeros((frame.n,) * 3, frame.backend))

    def __call__(self, x, y):
        return np.einsum("i,j,ijk->k", np.asarray(x), np.asarray(y), self.S)

    def swap_args(self):
        return Tensor12(self.frame, self.S.transpose(1, 0, 2))


@dataclass(frozen=True, eq=False)
class Tensor03(_Linear):
    """A left-invariant (0,3)-tensor field ``T(X_i, X_j, X_k) = T[i, j, k]``."""

    frame: object
    T: np.ndarray
    _field = "T"

    def __post_init__(self):
        _coerce(self, "T", (self.frame.n,) * 3, "(0,3)-tensor")

    @classmethod
    def zero(cls, frame):
        return cls(frame, linalg.zeros((frame.n,) * 3, frame.backend))

    @classmethod
    def from_components(cls, frame, values: dict):
        """Totally antisymmetric tensor from ``{(i, j, k): value}`` with ``i < j < k``."""
        t = linalg.zeros((frame.n,) * 3, frame.backend)
        for (i, j, k), v in values.items():
            v = linalg.to_scalar(v, frame.backend)
            for perm, sign in _PERMS:
                idx = tuple((i, j, k)[p] for p in perm)
                t[idx] = sign * v
        return cls(frame, t)

    def __call__(self, x, y, z):
        return np.einsum("i,j,k,ijk->", np.asarray(x), np.asarray(y), np.asarray(z), self.T)

    def antisymmetry_defect(self) -> np.ndarray:
        """Largest violation of total antisymmetry, as a tensor."""
        t = self.T
        parts = [t + t.transpose(1, 0, 2), t + t.transpose(0, 2, 1), t + t.transpose(2, 1, 0)]
        return np.stack(parts)

    def is_3form(self, scale=None) -> bool:
        if scale is None:
            scale = self.max_abs()
        return linalg.is_zero(self.antisymmetry_defect(), scale)

    def skew_components(self) -> dict:
        """``{(i, j, k): T_ijk}`` for ``i < j < k``."""
        n = self.frame.n
        return {ijk: self.T[ijk] for ijk in itertools.combinations(range(n), 3)}


def _parity(perm) -> int:
    inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
    return -1 if inversions % 2 else 1


_PERMS = [(p, _parity(p)) for p in itertools.permutations(range(3))]


def permutation_sign(perm) -> int:
    return _parity(perm)


@dataclass(frozen=True)
class Residual:
    """Max-norm residual of an identity, with the index where it peaks."""

    label: str
    max_abs: object
    argmax: tuple
    scale: float
    backend: Backend

    @property
    def ok(self) -> bool:
        if self.backend is Backend.FLOAT:
            return float(self.max_abs) <= linalg.tolerance(self.scale)
        return self.max_abs == 0

    @classmethod
    def of(cls, label: str, terms, backend: Backend | None = None):
        """Residual of ``sum(terms) == 0``.

        The float threshold is scaled by the largest entry among the
        individual terms.
        """
        arrays = [t.data if isinstance(t, _Linear) else np.asarray(t) for t in terms]
        if backend is None:
            backend = linalg.backend_of(*arrays)
        total = arrays[0]
        for a in arrays[1:]:
            total = total + a
        value, where = linalg.max_abs(total)
        scale = max((float(linalg.max_abs(a)[0]) for a in arrays), default=0.0)
        if backend is Backend.RATIONAL:
            value = linalg.to_scalar(value)
        else:
            value = float(value)
        return cls(label, value, where, scale, backend)

    def to_json(self) -> dict:
        value = str(self.max_abs) if self.backend is Backend.RATIONAL else float(self.max_abs)
        return {
            "label": self.label,
            "max_abs": value,
            "argmax": list(self.argmax),
            "ok": self.ok,
        }

    def __str__(self):
        mark = "ok" if self.ok else "FAIL"
        return f"{self.label}: max|residual| = {self.max_abs} at {self.argmax} [{mark}]"
