"""Dual-backend scalars and small dense linear algebra.

Two backends are supported:

* ``rational``: entries are exact rationals (``gmpy2.mpq``, or
  :class:`fractions.Fraction` when gmpy2 is missing) held in numpy ``object``
  arrays.  Every zero test is exact.
* ``float``: entries are IEEE doubles in ``float64`` arrays.  A quantity is
  treated as zero when ``|x| <= 1e-9 * (1 + scale)`` where ``scale`` is the
  largest magnitude among the inputs being compared.

A backend is inferred from array dtype (``object`` -> rational,
floating -> float, integer arrays are neutral).  Combining the two in one
operation raises :class:`BackendMismatchError`.
"""

from __future__ import annotations

import bisect
import enum
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

from .errors import (
    BackendMismatchError,
    DegenerateMetricError,
    DimensionMismatchError,
    SingularMatrixError,
)

ZERO_TOL = 1e-9


class Backend(str, enum.Enum):
    RATIONAL = "rational"
    FLOAT = "float"


RATIONAL = Backend.RATIONAL
FLOAT = Backend.FLOAT


def to_scalar(value, backend=RATIONAL):
    """Convert ``value`` to a scalar of ``backend``.

    Strings of the form ``"p/q"`` (or plain integers) are accepted for both
    backends.  A non-integral float cannot become a rational.
    """
    backend = Backend(backend)
    if isinstance(value, (bool, np.bool_)):
        raise TypeError(f"boolean is not a scalar: {value!r}")
    if isinstance(value, np.generic):
        value = value.item()
    if backend is RATIONAL:
        if isinstance(value, Q):
            return value
        if isinstance(value, int):
            return Q(value)
        if isinstance(value, str):
            f = Fraction(value.strip())
            return Q(f.numerator, f.denominator)
        if isinstance(value, float):
            if value.is_integer():
                return Q(int(value))
            raise BackendMismatchError(f"float {value!r} given to the rational backend")
        if isinstance(value, numbers.Rational):
            return Q(int(value.numerator), int(value.denominator))
        raise TypeError(f"cannot convert {type(value).__name__} to a rational scalar")
    if isinstance(value, str):
        return float(Fraction(value.strip()))
    if isinstance(value, numbers.Real):
        return float(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a float scalar")


def as_array(data, backend=RATIONAL) -> np.ndarray:
    """Build an array of the requested backend from nested sequences."""
    backend = Backend(backend)
    raw = np.array(data, dtype=object)
    flat = [to_scalar(v, backend) for v in raw.reshape(-1)]
    if backend is FLOAT:
        return np.array(flat, dtype=float).reshape(raw.shape)
    out = np.empty(raw.shape, dtype=object)
    out.reshape(-1)[:] = flat
    return out


def convert(arr: np.ndarray, backend) -> np.ndarray:
    """Explicit backend conversion (rational -> float is lossy)."""
    return as_array(arr, backend)


def zeros(shape, backend=RATIONAL) -> np.ndarray:
    if Backend(backend) is FLOAT:
        return np.zeros(shape, dtype=float)
    out = np.empty(shape, dtype=object)
    out.fill(Q(0))
    return out


def identity(n: int, backend=RATIONAL) -> np.ndarray:
    out = zeros((n, n), backend)
    for i in range(n):
        out[i, i] = Q(1) if Backend(backend) is RATIONAL else 1.0
    return out


def array_backend(arr: np.ndarray):
    """Backend of a single array, or ``None`` for integer (neutral) arrays."""
    kind = np.asarray(arr).dtype.kind
    if kind == "O":
        return RATIONAL
    if kind in "fc":
        return FLOAT
    if kind in "iub":
        return None
    raise TypeError(f"unsupported dtype {np.asarray(arr).dtype}")


def backend_of(*arrays) -> Backend:
    """Common backend of ``arrays``; raises on a rational/float mix."""
    found = None
    for arr in arrays:
        b = array_backend(arr)
        if b is None:
            continue
        if found is None:
            found = b
        elif b is not found:
            raise BackendMismatchError(f"cannot mix {found.value} and {b.value} values")
    return found or RATIONAL


def check_scalar(c, backend: Backend):
    """Validate a scalar multiplier against ``backend`` and return it coerced."""
    if backend is RATIONAL and isinstance(c, (float, np.floating)):
        raise BackendMismatchError(f"float multiplier {c!r} on rational data")
    return to_scalar(c, backend)


def max_abs(arr) -> tuple:
    """Largest absolute entry and its index (``(0, ())`` for empty input)."""
    arr = np.asarray(arr)
    if arr.size == 0:
        return 0, ()
    flat = np.abs(arr.reshape(-1))
    k = int(np.argmax(flat)) if arr.dtype != object else max(range(flat.size), key=flat.__getitem__)
    return flat[k], tuple(int(i) for i in np.unravel_index(k, arr.shape))


def tolerance(scale=0.0) -> float:
    return ZERO_TOL * (1.0 + float(scale))


def is_zero(arr, scale=0.0) -> bool:
    """Exact zero test for rational data, scaled threshold for floats."""
    value, _ = max_abs(arr)
    if array_backend(arr) is FLOAT:
        return float(value) <= tolerance(scale)
    return value == 0


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    backend_of(a, b)
    if a.shape[-1] != b.shape[0]:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def _square(a: np.ndarray) -> int:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a.shape[0]


def mat_inverse(a: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse; exact on the rational backend."""
    n = _square(a)
    backend = backend_of(a)
    a = as_array(a, backend)
    rational = backend is RATIONAL
    tol = 0 if rational else tolerance(max_abs(a)[0])
    m = [list(a[i]) + list(identity(n, backend)[i]) for i in range(n)]
    for c in range(n):
        if rational:
            k = next((r for r in range(c, n) if m[r][c] != 0), None)
        else:
            k = max(range(c, n), key=lambda r: abs(m[r][c]))
            if abs(m[k][c]) <= tol:
                k = None
        if k is None:
            raise SingularMatrixError(f"matrix is singular (no pivot in column {c})")
        m[c], m[k] = m[k], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            f = m[r][c]
            if r != c and f != 0:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return as_array([row[n:] for row in m], backend)


@dataclass(frozen=True, eq=False)
class SolutionSet:
    """Solution set of ``A x = b``: empty, or ``particular + span(basis)``."""

    kind: str
    particular: np.ndarray | None = None
    nullspace_basis: tuple = ()

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    @property
    def dim(self):
        return None if self.is_empty else len(self.nullspace_basis)

    def point(self, coeffs=()):
        if self.is_empty:
            raise ValueError("empty solution set has no points")
        x = self.particular.copy()
        for c, v in zip(coeffs, self.nullspace_basis, strict=False):
            x = x + c * v
        return x


EMPTY = SolutionSet("empty")


def _primitive(row: list) -> list:
    g = math.gcd(*row)
    if g > 1:
        return [x // g for x in row]
    return row


def _integer_row(row) -> list:
    den = 1
    for x in row:
        den = math.lcm(den, x.denominator)
    return _primitive([x.numerator * (den // x.denominator) for x in row])


def _solve_rational(a: np.ndarray, b: np.ndarray) -> SolutionSet:
    # Fraction-free incremental echelon form over the integers; each stored
    # pivot row has its leading entry in its own column and zeros before it.
    ncols = a.shape[1]
    pivots: dict[int, list] = {}
    order: list[int] = []
    for r in range(a.shape[0]):
        row = [to_scalar(x) for x in a[r]] + [to_scalar(b[r])]
        if not any(row):
            continue
        row = _integer_row(row)
        for c in order:
            f = row[c]
            if f:
                prow = pivots[c]
                p = prow[c]
                g = math.gcd(p, f)
                p, f = p // g, f // g
                row = _primitive([p * x - f * y for x, y in zip(row, prow)])
        lead = next((c for c, x in enumerate(row) if x), None)
        if lead is None:
            continue
        if lead == ncols:
            return EMPTY
        pivots[lead] = row
        bisect.insort(order, lead)

    free = [c for c in range(ncols) if c not in pivots]

    def back_substitute(fixed: dict, homogeneous: bool) -> np.ndarray:
        x = [Q(0)] * ncols
        for c, v in fixed.items():
            x[c] = Q(v)
        for c in reversed(order):
            prow = pivots[c]
            acc = Q(0) if homogeneous else Q(prow[ncols])
            for j in range(c + 1, ncols):
                if prow[j] and x[j]:
                    acc -= prow[j] * x[j]
            x[c] = acc / Q(prow[c])
        return as_array(x, RATIONAL)

    particular = back_substitute({}, homogeneous=False)
    basis = tuple(back_substitute({f: 1}, homogeneous=True) for f in free)
    return SolutionSet("affine", particular, basis)


def _solve_float(a: np.ndarray, b: np.ndarray) -> SolutionSet:
    nrows, ncols = a.shape
    m = np.column_stack([a.astype(float), b.astype(float)])
    tol = tolerance(np.max(np.abs(m)) if m.size else 0.0)
    scales = np.max(np.abs(m[:, :ncols]), axis=1) if ncols else np.ones(nrows)
    scales[scales == 0] = 1.0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        k = r + int(np.argmax(np.abs(m[r:, c]) / scales[r:]))
        if abs(m[k, c]) <= tol:
            continue
        m[[r, k]] = m[[k, r]]
        scales[[r, k]] = scales[[k, r]]
        m[r] /= m[r, c]
        others = np.arange(nrows) != r
        m[others] -= np.outer(m[others, c], m[r])
        pivots.append(c)
        r += 1
    if nrows > r and np.max(np.abs(m[r:, ncols])) > tol:
        return EMPTY
    particular = np.zeros(ncols)
    particular[pivots] = m[: len(pivots), ncols]
    basis = []
    for f in (c for c in range(ncols) if c not in pivots):
        v = np.zeros(ncols)
        v[f] = 1.0
        v[pivots] = -m[: len(pivots), f]
        basis.append(v)
    return SolutionSet("affine", particular, tuple(basis))


def solve_affine(a: np.ndarray, b) -> SolutionSet:
    """Full affine solution set of ``a @ x = b``.

    Rational systems are reduced exactly; float systems use scaled partial
    pivoting and treat pivots below the scaled threshold as zero.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 1 or a.shape[0] != b.shape[0]:
        raise DimensionMismatchError(f"incompatible system shapes {a.shape} and {b.shape}")
    if backend_of(a, b) is FLOAT:
        return _solve_float(a, b)
    return _solve_rational(a, b)


def rank(a: np.ndarray) -> int:
    a = np.asarray(a)
    sol = solve_affine(a, zeros(a.shape[0], backend_of(a)))
    return a.shape[1] - sol.dim


def signature(g: np.ndarray) -> tuple[int, int]:
    """Inertia ``(p, q)`` of a nondegenerate symmetric matrix.

    Uses symmetric congruence (pivoted LDL^T): a nonzero diagonal pivot
    contributes its sign; when every remaining diagonal entry vanishes, an
    off-diagonal 2x2 block ``[[0, a], [a, 0]]`` contributes one of each.
    """
    n = _square(g)
    backend = backend_of(g)
    rational = backend is RATIONAL
    tol = 0 if rational else tolerance(max_abs(g)[0])
    g = as_array(g, backend)
    asym, _ = max_abs(g - g.T)
    if asym > tol:
        raise DimensionMismatchError("signature requires a symmetric matrix")
    m = [list(row) for row in g]
    p = q = 0
    while m:
        size = len(m)
        k = max(range(size), key=lambda i: abs(m[i][i]))
        d = m[k][k]
        if abs(d) > tol:
            if d > 0:
                p += 1
            else:
                q += 1
            rest = [i for i in range(size) if i != k]
            m = [[m[i][j] - m[i][k] * m[k][j] / d for j in rest] for i in rest]
            continue
        pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]
        if not pairs:
            raise DegenerateMetricError("metric is degenerate")
        i, j = max(pairs, key=lambda ij: abs(m[ij[0]][ij[1]]))
        if abs(m[i][j]) <= tol:
            raise DegenerateMetricError("metric is degenerate")
        a, bb, c = m[i][i], m[i][j], m[j][j]
        det = a * c - bb * bb
        inv = ((c / det, -bb / det), (-bb / det, a / det))
        p += 1
        q += 1
        rest = [r for r in range(size) if r not in (i, j)]
        blk = {r: (m[r][i], m[r][j]) for r in rest}
        m = [
            [
                m[r][s]
                - (blk[r][0] * (inv[0][0] * blk[s][0] + inv[0][1] * blk[s][1])
                   + blk[r][1] * (inv[1][0] * blk[s][0] + inv[1][1] * blk[s][1]))
                for s in rest
            ]
            for r in rest
        ]
    if p + q != n:
        raise DegenerateMetricError("metric is degenerate")
    return p, q
