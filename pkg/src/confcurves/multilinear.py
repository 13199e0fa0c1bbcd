"""Dense small-vector algebra, alternating tensors, and wedge machinery.

Conventions used throughout the package:

* Spatial indices are 1-based (matching the superscripts of the conserved
  quantities), ambient slot indices run ``0, 1, ..., n, n+1`` where slot 0
  is the distinguished null direction paired with slot ``n+1`` by the
  metric, and slots ``1..n`` are the Euclidean block.
* ``epsilon(idx, vectors)`` is the determinant of the matrix whose rows
  are the selected components and whose columns are the argument vectors,
  for *any* index tuple (repeats give 0, odd reorderings flip the sign).
* Antisymmetrization over bracketed indices includes the 1/m!
  normalization, so it is a projection.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .jets import JetScalar, JetVector

__all__ = [
    "dot",
    "epsilon",
    "antisymmetrize",
    "Tractor",
    "tractor_metric_pair",
    "WedgeTractor",
    "wedge",
    "wedge_pair",
    "rho_standard",
    "rho_wedge",
]


def dot(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(a @ b)


def epsilon(idx, *vectors):
    """Alternating tensor of rank ``len(idx)`` evaluated on ``vectors``.

    ``idx`` holds 1-based component indices; the value is the determinant
    of the matrix with rows ``idx`` and one column per vector.
    """
    m = len(idx)
    if len(vectors) != m:
        raise ValueError(f"rank-{m} epsilon needs exactly {m} vectors")
    if len(set(idx)) < m:
        return 0.0
    mat = np.empty((m, m))
    for col, v in enumerate(vectors):
        v = np.asarray(v, dtype=float)
        for row, i in enumerate(idx):
            if not 1 <= i <= v.size:
                raise ValueError(f"index {i} out of range 1..{v.size}")
            mat[row, col] = v[i - 1]
    return float(np.linalg.det(mat))


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def antisymmetrize(array, axes=None):
    """Average of signed permutations of ``axes`` (all axes by default)."""
    arr = np.asarray(array, dtype=float)
    if axes is None:
        axes = tuple(range(arr.ndim))
    axes = tuple(axes)
    dims = {arr.shape[a] for a in axes}
    if len(dims) > 1:
        raise ValueError("antisymmetrized axes must have equal lengths")
    out = np.zeros_like(arr)
    for perm in itertools.permutations(range(len(axes))):
        order = list(range(arr.ndim))
        for pos, p in zip(axes, perm):
            order[pos] = axes[p]
        out += _perm_sign(perm) * np.transpose(arr, order)
    return out / math.factorial(len(axes))


@dataclass(frozen=True)
class Tractor:
    """One element of the rank-(n+2) bundle in the (null, spatial, null) split.

    Slots may hold plain numbers/arrays or jet values; the recurrences in
    :mod:`confcurves.tractors` run the same code over both.
    """

    w0: object
    wi: object
    wN: object

    @property
    def dim(self):
        if isinstance(self.wi, JetVector):
            return self.wi.dim
        return np.asarray(self.wi).size

    def values(self):
        """Strip jet tracking, keeping only the pointwise slot values."""
        w0 = self.w0.value if isinstance(self.w0, JetScalar) else float(self.w0)
        wN = self.wN.value if isinstance(self.wN, JetScalar) else float(self.wN)
        wi = self.wi.value if isinstance(self.wi, JetVector) else np.asarray(self.wi, dtype=float)
        return Tractor(w0, wi.copy(), wN)

    def as_array(self):
        v = self.values()
        return np.concatenate([[v.w0], v.wi, [v.wN]])


def tractor_metric_pair(a, b):
    """Indefinite pairing: the two null slots cross-pair, the spatial block
    is Euclidean."""
    if isinstance(a.wi, JetVector) or isinstance(b.wi, JetVector):
        return a.w0 * b.wN + a.wN * b.w0 + a.wi.dot(b.wi)
    return a.w0 * b.wN + a.wN * b.w0 + float(np.dot(a.wi, b.wi))


def _metric_entry(a, b, n):
    # slot metric: <0,N>=1, <i,i>=1, everything else 0 (N = n+1)
    if a == 0:
        return 1.0 if b == n + 1 else 0.0
    if a == n + 1:
        return 1.0 if b == 0 else 0.0
    return 1.0 if a == b else 0.0


class WedgeTractor:
    """Sparse antisymmetric array over increasing slot tuples."""

    __slots__ = ("ambient", "rank", "coeffs")

    def __init__(self, ambient, rank, coeffs=None):
        self.ambient = ambient
        self.rank = rank
        self.coeffs = dict(coeffs or {})

    @classmethod
    def basis(cls, ambient, idx, coefficient=1.0):
        idx = tuple(idx)
        if list(idx) != sorted(set(idx)):
            raise ValueError("basis tuple must be strictly increasing")
        return cls(ambient, len(idx), {idx: float(coefficient)})

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0.0) + v
        return WedgeTractor(self.ambient, self.rank, out)

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, scalar):
        return WedgeTractor(
            self.ambient, self.rank, {k: v * scalar for k, v in self.coeffs.items()}
        )

    __rmul__ = __mul__

    def _check(self, other):
        if self.ambient != other.ambient or self.rank != other.rank:
            raise ValueError("wedge rank or ambient dimension mismatch")

    def max_abs(self):
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    def __getitem__(self, idx):
        return self.coeffs.get(tuple(idx), 0.0)

    def __repr__(self):
        return f"WedgeTractor(rank={self.rank}, ambient={self.ambient}, {self.coeffs})"


def wedge(tractors):
    """Antisymmetric product of ``k`` tractors, k in {3, 4}.

    The coefficient on each increasing slot tuple is the determinant of the
    corresponding component rows, so dependent tractors produce the zero
    wedge rather than an error.
    """
    k = len(tractors)
    if k not in (3, 4):
        raise ValueError("wedge supports rank 3 and 4 only")
    cols = [t.as_array() if isinstance(t, Tractor) else np.asarray(t, dtype=float) for t in tractors]
    ambient = cols[0].size
    if any(c.size != ambient for c in cols):
        raise ValueError("wedge factors must share the ambient dimension")
    mat = np.column_stack(cols)
    coeffs = {}
    for idx in itertools.combinations(range(ambient), k):
        val = float(np.linalg.det(mat[list(idx), :]))
        if val != 0.0:
            coeffs[idx] = val
    return WedgeTractor(ambient, k, coeffs)


def _dual_tuple(idx, n):
    # the only tuple pairing non-trivially with idx: swap the two null slots
    swapped = tuple(sorted(n + 1 if a == 0 else (0 if a == n + 1 else a) for a in idx))
    return swapped


def _duality_sign(idx, n):
    dual = _dual_tuple(idx, n)
    m = len(idx)
    mat = np.empty((m, m))
    for r, a in enumerate(idx):
        for c, b in enumerate(dual):
            mat[r, c] = _metric_entry(a, b, n)
    return float(np.linalg.det(mat))


def wedge_pair(a, b):
    """Metric pairing of two wedges: the determinant pairing of simple
    wedges extended bilinearly to coefficient arrays."""
    a._check(b)
    n = a.ambient - 2
    total = 0.0
    for idx, va in a.coeffs.items():
        dual = _dual_tuple(idx, n)
        vb = b.coeffs.get(dual)
        if vb is not None:
            total += va * vb * _duality_sign(idx, n)
    return total


def rho_standard(x, tr):
    """Nilpotent slot action generated by a spatial vector ``x``:
    the top null slot feeds the spatial block, the spatial block feeds the
    bottom null slot with a minus sign, the bottom slot is annihilated."""
    if isinstance(tr.wi, JetVector):
        return Tractor(
            JetScalar.constant(0.0, tr.w0.order),
            x * tr.w0,
            -(tr.wi.dot(x)),
        )
    x = np.asarray(x, dtype=float)
    return Tractor(0.0, tr.w0 * x, -float(np.dot(tr.wi, x)))


def _sorted_with_sign(seq):
    lst = list(seq)
    if len(set(lst)) < len(lst):
        return None, 0
    sign = 1
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j] > lst[j + 1]:
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                sign = -sign
    return tuple(lst), sign


def rho_wedge(x, w):
    """The action of :func:`rho_standard` extended to wedges as a derivation."""
    x = np.asarray(x, dtype=float)
    n = w.ambient - 2
    if x.size != n:
        raise ValueError("spatial vector dimension mismatch")
    out = {}
    for idx, c in w.coeffs.items():
        for pos, a in enumerate(idx):
            if a == n + 1:
                continue
            rest = idx[:pos] + idx[pos + 1 :]
            if a == 0:
                # slot 0 -> sum_s x[s] * slot s
                for s in range(1, n + 1):
                    if x[s - 1] == 0.0 or s in rest:
                        continue
                    key, sign = _sorted_with_sign(idx[:pos] + (s,) + idx[pos + 1 :])
                    if sign:
                        out[key] = out.get(key, 0.0) + c * x[s - 1] * sign
            else:
                # spatial slot a -> -x[a] * bottom slot
                if n + 1 in rest:
                    continue
                key, sign = _sorted_with_sign(idx[:pos] + (n + 1,) + idx[pos + 1 :])
                if sign:
                    out[key] = out.get(key, 0.0) - c * x[a - 1] * sign
    return WedgeTractor(w.ambient, w.rank, {k: v for k, v in out.items() if v != 0.0})
