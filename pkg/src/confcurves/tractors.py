"""Canonical tractors along a curve, Gram invariants, and the conserved
quantities obtained by pairing parallel wedges with parallel sections.

The canonical sequence starts from the weighted inclusion ``u^{-1}`` in the
top null slot and repeatedly applies the connection ``d/dt + rho(velocity)``.
Every slot is carried as a jet, so parameter derivatives of any derived
scalar (Gram entries, determinants) come out exact rather than by finite
differences.

Index conventions follow :mod:`confcurves.multilinear`: slot 0 and slot
``n+1`` are the null pair, slots ``1..n`` the Euclidean block.  Quantity
dictionaries are keyed by increasing slot tuples; ``quantity_family``
classifies a key into one of the four index families.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .curves import CurveJet
from .jets import JetScalar, JetVector
from .multilinear import (
    Tractor,
    WedgeTractor,
    epsilon,
    rho_wedge,
    tractor_metric_pair,
    wedge,
    wedge_pair,
)

__all__ = [
    "UndefinedInvariantError",
    "GramInvariants",
    "canonical_tractor_jets",
    "canonical_tractors",
    "gram_invariants",
    "closed_form_alpha1_delta4",
    "is_conformal_circle",
    "q_quantities",
    "quantity_family",
    "parallel_section_oracle",
    "q_circle_quantities",
    "kappa1",
    "enforce_alpha1_stationary",
    "mercator_tractor_residuals",
    "IdentityResiduals",
    "parallel_defect",
]

# Relative band below which delta_4 counts as vanishing (the conformal
# circle class), scaled against the natural size of the Gram entries.
CIRCLE_BAND = 1e-9

# The pairing of a basis-element section with the 4-wedge fixes each
# quantity only up to the orientation chosen for that basis element.  For
# the family with all-spatial indices plus the bottom null slot the metric
# duality permutation is an odd 4-cycle, and we orient those elements with
# a minus sign so that the paired values carry the same signs as the
# determinant formulas of q_quantities (and hence the phase-space
# expressions).  With that orientation a single overall constant of one
# reproduces q_quantities on every family; the constant was fitted once on
# a random jet and is frozen here.
WEDGE_PAIRING_NORMALIZATION = 1.0


class UndefinedInvariantError(ValueError):
    """Raised when an invariant is undefined on the given curve class
    (for example the spiral curvature on a conformal circle)."""


def canonical_tractor_jets(jet: CurveJet, count: int):
    """First ``count`` canonical tractors with jet-valued slots.

    ``count`` between 2 and 5; producing ``count`` tractors consumes
    position derivatives through order ``count``.
    """
    if not 2 <= count <= 5:
        raise ValueError("count must lie in 2..5")
    jet.require_order(count, "canonical tractor sequence")
    u_jet = jet.velocity_jet()
    order = u_jet.order
    u = u_jet.norm_sq().sqrt()
    zero_vec = JetVector.constant(np.zeros(jet.dim), order)
    seq = [Tractor(u.recip(), zero_vec, JetScalar.constant(0.0, order))]
    for _ in range(count - 1):
        cur = seq[-1]
        k = cur.w0.order - 1
        if k < 0:
            raise ValueError("jet order exhausted in tractor recurrence")
        uk = u_jet.truncated(k)
        w0 = cur.w0.differentiate()
        wi = cur.wi.differentiate() + uk * cur.w0.truncated(k)
        wN = cur.wN.differentiate() - cur.wi.truncated(k).dot(uk)
        seq.append(Tractor(w0, wi, wN))
    return seq


def canonical_tractors(jet: CurveJet, count: int):
    """Pointwise values of the canonical tractor sequence."""
    return [t.values() for t in canonical_tractor_jets(jet, count)]


def _pair_trunc(a: Tractor, b: Tractor):
    k = min(a.w0.order, b.w0.order)
    ta = Tractor(a.w0.truncated(k), a.wi.truncated(k), a.wN.truncated(k))
    tb = Tractor(b.w0.truncated(k), b.wi.truncated(k), b.wN.truncated(k))
    return tractor_metric_pair(ta, tb)


def _jet_det(rows):
    if len(rows) == 1:
        return rows[0][0]
    acc = None
    for j, entry in enumerate(rows[0]):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = entry * _jet_det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


@dataclass
class GramInvariants:
    """Determinant invariants of the canonical sequence and the squared
    lengths of the third and fourth tractors, with jet tracking where the
    input order allows it."""

    delta3: float
    delta4: float | None
    delta5: float | None
    alpha1: float
    alpha2: float | None
    alpha1_jet: JetScalar
    delta4_jet: JetScalar | None
    gram: list

    def entry(self, a, b):
        return self.gram[a][b].value

    def gram_scale(self, ell):
        return max(abs(self.gram[a][b].value) for a in range(ell) for b in range(ell))


def gram_invariants(jet: CurveJet, max_ell: int = 5) -> GramInvariants:
    """Gram-matrix data of the first ``max_ell`` canonical tractors."""
    if not 3 <= max_ell <= 5:
        raise ValueError("max_ell must lie in 3..5")
    trs = canonical_tractor_jets(jet, max_ell)
    gram = [[_pair_trunc(trs[a], trs[b]) for b in range(max_ell)] for a in range(max_ell)]

    def block_det(ell):
        k = min(gram[a][b].order for a in range(ell) for b in range(ell))
        rows = [[gram[a][b].truncated(k) for b in range(ell)] for a in range(ell)]
        return _jet_det(rows)

    delta3 = block_det(3).value
    delta4_jet = block_det(4) if max_ell >= 4 else None
    delta5 = block_det(5).value if max_ell >= 5 else None
    return GramInvariants(
        delta3=delta3,
        delta4=None if delta4_jet is None else delta4_jet.value,
        delta5=delta5,
        alpha1=gram[2][2].value,
        alpha2=gram[3][3].value if max_ell >= 4 else None,
        alpha1_jet=gram[2][2],
        delta4_jet=delta4_jet,
        gram=gram,
    )


def closed_form_alpha1_delta4(jet: CurveJet):
    """The two lowest invariants from inner products of the derivatives
    alone (through the third derivative); an independent check against the
    Gram-determinant route."""
    jet.require_order(3, "closed-form invariants")
    U, A, Ap = jet.U, jet.A, jet.Ap
    u2 = jet.u2
    UA = float(U @ A)
    UAp = float(U @ Ap)
    AA = float(A @ A)
    AAp = float(A @ Ap)
    ApAp = float(Ap @ Ap)
    alpha1 = -6 * UA**2 / u2**2 + 2 * UAp / u2 + 3 * AA / u2
    delta4 = (
        9 * UA**4 / u2**4
        - 6 * UA**2 * UAp / u2**3
        - 9 * UA**2 * AA / u2**3
        + 6 * UA * AAp / u2**2
        + UAp**2 / u2**2
        - ApAp / u2
    )
    return alpha1, delta4


def is_conformal_circle(delta4, alpha1):
    """Vanishing-band classification of the fourth determinant invariant."""
    return abs(delta4) <= CIRCLE_BAND * (1.0 + alpha1**2)


def quantity_family(key, n):
    """Classify an increasing slot tuple into its index family, e.g.
    ``(0, i, j, n+1) -> '0ijN'``."""
    bottom = n + 1
    has0 = key[0] == 0
    hasN = key[-1] == bottom
    if len(key) == 4:
        if has0 and hasN:
            return "0ijN"
        if has0:
            return "0ijk"
        if hasN:
            return "ijkN"
        return "ijkl"
    if has0 and hasN:
        return "0iN"
    if has0:
        return "0ij"
    if hasN:
        return "ijN"
    return "ijk"


def q_quantities(jet: CurveJet, scale_by_delta4: bool = False):
    """The four families of pairing quantities in terms of the position and
    its first three derivative vectors, keyed by increasing slot tuple.

    With ``scale_by_delta4`` every value is multiplied by
    ``(-delta_4)^(-1/2)``, defined only on the negative-delta_4 class.
    """
    jet.require_order(3, "pairing quantities")
    n = jet.dim
    X, U, A, Ap = jet.X, jet.U, jet.A, jet.Ap
    u2 = jet.u2
    iu2 = 1.0 / u2
    iu4 = iu2 * iu2
    UA = float(U @ A)
    X2 = float(X @ X)
    factor = 1.0
    if scale_by_delta4:
        _, delta4 = closed_form_alpha1_delta4(jet)
        if not delta4 < 0.0:
            raise UndefinedInvariantError(
                f"scaling needs delta_4 < 0, got {delta4:.3e}"
            )
        factor = (-delta4) ** -0.5

    N = n + 1
    out = {}
    for i, j in itertools.combinations(range(1, n + 1), 2):
        val = 3 * iu4 * UA * epsilon((i, j), U, A) - iu2 * epsilon((i, j), U, Ap)
        val += iu4 * sum(
            epsilon((i, j, l), U, A, Ap) * X[l - 1] for l in range(1, n + 1)
        )
        out[(0, i, j, N)] = factor * val
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        val = (
            3 * iu4 * UA * epsilon((i, j, k), X, U, A)
            - iu2 * epsilon((i, j, k), X, U, Ap)
            + 0.5 * X2 * iu4 * epsilon((i, j, k), U, A, Ap)
        )
        val += iu4 * sum(
            epsilon((i, j, k, l), X, U, A, Ap) * X[l - 1] for l in range(1, n + 1)
        )
        out[(0, i, j, k)] = factor * val
        out[(i, j, k, N)] = factor * iu4 * epsilon((i, j, k), U, A, Ap)
    for idx in itertools.combinations(range(1, n + 1), 4):
        out[idx] = factor * iu4 * epsilon(idx, X, U, A, Ap)
    return out


def _oriented_basis(ambient, idx, rank):
    n = ambient - 2
    orient = 1.0
    if rank == 4 and idx[0] != 0 and idx[-1] == n + 1:
        orient = -1.0
    return WedgeTractor.basis(ambient, idx, orient)


def parallel_section_oracle(jet: CurveJet, rank: int = 4):
    """Quantities recomputed from first principles: for every basis element
    of the rank-``rank`` wedge space, transport it to a parallel section at
    the curve's position via the quadratic exponential of the nilpotent
    action, then pair with the wedge of the canonical tractors.

    Agrees with :func:`q_quantities` (rank 4) and
    :func:`q_circle_quantities` (rank 3) up to the frozen normalization.
    """
    if rank not in (3, 4):
        raise ValueError("rank must be 3 or 4")
    jet.require_order(rank, "section pairing")
    n = jet.dim
    trs = canonical_tractors(jet, rank)
    W = wedge(trs)
    X = jet.X
    out = {}
    for idx in itertools.combinations(range(n + 2), rank):
        key = tuple(a if a < n + 1 else n + 1 for a in idx)
        w = _oriented_basis(n + 2, idx, rank)
        r1 = rho_wedge(X, w)
        r2 = rho_wedge(X, r1)
        section = w - r1 + 0.5 * r2
        out[key] = WEDGE_PAIRING_NORMALIZATION * wedge_pair(section, W)
    return out


def q_circle_quantities(jet: CurveJet):
    """The rank-3 pairing quantities (the conformal-circle family), keyed by
    increasing slot tuple.

    The position-dependent rank-2 family sits at ``(0, i, j)``; the
    position-free one pairs with the spatial-plus-null elements and sits at
    ``(i, j, n+1)``.
    """
    jet.require_order(2, "circle quantities")
    n = jet.dim
    X, U, A = jet.X, jet.U, jet.A
    u = jet.u
    iu1 = 1.0 / u
    iu3 = iu1 / jet.u2
    X2 = float(X @ X)
    N = n + 1
    out = {}
    for i in range(1, n + 1):
        out[(0, i, N)] = iu1 * U[i - 1] + iu3 * sum(
            epsilon((i, k), U, A) * X[k - 1] for k in range(1, n + 1)
        )
    for i, j in itertools.combinations(range(1, n + 1), 2):
        out[(0, i, j)] = (
            -iu1 * epsilon((i, j), X, U)
            + 0.5 * iu3 * X2 * epsilon((i, j), U, A)
            - iu3 * sum(epsilon((i, j, k), X, U, A) * X[k - 1] for k in range(1, n + 1))
        )
        out[(i, j, N)] = iu3 * epsilon((i, j), U, A)
    for idx in itertools.combinations(range(1, n + 1), 3):
        out[idx] = iu3 * epsilon(idx, X, U, A)
    return out


def kappa1(jet: CurveJet):
    """Relative curvature invariant of the negative-delta_4 class; constant
    exactly on the logarithmic-spiral curves."""
    jet.require_order(6, "kappa_1")
    g = gram_invariants(jet, max_ell=4)
    d4 = g.delta4_jet
    delta4 = d4.value
    if not delta4 < 0.0 or is_conformal_circle(delta4, g.alpha1):
        raise UndefinedInvariantError(
            f"kappa_1 undefined for delta_4 = {delta4:.3e}"
        )
    d4p = d4.differentiate()
    d4pp = d4p.differentiate()
    return (
        -0.5
        * (-delta4) ** -2.5
        * (
            g.alpha1 * delta4**2
            - 0.5 * delta4 * d4pp.value
            + 9.0 / 16.0 * d4p.value ** 2
        )
    )


def enforce_alpha1_stationary(jet: CurveJet) -> CurveJet:
    """Shift the fourth derivative along the velocity so that the first
    invariant has zero parameter derivative at this point.

    The derivative of alpha_1 is linear in the fourth derivative with
    slope 2 per unit of velocity component, so a single scalar solve
    suffices; used to produce constrained random jets for the reduction
    identity tests.
    """
    jet.require_order(4, "alpha_1 constraint")
    g = gram_invariants(jet, max_ell=3)
    a1p = g.alpha1_jet.differentiate().value
    derivs = [jet.derivative(k) for k in range(jet.order + 1)]
    derivs[4] = derivs[4] - 0.5 * a1p * jet.U
    return CurveJet.from_derivatives(jet.t, derivs)


@dataclass
class IdentityResiduals:
    tractor_slot: np.ndarray
    mercator_expansion: np.ndarray
    identity_defect: float


def mercator_tractor_residuals(jet: CurveJet) -> IdentityResiduals:
    """Both sides of the consistency identity between the tractor route and
    the fourth-order flow: the spatial slot of the dependency combination
    of the fifth canonical tractor, and the expanded parameter derivative
    of the flow's constant vector.

    The defect ``max |expansion + u^{-1} * slot|`` vanishes exactly on jets
    with stationary alpha_1 (the slot is oriented to make the signs cancel
    that way round).
    """
    jet.require_order(4, "reduction identity")
    U, A, Ap, App = jet.U, jet.A, jet.Ap, jet.App
    u2 = jet.u2
    u = math.sqrt(u2)
    UA = float(U @ A)
    UAp = float(U @ Ap)
    UApp = float(U @ App)
    AA = float(A @ A)
    AAp = float(A @ Ap)

    mercator = (
        -24 * u2**-4 * UA**3 * U
        + 16 * u2**-3 * UA * UAp * U
        + 12 * u2**-3 * UA * AA * U
        + 12 * u2**-3 * UA**2 * A
        - 2 * u2**-2 * UApp * U
        - 4 * u2**-2 * AAp * U
        - 4 * u2**-2 * UAp * A
        - 3 * u2**-2 * AA * A
        - 4 * u2**-2 * UA * Ap
        + u2**-1 * App
    )
    # spatial slot of the dependency combination, with the fourth-derivative
    # inner product eliminated via stationarity of alpha_1
    slot = (
        -App / u
        + 4 * UA / u**3 * Ap
        - (12 * UA**2 / u**5 - 4 * UAp / u**3 - 3 * AA / u**3) * A
        + (6 * UA * AA / u**5 - 4 * AAp / u**3) * U
    )
    defect = float(np.max(np.abs(mercator + slot / u)))
    return IdentityResiduals(slot, mercator, defect)


def parallel_defect(curve, t, h, count=3, scaled=False):
    """Max-norm of the discrete connection derivative of the wedge of the
    first ``count`` canonical tractors along a curve sampler.

    ``curve`` maps a parameter value to a :class:`CurveJet`.  With
    ``scaled`` the wedge is normalized by ``(-delta_4)^(-1/2)`` first.  A
    parallel wedge decays at second order in ``h``; a non-parallel one
    stays bounded away from zero.
    """
    if h <= 0:
        raise ValueError("h must be positive")

    def wedge_at(s):
        j = curve(s)
        w = wedge(canonical_tractors(j, count))
        if scaled:
            _, d4 = closed_form_alpha1_delta4(j)
            if not d4 < 0.0:
                raise UndefinedInvariantError("scaled wedge needs delta_4 < 0")
            w = w * (-d4) ** -0.5
        return w

    wp = wedge_at(t + h)
    wm = wedge_at(t - h)
    w0 = wedge_at(t)
    center = curve(t)
    deriv = (wp - wm) * (0.5 / h) + rho_wedge(center.U, w0)
    return deriv.max_abs()
