"""The conformally invariant fourth-order curve flow and its Hamiltonian form.

The flow says that a particular vector ``C`` built from the first three
derivative vectors is constant along the curve.  Writing the associated
second-order Lagrangian in Ostrogradsky variables produces a polynomial
Hamiltonian on the 4n-dimensional phase space ``(X, U, P, R)``; the
functions here convert between the two pictures, integrate the flow with
classical RK4, and evaluate Poisson brackets by central differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import VELOCITY_FLOOR, CurveJet, DegenerateVelocityError
from .jets import JetScalar, JetVector

__all__ = [
    "PhasePoint",
    "Trajectory",
    "mercator_C",
    "lagrangians",
    "circle_residual",
    "phase_from_jet",
    "accel_from_phase",
    "hamiltonian",
    "hamilton_rhs",
    "integrate",
    "poisson_bracket_fd",
    "solution_jet",
]


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """State of the first-order system: position, velocity, and the two
    conjugate momenta."""

    X: np.ndarray
    U: np.ndarray
    P: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        for name in ("X", "U", "P", "R"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = self.X.size
        if any(getattr(self, k).size != n for k in ("U", "P", "R")):
            raise ValueError("phase components must share one dimension")
        u2 = float(self.U @ self.U)
        if u2 <= VELOCITY_FLOOR:
            raise DegenerateVelocityError(f"squared speed {u2:.3e} below floor")

    @property
    def dim(self):
        return self.X.size

    @property
    def u2(self):
        return float(self.U @ self.U)

    def flat(self):
        return np.concatenate([self.X, self.U, self.P, self.R])

    @classmethod
    def from_flat(cls, y, n):
        return cls(y[0:n], y[n : 2 * n], y[2 * n : 3 * n], y[3 * n : 4 * n])


def mercator_C(jet: CurveJet):
    """The conserved vector of the fourth-order flow; identically zero on
    logarithmic spirals and straight lines."""
    jet.require_order(3, "flow vector")
    U, A, Ap = jet.U, jet.A, jet.Ap
    u2 = jet.u2
    AU = float(A @ U)
    AA = float(A @ A)
    ApU = float(Ap @ U)
    return (
        Ap - AA / u2 * U - 2 * AU / u2 * A + 4 * AU**2 / u2**2 * U - 2 * ApU / u2 * U
    ) / u2


def lagrangians(jet: CurveJet):
    """Third-order Lagrangian ``L`` and second-order Lagrangian ``L1``.

    They differ by the total derivative of ``u^{-2} <U, A>``, which is
    evaluated through the jet, so ``L`` needs one more derivative level.
    """
    jet.require_order(3, "Lagrangian")
    U, A = jet.U, jet.A
    u2 = jet.u2
    UA = float(U @ A)
    L1 = 0.5 * float(A @ A) / u2 - UA**2 / u2**2

    u_jet = jet.velocity_jet()
    a_jet = u_jet.differentiate()
    k = a_jet.order
    q = u_jet.truncated(k).dot(a_jet) / u_jet.truncated(k).norm_sq()
    L = L1 + q.differentiate().value
    return L, L1


def circle_residual(jet: CurveJet):
    """Left side of the third-order conformal-circle equation; zero exactly
    on projectively parametrized circles and straight lines."""
    jet.require_order(3, "circle residual")
    U, A, Ap = jet.U, jet.A, jet.Ap
    u2 = jet.u2
    return Ap - 3 * float(A @ U) / u2 * A + 1.5 * float(A @ A) / u2 * U


def phase_from_jet(jet: CurveJet) -> PhasePoint:
    """Ostrogradsky momenta of the curve point: ``P`` is minus the flow
    vector, ``R`` the velocity-weighted acceleration."""
    U, A = jet.U, jet.A
    u2 = jet.u2
    R = A / u2 - 2 * float(U @ A) / u2**2 * U
    return PhasePoint(jet.X, U, -mercator_C(jet), R)


def accel_from_phase(p: PhasePoint):
    """Invert the momentum definitions for the second and third derivative
    vectors."""
    u2 = p.u2
    UR = float(p.U @ p.R)
    UP = float(p.U @ p.P)
    R2 = float(p.R @ p.R)
    A = -2 * UR * p.U + u2 * p.R
    Ap = (2 * UP + 4 * UR**2 - u2 * R2) * p.U - 2 * u2 * UR * p.R - u2 * p.P
    return A, Ap


def hamiltonian(p: PhasePoint):
    UR = float(p.R @ p.U)
    return float(p.P @ p.U) - UR**2 + 0.5 * p.u2 * float(p.R @ p.R)


@dataclass(frozen=True, eq=False)
class PhaseTangent:
    """Tangent vector to the phase space (no velocity validation)."""

    X: np.ndarray
    U: np.ndarray
    P: np.ndarray
    R: np.ndarray

    def flat(self):
        return np.concatenate([self.X, self.U, self.P, self.R])


def hamilton_rhs(p: PhasePoint) -> PhaseTangent:
    """Right-hand sides of the four first-order equations of motion."""
    u2 = p.u2
    UR = float(p.U @ p.R)
    R2 = float(p.R @ p.R)
    return PhaseTangent(
        p.U.copy(),
        u2 * p.R - 2 * UR * p.U,
        np.zeros(p.dim),
        -R2 * p.U + 2 * UR * p.R - p.P,
    )


@dataclass
class Trajectory:
    """Stored samples of an integrated flow (every ``store_every``-th step)."""

    ts: np.ndarray
    states: np.ndarray  # shape (len(ts), 4n)
    dim: int
    h: float
    method: str = "rk4"

    def __len__(self):
        return self.ts.size

    def phase_point(self, k) -> PhasePoint:
        return PhasePoint.from_flat(self.states[k], self.dim)

    def phase_points(self):
        return [self.phase_point(k) for k in range(len(self))]


def _rhs_flat(y, n):
    U = y[n : 2 * n]
    P = y[2 * n : 3 * n]
    R = y[3 * n : 4 * n]
    u2 = U @ U
    if u2 <= VELOCITY_FLOOR:
        raise DegenerateVelocityError(f"squared speed {u2:.3e} below floor")
    UR = U @ R
    out = np.empty_like(y)
    out[0:n] = U
    out[n : 2 * n] = u2 * R - 2.0 * UR * U
    out[2 * n : 3 * n] = 0.0
    out[3 * n : 4 * n] = -(R @ R) * U + 2.0 * UR * R - P
    return out


class FlowDegeneracyError(DegenerateVelocityError):
    """Velocity degenerated mid-flow; carries the failure time and the
    partial trajectory accumulated so far."""

    def __init__(self, t, trajectory):
        super().__init__(f"velocity degenerated at t = {t:.6g}")
        self.t = t
        self.trajectory = trajectory


def integrate(p0: PhasePoint, t_end: float, h: float = 1e-3, store_every: int = 10) -> Trajectory:
    """Classical fixed-step RK4 for the first-order system.

    Samples are stored every ``store_every`` steps (plus the final point).
    Velocity degeneracy anywhere in a stage aborts with
    :class:`FlowDegeneracyError` holding the partial trajectory.
    """
    if h <= 0 or t_end <= 0:
        raise ValueError("need h > 0 and t_end > 0")
    n = p0.dim
    steps = int(round(t_end / h))
    y = p0.flat().copy()
    ts = [0.0]
    states = [y.copy()]
    t = 0.0
    for k in range(steps):
        try:
            k1 = _rhs_flat(y, n)
            k2 = _rhs_flat(y + 0.5 * h * k1, n)
            k3 = _rhs_flat(y + 0.5 * h * k2, n)
            k4 = _rhs_flat(y + h * k3, n)
        except DegenerateVelocityError:
            partial = Trajectory(np.array(ts), np.array(states), n, h)
            raise FlowDegeneracyError(t, partial) from None
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = (k + 1) * h
        if (k + 1) % store_every == 0 or k == steps - 1:
            ts.append(t)
            states.append(y.copy())
    return Trajectory(np.array(ts), np.array(states), n, h)


def poisson_bracket_fd(f, g, p: PhasePoint, step: float = 1e-5):
    """Canonical bracket of two phase functions by central differences.

    The per-coordinate step is ``step * (1 + |coordinate|)``, balancing
    truncation against round-off for order-unity data.
    """
    n = p.dim
    y = p.flat()

    def grad(fun):
        out = np.empty(4 * n)
        for i in range(4 * n):
            hi = step * (1.0 + abs(y[i]))
            yp = y.copy()
            ym = y.copy()
            yp[i] += hi
            ym[i] -= hi
            out[i] = (
                fun(PhasePoint.from_flat(yp, n)) - fun(PhasePoint.from_flat(ym, n))
            ) / (2.0 * hi)
        return out

    df = grad(f)
    dg = grad(g)
    dfX, dfU, dfP, dfR = df[0:n], df[n : 2 * n], df[2 * n : 3 * n], df[3 * n :]
    dgX, dgU, dgP, dgR = dg[0:n], dg[n : 2 * n], dg[2 * n : 3 * n], dg[3 * n :]
    return float(dfX @ dgP + dfU @ dgR - dgX @ dfP - dgU @ dfR)


def solution_jet(p: PhasePoint, order: int = 6) -> CurveJet:
    """Taylor lift of the flow through a phase point.

    The right-hand side is polynomial in the state, so the Taylor
    coefficients of the solution follow by repeated substitution of the
    truncated state jet into the equations of motion; the position part is
    returned as a curve jet, all derivatives of the actual solution.
    """
    n = p.dim
    y0 = p.flat()
    coeffs = np.zeros((order + 1, 4 * n))
    coeffs[0] = y0
    for k in range(order):
        state = JetVector([JetScalar(coeffs[: k + 1, i]) for i in range(4 * n)])
        U = JetVector(state.components[n : 2 * n])
        P = JetVector(state.components[2 * n : 3 * n])
        R = JetVector(state.components[3 * n : 4 * n])
        u2 = U.norm_sq()
        UR = U.dot(R)
        R2 = R.norm_sq()
        rhs = (
            list(U.components)
            + list((u2 * R - 2.0 * UR * U).components)
            + [JetScalar.constant(0.0, k) for _ in range(n)]
            + list((-1.0 * R2 * U + 2.0 * UR * R - P).components)
        )
        for i, comp in enumerate(rhs):
            coeffs[k + 1, i] = comp.coeffs[k] / (k + 1)
    pos = JetVector([JetScalar(coeffs[:, i]) for i in range(n)])
    return CurveJet(0.0, pos)
