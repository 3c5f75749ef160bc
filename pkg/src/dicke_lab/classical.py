"""Classical limit: energy function, equations of motion, fixed points.

The classical Hamiltonian on (q1, p1, q2, p2) is

    H = omega/2 (p2^2 + q2^2) + eps/2 (p1^2 + q1^2) - eps J
        + sqrt(4J - (p1^2 + q1^2)) / sqrt(4J) * (G+ p1 p2 + G- q1 q2)

with G+- = G +- G'.  The equations of motion are generated from H with the
canonical convention qdot = dH/dp, pdot = -dH/dq (the analytic fixed-point
formulas below are the cross-check).  The atomic plane is restricted to the
disk q1^2 + p1^2 < 4J.
"""

import numpy as np
from dataclasses import dataclass, field
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .params import ModelParams, ParameterError


class DomainError(ValueError):
    """Phase point outside the disk q1^2 + p1^2 <= 4J."""


class IntegrationError(RuntimeError):
    """Trajectory integration failed; carries the last valid state."""

    def __init__(self, message, last_state=None, last_time=None):
        super().__init__(message)
        self.last_state = last_state
        self.last_time = last_time


@dataclass(frozen=True)
class PhasePoint:
    q1: float
    p1: float
    q2: float = 0.0
    p2: float = 0.0

    @property
    def h1(self):
        return 0.5 * (self.q1 ** 2 + self.p1 ** 2)

    def asarray(self):
        return np.array([self.q1, self.p1, self.q2, self.p2])

    @staticmethod
    def fromarray(y):
        return PhasePoint(*(float(v) for v in y))


def _check_domain(y, j, strict=False):
    r2 = y[0] ** 2 + y[1] ** 2
    if r2 > 4 * j or (strict and r2 >= 4 * j):
        raise DomainError(f"q1^2 + p1^2 = {r2:.6g} outside the disk of radius^2 {4 * j}")


def classical_energy(pt, params: ModelParams):
    """Value of the classical Hamiltonian at a phase point."""
    y = pt.asarray() if isinstance(pt, PhasePoint) else np.asarray(pt, dtype=float)
    _check_domain(y, params.j)
    q1, p1, q2, p2 = y
    root = np.sqrt(4 * params.j - (p1 ** 2 + q1 ** 2)) / np.sqrt(4 * params.j)
    return (0.5 * params.omega * (p2 ** 2 + q2 ** 2)
            + 0.5 * params.epsilon * (p1 ** 2 + q1 ** 2)
            - params.epsilon * params.j
            + root * (params.g_plus * p1 * p2 + params.g_minus * q1 * q2))


def eom_rhs(pt, params: ModelParams):
    """(q1dot, p1dot, q2dot, p2dot) from the canonical equations."""
    y = pt.asarray() if isinstance(pt, PhasePoint) else np.asarray(pt, dtype=float)
    _check_domain(y, params.j, strict=True)
    q1, p1, q2, p2 = y
    gp, gm = params.g_plus, params.g_minus
    s = np.sqrt(4 * params.j)
    u = np.sqrt(4 * params.j - (q1 ** 2 + p1 ** 2))
    b = gp * p1 * p2 + gm * q1 * q2
    return np.array([
        params.epsilon * p1 + gp * p2 * u / s - p1 * b / (s * u),
        -params.epsilon * q1 - gm * q2 * u / s + q1 * b / (s * u),
        params.omega * p2 + gp * p1 * u / s,
        -params.omega * q2 - gm * q1 * u / s,
    ])


def eom_jacobian(pt, params: ModelParams):
    """Analytic 4x4 linearization of eom_rhs."""
    y = pt.asarray() if isinstance(pt, PhasePoint) else np.asarray(pt, dtype=float)
    _check_domain(y, params.j, strict=True)
    q1, p1, q2, p2 = y
    eps, om = params.epsilon, params.omega
    gp, gm = params.g_plus, params.g_minus
    s = np.sqrt(4 * params.j)
    u = np.sqrt(4 * params.j - (q1 ** 2 + p1 ** 2))
    iu, iu3 = 1.0 / u, 1.0 / u ** 3
    b = gp * p1 * p2 + gm * q1 * q2
    jac = np.empty((4, 4))
    # F1 = eps p1 + (gp/s) p2 u - (1/s) p1 b / u
    jac[0, 0] = -(gp / s) * p2 * q1 * iu - (1 / s) * p1 * (gm * q2 * iu + b * q1 * iu3)
    jac[0, 1] = eps - (gp / s) * p2 * p1 * iu - (1 / s) * (b * iu + p1 * gp * p2 * iu + p1 ** 2 * b * iu3)
    jac[0, 2] = -(1 / s) * p1 * gm * q1 * iu
    jac[0, 3] = (gp / s) * u - (1 / s) * gp * p1 ** 2 * iu
    # F2 = -eps q1 - (gm/s) q2 u + (1/s) q1 b / u
    jac[1, 0] = -eps + (gm / s) * q2 * q1 * iu + (1 / s) * (b * iu + q1 * gm * q2 * iu + q1 ** 2 * b * iu3)
    jac[1, 1] = (gm / s) * q2 * p1 * iu + (1 / s) * q1 * (gp * p2 * iu + b * p1 * iu3)
    jac[1, 2] = -(gm / s) * u + (1 / s) * gm * q1 ** 2 * iu
    jac[1, 3] = (1 / s) * q1 * gp * p1 * iu
    # F3 = om p2 + (gp/s) p1 u
    jac[2, 0] = -(gp / s) * p1 * q1 * iu
    jac[2, 1] = (gp / s) * (u - p1 ** 2 * iu)
    jac[2, 2] = 0.0
    jac[2, 3] = om
    # F4 = -om q2 - (gm/s) q1 u
    jac[3, 0] = -(gm / s) * (u - q1 ** 2 * iu)
    jac[3, 1] = (gm / s) * q1 * p1 * iu
    jac[3, 2] = -om
    jac[3, 3] = 0.0
    return jac


STABLE = "stable-center"
UNSTABLE = "unstable"
MARGINAL = "marginal"


@dataclass(frozen=True)
class FixedPoint:
    kind: str                       # trivial | hopf_circle | pitchfork_I | pitchfork_II
    representative: PhasePoint
    stability: str
    radii: tuple = None             # (R1, R2) for hopf_circle
    phase_lock: float = None        # c in (q2, p2) = -c (q1, p1) on the circle


def _radii(j, coupling, eps, om):
    """Branch radii R1, R2 for an effective coupling (G, G+, or G-)."""
    r1sq = 2 * j * (1 - eps * om / coupling ** 2)
    r2sq = j * (coupling ** 4 - eps ** 2 * om ** 2) / (coupling ** 2 * om ** 2)
    return np.sqrt(r1sq), np.sqrt(r2sq)


def hopf_circle_point(params: ModelParams, angle):
    """Point on the integrable non-trivial equilibrium circle at a given angle."""
    r1, _ = _radii(params.j, params.g, params.epsilon, params.omega)
    q1, p1 = r1 * np.cos(angle), r1 * np.sin(angle)
    c = _phase_lock(params, r1)
    return PhasePoint(q1=q1, p1=p1, q2=-c * q1, p2=-c * p1)


def _phase_lock(params, r1):
    """c = (G/(omega sqrt(2J))) sqrt(2J - R1^2/2)."""
    h1 = 0.5 * r1 ** 2
    return params.g / (params.omega * np.sqrt(2 * params.j)) * np.sqrt(2 * params.j - h1)


def analytic_fixed_points(params: ModelParams):
    """Closed-form equilibrium branches with their stability labels.

    Integrable case (g_prime = 0): the origin plus, above G^2 = eps*omega,
    the degenerate circle (Hopf scenario).  Otherwise: the origin plus the
    pitchfork pairs, type I on the p axes above G+^2 = eps*omega and type II
    on the q axes above G-^2 = eps*omega.
    """
    eps, om, j = params.epsilon, params.omega, params.j
    crit = eps * om
    out = []
    origin_stable = max(params.g_plus, abs(params.g_minus)) ** 2 < crit
    out.append(FixedPoint(kind="trivial", representative=PhasePoint(0, 0, 0, 0),
                          stability=STABLE if origin_stable else UNSTABLE))
    if params.g_prime == 0:
        if params.g ** 2 > crit:
            r1, r2 = _radii(j, params.g, eps, om)
            rep = PhasePoint(q1=0.0, p1=float(r1), q2=0.0,
                             p2=float(-_phase_lock(params, r1) * r1))
            out.append(FixedPoint(kind="hopf_circle", representative=rep,
                                  stability=STABLE, radii=(float(r1), float(r2)),
                                  phase_lock=float(_phase_lock(params, r1))))
        return out
    if params.g_plus ** 2 > crit:
        r1, r2 = _radii(j, params.g_plus, eps, om)
        label = STABLE if params.g_minus ** 2 < crit else UNSTABLE
        for sign in (1, -1):
            out.append(FixedPoint(
                kind="pitchfork_I",
                representative=PhasePoint(q1=0.0, p1=sign * float(r1),
                                          q2=0.0, p2=-sign * float(r2)),
                stability=label))
    if params.g_minus > 0 and params.g_minus ** 2 > crit:
        r1, r2 = _radii(j, params.g_minus, eps, om)
        for sign in (1, -1):
            out.append(FixedPoint(
                kind="pitchfork_II",
                representative=PhasePoint(q1=sign * float(r1), p1=0.0,
                                          q2=-sign * float(r2), p2=0.0),
                stability=STABLE))
    return out


# symplectic pairing matrix for ordering (q1, p1, q2, p2)
_SYMP = np.array([[0, 1, 0, 0],
                  [-1, 0, 0, 0],
                  [0, 0, 0, 1],
                  [0, 0, -1, 0]], dtype=float)


def energy_hessian(pt, params: ModelParams):
    """Symmetric second-derivative matrix of the classical energy."""
    hess = -_SYMP @ eom_jacobian(pt, params)
    return 0.5 * (hess + hess.T)


def classify_stability(pt, params: ModelParams, fp_tol=1e-8, eig_tol=1e-8):
    """(jacobian, label) for a fixed point of the flow.

    Unstable when some linearization eigenvalue has real part above eig_tol.
    A spectrally neutral point is then judged by the energy Hessian
    (Lagrange-Dirichlet): definite (up to neutral zero directions) means
    stable-center, indefinite means the point is no longer an energy
    extremum and is labeled unstable; anything else is marginal.  The
    energetic step matters in the integrable case, where the origin keeps
    purely imaginary eigenvalues above the transition but stops being the
    energy minimum.
    """
    rhs = eom_rhs(pt, params)
    if np.linalg.norm(rhs) > fp_tol:
        raise ParameterError(f"not a fixed point: |rhs| = {np.linalg.norm(rhs):.3e}")
    jac = eom_jacobian(pt, params)
    w = np.linalg.eigvals(jac)
    if np.any(np.real(w) > eig_tol):
        return jac, UNSTABLE
    if np.any(np.abs(np.real(w)) > eig_tol):
        return jac, MARGINAL
    hess = energy_hessian(pt, params)
    he = np.linalg.eigvalsh(hess)
    scale = max(np.max(np.abs(he)), 1.0)
    tol = eig_tol * scale
    if np.all(he > tol) or np.all(he < -tol):
        return jac, STABLE
    if np.any(he > tol) and np.any(he < -tol):
        return jac, UNSTABLE
    # semi-definite: neutral directions plus a one-signed rest
    rest = he[np.abs(he) > tol]
    if rest.size and (np.all(rest > 0) or np.all(rest < 0)):
        return jac, STABLE
    return jac, MARGINAL


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray = field(repr=False)
    samples: np.ndarray = field(repr=False)   # shape (len(times), 4)
    energy_drift: float = 0.0

    def energies(self, params):
        return np.array([classical_energy(y, params) for y in self.samples])


def integrate_trajectory(p0, params: ModelParams, t_final, tol=1e-10, n_samples=2001):
    """Adaptive high-order integration with an energy-drift acceptance gate."""
    y0 = p0.asarray() if isinstance(p0, PhasePoint) else np.asarray(p0, dtype=float)
    _check_domain(y0, params.j, strict=True)
    e0 = classical_energy(y0, params)
    t_eval = np.linspace(0.0, t_final, n_samples)

    def fun(_t, y):
        return eom_rhs(y, params)

    def boundary(_t, y):
        return 4 * params.j - (y[0] ** 2 + y[1] ** 2) - 1e-12
    boundary.terminal = True
    boundary.direction = -1

    for rtol in (max(tol * 1e-3, 1e-13), 1e-13):
        sol = solve_ivp(fun, (0.0, t_final), y0, method="DOP853",
                        rtol=rtol, atol=rtol * 1e-2, t_eval=t_eval,
                        events=boundary, dense_output=False)
        if not sol.success or (sol.t_events[0].size and sol.t[-1] < t_final):
            raise IntegrationError(
                f"integration stopped at t = {sol.t[-1]:.6g}: "
                f"{'domain boundary reached' if sol.t_events[0].size else sol.message}",
                last_state=PhasePoint.fromarray(sol.y[:, -1]), last_time=float(sol.t[-1]))
        energies = np.array([classical_energy(y, params) for y in sol.y.T])
        drift = float(np.max(np.abs(energies - e0)))
        if drift <= tol:
            return Trajectory(times=sol.t, samples=sol.y.T, energy_drift=drift)
    raise IntegrationError(f"energy drift {drift:.3e} above tolerance {tol:.3e}",
                           last_state=PhasePoint.fromarray(sol.y[:, -1]),
                           last_time=float(sol.t[-1]))


def point_at_energy(params: ModelParams, base, energy, axis="q1", span=None):
    """Move one coordinate of `base` until the energy matches `energy`.

    Used to seed trajectories near a fixed point at a prescribed energy.
    """
    idx = {"q1": 0, "p1": 1, "q2": 2, "p2": 3}[axis]
    y = base.asarray() if isinstance(base, PhasePoint) else np.asarray(base, dtype=float)
    x0 = y[idx]
    if span is None:
        span = 0.5 * np.sqrt(4 * params.j)

    def f(x):
        z = y.copy()
        z[idx] = x
        return classical_energy(z, params) - energy

    f0 = f(x0)
    if f0 == 0:
        return PhasePoint.fromarray(y)
    lo, hi = x0, x0 + span
    if f(hi) * f0 > 0:
        hi = x0 - span
        if f(hi) * f0 > 0:
            raise ParameterError("could not bracket the requested energy")
    root = brentq(f, min(lo, hi), max(lo, hi), xtol=1e-14)
    z = y.copy()
    z[idx] = root
    return PhasePoint.fromarray(z)


def bifurcation_scan(base: ModelParams, lambda_grid, mode):
    """Branch table across a coupling grid.

    Rows are dicts with the scan coordinate, branch kind, representative
    coordinates, radii (hopf_circle), and stability label.
    """
    grid = np.asarray(lambda_grid, dtype=float)
    if np.any(np.diff(grid) <= 0):
        raise ParameterError("lambda grid must be strictly increasing")
    rows = []
    for lam in grid:
        p = base.at_lambda(lam, mode)
        for fp in analytic_fixed_points(p):
            rep = fp.representative
            rows.append({
                "lambda": float(p.lam), "lambda_plus": float(p.lam_plus),
                "kind": fp.kind, "stability": fp.stability,
                "q1": rep.q1, "p1": rep.p1, "q2": rep.q2, "p2": rep.p2,
                "r1": None if fp.radii is None else fp.radii[0],
                "r2": None if fp.radii is None else fp.radii[1],
            })
    return rows
