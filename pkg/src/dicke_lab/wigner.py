"""Atomic (spin-J) Wigner function on the planar phase-space disk.

The kernel is the irreducible-tensor spin Wigner representation:
rho_KQ = Tr(rho T_KQ^dagger) with orthonormal tensor operators built from
Clebsch-Gordan coefficients, and

    W(theta, phi) = sqrt(4 pi / (2J+1)) sum_KQ rho_KQ Y_KQ(theta, phi).

With the measure dmu = ((2J+1)/4pi) sin(theta) dtheta dphi this satisfies
the unit-integral and Parseval identities exactly.  The sphere is mapped to
the disk q1^2 + p1^2 < 4J with |J,-J> at the origin of the plane and
q1^2 + p1^2 = 2J (1 - cos(theta_plane)); pulled back to the plane the
measure is flat: dmu = ((2J+1)/(4 pi J)) dq1 dp1.
"""

import numpy as np
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .params import ModelParams, ParameterError, _is_half_integer

try:  # scipy >= 1.15
    from scipy.special import sph_harm_y as _sph_harm_y

    def _sph_harm(k, q, theta, phi):
        return _sph_harm_y(k, q, theta, phi)
except ImportError:  # pragma: no cover
    from scipy.special import sph_harm as _sph_harm_old

    def _sph_harm(k, q, theta, phi):
        return _sph_harm_old(q, k, phi, theta)


def _as_twice_int(x, name):
    t = 2 * x
    if abs(t - round(t)) > 1e-9:
        raise ParameterError(f"{name} must be integer or half-integer, got {x}")
    return int(round(t))


def clebsch_gordan(j1, m1, j2, m2, j, m):
    """<j1 m1; j2 m2 | j m> in the Condon-Shortley convention.

    Exact rational-square-root evaluation (Racah's closed form with integer
    factorials); returns 0 for violated selection rules.
    """
    tj1, tm1 = _as_twice_int(j1, "j1"), _as_twice_int(m1, "m1")
    tj2, tm2 = _as_twice_int(j2, "j2"), _as_twice_int(m2, "m2")
    tj, tm = _as_twice_int(j, "j"), _as_twice_int(m, "m")
    if (tj1 + tm1) % 2 or (tj2 + tm2) % 2 or (tj + tm) % 2:
        raise ParameterError("m must differ from j by an integer")
    if tm1 + tm2 != tm:
        return 0.0
    if not (abs(tj1 - tj2) <= tj <= tj1 + tj2) or (tj1 + tj2 + tj) % 2:
        return 0.0
    if abs(tm1) > tj1 or abs(tm2) > tj2 or abs(tm) > tj:
        return 0.0

    def half(t):
        return t // 2

    a = half(tj1 + tj2 - tj)
    b = half(tj1 - tj2 + tj)
    c = half(-tj1 + tj2 + tj)
    k_lo = max(0, half(tj2 - tj - tm1), half(tj1 + tm2 - tj))
    k_hi = min(a, half(tj1 - tm1), half(tj2 + tm2))
    total = Fraction(0)
    for k in range(k_lo, k_hi + 1):
        den = (factorial(k) * factorial(a - k)
               * factorial(half(tj1 - tm1) - k) * factorial(half(tj2 + tm2) - k)
               * factorial(half(tj - tj2 + tm1) + k) * factorial(half(tj - tj1 - tm2) + k))
        total += Fraction(-1 if k % 2 else 1, den)
    if total == 0:
        return 0.0
    pref = Fraction((tj + 1) * factorial(a) * factorial(b) * factorial(c),
                    factorial(half(tj1 + tj2 + tj) + 1))
    pref *= (factorial(half(tj1 + tm1)) * factorial(half(tj1 - tm1))
             * factorial(half(tj2 + tm2)) * factorial(half(tj2 - tm2))
             * factorial(half(tj + tm)) * factorial(half(tj - tm)))
    sign = 1.0 if total > 0 else -1.0
    return sign * float(np.sqrt(float(pref * total * total)))


@lru_cache(maxsize=None)
def _tensor_operator(twice_j, k, q):
    """Orthonormal tensor operator T_KQ on the |J, m> basis (m ascending)."""
    j = twice_j / 2.0
    dim = twice_j + 1
    t = np.zeros((dim, dim))
    scale = np.sqrt((2 * k + 1) / (twice_j + 1))
    for bi in range(dim):
        m = -j + bi
        ai = bi + q
        if 0 <= ai < dim:
            t[ai, bi] = scale * clebsch_gordan(j, m, k, q, j, m + q)
    return t


def tensor_operator(j, k, q):
    return _tensor_operator(_as_twice_int(j, "j"), int(k), int(q)).copy()


def validate_density_matrix(rho, tol=1e-8):
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ParameterError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ParameterError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ParameterError("density matrix trace is not 1")
    return rho


@dataclass(frozen=True)
class MultipoleDecomposition:
    j: float
    components: dict = field(repr=False)   # {(K, Q): complex}, K = 0..2J

    def purity(self):
        return float(sum(abs(c) ** 2 for c in self.components.values()))


def multipole_decompose(rho, j):
    """rho_KQ = Tr(rho T_KQ^dagger) for K = 0..2J, Q = -K..K."""
    rho = validate_density_matrix(rho)
    twice_j = _as_twice_int(j, "j")
    if rho.shape[0] != twice_j + 1:
        raise ParameterError("density matrix dimension does not match j")
    comps = {}
    for k in range(twice_j + 1):
        for q in range(-k, k + 1):
            t = _tensor_operator(twice_j, k, q)
            comps[(k, q)] = complex(np.sum(rho * t.conj()))
    return MultipoleDecomposition(j=twice_j / 2.0, components=comps)


def _values_on_sphere(decomp, theta, phi):
    """W at sphere points; theta, phi broadcastable arrays."""
    twice_j = int(round(2 * decomp.j))
    out = np.zeros(np.broadcast(theta, phi).shape)
    for k in range(twice_j + 1):
        for q in range(k + 1):
            c = decomp.components.get((k, q), 0.0)
            if abs(c) < 1e-300:
                continue
            y = _sph_harm(k, q, theta, phi)
            term = np.real(c * y)
            out += term if q == 0 else 2.0 * term
    return np.sqrt(4 * np.pi / (twice_j + 1)) * out


def _plane_to_sphere(x, y):
    """Scaled plane coords (x = q1/sqrt(4J), y = p1/sqrt(4J)) to (theta, phi).

    The plane origin (state |J,-J>) sits at theta = pi; a spin coherent
    state displaced along +p1 has mean spin along +x on the sphere.
    """
    r2 = x ** 2 + y ** 2
    cos_t = np.clip(2.0 * r2 - 1.0, -1.0, 1.0)
    theta = np.arccos(cos_t)
    phi = -np.arctan2(x, y)
    return theta, phi


def evaluate_wigner_points(decomp, x, y):
    """W at arbitrary scaled plane points inside the unit disk."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x ** 2 + y ** 2 >= 1.0):
        raise ParameterError("plane points must lie inside the open unit disk")
    theta, phi = _plane_to_sphere(x, y)
    return _values_on_sphere(decomp, theta, phi)


DEFAULT_GRID_N = 512
DEFAULT_GRID_RADIUS = 0.999


@dataclass(frozen=True)
class WignerGrid:
    x: np.ndarray = field(repr=False)        # 1D axis, scaled q1/sqrt(4J)
    y: np.ndarray = field(repr=False)        # 1D axis, scaled p1/sqrt(4J)
    values: np.ndarray = field(repr=False)   # (len(y), len(x)), NaN outside disk
    j: float = 0.5
    radius: float = DEFAULT_GRID_RADIUS
    decomp: MultipoleDecomposition = None
    params: ModelParams = None

    @property
    def cell(self):
        return float(self.x[1] - self.x[0])


def evaluate_wigner_plane(decomp, n=DEFAULT_GRID_N, radius=DEFAULT_GRID_RADIUS,
                          params=None):
    """W on a uniform n x n grid over the disk of the scaled plane."""
    if not 0 < radius < 1:
        raise ParameterError("grid radius must be in (0, 1)")
    axis = np.linspace(-radius, radius, n)
    xx, yy = np.meshgrid(axis, axis)
    inside = xx ** 2 + yy ** 2 < radius ** 2
    vals = np.full((n, n), np.nan)
    theta, phi = _plane_to_sphere(xx[inside], yy[inside])
    vals[inside] = _values_on_sphere(decomp, theta, phi)
    return WignerGrid(x=axis, y=axis, values=vals, j=decomp.j, radius=radius,
                      decomp=decomp, params=params)


def _sphere_quadrature(twice_j):
    """Gauss-Legendre x uniform-phi nodes, exact for the kernel band limit."""
    n_t = twice_j + 2
    n_p = 2 * twice_j + 2
    nodes, weights = np.polynomial.legendre.leggauss(n_t)
    theta = np.arccos(nodes)
    phi = 2 * np.pi * np.arange(n_p) / n_p
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    ww = np.broadcast_to(weights[:, None], tt.shape) * (2 * np.pi / n_p)
    # measure ((2J+1)/4pi) sin(theta) dtheta dphi
    ww = ww * (twice_j + 1) / (4 * np.pi)
    return tt, pp, ww


def sphere_integrals(decomp):
    """dict with total = integral W dmu, square = integral W^2 dmu,
    neg_volume = integral max(0, -W) dmu, min_value = min W on the nodes."""
    twice_j = int(round(2 * decomp.j))
    tt, pp, ww = _sphere_quadrature(twice_j)
    w = _values_on_sphere(decomp, tt, pp)
    return {
        "total": float(np.sum(w * ww)),
        "square": float(np.sum(w ** 2 * ww)),
        "neg_volume": float(np.sum(np.maximum(0.0, -w) * ww)),
        "min_value": float(np.min(w)),
    }


def half_height_area(grid: WignerGrid, n_atoms, hbar=1.0, level=0.5):
    """Phase-space area of {W >= level * max W} in unscaled (q1, p1) units.

    Cell counting with fractional weighting of boundary cells (bilinear
    subsampling).  Returns (A, A / (n_atoms * hbar)).
    """
    vals = grid.values
    vmax = np.nanmax(vals)
    if not np.isfinite(vmax) or vmax <= 0:
        raise ParameterError("grid has no positive maximum")
    t = level * vmax
    v00 = vals[:-1, :-1]
    v10 = vals[:-1, 1:]
    v01 = vals[1:, :-1]
    v11 = vals[1:, 1:]
    finite = np.isfinite(v00) & np.isfinite(v10) & np.isfinite(v01) & np.isfinite(v11)
    above = np.zeros_like(v00, dtype=int)
    for v in (v00, v10, v01, v11):
        above += (np.nan_to_num(v, nan=-np.inf) >= t)
    frac = np.zeros_like(v00)
    frac[finite & (above == 4)] = 1.0
    mixed = finite & (above > 0) & (above < 4)
    if np.any(mixed):
        c00, c10, c01, c11 = (v[mixed] for v in (v00, v10, v01, v11))
        ns = 4
        u = (np.arange(ns) + 0.5) / ns
        count = np.zeros(c00.shape)
        for a in u:
            for b in u:
                vv = (c00 * (1 - a) * (1 - b) + c10 * a * (1 - b)
                      + c01 * (1 - a) * b + c11 * a * b)
                count += vv >= t
        frac[mixed] = count / ns ** 2
    cell = grid.cell ** 2
    area_scaled = float(np.sum(frac) * cell)
    area = 4 * grid.j * area_scaled
    return area, area / (n_atoms * hbar)


def negativity_volume(grid: WignerGrid):
    """(integral of max(0, -W) dmu, min W).

    Quadrature uses the exact sphere nodes of the unit-integral identity;
    the minimum also considers the plane grid samples.
    """
    if grid.decomp is None:
        raise ParameterError("grid carries no multipole decomposition")
    ints = sphere_integrals(grid.decomp)
    grid_min = float(np.nanmin(grid.values))
    return ints["neg_volume"], min(ints["min_value"], grid_min)


def ridge_radius(grid: WignerGrid, sym_tol=1e-8, n_r=4096):
    """Scaled radius maximizing the azimuthal average of W.

    Only valid for azimuthally symmetric grids (diagonal rho_A); asymmetric
    input is rejected so callers fall back to 2D peak finding.
    """
    if grid.decomp is None:
        raise ParameterError("grid carries no multipole decomposition")
    scale = max(abs(c) for c in grid.decomp.components.values())
    asym = max((abs(c) for (k, q), c in grid.decomp.components.items() if q != 0),
               default=0.0)
    if asym > sym_tol * scale:
        raise ParameterError("grid is not azimuthally symmetric; use peak finding")
    r = np.linspace(0.0, grid.radius, n_r)
    prof = evaluate_wigner_points(grid.decomp, np.zeros_like(r), r)
    i = int(np.argmax(prof))
    if 0 < i < n_r - 1:
        # parabolic refinement
        y0, y1, y2 = prof[i - 1], prof[i], prof[i + 1]
        denom = y0 - 2 * y1 + y2
        if denom != 0:
            return float(r[i] + 0.5 * (y0 - y2) / denom * (r[1] - r[0]))
    return float(r[i])


def local_maxima(grid: WignerGrid, floor=0.5):
    """Strict 8-neighbor local maxima with W >= floor * max W.

    Returns a list of (x, y, W) sorted by descending W.
    """
    v = np.nan_to_num(grid.values, nan=-np.inf)
    t = floor * np.nanmax(grid.values)
    core = v[1:-1, 1:-1]
    mask = core >= t
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            nb = v[1 + di:v.shape[0] - 1 + di, 1 + dj:v.shape[1] - 1 + dj]
            # ties along symmetry axes: strict only against earlier scan order
            if (di, dj) < (0, 0):
                mask &= core >= nb
            else:
                mask &= core > nb
    iy, ix = np.nonzero(mask)
    peaks = [(float(grid.x[j + 1]), float(grid.y[i + 1]), float(core[i, j]))
             for i, j in zip(iy, ix)]
    return sorted(peaks, key=lambda p: -p[2])
