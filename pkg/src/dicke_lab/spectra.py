"""Ground states and low spectra of the Dicke Hamiltonian.

The integrable case (g_prime = 0) is solved block-by-block in the conserved
excitation number, which reduces every solve to a small tridiagonal problem.
The general case goes through parity blocks or the full matrix.
"""

import numpy as np
import scipy.linalg as la
import scipy.sparse.linalg as spla
from dataclasses import dataclass, field

from .params import ModelParams, ParameterError
from .hilbert import HilbertBasis, HamiltonianMatrix, build_basis, \
    assemble_hamiltonian, parity_blocks, _ladder_weight

DENSE_CUTOFF = 4000       # dense eigensolver up to this dimension
TIE_TOL_FACTOR = 1e-10    # block minima closer than this (times epsilon) tie
RESIDUAL_RTOL = 1e-9      # residual norm relative to ||H||


class ConvergenceError(RuntimeError):
    """Eigensolver or truncation scan failed to converge."""


@dataclass(frozen=True)
class EigenResult:
    energy: float
    vector: np.ndarray = field(repr=False)   # amplitudes over the full basis
    basis: HilbertBasis = field(repr=False)
    block_label: str = ""
    degenerate_flag: bool = False
    residual: float = 0.0


def _fix_sign(vec, tol=1e-12):
    """First amplitude above tol (in basis order) made positive."""
    nz = np.flatnonzero(np.abs(vec) > tol * max(1.0, np.abs(vec).max()))
    if nz.size and vec[nz[0]] < 0:
        return -vec
    return vec


def _residual(h: HamiltonianMatrix, energy, vec):
    return np.linalg.norm(h.matrix @ vec - energy * vec)


def ground_state(h: HamiltonianMatrix, use_parity=False):
    """Lowest eigenpair of the assembled Hamiltonian.

    Dense solver up to DENSE_CUTOFF, shift-invert Lanczos above.  With
    use_parity the two parity blocks are solved separately and the winner
    returned, which keeps the state parity-pure through quasi-degeneracies.
    """
    if use_parity:
        return _ground_state_parity(h)
    energy, vec = _lowest_pair(h.matrix)
    vec = _fix_sign(vec)
    res = _residual(h, energy, vec)
    if res > RESIDUAL_RTOL * h.norm():
        raise ConvergenceError(f"residual {res:.3e} above tolerance")
    basis = h.basis
    label = f"parity={'+1' if basis.states[int(np.argmax(np.abs(vec)))].parity(basis.j) > 0 else '-1'}"
    return EigenResult(energy=float(energy), vector=vec, basis=basis,
                       block_label=label, residual=float(res))


def _lowest_pair(mat):
    dim = mat.shape[0]
    if dim <= DENSE_CUTOFF:
        w, v = la.eigh(mat.toarray() if hasattr(mat, "toarray") else mat)
        return w[0], v[:, 0]
    try:
        w, v = spla.eigsh(mat, k=1, which="SA", maxiter=5000)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceError(f"Lanczos did not converge: {exc}") from exc
    return w[0], v[:, 0]


def _ground_state_parity(h: HamiltonianMatrix):
    basis = h.basis
    blocks = parity_blocks(basis)
    eps = h.params.epsilon if h.params is not None else 1.0
    solved = {}
    for par in (1, -1):
        idx = np.asarray(blocks[par])
        solved[par] = (*_lowest_pair(h.matrix[np.ix_(idx, idx)]), idx)
    # on a tie the even-parity block wins (deterministic)
    par = 1 if solved[1][0] <= solved[-1][0] + TIE_TOL_FACTOR * eps else -1
    energy, vec, idx = solved[par]
    degenerate = abs(solved[1][0] - solved[-1][0]) < TIE_TOL_FACTOR * eps
    full = np.zeros(basis.dim)
    full[idx] = vec
    full = _fix_sign(full)
    res = _residual(h, energy, full)
    if res > RESIDUAL_RTOL * h.norm():
        raise ConvergenceError(f"residual {res:.3e} above tolerance")
    return EigenResult(energy=float(energy), vector=full, basis=basis,
                       block_label=f"parity={'+1' if par > 0 else '-1'}",
                       degenerate_flag=degenerate, residual=float(res))


def _block_states(params: ModelParams, n_exc, n_max):
    """(n, m) pairs of one excitation block, ascending m."""
    j = params.j
    out = []
    for k in range(params.spin_dim):
        m = -j + k
        n = n_exc - k
        if 0 <= n <= n_max:
            out.append((n, m))
    return out


def _block_tridiag(params: ModelParams, states):
    """Diagonal and off-diagonal of one excitation block (g_prime = 0)."""
    j = params.j
    hbar = params.hbar
    diag = np.array([hbar * (params.omega * n + params.epsilon * m) for n, m in states])
    off = np.array([
        hbar * params.g / np.sqrt(2 * j) * np.sqrt(states[i][0]) * _ladder_weight(j, states[i][1])
        for i in range(len(states) - 1)
    ])
    # coupling |n, m> -> |n-1, m+1| links consecutive entries (ascending m)
    return diag, off


def ground_state_blockwise(params: ModelParams, n_max):
    """Ground state of the integrable case via excitation-number blocks.

    Scans every block reachable inside the truncation, diagonalizes each
    small tridiagonal matrix, and returns the global minimum embedded into
    the full |n, m> basis.  On a tie within TIE_TOL_FACTOR*epsilon the
    lower-N_exc block wins and degenerate_flag is set.
    """
    if params.g_prime != 0:
        raise ParameterError("blockwise solve requires g_prime = 0")
    basis = build_basis(params.j, n_max)
    best = None          # (energy, vec, states, n_exc)
    second = np.inf
    max_exc = n_max + params.n_atoms
    for n_exc in range(max_exc + 1):
        states = _block_states(params, n_exc, n_max)
        if not states:
            continue
        diag, off = _block_tridiag(params, states)
        if len(states) == 1:
            energy, vec = diag[0], np.ones(1)
        else:
            w, v = la.eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
            energy, vec = w[0], v[:, 0]
        if best is None or energy < best[0] - TIE_TOL_FACTOR * params.epsilon:
            if best is not None:
                second = min(second, best[0])
            best = (energy, vec, states, n_exc)
        else:
            second = min(second, energy)
    energy, vec, states, n_exc = best
    degenerate = bool(second - energy < TIE_TOL_FACTOR * params.epsilon)
    full = np.zeros(basis.dim)
    for amp, (n, m) in zip(vec, states):
        full[basis.position(n, m)] = amp
    full = _fix_sign(full)
    return EigenResult(energy=float(energy), vector=full, basis=basis,
                       block_label=f"n_exc={n_exc}", degenerate_flag=degenerate)


def low_spectrum(h: HamiltonianMatrix, k):
    """k lowest eigenvalues, ascending."""
    if not 1 <= k <= h.dim:
        raise ParameterError(f"k must be in [1, {h.dim}]")
    if h.dim <= DENSE_CUTOFF:
        w = la.eigh(h.dense(), eigvals_only=True)
        return w[:k]
    w = spla.eigsh(h.matrix, k=k, which="SA", return_eigenvectors=False)
    return np.sort(w)


def _scalar_diagnostics(params: ModelParams, n_max):
    """(E0, linear entropy) at a given truncation; path picked by g_prime."""
    from .entanglement import reduced_atomic_dm, linear_entropy
    if params.g_prime == 0:
        gs = ground_state_blockwise(params, n_max)
    else:
        basis = build_basis(params.j, n_max)
        gs = ground_state(assemble_hamiltonian(params, basis), use_parity=True)
    rho = reduced_atomic_dm(gs)
    return gs.energy, linear_entropy(rho)[1]


def converge_truncation(params: ModelParams, tol=1e-10, step=10, cap=400):
    """Smallest n_max (multiple of `step`) with converged E0 and entropy.

    Convergence means |E0(n) - E0(n+step)| < tol and |S(n) - S(n+step)| <
    10*tol at the supplied (largest requested) coupling.
    """
    if tol <= 0:
        raise ParameterError("tol must be positive")
    if params.g == 0 and params.g_prime == 0:
        return 0
    prev = _scalar_diagnostics(params, 0)
    n = 0
    while n < cap:
        nxt = n + step
        cur = _scalar_diagnostics(params, nxt)
        if abs(cur[0] - prev[0]) < tol and abs(cur[1] - prev[1]) < 10 * tol:
            return n
        prev = cur
        n = nxt
    raise ConvergenceError(f"truncation not converged by n_max = {cap}")
