"""Truncated |n, m> product basis and the Dicke Hamiltonian on it.

Basis ordering is lexicographic in (n, m), so a state vector reshapes to a
(n_max+1, 2J+1) coefficient matrix and the partial trace over the boson is a
plain matrix product.
"""

import numpy as np
import scipy.sparse as sp
from dataclasses import dataclass, field

from .params import ModelParams, ParameterError, _is_half_integer


@dataclass(frozen=True)
class BasisState:
    n: int       # boson occupation
    m: float     # Jz eigenvalue, in {-J, ..., J}

    def n_exc(self, j):
        """Excitation number n + m + J (non-negative integer)."""
        return int(round(self.n + self.m + j))

    def parity(self, j):
        return 1 if self.n_exc(j) % 2 == 0 else -1


@dataclass(frozen=True)
class HilbertBasis:
    j: float
    n_max: int
    states: tuple = field(repr=False)
    index: dict = field(repr=False)

    @property
    def dim(self):
        return len(self.states)

    @property
    def spin_dim(self):
        return int(round(2 * self.j + 1))

    def m_values(self):
        return np.arange(-self.j, self.j + 0.5)

    def position(self, n, m):
        return self.index[(n, float(m))]


def build_basis(j, n_max):
    """Ordered |n, m> basis with 0 <= n <= n_max, -J <= m <= J."""
    if j <= 0 or not _is_half_integer(j):
        raise ParameterError(f"j must be a positive half-integer multiple of 1/2, got {j}")
    if n_max < 0 or int(n_max) != n_max:
        raise ParameterError(f"n_max must be a non-negative integer, got {n_max}")
    m_vals = [-j + k for k in range(int(round(2 * j + 1)))]
    states = tuple(BasisState(n, m) for n in range(int(n_max) + 1) for m in m_vals)
    index = {(s.n, s.m): i for i, s in enumerate(states)}
    return HilbertBasis(j=float(j), n_max=int(n_max), states=states, index=index)


def _ladder_weight(j, m):
    """<J, m+1| J_+ |J, m> = sqrt(J(J+1) - m(m+1))."""
    return np.sqrt(j * (j + 1) - m * (m + 1))


@dataclass(frozen=True)
class HamiltonianMatrix:
    basis: HilbertBasis
    matrix: sp.csr_matrix = field(repr=False)
    params: ModelParams = None

    @property
    def dim(self):
        return self.basis.dim

    def norm(self):
        """Infinity norm, used for scale-relative residual tolerances."""
        return abs(self.matrix).sum(axis=1).max()

    def dense(self):
        return self.matrix.toarray()


def assemble_hamiltonian(params: ModelParams, basis: HilbertBasis):
    """Dicke Hamiltonian H_o + H_G + H_G' in the |n, m> basis.

    Diagonal: hbar (omega n + epsilon m).
    H_G  couples |n, m> <-> |n-1, m+1> with weight (G /sqrt(2J)) sqrt(n) <m+1|J+|m> hbar.
    H_G' couples |n, m> <-> |n+1, m+1> with weight (G'/sqrt(2J)) sqrt(n+1) <m+1|J+|m> hbar.
    All elements real; the matrix is assembled symmetric.
    """
    if abs(params.j - basis.j) > 1e-12:
        raise ParameterError("basis was built for a different j")
    j = basis.j
    hbar = params.hbar
    rows, cols, vals = [], [], []
    pref_g = params.g / np.sqrt(2 * j)
    pref_gp = params.g_prime / np.sqrt(2 * j)
    for i, s in enumerate(basis.states):
        rows.append(i)
        cols.append(i)
        vals.append(hbar * (params.omega * s.n + params.epsilon * s.m))
        # a J_+ : |n, m> -> |n-1, m+1>
        if pref_g != 0 and s.n >= 1 and s.m < j - 0.5:
            k = basis.position(s.n - 1, s.m + 1)
            w = hbar * pref_g * np.sqrt(s.n) * _ladder_weight(j, s.m)
            rows += [k, i]
            cols += [i, k]
            vals += [w, w]
        # a^dagger J_+ : |n, m> -> |n+1, m+1>
        if pref_gp != 0 and s.n + 1 <= basis.n_max and s.m < j - 0.5:
            k = basis.position(s.n + 1, s.m + 1)
            w = hbar * pref_gp * np.sqrt(s.n + 1) * _ladder_weight(j, s.m)
            rows += [k, i]
            cols += [i, k]
            vals += [w, w]
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim))
    mat.sum_duplicates()
    return HamiltonianMatrix(basis=basis, matrix=mat, params=params)


def excitation_blocks(basis: HilbertBasis):
    """Partition of basis indices by excitation number N_exc = n + m + J.

    For g_prime = 0 the Hamiltonian has no matrix elements between blocks.
    """
    blocks = {}
    for i, s in enumerate(basis.states):
        blocks.setdefault(s.n_exc(basis.j), []).append(i)
    return {k: blocks[k] for k in sorted(blocks)}


def parity_blocks(basis: HilbertBasis):
    """Two-block partition by parity (-1)^N_exc, conserved for any G, G'."""
    blocks = {1: [], -1: []}
    for i, s in enumerate(basis.states):
        blocks[s.parity(basis.j)].append(i)
    return blocks
