"""Model parameters for the mono-mode Dicke model.

The two coupling constants g (co-rotating) and g_prime (counter-rotating)
select the regime: g_prime = 0 is the integrable (Tavis-Cummings) limit,
g = g_prime the usual single-mode Dicke Hamiltonian.
"""

from dataclasses import dataclass, replace


class ParameterError(ValueError):
    """Invalid physical parameters."""


def _is_half_integer(x, tol=1e-9):
    return abs(2 * x - round(2 * x)) < tol


@dataclass(frozen=True)
class ModelParams:
    omega: float = 1.0       # field frequency
    epsilon: float = 1.0     # atomic level splitting
    g: float = 0.0           # co-rotating coupling G
    g_prime: float = 0.0     # counter-rotating coupling G'
    j: float = 0.5           # collective spin J (N = 2J atoms)
    hbar: float = 1.0

    def __post_init__(self):
        if self.omega <= 0:
            raise ParameterError("omega must be positive")
        if self.epsilon <= 0:
            raise ParameterError("epsilon must be positive")
        if self.g < 0 or self.g_prime < 0:
            raise ParameterError("couplings must be non-negative")
        if self.hbar <= 0:
            raise ParameterError("hbar must be positive")
        if self.j <= 0 or not _is_half_integer(self.j):
            raise ParameterError(
                f"j must be a positive half-integer multiple of 1/2, got {self.j}")

    @property
    def g_plus(self):
        return self.g + self.g_prime

    @property
    def g_minus(self):
        return self.g - self.g_prime

    @property
    def lam(self):
        """lambda = G / epsilon."""
        return self.g / self.epsilon

    @property
    def lam_plus(self):
        return self.g_plus / self.epsilon

    @property
    def lam_minus(self):
        return self.g_minus / self.epsilon

    @property
    def n_atoms(self):
        return int(round(2 * self.j))

    @property
    def spin_dim(self):
        return int(round(2 * self.j + 1))

    def with_coupling(self, g, g_prime=None):
        """New parameter set with couplings replaced (g_prime defaults to 0)."""
        return replace(self, g=g, g_prime=0.0 if g_prime is None else g_prime)

    def at_lambda(self, lam, mode):
        """Parameter set at a scan coordinate.

        mode 'integrable': lam = G/eps, G' = 0.
        mode 'symmetric':  lam = (G+G')/eps with G = G'.
        """
        if mode == "integrable":
            return self.with_coupling(lam * self.epsilon, 0.0)
        if mode == "symmetric":
            half = 0.5 * lam * self.epsilon
            return self.with_coupling(half, half)
        raise ParameterError(f"unknown scan mode {mode!r}")
