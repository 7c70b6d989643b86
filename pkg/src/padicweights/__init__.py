"""Explicit non-archimedean local computations: characters, Gauss sums, Tate
integrals, dyadic character-sum pieces, dual weights and degenerate factors."""

from .characters import AddChar, MultChar, characters_of_conductor, xi_class
from .dualweight import dual_weight, rho_uv_brute, rho_uv_fast
from .degenerate import d_f_star, n_alpha_weightnorm
from .lfactors import gamma_gl1, gauss_sum, verify_tate

__version__ = "0.1.0"

__all__ = ["AddChar", "MultChar", "characters_of_conductor", "xi_class", "dual_weight",
           "rho_uv_brute", "rho_uv_fast", "d_f_star", "n_alpha_weightnorm", "gamma_gl1",
           "gauss_sum", "verify_tate"]
