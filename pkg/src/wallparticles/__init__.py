"""Particles with a wall, antisymmetric random matrices, and their transition kernels."""

from .dynamics import ParticleState, simulate, simulate_batch, step, step_onepass
from .errors import DomainError, InvalidInputError, NumericError
from .gtpattern import GTPattern, is_interlaced, project, sample_uniform, volume_mc
from .kernels import (P_kernel, Q_kernel, a_coeff, c_const, cdf_last_particle, d_func,
                      det_lu, lower_inc_gamma_int, p_r, phi, phi_d, q_kernel)
from .matrixmodel import (AntisymMatrix, minor_top_eigenvalues, positive_eigenvalues,
                          run_process, sample_increment)
from .rng import NoiseStream
from .verify import TestReport

__version__ = "0.1.0"
