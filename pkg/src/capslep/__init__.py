"""Tangential vector Slepian functions on an axisymmetric spherical cap.

The problem splits into one small eigenproblem per order ``m``. Each is
solved through the tridiagonal matrix ``J_m`` of a commuting differential
operator, whose eigenvectors also diagonalize the concentration matrix
``K_m`` but are computed stably.
"""
from .capop import (CapProblem, DenseSym, FixedOrderProblem, TriDiagSym, assemble_J,
                    assemble_J_by_quadrature, assemble_K, partial_shannon, shannon)
from .eigen import (EigenDecomposition, eigh_dense, eigh_dense_dd, eigh_tridiag,
                    eigval_gap, vector_error)
from .flm import eval_F, eval_F_column, kernel_K
from .harmonics import SpherePoint, TangentValue, eval_Q, eval_Y, eval_YZ
from .legendre import eval_U, eval_U_column
from .quadrature import QuadRule, gauss_legendre, map_interval
from .slepian import (FixedOrderSolution, VectorEigenfield, concentration_ratio,
                      error_analysis, eval_eigenfield, eval_G, solve_order, verify_fredholm)

__version__ = "0.1.0"
