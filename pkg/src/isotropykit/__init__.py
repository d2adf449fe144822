"""Spectral invariant bases for isotropic tensor functions in 3D.

A small library plus CLI that builds spectral frames and invariant lists for
systems of symmetric tensors, non-symmetric/skew tensors, and vectors,
generates the classical Boehler/Smith comparison bases, and verifies the
reduction claims (counts, generator bases, coaxiality, coalescence,
eigenvector-gauge independence, potential-derivative formulas) with
independent numerical oracles.
"""

from isotropykit.lin3 import (
    DegenerateInputError,
    TensorSystem,
    conjugate,
    eig_sym,
    haar_rotation,
    mat3,
    rotation_matrix,
    skew_matrix,
    svd3,
    sym_matrix,
    tensor_system,
    vec3,
)

__version__ = "0.1.0"
