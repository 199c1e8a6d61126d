#pragma once

#include "qkdbound/linalg.hpp"

namespace qkdbound {

inline constexpr double kStateTol = 1e-9;

/// Density operator of N parties with local dimension d (matrix is d^N x d^N).
/// Construction enforces Hermiticity, unit trace and positive
/// semidefiniteness, each within kStateTol.
struct QuantumState {
  ComplexMatrix matrix;
  int local_dim = 0;
  int parties = 0;

  QuantumState(ComplexMatrix m, int d, int n);

  Eigen::Index dim() const { return matrix.rows(); }
};

/// Rank-1 projector onto (1/sqrt(d)) sum_i |i..i> over N parties.
QuantumState ghz_projector(int d, int parties);

/// visibility * ghz_projector(d,N) + (1 - visibility) * I / d^N.
QuantumState isotropic_state(int d, int parties, double visibility);

/// The isotropic state at the separability boundary,
/// (|phi><phi| + I/d) / (1 + d^(N-1)).
QuantumState sep_isotropic(int d, int parties);

}  // namespace qkdbound
