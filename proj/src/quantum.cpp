#include "qkdbound/quantum.hpp"

#include <cmath>
#include <string>

namespace qkdbound {

QuantumState::QuantumState(ComplexMatrix m, int d, int n)
    : matrix(std::move(m)), local_dim(d), parties(n) {
  if (d < 2) throw std::invalid_argument("QuantumState: local_dim must be >= 2");
  if (n < 2) throw std::invalid_argument("QuantumState: parties must be >= 2");
  const std::int64_t dim = pow_int(d, n);
  if (matrix.rows() != dim || matrix.cols() != dim)
    throw std::invalid_argument("QuantumState: matrix dim must equal d^N");
  if (!is_hermitian(matrix, kStateTol))
    throw std::invalid_argument("QuantumState: matrix is not Hermitian");
  if (std::abs(matrix.trace().real() - 1.0) > kStateTol ||
      std::abs(matrix.trace().imag()) > kStateTol)
    throw std::invalid_argument("QuantumState: trace must equal 1");
  if (min_eigenvalue(matrix) < -kStateTol)
    throw std::invalid_argument("QuantumState: matrix is not positive semidefinite");
}

QuantumState ghz_projector(int d, int parties) {
  if (d < 2) throw std::invalid_argument("ghz_projector: d must be >= 2");
  if (parties < 2) throw std::invalid_argument("ghz_projector: parties must be >= 2");
  const std::int64_t dim = pow_int(d, parties);
  // |i>^(tensor N) lands on the composite index i * (d^(N-1) + ... + 1).
  const std::int64_t stride = (dim - 1) / (d - 1);
  ComplexVector ghz = ComplexVector::Zero(dim);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) ghz(i * stride) = amp;
  return QuantumState(ghz * ghz.adjoint(), d, parties);
}

QuantumState isotropic_state(int d, int parties, double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw std::invalid_argument("isotropic_state: visibility must lie in [0,1]");
  QuantumState ghz = ghz_projector(d, parties);
  const double dim = static_cast<double>(ghz.dim());
  ComplexMatrix m = visibility * ghz.matrix +
                    ((1.0 - visibility) / dim) *
                        ComplexMatrix::Identity(ghz.dim(), ghz.dim());
  return QuantumState(std::move(m), d, parties);
}

QuantumState sep_isotropic(int d, int parties) {
  const double boundary =
      1.0 / (1.0 + static_cast<double>(pow_int(d, parties - 1)));
  return isotropic_state(d, parties, boundary);
}

}  // namespace qkdbound
