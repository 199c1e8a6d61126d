#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>

namespace qkdbound {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Kronecker product: entry (i*rows(B)+k, j*cols(B)+l) = A(i,j)*B(k,l).
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
tensor_product(const Eigen::MatrixBase<DerivedA>& a,
               const Eigen::MatrixBase<DerivedB>& b) {
  Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b.derived();
  return out;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Smallest eigenvalue of a Hermitian matrix.
inline double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m,
                                                      Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigenvalue computation failed");
  return solver.eigenvalues().minCoeff();
}

/// Tr(A * B) without forming the product.
inline Complex trace_of_product(const ComplexMatrix& a,
                                const ComplexMatrix& b) {
  return (a.transpose().cwiseProduct(b)).sum();
}

/// d^n for small integer bases; overflow-checked.
inline std::int64_t pow_int(int base, int exp) {
  if (base < 0 || exp < 0) throw std::invalid_argument("pow_int: negative");
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > (1LL << 40)) throw std::overflow_error("pow_int: too large");
    out *= base;
  }
  return out;
}

}  // namespace qkdbound
