#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Core>

namespace nqd {

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct EigenOptions {
  int block_size = 4;
  double tol = 1e-10;       // Ritz residual relative to the largest |eigenvalue|
  int max_basis = 600;      // Krylov columns before NonConvergedEigensolve
  int dense_below = 1500;   // dimension under which a dense solve is used
  std::uint64_t seed = 0x6e71645f6c616e63ULL;
};

/// Largest eigenpairs of a Hermitian matrix, eigenvalues in descending order.
template <class Scalar>
struct EigenPairs {
  Eigen::VectorXd values;
  MatrixX<Scalar> vectors;  // orthonormal columns
  Eigen::VectorXd residuals;
  int matvecs = 0;
};

/// Top-m eigenpairs of the Hermitian matrix A (upper and lower triangles
/// both stored). Dense when A is small, otherwise block Lanczos with full
/// reorthogonalization from a seeded pseudo-random start block. Results
/// are reproducible for a given matrix and options.
/// Throws NonConvergedEigensolve when the basis cap is reached.
template <class Scalar>
EigenPairs<Scalar> top_eigenpairs(const MatrixX<Scalar>& A, int m, const EigenOptions& opt = {});

/// Y = A X with a fixed row partition, so the result does not depend on the
/// number of threads.
template <class Scalar>
void hermitian_multiply(const MatrixX<Scalar>& A, const MatrixX<Scalar>& X, MatrixX<Scalar>& Y);

extern template EigenPairs<double> top_eigenpairs(const MatrixX<double>&, int,
                                                  const EigenOptions&);
extern template EigenPairs<std::complex<double>> top_eigenpairs(
    const MatrixX<std::complex<double>>&, int, const EigenOptions&);

}  // namespace nqd
