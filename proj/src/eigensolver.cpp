#include "nqd/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "nqd/errors.hpp"

namespace nqd {

namespace {

constexpr Eigen::Index kRowChunk = 128;

template <class Scalar>
Scalar random_scalar(std::mt19937_64& rng, std::normal_distribution<double>& dist) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return dist(rng);
  } else {
    const double re = dist(rng);
    const double im = dist(rng);
    return {re, im};
  }
}

// Orthonormalize the columns of W against Q (first k columns) and among
// themselves. Two passes of classical Gram-Schmidt, then a QR of the block.
// Columns that collapse are replaced by fresh random directions; their
// coupling entries are zero. Returns the coupling R with W_in = Q H + W_out R.
template <class Scalar>
MatrixX<Scalar> orthonormalize(const MatrixX<Scalar>& Q, Eigen::Index k, MatrixX<Scalar>& W,
                               MatrixX<Scalar>* H, std::mt19937_64& rng, double scale) {
  using Mat = MatrixX<Scalar>;
  const Eigen::Index b = W.cols();
  if (H) H->setZero(k, b);
  for (int pass = 0; pass < 2 && k > 0; ++pass) {
    const Mat h = Q.leftCols(k).adjoint() * W;
    W.noalias() -= Q.leftCols(k) * h;
    if (H) *H += h;
  }
  Mat R = Mat::Zero(b, b);
  std::normal_distribution<double> dist;
  for (Eigen::Index j = 0; j < b; ++j) {
    // Gram-Schmidt within the block, twice.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const Scalar r = W.col(i).dot(W.col(j));
        W.col(j) -= r * W.col(i);
        R(i, j) += r;
      }
    }
    double nrm = W.col(j).norm();
    if (nrm > 1e-12 * scale) {
      W.col(j) /= nrm;
      R(j, j) = nrm;
      continue;
    }
    // Lost rank: continue the Krylov space in a new random direction.
    R.col(j).setZero();
    for (int attempt = 0; attempt < 4; ++attempt) {
      for (Eigen::Index r = 0; r < W.rows(); ++r) W(r, j) = random_scalar<Scalar>(rng, dist);
      for (int pass = 0; pass < 2; ++pass) {
        if (k > 0) W.col(j) -= Q.leftCols(k) * (Q.leftCols(k).adjoint() * W.col(j));
        for (Eigen::Index i = 0; i < j; ++i) W.col(j) -= W.col(i).dot(W.col(j)) * W.col(i);
      }
      nrm = W.col(j).norm();
      if (nrm > 1e-8) {
        W.col(j) /= nrm;
        break;
      }
    }
  }
  return R;
}

// Dense Hermitian eigendecomposition, ascending. The tridiagonal QR of Eigen
// occasionally stalls on a particular matrix; failed attempts are repeated on
// rescaled copies, which perturbs the iteration by rounding only.
template <class Scalar>
void checked_eigensolve(const MatrixX<Scalar>& A, Eigen::VectorXd& values, MatrixX<Scalar>& vectors) {
  for (const double f : {1.0, 0.75, 1.3, 0.6, 1.7}) {
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(f == 1.0 ? A : MatrixX<Scalar>(A * f));
    if (es.info() != Eigen::Success) continue;
    values = es.eigenvalues() / f;
    vectors = es.eigenvectors();
    return;
  }
  throw NonConvergedEigensolve("dense Hermitian eigensolver did not converge (n = " +
                               std::to_string(A.rows()) + ")");
}

template <class Scalar>
EigenPairs<Scalar> dense_top(const MatrixX<Scalar>& A, int m) {
  Eigen::VectorXd values;
  MatrixX<Scalar> vectors;
  checked_eigensolve<Scalar>(A, values, vectors);
  const Eigen::Index n = A.rows();
  EigenPairs<Scalar> out;
  out.values.resize(m);
  out.vectors.resize(n, m);
  out.residuals.setZero(m);
  for (int j = 0; j < m; ++j) {
    out.values[j] = values[n - 1 - j];
    out.vectors.col(j) = vectors.col(n - 1 - j);
  }
  return out;
}

}  // namespace

template <class Scalar>
void hermitian_multiply(const MatrixX<Scalar>& A, const MatrixX<Scalar>& X, MatrixX<Scalar>& Y) {
  const Eigen::Index n = A.rows();
  Y.resize(n, X.cols());
  const Eigen::Index chunks = (n + kRowChunk - 1) / kRowChunk;
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < chunks; ++c) {
    const Eigen::Index r0 = c * kRowChunk;
    const Eigen::Index rows = std::min(kRowChunk, n - r0);
    Y.middleRows(r0, rows).noalias() = A.middleRows(r0, rows) * X;
  }
}

template <class Scalar>
EigenPairs<Scalar> top_eigenpairs(const MatrixX<Scalar>& A, int m, const EigenOptions& opt) {
  using Mat = MatrixX<Scalar>;
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw InvalidArgument("eigensolve needs a square matrix");
  if (m < 1 || m > n) throw InvalidArgument("requested eigenpair count out of range");
  if (n < opt.dense_below || 2 * m + opt.block_size >= n) return dense_top(A, m);

  const Eigen::Index b = std::max(opt.block_size, 1);
  const Eigen::Index cap = std::min<Eigen::Index>(opt.max_basis, n);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> dist;

  Mat Q(n, cap + b);
  Mat T = Mat::Zero(cap + b, cap + b);
  Mat V(n, b);
  for (Eigen::Index j = 0; j < b; ++j)
    for (Eigen::Index r = 0; r < n; ++r) V(r, j) = random_scalar<Scalar>(rng, dist);
  orthonormalize<Scalar>(Q, 0, V, nullptr, rng, 1.0);
  Q.leftCols(b) = V;

  EigenPairs<Scalar> out;
  Mat W, H;
  Eigen::Index k = b;  // current basis size
  double scale = 0.0;
  while (true) {
    hermitian_multiply<Scalar>(A, Q.middleCols(k - b, b), W);
    out.matvecs += static_cast<int>(b);
    const Mat R = orthonormalize<Scalar>(Q, k, W, &H, rng, std::max(scale, 1e-300));
    // H holds Q^H A V_last; with full reorthogonalization T stays the exact projection.
    T.block(0, k - b, k, b) = H;
    T.block(k - b, 0, b, k) = H.adjoint();
    T.block(k, k - b, b, b) = R;
    T.block(k - b, k, b, b) = R.adjoint();

    const bool check = k <= 200 || (k / b) % 4 == 0 || k + b > cap;
    if (k >= m + b && check) {
      Eigen::VectorXd theta;
      Mat S;
      checked_eigensolve<Scalar>(T.topLeftCorner(k, k), theta, S);
      scale = std::max(std::abs(theta[0]), std::abs(theta[k - 1]));
      Eigen::VectorXd res(m);
      for (int j = 0; j < m; ++j)
        res[j] = (R * S.block(k - b, k - 1 - j, b, 1)).norm();
      if (res.maxCoeff() <= opt.tol * scale) {
        out.values.resize(m);
        out.residuals = res;
        Mat Sm(k, m);
        for (int j = 0; j < m; ++j) {
          out.values[j] = theta[k - 1 - j];
          Sm.col(j) = S.col(k - 1 - j);
        }
        out.vectors = Q.leftCols(k) * Sm;
        return out;
      }
    }
    if (k + b > cap) {
      std::ostringstream msg;
      msg << "block Lanczos did not converge " << m << " eigenpairs within " << cap
          << " basis vectors (n = " << n << ")";
      throw NonConvergedEigensolve(msg.str());
    }
    Q.middleCols(k, b) = W;
    k += b;
  }
}

template EigenPairs<double> top_eigenpairs(const MatrixX<double>&, int, const EigenOptions&);
template EigenPairs<std::complex<double>> top_eigenpairs(const MatrixX<std::complex<double>>&,
                                                         int, const EigenOptions&);
template void hermitian_multiply(const MatrixX<double>&, const MatrixX<double>&,
                                 MatrixX<double>&);
template void hermitian_multiply(const MatrixX<std::complex<double>>&,
                                 const MatrixX<std::complex<double>>&,
                                 MatrixX<std::complex<double>>&);

}  // namespace nqd
