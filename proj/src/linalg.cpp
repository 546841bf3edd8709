#include "qcc/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#define LAPACK_COMPLEX_CPP
#include <cblas.h>
#include <lapacke.h>

#include "qcc/errors.hpp"

namespace qcc::linalg {

namespace {

void check_square(Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols) throw InputError("eigensolver needs a square matrix");
}

void check_info(lapack_int info, const char* routine) {
  if (info != 0) {
    throw Error(std::string(routine) + " failed with info = " + std::to_string(info));
  }
}

}  // namespace

SymmetricEigen eigh(Eigen::MatrixXd matrix) {
  check_square(matrix.rows(), matrix.cols());
  const auto n = static_cast<lapack_int>(matrix.rows());
  SymmetricEigen out;
  out.values.resize(n);
  if (n > 0 && matrix.triangularView<Eigen::StrictlyLower>().toDenseMatrix().isZero(0.0)) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return matrix(a, a) < matrix(b, b); });
    out.vectors = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      out.values[k] = matrix(order[k], order[k]);
      out.vectors(order[k], k) = 1.0;
    }
    return out;
  }
  if (n > 0) {
    check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, matrix.data(), n, out.values.data()),
               "dsyevd");
  }
  out.vectors = std::move(matrix);
  return out;
}

HermitianEigen eigh(Eigen::MatrixXcd matrix) {
  check_square(matrix.rows(), matrix.cols());
  const auto n = static_cast<lapack_int>(matrix.rows());
  HermitianEigen out;
  out.values.resize(n);
  if (n > 0) {
    check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                              reinterpret_cast<lapack_complex_double*>(matrix.data()), n,
                              out.values.data()),
               "zheevd");
  }
  out.vectors = std::move(matrix);
  return out;
}

Eigen::VectorXd eigvalsh(Eigen::MatrixXcd matrix) {
  check_square(matrix.rows(), matrix.cols());
  const auto n = static_cast<lapack_int>(matrix.rows());
  Eigen::VectorXd values(n);
  if (n > 0) {
    check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n,
                              reinterpret_cast<lapack_complex_double*>(matrix.data()), n,
                              values.data()),
               "zheevd");
  }
  return values;
}

void gemm(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b,
          Eigen::Ref<Eigen::MatrixXd> c) {
  if (a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols()) {
    throw InputError("gemm: incompatible shapes");
  }
  if (c.size() == 0) return;
  if (a.cols() == 0) {
    c.setZero();
    return;
  }
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, static_cast<blasint>(a.rows()),
              static_cast<blasint>(b.cols()), static_cast<blasint>(a.cols()), 1.0, a.data(),
              static_cast<blasint>(a.outerStride()), b.data(), static_cast<blasint>(b.outerStride()), 0.0,
              c.data(), static_cast<blasint>(c.outerStride()));
}

Eigen::MatrixXcd gram(const Eigen::MatrixXcd& a) {
  const auto n = a.rows();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
  if (n == 0 || a.cols() == 0) return g;
  cblas_zherk(CblasColMajor, CblasLower, CblasNoTrans, static_cast<blasint>(n), static_cast<blasint>(a.cols()),
              1.0, a.data(), static_cast<blasint>(n), 0.0, g.data(), static_cast<blasint>(n));
  g.triangularView<Eigen::StrictlyUpper>() = g.adjoint();
  return g;
}

}  // namespace qcc::linalg
