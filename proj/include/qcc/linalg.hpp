#pragma once

// Dense Hermitian eigensolvers (LAPACK divide and conquer).

#include <Eigen/Core>

namespace qcc::linalg {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

struct HermitianEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors;  // columns
};

/// Eigen-decomposition of a real symmetric matrix; consumes the input storage.
SymmetricEigen eigh(Eigen::MatrixXd matrix);

HermitianEigen eigh(Eigen::MatrixXcd matrix);

/// Eigenvalues only, ascending.
Eigen::VectorXd eigvalsh(Eigen::MatrixXcd matrix);

/// c = a * b through the BLAS dgemm. `c` must already have the product's shape.
void gemm(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b,
          Eigen::Ref<Eigen::MatrixXd> c);

/// a * a^dagger through the BLAS zherk, both triangles filled.
Eigen::MatrixXcd gram(const Eigen::MatrixXcd& a);

}  // namespace qcc::linalg
