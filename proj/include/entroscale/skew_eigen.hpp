#pragma once

#include <Eigen/Core>

namespace entroscale {

// Eigenvalues of the Hermitian matrix i*A for a real skew-symmetric A, ascending.
// Only the strictly lower triangle of A is read. Householder reduction to skew
// tridiagonal form, then the equivalent zero-diagonal symmetric tridiagonal problem.
Eigen::VectorXd skew_hermitian_eigenvalues(Eigen::MatrixXd a);

}  // namespace entroscale
