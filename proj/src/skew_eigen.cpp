#include "entroscale/skew_eigen.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace entroscale {

Eigen::VectorXd skew_hermitian_eigenvalues(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return {};
  if (n == 1) return Eigen::VectorXd::Zero(1);

  Eigen::VectorXd sub(n - 1);
  Eigen::VectorXd v(n), w(n);
  for (Eigen::Index j = 0; j + 2 < n; ++j) {
    const Eigen::Index m = n - j - 1;
    auto x = a.col(j).segment(j + 1, m);
    const double x0 = x(0);
    const double tail = x.tail(m - 1).squaredNorm();
    if (tail == 0.0) {
      sub(j) = x0;
      continue;
    }
    const double beta = -std::copysign(std::sqrt(x0 * x0 + tail), x0);
    const double tau = (beta - x0) / beta;
    auto vs = v.head(m);
    vs(0) = 1.0;
    vs.tail(m - 1) = x.tail(m - 1) / (x0 - beta);
    sub(j) = beta;

    // w = tau * B v with B skew, read from its strictly lower triangle in one pass.
    auto ws = w.head(m);
    ws.setZero();
    const Eigen::Index off = j + 1;
    for (Eigen::Index c = 0; c + 1 < m; ++c) {
      auto col = a.col(off + c).segment(off + c + 1, m - c - 1);
      ws.tail(m - c - 1) += vs(c) * col;
      ws(c) -= col.dot(vs.tail(m - c - 1));
    }
    ws *= tau;

    // B += v w^T - w v^T on the strictly lower triangle.
    for (Eigen::Index c = 0; c + 1 < m; ++c) {
      auto col = a.col(off + c).segment(off + c + 1, m - c - 1);
      col += ws(c) * vs.tail(m - c - 1) - vs(c) * ws.tail(m - c - 1);
    }
  }
  sub(n - 2) = a(n - 1, n - 2);

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off = sub.cwiseAbs();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace entroscale
