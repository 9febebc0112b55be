#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace entroscale {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

// Adaptive Simpson with Richardson correction. tol is absolute over [a, b].
QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double tol, int max_depth = 40);

// Vector-valued integrand: writes dim values at x into out.
using VectorIntegrand = std::function<void(double x, std::complex<double>* out)>;

struct VectorQuadResult {
  std::vector<std::complex<double>> value;
  double error = 0.0;  // sum over accepted panels of max-component |K21 - G10|
  bool converged = true;
};

// Adaptive Gauss-Kronrod 21/10 over [a, b], started from initial_panels equal panels.
// Nodes are strictly interior, so endpoint discontinuities are never sampled.
VectorQuadResult gauss_kronrod_vector(const VectorIntegrand& f, std::size_t dim, double a,
                                      double b, double tol, int initial_panels = 1,
                                      int max_depth = 40);

}  // namespace entroscale
