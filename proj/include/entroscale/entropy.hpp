#pragma once

#include <vector>

namespace entroscale {

// -x log x on (0, 1), zero elsewhere.
double shannon_ell(double x);
// l((1+x)/2) + l((1-x)/2) on (-1, 1), zero elsewhere.
double binary_eta(double x);

// Correctly rounded sum (Shewchuk partials).
double exact_sum(const std::vector<double>& values);

struct EntropyValue {
  int nu = 0;
  double S = 0.0;
  int clamped = 0;       // lambdas moved by at most 1e-8
  bool warning = false;  // some lambda was moved by more than 1e-8 but at most 1e-6
};

// S = sum eta(lambda_i). Lambdas outside [-1e-6, 1 + 1e-6] raise OutOfRange.
EntropyValue entropy_from_lambdas(const std::vector<double>& lambdas);

// All 2^nu products prod_i (1 + s_i lambda_i)/2. TooLarge for nu > 20.
std::vector<double> spectrum_product(const std::vector<double>& lambdas);

// -sum p log p, summed exactly.
double shannon_entropy(const std::vector<double>& probabilities);

// |sum_alpha l(prod_i (1 + s_i lambda_i)/2) - sum_i eta(lambda_i)|.
double functional_equation_residual(const std::vector<double>& lambdas);

}  // namespace entroscale
