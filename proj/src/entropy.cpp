#include "entroscale/entropy.hpp"

#include <cmath>

#include <fmt/format.h>

#include "entroscale/error.hpp"

namespace entroscale {

double shannon_ell(double x) { return (x > 0.0 && x < 1.0) ? -x * std::log(x) : 0.0; }

double binary_eta(double x) {
  if (!(std::fabs(x) < 1.0)) return 0.0;
  return shannon_ell(0.5 * (1.0 + x)) + shannon_ell(0.5 * (1.0 - x));
}

double exact_sum(const std::vector<double>& values) {
  std::vector<double> partials;
  for (double x : values) {
    std::size_t i = 0;
    for (double y : partials) {
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  if (partials.empty()) return 0.0;
  // Round the partials to a single double, with the half-way correction.
  std::size_t n = partials.size();
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

EntropyValue entropy_from_lambdas(const std::vector<double>& lambdas) {
  EntropyValue v;
  v.nu = static_cast<int>(lambdas.size());
  std::vector<double> terms;
  terms.reserve(lambdas.size());
  for (double l : lambdas) {
    if (!std::isfinite(l) || l > 1.0 + 1e-6 || l < -1e-6)
      throw Error(ErrorCode::OutOfRange, fmt::format("lambda = {} lies outside [0, 1]", l));
    double c = l;
    if (l > 1.0) c = 1.0;
    if (l < 0.0) c = 0.0;
    if (c != l) {
      if (std::fabs(c - l) > 1e-8) v.warning = true;
      else ++v.clamped;
    }
    terms.push_back(binary_eta(c));
  }
  v.S = exact_sum(terms);
  return v;
}

std::vector<double> spectrum_product(const std::vector<double>& lambdas) {
  const std::size_t nu = lambdas.size();
  if (nu > 20) throw Error(ErrorCode::TooLarge, fmt::format("spectrum product over {} modes exceeds 2^20 entries", nu));
  std::vector<double> out{1.0};
  for (double l : lambdas) {
    std::vector<double> next;
    next.reserve(out.size() * 2);
    for (double p : out) {
      next.push_back(p * 0.5 * (1.0 + l));
      next.push_back(p * 0.5 * (1.0 - l));
    }
    out = std::move(next);
  }
  return out;
}

double shannon_entropy(const std::vector<double>& probabilities) {
  std::vector<double> terms;
  terms.reserve(probabilities.size());
  for (double p : probabilities) terms.push_back(shannon_ell(p));
  return exact_sum(terms);
}

double functional_equation_residual(const std::vector<double>& lambdas) {
  std::vector<double> etas;
  for (double l : lambdas) etas.push_back(binary_eta(l));
  return std::fabs(shannon_entropy(spectrum_product(lambdas)) - exact_sum(etas));
}

}  // namespace entroscale
