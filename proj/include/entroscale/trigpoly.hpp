#pragma once

#include <vector>

namespace entroscale {

// Real trigonometric polynomial a_0 + sum_n (a_n cos(nk) + b_n sin(nk)).
// Trailing coefficient pairs below kTrimTolerance are dropped on construction.
class TrigPoly {
 public:
  static constexpr double kTrimTolerance = 1e-14;

  TrigPoly() = default;
  // cos_coeffs = a_0..a_m, sin_coeffs = b_1..b_m; the shorter list is zero-padded.
  TrigPoly(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  static TrigPoly constant(double c);
  static TrigPoly cosine(int n, double amplitude = 1.0);
  static TrigPoly sine(int n, double amplitude = 1.0);

  int degree() const { return static_cast<int>(cos_.size()) - 1; }
  double a(int n) const;
  double b(int n) const;
  const std::vector<double>& cos_coeffs() const { return cos_; }
  // b_1..b_m, stored with a leading zero so that sin_coeffs()[n] = b_n.
  const std::vector<double>& sin_coeffs() const { return sin_; }

  double operator()(double k) const;
  double max_abs_coeff() const;

  TrigPoly operator-() const;
  friend TrigPoly operator+(const TrigPoly& p, const TrigPoly& q);
  friend TrigPoly operator-(const TrigPoly& p, const TrigPoly& q);
  friend TrigPoly operator*(double s, const TrigPoly& p);

 private:
  void trim();

  std::vector<double> cos_{0.0};
  std::vector<double> sin_{0.0};
};

double eval(const TrigPoly& p, double k);
TrigPoly mul(const TrigPoly& p, const TrigPoly& q);
TrigPoly derivative(const TrigPoly& p);
bool is_zero(const TrigPoly& p, double tol);

struct Root {
  double angle;
  bool touch;  // even multiplicity: no sign change
};

// Zeros on (-pi, pi], sorted. Throws ZeroPolynomial for the zero polynomial.
std::vector<Root> roots(const TrigPoly& p);
std::vector<double> root_angles(const TrigPoly& p);

// Maps any angle to (-pi, pi].
double canonical_angle(double k);

// Sup norm over the circle, located through the critical points.
double sup_norm(const TrigPoly& p);

}  // namespace entroscale
