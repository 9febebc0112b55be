#pragma once

#include <array>
#include <vector>

#include "entroscale/rlmover.hpp"

namespace entroscale {

struct Arc {
  double lo;
  double hi;

  double length() const { return hi - lo; }
};

// Arcs lie in [-pi, pi]. Left movers have E' < 0, right movers E' > 0.
struct MomentumPartition {
  std::vector<Arc> pi_L;
  std::vector<Arc> pi_R;
  std::vector<double> pi_0;      // angles where E' vanishes
  std::vector<double> excluded;  // Z_|u|

  double length_L() const;
  double length_R() const;
};

struct Interval {
  double lo;
  double hi;
};

struct VanishingVerdict {
  bool vanishing = false;
  int samples = 0;
  std::vector<std::array<double, 2>> witnesses;  // (x, rho(x)) with rho outside {0, 1}
};

struct DensityReport {
  double s_infinity = 0.0;  // single integral with the pointwise sign of E'
  double s_L = 0.0;         // left-mover part of the split form
  double s_R = 0.0;
  double quadrature_error = 0.0;
  MomentumPartition partition;
  std::vector<Interval> sigma;
  VanishingVerdict vanishing;
  bool verdict_agrees = true;  // vanishing verdict == (s_infinity < 1e-9)
};

inline constexpr double kVanishingThreshold = 1e-9;

// Cases 2-5; WrongCase otherwise.
MomentumPartition partition_momentum(const ChainModel& model);

// Throws QuadratureFailure when a panel misbehaves or the split form disagrees by > 1e-9.
DensityReport s_infinity(const ChainModel& model);

// Half the sum over both temperatures of the full-circle integral. NotSymmetric if u_0 != 0.
double s_infinity_symmetric(const ChainModel& model);

struct TanhReport {
  double value = 0.0;
  double lower_bound = 0.0;
  std::array<double, 2> a{};  // tanh(beta_alpha * sum_b |u_b|_sup / 2), alpha = L, R
};

// Fermi-Dirac only (WrongFermi otherwise).
TanhReport tanh_form(const ChainModel& model);

// Union over alpha and both signs of beta_alpha * E over the arcs of Pi_alpha, merged.
std::vector<Interval> sigma_set(const ChainModel& model);

// Samples rho on 4096 points of sigma and tests rho in {0, 1} to 1e-12.
VanishingVerdict vanishing_check(const ChainModel& model);

}  // namespace entroscale
