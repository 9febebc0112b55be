#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "entroscale/trigpoly.hpp"

namespace entroscale {

// Hamiltonian coefficients c(alpha, n). Rows 0..2 are sine-type (n = 1..mu),
// row 3 is cosine-type (n = 0..mu). Stored with index n directly; c(alpha<3, 0) is unused.
class HamiltonianCoeffs {
 public:
  explicit HamiltonianCoeffs(int mu = 1);

  int mu() const { return mu_; }
  double get(int alpha, int n) const;
  void set(int alpha, int n, double value);

  // u_alpha(k) = -2 sum c(alpha,n) sin(nk) for alpha < 3, c(3,0) + 2 sum c(3,n) cos(nk).
  TrigPoly u(int alpha) const;

  // Throws InvalidModel when mu < 1 or every coefficient vanishes.
  void validate() const;

 private:
  int mu_;
  std::array<std::vector<double>, 4> c_;
};

struct Temperatures {
  double beta_L = 1.0;
  double beta_R = 1.0;

  double beta() const { return 0.5 * (beta_R + beta_L); }
  double delta() const { return 0.5 * (beta_R - beta_L); }
  // Requires 0 < beta_L <= beta_R.
  void validate() const;
};

struct FermiDirac {};
struct GroundStep {};
struct HalfConstant {};
// rho = indicator of a finite union of open intervals; endpoints may be +-infinity.
struct StepSet {
  std::vector<std::pair<double, double>> intervals;
};
// rho = (1 + odd(x)) / 2 with a piecewise-continuous odd part; every jump must be
// listed in breakpoints.
struct CustomOdd {
  std::function<double(double)> odd;
  std::vector<double> breakpoints;
  std::string label = "custom";
};

using FermiFunction = std::variant<FermiDirac, GroundStep, HalfConstant, StepSet, CustomOdd>;

double fermi_value(const FermiFunction& f, double x);
// rho(x) - rho(-x), the quantity fed to the binary entropy.
double fermi_odd2(const FermiFunction& f, double x);
// Points where rho may jump. Empty for smooth Fermi functions.
std::vector<double> fermi_breakpoints(const FermiFunction& f);
bool fermi_is_smooth(const FermiFunction& f);
std::string fermi_name(const FermiFunction& f);

// Sampled check of rho >= 0, rho(x) + rho(-x) = 1 and |rho(x) - rho(-x)| <= 1 on a
// 1024-point grid symmetric about zero. Throws InvalidFermi.
void validate_fermi(const FermiFunction& f);

struct FermiFamilyPhase {
  std::complex<double> lambda{1.0, 0.0};
  int gamma = 2;

  // lambda^((-1)^g)
  std::complex<double> lambda_power(int g) const;
  void validate() const;
};

enum class CaseTag { Case1 = 1, Case2, Case3, Case4, Case5, Case6 };
std::string to_string(CaseTag tag);

struct ChainModel {
  HamiltonianCoeffs hamiltonian;
  Temperatures temps;
  FermiFunction fermi = FermiDirac{};
  FermiFamilyPhase phase;

  void validate() const;
};

CaseTag classify(const HamiltonianCoeffs& h);

// Pauli coefficient functions and the derived polynomials used by every consumer.
struct PauliSymbol {
  explicit PauliSymbol(const HamiltonianCoeffs& h);

  std::array<TrigPoly, 4> u;   // u_0, u_1, u_2, u_3
  std::array<TrigPoly, 4> du;  // termwise derivatives
  TrigPoly usq;                // u . u
  TrigPoly udu;                // u . u'
  CaseTag tag;

  double abs_u(double k) const;
};

struct Dispersion {
  double plus;
  double minus;
};

Dispersion dispersion(const HamiltonianCoeffs& h, double k);
Dispersion dispersion(const PauliSymbol& s, double k);
// E_+' at k. Throws OnZeroSet on Z_|u| outside Case 3.
double dispersion_derivative(const HamiltonianCoeffs& h, double k);
Dispersion dispersion_derivatives(const PauliSymbol& s, double k);

struct PauliValue {
  double r0;
  std::array<double, 3> r;
};

// Evaluator for the two-point symbol, built once per model. Cases 2-5 only.
class RLSymbol {
 public:
  explicit RLSymbol(const ChainModel& model);

  const ChainModel& model() const { return model_; }
  const PauliSymbol& pauli() const { return pauli_; }
  CaseTag tag() const { return pauli_.tag; }

  PauliValue pauli_value(double k) const;
  Eigen::Matrix2cd matrix(double k) const;

  // Angles where the symbol can fail to be smooth: roots of the partition polynomial,
  // Z_|u|, and the preimages of Fermi-function jumps under beta_L E and beta_R E.
  std::vector<double> breakpoints() const;

 private:
  ChainModel model_;
  PauliSymbol pauli_;
};

PauliValue rl_symbol_pauli(const ChainModel& model, double k);
Eigen::Matrix2cd rl_symbol_matrix(const ChainModel& model, double k);

// sign with a dead zone of 1e-13.
double soft_sign(double x);

// Partition polynomial u_0'^2 u^2 - (u.u'); its roots bound the arcs of constant sign of E'.
TrigPoly partition_polynomial(const PauliSymbol& s);

}  // namespace entroscale
