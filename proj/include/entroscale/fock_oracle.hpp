#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "entroscale/rlmover.hpp"
#include "entroscale/toeplitz.hpp"

namespace entroscale {

// Doubled one-particle vectors on a window of nu sites are stored as (f1, f2) stacked:
// entries 0..nu-1 hold f1, entries nu..2nu-1 hold f2.

// Jordan-Wigner representation of the CAR algebra of nu <= 6 sites on C^(2^nu).
class FockRep {
 public:
  explicit FockRep(int nu);

  int nu() const { return nu_; }
  int dim() const { return 1 << nu_; }
  const Eigen::MatrixXcd& c(int x) const { return c_[static_cast<std::size_t>(x)]; }
  const Eigen::MatrixXcd& identity() const { return id_; }

  // B(F) = sum_x f1(x) c_x^* + f2(x) c_x
  Eigen::MatrixXcd B(const Eigen::VectorXcd& F) const;
  Eigen::MatrixXcd B_star(const Eigen::VectorXcd& F) const { return B(F).adjoint(); }

 private:
  int nu_;
  std::vector<Eigen::MatrixXcd> c_;
  Eigen::MatrixXcd id_;
};

// J(f1, f2) = (conj f2, conj f1)
Eigen::VectorXcd J(const Eigen::VectorXcd& F);

// Q_i = lambda J^gamma (delta_i + 0)
std::vector<Eigen::VectorXcd> fermi_family(int nu, const FermiFamilyPhase& phase);
// M_{2i-1} = Q_i + J Q_i, M_{2i} = i (Q_i - J Q_i)
std::vector<Eigen::VectorXcd> majorana_family(const std::vector<Eigen::VectorXcd>& q);

// Closed form for the operator norm of B(F).
double araki_norm(const Eigen::VectorXcd& F);
double operator_norm(const Eigen::MatrixXcd& a);

struct CorrelationData {
  int nu = 0;
  Eigen::MatrixXcd window_two_point;  // R restricted to the window, 2nu x 2nu
  std::vector<Eigen::VectorXcd> majorana;
  Eigen::MatrixXcd omega;  // Omega_ij = (M_i, R M_j) / 2

  Eigen::MatrixXd xi() const { return omega.imag(); }
  // Antisymmetric matrix whose Pfaffians give the Majorana monomials: 2 Omega - 1.
  Eigen::MatrixXcd pfaffian_kernel() const;
};

// Built from position-space two-point coefficients r(x - y), |x - y| <= nu - 1.
CorrelationData correlation_data(const CoefficientTable& r_coeffs, int nu, const FermiFamilyPhase& phase);
CorrelationData correlation_data(const ChainModel& model, int nu);

// Recursive first-row expansion. NotAntisymmetric if |X + X^T| >= 1e-10, TooLarge above 16 x 16.
std::complex<double> pfaffian(const Eigen::MatrixXcd& x);

struct Pairing {
  std::vector<std::pair<int, int>> pairs;  // zero-based, each pair ascending, sorted by first
  int sign;                                // (-1)^(number of crossings)
};
// All (2n-1)!! pairings of {0..2n-1} in lexicographic order.
std::vector<Pairing> pairings(int n);
// Pfaffian as the signed sum over pairings.
std::complex<double> pfaffian_pairing_sum(const Eigen::MatrixXcd& x);

// omega(B(M_s1) ... B(M_sk)) for ascending zero-based indices.
std::complex<double> omega_monomial(const CorrelationData& data, const std::vector<int>& subset);

struct ReducedDensity {
  Eigen::MatrixXcd matrix;
  std::vector<double> spectrum;  // ascending
  double entropy = 0.0;
  double trace = 0.0;
  double hermiticity_defect = 0.0;
};

// 2^-nu sum over subsets S of omega_S (gamma_S)^*. TooLarge for nu > 5.
ReducedDensity reduced_density_matrix(const FockRep& rep, const CorrelationData& data);

// lambda_i = 2 |xi_i| from the spectrum of i Im(Omega), descending.
std::vector<double> skew_canonical_lambdas(const CorrelationData& data);

struct CheckReport {
  std::vector<std::pair<std::string, double>> residuals;

  double max() const;
  void add(const std::string& name, double r);
};

// e^(i)_ab and e_ab for every word length; AxiomViolation above 1e-12. nu <= 4.
std::vector<Eigen::MatrixXcd> site_matrix_units(const FockRep& rep, const FermiFamilyPhase& phase, int site);
Eigen::MatrixXcd matrix_unit(const FockRep& rep, const FermiFamilyPhase& phase, const std::vector<int>& a,
                             const std::vector<int>& b);
CheckReport matrix_units(const FockRep& rep, const FermiFamilyPhase& phase);

// max_ab |omega(e_ab) - delta_ab prod_i omega(e^(i)_{a_i a_i})|
double factorization_check(const FockRep& rep, const CorrelationData& data, const FermiFamilyPhase& phase);

// CAR, selfdual CAR, Majorana and Araki-norm identities for the given vectors.
CheckReport car_check(const FockRep& rep, const std::vector<Eigen::VectorXcd>& vectors,
                      const FermiFamilyPhase& phase);

}  // namespace entroscale
