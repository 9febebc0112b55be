#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "entroscale/error.hpp"
#include "entroscale/rlmover.hpp"
#include "models.hpp"

using namespace entroscale;
using namespace testing_models;

namespace {

HamiltonianCoeffs single(int alpha, int n, double v, int mu = 1) {
  HamiltonianCoeffs h(mu);
  h.set(alpha, n, v);
  return h;
}

// rho(beta h(k)) by diagonalizing the 2x2 Hermitian h = u_0 + u.sigma.
Eigen::Matrix2cd equilibrium_two_point(const HamiltonianCoeffs& h, double beta, double k) {
  const PauliSymbol s(h);
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix2cd m;
  m << s.u[0](k) + s.u[3](k), s.u[1](k) - i * s.u[2](k), s.u[1](k) + i * s.u[2](k), s.u[0](k) - s.u[3](k);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m);
  Eigen::Vector2cd f;
  for (int j = 0; j < 2; ++j) f(j) = 1.0 / (1.0 + std::exp(-beta * es.eigenvalues()(j)));
  return es.eigenvectors() * f.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

TEST_CASE("classify covers all six cases") {
  CHECK(classify(xy_hamiltonian()) == CaseTag::Case2);
  CHECK(classify(single(3, 0, 1.0)) == CaseTag::Case1);
  CHECK(classify(single(0, 1, 1.0)) == CaseTag::Case3);
  HamiltonianCoeffs c4 = single(0, 1, 1.0);
  c4.set(3, 0, 1.0);
  CHECK(classify(c4) == CaseTag::Case4);
  CHECK(classify(case5_hamiltonian()) == CaseTag::Case5);
  HamiltonianCoeffs c6 = single(0, 1, 1.0);
  c6.set(1, 1, 1.0);  // u_0 = u_1, so u_0^2 = u^2
  CHECK(classify(c6) == CaseTag::Case6);
  CHECK(to_string(CaseTag::Case2) == "Case2");
}

TEST_CASE("property: classify is scale invariant") {
  for (const auto& [name, m] : zoo()) {
    HamiltonianCoeffs h = m.hamiltonian;
    const CaseTag tag = classify(h);
    for (double scale : {1e-3, 0.7, 42.0}) {
      HamiltonianCoeffs g(h.mu());
      for (int a = 0; a < 4; ++a)
        for (int n = a == 3 ? 0 : 1; n <= h.mu(); ++n) g.set(a, n, scale * h.get(a, n));
      CHECK(classify(g) == tag);
    }
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(HamiltonianCoeffs(1).validate(), Error);
  CHECK_THROWS_AS(HamiltonianCoeffs(1).set(0, 0, 1.0), Error);
  CHECK_THROWS_AS(HamiltonianCoeffs(1).set(3, 2, 1.0), Error);
  CHECK_THROWS_AS(HamiltonianCoeffs(1).set(3, 1, std::nan("")), Error);
  CHECK_THROWS_AS((Temperatures{3.0, 1.0}.validate()), Error);
  CHECK_THROWS_AS((Temperatures{0.0, 1.0}.validate()), Error);
  Temperatures t{2.0, 5.0};
  CHECK(t.beta() == 3.5);
  CHECK(t.delta() == 1.5);
  CHECK_THROWS_AS((FermiFamilyPhase{{2.0, 0.0}, 2}.validate()), Error);
  CHECK_THROWS_AS((FermiFamilyPhase{{1.0, 0.0}, 3}.validate()), Error);
  CHECK_THROWS_AS(RLSymbol(model(single(3, 0, 1.0), 1.0, 1.0)), Error);
}

TEST_CASE("dispersion of the XY chain") {
  const HamiltonianCoeffs h = xy_hamiltonian();
  const double kstar = std::acos(-625.0 / 1248.0);
  CHECK(std::fabs(dispersion(h, kstar).plus - std::sqrt(1871.0 / 39.0) / 200.0) < 1e-14);
  CHECK(std::fabs(dispersion(h, 0.0).plus - 1.5) < 1e-15);
  CHECK(std::fabs(dispersion(h, 0.0).minus + 1.5) < 1e-15);
  const HamiltonianCoeffs d = single(0, 1, 1.0);
  for (double k : random_angles(16, 1)) {
    CHECK(dispersion(d, k).plus == dispersion(d, k).minus);
    CHECK(std::fabs(dispersion(d, k).plus + 2 * std::sin(k)) < 1e-15);
    CHECK(std::fabs(dispersion_derivative(d, k) + 2 * std::cos(k)) < 1e-15);
  }
}

TEST_CASE("dispersion derivative matches finite differences") {
  const double h = 1e-6;
  for (const auto& hc : {xy_hamiltonian(), case5_hamiltonian(), hopping_hamiltonian()}) {
    for (double k : random_angles(64, 2)) {
      if (PauliSymbol(hc).abs_u(k) < 1e-3) continue;
      const double fd = (dispersion(hc, k + h).plus - dispersion(hc, k - h).plus) / (2 * h);
      CHECK(std::fabs(fd - dispersion_derivative(hc, k)) < 1e-6);
    }
  }
  CHECK(std::fabs(dispersion_derivative(xy_hamiltonian(), kPi / 2) - dispersion_derivative(xy_hamiltonian(), kPi / 2)) == 0.0);
  CHECK_THROWS_AS(dispersion_derivative(hopping_hamiltonian(), kPi / 2), Error);
}

TEST_CASE("property: band symmetry under k -> -k") {
  for (const auto& hc : {xy_hamiltonian(), case5_hamiltonian(), drift_hamiltonian()}) {
    const PauliSymbol s(hc);
    for (double k : random_angles(128, 3)) {
      CHECK(std::fabs(dispersion(s, -k).minus + dispersion(s, k).plus) < 1e-12);
      CHECK(std::fabs(dispersion_derivatives(s, -k).minus - dispersion_derivatives(s, k).plus) < 1e-10);
    }
  }
}

TEST_CASE("R/L symbol special cases") {
  const ChainModel half = model(xy_hamiltonian(), 2.0, 5.0, HalfConstant{});
  for (double k : random_angles(32, 4)) {
    const PauliValue v = rl_symbol_pauli(half, k);
    CHECK(v.r0 == 0.5);
    CHECK(v.r[0] == 0.0);
    CHECK(v.r[1] == 0.0);
    CHECK(v.r[2] == 0.0);
    CHECK((rl_symbol_matrix(half, k) - 0.5 * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() == 0.0);
  }

  // Equal temperatures: the symbol is rho(beta h) pointwise.
  for (const auto& hc : {xy_hamiltonian(), case5_hamiltonian()}) {
    const ChainModel eq = model(hc, 1.3, 1.3);
    for (double k : random_angles(64, 5))
      CHECK((rl_symbol_matrix(eq, k) - equilibrium_two_point(hc, 1.3, k)).cwiseAbs().maxCoeff() < 1e-13);
  }

  const ChainModel ground = model(xy_hamiltonian(), 1.0, 1.0, GroundStep{});
  const PauliSymbol s(xy_hamiltonian());
  for (double k : random_angles(32, 6)) {
    const PauliValue v = rl_symbol_pauli(ground, k);
    CHECK(std::fabs(v.r0 - 0.5) < 1e-15);
    for (int a = 0; a < 3; ++a) CHECK(std::fabs(v.r[static_cast<std::size_t>(a)] - 0.5 * s.u[static_cast<std::size_t>(a + 1)](k) / s.abs_u(k)) < 1e-14);
  }

  const ChainModel eq = model(xy_hamiltonian(), 1.0, 1.0);
  for (double k : random_angles(32, 7)) {
    const Eigen::Matrix2cd r = rl_symbol_matrix(eq, k);
    const PauliValue v = rl_symbol_pauli(eq, k);
    CHECK(v.r[0] == 0.0);
    CHECK(std::abs(r(0, 1) - std::complex<double>(0.0, -v.r[1])) < 1e-16);
  }
}

TEST_CASE("property: symbol is a two-point operator") {
  for (const auto& [name, m] : zoo()) {
    const RLSymbol rl(m);
    for (int i = 0; i < 256; ++i) {
      const double k = -kPi + 2 * kPi * (i + 0.37) / 256;
      const Eigen::Matrix2cd r = rl.matrix(k);
      CHECK((r - r.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(r);
      CHECK(es.eigenvalues()(0) > -1e-14);
      CHECK(es.eigenvalues()(1) < 1 + 1e-14);
      // J R J = 1 - R in momentum form.
      const Eigen::Matrix2cd rm = rl.matrix(-k);
      CHECK(std::abs(rm(0, 0) - (1.0 - r(1, 1))) < 1e-10);
      CHECK(std::abs(rm(0, 1) + r(0, 1)) < 1e-10);
    }
  }
}

TEST_CASE("Fermi function validator") {
  CHECK_NOTHROW(validate_fermi(FermiDirac{}));
  CHECK_NOTHROW(validate_fermi(GroundStep{}));
  CHECK_NOTHROW(validate_fermi(HalfConstant{}));
  CHECK_NOTHROW(validate_fermi(StepSet{{{0.0, std::numeric_limits<double>::infinity()}}}));
  CHECK_THROWS_AS(validate_fermi(CustomOdd{[](double) { return 0.2; }, {}, "constant 0.6"}), Error);
  CHECK_THROWS_AS(validate_fermi(StepSet{{{0.0, 1.0}}}), Error);
  CHECK_THROWS_AS(validate_fermi(CustomOdd{[](double x) { return 3 * std::tanh(x); }, {}, "too large"}), Error);

  CHECK(std::fabs(fermi_value(FermiDirac{}, 800.0) - 1.0) < 1e-300);
  CHECK(fermi_value(FermiDirac{}, -800.0) >= 0.0);
  CHECK(fermi_value(GroundStep{}, 0.0) == 0.5);
  CHECK(std::fabs(fermi_odd2(FermiDirac{}, 0.7) - std::tanh(0.35)) < 1e-15);
  CHECK(fermi_is_smooth(FermiDirac{}));
  CHECK_FALSE(fermi_is_smooth(GroundStep{}));
  const auto bp = fermi_breakpoints(StepSet{{{0.0, 1.0}, {2.0, std::numeric_limits<double>::infinity()}, {-2.0, -1.0}}});
  CHECK(bp == std::vector<double>{-2.0, -1.0, 0.0, 1.0, 2.0});
}

TEST_CASE("breakpoints of the R/L symbol") {
  // Ground state on the XY chain jumps where E crosses zero; the XY band never does.
  const RLSymbol xy(model(xy_hamiltonian(), 1.0, 1.0, GroundStep{}));
  for (double b : xy.breakpoints()) CHECK(b > -kPi - 1e-12);
  // Case 3 drift: u_0 = -2 sin k - 0.6 sin 2k vanishes at 0 and pi.
  const RLSymbol drift(model(drift_hamiltonian(), 1.0, 1.0, GroundStep{}));
  const auto bp = drift.breakpoints();
  auto near = [&](double x) {
    return std::any_of(bp.begin(), bp.end(), [&](double y) { return std::fabs(std::remainder(y - x, 2 * kPi)) < 1e-9; });
  };
  CHECK(near(0.0));
  CHECK(near(kPi));
}
