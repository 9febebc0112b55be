#include "entroscale/fock_oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "entroscale/entropy.hpp"
#include "entroscale/error.hpp"

namespace entroscale {

namespace {

using C = std::complex<double>;
constexpr double kAxiomTolerance = 1e-12;

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

C pfaffian_rec(const Eigen::MatrixXcd& x, std::vector<int>& idx) {
  if (idx.empty()) return 1.0;
  const int first = idx.front();
  C sum = 0.0;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const C a = x(first, idx[k]);
    if (a == C(0.0)) continue;
    std::vector<int> rest;
    rest.reserve(idx.size() - 2);
    for (std::size_t m = 1; m < idx.size(); ++m)
      if (m != k) rest.push_back(idx[m]);
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    sum += sign * a * pfaffian_rec(x, rest);
  }
  return sum;
}

void enumerate_pairings(std::vector<int>& free, std::vector<std::pair<int, int>>& current,
                        std::vector<Pairing>& out) {
  if (free.empty()) {
    int crossings = 0;
    for (std::size_t i = 0; i < current.size(); ++i)
      for (std::size_t j = i + 1; j < current.size(); ++j) {
        const auto [a, b] = current[i];
        const auto [c, d] = current[j];
        if ((a < c && c < b && b < d) || (c < a && a < d && d < b)) ++crossings;
      }
    out.push_back({current, crossings % 2 == 0 ? 1 : -1});
    return;
  }
  const int a = free.front();
  for (std::size_t k = 1; k < free.size(); ++k) {
    const int b = free[k];
    std::vector<int> rest;
    for (std::size_t m = 1; m < free.size(); ++m)
      if (m != k) rest.push_back(free[m]);
    current.emplace_back(a, b);
    enumerate_pairings(rest, current, out);
    current.pop_back();
  }
}

void check_antisymmetric(const Eigen::MatrixXcd& x) {
  if (x.rows() != x.cols() || x.rows() % 2 != 0)
    throw Error(ErrorCode::NotAntisymmetric, fmt::format("Pfaffian needs an even square matrix, got {}x{}", x.rows(), x.cols()));
  const double d = max_abs(x + x.transpose());
  if (d >= 1e-10) throw Error(ErrorCode::NotAntisymmetric, fmt::format("|X + X^T| = {:.3e}", d));
}

Eigen::MatrixXcd ordered_product(const std::vector<Eigen::MatrixXcd>& gammas, unsigned mask, int dim) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(dim, dim);
  for (std::size_t i = 0; i < gammas.size(); ++i)
    if (mask & (1u << i)) p = p * gammas[i];
  return p;
}

}  // namespace

FockRep::FockRep(int nu) : nu_(nu) {
  if (nu < 1 || nu > 6) throw Error(ErrorCode::TooLarge, fmt::format("Fock representation supports 1..6 sites, got {}", nu));
  const int d = 1 << nu;
  id_ = Eigen::MatrixXcd::Identity(d, d);
  for (int x = 0; x < nu; ++x) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 0; n < d; ++n) {
      if (!(n & (1 << x))) continue;
      const int parity = std::popcount(static_cast<unsigned>(n & ((1 << x) - 1))) % 2;
      m(n ^ (1 << x), n) = parity ? -1.0 : 1.0;
    }
    c_.push_back(std::move(m));
  }
}

Eigen::MatrixXcd FockRep::B(const Eigen::VectorXcd& F) const {
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(dim(), dim());
  for (int x = 0; x < nu_; ++x) b += F(x) * c_[static_cast<std::size_t>(x)].adjoint() + F(nu_ + x) * c_[static_cast<std::size_t>(x)];
  return b;
}

Eigen::VectorXcd J(const Eigen::VectorXcd& F) {
  const Eigen::Index nu = F.size() / 2;
  Eigen::VectorXcd g(F.size());
  g.head(nu) = F.tail(nu).conjugate();
  g.tail(nu) = F.head(nu).conjugate();
  return g;
}

std::vector<Eigen::VectorXcd> fermi_family(int nu, const FermiFamilyPhase& phase) {
  std::vector<Eigen::VectorXcd> q;
  for (int i = 0; i < nu; ++i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * nu);
    v(phase.gamma == 2 ? i : nu + i) = phase.lambda;
    q.push_back(std::move(v));
  }
  return q;
}

std::vector<Eigen::VectorXcd> majorana_family(const std::vector<Eigen::VectorXcd>& q) {
  std::vector<Eigen::VectorXcd> m;
  for (const auto& v : q) {
    const Eigen::VectorXcd jv = J(v);
    m.push_back(v + jv);
    m.push_back(C(0.0, 1.0) * (v - jv));
  }
  return m;
}

double araki_norm(const Eigen::VectorXcd& F) {
  const double n2 = F.squaredNorm();
  const double overlap = std::abs(F.dot(J(F)));
  return std::sqrt(0.5 * (n2 + std::sqrt(std::max(0.0, n2 * n2 - overlap * overlap))));
}

double operator_norm(const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(a.adjoint() * a, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, s.eigenvalues().maxCoeff()));
}

Eigen::MatrixXcd CorrelationData::pfaffian_kernel() const {
  const Eigen::MatrixXcd x = 2.0 * omega - Eigen::MatrixXcd::Identity(omega.rows(), omega.cols());
  return 0.5 * (x - x.transpose());
}

CorrelationData correlation_data(const CoefficientTable& r_coeffs, int nu, const FermiFamilyPhase& phase) {
  if (r_coeffs.max_lag < nu - 1)
    throw Error(ErrorCode::MissingLags, fmt::format("window of {} sites needs lag {}, table holds {}", nu, nu - 1, r_coeffs.max_lag));
  CorrelationData d;
  d.nu = nu;
  d.window_two_point.resize(2 * nu, 2 * nu);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < nu; ++x)
        for (int y = 0; y < nu; ++y) d.window_two_point(a * nu + x, b * nu + y) = r_coeffs.at(x - y)(a, b);
  d.majorana = majorana_family(fermi_family(nu, phase));
  Eigen::MatrixXcd m(2 * nu, 2 * nu);
  for (int j = 0; j < 2 * nu; ++j) m.col(j) = d.majorana[static_cast<std::size_t>(j)];
  d.omega = 0.5 * m.adjoint() * d.window_two_point * m;
  return d;
}

CorrelationData correlation_data(const ChainModel& model, int nu) {
  const BlockSymbol r = build_r_symbol(model);
  return correlation_data(*r.precompute(nu - 1), nu, model.phase);
}

std::complex<double> pfaffian(const Eigen::MatrixXcd& x) {
  check_antisymmetric(x);
  if (x.rows() > 16) throw Error(ErrorCode::TooLarge, "Pfaffian expansion is limited to 16 x 16");
  std::vector<int> idx(static_cast<std::size_t>(x.rows()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  return pfaffian_rec(x, idx);
}

std::vector<Pairing> pairings(int n) {
  std::vector<int> free(static_cast<std::size_t>(2 * n));
  for (std::size_t i = 0; i < free.size(); ++i) free[i] = static_cast<int>(i);
  std::vector<std::pair<int, int>> current;
  std::vector<Pairing> out;
  enumerate_pairings(free, current, out);
  return out;
}

std::complex<double> pfaffian_pairing_sum(const Eigen::MatrixXcd& x) {
  check_antisymmetric(x);
  C sum = 0.0;
  for (const Pairing& p : pairings(static_cast<int>(x.rows() / 2))) {
    C term = static_cast<double>(p.sign);
    for (const auto& [a, b] : p.pairs) term *= x(a, b);
    sum += term;
  }
  return sum;
}

std::complex<double> omega_monomial(const CorrelationData& data, const std::vector<int>& subset) {
  if (subset.size() % 2 == 1) return 0.0;
  if (subset.empty()) return 1.0;
  const Eigen::MatrixXcd k = data.pfaffian_kernel();
  const auto n = static_cast<Eigen::Index>(subset.size());
  Eigen::MatrixXcd sub(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) sub(i, j) = k(subset[static_cast<std::size_t>(i)], subset[static_cast<std::size_t>(j)]);
  return pfaffian(sub);
}

ReducedDensity reduced_density_matrix(const FockRep& rep, const CorrelationData& data) {
  const int nu = rep.nu();
  if (nu > 5) throw Error(ErrorCode::TooLarge, fmt::format("reduced density matrix is limited to 5 sites, got {}", nu));
  if (data.nu != nu) throw Error(ErrorCode::OracleMismatch, "correlation data and representation differ in size");
  std::vector<Eigen::MatrixXcd> gammas;
  for (const auto& m : data.majorana) gammas.push_back(rep.B(m));

  const int dim = rep.dim();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  const unsigned subsets = 1u << (2 * nu);
  for (unsigned mask = 0; mask < subsets; ++mask) {
    if (std::popcount(mask) % 2 == 1) continue;
    std::vector<int> s;
    for (int i = 0; i < 2 * nu; ++i)
      if (mask & (1u << i)) s.push_back(i);
    const C w = omega_monomial(data, s);
    if (w == C(0.0)) continue;
    acc += w * ordered_product(gammas, mask, dim).adjoint();
  }
  ReducedDensity r;
  r.matrix = acc / static_cast<double>(dim);
  r.trace = r.matrix.trace().real();
  r.hermiticity_defect = max_abs(r.matrix - r.matrix.adjoint());
  const Eigen::MatrixXcd h = 0.5 * (r.matrix + r.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  r.spectrum.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  r.entropy = shannon_entropy(r.spectrum);
  return r;
}

std::vector<double> skew_canonical_lambdas(const CorrelationData& data) {
  const Eigen::MatrixXd xi = data.xi();
  const Eigen::MatrixXcd h = C(0.0, 1.0) * xi.cast<C>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  SpectrumReport rep = pair_spectrum(std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()));
  for (double& l : rep.lambdas) l *= 2.0;
  return rep.lambdas;
}

double CheckReport::max() const {
  double m = 0.0;
  for (const auto& [name, r] : residuals) m = std::max(m, r);
  return m;
}

void CheckReport::add(const std::string& name, double r) {
  for (auto& [n, v] : residuals)
    if (n == name) {
      v = std::max(v, r);
      return;
    }
  residuals.emplace_back(name, r);
}

std::vector<Eigen::MatrixXcd> site_matrix_units(const FockRep& rep, const FermiFamilyPhase& phase, int site) {
  const auto q = fermi_family(rep.nu(), phase);
  Eigen::MatrixXcd s = rep.identity();
  for (int j = 0; j < site; ++j) {
    const Eigen::MatrixXcd b = rep.B(q[static_cast<std::size_t>(j)]);
    s = s * (2.0 * b.adjoint() * b - rep.identity());
  }
  const Eigen::MatrixXcd b = rep.B(q[static_cast<std::size_t>(site)]);
  const Eigen::MatrixXcd bs = b.adjoint();
  // Order: e11, e12, e21, e22.
  return {bs * b, s * bs, s * b, b * bs};
}

Eigen::MatrixXcd matrix_unit(const FockRep& rep, const FermiFamilyPhase& phase, const std::vector<int>& a,
                             const std::vector<int>& b) {
  Eigen::MatrixXcd e = rep.identity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto units = site_matrix_units(rep, phase, static_cast<int>(i));
    e = e * units[static_cast<std::size_t>(2 * a[i] + b[i])];
  }
  return e;
}

CheckReport matrix_units(const FockRep& rep, const FermiFamilyPhase& phase) {
  const int nu = rep.nu();
  if (nu > 4) throw Error(ErrorCode::TooLarge, fmt::format("matrix-unit audit is limited to 4 sites, got {}", nu));
  CheckReport report;
  std::vector<std::vector<Eigen::MatrixXcd>> units;
  for (int i = 0; i < nu; ++i) units.push_back(site_matrix_units(rep, phase, i));
  auto unit = [&](int i, int a, int b) -> const Eigen::MatrixXcd& {
    return units[static_cast<std::size_t>(i)][static_cast<std::size_t>(2 * a + b)];
  };

  for (int i = 0; i < nu; ++i) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        report.add("site_adjoint", max_abs(unit(i, a, b).adjoint() - unit(i, b, a)));
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) {
            const Eigen::MatrixXcd expect = b == c ? unit(i, a, d) : Eigen::MatrixXcd::Zero(rep.dim(), rep.dim());
            report.add("site_product", max_abs(unit(i, a, b) * unit(i, c, d) - expect));
            for (int j = 0; j < nu; ++j) {
              if (j == i) continue;
              report.add("commutation", max_abs(unit(i, a, b) * unit(j, c, d) - unit(j, c, d) * unit(i, a, b)));
            }
          }
      }
    report.add("site_completeness", max_abs(unit(i, 0, 0) + unit(i, 1, 1) - rep.identity()));
  }

  for (int n = 1; n <= nu; ++n) {
    const int words = 1 << n;
    std::vector<Eigen::MatrixXcd> e(static_cast<std::size_t>(words * words));
    for (int a = 0; a < words; ++a)
      for (int b = 0; b < words; ++b) {
        Eigen::MatrixXcd m = rep.identity();
        for (int i = 0; i < n; ++i) m = m * unit(i, (a >> i) & 1, (b >> i) & 1);
        e[static_cast<std::size_t>(a * words + b)] = std::move(m);
      }
    auto at = [&](int a, int b) -> const Eigen::MatrixXcd& { return e[static_cast<std::size_t>(a * words + b)]; };
    Eigen::MatrixXcd diag_sum = Eigen::MatrixXcd::Zero(rep.dim(), rep.dim());
    const double trace_unit = std::ldexp(1.0, nu - n);
    for (int a = 0; a < words; ++a) {
      diag_sum += at(a, a);
      for (int b = 0; b < words; ++b) {
        report.add("word_adjoint", max_abs(at(a, b).adjoint() - at(b, a)));
        report.add("word_trace", std::abs(at(a, b).trace() - (a == b ? trace_unit : 0.0)));
        for (int c = 0; c < words; ++c)
          for (int d = 0; d < words; ++d) {
            const double r = b == c ? max_abs(at(a, b) * at(c, d) - at(a, d)) : max_abs(at(a, b) * at(c, d));
            report.add("word_product", r);
          }
      }
    }
    report.add("word_completeness", max_abs(diag_sum - rep.identity()));
  }
  for (const auto& [name, r] : report.residuals)
    if (r > kAxiomTolerance)
      throw Error(ErrorCode::AxiomViolation, fmt::format("matrix-unit relation {} fails with residual {:.3e}", name, r));
  return report;
}

double factorization_check(const FockRep& rep, const CorrelationData& data, const FermiFamilyPhase& phase) {
  const ReducedDensity rd = reduced_density_matrix(rep, data);
  const int nu = rep.nu();
  std::vector<std::vector<Eigen::MatrixXcd>> units;
  for (int i = 0; i < nu; ++i) units.push_back(site_matrix_units(rep, phase, i));
  auto state = [&](const Eigen::MatrixXcd& a) { return (rd.matrix * a).trace(); };
  std::vector<std::array<C, 2>> diag(static_cast<std::size_t>(nu));
  for (int i = 0; i < nu; ++i)
    for (int a = 0; a < 2; ++a) diag[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] = state(units[static_cast<std::size_t>(i)][static_cast<std::size_t>(3 * a)]);
  const int words = 1 << nu;
  double worst = 0.0;
  for (int a = 0; a < words; ++a)
    for (int b = 0; b < words; ++b) {
      Eigen::MatrixXcd e = rep.identity();
      C product = 1.0;
      for (int i = 0; i < nu; ++i) {
        const int ai = (a >> i) & 1;
        e = e * units[static_cast<std::size_t>(i)][static_cast<std::size_t>(2 * ai + ((b >> i) & 1))];
        product *= diag[static_cast<std::size_t>(i)][static_cast<std::size_t>(ai)];
      }
      worst = std::max(worst, std::abs(state(e) - (a == b ? product : C(0.0))));
    }
  return worst;
}

CheckReport car_check(const FockRep& rep, const std::vector<Eigen::VectorXcd>& vectors, const FermiFamilyPhase& phase) {
  CheckReport report;
  const int nu = rep.nu();
  const Eigen::MatrixXcd& id = rep.identity();
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nu; ++j) {
      const auto& ci = rep.c(i);
      const auto& cj = rep.c(j);
      report.add("car_annihilators", max_abs(ci * cj + cj * ci));
      report.add("car_mixed", max_abs(ci * cj.adjoint() + cj.adjoint() * ci - (i == j ? id : Eigen::MatrixXcd::Zero(id.rows(), id.cols()))));
    }
  for (const auto& f : vectors) {
    const Eigen::MatrixXcd bf = rep.B(f);
    report.add("selfdual_adjoint", max_abs(bf.adjoint() - rep.B(J(f))));
    report.add("araki_norm", std::fabs(operator_norm(bf) - araki_norm(f)));
    for (const auto& g : vectors) {
      const Eigen::MatrixXcd bg = rep.B(g);
      report.add("selfdual_car", max_abs(bf.adjoint() * bg + bg * bf.adjoint() - f.dot(g) * id));
    }
  }
  const auto m = majorana_family(fermi_family(nu, phase));
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Eigen::MatrixXcd gi = rep.B(m[i]);
    report.add("majorana_selfadjoint", max_abs(gi - gi.adjoint()));
    report.add("majorana_vectors", std::abs(J(m[i]).dot(J(m[i])) - m[i].dot(m[i])) + max_abs(J(m[i]) - m[i]));
    for (std::size_t j = 0; j < m.size(); ++j) {
      const Eigen::MatrixXcd gj = rep.B(m[j]);
      report.add("majorana_car", max_abs(gi * gj + gj * gi - (i == j ? 2.0 : 0.0) * id));
    }
  }
  return report;
}

}  // namespace entroscale
